import itertools
import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.spatial.distance import pdist

from conftest import X, Y, Z
from superradiance.errors import SizeLimitError, ValidationError
from superradiance.lattice import (
    GEOMETRIES,
    LatticeSpec,
    build_lattice,
    displacement_table,
    main_axis,
    polarization_from_angles,
    unit_cell,
)


def brute_force_pairs(spec):
    """Distinct displacements r_j - r_i (i < j) counted over all ordered pairs, up to sign."""
    pos = build_lattice(spec.with_d(1.0)).positions
    counts = {}
    for i, j in itertools.combinations(range(len(pos)), 2):
        v = np.round(pos[j] - pos[i], 9)
        if tuple(-v) in counts:
            v = -v
        key = tuple(v + 0.0)
        counts[key] = counts.get(key, 0) + 1
    return counts


def table_pairs(spec):
    t = displacement_table(spec.with_d(1.0))
    out = {}
    for vec, m in zip(t.vectors(), t.multiplicities):
        key = tuple(np.round(vec, 9) + 0.0)
        if key not in out and tuple(-np.array(key) + 0.0) in out:
            key = tuple(-np.array(key) + 0.0)
        out[key] = out.get(key, 0) + int(m)
    return out


def test_cube_2x2x2_by_hand():
    t = displacement_table(LatticeSpec.from_geometry("cubic", 2, 0.3))
    assert len(t) == 13
    assert t.pair_count == 28
    assert sorted(t.multiplicities.tolist()) == [1] * 4 + [2] * 6 + [4] * 3


@pytest.mark.parametrize("geometry,n", [("chain", 7), ("square", 4), ("triangular", (3, 4)),
                                        ("rhombic", 3), ("cubic", (2, 3, 2)), ("tetrahedral", 3)])
def test_table_matches_brute_force(geometry, n):
    spec = LatticeSpec.from_geometry(geometry, n, 1.0)
    brute = brute_force_pairs(spec)
    table = table_pairs(spec)
    assert sum(brute.values()) == sum(table.values()) == spec.n_atoms * (spec.n_atoms - 1) // 2
    norm = {}
    for k, v in table.items():
        key = k if k in brute else tuple(-np.array(k) + 0.0)
        norm[key] = norm.get(key, 0) + v
    assert norm == brute


@given(st.lists(st.integers(1, 6), min_size=1, max_size=3))
def test_pair_count_identity(counts):
    dim = len(counts)
    spec = LatticeSpec(dim, tuple(counts), 0.4)
    t = displacement_table(spec)
    n = spec.n_atoms
    assert t.pair_count == n * (n - 1) // 2
    assert np.all(t.multiplicities >= 1)


@pytest.mark.parametrize("geometry", GEOMETRIES)
def test_nearest_neighbour_distance_is_d(geometry):
    d = 0.37
    pos = build_lattice(LatticeSpec.from_geometry(geometry, 4, d)).positions
    assert pdist(pos).min() == pytest.approx(d, rel=1e-12)


@given(st.floats(np.pi / 3, np.pi / 2))
def test_rhombic_min_distance_for_wide_angles(theta):
    spec = LatticeSpec(2, (5, 5), 0.5, lattice_angle=theta)
    assert pdist(build_lattice(spec).positions).min() == pytest.approx(0.5, rel=1e-9)


def test_unit_cells():
    np.testing.assert_allclose(unit_cell(LatticeSpec.from_geometry("chain", 3, 1.0)), [Z])
    tri = unit_cell(LatticeSpec.from_geometry("triangular", 3, 1.0))
    assert tri[0] @ tri[1] == pytest.approx(0.5)
    tet = unit_cell(LatticeSpec.from_geometry("tetrahedral", 3, 1.0))
    gram = tet @ tet.T
    np.testing.assert_allclose(gram, np.full((3, 3), 0.5) + 0.5 * np.eye(3), atol=1e-14)
    axis = main_axis(LatticeSpec.from_geometry("tetrahedral", 3, 1.0))
    assert np.linalg.norm(axis) == pytest.approx(1.0)


def test_validation_and_caps():
    with pytest.raises(ValidationError):
        LatticeSpec.from_geometry("hexagonal", 3, 1.0)
    with pytest.raises(ValidationError):
        LatticeSpec.from_geometry("square", 3, -1.0)
    with pytest.raises(ValidationError):
        LatticeSpec(2, (3,), 1.0)
    with pytest.raises(SizeLimitError):
        build_lattice(LatticeSpec.from_geometry("cubic", 10, 1.0), max_atoms=100)
    with pytest.raises(SizeLimitError):
        displacement_table(LatticeSpec.from_geometry("cubic", 10, 1.0), max_atoms=100)


def test_serialization_round_trip():
    spec = LatticeSpec.from_geometry("rhombic", (3, 2), 0.25)
    blob = json.loads(build_lattice(spec).to_json())
    assert len(blob["positions"]) == 6
    assert LatticeSpec(**blob["spec"]) == spec
    tblob = json.loads(displacement_table(spec).to_json())
    assert sum(e["n_beta"] for e in tblob["entries"]) == 15


def test_polarization_angles():
    np.testing.assert_allclose(polarization_from_angles(0.0).vector, X, atol=1e-15)
    np.testing.assert_allclose(polarization_from_angles(np.pi / 2).vector, Z, atol=1e-15)
    np.testing.assert_allclose(polarization_from_angles(np.pi / 2, np.pi / 2).vector, Y, atol=1e-15)
    circ = polarization_from_angles(np.pi / 2, 0.0, "circular").vector
    np.testing.assert_allclose(circ, (Z + 1j * Y) / np.sqrt(2), atol=1e-15)
    with pytest.raises(ValidationError):
        polarization_from_angles(0.1, kind="elliptic")
