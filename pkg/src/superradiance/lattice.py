"""Finite Bravais arrays and their unique-displacement multiplicity tables.

1D chains lie along z, 2D arrays in the y-z plane (normal along x) and 3D
arrays fill space. Positions are in units of the transition wavelength.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import SizeLimitError, ValidationError
from .greens import Polarization

DEFAULT_MAX_ATOMS = 10**7

X_HAT = np.array([1.0, 0.0, 0.0])
Y_HAT = np.array([0.0, 1.0, 0.0])
Z_HAT = np.array([0.0, 0.0, 1.0])

GEOMETRY_ANGLES = {
    "square": np.pi / 2,
    "rhombic": np.deg2rad(75.0),
    "triangular": np.pi / 3,
}
GEOMETRIES = ("chain", "square", "rhombic", "triangular", "cubic", "tetrahedral")
CELLS_3D = ("cubic", "tetrahedral")


@dataclass(frozen=True)
class LatticeSpec:
    dimensionality: int
    counts: tuple
    d: float
    lattice_angle: float = np.pi / 2
    cell_3d: str = "cubic"

    def __post_init__(self):
        counts = tuple(int(c) for c in np.atleast_1d(self.counts))
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "d", float(self.d))
        object.__setattr__(self, "lattice_angle", float(self.lattice_angle))
        if self.dimensionality not in (1, 2, 3):
            raise ValidationError(f"dimensionality must be 1, 2 or 3, got {self.dimensionality}")
        if len(counts) != self.dimensionality:
            raise ValidationError(f"need {self.dimensionality} per-axis counts, got {counts}")
        if any(c < 1 for c in counts):
            raise ValidationError(f"per-axis counts must be >= 1, got {counts}")
        if not (self.d > 0 and np.isfinite(self.d)):
            raise ValidationError(f"spacing d must be positive, got {self.d}")
        if not (0.0 < self.lattice_angle <= np.pi / 2 + 1e-15):
            raise ValidationError("lattice_angle must lie in (0, pi/2]")
        if self.cell_3d not in CELLS_3D:
            raise ValidationError(f"cell_3d must be one of {CELLS_3D}")

    @classmethod
    def from_geometry(cls, geometry: str, n, d: float, lattice_angle: float | None = None):
        """Build a spec from a named preset; ``n`` is atoms per axis or a tuple of counts."""
        if geometry not in GEOMETRIES:
            raise ValidationError(f"unknown geometry {geometry!r}; choose from {GEOMETRIES}")
        dim = 1 if geometry == "chain" else 3 if geometry in CELLS_3D else 2
        counts = tuple(np.atleast_1d(n).astype(int))
        if len(counts) == 1:
            counts = counts * dim
        kwargs = {}
        if dim == 2:
            angle = GEOMETRY_ANGLES[geometry] if lattice_angle is None else lattice_angle
            kwargs["lattice_angle"] = angle
        if dim == 3:
            kwargs["cell_3d"] = geometry
        return cls(dim, counts, d, **kwargs)

    @property
    def n_atoms(self) -> int:
        return int(np.prod(self.counts))

    def with_d(self, d: float) -> "LatticeSpec":
        return LatticeSpec(self.dimensionality, self.counts, d, self.lattice_angle, self.cell_3d)

    @property
    def geometry(self) -> str:
        if self.dimensionality == 1:
            return "chain"
        if self.dimensionality == 3:
            return self.cell_3d
        for name, angle in GEOMETRY_ANGLES.items():
            if np.isclose(angle, self.lattice_angle, rtol=0, atol=1e-12):
                return name
        return "rhombic"

    def to_dict(self) -> dict:
        return {
            "dimensionality": self.dimensionality,
            "counts": list(self.counts),
            "d": self.d,
            "lattice_angle": self.lattice_angle,
            "cell_3d": self.cell_3d,
        }


def unit_cell(spec: LatticeSpec) -> np.ndarray:
    """Primitive vectors for unit spacing, shape (dimensionality, 3)."""
    if spec.dimensionality == 1:
        return Z_HAT[None, :].copy()
    if spec.dimensionality == 2:
        t = spec.lattice_angle
        return np.array([Z_HAT, np.cos(t) * Z_HAT + np.sin(t) * Y_HAT])
    if spec.cell_3d == "cubic":
        return np.array([Z_HAT, Y_HAT, X_HAT])
    # rhombohedral (fcc primitive) cell: 60 degrees between every pair
    return np.array(
        [
            Z_HAT,
            0.5 * Z_HAT + np.sqrt(3.0) / 2.0 * Y_HAT,
            0.5 * Z_HAT + 1.0 / (2.0 * np.sqrt(3.0)) * Y_HAT + np.sqrt(2.0 / 3.0) * X_HAT,
        ]
    )


def main_axis(spec: LatticeSpec) -> np.ndarray:
    """Axis-aligned polarization direction used for 'parallel to a main axis'.

    For the tetrahedral cell this is a cube axis of the conventional fcc cell.
    """
    if spec.dimensionality == 3 and spec.cell_3d == "tetrahedral":
        s1, s2, s3 = unit_cell(spec)
        axis = s2 + s3 - s1
        return axis / np.linalg.norm(axis)
    return Z_HAT.copy()


def plane_normal(spec: LatticeSpec) -> np.ndarray:
    return X_HAT.copy()


def _grid(counts) -> np.ndarray:
    axes = [np.arange(c) for c in counts]
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(counts))


@dataclass(frozen=True)
class Lattice:
    spec: LatticeSpec
    positions: np.ndarray
    unit_vectors: np.ndarray

    @property
    def n_atoms(self) -> int:
        return len(self.positions)

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "unit_vectors": self.unit_vectors.tolist(),
            "positions": self.positions.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def build_lattice(spec: LatticeSpec, max_atoms: int = DEFAULT_MAX_ATOMS) -> Lattice:
    if spec.n_atoms > max_atoms:
        raise SizeLimitError(f"{spec.n_atoms} atoms exceeds cap of {max_atoms}")
    basis = unit_cell(spec) * spec.d
    coeffs = _grid(spec.counts)
    return Lattice(spec=spec, positions=coeffs @ basis, unit_vectors=basis)


@dataclass(frozen=True)
class DisplacementTable:
    """Unique displacement vectors (one per +/- pair) with multiplicities.

    ``unit_vectors`` are the Cartesian displacements at unit spacing, so the
    table serves any ``d`` by rescaling.
    """

    spec: LatticeSpec
    coefficients: np.ndarray
    unit_vectors: np.ndarray
    multiplicities: np.ndarray
    n_atoms: int = field(default=0)

    def __len__(self) -> int:
        return len(self.multiplicities)

    @property
    def d(self) -> float:
        return self.spec.d

    def vectors(self, d: float | None = None) -> np.ndarray:
        return self.unit_vectors * (self.spec.d if d is None else d)

    @property
    def pair_count(self) -> int:
        return int(self.multiplicities.sum())

    def to_dict(self) -> dict:
        s = self.vectors()
        return {
            "spec": self.spec.to_dict(),
            "entries": [
                {"d_beta": c.tolist(), "s_beta": v.tolist(), "n_beta": int(n)}
                for c, v, n in zip(self.coefficients, s, self.multiplicities)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def displacement_table(spec: LatticeSpec, max_atoms: int = DEFAULT_MAX_ATOMS) -> DisplacementTable:
    """Enumerate the distinct displacements of a finite array.

    Equivalent to the corner construction: every integer vector with
    |a_i| < N_i is kept once, choosing the sign that makes its first non-zero
    coefficient positive. A vector spanning |a_i| sites along axis i fits
    prod(N_i - |a_i|) times.
    """
    if spec.n_atoms > max_atoms:
        raise SizeLimitError(f"{spec.n_atoms} atoms exceeds cap of {max_atoms}")
    counts = spec.counts
    axes = [np.arange(0, counts[0])] + [np.arange(-c + 1, c) for c in counts[1:]]
    coeffs = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(counts))
    nonzero = coeffs != 0
    first = np.argmax(nonzero, axis=1)
    keep = nonzero.any(axis=1) & (coeffs[np.arange(len(coeffs)), first] > 0)
    coeffs = coeffs[keep]
    mult = np.prod(np.asarray(counts) - np.abs(coeffs), axis=1).astype(np.int64)
    return DisplacementTable(
        spec=spec,
        coefficients=coeffs,
        unit_vectors=coeffs @ unit_cell(spec),
        multiplicities=mult,
        n_atoms=spec.n_atoms,
    )


def polarization_from_angles(theta: float, phi: float = 0.0, kind: str = "linear",
                             normal=X_HAT) -> Polarization:
    """Polarization at polar angle ``theta`` from the array normal and azimuth ``phi``.

    For the default y-z plane array, theta=0 gives x (out of plane) and
    theta=pi/2, phi=0 gives z. ``kind='circular'`` combines that direction
    with its in-plane perpendicular: (e + i e_perp)/sqrt(2).
    """
    normal = np.asarray(normal, dtype=float)
    normal = normal / np.linalg.norm(normal)
    # in-plane frame (u, v) with u = z for the default normal
    u = Z_HAT if abs(normal @ Z_HAT) < 0.9 else Y_HAT
    u = u - (u @ normal) * normal
    u /= np.linalg.norm(u)
    v = np.cross(normal, u)
    v *= np.sign(v @ Y_HAT) if abs(v @ Y_HAT) > 1e-12 else 1.0
    azim = np.cos(phi) * u + np.sin(phi) * v
    e1 = np.cos(theta) * normal + np.sin(theta) * azim
    if kind == "linear":
        return Polarization.linear(e1)
    if kind == "circular":
        e2 = -np.sin(phi) * u + np.cos(phi) * v
        return Polarization.circular(e1, e2)
    raise ValidationError(f"kind must be 'linear' or 'circular', got {kind!r}")
