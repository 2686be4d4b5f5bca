"""Minimal conditions for Dicke superradiance in ordered atomic arrays."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConvergenceError,
    DivergenceError,
    FitError,
    NumericalError,
    SingularDisplacementError,
    SizeLimitError,
    ValidationError,
)
from .finite import (  # noqa: E402
    CriticalDistanceResult,
    DecaySummary,
    critical_distance_scan,
    decay_spectrum,
    max_decay_rate,
    variance_dense,
    variance_fast,
)
from .greens import K0, PairRates, Polarization, free_space_green, pair_gamma, pair_interaction  # noqa: E402
from .lattice import (  # noqa: E402
    DisplacementTable,
    Lattice,
    LatticeSpec,
    build_lattice,
    displacement_table,
    polarization_from_angles,
)
