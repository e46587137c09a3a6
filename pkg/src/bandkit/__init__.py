"""bandkit: computing with finite bands (idempotent semigroups)."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    BandMap,
    FiniteBand,
    free_band_two,
    generate_subband,
    is_morphism,
    validate_table,
)
from .green import compute_green  # noqa: E402
from .structure import mclean_decompose  # noqa: E402
from .varieties import satisfies_identity, variety_profile  # noqa: E402

__all__ = [
    "BandMap",
    "FiniteBand",
    "compute_green",
    "free_band_two",
    "generate_subband",
    "is_morphism",
    "mclean_decompose",
    "satisfies_identity",
    "validate_table",
    "variety_profile",
]
