"""Generalized Cantor sets, hyperbolic length bounds on their complements and
a three-valued quasiconformal-equivalence classifier."""

from .bounds import GeodesicIndex, LengthBounds, kinjo_upper, length_bounds, length_lower, uniform_upper
from .cantor import CantorLevel, build_level, gap_length, interval_length, verify_formulas
from .equivalence import Asymptotic, Basis, Outcome, Verdict, classify, family_omega, pairwise_matrix
from .ergodic import CylinderSet, sample_batch, shift_preservation_test, volume_experiment
from .numeric import get_precision, precision, set_precision
from .rings import mod_teich_oracle, mod_upper_chain, psi_bounds, ring_params, teich_reduce
from .sequences import Constant, Explicit, GeometricExp, OmegaSequence, PowerExp, parse_literal

__version__ = "0.1.0"
