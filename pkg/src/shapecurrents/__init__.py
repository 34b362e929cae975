"""Shape analysis with de Rham currents on finite-element 1-form bases."""

from .currents import CurrentVector, evaluate_current
from .curve import SampledCurve, load_csv
from .gram import DEFAULT_SIGMA, GramOperator
from .mesh import StructuredMesh
from .metric import distance, dual_norm, representer, whiten
from .space import FormSpace, build_space, space_from_descriptor

__all__ = [
    "CurrentVector", "evaluate_current", "SampledCurve", "load_csv",
    "DEFAULT_SIGMA", "GramOperator", "StructuredMesh", "distance",
    "dual_norm", "representer", "whiten", "FormSpace", "build_space",
    "space_from_descriptor",
]

__version__ = "1.0.0"
