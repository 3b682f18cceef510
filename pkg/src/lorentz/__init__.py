"""Lorentz-space functionals on piecewise-monomial functions.

Exact quasi-norms, maximal norms, dual norms, level functions and
decomposition certificates on the half line, together with a seeded
verification suite for the sharp constants relating them.
"""

from .functions import (
    FunctionFormatError,
    MaximalFunction,
    MonomialFunction,
    PrecedenceCheck,
    RunningIntegral,
    StepFunction,
    discretize,
    equal_functions,
    function_from_json,
    function_to_json,
    integral,
    is_nonincreasing,
    maximal_function,
    pairing_integral,
    precedes,
    rearrange,
)
from .norms import (
    Exponents,
    NormValue,
    NotInLorentzSpace,
    cross_index_check,
    holder_pairing,
    lorentz_norm,
    maximal_norm,
    norm_limit_check,
)
from .level import LevelResult, d7_bracket, level_function, verify_level
from .duality import DualResult, dual_norm, dual_oracle, equality_diagnosis
from .decomposition import (
    DecompositionCertificate,
    ShuffleInstance,
    ShuffleResult,
    char_decomposition,
    epsilon_decomposition,
    matrix_shuffle,
    minkowski_check,
    triangle_check,
)

__version__ = "0.1.0"

__all__ = [
    "FunctionFormatError",
    "MaximalFunction",
    "MonomialFunction",
    "PrecedenceCheck",
    "RunningIntegral",
    "StepFunction",
    "discretize",
    "equal_functions",
    "function_from_json",
    "function_to_json",
    "integral",
    "is_nonincreasing",
    "maximal_function",
    "pairing_integral",
    "precedes",
    "rearrange",
    "Exponents",
    "NormValue",
    "NotInLorentzSpace",
    "cross_index_check",
    "holder_pairing",
    "lorentz_norm",
    "maximal_norm",
    "norm_limit_check",
    "LevelResult",
    "d7_bracket",
    "level_function",
    "verify_level",
    "DualResult",
    "dual_norm",
    "dual_oracle",
    "equality_diagnosis",
    "DecompositionCertificate",
    "ShuffleInstance",
    "ShuffleResult",
    "char_decomposition",
    "epsilon_decomposition",
    "matrix_shuffle",
    "minkowski_check",
    "triangle_check",
]
