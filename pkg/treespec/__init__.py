"""
treespec: partial wreath powers of the symmetric inverse monoid IS_2 acting on
the binary rooted tree, with their action matrices, spectra and rank statistics.
"""
import sys

# Element counts reach 2^(2^21) at n=20; printing them needs unlimited int digits.
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

from .base_agent import BaseAgent
from .base_i2 import EMPTY_I2, IDENTITY_I2, TRANSPOSITION_I2, I2Element, compose_i2, enumerate_i2, inverse_i2
from .convergence_agent import ConvergenceAgent
from .enumeration_agent import EnumerationAgent
from .errors import CapExceededError, ElementFormatError
from .sampling import sample_batch, sample_rng, sample_uniform
from .sampling_agent import SamplingAgent
from .serialization import dump_element, element_from_json, element_to_json, parse_element
from .spectral import (
    SpectralMeasure,
    TestFunction,
    cycle_decomposition,
    eigenvalues_dense_oracle,
    integrate,
    moment,
    spectral_measure,
    surviving_set,
    ultimate_rank,
)
from .spectrum_agent import SpectrumAgent
from .statistics import convergence_experiment, p_estimate, totals_exact, verify_suite
from .tree_action import ActionMatrix, PartialTreeAutomorphism, action_matrix, leaf_action, to_tree_automorphism
from .verification_agent import VerificationAgent
from .workflow_manager import WorkflowManager
from .wreath import (
    WreathElement,
    compose,
    count_elements,
    enumerate_elements,
    identity,
    inverse,
    is_idempotent,
    rank_leaf,
)

__all__ = [
    "BaseAgent",
    "EnumerationAgent",
    "SamplingAgent",
    "SpectrumAgent",
    "VerificationAgent",
    "ConvergenceAgent",
    "WorkflowManager",
    "CapExceededError",
    "ElementFormatError",
    "I2Element",
    "IDENTITY_I2",
    "TRANSPOSITION_I2",
    "EMPTY_I2",
    "compose_i2",
    "inverse_i2",
    "enumerate_i2",
    "WreathElement",
    "compose",
    "inverse",
    "identity",
    "is_idempotent",
    "count_elements",
    "enumerate_elements",
    "rank_leaf",
    "sample_rng",
    "sample_uniform",
    "sample_batch",
    "PartialTreeAutomorphism",
    "ActionMatrix",
    "to_tree_automorphism",
    "leaf_action",
    "action_matrix",
    "SpectralMeasure",
    "TestFunction",
    "surviving_set",
    "cycle_decomposition",
    "ultimate_rank",
    "spectral_measure",
    "moment",
    "integrate",
    "eigenvalues_dense_oracle",
    "totals_exact",
    "p_estimate",
    "convergence_experiment",
    "verify_suite",
    "element_to_json",
    "element_from_json",
    "parse_element",
    "dump_element",
]
