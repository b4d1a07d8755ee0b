"""
Spectrum Agent
Builds the action matrix of one element and reads its spectrum off the cycle structure.
"""
from typing import Any, Dict, Optional
import logging

from .base_agent import BaseAgent
from .errors import CapExceededError, ElementFormatError
from .serialization import element_from_json, matrix_to_json, measure_to_json, parse_element
from .spectral import (
    DEFAULT_ORACLE_MAX_N,
    count_large_eigenvalues,
    cycle_decomposition,
    eigenvalues_dense_oracle,
    match_spectra,
    spectral_measure,
    surviving_set,
)
from .tree_action import action_matrix
from .wreath import rank_leaf

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9
MODES = ("exact", "oracle")


class SpectrumAgent(BaseAgent):
    """Agent responsible for action matrices, ranks and spectral measures."""

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        super().__init__("SpectrumAgent", config)
        self.oracle_max_n = self.config.get("oracle_max_n", DEFAULT_ORACLE_MAX_N)
        self.tolerance = self.config.get("tolerance", DEFAULT_TOLERANCE)
        self.significant_digits = self.config.get("significant_digits", 12)

    async def execute(self, query: Dict[str, Any]) -> Dict[str, Any]:
        """
        Analyse one element.

        Args:
            query: Dictionary containing:
                - element: Element JSON, either decoded or as text (required)
                - n: Level, required when the top map has an empty domain (optional)
                - mode: "exact" (cycle structure) or "oracle" (dense eigensolver too)
                - dense: Include the full 0/1 matrix (default: False)
                - eigenvalues: List the eigenvalues explicitly (default: False)

        Returns:
            Dictionary containing:
                - success: Boolean indicating success
                - n, rank, ultimate_rank: Level and the two ranks
                - matrix: Action matrix JSON
                - measure: Spectral measure JSON
                - surviving_set: Sorted leaves on the cycles
                - oracle: Dense comparison (oracle mode only)
        """
        if not self.validate_input(query, ["element"]):
            return self.failure("Missing required field: element")

        mode = query.get("mode", "exact")
        if mode not in MODES:
            return self.failure(f"Unknown mode {mode!r}; expected one of {list(MODES)}")

        try:
            source = query["element"]
            n = query.get("n")
            x = parse_element(source, n) if isinstance(source, str) else element_from_json(source, n)
            if n is not None and x.level != n:
                return self.failure(f"Element has level {x.level}, expected {n}")

            matrix = action_matrix(x)
            measure = spectral_measure(matrix)
            cycles = cycle_decomposition(matrix)
            list_eigenvalues = query.get("eigenvalues", False) or query.get("dense", False)
            result = {
                "success": True,
                "n": x.level,
                "mode": mode,
                "rank": rank_leaf(x),
                "ultimate_rank": cycles.on_cycles,
                "transient": cycles.transient_count,
                "surviving_set": sorted(surviving_set(matrix)),
                "matrix": matrix_to_json(matrix, dense=query.get("dense", False)),
                "measure": measure_to_json(measure, list_eigenvalues, self.significant_digits),
            }

            if mode == "oracle":
                numeric = eigenvalues_dense_oracle(matrix, self.oracle_max_n)
                large = count_large_eigenvalues(numeric)
                deviation = match_spectra(measure.eigenvalues(), numeric)
                result["oracle"] = {
                    "large_eigenvalues": large,
                    "max_deviation": deviation,
                    "within_tolerance": deviation <= self.tolerance,
                    "count_matches": large == cycles.on_cycles,
                }
                if large != cycles.on_cycles:
                    self.logger.warning(
                        f"Dense oracle counts {large} eigenvalues above 1/2, ultimate rank is {cycles.on_cycles}"
                    )

            self.log_result(result)
            return result

        except ElementFormatError as e:
            return self.failure(str(e), path=e.path)
        except CapExceededError as e:
            return self.failure(str(e), cap=e.cap)
        except Exception as e:
            return self.failure(f"Error analysing element: {e}")
