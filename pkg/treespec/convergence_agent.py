"""
Convergence Agent
Runs the eigenvalue-distribution experiment over a range of levels and renders it as CSV.
"""
from typing import Any, Dict, List, Optional
import logging

from .base_agent import BaseAgent
from .errors import CapExceededError
from .spectral import STANDARD_TEST_FUNCTIONS, SpectralMeasure
from .statistics import default_test_functions, rows_to_csv, sample_measures, summarize_measures

logger = logging.getLogger(__name__)

DEFAULT_SAMPLING_LIMIT = 16


def _measure_chunk(n: int, seed: int, approximate: bool, start: int, stop: int) -> List[SpectralMeasure]:
    return sample_measures(n, seed, start, stop, approximate)


class ConvergenceAgent(BaseAgent):
    """Agent responsible for the convergence experiment."""

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        """
        Initialize the Convergence Agent.

        Args:
            config: Configuration dictionary with the largest sampled level,
                the worker count and the number of significant digits
        """
        super().__init__("ConvergenceAgent", config)
        self.sampling_limit = self.config.get("sampling_limit", DEFAULT_SAMPLING_LIMIT)
        self.workers = self.config.get("workers", 1)
        self.significant_digits = self.config.get("significant_digits", 12)

    async def execute(self, query: Dict[str, Any]) -> Dict[str, Any]:
        """
        Sample every level n_min..n_max with the same seed and summarise.

        Args:
            query: Dictionary containing:
                - n_min: Smallest level (default: 1)
                - n_max: Largest level (required)
                - samples: Samples per level (default: 10000)
                - seed: Nonnegative 64-bit seed (default: 0)
                - workers: Override of the configured worker count (optional)
                - extra_functions: Names of further test functions for extra CSV columns (optional)
                - approximate: Sample with float64 branch probabilities (default: False)

        Returns:
            Dictionary containing:
                - success: Boolean indicating success
                - seed: Seed used
                - rows: One summary per level
                - run: One line naming the seed, sample count and levels
                - csv: The rows in the CSV schema, header first
        """
        if not self.validate_input(query, ["n_max"]):
            return self.failure("Missing required field: n_max", rows=[])

        n_min = query.get("n_min", 1)
        n_max = query["n_max"]
        samples = query.get("samples", 10000)
        seed = query.get("seed", 0)
        workers = query.get("workers") or self.workers
        approximate = query.get("approximate", False)
        extra = list(query.get("extra_functions", []))

        if n_min < 1 or n_max < n_min:
            return self.failure(f"Invalid level range {n_min}..{n_max}", rows=[])
        if samples < 1:
            return self.failure(f"samples must be positive, got {samples}", rows=[])
        unknown = [name for name in extra if name not in STANDARD_TEST_FUNCTIONS]
        if unknown:
            return self.failure(f"Unknown test functions {unknown}; known: {sorted(STANDARD_TEST_FUNCTIONS)}", rows=[])

        try:
            if n_max > self.sampling_limit and not approximate:
                raise CapExceededError("Convergence sampling", n_max, self.sampling_limit)

            functions = default_test_functions()
            functions.update({name: STANDARD_TEST_FUNCTIONS[name] for name in extra})
            rows = []
            for n in range(n_min, n_max + 1):
                self.logger.info(f"Sampling {samples} elements of P_{n} on {workers} worker(s)")
                measures = await self.map_chunks(_measure_chunk, samples, workers, n, seed, approximate)
                rows.append(summarize_measures(n, measures, functions))

            run = f"seed={seed} samples={samples} levels={n_min}..{n_max}"
            if approximate:
                run += " approximate"
            result = {
                "success": True,
                "seed": seed,
                "approximate": approximate,
                "run": run,
                "rows": [row.to_dict(self.significant_digits) for row in rows],
                "csv": rows_to_csv(rows, self.significant_digits, extra),
            }
            self.log_result({"levels": len(rows), "run": run})
            return result

        except CapExceededError as e:
            return self.failure(str(e), rows=[], cap=e.cap)
        except Exception as e:
            return self.failure(f"Error running convergence experiment: {e}", rows=[])
