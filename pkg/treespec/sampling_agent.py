"""
Sampling Agent
Draws seeded, exactly uniform samples of P_n.
"""
from typing import Any, Dict, List, Optional
import logging

from .base_agent import BaseAgent
from .errors import CapExceededError
from .sampling import sample_batch
from .serialization import element_to_json

logger = logging.getLogger(__name__)

DEFAULT_EXACT_SAMPLING_LIMIT = 16


def _sample_chunk(n: int, seed: int, approximate: bool, start: int, stop: int) -> List[Any]:
    return [element_to_json(x) for x in sample_batch(n, stop - start, seed, start, approximate)]


class SamplingAgent(BaseAgent):
    """Agent responsible for uniform random sampling of P_n."""

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        """
        Initialize the Sampling Agent.

        Args:
            config: Configuration dictionary with the exact sampling limit
                and whether float-approximate sampling may be used
        """
        super().__init__("SamplingAgent", config)
        self.exact_sampling_limit = self.config.get("exact_sampling_limit", DEFAULT_EXACT_SAMPLING_LIMIT)
        self.allow_approximate = self.config.get("allow_approximate", False)

    def resolve_mode(self, n: int, approximate: bool) -> bool:
        """
        Decide whether level n is sampled approximately.

        Raises:
            CapExceededError: If n is above the exact limit and approximation is not allowed
        """
        if approximate or n > self.exact_sampling_limit:
            if not (approximate or self.allow_approximate):
                raise CapExceededError("Exact sampling", n, self.exact_sampling_limit)
            self.logger.warning(
                f"Sampling P_{n} with float64 branch probabilities; "
                "the distribution is only approximately uniform"
            )
            return True
        return False

    async def execute(self, query: Dict[str, Any]) -> Dict[str, Any]:
        """
        Draw samples number 0..count-1 of the stream ``seed``.

        Args:
            query: Dictionary containing:
                - n: Level (required)
                - count: Number of samples (default: 1)
                - seed: Nonnegative 64-bit seed (default: 0)
                - workers: Worker processes (default: 1)
                - approximate: Force float-approximate sampling (default: False)

        Returns:
            Dictionary containing:
                - success: Boolean indicating success
                - n, seed, count, approximate: Echo of the parameters
                - samples: Element JSON list in sample order
        """
        if not self.validate_input(query, ["n"]):
            return self.failure("Missing required field: n", samples=[])

        n = query["n"]
        count = query.get("count", 1)
        seed = query.get("seed", 0)
        workers = query.get("workers", 1)
        if not isinstance(n, int) or n < 1:
            return self.failure(f"n must be a positive integer, got {n!r}", samples=[])
        if count < 0 or not 0 <= seed < 1 << 64:
            return self.failure("count must be nonnegative and seed a 64-bit unsigned integer", samples=[])

        try:
            approximate = self.resolve_mode(n, query.get("approximate", False))
            self.logger.info(f"Sampling {count} elements of P_{n} with seed {seed}")
            samples = await self.map_chunks(_sample_chunk, count, workers, n, seed, approximate)
            result = {
                "success": True,
                "n": n,
                "seed": seed,
                "count": count,
                "approximate": approximate,
                "samples": samples,
            }
            self.log_result({k: v for k, v in result.items() if k != "samples"})
            return result

        except CapExceededError as e:
            return self.failure(str(e), samples=[], cap=e.cap)
        except Exception as e:
            return self.failure(f"Error sampling P_{n}: {e}", samples=[])
