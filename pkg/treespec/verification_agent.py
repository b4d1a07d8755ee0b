"""
Verification Agent
Checks the counting results and rank bounds against exhaustive enumeration.
"""
from typing import Any, Dict, Optional
import logging

from .base_agent import BaseAgent
from .errors import CapExceededError
from .statistics import DEFAULT_EXHAUSTIVE_CAP, verify_suite

logger = logging.getLogger(__name__)


class VerificationAgent(BaseAgent):
    """Agent responsible for the verification suite."""

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        """
        Initialize the Verification Agent.

        Args:
            config: Configuration dictionary with the exhaustive cap and the
                sizes of the dense-oracle comparisons
        """
        super().__init__("VerificationAgent", config)
        self.exhaustive_cap = self.config.get("exhaustive_cap", DEFAULT_EXHAUSTIVE_CAP)
        self.oracle_exhaustive_max_n = self.config.get("oracle_exhaustive_max_n", 2)
        self.oracle_random_samples = self.config.get("oracle_random_samples", 1000)
        self.oracle_random_max_n = self.config.get("oracle_random_max_n", 6)
        self.seed = self.config.get("seed", 0)

    async def execute(self, query: Dict[str, Any]) -> Dict[str, Any]:
        """
        Run the suite up to n_cap.

        Args:
            query: Dictionary containing:
                - n_cap: Largest level checked exhaustively (required)
                - oracle_random_samples: Override of the randomized oracle size (optional)
                - seed: Override of the randomized oracle seed (optional)

        Returns:
            Dictionary containing:
                - success: True when the suite ran (even if claims failed)
                - passed: Whether every claim holds
                - report: Totals, claims and errata
        """
        if not self.validate_input(query, ["n_cap"]):
            return self.failure("Missing required field: n_cap")

        n_cap = query["n_cap"]
        samples = query.get("oracle_random_samples", self.oracle_random_samples)
        seed = query.get("seed", self.seed)

        try:
            self.logger.info(f"Verifying up to n={n_cap} (cap {self.exhaustive_cap})")
            report = verify_suite(
                n_cap,
                exhaustive_cap=self.exhaustive_cap,
                oracle_exhaustive_max_n=self.oracle_exhaustive_max_n,
                oracle_random_samples=samples,
                oracle_random_max_n=self.oracle_random_max_n,
                seed=seed,
            )
            for claim in report.failures:
                self.logger.warning(f"Claim failed: {claim.claim} (expected {claim.expected}, computed {claim.computed})")
            result = {
                "success": True,
                "passed": report.passed,
                "seed": seed,
                "report": report.to_dict(),
            }
            self.log_result({"passed": report.passed, "claims": len(report.claims)})
            return result

        except CapExceededError as e:
            return self.failure(str(e), passed=False, cap=e.cap, would_produce=e.would_produce)
        except Exception as e:
            return self.failure(f"Error running verification: {e}", passed=False)
