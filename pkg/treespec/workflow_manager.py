"""
Centralized Workflow Manager
Builds every agent from config.json and runs the full reproduction pipeline:
verification of the counting results, then the convergence experiment.
"""
import json
import logging
from typing import Any, Dict, List, Optional

from .convergence_agent import ConvergenceAgent
from .enumeration_agent import EnumerationAgent
from .sampling_agent import SamplingAgent
from .spectrum_agent import SpectrumAgent
from .verification_agent import VerificationAgent

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = "config.json"


def load_config(config_path: str = DEFAULT_CONFIG_PATH) -> Dict[str, Any]:
    """Read the configuration file, falling back to defaults when it is missing."""
    try:
        with open(config_path, "r") as f:
            return json.load(f)
    except FileNotFoundError:
        logger.warning(f"{config_path} not found. Using default configuration.")
        return {}


class WorkflowManager:
    """
    Centralized workflow manager that orchestrates all agents.
    """

    def __init__(self, config: Optional[Dict[str, Any]] = None, config_path: str = DEFAULT_CONFIG_PATH):
        """
        Initialize the Workflow Manager with all agents.

        Args:
            config: Configuration dictionary containing agent configurations
            config_path: File read when no configuration is given
        """
        if config is None:
            config = load_config(config_path)

        self.config = config
        agent_configs = config.get("agents", {})

        self.enumeration_agent = EnumerationAgent(agent_configs.get("enumeration", {}))
        self.sampling_agent = SamplingAgent(agent_configs.get("sampling", {}))
        self.spectrum_agent = SpectrumAgent(agent_configs.get("spectrum", {}))
        self.verification_agent = VerificationAgent(agent_configs.get("verification", {}))
        self.convergence_agent = ConvergenceAgent(agent_configs.get("convergence", {}))

        self.logger = logging.getLogger(f"{__name__}.WorkflowManager")

    async def execute_workflow(self, user_query: Dict[str, Any]) -> Dict[str, Any]:
        """
        Execute the complete pipeline: Verify → Converge.

        Args:
            user_query: Dictionary containing:
                - n_cap: Largest level verified exhaustively (default: 3)
                - n_min: Smallest sampled level (default: 1)
                - n_max: Largest sampled level (default: 12)
                - samples: Samples per level (default: 10000)
                - seed: Seed shared by both steps (default: 0)
                - workers: Worker processes for sampling (optional)

        Returns:
            Dictionary containing:
                - success: Boolean indicating overall success
                - passed: Whether every verification claim holds
                - workflow_steps: Results of each step
                - run: Seed, sample count and levels of the convergence run
                - csv: Convergence CSV (if the experiment ran)
                - error: Error message (if failed)
        """
        workflow_result = {
            "success": False,
            "passed": False,
            "workflow_steps": {},
            "run": "",
            "csv": "",
            "error": None,
        }

        try:
            seed = user_query.get("seed", 0)
            self.logger.info(f"Starting reproduction run with seed {seed}")

            self.logger.info("Step 1: Executing Verification Agent")
            verification = await self.verification_agent.execute({
                "n_cap": user_query.get("n_cap", 3),
                "seed": seed,
            })
            workflow_result["workflow_steps"]["verification"] = verification
            if not verification.get("success"):
                workflow_result["error"] = verification.get("error", "Verification failed to run")
                return workflow_result
            workflow_result["passed"] = verification["passed"]
            if not verification["passed"]:
                self.logger.warning("Some claims failed; continuing with the convergence experiment")

            self.logger.info("Step 2: Executing Convergence Agent")
            convergence_query = {
                "n_min": user_query.get("n_min", 1),
                "n_max": user_query.get("n_max", 12),
                "samples": user_query.get("samples", 10000),
                "seed": seed,
            }
            if user_query.get("workers"):
                convergence_query["workers"] = user_query["workers"]
            convergence = await self.convergence_agent.execute(convergence_query)
            workflow_result["workflow_steps"]["convergence"] = convergence
            if not convergence.get("success"):
                workflow_result["error"] = convergence.get("error", "Convergence experiment failed")
                return workflow_result

            workflow_result["success"] = True
            workflow_result["run"] = convergence["run"]
            workflow_result["csv"] = convergence["csv"]
            self.logger.info("Reproduction run completed successfully")
            return workflow_result

        except Exception as e:
            self.logger.error(f"Workflow execution error: {e}", exc_info=True)
            workflow_result["error"] = str(e)
            return workflow_result

    async def count_only(self, n: int, list_elements: bool = False, cap: Optional[int] = None) -> Dict[str, Any]:
        """Execute only the enumeration step."""
        query: Dict[str, Any] = {"n": n, "list_elements": list_elements}
        if cap is not None:
            query["cap"] = cap
        return await self.enumeration_agent.execute(query)

    async def sample_only(
        self,
        n: int,
        count: int = 1,
        seed: int = 0,
        workers: int = 1,
        approximate: bool = False,
    ) -> Dict[str, Any]:
        """Execute only the sampling step."""
        return await self.sampling_agent.execute({
            "n": n,
            "count": count,
            "seed": seed,
            "workers": workers,
            "approximate": approximate,
        })

    async def spectrum_only(
        self,
        element: Any,
        n: Optional[int] = None,
        mode: str = "exact",
        dense: bool = False,
        eigenvalues: bool = False,
    ) -> Dict[str, Any]:
        """
        Execute only the spectrum step.

        Args:
            element: Element JSON, decoded or as text
            n: Level, needed when the top map has an empty domain
            mode: "exact" or "oracle"
            dense: Include the full 0/1 matrix
            eigenvalues: List the eigenvalues explicitly

        Returns:
            Spectrum result dictionary
        """
        query: Dict[str, Any] = {"element": element, "mode": mode, "dense": dense, "eigenvalues": eigenvalues}
        if n is not None:
            query["n"] = n
        return await self.spectrum_agent.execute(query)

    async def verify_only(self, n_cap: int, oracle_random_samples: Optional[int] = None, seed: Optional[int] = None) -> Dict[str, Any]:
        """Execute only the verification step."""
        query: Dict[str, Any] = {"n_cap": n_cap}
        if oracle_random_samples is not None:
            query["oracle_random_samples"] = oracle_random_samples
        if seed is not None:
            query["seed"] = seed
        return await self.verification_agent.execute(query)

    async def converge_only(
        self,
        n_min: int,
        n_max: int,
        samples: int,
        seed: int = 0,
        workers: Optional[int] = None,
        extra_functions: Optional[List[str]] = None,
        approximate: bool = False,
    ) -> Dict[str, Any]:
        """Execute only the convergence experiment."""
        query: Dict[str, Any] = {
            "n_min": n_min,
            "n_max": n_max,
            "samples": samples,
            "seed": seed,
            "extra_functions": extra_functions or [],
            "approximate": approximate,
        }
        if workers:
            query["workers"] = workers
        return await self.convergence_agent.execute(query)
