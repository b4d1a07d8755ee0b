"""
Base Agent Class for the toolkit's workloads
"""
from abc import ABC, abstractmethod
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Dict, List, Optional
import asyncio
import logging

logger = logging.getLogger(__name__)


class BaseAgent(ABC):
    """Base class for all agents of the toolkit."""

    def __init__(self, name: str, config: Optional[Dict[str, Any]] = None):
        """
        Initialize the base agent.

        Args:
            name: Name of the agent
            config: This agent's section of config.json
        """
        self.name = name
        self.config = config or {}
        self.logger = logging.getLogger(f"{__name__}.{name}")

    @abstractmethod
    async def execute(self, query: Dict[str, Any]) -> Dict[str, Any]:
        """
        Execute the agent's main task.

        Args:
            query: Input query containing parameters for the agent

        Returns:
            Dictionary with a "success" flag, the results, and "error" on failure
        """
        pass

    def validate_input(self, query: Dict[str, Any], required_fields: list) -> bool:
        """
        Validate that required fields are present in the query.

        Args:
            query: Input query dictionary
            required_fields: List of required field names

        Returns:
            True if all required fields are present, False otherwise
        """
        missing_fields = [field for field in required_fields if field not in query]
        if missing_fields:
            self.logger.warning(f"Missing required fields: {missing_fields}")
            return False
        return True

    def failure(self, message: str, **extra: Any) -> Dict[str, Any]:
        """Build the standard failure result."""
        self.logger.error(message)
        result = {"success": False, "error": message}
        result.update(extra)
        return result

    def log_result(self, result: Dict[str, Any]) -> None:
        """Log the agent's result for debugging."""
        self.logger.info(f"{self.name} completed execution")
        self.logger.debug(f"Result: {result}")

    async def map_chunks(self, func: Callable[..., List[Any]], total: int, workers: int, *args: Any) -> List[Any]:
        """
        Run ``func(*args, start, stop)`` over contiguous index ranges covering 0..total-1.

        Chunks run in a process pool when workers > 1; results are concatenated
        in index order, so the output does not depend on the worker count.

        Args:
            func: Module-level function returning one list entry per index
            total: Number of indices
            workers: Number of worker processes
            *args: Leading arguments passed to every chunk

        Returns:
            Concatenated results for indices 0..total-1
        """
        if workers <= 1 or total < 2:
            return func(*args, 0, total)
        bounds = [total * k // workers for k in range(workers + 1)]
        loop = asyncio.get_running_loop()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            tasks = [
                loop.run_in_executor(pool, func, *args, start, stop)
                for start, stop in zip(bounds, bounds[1:])
                if stop > start
            ]
            chunks = await asyncio.gather(*tasks)
        self.logger.debug(f"Collected {len(chunks)} chunks from {workers} workers")
        return [item for chunk in chunks for item in chunk]
