"""
Enumeration Agent
Counts the elements of P_n and lists them in canonical order.
"""
from typing import Any, Dict, Optional
import logging

from .base_agent import BaseAgent
from .errors import CapExceededError, describe_count
from .serialization import element_to_json
from .wreath import (
    DEFAULT_ENUMERATION_CAP,
    count_elements,
    count_elements_closed_form,
    count_elements_recursive,
    count_units,
    enumerate_elements,
)

logger = logging.getLogger(__name__)


class EnumerationAgent(BaseAgent):
    """Agent responsible for counting and listing partial wreath power elements."""

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        """
        Initialize the Enumeration Agent.

        Args:
            config: Configuration dictionary with the enumeration cap
        """
        super().__init__("EnumerationAgent", config)
        self.enumeration_cap = self.config.get("enumeration_cap", DEFAULT_ENUMERATION_CAP)

    async def execute(self, query: Dict[str, Any]) -> Dict[str, Any]:
        """
        Count P_n and optionally list it.

        Args:
            query: Dictionary containing:
                - n: Level (required)
                - list_elements: Whether to list every element (default: False)
                - cap: Override of the configured enumeration cap (optional)

        Returns:
            Dictionary containing:
                - success: Boolean indicating success
                - n: Level
                - count: N_n (closed form, checked against the recursion)
                - units: Number of full automorphisms
                - elements: Element JSON list (when listed)
        """
        if not self.validate_input(query, ["n"]):
            return self.failure("Missing required field: n")

        n = query["n"]
        cap = query.get("cap") or self.enumeration_cap
        if not isinstance(n, int) or n < 1:
            return self.failure(f"n must be a positive integer, got {n!r}")

        try:
            result = {
                "success": True,
                "n": n,
                "count": count_elements(n),
                "count_closed_form": count_elements_closed_form(n),
                "count_recursive": count_elements_recursive(n),
                "units": count_units(n),
            }
            if query.get("list_elements", False):
                self.logger.info(f"Listing all {describe_count(result['count'])} elements of P_{n}")
                elements = [element_to_json(x) for x in enumerate_elements(n, cap)]
                if len(elements) != result["count"]:
                    return self.failure(f"Enumeration produced {len(elements)} elements, expected {result['count']}")
                result["elements"] = elements

            self.log_result({
                "n": n,
                "count": describe_count(result["count"]),
                "units": describe_count(result["units"]),
            })
            return result

        except CapExceededError as e:
            return self.failure(str(e), n=n, cap=e.cap, would_produce=e.would_produce)
        except Exception as e:
            action = "enumerating" if query.get("list_elements", False) else "counting"
            return self.failure(f"Error {action} P_{n}: {e}")
