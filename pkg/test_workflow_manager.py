"""
Test Suite for the Workflow Manager and its agents
"""
import asyncio
import json
import logging

from treespec import WorkflowManager
from treespec.enumeration_agent import EnumerationAgent
from treespec.sampling_agent import SamplingAgent
from treespec.serialization import element_from_json

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)

EXAMPLE_1 = {"a": [2, 1], "children": {"1": [1, 2], "2": [0, 0]}}


def load_test_config():
    with open("config.json", "r") as f:
        return json.load(f)


def test_config_file_builds_every_agent():
    manager = WorkflowManager(load_test_config())
    assert manager.enumeration_agent.enumeration_cap == 3
    assert manager.sampling_agent.exact_sampling_limit == 16
    assert manager.verification_agent.oracle_random_samples == 1000
    assert manager.convergence_agent.sampling_limit == 16


def test_missing_config_file_falls_back_to_defaults(tmp_path):
    manager = WorkflowManager(config_path=str(tmp_path / "absent.json"))
    assert manager.config == {}
    assert manager.enumeration_agent.enumeration_cap == 3


def test_count():
    result = asyncio.run(WorkflowManager({}).count_only(3))
    assert result["success"]
    assert result["count"] == 32767
    assert result["units"] == 128
    assert "elements" not in result


def test_count_beyond_the_default_digit_limit():
    result = asyncio.run(WorkflowManager({}).count_only(13))
    assert result["success"], result.get("error")
    assert result["count"] == 2 ** (2 ** 14 - 1) - 1
    assert str(result["count"]).endswith("7")


def test_enumeration_lists_elements():
    result = asyncio.run(WorkflowManager({}).count_only(2, list_elements=True))
    assert result["success"]
    assert len(result["elements"]) == 127
    assert result["elements"][0] == {"a": [1, 2], "children": {"1": [1, 2], "2": [1, 2]}}


def test_enumeration_refused_above_cap():
    result = asyncio.run(WorkflowManager({}).count_only(4, list_elements=True))
    assert not result["success"]
    assert "n<=3" in result["error"]
    assert result["would_produce"] == 2 ** 31 - 1


def test_agents_report_missing_fields():
    assert not asyncio.run(EnumerationAgent().execute({}))["success"]
    result = asyncio.run(SamplingAgent().execute({"count": 3}))
    assert not result["success"]
    assert result["samples"] == []


def test_sampling_is_reproducible_and_worker_independent():
    manager = WorkflowManager({})
    single = asyncio.run(manager.sample_only(3, count=20, seed=42, workers=1))
    again = asyncio.run(manager.sample_only(3, count=20, seed=42, workers=1))
    split = asyncio.run(manager.sample_only(3, count=20, seed=42, workers=3))
    assert single["success"]
    assert single["samples"] == again["samples"] == split["samples"]
    assert all(element_from_json(s, n=3).level == 3 for s in single["samples"])


def test_sampling_refuses_deep_levels_without_approximation():
    manager = WorkflowManager({})
    result = asyncio.run(manager.sample_only(17, count=1))
    assert not result["success"]
    assert "n<=16" in result["error"]


def test_sampling_allows_approximation_when_configured():
    manager = WorkflowManager({"agents": {"sampling": {"exact_sampling_limit": 4, "allow_approximate": True}}})
    result = asyncio.run(manager.sample_only(5, count=2))
    assert result["success"]
    assert result["approximate"] is True


def test_spectrum_of_example():
    result = asyncio.run(WorkflowManager({}).spectrum_only(EXAMPLE_1, dense=True))
    assert result["success"]
    assert result["n"] == 2
    assert result["rank"] == 2
    assert result["ultimate_rank"] == 0
    assert result["surviving_set"] == []
    assert result["matrix"]["rows"] == [3, 4, 0, 0]
    assert result["matrix"]["dense"] == [[0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]]
    assert result["measure"]["zeros"] == 4
    assert result["measure"]["eigenvalues"] == [[0.0, 0.0]] * 4


def test_spectrum_oracle_mode():
    identity_3 = json.dumps({"a": [1, 2], "children": {
        "1": {"a": [1, 2], "children": {"1": [1, 2], "2": [1, 2]}},
        "2": {"a": [1, 2], "children": {"1": [1, 2], "2": [1, 2]}},
    }})
    result = asyncio.run(WorkflowManager({}).spectrum_only(identity_3, mode="oracle"))
    assert result["success"]
    assert result["ultimate_rank"] == 8
    assert result["oracle"]["large_eigenvalues"] == 8
    assert result["oracle"]["count_matches"]
    assert result["oracle"]["within_tolerance"]


def test_spectrum_reports_malformed_elements():
    bad = {"a": [2, 1], "children": {"1": [1, 2], "2": [3, 0]}}
    result = asyncio.run(WorkflowManager({}).spectrum_only(bad))
    assert not result["success"]
    assert result["path"] == "$.children.2[0]"
    assert not asyncio.run(WorkflowManager({}).spectrum_only(EXAMPLE_1, mode="fast"))["success"]


def test_verification():
    manager = WorkflowManager({})
    result = asyncio.run(manager.verify_only(2, oracle_random_samples=0))
    assert result["success"]
    assert result["passed"]
    assert result["report"]["totals"][1]["total_ultimate_rank"] == 136


def test_verification_refused_above_cap():
    result = asyncio.run(WorkflowManager({}).verify_only(5))
    assert not result["success"]
    assert result["passed"] is False


def test_convergence_is_worker_independent():
    manager = WorkflowManager({})
    single = asyncio.run(manager.converge_only(1, 3, 120, seed=9))
    split = asyncio.run(manager.converge_only(1, 3, 120, seed=9, workers=2))
    assert single["success"]
    assert single["csv"] == split["csv"]
    assert single["run"] == "seed=9 samples=120 levels=1..3"
    lines = single["csv"].splitlines()
    assert lines[0].startswith("n,samples,mean_norm_ult_rank")
    assert len(lines) == 4
    assert len(single["rows"]) == 3


def test_convergence_refuses_deep_levels():
    result = asyncio.run(WorkflowManager({}).converge_only(1, 20, 10))
    assert not result["success"]
    unknown = asyncio.run(WorkflowManager({}).converge_only(1, 2, 10, extra_functions=["cos"]))
    assert not unknown["success"]


def test_complete_workflow():
    manager = WorkflowManager({"agents": {"verification": {"oracle_random_samples": 0}}})
    result = asyncio.run(manager.execute_workflow({"n_cap": 2, "n_min": 1, "n_max": 2, "samples": 100, "seed": 3}))
    assert result["success"]
    assert result["passed"]
    assert set(result["workflow_steps"]) == {"verification", "convergence"}
    assert result["run"].startswith("seed=3")
    assert result["csv"].startswith("n,samples,")
