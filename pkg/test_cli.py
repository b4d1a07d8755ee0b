"""
Tests for the command-line front end
"""
from collections import Counter
import json

import pytest

from treespec.cli import EXIT_CLAIM_FAILED, EXIT_OK, EXIT_REFUSED, main
from treespec.serialization import element_from_json

EXAMPLE_1 = '{"a":[2,1],"children":{"1":[1,2],"2":[0,0]}}'


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_count(capsys):
    code, out, _ = run(capsys, "count", "--n", "3")
    assert code == EXIT_OK
    assert out == "32767\n"


def test_count_prints_counts_beyond_the_default_digit_limit(capsys):
    code, out, err = run(capsys, "count", "--n", "13")
    assert code == EXIT_OK, err
    assert out == f"{2 ** (2 ** 14 - 1) - 1}\n"


@pytest.mark.slow
def test_count_at_level_twenty(capsys):
    code, out, err = run(capsys, "count", "--n", "20", "--format", "json")
    assert code == EXIT_OK, err
    assert json.loads(out)["count"] == 2 ** (2 ** 21 - 1) - 1


def test_count_json(capsys):
    code, out, _ = run(capsys, "count", "--n", "2", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["count"] == 127


def test_spectrum_dense_example(capsys):
    code, out, _ = run(capsys, "spectrum", "--dense", "--element", EXAMPLE_1)
    assert code == EXIT_OK
    result = json.loads(out)
    assert result["matrix"]["dense"] == [[0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]]
    assert result["measure"]["eigenvalues"] == [[0.0, 0.0]] * 4


def test_spectrum_from_file(capsys, tmp_path):
    path = tmp_path / "element.json"
    path.write_text(EXAMPLE_1)
    code, out, _ = run(capsys, "spectrum", "--element-file", str(path), "--mode", "oracle")
    assert code == EXIT_OK
    assert json.loads(out)["oracle"]["count_matches"]


def test_spectrum_malformed_element(capsys):
    code, out, err = run(capsys, "spectrum", "--element", '{"a":[2,1],"children":{"1":[1,2],"2":[3,0]}}')
    assert code == EXIT_REFUSED
    assert out == ""
    assert "$.children.2[0]" in err


def test_sample_level_one_is_uniform(capsys):
    code, out, _ = run(capsys, "sample", "--n", "1", "--count", "7000", "--seed", "0")
    assert code == EXIT_OK
    result = json.loads(out)
    assert result["seed"] == 0
    counts = Counter(tuple(s) for s in result["samples"])
    assert len(counts) == 7
    assert all(850 <= c <= 1150 for c in counts.values())


def test_sample_output_is_byte_identical(capsys):
    _, first, _ = run(capsys, "sample", "--n", "3", "--count", "30", "--seed", "12")
    _, second, _ = run(capsys, "sample", "--n", "3", "--count", "30", "--seed", "12", "--workers", "2")
    assert first == second


def test_sample_csv_names_seed(capsys):
    code, out, _ = run(capsys, "sample", "--n", "2", "--count", "3", "--seed", "5", "--format", "csv")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "# n=2 seed=5 count=3"
    assert lines[1] == "index,element"
    assert len(lines) == 5


def test_sample_with_entropy_reports_seed(capsys):
    code, out, _ = run(capsys, "sample", "--n", "2", "--entropy")
    assert code == EXIT_OK
    assert 0 <= json.loads(out)["seed"] < 2 ** 64


def test_enumerate_round_trips(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "2")
    assert code == EXIT_OK
    result = json.loads(out)
    elements = [element_from_json(e, n=2) for e in result["elements"]]
    assert len(set(elements)) == result["count"] == 127


def test_enumerate_refused_above_cap(capsys):
    code, out, err = run(capsys, "enumerate", "--n", "4")
    assert code == EXIT_REFUSED
    assert out == ""
    assert "n<=3" in err


def test_enumerate_refusal_at_level_thirteen(capsys):
    code, out, err = run(capsys, "enumerate", "--n", "13")
    assert code == EXIT_REFUSED
    assert out == ""
    assert "2^16383-1" in err


def test_cap_override_from_config(capsys, tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"agents": {"enumeration": {"enumeration_cap": 1}}}))
    code, _, _ = run(capsys, "--config", str(config), "enumerate", "--n", "2")
    assert code == EXIT_REFUSED
    code, _, _ = run(capsys, "--config", str(config), "enumerate", "--n", "2", "--cap", "2")
    assert code == EXIT_OK


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--n-cap", "2", "--oracle-samples", "0")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["passed"] is True
    assert report["report"]["errata"]


def test_verify_exit_code_on_failed_claim(capsys, monkeypatch):
    from treespec import statistics

    monkeypatch.setattr(statistics, "closed_form_total_rank", lambda n: -1)
    code, out, _ = run(capsys, "verify", "--n-cap", "1", "--oracle-samples", "0")
    assert code == EXIT_CLAIM_FAILED
    assert json.loads(out)["passed"] is False


def test_converge_writes_csv(capsys, tmp_path):
    out_path = tmp_path / "convergence.csv"
    code, out, err = run(
        capsys, "converge", "--n-min", "1", "--n-max", "2", "--samples", "100", "--seed", "4", "--out", str(out_path)
    )
    assert code == EXIT_OK
    assert out == ""
    assert "# seed=4 samples=100 levels=1..2" in err
    lines = out_path.read_text().splitlines()
    assert lines[0] == "n,samples,mean_norm_ult_rank,stderr,mass_at_zero,f_id,f_re_z,f_re_z2,bound"
    assert len(lines) == 3


def test_reproduce(capsys, tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"agents": {"verification": {"oracle_random_samples": 0}}}))
    code, out, _ = run(
        capsys, "--config", str(config), "reproduce", "--n-cap", "2", "--n-max", "2", "--samples", "50", "--format", "json"
    )
    assert code == EXIT_OK
    result = json.loads(out)
    assert result["passed"] is True
    assert len(result["convergence"]) == 2


def test_invalid_seed_rejected(capsys):
    with pytest.raises(SystemExit):
        main(["sample", "--n", "1", "--seed", "-1"])
