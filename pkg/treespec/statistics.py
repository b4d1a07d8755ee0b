"""
Rank Statistics
Exact totals over P_n, Monte Carlo estimates of the normalized ultimate rank,
the convergence experiment for the eigenvalue distribution, and the
verification suite for the counting results.
"""
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple
import csv
import io
import logging

import numpy as np

from .base_i2 import IDENTITY_I2, TRANSPOSITION_I2, I2Element, i2_index
from .errors import CapExceededError
from .sampling import sample_levels, sample_rng
from .spectral import (
    ABS_SQUARED,
    IDENTITY_Z,
    REAL_Z,
    REAL_Z_SQUARED,
    SpectralMeasure,
    TestFunction,
    count_large_eigenvalues,
    eigenvalues_dense_oracle,
    integrate,
    spectral_measure,
    ultimate_rank,
)
from .tree_action import action_matrix
from .wreath import (
    DEFAULT_ENUMERATION_CAP,
    compose,
    count_elements,
    count_elements_closed_form,
    count_elements_recursive,
    enumerate_elements,
    rank_leaf,
)

logger = logging.getLogger(__name__)

DEFAULT_EXHAUSTIVE_CAP = DEFAULT_ENUMERATION_CAP
P1 = Fraction(3, 7)
DECAY = Fraction(3, 4)

# Column order of the convergence CSV; the |z|^2 column is mean_norm_ult_rank.
CSV_FUNCTIONS = (("f_id", IDENTITY_Z), ("f_re_z", REAL_Z), ("f_re_z2", REAL_Z_SQUARED))
CSV_HEADER = ["n", "samples", "mean_norm_ult_rank", "stderr", "mass_at_zero", "f_id", "f_re_z", "f_re_z2", "bound"]


def format_decimal(value: Any, digits: int = 12) -> str:
    return f"{float(value):.{digits}g}"


def format_exact(value: Any) -> Any:
    """JSON-friendly exact value: ints stay ints, fractions become 'p/q'."""
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    return value


# Exact totals

@dataclass(frozen=True)
class RankTotals:
    n: int
    element_count: int
    total_rank: int
    total_ultimate_rank: int

    def __post_init__(self):
        if not self.total_ultimate_rank <= self.total_rank <= (1 << self.n) * self.element_count:
            raise ValueError(f"Inconsistent rank totals at n={self.n}")

    @property
    def p(self) -> Fraction:
        """p_n = R_n / (2^n N_n), the mean normalized ultimate rank."""
        return Fraction(self.total_ultimate_rank, (1 << self.n) * self.element_count)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "N_n": self.element_count,
            "total_rank": self.total_rank,
            "total_ultimate_rank": self.total_ultimate_rank,
            "p_n": format_exact(self.p),
        }


@dataclass(frozen=True)
class _ExhaustiveProfile:
    """Per-element data of an exhaustive pass over P_n."""

    n: int
    top_maps: Tuple[int, ...]
    ranks: Tuple[int, ...]
    ultimate_ranks: Tuple[int, ...]
    leaf_domain_counts: Tuple[int, ...]


@lru_cache(maxsize=None)
def _exhaustive_profile(n: int, cap: int) -> _ExhaustiveProfile:
    top_maps, ranks, ultimates = [], [], []
    leaf_counts = [0] * (1 << n)
    for x in enumerate_elements(n, cap):
        matrix = action_matrix(x)
        top_maps.append(i2_index(x.a))
        ranks.append(rank_leaf(x))
        ultimates.append(ultimate_rank(matrix))
        for i, j in enumerate(matrix.row_images):
            if j is not None:
                leaf_counts[i] += 1
    logger.debug(f"Exhaustive pass over P_{n}: {len(ranks)} elements")
    return _ExhaustiveProfile(n, tuple(top_maps), tuple(ranks), tuple(ultimates), tuple(leaf_counts))


def totals_exact(n: int, cap: int = DEFAULT_EXHAUSTIVE_CAP) -> RankTotals:
    """
    Total rank and total ultimate rank of P_n by enumeration.

    Raises:
        CapExceededError: If n exceeds the exhaustive cap
    """
    if n > cap:
        raise CapExceededError("Exhaustive totals", n, cap, count_elements(n))
    profile = _exhaustive_profile(n, cap)
    return RankTotals(n, len(profile.ranks), sum(profile.ranks), sum(profile.ultimate_ranks))


def closed_form_total_rank(n: int) -> int:
    """R'_n = 2^(n-1) (1 + N_n) = 2^(2^(n+1) + n - 2)."""
    if n < 1:
        raise ValueError(f"Level must be positive, got {n}")
    return (1 << (n - 1)) * (1 + count_elements(n))


@lru_cache(maxsize=None)
def total_rank_recursive(n: int) -> int:
    """R'_1 = 8 and R'_n = 4 R'_{n-1} (1 + N_{n-1})."""
    if n < 1:
        raise ValueError(f"Level must be positive, got {n}")
    if n == 1:
        return 8
    return 4 * total_rank_recursive(n - 1) * (1 + count_elements(n - 1))


def printed_total_rank(n: int) -> int:
    """The simplification 2^(2^n + n - 2); wrong already at n = 1."""
    return 1 << ((1 << n) + n - 2)


def printed_cardinality(n: int) -> int:
    """The last line of the cardinality induction, 2^(2^(n+1)) - 1."""
    return (1 << (1 << (n + 1))) - 1


def ultimate_rank_bound(previous: RankTotals) -> int:
    """3 R_{n-1} + 3 R_{n-1} N_{n-1}."""
    return 3 * previous.total_ultimate_rank * (1 + previous.element_count)


def chain_bound(n: int) -> Fraction:
    """(3/4)^(n-1) p_1, the bound on p_n obtained by chaining the decay step."""
    return DECAY ** (n - 1) * P1


def ultimate_rank_breakdown(n: int, cap: int = DEFAULT_EXHAUSTIVE_CAP) -> Dict[str, Any]:
    """
    Split R_n by the top map of x and compare with the recursive pieces.

    Top maps fixing one branch give 2 R_{n-1}; the identity on both
    branches gives 2 R_{n-1} N_{n-1}; the swap gives
    S_2 = 2 * sum over f1, f2 in P_{n-1} of rk(f1 f2), bounded by
    (1 + N_{n-1}) R_{n-1}; the other top maps give nothing.
    """
    if n < 2:
        raise ValueError("The breakdown needs n >= 2")
    profile = _exhaustive_profile(n, cap)
    by_top = Counter()
    for top, rk in zip(profile.top_maps, profile.ultimate_ranks):
        by_top[top] += rk
    previous = totals_exact(n - 1, cap)
    fixing = by_top[i2_index(I2Element(1, None))] + by_top[i2_index(I2Element(None, 2))]
    moving = by_top[i2_index(I2Element(2, None))] + by_top[i2_index(I2Element(None, 1))]
    lower = list(enumerate_elements(n - 1, cap))
    swap_from_pairs = 2 * sum(ultimate_rank(compose(f1, f2)) for f1 in lower for f2 in lower)
    swap = by_top[i2_index(TRANSPOSITION_I2)]
    return {
        "n": n,
        "single_fixing": fixing,
        "single_fixing_expected": 2 * previous.total_ultimate_rank,
        "single_moving": moving,
        "identity_top": by_top[i2_index(IDENTITY_I2)],
        "identity_top_expected": 2 * previous.total_ultimate_rank * previous.element_count,
        "swap_top": swap,
        "swap_top_from_pairs": swap_from_pairs,
        "swap_top_bound": (1 + previous.element_count) * previous.total_ultimate_rank,
        "consistent": (
            fixing == 2 * previous.total_ultimate_rank
            and moving == 0
            and by_top[i2_index(IDENTITY_I2)] == 2 * previous.total_ultimate_rank * previous.element_count
            and swap == swap_from_pairs
            and swap <= (1 + previous.element_count) * previous.total_ultimate_rank
        ),
    }


def leaf_domain_symmetry(n: int, cap: int = DEFAULT_EXHAUSTIVE_CAP) -> Tuple[int, ...]:
    """Number of elements having leaf j in their domain, for each leaf j."""
    return _exhaustive_profile(n, cap).leaf_domain_counts


# Monte Carlo

def sample_measures(n: int, seed: int, start: int, stop: int, approximate: bool = False) -> List[SpectralMeasure]:
    """Spectral measures of samples ``start`` .. ``stop - 1`` of the stream ``seed``."""
    return [
        spectral_measure(sample_levels(n, sample_rng(seed, index), approximate).action_matrix())
        for index in range(start, stop)
    ]


def _mean_and_stderr(values: Sequence[float]) -> Tuple[float, float]:
    data = np.asarray(values, dtype=float)
    if data.size < 2:
        return float(data.mean()) if data.size else 0.0, 0.0
    return float(data.mean()), float(data.std(ddof=1) / np.sqrt(data.size))


def p_estimate(n: int, sample_count: int, seed: int, approximate: bool = False) -> Tuple[float, float]:
    """
    Sample mean of rk_n(x) / 2^n over uniform x, with its standard error.

    Returns:
        Tuple (mean, standard_error)
    """
    if sample_count < 100:
        raise ValueError(f"At least 100 samples are required, got {sample_count}")
    measures = sample_measures(n, seed, 0, sample_count, approximate)
    return _mean_and_stderr([m.nonzero_count / m.size for m in measures])


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    sample_count: int
    mean_normalized_ultimate_rank: Fraction
    standard_error: float
    mass_at_zero_mean: Fraction
    deviations: Dict[str, Fraction] = field(hash=False)
    bound: Fraction = Fraction(0)
    function_bounds: Dict[str, Fraction] = field(default_factory=dict, hash=False)

    def to_dict(self, digits: int = 12) -> Dict[str, Any]:
        return {
            "n": self.n,
            "samples": self.sample_count,
            "mean_norm_ult_rank": format_decimal(self.mean_normalized_ultimate_rank, digits),
            "stderr": format_decimal(self.standard_error, digits),
            "mass_at_zero": format_decimal(self.mass_at_zero_mean, digits),
            "deviations": {k: format_decimal(v, digits) for k, v in self.deviations.items()},
            "function_bounds": {k: format_decimal(v, digits) for k, v in self.function_bounds.items()},
            "bound": format_decimal(self.bound, digits),
        }


def default_test_functions() -> Dict[str, TestFunction]:
    functions = {ABS_SQUARED.name: ABS_SQUARED}
    functions.update({f.name: f for _, f in CSV_FUNCTIONS})
    return functions


def summarize_measures(
    n: int,
    measures: Sequence[SpectralMeasure],
    test_functions: Optional[Mapping[str, TestFunction]] = None,
) -> ConvergenceRow:
    """
    Aggregate per-sample spectral measures into one row.

    For each test function f the row holds the mean of
    |integral of f - f(0)| and the bound 2 max|f| (3/4)^(n-1) p_1.
    """
    if not measures:
        raise ValueError("No samples to summarize")
    functions = dict(test_functions or default_test_functions())
    count = len(measures)
    normalized = [Fraction(m.nonzero_count, m.size) for m in measures]
    mean_rank = sum(normalized, Fraction(0)) / count
    _, stderr = _mean_and_stderr([float(v) for v in normalized])
    mass_at_zero = sum((Fraction(m.zero_multiplicity, m.size) for m in measures), Fraction(0)) / count
    deviations = {}
    for name, f in functions.items():
        origin = f.at_zero()
        deviations[name] = sum((abs(integrate(m, f) - origin) for m in measures), Fraction(0)) / count
    bound = chain_bound(n)
    function_bounds = {name: 2 * f.sup_norm_bound() * bound for name, f in functions.items()}
    return ConvergenceRow(n, count, mean_rank, stderr, mass_at_zero, deviations, bound, function_bounds)


def convergence_experiment(
    n_min: int,
    n_max: int,
    sample_count: int,
    seed: int,
    test_functions: Optional[Mapping[str, TestFunction]] = None,
    approximate: bool = False,
) -> List[ConvergenceRow]:
    """One row per level n_min..n_max; deterministic given the seed."""
    if n_min < 1 or n_max < n_min:
        raise ValueError(f"Invalid level range {n_min}..{n_max}")
    rows = []
    for n in range(n_min, n_max + 1):
        measures = sample_measures(n, seed, 0, sample_count, approximate)
        rows.append(summarize_measures(n, measures, test_functions))
        logger.info(f"n={n}: mean normalized ultimate rank {float(rows[-1].mean_normalized_ultimate_rank):.6f}")
    return rows


def exhaustive_convergence_row(
    n: int,
    test_functions: Optional[Mapping[str, TestFunction]] = None,
    cap: int = DEFAULT_EXHAUSTIVE_CAP,
) -> ConvergenceRow:
    """The same row computed over all of P_n, every element weighted equally."""
    measures = [spectral_measure(x) for x in enumerate_elements(n, cap)]
    return summarize_measures(n, measures, test_functions)


def rows_to_csv(
    rows: Sequence[ConvergenceRow],
    digits: int = 12,
    extra_functions: Sequence[str] = (),
) -> str:
    """
    Render rows with the fixed column schema; extra functions are appended after ``bound``.

    The header is always the first line.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER + [f"f_{name}" for name in extra_functions])
    for row in rows:
        record = [
            row.n,
            row.sample_count,
            format_decimal(row.mean_normalized_ultimate_rank, digits),
            format_decimal(row.standard_error, digits),
            format_decimal(row.mass_at_zero_mean, digits),
        ]
        record += [format_decimal(row.deviations[f.name], digits) for _, f in CSV_FUNCTIONS]
        record.append(format_decimal(row.bound, digits))
        record += [format_decimal(row.deviations[name], digits) for name in extra_functions]
        writer.writerow(record)
    return buffer.getvalue()


# Verification suite

@dataclass
class Claim:
    claim: str
    expected: Any
    computed: Any
    passed: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "claim": self.claim,
            "expected": format_exact(self.expected),
            "computed": format_exact(self.computed),
            "pass": self.passed,
        }


@dataclass
class VerificationReport:
    n_cap: int
    claims: List[Claim] = field(default_factory=list)
    errata: List[Dict[str, Any]] = field(default_factory=list)
    totals: List[RankTotals] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    @property
    def failures(self) -> List[Claim]:
        return [c for c in self.claims if not c.passed]

    def add(self, claim: str, expected: Any, computed: Any, passed: Optional[bool] = None) -> None:
        self.claims.append(Claim(claim, expected, computed, expected == computed if passed is None else passed))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_cap": self.n_cap,
            "passed": self.passed,
            "totals": [t.to_dict() for t in self.totals],
            "claims": [c.to_dict() for c in self.claims],
            "errata": self.errata,
        }


def oracle_mismatches(elements) -> Tuple[int, int]:
    """
    Compare the dense eigenvalue count |lambda| > 1/2 with the ultimate rank.

    Returns:
        Tuple (checked, mismatches)
    """
    checked = mismatches = 0
    for x in elements:
        matrix = action_matrix(x)
        checked += 1
        if count_large_eigenvalues(eigenvalues_dense_oracle(matrix)) != ultimate_rank(matrix):
            mismatches += 1
    return checked, mismatches


def verify_suite(
    n_cap: int,
    exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP,
    oracle_exhaustive_max_n: int = 2,
    oracle_random_samples: int = 0,
    oracle_random_max_n: int = 6,
    seed: int = 0,
) -> VerificationReport:
    """
    Check the cardinality formula, the rank identities and bounds, and the
    eigenvalue count against exact values for every n <= n_cap.

    Args:
        n_cap: Largest level checked exhaustively
        exhaustive_cap: Refuse n_cap above this
        oracle_exhaustive_max_n: Dense-oracle comparison over all of P_n up to this level
        oracle_random_samples: Random elements per level n = 3..oracle_random_max_n (0 skips)
        oracle_random_max_n: Largest level for the randomized oracle comparison
        seed: Seed of the randomized comparison

    Returns:
        VerificationReport with one claim per check and the errata
    """
    if n_cap < 1:
        raise ValueError(f"n_cap must be positive, got {n_cap}")
    if n_cap > exhaustive_cap:
        raise CapExceededError("Verification", n_cap, exhaustive_cap, count_elements(n_cap))
    report = VerificationReport(n_cap)
    previous: Optional[RankTotals] = None
    for n in range(1, n_cap + 1):
        totals = totals_exact(n, exhaustive_cap)
        report.totals.append(totals)
        report.add(f"cardinality n={n}", count_elements(n), totals.element_count)
        report.add(f"cardinality recursion n={n}", count_elements_closed_form(n), count_elements_recursive(n))
        report.add(f"total rank closed form n={n}", closed_form_total_rank(n), totals.total_rank)
        report.add(f"total rank recursion n={n}", total_rank_recursive(n), totals.total_rank)
        per_leaf = leaf_domain_symmetry(n, exhaustive_cap)
        report.add(
            f"leaf domain symmetry n={n}",
            [totals.total_rank >> n] * len(per_leaf),
            list(per_leaf),
        )
        report.add(
            f"ultimate rank at most rank n={n}",
            f"<= {totals.total_rank}",
            totals.total_ultimate_rank,
            totals.total_ultimate_rank <= totals.total_rank,
        )
        report.add(f"chain bound n={n}", f"<= {chain_bound(n)}", totals.p, totals.p <= chain_bound(n))
        if n == 1:
            report.add("total ultimate rank n=1", 6, totals.total_ultimate_rank)
            report.add("p_1", P1, totals.p)
        if previous is not None:
            bound = ultimate_rank_bound(previous)
            report.add(
                f"ultimate rank bound n={n}",
                f"<= {bound}",
                totals.total_ultimate_rank,
                totals.total_ultimate_rank <= bound,
            )
            report.add(f"p decay n={n}", f"<= {DECAY * previous.p}", totals.p, totals.p <= DECAY * previous.p)
            breakdown = ultimate_rank_breakdown(n, exhaustive_cap)
            report.add(
                f"ultimate rank split by top map n={n}",
                "consistent",
                {k: v for k, v in breakdown.items() if k != "consistent"},
                breakdown["consistent"],
            )
        if n <= oracle_exhaustive_max_n:
            checked, mismatches = oracle_mismatches(enumerate_elements(n, exhaustive_cap))
            report.add(f"eigenvalue count equals ultimate rank, all of P_{n} ({checked})", 0, mismatches)
        previous = totals

    if oracle_random_samples > 0:
        for n in range(3, oracle_random_max_n + 1):
            elements = (
                sample_levels(n, sample_rng(seed, index)).action_matrix()
                for index in range(oracle_random_samples)
            )
            checked, mismatches = _matrix_oracle_mismatches(elements)
            report.add(f"eigenvalue count equals ultimate rank, {checked} samples of P_{n}", 0, mismatches)

    _add_errata(report)
    logger.info(f"Verification up to n={n_cap}: {len(report.claims) - len(report.failures)}/{len(report.claims)} claims hold")
    return report


def _matrix_oracle_mismatches(matrices) -> Tuple[int, int]:
    checked = mismatches = 0
    for matrix in matrices:
        checked += 1
        if count_large_eigenvalues(eigenvalues_dense_oracle(matrix, max_n=matrix.n)) != ultimate_rank(matrix):
            mismatches += 1
    return checked, mismatches


def _add_errata(report: VerificationReport) -> None:
    for totals in report.totals:
        n = totals.n
        report.errata.append({
            "claim": f"printed total rank 2^(2^n+n-2) at n={n}",
            "expected": printed_total_rank(n),
            "computed": totals.total_rank,
            "pass": printed_total_rank(n) == totals.total_rank,
            "note": "the recursion-consistent value is 2^(n-1)(1+N_n) = 2^(2^(n+1)+n-2)",
        })
        report.errata.append({
            "claim": f"last line of the cardinality induction 2^(2^(n+1))-1 at n={n}",
            "expected": printed_cardinality(n),
            "computed": totals.element_count,
            "pass": printed_cardinality(n) == totals.element_count,
            "note": "the stated formula 2^(2^(n+1)-1)-1 is correct",
        })
    report.errata.append({
        "claim": "chain bound base p_0",
        "expected": "undefined",
        "computed": format_exact(P1),
        "pass": False,
        "note": "P_0 is not defined; the chain starts from p_1 = 3/7",
    })
