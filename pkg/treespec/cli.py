"""
Command-line front end.

Subcommands: count, enumerate, sample, spectrum, verify, converge, reproduce.
Results go to standard output (or --out) as JSON or CSV; logs go to stderr.
Exit status is 0 on success, 1 when a verification claim fails and 2 when a
request is refused or malformed.
"""
from typing import Any, Dict, List, Optional
import argparse
import asyncio
import copy
import csv
import io
import json
import logging
import sys

import numpy as np

from .workflow_manager import DEFAULT_CONFIG_PATH, WorkflowManager, load_config

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CLAIM_FAILED = 1
EXIT_REFUSED = 2

SEED_LIMIT = 1 << 64


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < SEED_LIMIT:
        raise argparse.ArgumentTypeError(f"seed must be a 64-bit unsigned integer, got {text}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treespec",
        description="Partial wreath powers of IS_2 on the binary rooted tree: "
        "enumeration, sampling, spectra and rank statistics.",
    )
    parser.add_argument("--config", default=DEFAULT_CONFIG_PATH, help="Configuration file (default: config.json)")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="Log debug messages")
    verbosity.add_argument("--quiet", action="store_true", help="Log warnings and errors only")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def output_options(p: argparse.ArgumentParser, formats: List[str], default: str) -> None:
        p.add_argument("--format", choices=formats, default=default, help=f"Output format (default: {default})")
        p.add_argument("--out", help="Write to this file instead of standard output")

    def seed_options(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=_seed, default=0, help="64-bit unsigned seed (default: 0)")
        p.add_argument("--entropy", action="store_true", help="Draw a fresh seed from OS entropy and report it")

    # -- count --
    p_count = subparsers.add_parser("count", help="Print N_n, the number of elements of P_n")
    p_count.add_argument("--n", type=_positive, required=True, help="Level")
    output_options(p_count, ["text", "json"], "text")

    # -- enumerate --
    p_enum = subparsers.add_parser("enumerate", help="List every element of P_n in canonical order")
    p_enum.add_argument("--n", type=_positive, required=True, help="Level")
    p_enum.add_argument("--cap", type=_positive, help="Override the enumeration cap")
    output_options(p_enum, ["json", "csv"], "json")

    # -- sample --
    p_sample = subparsers.add_parser("sample", help="Draw uniform random elements of P_n")
    p_sample.add_argument("--n", type=_positive, required=True, help="Level")
    p_sample.add_argument("--count", type=int, default=1, help="Number of samples (default: 1)")
    p_sample.add_argument("--workers", type=_positive, default=1, help="Worker processes (default: 1)")
    p_sample.add_argument("--cap", type=_positive, help="Override the exact sampling limit")
    p_sample.add_argument("--approximate", action="store_true", help="Use float64 branch probabilities")
    seed_options(p_sample)
    output_options(p_sample, ["json", "csv"], "json")

    # -- spectrum --
    p_spec = subparsers.add_parser("spectrum", help="Action matrix, ranks and spectrum of one element")
    source = p_spec.add_mutually_exclusive_group(required=True)
    source.add_argument("--element", help="Element JSON")
    source.add_argument("--element-file", help="File holding the element JSON")
    p_spec.add_argument("--n", type=_positive, help="Level (needed when the top map has an empty domain)")
    p_spec.add_argument("--mode", choices=["exact", "oracle"], default="exact", help="Spectrum source (default: exact)")
    p_spec.add_argument("--dense", action="store_true", help="Include the full 0/1 matrix and the eigenvalues")
    p_spec.add_argument("--eigenvalues", action="store_true", help="List the eigenvalues explicitly")
    output_options(p_spec, ["json"], "json")

    # -- verify --
    p_verify = subparsers.add_parser("verify", help="Check the counting results and rank bounds")
    p_verify.add_argument("--n-cap", type=_positive, default=3, help="Largest level checked exhaustively (default: 3)")
    p_verify.add_argument("--cap", type=_positive, help="Override the exhaustive cap")
    p_verify.add_argument("--oracle-samples", type=int, help="Random elements per level for the dense oracle")
    seed_options(p_verify)
    output_options(p_verify, ["json"], "json")

    # -- converge --
    p_conv = subparsers.add_parser("converge", help="Eigenvalue-distribution experiment over a range of levels")
    p_conv.add_argument("--n-min", type=_positive, default=1, help="Smallest level (default: 1)")
    p_conv.add_argument("--n-max", type=_positive, default=12, help="Largest level (default: 12)")
    p_conv.add_argument("--samples", type=_positive, default=10000, help="Samples per level (default: 10000)")
    p_conv.add_argument("--workers", type=_positive, help="Worker processes")
    p_conv.add_argument("--cap", type=_positive, help="Override the largest sampled level")
    p_conv.add_argument("--functions", nargs="*", default=[], help="Extra test functions for extra CSV columns")
    p_conv.add_argument("--approximate", action="store_true", help="Use float64 branch probabilities")
    seed_options(p_conv)
    output_options(p_conv, ["csv", "json"], "csv")

    # -- reproduce --
    p_repro = subparsers.add_parser("reproduce", help="Verification followed by the convergence experiment")
    p_repro.add_argument("--n-cap", type=_positive, default=3, help="Largest level verified (default: 3)")
    p_repro.add_argument("--n-min", type=_positive, default=1, help="Smallest sampled level (default: 1)")
    p_repro.add_argument("--n-max", type=_positive, default=12, help="Largest sampled level (default: 12)")
    p_repro.add_argument("--samples", type=_positive, default=10000, help="Samples per level (default: 10000)")
    p_repro.add_argument("--workers", type=_positive, help="Worker processes")
    seed_options(p_repro)
    output_options(p_repro, ["csv", "json"], "csv")

    return parser


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )


def apply_overrides(config: Dict[str, Any], args: argparse.Namespace) -> Dict[str, Any]:
    """Fold the --cap flag into the configuration section of the agent it limits."""
    config = copy.deepcopy(config)
    cap = getattr(args, "cap", None)
    if cap is None:
        return config
    key = {
        "enumerate": ("enumeration", "enumeration_cap"),
        "sample": ("sampling", "exact_sampling_limit"),
        "verify": ("verification", "exhaustive_cap"),
        "converge": ("convergence", "sampling_limit"),
    }.get(args.command)
    if key is not None:
        section, name = key
        config.setdefault("agents", {}).setdefault(section, {})[name] = cap
    return config


def resolve_seed(args: argparse.Namespace) -> int:
    if getattr(args, "entropy", False):
        seed = int(np.random.SeedSequence().entropy) % SEED_LIMIT
        logger.info(f"Drew seed {seed} from OS entropy")
        return seed
    return args.seed


def emit(text: str, out: Optional[str]) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out:
        with open(out, "w") as f:
            f.write(text)
        logger.info(f"Wrote {out}")
    else:
        sys.stdout.write(text)


def _dump(payload: Any, compact: bool = False) -> str:
    if compact:
        return json.dumps(payload, separators=(",", ":"))
    return json.dumps(payload, indent=2)


def _strip(result: Dict[str, Any]) -> Dict[str, Any]:
    return {k: v for k, v in result.items() if k != "success"}


def _elements_csv(elements: List[Any], header: Optional[str] = None) -> str:
    buffer = io.StringIO()
    if header:
        buffer.write(f"# {header}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["index", "element"])
    for index, element in enumerate(elements):
        writer.writerow([index, _dump(element, compact=True)])
    return buffer.getvalue()


def announce_run(run: str) -> None:
    """Name the seed and sizes on stderr, keeping the CSV on stdout header-first."""
    sys.stderr.write(f"# {run}\n")


def refused(result: Dict[str, Any]) -> int:
    sys.stderr.write(f"error: {result.get('error', 'unknown error')}\n")
    return EXIT_REFUSED


async def cmd_count(manager: WorkflowManager, args: argparse.Namespace) -> int:
    result = await manager.count_only(args.n)
    if not result["success"]:
        return refused(result)
    emit(_dump(_strip(result)) if args.format == "json" else str(result["count"]), args.out)
    return EXIT_OK


async def cmd_enumerate(manager: WorkflowManager, args: argparse.Namespace) -> int:
    result = await manager.count_only(args.n, list_elements=True)
    if not result["success"]:
        return refused(result)
    if args.format == "csv":
        emit(_elements_csv(result["elements"], f"n={args.n} count={result['count']}"), args.out)
    else:
        emit(_dump({"n": args.n, "count": result["count"], "elements": result["elements"]}, compact=True), args.out)
    return EXIT_OK


async def cmd_sample(manager: WorkflowManager, args: argparse.Namespace) -> int:
    seed = resolve_seed(args)
    result = await manager.sample_only(args.n, args.count, seed, args.workers, args.approximate)
    if not result["success"]:
        return refused(result)
    if args.format == "csv":
        header = f"n={args.n} seed={seed} count={args.count}" + (" approximate" if result["approximate"] else "")
        emit(_elements_csv(result["samples"], header), args.out)
    else:
        emit(_dump(_strip(result), compact=True), args.out)
    return EXIT_OK


async def cmd_spectrum(manager: WorkflowManager, args: argparse.Namespace) -> int:
    if args.element_file:
        try:
            with open(args.element_file, "r") as f:
                element = f.read()
        except OSError as e:
            return refused({"error": f"Cannot read {args.element_file}: {e}"})
    else:
        element = args.element
    result = await manager.spectrum_only(element, args.n, args.mode, args.dense, args.eigenvalues)
    if not result["success"]:
        return refused(result)
    emit(_dump(_strip(result)), args.out)
    return EXIT_OK


async def cmd_verify(manager: WorkflowManager, args: argparse.Namespace) -> int:
    seed = resolve_seed(args)
    result = await manager.verify_only(args.n_cap, args.oracle_samples, seed)
    if not result["success"]:
        return refused(result)
    emit(_dump(_strip(result)), args.out)
    return EXIT_OK if result["passed"] else EXIT_CLAIM_FAILED


async def cmd_converge(manager: WorkflowManager, args: argparse.Namespace) -> int:
    seed = resolve_seed(args)
    result = await manager.converge_only(
        args.n_min, args.n_max, args.samples, seed, args.workers, args.functions, args.approximate
    )
    if not result["success"]:
        return refused(result)
    if args.format == "json":
        payload = {"seed": seed, "run": result["run"], "approximate": result["approximate"], "rows": result["rows"]}
        emit(_dump(payload), args.out)
    else:
        announce_run(result["run"])
        emit(result["csv"], args.out)
    return EXIT_OK


async def cmd_reproduce(manager: WorkflowManager, args: argparse.Namespace) -> int:
    seed = resolve_seed(args)
    result = await manager.execute_workflow({
        "n_cap": args.n_cap,
        "n_min": args.n_min,
        "n_max": args.n_max,
        "samples": args.samples,
        "seed": seed,
        "workers": args.workers,
    })
    if not result["success"]:
        return refused(result)
    if args.format == "json":
        emit(_dump({
            "seed": seed,
            "run": result["run"],
            "passed": result["passed"],
            "verification": _strip(result["workflow_steps"]["verification"]),
            "convergence": result["workflow_steps"]["convergence"]["rows"],
        }), args.out)
    else:
        announce_run(result["run"])
        emit(result["csv"], args.out)
    return EXIT_OK if result["passed"] else EXIT_CLAIM_FAILED


COMMANDS = {
    "count": cmd_count,
    "enumerate": cmd_enumerate,
    "sample": cmd_sample,
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
    "converge": cmd_converge,
    "reproduce": cmd_reproduce,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main function for command-line interface."""
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    config = apply_overrides(load_config(args.config), args)
    manager = WorkflowManager(config)
    return asyncio.run(COMMANDS[args.command](manager, args))


if __name__ == "__main__":
    sys.exit(main())
