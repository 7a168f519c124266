"""
qcat: canonical two-qubit gates, entanglement catalysis and the
Hamiltonian-simulation partial order
==================================================================
Every command prints one JSON document on stdout; diagnostics go to stderr.

Exit codes:
    0  success
    1  malformed input or bad flags
    2  non-unitary input, or a numerical check that did not hold
    3  acceptance suite failure
"""

import argparse
import csv
import dataclasses
import sys
from pathlib import Path
from typing import Optional, Sequence, Tuple

from loguru import logger

sys.path.insert(0, str(Path(__file__).parent))

from config.settings import Settings, load_settings
from models.errors import ConsistencyError, DecompositionError, NonUnitaryError, QcatError
from models.quantum_models import CanonicalParams, HamParams, VerdictScan
from services.canonical_service import kak_decompose
from services.catalysis_service import verify_catalysis
from services.hamsim_service import classify_simulation, scan_verdicts
from services.io_service import dumps, read_matrix_file, read_state_file
from services.monotone_service import bell_weights, equality_classifier, max_schmidt_prob, nogo_search
from services.suite_service import SuiteRunner
from services.tensor_service import schmidt_probs
from utils.logger import setup_logger

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_SUITE = 3

CATALYSIS_RESIDUAL_LIMIT = 1e-10
REGISTER_WITH_ANCILLAS = {"A", "B", "a", "b"}


class UsageError(Exception):
    """Bad command-line flags."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# ─────────────────────────────────────────────
# Flag parsing helpers
# ─────────────────────────────────────────────

def parse_triple(text: str) -> Tuple[float, float, float]:
    """'0.3,0.2,0.1' → (0.3, 0.2, 0.1)."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise UsageError(f"expected three comma-separated numbers, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as e:
        raise UsageError(f"bad number in {text!r}: {e}") from e


def parse_cut(text: str) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    """'A,a|B,b' → (('A', 'a'), ('B', 'b'))."""
    blocks = text.split("|")
    if len(blocks) != 2:
        raise UsageError(f"cut must have exactly two '|'-separated blocks, got {text!r}")
    left, right = (tuple(label.strip() for label in block.split(",") if label.strip()) for block in blocks)
    if not left or not right:
        raise UsageError(f"empty block in cut {text!r}")
    return left, right


def _emit(data):
    sys.stdout.write(dumps(data) + "\n")


# ─────────────────────────────────────────────
# Commands
# ─────────────────────────────────────────────

def cmd_decompose(args, settings: Settings) -> int:
    result = kak_decompose(read_matrix_file(args.input))
    logger.info(f"✅ Canonical parameters {result.params.as_tuple()} (residual {result.residual:.2e})")
    _emit(result.to_dict())
    return EXIT_OK


def cmd_catalysis(args, settings: Settings) -> int:
    if args.trials < 1:
        raise UsageError(f"--trials must be ≥ 1, got {args.trials}")
    report = verify_catalysis(CanonicalParams(args.c1, args.c2, args.c3), args.trials, args.seed)
    _emit(report.to_dict())
    if report.max_state_residual > CATALYSIS_RESIDUAL_LIMIT:
        logger.error(f"❌ Catalysis residual {report.max_state_residual:.3e} exceeds {CATALYSIS_RESIDUAL_LIMIT:g}")
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_classify(args, settings: Settings) -> int:
    source, target = HamParams(*parse_triple(args.source)), HamParams(*parse_triple(args.target))
    verdict = classify_simulation(source, target)
    logger.info(f"⚖️ {source.as_tuple()} → {target.as_tuple()}: {verdict.kind.value}")
    _emit(verdict.to_dict())
    return EXIT_OK


def cmd_nogo(args, settings: Settings) -> int:
    if args.budget < 1:
        raise UsageError(f"--budget must be ≥ 1, got {args.budget}")
    report = nogo_search(args.c1, args.c2, args.budget, args.seed)
    _emit(report.to_dict())
    return EXIT_OK if report.holds else EXIT_NUMERIC


def cmd_monotone(args, settings: Settings) -> int:
    state = read_state_file(args.state)
    cut = parse_cut(args.cut)
    output = {
        "register": list(state.register),
        "cut": [list(cut[0]), list(cut[1])],
        "P": max_schmidt_prob(state, cut),
        "schmidt_probs": [float(p) for p in schmidt_probs(state, cut)],
    }
    if set(state.register) == REGISTER_WITH_ANCILLAS:
        output["bell_weights"] = bell_weights(state).to_dict()
        output["equality_form"] = equality_classifier(state).value
    _emit(output)
    return EXIT_OK


def cmd_suite(args, settings: Settings) -> int:
    if args.scale is not None:
        if not 0.0 < args.scale <= 1.0:
            raise UsageError(f"--scale must lie in (0, 1], got {args.scale}")
        settings = dataclasses.replace(settings, suite_scale=args.scale)
    report = SuiteRunner(settings).run(seed=args.seed)
    sys.stderr.write(report.table() + "\n")
    _emit(report.to_dict())
    return EXIT_OK if report.all_passed else EXIT_SUITE


def cmd_scan(args, settings: Settings) -> int:
    if args.pairs < 1:
        raise UsageError(f"--pairs must be ≥ 1, got {args.pairs}")
    scan = scan_verdicts(args.pairs, args.seed, keep_rows=args.format == "csv")
    if args.format == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(VerdictScan.CSV_HEADER)
        for row in scan.rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row.as_csv()])
    else:
        _emit(scan.to_dict())
    return EXIT_OK


# ─────────────────────────────────────────────
# Main Entry Point
# ─────────────────────────────────────────────

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qcat", description="Two-qubit canonical forms, catalysis and Hamiltonian simulation.")
    parser.add_argument("--log-level", default=None, help="loguru level (overrides QCAT_LOG_LEVEL)")
    parser.add_argument("--env-file", default=".env", help="optional .env file with QCAT_* keys")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="canonical decomposition of a 4×4 unitary")
    p.add_argument("--in", dest="input", required=True, help="MatrixFile JSON")
    p.set_defaults(handler=cmd_decompose)

    p = sub.add_parser("catalysis", help="verify the catalysis identity on random inputs")
    p.add_argument("--c1", type=float, required=True)
    p.add_argument("--c2", type=float, required=True)
    p.add_argument("--c3", type=float, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(handler=cmd_catalysis)

    p = sub.add_parser("classify", help="simulation verdict for a pair of interactions")
    p.add_argument("--source", required=True, help="c1,c2,c3 in normal form")
    p.add_argument("--target", required=True, help="t1,t2,t3 in normal form")
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("nogo", help="numerical search against the overlap bound")
    p.add_argument("--c1", type=float, required=True)
    p.add_argument("--c2", type=float, required=True)
    p.add_argument("--budget", type=int, default=2000)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(handler=cmd_nogo)

    p = sub.add_parser("monotone", help="largest Schmidt probability of a state across a cut")
    p.add_argument("--state", required=True, help="StateFile JSON")
    p.add_argument("--cut", required=True, help="e.g. 'A,a|B,b'")
    p.set_defaults(handler=cmd_monotone)

    p = sub.add_parser("suite", help="run the acceptance battery")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--scale", type=float, default=None, help="fraction of the full sample counts")
    p.set_defaults(handler=cmd_suite)

    p = sub.add_parser("scan", help="verdict counts over random normal-form pairs")
    p.add_argument("--pairs", type=int, default=10000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(handler=cmd_scan)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        sys.stderr.write(f"qcat: error: {e}\n")
        return EXIT_USAGE

    try:
        settings = load_settings(args.env_file)
        setup_logger(args.log_level or settings.log_level, settings.log_file)
    except ValueError as e:
        sys.stderr.write(f"qcat: error: {e}\n")
        return EXIT_USAGE

    if hasattr(args, "seed") and args.seed is None:
        args.seed = settings.seed
    if hasattr(args, "seed") and args.seed < 0:
        logger.error(f"❌ --seed must be non-negative, got {args.seed}")
        return EXIT_USAGE

    try:
        return args.handler(args, settings)
    except UsageError as e:
        logger.error(f"❌ {e}")
        return EXIT_USAGE
    except (NonUnitaryError, DecompositionError, ConsistencyError) as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return EXIT_NUMERIC
    except (QcatError, ValueError) as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
