import argparse
from typing import Optional, Sequence

from secondchange import __version__
from secondchange.cli.run_config import RunConfig
from secondchange.core.settings import RuntimeSettings, StudySettings


def bandwidth_choice(text: str):
    """``mv``, ``gcv`` or a number in (0, 0.5]."""
    if text in ("mv", "gcv"):
        return text
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected mv, gcv or a number, got {text!r}")
    if not 0.0 < value <= 0.5:
        raise argparse.ArgumentTypeError(f"bandwidth {value} outside (0, 0.5]")
    return value


def variance_bandwidth_choice(text: str):
    choice = bandwidth_choice(text)
    if choice == "mv":
        raise argparse.ArgumentTypeError("the variance bandwidth is a number or gcv")
    return choice


def float_list(text: str):
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    runtime = RuntimeSettings()
    study = StudySettings()

    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--out", default=None, help="Report file; stdout when omitted")
    output.add_argument("--format", choices=("json", "tsv"), default="json")

    boot = argparse.ArgumentParser(add_help=False)
    boot.add_argument("--window-m", dest="window_m", type=int, default=None, help="Bootstrap window m")
    boot.add_argument("--B", type=int, default=study.B, help="Bootstrap replicates")
    boot.add_argument("--seed", type=int, default=0)
    boot.add_argument("--alpha", dest="alphas", type=float, action="append", default=None, help="Test level (repeatable)")
    boot.add_argument("--threads", type=int, default=runtime.threads, help="Workers (env SECONDCHANGE_THREADS)")

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("--input", required=True, help="CSV file with a header row")
    data.add_argument("--column", default=None, help="Column name or 0-based position")
    data.add_argument("--bandwidth", type=bandwidth_choice, default=None, help="mv, gcv or a fixed b")
    data.add_argument(
        "--variance-bandwidth", dest="variance_bandwidth", type=variance_bandwidth_choice, default="gcv",
        help="gcv or a fixed c",
    )
    data.add_argument("--kernel", choices=("epanechnikov", "biweight", "triweight"), default=study.kernel)
    data.add_argument("--L", type=int, default=None, help="Window of the variance break locator")
    data.add_argument("--zeta", type=float, default=None, help="Trim of the variance break locator")

    correlation = argparse.ArgumentParser(add_help=False)
    correlation.add_argument("--lag", type=int, default=1)
    correlation.add_argument(
        "--assume-no-variance-break", dest="assume_no_variance_break", action="store_true",
        help="Use the smooth variance fit instead of the break-aware one",
    )

    relevant = argparse.ArgumentParser(add_help=False)
    relevant.add_argument("--delta", type=float, default=None, help="Relevance threshold delta > 0")
    relevant.add_argument("--delta-grid", dest="delta_grid", type=float_list, default=None, help="d1,d2,... p-value curve")

    segments = argparse.ArgumentParser(add_help=False)
    segments.add_argument("--segments", action="store_true", help="Whole / before / after table")

    parser = argparse.ArgumentParser(
        prog="secondchange", description="Change point tests for the variance and lag-k correlation"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="subcommand", required=True)
    commands.add_parser("test-variance", parents=[data, boot, output, segments])
    commands.add_parser("test-correlation", parents=[data, boot, output, correlation, segments])
    commands.add_parser("test-relevant-variance", parents=[data, boot, output, relevant])
    commands.add_parser("test-relevant-correlation", parents=[data, boot, output, correlation, relevant])
    commands.add_parser("locate", parents=[data, output]).add_argument("--lag", type=int, default=1)
    bandwidth = commands.add_parser("bandwidth", parents=[data, output])
    bandwidth.add_argument("--lag", type=int, default=1)
    bandwidth.add_argument(
        "--target", choices=("variance", "correlation", "relevant-variance", "relevant-correlation"),
        default="variance", help="Statistic scanned by Minimal Volatility",
    )
    simulate = commands.add_parser("simulate", parents=[output])
    simulate.add_argument("--model", required=True)
    simulate.add_argument("--lambda", dest="lambdas", type=float, action="append", default=None)
    simulate.add_argument("--n", type=int, required=True)
    simulate.add_argument("--seed", type=int, default=0)
    simstudy = commands.add_parser("simstudy", parents=[boot, output])
    simstudy.add_argument("--model", required=True)
    simstudy.add_argument("--lambda", dest="lambdas", type=float, action="append", default=None)
    simstudy.add_argument("--n", type=int, default=500)
    simstudy.add_argument("--runs", type=int, default=2000)
    simstudy.add_argument("--lag", type=int, default=1)
    simstudy.add_argument(
        "--delta", dest="deltas", type=float, action="append", default=None,
        help="Repeatable: thresholds of relevant-test models; the registry value when omitted",
    )
    simstudy.add_argument(
        "--bandwidth", dest="bandwidths", type=bandwidth_choice, action="append", default=None,
        help="Repeatable: mv, gcv or fixed values",
    )
    commands.add_parser("schema", parents=[output])
    return parser


def parse_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """Parses the command line into a validated ``RunConfig``.

    Raises:
        SystemExit: On argparse usage errors (exit code 2).
        pydantic.ValidationError: On inconsistent options.
    """
    namespace = vars(build_parser().parse_args(argv))
    fields = {key: value for key, value in namespace.items() if value is not None}
    if "alphas" in fields:
        fields["alphas"] = tuple(fields["alphas"])
    if "lambdas" in fields:
        fields["lambdas"] = tuple(fields["lambdas"])
    if "bandwidths" in fields:
        fields["bandwidths"] = tuple(fields["bandwidths"])
    if "deltas" in fields:
        fields["deltas"] = tuple(fields["deltas"])
    fields["chunk_size"] = RuntimeSettings().chunk_size
    return RunConfig(**fields)
