import argparse
import logging
import sys
from typing import Optional, Sequence

from pinet_refine.exception import PiNetError
from .config import RunConfig, load_run_config
from .log_setup import setup_logging, show_progress
from .commands import (
    GenCommand,
    TrainCommand,
    RefineCommand,
    EvalCommand,
    GradCheckCommand,
    AblateCommand,
)

logger = logging.getLogger(__name__)

EXIT_CODES = """exit codes:
  0  success
  1  unexpected error
  2  invalid configuration (with the offending line when it comes from a file)
  3  I/O failure, malformed or undecodable scene/config/checkpoint file, missing ground truth
  4  non-finite training loss (names the scene)
  5  joint-count mismatch between checkpoint and scenes
  6  count mismatch between predictions and ground truth
  7  gradient check failed (names the worst component and coordinate)
"""


class PiNetCLI:
    def __init__(self, config: Optional[RunConfig] = None, progress: bool = False) -> None:
        self.config = config if config is not None else RunConfig()

        # register commands
        self.gen = GenCommand(self.config, progress)
        self.train = TrainCommand(self.config, progress)
        self.refine = RefineCommand(self.config, progress)
        self.eval = EvalCommand(self.config, progress)
        self.gradcheck = GradCheckCommand(self.config, progress)
        self.ablate = AblateCommand(self.config, progress)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML run config")
    common.add_argument("--seed", type=int, help="overrides gen.seed and train.seed")
    common.add_argument("--threads", type=int, help="worker threads for refine/ablate")
    common.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a config entry, e.g. train.epochs=3 (repeatable)",
    )
    common.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    common.add_argument("--quiet", action="store_true", help="warnings only, no progress bars")

    parser = argparse.ArgumentParser(
        prog="pinet",
        description="Interaction-aware refinement of multi-person 3D pose estimates.",
        epilog=EXIT_CODES,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate a synthetic dataset")
    p.add_argument("--out", required=True, help="dataset directory")

    p = sub.add_parser("train", parents=[common], help="train on a dataset")
    p.add_argument("data", help="dataset directory or training scene file")
    p.add_argument("--out", required=True, help="run directory (checkpoint, train log)")

    p = sub.add_parser("refine", parents=[common], help="refine the poses of a scene file")
    p.add_argument("checkpoint")
    p.add_argument("scenes")
    p.add_argument("--out", required=True, help="output scene file")
    p.add_argument("--dump-attention", action="store_true", help="write attention.json next to the output")

    p = sub.add_parser("eval", parents=[common], help="score predictions against ground truth")
    p.add_argument("pred", help="scene file with the poses to score")
    p.add_argument("--gt", help="reference scene file (defaults to the predictions' own gt)")
    p.add_argument("--out", required=True, help="report directory")

    p = sub.add_parser("gradcheck", parents=[common], help="verify every gradient by finite differences")
    p.add_argument("--out", required=True, help="report directory")

    p = sub.add_parser("ablate", parents=[common], help="train and score the ablation matrix")
    p.add_argument("data", help="dataset directory")
    p.add_argument("--out", required=True, help="results directory")
    return parser


def dispatch(cli: PiNetCLI, args: argparse.Namespace) -> int:
    if args.command == "gen":
        return cli.gen.run(out=args.out)
    if args.command == "train":
        return cli.train.run(data=args.data, out=args.out)
    if args.command == "refine":
        return cli.refine.run(
            checkpoint=args.checkpoint, scenes=args.scenes, out=args.out, dump_attention=args.dump_attention
        )
    if args.command == "eval":
        return cli.eval.run(pred=args.pred, out=args.out, gt=args.gt)
    if args.command == "gradcheck":
        return cli.gradcheck.run(out=args.out)
    if args.command == "ablate":
        return cli.ablate.run(data=args.data, out=args.out)
    raise ValueError(f"unknown command {args.command!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level, quiet=args.quiet)
    try:
        config = load_run_config(args.config, overrides=args.overrides, seed=args.seed, threads=args.threads)
        cli = PiNetCLI(config, progress=show_progress(args.quiet))
        return dispatch(cli, args)
    except PiNetError as e:
        logger.error("%s", e)
        return e.exit_code
    except Exception:
        logger.exception("unexpected failure in %s", args.command)
        return 1


if __name__ == "__main__":
    sys.exit(main())
