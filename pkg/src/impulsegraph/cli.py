"""Command-line front end.

Exit status: 0 on success, 1 for usage errors (bad flags or values),
2 for I/O and file-format errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .bench import DEFAULT_P_LIST, DEFAULT_SEEDS, run_bench, write_csv
from .errors import ImpulseGraphError
from .image import DamageMask, read_image, write_image
from .impulse import AGGREGATIONS, RESTORE_GRAPHS, SCOPES, SCORINGS, FilterConfig, denoise
from .lattice import BORDERS, GraphConfig
from .median import median_filter
from .metrics import evaluate
from .noise import MODES, NoiseSpec, inject
from .synthetic import KINDS, SyntheticSpec, generate_synthetic

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2

log = logging.getLogger("impulsegraph")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad arguments; usage errors are 1 here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _add_filter_flags(p: argparse.ArgumentParser):
    g = p.add_argument_group("filter")
    g.add_argument("--h", type=float, default=GraphConfig.h, help="edge weight bandwidth (default %(default)s)")
    g.add_argument("--epsilon", type=float, default=FilterConfig.epsilon)
    g.add_argument("--k", type=int, default=FilterConfig.k_min_negative,
                   help="negative merges needed to flag a pixel (default %(default)s)")
    g.add_argument("--scope", choices=SCOPES, default=FilterConfig.scope)
    g.add_argument("--aggregation", choices=AGGREGATIONS, default=FilterConfig.aggregation)
    g.add_argument("--max-passes", type=int, default=FilterConfig.max_passes)
    g.add_argument("--border", choices=BORDERS, default=FilterConfig.border)
    g.add_argument("--scoring", choices=SCORINGS, default=FilterConfig.scoring)
    g.add_argument("--restore-graph", choices=RESTORE_GRAPHS, default=FilterConfig.restore_graph)
    g.add_argument("--rounds", type=int, default=FilterConfig.detection_rounds,
                   help="detection rounds (default %(default)s)")
    g.add_argument("--no-confirm", action="store_true",
                   help="keep flags whose repair reproduces the observed colour")


def _filter_config(args) -> FilterConfig:
    try:
        return FilterConfig(
            graph=GraphConfig(args.h),
            epsilon=args.epsilon,
            k_min_negative=args.k,
            scope=args.scope,
            aggregation=args.aggregation,
            max_passes=args.max_passes,
            border=args.border,
            scoring=args.scoring,
            restore_graph=args.restore_graph,
            detection_rounds=args.rounds,
            confirm=not args.no_confirm,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _synthetic_spec(args) -> SyntheticSpec:
    try:
        return SyntheticSpec(kind=args.synthetic, width=args.size[0], height=args.size[1])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _read_mask(path) -> DamageMask:
    return DamageMask.from_image(read_image(path))


def cmd_synth(args) -> int:
    write_image(args.output, generate_synthetic(_synthetic_spec(args)))
    return EXIT_OK


def cmd_noise(args) -> int:
    try:
        spec = NoiseSpec(p=args.p, mode=args.mode, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    noisy, mask = inject(read_image(args.input), spec)
    write_image(args.output, noisy)
    write_image(args.mask, mask.to_image())
    return EXIT_OK


def cmd_denoise(args) -> int:
    config = _filter_config(args)
    restored, mask = denoise(read_image(args.input), config)
    write_image(args.output, restored)
    if args.mask:
        write_image(args.mask, mask.to_image())
    log.info("flagged %d pixels", mask.count())
    return EXIT_OK


def cmd_median(args) -> int:
    write_image(args.output, median_filter(read_image(args.input)))
    return EXIT_OK


def cmd_compare(args) -> int:
    orig, noisy, restored = (read_image(p) for p in (args.original, args.noisy, args.restored))
    if (args.truth is None) != (args.detected is None):
        raise UsageError("--truth and --detected must be given together")
    truth = _read_mask(args.truth) if args.truth else None
    detected = _read_mask(args.detected) if args.detected else None
    report = evaluate(orig, noisy, restored, truth, detected)
    names = ["d_orig_noisy", "d_orig_restored", "delta_improvement_percent"]
    if truth is not None:
        names += ["precision", "recall"]
    print(",".join(names))
    print(",".join(f"{getattr(report, n):.6f}" for n in names))
    return EXIT_OK


def cmd_bench(args) -> int:
    config = _filter_config(args)
    if args.image:
        orig = read_image(args.image)
        label = Path(args.image).name
    else:
        orig = generate_synthetic(_synthetic_spec(args))
        label = f"{args.synthetic} {orig.width}x{orig.height}"
    if not args.seeds:
        raise UsageError("--seeds must list at least one seed")
    for p in args.p_list:
        if not 0 < p < 100:
            raise UsageError(f"noise percentages must lie in (0, 100), got {p:g}")
    trials = {} if args.figures else None
    rows = run_bench(orig, args.p_list, args.seeds, config, args.mode, keep=trials)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            write_csv(rows, fh)
    else:
        write_csv(rows, sys.stdout)
    if args.figures:
        # imported lazily so the other commands never load matplotlib
        from .report import plot_curves, plot_panels

        out = Path(args.figures)
        out.mkdir(parents=True, exist_ok=True)
        plot_curves(rows, out / "curves.png")
        p = args.panel_p if args.panel_p in args.p_list else sorted(args.p_list)[0]
        trial = trials[(p, min(args.seeds))]
        plot_panels(orig, trial.noisy, trial.proposed, trial.median, out / "panels.png",
                    caption=f"{label}, {p:g}% damaged, seed {min(args.seeds)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="impulsegraph", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def size(text):
        try:
            if "x" in text:
                w, h = (int(v) for v in text.split("x"))
            else:
                w = h = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"size must be N or WxH, got {text!r}")
        return w, h

    p = sub.add_parser("synth", help="write a synthetic test image")
    p.add_argument("output")
    p.add_argument("--synthetic", choices=KINDS, default="solid_plus_gradient")
    p.add_argument("--size", type=size, default=(128, 128), help="N or WxH (default 128)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("noise", help="inject impulse noise and write the damage mask")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("mask")
    p.add_argument("--p", type=float, required=True, help="fraction of pixels to damage, in [0, 1]")
    p.add_argument("--mode", choices=MODES, default="random_value")
    p.add_argument("--seed", type=int, default=1)
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("denoise", help="detect and repair impulse noise")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("mask", nargs="?", help="where to write the detected mask")
    _add_filter_flags(p)
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("median", help="3x3 median filter")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=cmd_median)

    p = sub.add_parser("compare", help="print distances, improvement and detector scores")
    p.add_argument("original")
    p.add_argument("noisy")
    p.add_argument("restored")
    p.add_argument("--truth", help="true damage mask")
    p.add_argument("--detected", help="detected damage mask")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("bench", help="noise sweep against the median baseline, as CSV")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--image", help="PNM image to corrupt")
    src.add_argument("--synthetic", choices=KINDS, default="solid_plus_gradient")
    p.add_argument("--size", type=size, default=(128, 128))
    p.add_argument("--p-list", type=_float_list, default=list(DEFAULT_P_LIST),
                   help="noise percentages (default 10,...,70)")
    p.add_argument("--seeds", type=_int_list, default=list(DEFAULT_SEEDS))
    p.add_argument("--mode", choices=MODES, default="random_value")
    p.add_argument("--csv", help="output path (default stdout)")
    p.add_argument("--figures", metavar="DIR", help="also render curves.png and panels.png here")
    p.add_argument("--panel-p", type=float, default=20.0, help="noise percentage shown in panels.png")
    _add_filter_flags(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"impulsegraph {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ImpulseGraphError, ValueError) as exc:
        print(f"impulsegraph {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
