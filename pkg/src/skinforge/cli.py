"""Batch command-line interface.

Subcommands: ``detect`` (skin mask), ``adjust`` (tone adjustment),
``stages`` (dump intermediate planes), ``encode-range`` (Q15 register for
a range spec). Exit codes: 0 success, 1 usage error, 2 I/O or parse error.
``SKINFORGE_LOG`` (error | info | debug) controls stderr diagnostics.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .imageio import ImageParseError, UnsupportedFormatError, load_image, save_image
from .pipeline import PipelineConfig, detect_oracle, pipeline_stats, process, run_stages
from .skin_model import SkinModelParams
from .tone_adjust import AdjustRegisters, bit_pattern, parse_range

log = logging.getLogger("skinforge")

_LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="skinforge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_flags(p: _Parser) -> None:
        p.add_argument("--gradient-threshold", type=float, default=None,
                       help="texture gradient threshold (default 24)")
        p.add_argument("--config", default=None,
                       help="key=value file overriding the skin model parameters")

    p = sub.add_parser("detect", parents=[], help="write the skin mask of an image")
    p.add_argument("--in", dest="infile", required=True, help="input image (PPM or PNG)")
    p.add_argument("--out", dest="outfile", required=True, help="output mask image")
    add_model_flags(p)

    p = sub.add_parser("adjust", help="apply skin-tone adjustment to an image")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", dest="outfile", required=True)
    p.add_argument("--i-range", required=True, help="range spec: '-18%%' or 'q15:-5898'")
    p.add_argument("--q-range", required=True)
    p.add_argument("--mask-out", default=None, help="also write the skin mask here")
    add_model_flags(p)

    p = sub.add_parser("stages", help="dump gradient, raw mask, opened mask, adjusted")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out-dir", dest="outdir", required=True)
    p.add_argument("--i-range", default="0%")
    p.add_argument("--q-range", default="0%")
    add_model_flags(p)

    return parser


def _model_from_args(args: argparse.Namespace) -> SkinModelParams:
    if args.config:
        model = SkinModelParams.from_config_text(Path(args.config).read_text())
    else:
        model = SkinModelParams()
    if args.gradient_threshold is not None:
        model = replace(model, gradient_threshold=args.gradient_threshold)
    return model


def _regs_from_args(args: argparse.Namespace) -> AdjustRegisters:
    try:
        return AdjustRegisters(parse_range(args.i_range), parse_range(args.q_range))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _quantize_gradient(plane: np.ndarray) -> np.ndarray:
    """8-bit view of a gradient plane, rounding ties away from zero."""
    q = np.clip(np.floor(plane + 0.5), 0.0, 255.0).astype(np.uint8)
    return np.repeat(q[:, :, None], 3, axis=2)


def _cmd_detect(args: argparse.Namespace) -> int:
    cfg = PipelineConfig(model=_model_from_args(args))
    frame = load_image(args.infile)
    mask = detect_oracle(frame, cfg)
    save_image(mask, args.outfile)
    log.info("detect: %d of %d pixels skin", int(np.count_nonzero(mask)), mask.size)
    return 0


def _cmd_adjust(args: argparse.Namespace) -> int:
    cfg = PipelineConfig(model=_model_from_args(args), regs=_regs_from_args(args))
    frame = load_image(args.infile)
    out = process(frame, cfg)
    save_image(out.adjusted, args.outfile)
    if args.mask_out:
        save_image(out.skin_mask, args.mask_out)
    log.info("adjust: %s", pipeline_stats(out))
    return 0


def _cmd_stages(args: argparse.Namespace) -> int:
    cfg = PipelineConfig(model=_model_from_args(args), regs=_regs_from_args(args))
    frame = load_image(args.infile)
    planes = run_stages(frame, cfg)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    save_image(_quantize_gradient(planes.gradient), outdir / "gradient.ppm")
    save_image(planes.raw_mask, outdir / "raw_mask.ppm")
    save_image(planes.opened_mask, outdir / "opened_mask.ppm")
    save_image(planes.adjusted, outdir / "adjusted.ppm")
    log.info("stages: wrote 4 planes to %s", outdir)
    return 0


def _cmd_encode_range(argv: list[str]) -> int:
    values = [a for a in argv if a != "--"]
    if len(values) != 1:
        raise UsageError("encode-range takes exactly one VALUE argument")
    try:
        reg = parse_range(values[0])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(f"{reg}  {bit_pattern(reg)}")
    return 0


def _setup_logging() -> None:
    level = _LOG_LEVELS.get(os.environ.get("SKINFORGE_LOG", "error").lower(), logging.ERROR)
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(message)s")


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        # encode-range takes values that look like flags ('-18%'), so it
        # bypasses argparse.
        if argv and argv[0] == "encode-range":
            return _cmd_encode_range(argv[1:])
        args = _build_parser().parse_args(argv)
        handler = {"detect": _cmd_detect, "adjust": _cmd_adjust, "stages": _cmd_stages}[args.command]
        return handler(args)
    except UsageError as exc:
        print(f"skinforge: usage error: {exc}", file=sys.stderr)
        return 1
    except (ImageParseError, UnsupportedFormatError, ValueError) as exc:
        print(f"skinforge: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"skinforge: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
