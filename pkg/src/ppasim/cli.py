"""Command-line front end: run kernels, check them against the oracle, profile them."""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import array_core as core
from . import kernels, oracle, profiler
from .array_core import ArrayGeometry, ArrayState
from .image import Image
from .pgm import PATTERNS, make_pattern, read_pgm, write_pgm

KERNEL_NAMES = ("shear", "rotate", "scale")


class StageError(Exception):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage


@dataclass
class RunConfig:
    kernel: str
    height: int = 256
    width: int = 256
    axis: str = "horizontal"
    alpha: float = 0.0
    theta_deg: float = 0.0
    sx: float = 1.0
    sy: float = 1.0
    input_path: str | None = None
    pattern: str = "disk"
    output_path: str | None = None
    trace_path: str | None = None
    cost_model_path: str | None = None
    background: int = 0
    verify: bool = False
    dump_stages: bool = False
    ascii_output: bool = False

    def validate(self) -> None:
        if self.kernel not in KERNEL_NAMES:
            raise ValueError(f"unknown kernel {self.kernel!r}")
        if self.kernel == "shear":
            kernels.ShearSpec(self.axis, self.alpha)
        elif self.kernel == "rotate":
            kernels.RotationSpec(math.radians(self.theta_deg))
        else:
            kernels.ScaleSpec(self.sx, self.sy)
        if not 0 <= self.background <= 255:
            raise ValueError("background must lie in [0, 255]")
        for name in ("input_path", "output_path", "trace_path", "cost_model_path"):
            v = getattr(self, name)
            if v is not None and not str(v):
                raise ValueError(f"{name} must not be empty")
        if self.dump_stages and not self.output_path:
            raise ValueError("--dump-stages needs --output")

    @property
    def params(self) -> dict:
        if self.kernel == "shear":
            return {"axis": self.axis, "alpha": float(self.alpha)}
        if self.kernel == "rotate":
            return {"theta_deg": float(self.theta_deg)}
        return {"sx": float(self.sx), "sy": float(self.sy)}


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except Exception as exc:  # noqa: BLE001 - every failure is reported by stage
        raise StageError(name, exc) from exc


def _load_input(cfg: RunConfig) -> Image:
    if cfg.input_path:
        img = read_pgm(cfg.input_path, cfg.background)
    else:
        img = make_pattern(cfg.pattern, cfg.height, cfg.width, cfg.background)
    ArrayGeometry(img.height, img.width)
    return img


def _apply(cfg: RunConfig, state: ArrayState, stages: list | None):
    if cfg.kernel == "shear":
        kernels.shear(state, "A", cfg.axis, cfg.alpha)
    elif cfg.kernel == "rotate":
        kernels.rotate(state, "A", math.radians(cfg.theta_deg), stages=stages)
    else:
        kernels.scale(state, "A", cfg.sx, cfg.sy, stages=stages)


def reference(cfg: RunConfig, img: Image) -> Image:
    if cfg.kernel == "shear":
        return oracle.ref_shear(img, cfg.axis, cfg.alpha)
    if cfg.kernel == "rotate":
        return oracle.ref_rotate_three_shear(img, math.radians(cfg.theta_deg))
    return oracle.ref_scale2(img, cfg.sx, cfg.sy)


def _stage_path(output: str, k: int) -> Path:
    p = Path(output)
    return p.with_name(f"{p.stem}.stage{k}{p.suffix or '.pgm'}")


def run(cfg: RunConfig, out=None) -> int:
    """Execute one kernel run; returns the process exit status."""
    out = out or sys.stdout
    _stage("config", cfg.validate)
    img = _stage("load", _load_input, cfg)
    model = (_stage("cost-model", profiler.CostModel.load, cfg.cost_model_path)
             if cfg.cost_model_path else profiler.CostModel())

    state = ArrayState.create(img.height, img.width, background=cfg.background)
    core.load_image(state, "A", img)
    before = state.trace.copy()
    stages = [] if cfg.dump_stages else None
    _stage("kernel", _apply, cfg, state, stages)
    kernel_trace = state.trace - before
    result = core.read_plane(state, "A")

    if cfg.output_path:
        _stage("write", write_pgm, result, cfg.output_path, not cfg.ascii_output)
        for k, stage_img in enumerate(stages or [], 1):
            _stage("write", write_pgm, stage_img, _stage_path(cfg.output_path, k),
                   not cfg.ascii_output)

    params = dict(cfg.params, height=img.height, width=img.width)
    rep = profiler.report(kernel_trace, model, cfg.kernel, params)
    if cfg.trace_path:
        _stage("trace", Path(cfg.trace_path).write_text, rep.to_text())
    print(f"{cfg.kernel}: analog_shift={rep.counts['analog_shift']} total_cost={rep.total:g}",
          file=out)

    if cfg.verify:
        expected = _stage("verify", reference, cfg, img)
        count, fraction = oracle.diff_images(result, expected)
        print(f"verify: mismatch_count={count} mismatch_fraction={fraction:.6g}", file=out)
        if count:
            return 1
    return 0


# ---------------------------------------------------------------- verify-suite

def verify_suite(sizes, n_images: int = 2, seed: int = 0, out=None) -> int:
    """Compare every kernel with the oracle on random images; returns failures."""
    out = out or sys.stdout
    rng = np.random.default_rng(seed)
    failures = 0
    for n in sizes:
        images = [Image(rng.integers(0, 256, size=(n, n))) for _ in range(n_images)]
        cases = [("shear", axis, k / 16) for axis in kernels.AXES for k in range(-16, 17)]
        cases += [("rotate", None, d) for d in (-45, -30, -15, -5, 5, 15, 30, 45)]
        cases += [("scale", None, f) for f in (0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0)]
        for kind, axis, p in cases:
            if kind == "shear":
                cfg = RunConfig("shear", n, n, axis=axis, alpha=p)
            elif kind == "rotate":
                cfg = RunConfig("rotate", n, n, theta_deg=p)
            else:
                cfg = RunConfig("scale", n, n, sx=p, sy=p)
            bad = 0
            for img in images:
                state = ArrayState.create(n, n)
                core.load_image(state, "A", img)
                _apply(cfg, state, None)
                bad += oracle.diff_images(core.read_plane(state, "A"), reference(cfg, img))[0]
            failures += bool(bad)
            label = f"{kind} {axis or ''} {p:g}".replace("  ", " ")
            print(f"{'ok  ' if not bad else 'FAIL'} {n}x{n} {label} mismatches={bad}", file=out)
    print(f"verify-suite: {failures} failing case(s)", file=out)
    return failures


# ---------------------------------------------------------------- argument parsing

def _floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-i", "--input", help="input PGM (P2 or P5); overrides --pattern")
    common.add_argument("-o", "--output", help="output PGM path")
    common.add_argument("--pattern", default="disk", choices=PATTERNS,
                        help="synthetic input when no --input is given")
    common.add_argument("--height", type=int, default=256)
    common.add_argument("--width", type=int, default=256)
    common.add_argument("--background", type=int, default=0,
                        help="value entering at the array edges")
    common.add_argument("--trace", help="write the cost record to this file")
    common.add_argument("--cost-model", help="op-class cost file (key = value lines)")
    common.add_argument("--dump-stages", action="store_true",
                        help="also write one image per intermediate pass")
    common.add_argument("--verify", action="store_true",
                        help="compare with the scalar oracle; nonzero exit on mismatch")
    common.add_argument("--ascii", action="store_true", help="write P2 instead of P5")

    parser = argparse.ArgumentParser(prog="ppasim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("shear", parents=[common], help="shear an image")
    p.add_argument("--axis", choices=kernels.AXES, default="horizontal")
    p.add_argument("--alpha", type=float, required=True)

    p = sub.add_parser("rotate", parents=[common], help="rotate by three shears")
    p.add_argument("--theta", type=float, required=True, help="angle in degrees")

    p = sub.add_parser("scale", parents=[common], help="nearest-neighbour scaling")
    p.add_argument("--sx", type=float, default=1.0)
    p.add_argument("--sy", type=float, default=1.0)

    p = sub.add_parser("verify-suite", help="run the oracle-equivalence grid")
    p.add_argument("--sizes", default="16,64", help="comma-separated square sizes")
    p.add_argument("--images", type=int, default=2, help="random images per case")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("sweep", help="cost reports over a parameter grid")
    p.add_argument("kernel", choices=profiler.KERNELS)
    p.add_argument("--grid", required=True,
                   help="comma-separated values: alpha (shear), degrees (rotate), factor (scale)")
    p.add_argument("--axis", choices=kernels.AXES, default="horizontal")
    p.add_argument("--height", type=int, default=256)
    p.add_argument("--width", type=int, default=256)
    p.add_argument("--cost-model")
    p.add_argument("--trace", help="write all records to this file")
    return parser


def config_from_args(args) -> RunConfig:
    cfg = RunConfig(kernel=args.command, height=args.height, width=args.width,
                    input_path=args.input, pattern=args.pattern, output_path=args.output,
                    trace_path=args.trace, cost_model_path=args.cost_model,
                    background=args.background, verify=args.verify,
                    dump_stages=args.dump_stages, ascii_output=args.ascii)
    if args.command == "shear":
        cfg.axis, cfg.alpha = args.axis, args.alpha
    elif args.command == "rotate":
        cfg.theta_deg = args.theta
    else:
        cfg.sx, cfg.sy = args.sx, args.sy
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify-suite":
            sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
            return 1 if verify_suite(sizes, args.images, args.seed) else 0
        if args.command == "sweep":
            model = (_stage("cost-model", profiler.CostModel.load, args.cost_model)
                     if args.cost_model else None)
            grid = _stage("config", _floats, args.grid)
            if args.kernel == "shear":
                grid = [(args.axis, a) for a in grid]
            reports = _stage("kernel", profiler.sweep, args.kernel, grid, model,
                             args.height, args.width)
            text = "\n".join(r.to_text() for r in reports)
            if args.trace:
                _stage("trace", Path(args.trace).write_text, text)
            for r in reports:
                params = " ".join(f"{k}={v}" for k, v in r.params.items()
                                  if k not in ("height", "width"))
                print(f"{params} analog_shift={r.counts['analog_shift']} total_cost={r.total:g}")
            return 0
        return run(config_from_args(args))
    except StageError as exc:
        print(f"ppasim: error in {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
