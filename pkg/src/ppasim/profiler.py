"""Cost reports built from instruction traces."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import array_core as core
from . import kernels
from .array_core import ArrayState, InstructionTrace
from .image import Image

OP_CLASSES = InstructionTrace.op_classes()
KERNELS = ("shear", "rotate", "scale")


class CostModelError(ValueError):
    pass


@dataclass(frozen=True)
class CostModel:
    costs: dict[str, float] = field(default_factory=lambda: {k: 1.0 for k in OP_CLASSES})

    def __post_init__(self):
        for key, value in self.costs.items():
            if key not in OP_CLASSES:
                raise CostModelError(f"unknown op class {key!r}")
            if not (math.isfinite(value) and value >= 0):
                raise CostModelError(f"cost for {key} must be a finite non-negative number")
        # classes not mentioned keep the unit default
        merged = {k: 1.0 for k in OP_CLASSES}
        merged.update(self.costs)
        object.__setattr__(self, "costs", merged)

    def scaled(self, factor: float) -> "CostModel":
        return CostModel({k: v * factor for k, v in self.costs.items()})

    @classmethod
    def parse(cls, text: str) -> "CostModel":
        """Parse ``op_class = cost`` lines; ``#`` starts a comment."""
        costs = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip()
            if not sep or not key:
                raise CostModelError(f"line {lineno}: expected 'key = value'")
            if key not in OP_CLASSES:
                raise CostModelError(f"line {lineno}: unknown op class {key!r}")
            try:
                costs[key] = float(value)
            except ValueError:
                raise CostModelError(f"line {lineno}: bad cost {value.strip()!r}") from None
        return cls(costs)

    @classmethod
    def load(cls, path) -> "CostModel":
        return cls.parse(Path(path).read_text())


@dataclass
class CostReport:
    label: str
    params: dict
    counts: dict[str, int]
    costs: dict[str, float]
    total: float

    def to_text(self) -> str:
        """Line-oriented ``key = value`` record (see README for the layout)."""
        lines = [f"kernel = {self.label}"]
        for key in sorted(self.params):
            lines.append(f"param.{key} = {_fmt(self.params[key])}")
        for key in OP_CLASSES:
            lines.append(f"count.{key} = {self.counts[key]}")
        for key in OP_CLASSES:
            lines.append(f"cost.{key} = {_fmt(self.costs[key])}")
        lines.append(f"total_cost = {_fmt(self.total)}")
        return "\n".join(lines) + "\n"


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def report(trace: InstructionTrace, model: CostModel | None = None, label: str = "",
           params: dict | None = None) -> CostReport:
    model = model or CostModel()
    counts = trace.as_dict()
    costs = {k: counts[k] * model.costs[k] for k in OP_CLASSES}
    return CostReport(label, dict(params or {}), counts, costs, float(sum(costs.values())))


def _test_image(height: int, width: int, seed: int) -> Image:
    rng = np.random.default_rng(seed)
    return Image(rng.integers(0, 256, size=(height, width)))


def run_kernel(kernel: str, point, height: int, width: int, seed: int = 0):
    """Run one kernel on a random image; returns (state, params)."""
    state = ArrayState.create(height, width)
    core.load_image(state, "A", _test_image(height, width, seed))
    before = state.trace.copy()
    if kernel == "shear":
        axis, alpha = point if isinstance(point, tuple) else ("horizontal", point)
        kernels.shear(state, "A", axis, alpha)
        params = {"axis": axis, "alpha": float(alpha)}
    elif kernel == "rotate":
        kernels.rotate(state, "A", math.radians(point))
        params = {"theta_deg": float(point)}
    elif kernel == "scale":
        sx, sy = point if isinstance(point, tuple) else (point, point)
        kernels.scale(state, "A", sx, sy)
        params = {"sx": float(sx), "sy": float(sy)}
    else:
        raise ValueError(f"unknown kernel {kernel!r}; expected one of {KERNELS}")
    params.update(height=height, width=width)
    state.trace = state.trace - before
    return state, params


def sweep(kernel: str, grid, model: CostModel | None = None, height: int = 256,
          width: int = 256, seed: int = 0) -> list[CostReport]:
    """One report per grid point, in grid order.

    Grid points are alpha values (or ``(axis, alpha)``) for ``shear``, angles
    in degrees for ``rotate`` and factors (or ``(sx, sy)``) for ``scale``.
    Counts cover the kernel alone; the image load is excluded.
    """
    if kernel not in KERNELS:
        raise ValueError(f"unknown kernel {kernel!r}; expected one of {KERNELS}")
    out = []
    for point in grid:
        state, params = run_kernel(kernel, point, height, width, seed)
        out.append(report(state.trace, model, kernel, params))
    return out
