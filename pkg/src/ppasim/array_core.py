"""SIMD pixel processor array model.

Every processing element (PE) holds six analog registers (A-F), seven
general binary registers (S0-S6) and a FLAG bit.  Conditional instructions
only take effect in PEs whose FLAG is set.  Row 0 is the NORTH edge and
column 0 the WEST edge.

Operations mutate the given :class:`ArrayState` in place and return it so
calls can be chained.  Each executed operation bumps exactly one counter of
the state's :class:`InstructionTrace`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, fields

import numpy as np

from .image import Image

ANALOG_PLANES = ("A", "B", "C", "D", "E", "F")
BINARY_PLANES = ("S0", "S1", "S2", "S3", "S4", "S5", "S6")
ANALOG_MIN = 0.0
ANALOG_MAX = 255.0


class ArrayError(ValueError):
    pass


class UnknownPlaneError(ArrayError):
    pass


class BoundsError(ArrayError, IndexError):
    pass


class GeometryMismatchError(ArrayError):
    pass


class Direction(enum.Enum):
    """Direction in which data travels during a NEWS transfer.

    The value is the (row, column) step taken by the data.
    """

    NORTH = (-1, 0)
    SOUTH = (1, 0)
    EAST = (0, 1)
    WEST = (0, -1)

    @property
    def opposite(self) -> "Direction":
        dr, dc = self.value
        return Direction((-dr, -dc))


@dataclass(frozen=True)
class ArrayGeometry:
    height: int = 256
    width: int = 256

    def __post_init__(self):
        for name in ("height", "width"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or isinstance(v, bool):
                raise ArrayError(f"{name} must be an integer, got {v!r}")
            if v < 4 or v % 2:
                raise ArrayError(f"{name} must be an even integer >= 4, got {v}")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.height, self.width)

    @property
    def half_height(self) -> int:
        return self.height // 2

    @property
    def half_width(self) -> int:
        return self.width // 2


class AnalogPlane:
    """Grid of saturating scalars confined to [0, 255]."""

    def __init__(self, shape: tuple[int, int], fill: float = 0.0):
        self._values = np.full(shape, np.clip(fill, ANALOG_MIN, ANALOG_MAX), dtype=np.float64)

    @property
    def values(self) -> np.ndarray:
        # read-only view; writes go through write()/__setitem__ so they saturate
        v = self._values.view()
        v.flags.writeable = False
        return v

    @property
    def shape(self) -> tuple[int, int]:
        return self._values.shape

    def write(self, values) -> None:
        values = np.asarray(values, dtype=np.float64)
        if values.shape != self._values.shape:
            raise GeometryMismatchError(f"expected {self._values.shape}, got {values.shape}")
        np.clip(values, ANALOG_MIN, ANALOG_MAX, out=self._values)

    def __getitem__(self, idx):
        return self._values[idx]

    def __setitem__(self, idx, value):
        self._values[idx] = np.clip(value, ANALOG_MIN, ANALOG_MAX)


class BinaryPlane:
    """Grid of bits."""

    def __init__(self, shape: tuple[int, int]):
        self._bits = np.zeros(shape, dtype=bool)

    @property
    def bits(self) -> np.ndarray:
        v = self._bits.view()
        v.flags.writeable = False
        return v

    @property
    def shape(self) -> tuple[int, int]:
        return self._bits.shape

    def write(self, bits) -> None:
        bits = np.asarray(bits)
        if bits.shape != self._bits.shape:
            raise GeometryMismatchError(f"expected {self._bits.shape}, got {bits.shape}")
        if not np.all((bits == 0) | (bits == 1)):
            raise ArrayError("binary plane values must be 0 or 1")
        self._bits[...] = bits.astype(bool)

    def count(self) -> int:
        return int(self._bits.sum())

    def __getitem__(self, idx):
        return self._bits[idx]


@dataclass
class InstructionTrace:
    analog_shift: int = 0
    flag_shift: int = 0
    flag_set_region: int = 0
    flag_clear_all: int = 0
    plane_copy: int = 0
    plane_load: int = 0
    plane_read: int = 0

    @classmethod
    def op_classes(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    def bump(self, op_class: str) -> None:
        if op_class not in self.op_classes():
            raise ArrayError(f"unknown op class {op_class!r}")
        setattr(self, op_class, getattr(self, op_class) + 1)

    def as_dict(self) -> dict[str, int]:
        return {name: getattr(self, name) for name in self.op_classes()}

    def copy(self) -> "InstructionTrace":
        return InstructionTrace(**self.as_dict())

    def total(self) -> int:
        return sum(self.as_dict().values())

    def __sub__(self, other: "InstructionTrace") -> "InstructionTrace":
        return InstructionTrace(**{k: v - getattr(other, k) for k, v in self.as_dict().items()})

    def __add__(self, other: "InstructionTrace") -> "InstructionTrace":
        return InstructionTrace(**{k: v + getattr(other, k) for k, v in self.as_dict().items()})


@dataclass
class ArrayState:
    geometry: ArrayGeometry = field(default_factory=ArrayGeometry)
    background: float = 0.0
    trace: InstructionTrace = field(default_factory=InstructionTrace)

    def __post_init__(self):
        if not ANALOG_MIN <= self.background <= ANALOG_MAX:
            raise ArrayError(f"background must lie in [0, 255], got {self.background}")
        shape = self.geometry.shape
        self.analog = {name: AnalogPlane(shape) for name in ANALOG_PLANES}
        self.binary = {name: BinaryPlane(shape) for name in BINARY_PLANES}
        self.flag = BinaryPlane(shape)

    @classmethod
    def create(cls, height: int = 256, width: int = 256, background: float = 0.0) -> "ArrayState":
        return cls(ArrayGeometry(height, width), background)

    def plane(self, name: str):
        """Look up a register plane by name (A-F, S0-S6 or FLAG)."""
        if name in self.analog:
            return self.analog[name]
        if name in self.binary:
            return self.binary[name]
        if name == "FLAG":
            return self.flag
        raise UnknownPlaneError(f"unknown plane {name!r}")

    def analog_plane(self, name: str) -> AnalogPlane:
        try:
            return self.analog[name]
        except KeyError:
            raise UnknownPlaneError(f"unknown analog plane {name!r}") from None


def _shifted(grid: np.ndarray, direction: Direction, fill) -> np.ndarray:
    """Copy of ``grid`` with its content moved one cell toward ``direction``."""
    out = np.full_like(grid, fill)
    dr, dc = direction.value
    h, w = grid.shape
    dst_r = slice(max(dr, 0), h + min(dr, 0))
    src_r = slice(max(-dr, 0), h + min(-dr, 0))
    dst_c = slice(max(dc, 0), w + min(dc, 0))
    src_c = slice(max(-dc, 0), w + min(-dc, 0))
    out[dst_r, dst_c] = grid[src_r, src_c]
    return out


def _check_range(lo: int, hi: int, limit: int, what: str) -> None:
    if not (0 <= lo <= hi <= limit - 1):
        raise BoundsError(f"{what} range {lo}..{hi} outside 0..{limit - 1}")


def clear_flag_all(state: ArrayState) -> ArrayState:
    state.flag._bits[...] = False
    state.trace.bump("flag_clear_all")
    return state


def set_flag_rows(state: ArrayState, first: int, last: int) -> ArrayState:
    """Set FLAG in every PE of rows ``first..last`` (inclusive)."""
    _check_range(first, last, state.geometry.height, "row")
    state.flag._bits[first:last + 1, :] = True
    state.trace.bump("flag_set_region")
    return state


def set_flag_cols(state: ArrayState, first: int, last: int) -> ArrayState:
    """Set FLAG in every PE of columns ``first..last`` (inclusive)."""
    _check_range(first, last, state.geometry.width, "column")
    state.flag._bits[:, first:last + 1] = True
    state.trace.bump("flag_set_region")
    return state


def shift_analog(state: ArrayState, plane: str, direction: Direction) -> ArrayState:
    """Move ``plane`` one PE toward ``direction`` inside flagged PEs.

    A flagged PE takes the pre-update value of its neighbour on the side
    opposite to ``direction``; the background value enters at the array
    edge.  Unflagged PEs keep their value.
    """
    target = state.analog_plane(plane)
    old = target._values
    moved = _shifted(old, direction, state.background)
    target._values = np.where(state.flag._bits, moved, old)
    state.trace.bump("analog_shift")
    return state


def shift_flag(state: ArrayState, direction: Direction) -> ArrayState:
    """Move the FLAG pattern itself one PE toward ``direction``.

    Not gated by FLAG.  Zeros enter at the edge.
    """
    state.flag._bits = _shifted(state.flag._bits, direction, False)
    state.trace.bump("flag_shift")
    return state


def copy_plane(state: ArrayState, dst: str, src: str) -> ArrayState:
    """Copy analog plane ``src`` into ``dst`` within flagged PEs."""
    source = state.analog_plane(src)._values
    target = state.analog_plane(dst)
    target._values = np.where(state.flag._bits, source, target._values)
    state.trace.bump("plane_copy")
    return state


def load_image(state: ArrayState, plane: str, img: Image) -> ArrayState:
    target = state.analog_plane(plane)
    if img.shape != state.geometry.shape:
        raise GeometryMismatchError(
            f"image is {img.height}x{img.width}, array is "
            f"{state.geometry.height}x{state.geometry.width}")
    target.write(img.pixels)
    state.trace.bump("plane_load")
    return state


def read_plane(state: ArrayState, plane: str) -> Image:
    """Return a copy of a plane as an :class:`Image`.

    Analog values are rounded to the nearest integer; binary planes read as
    0/1.
    """
    p = state.plane(plane)
    if isinstance(p, AnalogPlane):
        pixels = np.rint(p._values).astype(np.uint8)
    else:
        pixels = p._bits.astype(np.uint8)
    state.trace.bump("plane_read")
    return Image(pixels, int(round(state.background)))
