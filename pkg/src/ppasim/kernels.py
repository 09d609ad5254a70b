"""Shear, rotation and nearest-neighbour scaling as array microprograms.

All kernels work on one analog plane of an :class:`ArrayState` using only
FLAG manipulation and NEWS transfers from :mod:`ppasim.array_core`.  The
image origin is the array centre.  Rows are split into a top half
(``0..H/2-1``) and a bottom half, columns into a left half and a right half.

Pixel movement contract (``half = H/2`` or ``W/2``):

* horizontal shear by ``alpha`` moves row ``i`` by ``ceil(alpha*(H/2 - i))``
  columns, positive toward EAST;
* vertical shear moves column ``j`` by ``ceil(alpha*(W/2 - j))`` rows,
  positive toward SOUTH;
* down-scaling removes, per half, the source lines listed by
  :func:`eliminated_offsets` and packs the survivors toward the centre;
* up-scaling repeats the source lines listed by :func:`duplicated_offsets`
  and pushes content outward, losing whatever crosses the edge.

Offsets within a half count outward from the innermost line (offset 0).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from . import array_core as core
from .array_core import ArrayState, Direction

HORIZONTAL = "horizontal"
VERTICAL = "vertical"
AXES = (HORIZONTAL, VERTICAL)

# Test hook: when True the shear kernels stop one curtain step early.
_inject_fault = False


class LossyShearWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ShearSpec:
    axis: str
    alpha: float

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {self.axis!r}")
        if not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite")
        if abs(self.alpha) > 1:
            warnings.warn(f"|alpha| = {abs(self.alpha)} > 1: most content leaves the array",
                          LossyShearWarning, stacklevel=3)


@dataclass(frozen=True)
class RotationSpec:
    theta: float

    def __post_init__(self):
        if not math.isfinite(self.theta) or abs(self.theta) > math.pi / 2:
            raise ValueError(f"|theta| must not exceed pi/2, got {self.theta}")

    @property
    def shear_factors(self) -> tuple[float, float]:
        """(horizontal factor, vertical factor) of the three-shear split."""
        return -math.tan(self.theta / 2), math.sin(self.theta)


@dataclass(frozen=True)
class ScaleSpec:
    sx: float = 1.0
    sy: float = 1.0

    def __post_init__(self):
        for name, v in (("sx", self.sx), ("sy", self.sy)):
            _check_scale_factor(v, name)


def _check_scale_factor(factor: float, name: str = "factor") -> None:
    if not (math.isfinite(factor) and 0 < factor <= 2):
        raise ValueError(f"{name} must lie in (0, 2], got {factor}")


@dataclass
class ShiftProfile:
    shifts: list[int]
    sets: dict[int, list[int]] = field(default_factory=dict)
    max_shift: int = 0


def row_shifts(alpha: float, height: int) -> ShiftProfile:
    """Per-line shift amounts ``ceil(alpha*(height/2 - i))`` for a shear."""
    if height < 4 or height % 2:
        raise ValueError(f"height must be an even integer >= 4, got {height}")
    half = height // 2
    shifts = [math.ceil(alpha * (half - i)) for i in range(height)]
    sets: dict[int, list[int]] = {}
    for i, r in enumerate(shifts):
        if r:
            sets.setdefault(r, []).append(i)
    return ShiftProfile(shifts, sets, math.ceil(abs(alpha) * half))


# ---------------------------------------------------------------- axis plumbing
# A "line" is a row for horizontal work and a column for vertical work.
# Lines are selected by FLAG; data moves along each line.

_ALONG = {HORIZONTAL: (Direction.WEST, Direction.EAST),
          VERTICAL: (Direction.NORTH, Direction.SOUTH)}
_ACROSS = {HORIZONTAL: (Direction.NORTH, Direction.SOUTH),
           VERTICAL: (Direction.WEST, Direction.EAST)}


def _n_lines(state: ArrayState, axis: str) -> int:
    return state.geometry.height if axis == HORIZONTAL else state.geometry.width


def _flag_lines(state: ArrayState, axis: str, first: int, last: int) -> None:
    if axis == HORIZONTAL:
        core.set_flag_rows(state, first, last)
    else:
        core.set_flag_cols(state, first, last)


def _flag_band(state: ArrayState, axis: str, first: int, last: int) -> None:
    """Flag positions ``first..last`` along the data axis (across all lines)."""
    if axis == HORIZONTAL:
        core.set_flag_cols(state, first, last)
    else:
        core.set_flag_rows(state, first, last)


def _shift_n(state: ArrayState, direction: Direction, n: int) -> None:
    for _ in range(n):
        core.shift_flag(state, direction)


# ---------------------------------------------------------------- shear

def _shear(state: ArrayState, plane: str, alpha: float, axis: str) -> ArrayState:
    state.analog_plane(plane)
    n_lines = _n_lines(state, axis)
    half = n_lines // 2
    shifts = [math.ceil(alpha * (half - i)) for i in range(n_lines)]
    steps = math.ceil(abs(alpha) * half)
    if _inject_fault:
        steps = max(steps - 1, 0)
    toward_low, toward_high = _ACROSS[axis]
    back, forward = _ALONG[axis]

    # Lines 0..half-1: those needing |shift| >= n form a prefix 0..last[n].
    # The curtain retreats toward line 0 as lines finish.
    def last_needing(n):
        last = -1
        for i in range(half):
            if abs(shifts[i]) >= n:
                last = i
        return last

    # Lines half..end: those needing |shift| >= n form a suffix first[n]..end.
    def first_needing(n):
        for i in range(half, n_lines):
            if abs(shifts[i]) >= n:
                return i
        return n_lines

    low_dir = forward if alpha > 0 else back
    high_dir = back if alpha > 0 else forward

    last = last_needing(1)
    if steps and last >= 0:
        core.clear_flag_all(state)
        _flag_lines(state, axis, 0, last)
        for n in range(1, steps + 1):
            core.shift_analog(state, plane, low_dir)
            if n < steps:
                nxt = last_needing(n + 1)
                _shift_n(state, toward_low, last - nxt)
                last = nxt

    first = first_needing(1)
    if steps and first < n_lines:
        core.clear_flag_all(state)
        _flag_lines(state, axis, first, n_lines - 1)
        for n in range(1, steps + 1):
            core.shift_analog(state, plane, high_dir)
            if n < steps:
                nxt = first_needing(n + 1)
                _shift_n(state, toward_high, nxt - first)
                first = nxt
    return state


def shear_horizontal(state: ArrayState, plane: str, alpha: float) -> ArrayState:
    """Shear ``plane`` parallel to the x axis; row ``i`` moves ``ceil(alpha*(H/2-i))`` east.

    One half is processed at a time.  FLAG marks the rows still short of
    their target offset, every step moves all of them together, and the
    FLAG curtain is then pulled back over the rows that are done.  A half
    with any nonzero shift costs exactly ``ceil(|alpha|*H/2)`` analog
    shifts.
    """
    ShearSpec(HORIZONTAL, alpha)
    return _shear(state, plane, alpha, HORIZONTAL)


def shear_vertical(state: ArrayState, plane: str, alpha: float) -> ArrayState:
    """Shear parallel to the y axis; column ``j`` moves ``ceil(alpha*(W/2-j))`` south."""
    ShearSpec(VERTICAL, alpha)
    return _shear(state, plane, alpha, VERTICAL)


def shear(state: ArrayState, plane: str, axis: str, alpha: float) -> ArrayState:
    ShearSpec(axis, alpha)
    return _shear(state, plane, alpha, axis)


def shear_shift_count(alpha: float, n_lines: int) -> int:
    """Analog shifts issued by a shear over ``n_lines`` lines."""
    half = n_lines // 2
    steps = math.ceil(abs(alpha) * half)
    shifts = [math.ceil(alpha * (half - i)) for i in range(n_lines)]
    active = int(any(shifts[:half])) + int(any(shifts[half:]))
    return steps * active


def rotate(state: ArrayState, plane: str, theta: float, stages=None) -> ArrayState:
    """Rotate ``plane`` by ``theta`` radians about the array centre.

    Runs horizontal, vertical, horizontal shears with factors
    ``-tan(theta/2)``, ``sin(theta)``, ``-tan(theta/2)``.  If ``stages`` is a
    list, the plane is read back after each shear and appended to it.
    """
    spec = RotationSpec(theta)
    a1, a2 = spec.shear_factors
    for axis, alpha in ((HORIZONTAL, a1), (VERTICAL, a2), (HORIZONTAL, a1)):
        _shear(state, plane, alpha, axis)
        if stages is not None:
            stages.append(core.read_plane(state, plane))
    return state


def rotation_shift_count(theta: float, height: int, width: int) -> int:
    a1, a2 = RotationSpec(theta).shear_factors
    return 2 * shear_shift_count(a1, height) + shear_shift_count(a2, width)


# ---------------------------------------------------------------- scaling

def elimination_params(alpha: float, half: int) -> tuple[int, int]:
    """Lines removed per half (E) and their spacing (K) for down-scaling.

    ``E = half - ceil(alpha*half)``, ``K = ceil(half/E)``; ``(0, 0)`` means
    nothing is removed.
    """
    if not (0 < alpha <= 1):
        raise ValueError(f"down-scaling factor must lie in (0, 1], got {alpha}")
    count = half - math.ceil(alpha * half)
    if count == 0:
        return 0, 0
    return count, math.ceil(half / count)


def duplication_params(alpha: float, half: int) -> tuple[int, int]:
    """Duplications per half (D) and spacing (K) for up-scaling by ``alpha``.

    Same equations applied to the expansion amount ``alpha - 1``:
    ``D = ceil((alpha-1)*half)``, ``K = ceil(half/D)``.
    """
    if not (1 <= alpha <= 2):
        raise ValueError(f"up-scaling factor must lie in [1, 2], got {alpha}")
    count = math.ceil((alpha - 1) * half)
    if count == 0:
        return 0, 0
    return count, math.ceil(half / count)


def eliminated_offsets(alpha: float, half: int) -> list[int]:
    """Ascending source offsets removed from one half when down-scaling.

    Evenly spaced offsets ``K-1, 2K-1, ...`` that fit inside the half; any
    shortfall against E is taken from the outermost remaining lines so that
    exactly E lines go.
    """
    count, spacing = elimination_params(alpha, half)
    regular = [m * spacing - 1 for m in range(1, count + 1) if m * spacing - 1 < half]
    shortfall = count - len(regular)
    if shortfall:
        taken = set(regular)
        rest = [o for o in range(half) if o not in taken]
        regular += rest[len(rest) - shortfall:]
    return sorted(regular)


def duplicated_offsets(alpha: float, half: int) -> list[int]:
    """Ascending source offsets repeated in one half when up-scaling.

    Offsets ``K-1, 2K-1, ...``; the outermost line of a half is never listed
    since its copy would fall outside the array.
    """
    count, spacing = duplication_params(alpha, half)
    return [m * spacing - 1 for m in range(1, count + 1) if m * spacing - 1 <= half - 2]


def _duplication_bounds(alpha: float, half: int) -> list[int]:
    bounds = [o + k + 1 for k, o in enumerate(duplicated_offsets(alpha, half))]
    return [b for b in bounds if b <= half - 1]


def _scale(state: ArrayState, plane: str, alpha: float, axis: str) -> ArrayState:
    state.analog_plane(plane)
    size = _n_lines(state, VERTICAL if axis == HORIZONTAL else HORIZONTAL)
    half = size // 2
    back, forward = _ALONG[axis]
    # high side: positions half..size-1, offset o at half+o, outward = forward
    # low side: positions 0..half-1, offset o at half-1-o, outward = back
    sides = ((lambda o: half + o, forward, back, size - 1),
             (lambda o: half - 1 - o, back, forward, 0))
    # the band is always boundary..edge, and the boundary only moves outward

    if alpha < 1:
        offsets = eliminated_offsets(alpha, half)
        if not offsets:
            return state
        # k-th removal (0-based) happens at position offsets[k] - k once the
        # k earlier removals have packed everything beyond them inward.
        bounds = [o - k for k, o in enumerate(offsets)]
        for pos, outward, inward, edge in sides:
            core.clear_flag_all(state)
            lo, hi = sorted((pos(bounds[0]), edge))
            _flag_band(state, axis, lo, hi)
            for k, b in enumerate(bounds):
                core.shift_analog(state, plane, inward)
                if k + 1 < len(bounds):
                    _shift_n(state, outward, bounds[k + 1] - b)
    elif alpha > 1:
        # Innermost first: the k-th copy lands at offsets[k] + k + 1 after the
        # earlier copies pushed it outward.  Copies landing past the edge are
        # skipped.
        bounds = _duplication_bounds(alpha, half)
        if not bounds:
            return state
        for pos, outward, _inward, edge in sides:
            core.clear_flag_all(state)
            lo, hi = sorted((pos(bounds[0]), edge))
            _flag_band(state, axis, lo, hi)
            for k, b in enumerate(bounds):
                core.shift_analog(state, plane, outward)
                if k + 1 < len(bounds):
                    _shift_n(state, outward, bounds[k + 1] - b)
    return state


def scale_horizontal(state: ArrayState, plane: str, alpha: float) -> ArrayState:
    """Nearest-neighbour horizontal scaling about the centre column line.

    For ``alpha < 1`` the flagged band (boundary column to array edge)
    copies from its outer neighbour, which overwrites the boundary column;
    the FLAG curtain then slides outward to the next column due for removal.
    For ``alpha > 1`` the band copies from its inner neighbour instead, so
    the column just inside the boundary appears twice.  One analog shift per
    removed or duplicated column per half; ``alpha == 1`` does nothing.
    """
    _check_scale_factor(alpha, "alpha")
    return _scale(state, plane, alpha, HORIZONTAL)


def scale_vertical(state: ArrayState, plane: str, beta: float) -> ArrayState:
    _check_scale_factor(beta, "beta")
    return _scale(state, plane, beta, VERTICAL)


def scale(state: ArrayState, plane: str, sx: float, sy: float, stages=None) -> ArrayState:
    ScaleSpec(sx, sy)
    _scale(state, plane, sx, HORIZONTAL)
    if stages is not None:
        stages.append(core.read_plane(state, plane))
    _scale(state, plane, sy, VERTICAL)
    if stages is not None:
        stages.append(core.read_plane(state, plane))
    return state


def scale_shift_count(alpha: float, half: int) -> int:
    """Analog shifts issued by a one-axis scale (both halves)."""
    if alpha < 1:
        return 2 * len(eliminated_offsets(alpha, half))
    if alpha > 1:
        return 2 * len(_duplication_bounds(alpha, half))
    return 0
