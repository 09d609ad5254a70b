"""Plain 8-bit grayscale image used by the oracle and file I/O."""

from __future__ import annotations

import numpy as np


class Image:
    """H x W grid of integer gray values in [0, 255].

    ``background`` is the value that fills cells vacated by a transform.
    Construction rejects out-of-range or non-integral data instead of
    clamping it.
    """

    __slots__ = ("pixels", "background")

    def __init__(self, pixels, background: int = 0):
        arr = np.asarray(pixels)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"image must be a non-empty 2-D grid, got shape {arr.shape}")
        if arr.dtype.kind == "f":
            if not np.all(np.isfinite(arr)) or not np.all(arr == np.round(arr)):
                raise ValueError("image values must be integers")
        elif arr.dtype.kind not in "iub":
            raise ValueError(f"unsupported pixel dtype {arr.dtype}")
        if arr.size and (arr.min() < 0 or arr.max() > 255):
            raise ValueError("image values must lie in [0, 255]")
        if not 0 <= int(background) <= 255:
            raise ValueError("background must lie in [0, 255]")
        self.pixels = arr.astype(np.uint8)
        self.background = int(background)

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    def copy(self) -> "Image":
        return Image(self.pixels.copy(), self.background)

    def transpose(self) -> "Image":
        return Image(self.pixels.T.copy(), self.background)

    def __eq__(self, other):
        if not isinstance(other, Image):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.pixels, other.pixels))

    def __repr__(self):
        return f"Image({self.height}x{self.width}, background={self.background})"
