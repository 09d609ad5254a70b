"""Pixel processor array simulator with shear, rotation and scaling kernels."""

from .array_core import ArrayGeometry, ArrayState, Direction, InstructionTrace
from .image import Image

__all__ = ["ArrayGeometry", "ArrayState", "Direction", "Image", "InstructionTrace"]
__version__ = "0.1.0"
