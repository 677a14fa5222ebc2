"""
Utilidades gerais do projeto.
"""

import numpy as np
import numpy.typing as npt

# Buffer RGB H×W×3 em float64, valores em [0, 1]
ImageBuffer = npt.NDArray[np.float64]


def is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def to_uint8(image: ImageBuffer) -> npt.NDArray[np.uint8]:
    """Quantiza um buffer [0, 1] para 8 bits (arredondamento half-even)."""
    return np.clip(np.rint(image * 255.0), 0, 255).astype(np.uint8)


def from_uint8(pixels: npt.NDArray[np.uint8]) -> ImageBuffer:
    return pixels.astype(np.float64) / 255.0
