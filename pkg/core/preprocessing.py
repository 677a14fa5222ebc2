"""
Pré-processamento de imagens lidas do disco antes da análise espectral.

Pensado para Python 3.12.
"""

from __future__ import annotations

from typing import Optional, Tuple

import numpy as np
from PIL import Image

from core.utils import ImageBuffer, from_uint8, is_power_of_two


def para_rgb(imagem: Image.Image) -> Image.Image:
    """Converte qualquer modo do Pillow (L, P, RGBA, I;16...) para RGB."""
    if imagem.mode == "RGB":
        return imagem
    return imagem.convert("RGB")


def redimensionar(imagem: Image.Image, resolution: Optional[int]) -> Image.Image:
    """
    Leva a imagem para resolution × resolution (LANCZOS).

    Usado só para comparar com datasets externos de outra resolução; sem
    `resolution` a imagem passa intacta.
    """
    if resolution is None or imagem.size == (resolution, resolution):
        return imagem
    return imagem.resize((resolution, resolution), Image.Resampling.LANCZOS)


def preparar_imagem(imagem: Image.Image, resolution: Optional[int] = None) -> ImageBuffer:
    """Pipeline completo: RGB -> redimensionamento opcional -> float [0, 1]."""
    imagem = redimensionar(para_rgb(imagem), resolution)
    return from_uint8(np.asarray(imagem, dtype=np.uint8))


def checar_formato(shape: Tuple[int, ...]) -> Tuple[bool, str]:
    """
    Verifica se um buffer H×W×3 é quadrado com lado potência de dois.

    Returns:
        Tupla (valido: bool, mensagem: str)
    """
    altura, largura = shape[0], shape[1]
    if altura != largura:
        return False, f"imagem não quadrada ({largura}x{altura})"
    if not is_power_of_two(altura):
        return False, f"lado {altura} não é potência de dois"
    return True, ""
