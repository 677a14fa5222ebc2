"""
Configurações centralizadas do primgen.
"""

import os
from dataclasses import dataclass
from typing import Tuple


@dataclass
class SpectrumDefaults:
    """Parâmetros da síntese de ruído rosa."""
    a_min: float = 0.5
    a_max: float = 3.5
    normalize: str = "minmax"
    min_resolution: int = 8
    max_resolution: int = 4096


@dataclass
class ShapeDefaults:
    """Valores padrão da composição de primitivas."""
    shapes: int = 100
    size_policy: str = "decay"
    decay_ratio: float = 1 / 5  # cap(0) = H/5
    rand_ratio: float = 1 / 5
    min_size: float = 1.0
    kinds: Tuple[str, ...] = ("ellipse", "rectangle", "line")


@dataclass
class SaliencyDefaults:
    """Tamanho e região do objeto saliente, em frações de H."""
    size_min: float = 1 / 3
    size_max: float = 2 / 3
    center_min: float = 1 / 3
    center_max: float = 2 / 3
    kinds: Tuple[str, ...] = ("ellipse", "rectangle")


@dataclass
class GeneratorDefaults:
    """Receita final (PrimitivesPS, N=100, Decay, a ~ U(0.5, 3.5))."""
    variant: str = "primitives-ps"
    resolution: int = 256
    count: int = 1000
    seed: int = 0
    workers_env: str = "PRIMGEN_WORKERS"

    def default_workers(self) -> int:
        valor = os.environ.get(self.workers_env)
        if valor:
            return int(valor)
        return os.cpu_count() or 1


@dataclass
class AnalysisDefaults:
    """Constantes das métricas de espectro e de filtros."""
    ssim_k1: float = 0.01
    ssim_k2: float = 0.03
    ssim_window: int = 7
    slope_min_freq: int = 2
    slope_max_divisor: int = 4  # banda [2, H/4]
    slope_min_rings: int = 4
    log_floor: float = 1e-12
    norm_eps: float = 1e-12


@dataclass
class OutputDefaults:
    """Nomes e formatos dos artefatos gravados."""
    filename_pattern: str = "img_{index:08d}.png"
    filename_glob: str = "img_*.png"
    manifest_name: str = "manifest.json"
    log_every: int = 100


class Config:
    """Configuração global da aplicação."""

    spectrum = SpectrumDefaults()
    shapes = ShapeDefaults()
    saliency = SaliencyDefaults()
    generator = GeneratorDefaults()
    analysis = AnalysisDefaults()
    output = OutputDefaults()

    VERSION = "0.1.0"

    # Nomes aceitos na linha de comando -> nome canônico da variante
    VARIANTES = {
        "pink-noise": "PinkNoise",
        "primitives": "Primitives",
        "primitives-s": "PrimitivesS",
        "primitives-ps": "PrimitivesPS",
        "pinknoise-ps": "PinkNoisePS",
    }

    NORMALIZACOES = ("minmax", "stdclip3")
