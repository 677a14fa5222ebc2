"""
Rasterização de formas elementares e composição das cenas Primitives,
Primitives-S e Primitives-PS, com as políticas de tamanho Fix/Rand/Decay.

Convenções:
    - size = extensão total: elipse com semi-eixos (sx/2, sy/2), retângulo
      sx × sy, linha = retângulo fino de comprimento sx e espessura sy
    - o pixel (linha r, coluna c) tem centro em (c + 0.5, r + 0.5) e pertence
      à forma se o centro satisfaz a desigualdade analítica (sem anti-aliasing)
    - formas posteriores sobrescrevem as anteriores
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, List, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

from config import Config
from core.spectrum import draw_pink_noise
from core.utils import ImageBuffer

if TYPE_CHECKING:
    from core.generator import GeneratorConfig

logger = logging.getLogger(__name__)

Color = Tuple[float, float, float]


class ShapeError(Exception):
    """Exceção customizada para erros de forma e de composição."""
    pass


class ShapeKind(str, Enum):
    ELLIPSE = "ellipse"
    RECTANGLE = "rectangle"
    LINE = "line"


@dataclass(frozen=True)
class Monotone:
    color: Color


@dataclass(frozen=True)
class PinkTexture:
    """Preenchimento com a textura rosa registrada em coordenadas de tela."""
    a: float


FillMode = Union[Monotone, PinkTexture]


@dataclass(frozen=True)
class Fix:
    ratio: float

    def __post_init__(self) -> None:
        if not 0 < self.ratio <= 1:
            raise ShapeError(f"Razão da política Fix deve estar em (0, 1], recebido {self.ratio}")

    def __str__(self) -> str:
        return f"fix:{self.ratio!r}"


@dataclass(frozen=True)
class Rand:
    def __str__(self) -> str:
        return "rand"


@dataclass(frozen=True)
class Decay:
    def __str__(self) -> str:
        return "decay"


SizePolicy = Union[Fix, Rand, Decay]


def parse_size_policy(texto: str) -> SizePolicy:
    """
    Converte 'fix:<r>', 'rand' ou 'decay' em política de tamanho.

    Exemplos:
        'fix:0.5' -> Fix(0.5)
        'decay'   -> Decay()
    """
    texto = texto.strip().lower()
    if texto == "decay":
        return Decay()
    if texto == "rand":
        return Rand()
    if texto.startswith("fix:"):
        try:
            return Fix(float(texto[4:]))
        except ValueError:
            raise ShapeError(f"Razão inválida na política Fix: '{texto}'")
    raise ShapeError(f"Política de tamanho desconhecida: '{texto}'")


class Variant(str, Enum):
    PINK_NOISE = "PinkNoise"
    PRIMITIVES = "Primitives"
    PRIMITIVES_S = "PrimitivesS"
    PRIMITIVES_PS = "PrimitivesPS"
    PINK_NOISE_PS = "PinkNoisePS"

    @classmethod
    def parse(cls, nome: str) -> "Variant":
        canonico = Config.VARIANTES.get(nome, nome)
        try:
            return cls(canonico)
        except ValueError:
            raise ShapeError(f"Variante desconhecida: '{nome}'")

    @property
    def cli_name(self) -> str:
        return next(k for k, v in Config.VARIANTES.items() if v == self.value)


@dataclass(frozen=True)
class ShapeSpec:
    kind: ShapeKind
    center: Tuple[float, float]
    size: Tuple[float, float]
    orientation: float
    fill: FillMode
    color: Color

    def __post_init__(self) -> None:
        if min(self.size) < 1:
            raise ShapeError(f"Tamanho mínimo é 1 pixel, recebido {self.size}")

    def half_extents(self) -> Tuple[float, float]:
        """Semi-extensões do retângulo envolvente alinhado aos eixos."""
        a, b = self.size[0] / 2.0, self.size[1] / 2.0
        c, s = abs(math.cos(self.orientation)), abs(math.sin(self.orientation))
        if self.kind is ShapeKind.ELLIPSE:
            return math.hypot(a * c, b * s), math.hypot(a * s, b * c)
        return a * c + b * s, a * s + b * c


@dataclass(frozen=True)
class SaliencyRecord:
    shape: ShapeSpec
    bbox: Tuple[int, int, int, int]  # (x0, y0, x1, y1), fim exclusivo


@dataclass
class RenderResult:
    """Imagem de uma variante e os metadados que vão para o manifesto."""
    image: ImageBuffer
    exponents: List[float] = field(default_factory=list)
    shape_count: int = 0
    saliency: Optional[SaliencyRecord] = None
    coverage: Optional[float] = None


def decay_cap(n: int, total: int, resolution: int) -> float:
    """Tamanho máximo da forma n: H · (1/5) · (N - n) / N."""
    return resolution * Config.shapes.decay_ratio * ((total - n) / total)


def sample_shape(
    n: int,
    total: int,
    policy: SizePolicy,
    resolution: int,
    rng: np.random.Generator,
    kinds: Sequence[str] = Config.shapes.kinds,
) -> ShapeSpec:
    """
    Sorteia a n-ésima forma de uma composição com `total` formas.

    Tipo uniforme, centro uniforme na imagem, orientação uniforme em [0, π),
    cor RGB uniforme, preenchimento monótono. Tamanhos sempre em [1, H].
    """
    if not 0 <= n < total:
        raise ShapeError(f"Índice de forma fora de [0, {total}): {n}")

    s_min = Config.shapes.min_size
    kind = ShapeKind(kinds[int(rng.integers(len(kinds)))])
    cx, cy = rng.uniform(0.0, resolution, size=2)
    orientation = float(rng.uniform(0.0, math.pi))

    if isinstance(policy, Decay):
        teto = max(s_min, decay_cap(n, total, resolution))
        sx, sy = rng.uniform(s_min, teto, size=2)
    elif isinstance(policy, Rand):
        sx, sy = rng.uniform(s_min, resolution * Config.shapes.rand_ratio, size=2)
    elif isinstance(policy, Fix):
        sx = sy = policy.ratio * resolution
    else:
        raise ShapeError(f"Política de tamanho inválida: {policy!r}")

    sx = float(min(max(sx, s_min), resolution))
    sy = float(min(max(sy, s_min), resolution))
    color = tuple(float(c) for c in rng.uniform(0.0, 1.0, size=3))

    return ShapeSpec(
        kind=kind,
        center=(float(cx), float(cy)),
        size=(sx, sy),
        orientation=orientation,
        fill=Monotone(color),
        color=color,
    )


def shape_mask(
    shape: ShapeSpec,
    height: int,
    width: int,
) -> Tuple[slice, slice, npt.NDArray[np.bool_]]:
    """
    Máscara dos pixels cobertos pela forma, restrita ao retângulo envolvente
    recortado na tela.

    Returns:
        Tupla (fatia de linhas, fatia de colunas, máscara booleana)
    """
    cx, cy = shape.center
    ex, ey = shape.half_extents()

    c0 = max(0, math.floor(cx - ex - 0.5))
    c1 = min(width, math.ceil(cx + ex + 0.5))
    r0 = max(0, math.floor(cy - ey - 0.5))
    r1 = min(height, math.ceil(cy + ey + 0.5))

    if c0 >= c1 or r0 >= r1:
        return slice(0, 0), slice(0, 0), np.zeros((0, 0), dtype=bool)

    dx = (np.arange(c0, c1) + 0.5 - cx)[np.newaxis, :]
    dy = (np.arange(r0, r1) + 0.5 - cy)[:, np.newaxis]
    cos_t, sin_t = math.cos(shape.orientation), math.sin(shape.orientation)
    u = dx * cos_t + dy * sin_t
    v = dy * cos_t - dx * sin_t
    a, b = shape.size[0] / 2.0, shape.size[1] / 2.0

    if shape.kind is ShapeKind.ELLIPSE:
        mascara = (u / a) ** 2 + (v / b) ** 2 <= 1.0
    else:
        mascara = (np.abs(u) <= a) & (np.abs(v) <= b)

    return slice(r0, r1), slice(c0, c1), mascara


def rasterize(
    shape: ShapeSpec,
    image: ImageBuffer,
    texture: Optional[ImageBuffer] = None,
    coverage: Optional[npt.NDArray[np.bool_]] = None,
) -> ImageBuffer:
    """
    Pinta a forma sobre a imagem (sobrescrita dura, in-place).

    Args:
        shape: Forma a pintar
        image: Buffer H×W×3 alterado in-place
        texture: Campo H×W×3 amostrado no mesmo pixel; obrigatório sse o
            preenchimento for PinkTexture
        coverage: Máscara H×W opcional marcada com os pixels pintados

    Returns:
        O próprio buffer
    """
    texturizada = isinstance(shape.fill, PinkTexture)
    if texturizada != (texture is not None):
        raise ShapeError("Textura deve ser fornecida se e somente se o preenchimento for PinkTexture")

    linhas, colunas, mascara = shape_mask(shape, image.shape[0], image.shape[1])
    if not mascara.any():
        return image

    regiao = image[linhas, colunas]
    if texturizada:
        regiao[mascara] = texture[linhas, colunas][mascara]
    else:
        regiao[mascara] = shape.fill.color

    if coverage is not None:
        coverage[linhas, colunas] |= mascara

    return image


def _compose(
    resolution: int,
    total: int,
    policy: SizePolicy,
    rng: np.random.Generator,
    background: Optional[ImageBuffer] = None,
) -> Tuple[ImageBuffer, npt.NDArray[np.bool_]]:
    if total < 0:
        raise ShapeError(f"Número de formas não pode ser negativo: {total}")

    if background is None:
        cor_fundo = rng.uniform(0.0, 1.0, size=3)
        imagem = np.empty((resolution, resolution, 3), dtype=np.float64)
        imagem[...] = cor_fundo
    else:
        imagem = background.copy()

    cobertura = np.zeros((resolution, resolution), dtype=bool)
    for n in range(total):
        forma = sample_shape(n, total, policy, resolution, rng)
        rasterize(forma, imagem, coverage=cobertura)

    return imagem, cobertura


def compose_primitives(
    resolution: int,
    total: int,
    policy: SizePolicy,
    rng: np.random.Generator,
    background: Optional[ImageBuffer] = None,
) -> ImageBuffer:
    """
    Variante Primitives: fundo monótono aleatório (ou `background`, se
    fornecido) e `total` formas injetadas em ordem n = 0..N-1.
    """
    imagem, _ = _compose(resolution, total, policy, rng, background)
    return imagem


def add_saliency(
    image: ImageBuffer,
    textured: bool,
    rng: np.random.Generator,
    a_range: Tuple[float, float] = (Config.spectrum.a_min, Config.spectrum.a_max),
    normalize: str = "minmax",
    size_range: Tuple[float, float] = (Config.saliency.size_min, Config.saliency.size_max),
    center_range: Tuple[float, float] = (Config.saliency.center_min, Config.saliency.center_max),
) -> Tuple[ImageBuffer, SaliencyRecord]:
    """
    Insere uma forma grande perto do centro (elipse ou retângulo).

    Tamanho por eixo uniforme em [H/3, 2H/3] e centro uniforme no terço
    central, por padrão. Com `textured`, a forma recebe uma textura rosa
    nova (Primitives-PS); senão, uma cor única (Primitives-S).
    """
    resolucao = image.shape[0]
    kinds = Config.saliency.kinds

    kind = ShapeKind(kinds[int(rng.integers(len(kinds)))])
    sx, sy = rng.uniform(size_range[0] * resolucao, size_range[1] * resolucao, size=2)
    cx, cy = rng.uniform(center_range[0] * resolucao, center_range[1] * resolucao, size=2)
    orientation = float(rng.uniform(0.0, math.pi))
    color = tuple(float(c) for c in rng.uniform(0.0, 1.0, size=3))

    textura = None
    fill: FillMode = Monotone(color)
    if textured:
        textura, a = draw_pink_noise(resolucao, a_range, rng, normalize)
        fill = PinkTexture(a)

    forma = ShapeSpec(
        kind=kind,
        center=(float(cx), float(cy)),
        size=(float(min(max(sx, 1.0), resolucao)), float(min(max(sy, 1.0), resolucao))),
        orientation=orientation,
        fill=fill,
        color=color,
    )

    linhas, colunas, mascara = shape_mask(forma, resolucao, resolucao)
    rasterize(forma, image, texture=textura)

    ys, xs = np.nonzero(mascara)
    if len(xs):
        bbox = (
            colunas.start + int(xs.min()),
            linhas.start + int(ys.min()),
            colunas.start + int(xs.max()) + 1,
            linhas.start + int(ys.max()) + 1,
        )
    else:
        bbox = (int(cx), int(cy), int(cx) + 1, int(cy) + 1)

    return image, SaliencyRecord(shape=forma, bbox=bbox)


def render_variant(
    variant: Variant,
    config: "GeneratorConfig",
    rng: np.random.Generator,
) -> RenderResult:
    """
    Sintetiza uma imagem da variante e coleta os metadados do manifesto
    (expoentes sorteados, formas, caixa saliente, cobertura).
    """
    if not isinstance(variant, Variant):
        variant = Variant.parse(str(variant))

    resolucao = config.resolution
    saliencia = dict(
        a_range=config.a_range,
        normalize=config.normalize,
        size_range=config.saliency_size,
        center_range=config.saliency_center,
    )

    if variant is Variant.PINK_NOISE:
        imagem, a = draw_pink_noise(resolucao, config.a_range, rng, config.normalize)
        return RenderResult(imagem, exponents=[a])

    if variant is Variant.PRIMITIVES:
        imagem, cobertura = _compose(resolucao, config.shapes, config.size_policy, rng)
        return RenderResult(imagem, shape_count=config.shapes, coverage=float(cobertura.mean()))

    if variant is Variant.PRIMITIVES_S:
        imagem, cobertura = _compose(resolucao, config.shapes, config.size_policy, rng)
        imagem, registro = add_saliency(imagem, False, rng, **saliencia)
        return RenderResult(
            imagem,
            shape_count=config.shapes,
            saliency=registro,
            coverage=float(cobertura.mean()),
        )

    if variant is Variant.PRIMITIVES_PS:
        fundo, a_fundo = draw_pink_noise(resolucao, config.a_range, rng, config.normalize)
        imagem, cobertura = _compose(
            resolucao, config.shapes, config.size_policy, rng, background=fundo
        )
        imagem, registro = add_saliency(imagem, True, rng, **saliencia)
        return RenderResult(
            imagem,
            exponents=[a_fundo, registro.shape.fill.a],
            shape_count=config.shapes,
            saliency=registro,
            coverage=float(cobertura.mean()),
        )

    if variant is Variant.PINK_NOISE_PS:
        imagem, a_fundo = draw_pink_noise(resolucao, config.a_range, rng, config.normalize)
        imagem, registro = add_saliency(imagem, True, rng, **saliencia)
        return RenderResult(
            imagem,
            exponents=[a_fundo, registro.shape.fill.a],
            saliency=registro,
        )

    raise ShapeError(f"Variante desconhecida: {variant!r}")


def generate_variant(
    variant: Variant,
    config: "GeneratorConfig",
    rng: np.random.Generator,
) -> ImageBuffer:
    """Despacha para o gerador da variante e devolve só a imagem."""
    return render_variant(variant, config, rng).image
