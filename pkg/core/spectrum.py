"""
Maquinário de frequência 2D: FFT direta/inversa, ponderação de magnitude
w_m = 1 / (|fx|^a + |fy|^a) e síntese de ruído rosa por canal e RGB.

Pensado para Python 3.12.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import numpy.typing as npt

from config import Config
from core.utils import ImageBuffer, is_power_of_two

logger = logging.getLogger(__name__)


class SpectrumError(Exception):
    """Exceção base do módulo de espectro."""
    pass


class DimensionError(SpectrumError):
    """Campo não quadrado ou com lado que não é potência de dois."""
    pass


class SingularityError(SpectrumError):
    """Peso avaliado no bin DC (0, 0)."""
    pass


class RescaleError(SpectrumError):
    """Campo constante após a filtragem; não há como reescalar."""
    pass


class ExponentRangeError(SpectrumError):
    """Intervalo de expoentes vazio ou fora de (0, inf)."""
    pass


def _validar_dimensoes(data: np.ndarray) -> None:
    if data.ndim != 2:
        raise DimensionError(f"Campo deve ser 2D, recebido shape {data.shape}")

    altura, largura = data.shape
    if altura != largura:
        raise DimensionError(f"Campo deve ser quadrado, recebido {altura}x{largura}")

    if not is_power_of_two(largura) or largura < Config.spectrum.min_resolution:
        raise DimensionError(
            f"Lado do campo deve ser potência de dois >= "
            f"{Config.spectrum.min_resolution}, recebido {largura}"
        )


@dataclass(frozen=True)
class RealField:
    """Um canal real, linha-a-linha (data[y, x])."""
    data: npt.NDArray[np.float64]
    imag_residual: float = 0.0

    def __post_init__(self) -> None:
        _validar_dimensoes(self.data)

    @property
    def resolution(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True)
class ComplexField:
    """
    Espectro complexo no layout não centrado do numpy (bin [0, 0] = DC).

    Os índices de frequência com sinal em [-H/2, H/2) são obtidos com
    `signed_frequencies`.
    """
    data: npt.NDArray[np.complex128]

    def __post_init__(self) -> None:
        _validar_dimensoes(self.data)

    @property
    def resolution(self) -> int:
        return self.data.shape[0]


def signed_frequencies(resolution: int) -> npt.NDArray[np.float64]:
    """Índices inteiros com sinal de cada bin, no layout da FFT."""
    return np.fft.fftfreq(resolution, d=1.0 / resolution)


def forward_fft2(field: RealField) -> ComplexField:
    """Transformada direta não normalizada."""
    return ComplexField(np.fft.fft2(field.data))


def inverse_fft2(field: ComplexField) -> RealField:
    """
    Transformada inversa normalizada (1 / (H·W)).

    Returns:
        Parte real do resultado; o maior |imag| descartado fica em
        `imag_residual`.
    """
    z = np.fft.ifft2(field.data)
    residual = float(np.max(np.abs(z.imag))) if z.size else 0.0
    if residual > 1e-5:
        logger.debug(f"Resíduo imaginário alto na IFFT: {residual:.3e}")
    return RealField(np.ascontiguousarray(z.real), imag_residual=residual)


def magnitude_weight(fx: float, fy: float, a: float) -> float:
    """
    Peso 1 / (|fx|^a + |fy|^a) de um bin de frequência.

    Raises:
        SingularityError: Em (0, 0); o chamador aplica a regra do DC.
        SpectrumError: Se a <= 0.
    """
    if a <= 0:
        raise SpectrumError(f"Expoente deve ser positivo, recebido {a}")
    if fx == 0 and fy == 0:
        raise SingularityError("Peso indefinido no bin DC (0, 0)")
    return 1.0 / (abs(fx) ** a + abs(fy) ** a)


def weight_grid(resolution: int, a: float) -> npt.NDArray[np.float64]:
    """Pesos w_m de todos os bins, com DC = 0."""
    if a <= 0:
        raise SpectrumError(f"Expoente deve ser positivo, recebido {a}")

    freqs = np.abs(signed_frequencies(resolution))
    denom = freqs[:, np.newaxis] ** a + freqs[np.newaxis, :] ** a
    pesos = np.zeros_like(denom)
    np.divide(1.0, denom, out=pesos, where=denom > 0)
    return pesos


def rescale_channel(data: np.ndarray, normalize: str = "minmax") -> np.ndarray:
    """
    Leva um canal filtrado para [0, 1].

    - minmax: (x - min) / (max - min), min 0 e max 1 atingidos
    - stdclip3: (x - média) / (6·desvio) + 0.5, cortado em [0, 1]
    """
    if normalize == "minmax":
        menor = data.min()
        amplitude = data.max() - menor
        if not np.isfinite(amplitude) or amplitude <= 0:
            raise RescaleError("Canal constante após filtragem")
        return (data - menor) / amplitude

    if normalize == "stdclip3":
        desvio = data.std()
        if not np.isfinite(desvio) or desvio <= 0:
            raise RescaleError("Canal constante após filtragem")
        return np.clip((data - data.mean()) / (6.0 * desvio) + 0.5, 0.0, 1.0)

    raise SpectrumError(f"Normalização desconhecida: {normalize}")


def pink_noise_channel(
    resolution: int,
    a: float,
    rng: np.random.Generator,
    normalize: str = "minmax",
) -> RealField:
    """
    Um canal de ruído 1/f^a.

    Ruído branco normal padrão -> FFT -> multiplicação por w_m (DC zerado)
    -> IFFT -> reescala para [0, 1].

    Raises:
        DimensionError: Se a resolução não for potência de dois.
        RescaleError: Campo degenerado (probabilidade ~0); o chamador reamostra.
    """
    if not is_power_of_two(resolution):
        raise DimensionError(f"Resolução deve ser potência de dois, recebido {resolution}")

    ruido = RealField(rng.standard_normal((resolution, resolution)))
    espectro = forward_fft2(ruido)
    filtrado = ComplexField(espectro.data * weight_grid(resolution, a))
    campo = inverse_fft2(filtrado)
    return RealField(rescale_channel(campo.data, normalize), campo.imag_residual)


def draw_pink_noise(
    resolution: int,
    a_range: Tuple[float, float],
    rng: np.random.Generator,
    normalize: str = "minmax",
    max_attempts: int = 3,
) -> Tuple[ImageBuffer, float]:
    """
    Sorteia a ~ U(a_range), compartilhado pelos três canais, e sintetiza
    cada canal com ruído branco independente.

    Returns:
        Tupla (buffer H×W×3, expoente sorteado)
    """
    a_min, a_max = a_range
    if a_min > a_max:
        raise ExponentRangeError(f"Intervalo de expoentes vazio: [{a_min}, {a_max}]")
    if a_min <= 0:
        raise ExponentRangeError(f"Expoentes devem ser positivos: [{a_min}, {a_max}]")

    a = float(rng.uniform(a_min, a_max))

    canais = []
    for _ in range(3):
        for tentativa in range(1, max_attempts + 1):
            try:
                canais.append(pink_noise_channel(resolution, a, rng, normalize).data)
                break
            except RescaleError:
                logger.warning(f"Canal degenerado (tentativa {tentativa}), reamostrando")
        else:
            raise RescaleError(f"Canal degenerado após {max_attempts} tentativas")

    return np.stack(canais, axis=-1), a


def pink_noise_image(
    resolution: int,
    a_range: Tuple[float, float],
    rng: np.random.Generator,
    normalize: str = "minmax",
) -> ImageBuffer:
    """Variante PinkNoise: imagem RGB de ruído rosa."""
    imagem, _ = draw_pink_noise(resolution, a_range, rng, normalize)
    return imagem
