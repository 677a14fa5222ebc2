"""
Estatísticas de espectro de magnitude de datasets e métricas entre eles.

- dataset_spectrum: média de log(1 + |F|) (centrado) sobre imagens e canais,
  mais o perfil radial por anéis de raio inteiro
- fit_slope: regressão log-log na banda média [2, H/4] -> expoente â
- spectrum_distance: SSIM (janelas uniformes 7×7), L1 e L2 entre médias
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional

import numpy as np
import numpy.typing as npt
from scipy import ndimage
from skimage.metrics import structural_similarity

from config import Config
from core.data_loader import iter_dataset_images
from core.spectrum import RealField
from core.utils import ImageBuffer

logger = logging.getLogger(__name__)


class AnalysisError(Exception):
    """Exceção customizada para falhas de análise espectral."""
    pass


@dataclass(frozen=True)
class SpectrumStats:
    """
    Médias espectrais de um dataset.

    `mean_log_magnitude` alimenta SSIM/L1/L2 e a renderização; o perfil
    radial sai de `channel_log_abs` (log |F| sem o +1, que achataria os
    anéis fracos de alta frequência).
    """
    resolution: int
    mean_log_magnitude: RealField
    channel_log_abs: npt.NDArray[np.float64]  # (3, H, W)
    sample_count: int
    radial_profile: npt.NDArray[np.float64]  # (anéis, 2): frequência, média
    linear: bool = False

    @property
    def mean_log_abs(self) -> npt.NDArray[np.float64]:
        return self.channel_log_abs.mean(axis=0)


@dataclass(frozen=True)
class SlopeFit:
    a_hat: float
    intercept: float
    r_squared: float
    rings: int
    band: tuple


def ring_labels(resolution: int) -> npt.NDArray[np.int64]:
    """Raio inteiro (arredondado) de cada bin no layout centrado."""
    freqs = np.arange(resolution) - resolution // 2
    raio = np.hypot(freqs[:, np.newaxis], freqs[np.newaxis, :])
    return np.rint(raio).astype(np.int64)


def radial_profile(campo: np.ndarray) -> npt.NDArray[np.float64]:
    """
    Média do campo centrado por anel r = 1 .. H/2 - 1 (DC e Nyquist fora).

    Em `SpectrumStats` o campo é log max(|F|, piso) por canal, não o
    `mean_log_magnitude` (log1p), então os dois não coincidem.

    Returns:
        Array (H/2 - 1, 2) com (frequência do anel, média)
    """
    resolucao = campo.shape[0]
    aneis = np.arange(1, resolucao // 2)
    medias = ndimage.mean(campo, labels=ring_labels(resolucao), index=aneis)
    return np.column_stack([aneis.astype(np.float64), np.asarray(medias, dtype=np.float64)])


def ring_counts(resolution: int) -> npt.NDArray[np.int64]:
    """Quantidade de bins em cada anel do perfil radial."""
    contagem = np.bincount(ring_labels(resolution).ravel())
    return contagem[1:resolution // 2]


def accumulate_spectrum(
    images: Iterable[ImageBuffer],
    linear: bool = False,
) -> SpectrumStats:
    """
    Acumula o espectro centrado de cada canal de cada imagem.

    Raises:
        AnalysisError: Nenhuma imagem ou resoluções divergentes
    """
    piso = Config.analysis.log_floor
    soma_mag: Optional[np.ndarray] = None
    soma_log: Optional[np.ndarray] = None
    contagem = 0

    for imagem in images:
        if soma_mag is not None and imagem.shape[:2] != soma_mag.shape:
            raise AnalysisError(
                f"Resolução {imagem.shape[:2]} difere de {soma_mag.shape} na imagem {contagem}"
            )

        espectro = np.fft.fftshift(np.fft.fft2(imagem, axes=(0, 1)), axes=(0, 1))
        modulo = np.abs(espectro)
        campo = modulo if linear else np.log1p(modulo)
        log_abs = np.log(np.maximum(modulo, piso)).transpose(2, 0, 1)

        if soma_mag is None:
            soma_mag = np.zeros(imagem.shape[:2])
            soma_log = np.zeros_like(log_abs)
        soma_mag += campo.sum(axis=2)
        soma_log += log_abs
        contagem += 1

    if contagem == 0:
        raise AnalysisError("Dataset vazio: nenhuma imagem para analisar")

    media = soma_mag / (3 * contagem)
    canais = soma_log / contagem
    if not (np.all(np.isfinite(media)) and np.all(np.isfinite(canais))):
        raise AnalysisError("Espectro médio contém valores não finitos")

    return SpectrumStats(
        resolution=media.shape[0],
        mean_log_magnitude=RealField(media),
        channel_log_abs=canais,
        sample_count=contagem,
        radial_profile=radial_profile(canais.mean(axis=0)),
        linear=linear,
    )


def dataset_spectrum(
    pasta: Path,
    linear: bool = False,
    resize: Optional[int] = None,
) -> SpectrumStats:
    """Espectro médio de todas as imagens de uma pasta."""
    imagens = (buffer for _, buffer in iter_dataset_images(Path(pasta), resize))
    stats = accumulate_spectrum(imagens, linear=linear)
    logger.info(f"Espectro de {pasta}: {stats.sample_count} imagens {stats.resolution}x{stats.resolution}")
    return stats


def fit_profile(perfil: np.ndarray, resolution: int) -> SlopeFit:
    """
    Mínimos quadrados de média vs log(frequência) nos anéis [2, H/4].

    Raises:
        AnalysisError: Menos de 4 anéis utilizáveis
    """
    f_min = Config.analysis.slope_min_freq
    f_max = resolution / Config.analysis.slope_max_divisor

    freqs, valores = perfil[:, 0], perfil[:, 1]
    usar = (freqs >= f_min) & (freqs <= f_max) & np.isfinite(valores)
    if usar.sum() < Config.analysis.slope_min_rings:
        raise AnalysisError(
            f"Apenas {int(usar.sum())} anéis na banda [{f_min}, {f_max:g}] "
            f"(mínimo {Config.analysis.slope_min_rings})"
        )

    x, y = np.log(freqs[usar]), valores[usar]
    inclinacao, intercepto = np.polyfit(x, y, 1)
    residuo = y - (inclinacao * x + intercepto)
    total = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - float(np.sum(residuo ** 2) / total) if total > 0 else 1.0

    return SlopeFit(
        a_hat=float(-inclinacao),
        intercept=float(intercepto),
        r_squared=r2,
        rings=int(usar.sum()),
        band=(f_min, f_max),
    )


def fit_slope(stats: SpectrumStats) -> float:
    """Expoente â estimado pelo perfil radial (â = -inclinação)."""
    return fit_profile(stats.radial_profile, stats.resolution).a_hat


def channel_slopes(stats: SpectrumStats) -> List[float]:
    """â por canal RGB."""
    return [
        fit_profile(radial_profile(canal), stats.resolution).a_hat
        for canal in stats.channel_log_abs
    ]


def ssim(a: np.ndarray, b: np.ndarray) -> float:
    """
    SSIM médio sobre janelas uniformes válidas (skimage).

    C1 = (K1·R)², C2 = (K2·R)² com R = max - min conjunto dos dois campos;
    variâncias populacionais.
    """
    faixa = float(max(a.max(), b.max()) - min(a.min(), b.min()))
    if faixa == 0:
        return 1.0

    return float(structural_similarity(
        a,
        b,
        win_size=Config.analysis.ssim_window,
        data_range=faixa,
        gaussian_weights=False,
        use_sample_covariance=False,
        K1=Config.analysis.ssim_k1,
        K2=Config.analysis.ssim_k2,
    ))


def spectrum_distance(stats_a: SpectrumStats, stats_b: SpectrumStats) -> Dict[str, float]:
    """
    SSIM, L1 (média |a - b|) e L2 (RMS) entre os campos médios.

    Raises:
        AnalysisError: Resoluções diferentes
    """
    if stats_a.resolution != stats_b.resolution:
        raise AnalysisError(
            f"Resoluções diferentes: {stats_a.resolution} vs {stats_b.resolution}"
        )

    a = stats_a.mean_log_magnitude.data
    b = stats_b.mean_log_magnitude.data
    diferenca = a - b

    return {
        "ssim": ssim(a, b),
        "l1": float(np.mean(np.abs(diferenca))),
        "l2": float(np.sqrt(np.mean(diferenca * diferenca))),
    }


def distance_header(linear: bool = False) -> Dict[str, object]:
    """Constantes usadas no relatório, para auditoria."""
    return {
        "k1": Config.analysis.ssim_k1,
        "k2": Config.analysis.ssim_k2,
        "window": Config.analysis.ssim_window,
        "window_kind": "uniform",
        "magnitude": "linear" if linear else "log1p",
    }
