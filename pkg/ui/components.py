"""
Componentes de saída: relatórios JSON, espectro médio em PNG e gráfico do
perfil radial.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from PIL import Image

from core.analysis import SpectrumStats, fit_profile
from core.data_loader import DatasetError


def _json_default(valor: Any) -> Any:
    if isinstance(valor, np.generic):
        return valor.item()
    if isinstance(valor, np.ndarray):
        return valor.tolist()
    if isinstance(valor, Path):
        return str(valor)
    raise TypeError(f"Tipo não serializável: {type(valor).__name__}")


def to_json(dados: Dict[str, Any]) -> str:
    return json.dumps(dados, indent=2, sort_keys=True, ensure_ascii=False, default=_json_default)


def write_report(dados: Dict[str, Any], destino: Optional[Path] = None) -> None:
    """Relatório JSON em `destino` ou, sem destino, no stdout."""
    texto = to_json(dados)
    if destino is None:
        sys.stdout.write(texto + "\n")
        return

    try:
        Path(destino).write_text(texto + "\n", encoding="utf-8")
    except OSError as e:
        raise DatasetError(f"Erro ao gravar relatório {destino}: {e}") from e


def echo_config(resolvida: Dict[str, Any]) -> None:
    """Linha única `CONFIG: {...}` no stderr, antes de qualquer trabalho."""
    linha = json.dumps(resolvida, sort_keys=True, separators=(",", ":"), default=_json_default)
    sys.stderr.write(f"CONFIG: {linha}\n")
    sys.stderr.flush()


def render_spectrum_png(stats: SpectrumStats, destino: Path) -> None:
    """Campo médio de log-magnitude como PNG 8 bits em tons de cinza (min-max)."""
    campo = stats.mean_log_magnitude.data
    faixa = campo.max() - campo.min()
    normalizado = (campo - campo.min()) / faixa if faixa > 0 else np.zeros_like(campo)
    pixels = np.clip(np.rint(normalizado * 255.0), 0, 255).astype(np.uint8)

    try:
        Image.fromarray(pixels).save(destino, format="PNG")
    except OSError as e:
        raise DatasetError(f"Erro ao gravar {destino}: {e}") from e


def render_profile_plot(
    perfis: Sequence[Tuple[str, SpectrumStats]],
    destino: Path,
) -> None:
    """Perfis radiais em eixos log-log, com â ajustado na legenda."""
    fig, ax = plt.subplots(figsize=(7, 5))

    for rotulo, stats in perfis:
        perfil = stats.radial_profile
        ajuste = fit_profile(perfil, stats.resolution)
        ax.plot(perfil[:, 0], np.exp(perfil[:, 1]), label=f"{rotulo} (â = {ajuste.a_hat:.2f})")

    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("frequência radial (ciclos/imagem)")
    ax.set_ylabel("magnitude média (média geométrica)")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()

    try:
        fig.savefig(destino, format="png", dpi=120)
    except OSError as e:
        raise DatasetError(f"Erro ao gravar {destino}: {e}") from e
    finally:
        plt.close(fig)
