"""
Módulo de similaridade entre filtros de camadas convolucionais.

A diversidade de uma camada [O, I, h, w] é medida pela média do cosseno
entre todos os pares não ordenados dos O filtros achatados; a do modelo é a
média simples entre camadas.

Pensado para Python 3.12.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from config import Config
from core.data_loader import DatasetError, FormatError, WeightTensor, read_weight_tensor

logger = logging.getLogger(__name__)

COLUNAS_CAMADAS = ["layer", "filters", "excluded", "similarity", "error"]


class SimilarityError(Exception):
    """Similaridade indefinida (menos de dois filtros com norma positiva)."""
    pass


@dataclass(frozen=True)
class LayerSimilarity:
    similarity: float
    used: int
    excluded: List[int]


def layer_similarity(tensor: WeightTensor) -> LayerSimilarity:
    """
    Cosseno médio entre pares i < j, excluindo filtros de norma < 1e-12.

    Raises:
        SimilarityError: Se restarem menos de 2 filtros
    """
    filtros = tensor.flat_filters()
    normas = np.linalg.norm(filtros, axis=1)
    validos = normas >= Config.analysis.norm_eps
    excluidos = [int(i) for i in np.flatnonzero(~validos)]

    if excluidos:
        logger.warning(f"Filtros com norma nula excluídos: {excluidos}")

    if validos.sum() < 2:
        raise SimilarityError(
            f"Similaridade indefinida: {int(validos.sum())} filtro(s) válido(s) de {len(filtros)}"
        )

    unitarios = filtros[validos] / normas[validos][:, np.newaxis]
    gram = unitarios @ unitarios.T
    i, j = np.triu_indices(len(unitarios), k=1)
    media = float(np.clip(gram[i, j], -1.0, 1.0).mean())

    return LayerSimilarity(similarity=media, used=int(validos.sum()), excluded=excluidos)


def filter_similarity(tensor: WeightTensor) -> float:
    """Média do cosseno entre todos os pares de filtros da camada."""
    return layer_similarity(tensor).similarity


@dataclass
class SimilarityReport:
    """Tabela por camada e média do modelo (sem peso por número de filtros)."""
    layers: pd.DataFrame
    model_mean: Optional[float]

    @property
    def failed(self) -> bool:
        return bool(self.layers["error"].notna().any())

    def to_dict(self) -> Dict[str, Any]:
        camadas = self.layers.astype(object).where(self.layers.notna(), None)
        return {
            "model_mean": self.model_mean,
            "layer_count": int(len(self.layers)),
            "failed_layers": [
                r["layer"] for r in camadas.to_dict("records") if r["error"] is not None
            ],
            "layers": camadas.to_dict("records"),
        }


def model_report(layer_files: Sequence[Path]) -> SimilarityReport:
    """
    Similaridade por camada e média simples sobre as camadas válidas.

    Camadas ilegíveis ou com similaridade indefinida ficam marcadas na coluna
    `error` e fora da média.
    """
    if not layer_files:
        raise SimilarityError("Nenhuma camada informada")

    linhas = []
    for caminho in layer_files:
        caminho = Path(caminho)
        linha: Dict[str, Any] = {
            "layer": caminho.name,
            "filters": None,
            "excluded": [],
            "similarity": None,
            "error": None,
        }
        try:
            resultado = layer_similarity(read_weight_tensor(caminho))
            linha.update(
                filters=resultado.used,
                excluded=resultado.excluded,
                similarity=resultado.similarity,
            )
        except (FormatError, SimilarityError, DatasetError) as e:
            logger.warning(f"Camada {caminho.name} fora da média: {e}")
            linha["error"] = str(e)
        linhas.append(linha)

    df = pd.DataFrame(linhas, columns=COLUNAS_CAMADAS)
    df["filters"] = df["filters"].astype("Int64")
    validas = df["similarity"].dropna().astype(float)
    media = float(validas.mean()) if not validas.empty else None

    logger.info(f"Relatório de filtros: {len(df)} camadas, média {media}")
    return SimilarityReport(layers=df, model_mean=media)


def compare_reports(modelo: SimilarityReport, base: SimilarityReport) -> Dict[str, Any]:
    """
    Compara dois modelos camada a camada (junção pelo nome do arquivo).

    Returns:
        Tabela com as duas similaridades e a razão modelo/base, mais as
        razões da primeira e da última camada em comum
    """
    juntas = pd.merge(
        modelo.layers[["layer", "similarity"]],
        base.layers[["layer", "similarity"]],
        on="layer",
        how="inner",
        suffixes=("_model", "_baseline"),
    ).dropna()

    juntas["ratio"] = juntas["similarity_model"] / juntas["similarity_baseline"].where(
        juntas["similarity_baseline"] != 0
    )

    def razao(linha: Optional[pd.Series]) -> Optional[float]:
        if linha is None or pd.isna(linha["ratio"]):
            return None
        return float(linha["ratio"])

    primeira = juntas.iloc[0] if not juntas.empty else None
    ultima = juntas.iloc[-1] if not juntas.empty else None

    tabela = juntas.astype(object).where(juntas.notna(), None)
    return {
        "layers": tabela.to_dict("records"),
        "first_layer_ratio": razao(primeira),
        "last_layer_ratio": razao(ultima),
        "model_mean": modelo.model_mean,
        "baseline_mean": base.model_mean,
    }
