"""
Orquestração de datasets: receita (GeneratorConfig), derivação de streams
por imagem, rótulos aleatórios, laço paralelo em lote e manifesto.

Cada imagem depende só de (config, seed, índice), então a saída é idêntica
byte a byte para qualquer número de workers.
"""

from __future__ import annotations

import logging
import platform
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from config import Config
from core.data_loader import (
    DatasetError,
    load_png,
    read_manifest,
    remove_images,
    remove_manifest,
    save_png,
    write_manifest,
)
from core.shapes import (
    Decay,
    RenderResult,
    ShapeError,
    SizePolicy,
    Variant,
    parse_size_policy,
    render_variant,
)
from core.utils import to_uint8
from core.validators import validar_config_gerador

logger = logging.getLogger(__name__)

MANIFEST_SCHEMA_VERSION = 1
NOISE_DISTRIBUTION = "standard-normal"


class ConfigError(Exception):
    """Receita de dataset inválida."""
    pass


@dataclass(frozen=True)
class GeneratorConfig:
    """Receita completa de um dataset; os padrões reproduzem PrimitivesPS."""
    variant: Variant = Variant(Config.VARIANTES[Config.generator.variant])
    resolution: int = Config.generator.resolution
    count: int = Config.generator.count
    seed: int = Config.generator.seed
    shapes: int = Config.shapes.shapes
    size_policy: SizePolicy = field(default_factory=Decay)
    a_range: Tuple[float, float] = (Config.spectrum.a_min, Config.spectrum.a_max)
    label_count: Optional[int] = None
    normalize: str = Config.spectrum.normalize
    saliency_size: Tuple[float, float] = (Config.saliency.size_min, Config.saliency.size_max)
    saliency_center: Tuple[float, float] = (Config.saliency.center_min, Config.saliency.center_max)

    def __post_init__(self) -> None:
        if not isinstance(self.variant, Variant):
            try:
                object.__setattr__(self, "variant", Variant.parse(str(self.variant)))
            except ShapeError as e:
                raise ConfigError(str(e)) from e

        valido, msg = validar_config_gerador(
            resolution=self.resolution,
            count=self.count,
            seed=self.seed,
            shapes=self.shapes,
            a_range=self.a_range,
            label_count=self.label_count,
            normalize=self.normalize,
            saliency_size=self.saliency_size,
            saliency_center=self.saliency_center,
        )
        if not valido:
            raise ConfigError(msg)

    def to_dict(self) -> Dict[str, Any]:
        """Eco da configuração resolvida (formato da linha de comando)."""
        return {
            "variant": self.variant.cli_name,
            "resolution": self.resolution,
            "count": self.count,
            "seed": self.seed,
            "shapes": self.shapes,
            "size_policy": str(self.size_policy),
            "a_range": list(self.a_range),
            "label_count": self.label_count,
            "normalize": self.normalize,
            "saliency_size": list(self.saliency_size),
            "saliency_center": list(self.saliency_center),
        }

    @classmethod
    def from_dict(cls, dados: Dict[str, Any]) -> "GeneratorConfig":
        try:
            return cls(
                variant=Variant.parse(dados["variant"]),
                resolution=int(dados["resolution"]),
                count=int(dados["count"]),
                seed=int(dados["seed"]),
                shapes=int(dados["shapes"]),
                size_policy=parse_size_policy(dados["size_policy"]),
                a_range=tuple(float(a) for a in dados["a_range"]),
                label_count=dados.get("label_count"),
                normalize=dados["normalize"],
                saliency_size=tuple(float(s) for s in dados["saliency_size"]),
                saliency_center=tuple(float(c) for c in dados["saliency_center"]),
            )
        except (KeyError, TypeError, ValueError, ShapeError) as e:
            raise ConfigError(f"Configuração inválida no manifesto: {e}") from e


@dataclass
class ImageRecord:
    filename: str
    index: int
    variant: str
    exponents: List[float]
    shape_count: int
    label: Optional[int] = None
    saliency_bbox: Optional[List[int]] = None
    coverage: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {k: v for k, v in asdict(self).items() if v is not None}


@dataclass
class DatasetManifest:
    config: Dict[str, Any]
    records: List[ImageRecord]
    tool_version: str = Config.VERSION
    platform: Dict[str, str] = field(default_factory=dict)
    noise: str = NOISE_DISTRIBUTION
    summary: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": MANIFEST_SCHEMA_VERSION,
            "tool_version": self.tool_version,
            "config": self.config,
            "platform": self.platform,
            "noise": self.noise,
            "summary": self.summary,
            "records": [r.to_dict() for r in self.records],
        }


def platform_fingerprint() -> Dict[str, str]:
    return {
        "system": platform.system(),
        "machine": platform.machine(),
        "python": platform.python_version(),
        "numpy": np.__version__,
    }


def derive_stream(seed: int, index: int) -> np.random.Generator:
    """
    Stream independente para a imagem `index`.

    Philox (baseado em contador) semeado por SeedSequence(seed, spawn_key=(index,)):
    função pura de (seed, index), independente da ordem de geração.
    """
    sequencia = np.random.SeedSequence(entropy=seed, spawn_key=(index,))
    return np.random.Generator(np.random.Philox(sequencia))


def assign_label(rng: np.random.Generator, label_count: int) -> int:
    """Rótulo uniforme em [0, K)."""
    if label_count < 1:
        raise ConfigError(f"Número de classes deve ser >= 1, recebido {label_count}")
    return int(rng.integers(label_count))


def filename_for(index: int) -> str:
    return Config.output.filename_pattern.format(index=index)


def render_image(config: GeneratorConfig, index: int) -> Tuple[RenderResult, Optional[int]]:
    """
    Sintetiza a imagem `index` do dataset.

    O rótulo é sorteado do mesmo stream depois de todos os sorteios da
    imagem, então ligar rótulos não altera pixels.
    """
    rng = derive_stream(config.seed, index)
    resultado = render_variant(config.variant, config, rng)
    rotulo = assign_label(rng, config.label_count) if config.label_count is not None else None
    return resultado, rotulo


def _build_record(config: GeneratorConfig, index: int, resultado: RenderResult, rotulo: Optional[int]) -> ImageRecord:
    bbox = list(resultado.saliency.bbox) if resultado.saliency is not None else None
    return ImageRecord(
        filename=filename_for(index),
        index=index,
        variant=config.variant.value,
        exponents=[float(a) for a in resultado.exponents],
        shape_count=resultado.shape_count,
        label=rotulo,
        saliency_bbox=bbox,
        coverage=resultado.coverage,
    )


def _generate_one(tarefa: Tuple[GeneratorConfig, int, str]) -> ImageRecord:
    """Gera e grava uma imagem; executado dentro dos workers."""
    config, index, pasta = tarefa
    resultado, rotulo = render_image(config, index)
    save_png(Path(pasta) / filename_for(index), to_uint8(resultado.image))
    return _build_record(config, index, resultado, rotulo)


def summarize_records(records: List[ImageRecord]) -> Dict[str, Any]:
    """Estatísticas agregadas do manifesto (cobertura, expoentes, rótulos)."""
    df = pd.DataFrame([asdict(r) for r in records])
    resumo: Dict[str, Any] = {"images": len(df)}

    if df.empty:
        return resumo

    cobertura = df["coverage"].dropna()
    if not cobertura.empty:
        resumo["coverage_mean"] = float(cobertura.mean())
        resumo["coverage_min"] = float(cobertura.min())
        resumo["coverage_max"] = float(cobertura.max())

    expoentes = df["exponents"].explode().dropna().astype(float)
    if not expoentes.empty:
        resumo["exponent_mean"] = float(expoentes.mean())

    rotulos = df["label"].dropna()
    if not rotulos.empty:
        contagem = rotulos.astype(int).value_counts().sort_index()
        resumo["label_counts"] = {str(k): int(v) for k, v in contagem.items()}

    return resumo


def generate_dataset(
    config: GeneratorConfig,
    out_dir: Path,
    workers: int = 1,
) -> DatasetManifest:
    """
    Gera `config.count` PNGs em `out_dir` e grava o manifesto por último.

    Args:
        config: Receita do dataset
        out_dir: Pasta de saída (criada se não existir)
        workers: Processos paralelos; 1 gera no processo atual

    Returns:
        Manifesto gravado

    Raises:
        DatasetError: Falha de I/O; a saída parcial fica sem manifesto
    """
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        remove_manifest(out_dir)
        remove_images(out_dir)
    except OSError as e:
        raise DatasetError(f"Pasta de saída inacessível: {out_dir}: {e}") from e

    logger.info(
        f"Gerando {config.count} imagens {config.variant.value} "
        f"{config.resolution}x{config.resolution} em {out_dir} ({workers} workers)"
    )

    tarefas = [(config, i, str(out_dir)) for i in range(config.count)]
    records: List[ImageRecord] = []
    passo = Config.output.log_every

    try:
        if workers <= 1:
            for tarefa in tarefas:
                records.append(_generate_one(tarefa))
                if len(records) % passo == 0:
                    logger.info(f"{len(records)}/{config.count} imagens")
        else:
            chunksize = max(1, config.count // (workers * 8))
            with ProcessPoolExecutor(max_workers=workers) as executor:
                for record in executor.map(_generate_one, tarefas, chunksize=chunksize):
                    records.append(record)
                    if len(records) % passo == 0:
                        logger.info(f"{len(records)}/{config.count} imagens")
    except (DatasetError, OSError) as e:
        logger.warning(
            f"Geração interrompida após {len(records)} imagens; "
            f"saída parcial em {out_dir} sem manifesto"
        )
        if isinstance(e, DatasetError):
            raise
        raise DatasetError(f"Erro de I/O durante a geração: {e}") from e

    records.sort(key=lambda r: r.index)
    manifest = DatasetManifest(
        config=config.to_dict(),
        records=records,
        platform=platform_fingerprint(),
        summary=summarize_records(records),
    )
    write_manifest(out_dir, manifest.to_dict())
    logger.info(f"Dataset completo: {len(records)} imagens")
    return manifest


def verify_dataset(pasta: Path) -> Dict[str, Any]:
    """
    Regenera cada imagem a partir do manifesto e compara com os arquivos.

    Returns:
        {"checked": n, "mismatches": [arquivos divergentes], "platform": ...}
    """
    pasta = Path(pasta)
    dados = read_manifest(pasta)
    config = GeneratorConfig.from_dict(dados["config"])

    divergentes: List[str] = []
    for registro in dados["records"]:
        resultado, _ = render_image(config, int(registro["index"]))
        esperado = to_uint8(resultado.image)
        gravado = load_png(pasta / registro["filename"])
        if gravado.shape != esperado.shape or not np.array_equal(gravado, esperado):
            logger.warning(f"Imagem divergente: {registro['filename']}")
            divergentes.append(registro["filename"])

    logger.info(f"Verificação: {len(dados['records'])} imagens, {len(divergentes)} divergentes")
    return {
        "checked": len(dados["records"]),
        "mismatches": divergentes,
        "platform": platform_fingerprint(),
        "recorded_platform": dados.get("platform", {}),
    }
