"""
Leitura e escrita de artefatos com tratamento robusto de erros:
PNGs do dataset, manifesto JSON e tensores de pesos no formato WT01.

Formato WT01 (little-endian):
    offset 0   magic b"WT01"
    offset 4   u32 rank (sempre 4)
    offset 8   4 × u32 dims [O, I, h, w]
    offset 24  O·I·h·w float32, row-major
"""

from __future__ import annotations

import json
import logging
import math
import os
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Tuple

import numpy as np
import numpy.typing as npt
from PIL import Image, UnidentifiedImageError

from config import Config
from core.preprocessing import checar_formato, preparar_imagem
from core.utils import ImageBuffer

logger = logging.getLogger(__name__)

EXTENSOES_IMAGEM = (".png", ".jpg", ".jpeg", ".bmp")

WT01_MAGIC = b"WT01"
WT01_HEADER = struct.Struct("<I4I")
WT01_PAYLOAD_OFFSET = len(WT01_MAGIC) + WT01_HEADER.size


class DatasetError(Exception):
    """Exceção customizada para erros de leitura/escrita de datasets."""
    pass


class FormatError(Exception):
    """Arquivo WT01 malformado; a mensagem indica o offset do problema."""
    pass


@dataclass(frozen=True)
class WeightTensor:
    """Pesos [O, I, h, w] de uma camada."""
    data: npt.NDArray[np.float32]

    def __post_init__(self) -> None:
        if self.data.ndim != 4:
            raise FormatError(f"Tensor de pesos deve ter rank 4, recebido {self.data.ndim}")

    @property
    def dims(self) -> Tuple[int, int, int, int]:
        return tuple(int(d) for d in self.data.shape)

    def flat_filters(self) -> npt.NDArray[np.float64]:
        """Matriz O × (I·h·w) em float64, um filtro por linha."""
        return self.data.reshape(self.data.shape[0], -1).astype(np.float64)


# ===== PNG =====

def save_png(caminho: Path, pixels: npt.NDArray[np.uint8]) -> None:
    """
    Grava um buffer H×W×3 uint8 como PNG RGB.

    Raises:
        DatasetError: Se houver erro ao gravar o arquivo
    """
    try:
        Image.fromarray(np.ascontiguousarray(pixels, dtype=np.uint8)).save(caminho, format="PNG")
    except OSError as e:
        logger.error(f"Erro ao gravar PNG {caminho}: {e}")
        raise DatasetError(f"Erro ao gravar {caminho}: {e}") from e


def load_png(caminho: Path) -> npt.NDArray[np.uint8]:
    """Lê uma imagem como buffer H×W×3 uint8."""
    try:
        with Image.open(caminho) as imagem:
            return np.asarray(imagem.convert("RGB"), dtype=np.uint8).copy()
    except (OSError, UnidentifiedImageError) as e:
        logger.error(f"Erro ao ler imagem {caminho}: {e}")
        raise DatasetError(f"Erro ao ler {caminho}: {e}") from e


def list_images(pasta: Path) -> List[Path]:
    """Imagens da pasta em ordem lexicográfica."""
    if not pasta.is_dir():
        raise DatasetError(f"Pasta não encontrada: {pasta}")

    arquivos = sorted(
        p for p in pasta.iterdir()
        if p.is_file() and p.suffix.lower() in EXTENSOES_IMAGEM
    )
    if not arquivos:
        raise DatasetError(f"Dataset vazio: nenhuma imagem em {pasta}")
    return arquivos


def iter_dataset_images(
    pasta: Path,
    resize: Optional[int] = None,
) -> Iterator[Tuple[Path, ImageBuffer]]:
    """
    Percorre o dataset garantindo resolução única, quadrada e potência de dois.

    Args:
        pasta: Pasta com as imagens
        resize: Se informado, toda imagem é levada a resize × resize

    Raises:
        DatasetError: Pasta vazia, imagem ilegível ou resolução divergente
            (a mensagem nomeia o arquivo)
    """
    arquivos = list_images(pasta)
    logger.info(f"Lendo {len(arquivos)} imagens de {pasta}")

    resolucao: Optional[int] = None
    for caminho in arquivos:
        try:
            with Image.open(caminho) as imagem:
                buffer = preparar_imagem(imagem, resize)
        except (OSError, UnidentifiedImageError) as e:
            logger.error(f"Erro ao ler imagem {caminho}: {e}")
            raise DatasetError(f"Erro ao ler {caminho}: {e}") from e

        valido, msg = checar_formato(buffer.shape)
        if not valido:
            raise DatasetError(f"{caminho.name}: {msg}")

        if resolucao is None:
            resolucao = buffer.shape[0]
        elif buffer.shape[0] != resolucao:
            raise DatasetError(
                f"{caminho.name}: resolução {buffer.shape[0]} difere de {resolucao} "
                "(use --resize para datasets externos)"
            )

        yield caminho, buffer


# ===== Manifesto =====

def manifest_path(pasta: Path) -> Path:
    return pasta / Config.output.manifest_name


def write_manifest(pasta: Path, dados: Dict[str, Any]) -> Path:
    """
    Grava o manifesto de forma atômica (arquivo temporário + rename).

    O manifesto marca o dataset como completo, por isso é o último arquivo
    gravado.
    """
    destino = manifest_path(pasta)
    temporario = destino.with_suffix(".json.tmp")
    try:
        temporario.write_text(
            json.dumps(dados, indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False) + "\n",
            encoding="utf-8",
        )
        os.replace(temporario, destino)
    except ValueError as e:
        raise DatasetError(f"Manifesto com valor não finito: {e}") from e
    except OSError as e:
        logger.error(f"Erro ao gravar manifesto: {e}")
        raise DatasetError(f"Erro ao gravar manifesto {destino}: {e}") from e

    logger.info(f"Manifesto gravado: {destino}")
    return destino


def read_manifest(pasta: Path) -> Dict[str, Any]:
    destino = manifest_path(pasta)
    try:
        dados = json.loads(destino.read_text(encoding="utf-8"))
    except OSError as e:
        raise DatasetError(f"Manifesto não encontrado ou ilegível: {destino}") from e
    except json.JSONDecodeError as e:
        raise DatasetError(f"Manifesto não é JSON válido: {destino}") from e

    for chave in ("config", "records"):
        if chave not in dados:
            raise DatasetError(f"Manifesto sem a chave '{chave}': {destino}")
    return dados


def remove_manifest(pasta: Path) -> None:
    """Apaga um manifesto antigo antes de regenerar a pasta."""
    destino = manifest_path(pasta)
    if destino.exists():
        logger.warning(f"Removendo manifesto anterior: {destino}")
        destino.unlink()


def remove_images(pasta: Path) -> int:
    """Apaga PNGs de uma geração anterior; devolve quantos foram removidos."""
    antigos = sorted(pasta.glob(Config.output.filename_glob))
    for caminho in antigos:
        caminho.unlink()
    if antigos:
        logger.warning(f"Removidas {len(antigos)} imagens anteriores de {pasta}")
    return len(antigos)


# ===== WT01 =====

def parse_weight_tensor(conteudo: bytes) -> WeightTensor:
    """
    Interpreta os bytes de um arquivo WT01.

    Raises:
        FormatError: Magic inválido, cabeçalho truncado, rank != 4,
            dimensão nula ou payload com tamanho diferente do declarado
    """
    if conteudo[:4] != WT01_MAGIC:
        raise FormatError(f"offset 0: magic inválido {conteudo[:4]!r} (esperado {WT01_MAGIC!r})")

    if len(conteudo) < 8:
        raise FormatError(f"offset 4: cabeçalho truncado, rank ausente ({len(conteudo)} bytes)")

    (rank,) = struct.unpack_from("<I", conteudo, 4)
    if rank != 4:
        raise FormatError(f"offset 4: rank deve ser 4, recebido {rank}")

    if len(conteudo) < WT01_PAYLOAD_OFFSET:
        raise FormatError(
            f"offset {len(conteudo)}: cabeçalho truncado "
            f"(esperado {WT01_PAYLOAD_OFFSET} bytes, encontrado {len(conteudo)})"
        )

    _, *dims = WT01_HEADER.unpack_from(conteudo, len(WT01_MAGIC))
    if 0 in dims:
        raise FormatError(f"offset 8: dimensão nula em {dims}")

    esperado = math.prod(dims) * 4
    encontrado = len(conteudo) - WT01_PAYLOAD_OFFSET
    if encontrado < esperado:
        raise FormatError(
            f"offset {WT01_PAYLOAD_OFFSET}: payload truncado, dims {dims} "
            f"exigem {esperado} bytes, encontrado {encontrado}"
        )
    if encontrado > esperado:
        raise FormatError(
            f"offset {WT01_PAYLOAD_OFFSET + esperado}: "
            f"{encontrado - esperado} bytes excedentes após o payload"
        )

    data = np.frombuffer(conteudo, dtype="<f4", offset=WT01_PAYLOAD_OFFSET).reshape(dims)
    return WeightTensor(data.astype(np.float32))


def read_weight_tensor(caminho: Path) -> WeightTensor:
    """Lê um arquivo WT01 (uma camada)."""
    try:
        conteudo = Path(caminho).read_bytes()
    except OSError as e:
        logger.error(f"Erro ao ler tensor {caminho}: {e}")
        raise DatasetError(f"Erro ao ler {caminho}: {e}") from e

    try:
        return parse_weight_tensor(conteudo)
    except FormatError as e:
        raise FormatError(f"{Path(caminho).name}: {e}") from e


def write_weight_tensor(caminho: Path, pesos: np.ndarray) -> None:
    """Exporta um array rank-4 no formato WT01."""
    pesos = np.asarray(pesos)
    if pesos.ndim != 4:
        raise FormatError(f"Tensor de pesos deve ter rank 4, recebido {pesos.ndim}")

    cabecalho = WT01_MAGIC + WT01_HEADER.pack(4, *pesos.shape)
    try:
        Path(caminho).write_bytes(cabecalho + pesos.astype("<f4").tobytes(order="C"))
    except OSError as e:
        raise DatasetError(f"Erro ao gravar {caminho}: {e}") from e


def list_layer_files(pasta: Path) -> List[Path]:
    """Arquivos de camada de um modelo, em ordem lexicográfica."""
    if not pasta.is_dir():
        raise DatasetError(f"Pasta de pesos não encontrada: {pasta}")

    arquivos = sorted(p for p in pasta.iterdir() if p.is_file() and not p.name.startswith("."))
    if not arquivos:
        raise DatasetError(f"Nenhum arquivo de camada em {pasta}")
    return arquivos
