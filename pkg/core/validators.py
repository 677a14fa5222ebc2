"""
Módulo de validação de configurações e entradas.

Os validadores nunca levantam exceção: devolvem (valido, mensagem) e quem
chama decide como falhar.
"""

from __future__ import annotations

import logging
import math
from typing import Optional, Sequence, Tuple

from config import Config
from core.utils import is_power_of_two

logger = logging.getLogger(__name__)

MAX_SEED = 2**64 - 1


def validar_resolucao(resolution: int) -> Tuple[bool, str]:
    """Resolução deve ser potência de dois em [8, 4096]."""
    minimo = Config.spectrum.min_resolution
    maximo = Config.spectrum.max_resolution

    if not is_power_of_two(resolution):
        return False, f"resolução deve ser potência de dois (recebido {resolution})"

    if not minimo <= resolution <= maximo:
        return False, f"resolução deve estar entre {minimo} e {maximo} (recebido {resolution})"

    return True, ""


def validar_intervalo_expoentes(a_range: Sequence[float]) -> Tuple[bool, str]:
    if len(a_range) != 2:
        return False, "intervalo de expoentes precisa de dois valores"

    a_min, a_max = a_range
    if not (math.isfinite(a_min) and math.isfinite(a_max)):
        return False, f"expoentes devem ser finitos (recebido [{a_min}, {a_max}])"

    if a_min <= 0:
        return False, f"expoente mínimo deve ser positivo (recebido {a_min})"

    if a_min > a_max:
        return False, f"intervalo de expoentes vazio: [{a_min}, {a_max}]"

    return True, ""


def validar_fracoes(nome: str, faixa: Sequence[float]) -> Tuple[bool, str]:
    """Faixas de saliência são frações de H com 0 < min <= max <= 1."""
    if len(faixa) != 2:
        return False, f"{nome} precisa de dois valores"

    menor, maior = faixa
    if not 0 < menor <= maior <= 1:
        return False, f"{nome} deve satisfazer 0 < min <= max <= 1 (recebido [{menor}, {maior}])"

    return True, ""


def validar_config_gerador(
    resolution: int,
    count: int,
    seed: int,
    shapes: int,
    a_range: Sequence[float],
    label_count: Optional[int],
    normalize: str,
    saliency_size: Sequence[float],
    saliency_center: Sequence[float],
) -> Tuple[bool, str]:
    """
    Valida os campos de uma receita de dataset.

    Returns:
        Tupla (valido: bool, mensagem_erro: str)
    """
    valido, msg = validar_resolucao(resolution)
    if not valido:
        return False, msg

    if count < 1:
        return False, f"quantidade de imagens deve ser >= 1 (recebido {count})"

    if not 0 <= seed <= MAX_SEED:
        return False, f"semente deve ser inteiro sem sinal de 64 bits (recebido {seed})"

    if shapes < 0:
        return False, f"número de formas não pode ser negativo (recebido {shapes})"

    valido, msg = validar_intervalo_expoentes(a_range)
    if not valido:
        return False, msg

    if label_count is not None and label_count < 1:
        return False, f"número de classes deve ser >= 1 (recebido {label_count})"

    if normalize not in Config.NORMALIZACOES:
        return False, f"normalização deve ser uma de {list(Config.NORMALIZACOES)} (recebido '{normalize}')"

    valido, msg = validar_fracoes("tamanho saliente", saliency_size)
    if not valido:
        return False, msg

    valido, msg = validar_fracoes("centro saliente", saliency_center)
    if not valido:
        return False, msg

    return True, ""


def validar_workers(workers: int) -> Tuple[bool, str]:
    if workers < 1:
        return False, f"número de workers deve ser >= 1 (recebido {workers})"
    return True, ""
