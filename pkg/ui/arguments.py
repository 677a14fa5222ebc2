"""
Construção da linha de comando (subcomandos e flags).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from config import Config


class ArgumentParser(argparse.ArgumentParser):
    """argparse com código de saída 1 para erros de uso."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: erro: {message}\n")


def _add_resize(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--resize",
        type=int,
        default=None,
        metavar="H",
        help="Redimensiona toda imagem para H×H (datasets externos).",
    )


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="primgen",
        description="Gerador procedural de datasets de pré-treino e ferramentas de análise.",
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Log em nível DEBUG.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="subcomando")

    # ===== generate =====
    gen = sub.add_parser("generate", help="Gera um dataset de imagens sintéticas.")
    gen.add_argument("--variant", choices=list(Config.VARIANTES), default=Config.generator.variant)
    gen.add_argument("--count", type=int, default=Config.generator.count)
    gen.add_argument("--resolution", type=int, default=Config.generator.resolution)
    gen.add_argument("--seed", type=int, default=Config.generator.seed)
    gen.add_argument("--shapes", type=int, default=Config.shapes.shapes, help="N formas por imagem.")
    gen.add_argument(
        "--size-policy",
        default=Config.shapes.size_policy,
        metavar="{fix:<r>|rand|decay}",
    )
    gen.add_argument("--a-min", type=float, default=Config.spectrum.a_min)
    gen.add_argument("--a-max", type=float, default=Config.spectrum.a_max)
    gen.add_argument("--labels", type=int, default=None, metavar="K", help="Rótulos aleatórios em [0, K).")
    gen.add_argument("--normalize", choices=list(Config.NORMALIZACOES), default=Config.spectrum.normalize)
    gen.add_argument(
        "--saliency-size",
        type=float,
        nargs=2,
        default=[Config.saliency.size_min, Config.saliency.size_max],
        metavar=("MIN", "MAX"),
        help="Tamanho do objeto saliente, em frações de H.",
    )
    gen.add_argument(
        "--saliency-center",
        type=float,
        nargs=2,
        default=[Config.saliency.center_min, Config.saliency.center_max],
        metavar=("MIN", "MAX"),
        help="Região do centro saliente, em frações de H.",
    )
    gen.add_argument("--out", type=Path, required=True)
    gen.add_argument(
        "--workers",
        type=int,
        default=None,
        help=f"Processos paralelos (padrão: ${Config.generator.workers_env} ou núcleos lógicos).",
    )

    # ===== analyze-spectrum =====
    espectro = sub.add_parser("analyze-spectrum", help="SSIM/L1/L2 entre espectros médios de dois datasets.")
    espectro.add_argument("--a", type=Path, required=True)
    espectro.add_argument("--b", type=Path, required=True)
    espectro.add_argument("--linear-magnitude", action="store_true")
    espectro.add_argument("--out", type=Path, default=None)
    _add_resize(espectro)

    # ===== analyze-slope =====
    slope = sub.add_parser("analyze-slope", help="Expoente â do perfil radial de um dataset.")
    slope.add_argument("--dataset", type=Path, required=True)
    slope.add_argument("--out", type=Path, default=None)
    _add_resize(slope)

    # ===== analyze-filters =====
    filt = sub.add_parser("analyze-filters", help="Diversidade de filtros de um modelo (WT01).")
    filt.add_argument("--weights", type=Path, required=True)
    filt.add_argument("--baseline", type=Path, default=None, help="Modelo de referência para comparação.")
    filt.add_argument("--out", type=Path, default=None)

    # ===== render-spectrum =====
    rend = sub.add_parser("render-spectrum", help="Espectro médio como PNG em tons de cinza.")
    rend.add_argument("--dataset", type=Path, required=True)
    rend.add_argument("--out", type=Path, required=True)
    rend.add_argument("--linear-magnitude", action="store_true")
    _add_resize(rend)

    # ===== render-profile =====
    prof = sub.add_parser("render-profile", help="Gráfico log-log dos perfis radiais.")
    prof.add_argument("--dataset", type=Path, action="append", required=True)
    prof.add_argument("--out", type=Path, required=True)
    _add_resize(prof)

    # ===== verify =====
    ver = sub.add_parser("verify", help="Regenera o dataset pelo manifesto e compara os pixels.")
    ver.add_argument("--dataset", type=Path, required=True)
    ver.add_argument("--out", type=Path, default=None)

    return parser
