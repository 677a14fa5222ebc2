"""
Interface de linha de comando do primgen.

Códigos de saída: 0 sucesso, 1 erro de validação, 2 erro de I/O.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional

from config import Config
from core.analysis import (
    AnalysisError,
    channel_slopes,
    dataset_spectrum,
    distance_header,
    fit_profile,
    spectrum_distance,
)
from core.data_loader import DatasetError, FormatError, list_layer_files
from core.generator import ConfigError, GeneratorConfig, generate_dataset, verify_dataset
from core.shapes import ShapeError, Variant, parse_size_policy
from core.similarity import SimilarityError, compare_reports, model_report
from core.spectrum import SpectrumError
from core.validators import validar_resolucao, validar_workers
from ui.arguments import build_parser
from ui.components import (
    echo_config,
    render_profile_plot,
    render_spectrum_png,
    write_report,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDACAO = 1
EXIT_IO = 2


def configurar_logging(verbose: bool = False) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )


def _checar_resize(resize: Optional[int]) -> None:
    if resize is None:
        return
    valido, msg = validar_resolucao(resize)
    if not valido:
        raise ConfigError(f"--resize: {msg}")


def _resolver_workers(workers: Optional[int]) -> int:
    if workers is None:
        try:
            workers = Config.generator.default_workers()
        except ValueError:
            raise ConfigError(
                f"${Config.generator.workers_env} deve ser um inteiro"
            )
    valido, msg = validar_workers(workers)
    if not valido:
        raise ConfigError(msg)
    return workers


def cmd_generate(args: argparse.Namespace) -> int:
    try:
        policy = parse_size_policy(args.size_policy)
        variant = Variant.parse(args.variant)
    except ShapeError as e:
        raise ConfigError(str(e)) from e

    config = GeneratorConfig(
        variant=variant,
        resolution=args.resolution,
        count=args.count,
        seed=args.seed,
        shapes=args.shapes,
        size_policy=policy,
        a_range=(args.a_min, args.a_max),
        label_count=args.labels,
        normalize=args.normalize,
        saliency_size=tuple(args.saliency_size),
        saliency_center=tuple(args.saliency_center),
    )
    workers = _resolver_workers(args.workers)

    echo_config({"command": "generate", **config.to_dict(), "out": str(args.out), "workers": workers})
    manifest = generate_dataset(config, args.out, workers=workers)
    logger.info(f"{len(manifest.records)} imagens em {args.out}")
    return EXIT_OK


def cmd_analyze_spectrum(args: argparse.Namespace) -> int:
    _checar_resize(args.resize)
    echo_config({
        "command": "analyze-spectrum",
        "a": str(args.a),
        "b": str(args.b),
        "linear_magnitude": args.linear_magnitude,
        "resize": args.resize,
        "out": str(args.out) if args.out else None,
        **{f"ssim_{k}": v for k, v in distance_header(args.linear_magnitude).items()},
    })

    stats_a = dataset_spectrum(args.a, linear=args.linear_magnitude, resize=args.resize)
    stats_b = dataset_spectrum(args.b, linear=args.linear_magnitude, resize=args.resize)
    relatorio = {
        "header": distance_header(args.linear_magnitude),
        "a": {"path": str(args.a), "images": stats_a.sample_count},
        "b": {"path": str(args.b), "images": stats_b.sample_count},
        "resolution": stats_a.resolution,
        **spectrum_distance(stats_a, stats_b),
    }
    write_report(relatorio, args.out)
    return EXIT_OK


def cmd_analyze_slope(args: argparse.Namespace) -> int:
    _checar_resize(args.resize)
    echo_config({
        "command": "analyze-slope",
        "dataset": str(args.dataset),
        "resize": args.resize,
        "out": str(args.out) if args.out else None,
        "band": [Config.analysis.slope_min_freq, f"H/{Config.analysis.slope_max_divisor}"],
    })

    stats = dataset_spectrum(args.dataset, resize=args.resize)
    ajuste = fit_profile(stats.radial_profile, stats.resolution)
    relatorio = {
        "dataset": str(args.dataset),
        "images": stats.sample_count,
        "resolution": stats.resolution,
        "a_hat": ajuste.a_hat,
        "channel_a_hat": channel_slopes(stats),
        "intercept": ajuste.intercept,
        "r_squared": ajuste.r_squared,
        "rings": ajuste.rings,
        "band": list(ajuste.band),
    }
    write_report(relatorio, args.out)
    return EXIT_OK


def cmd_analyze_filters(args: argparse.Namespace) -> int:
    echo_config({
        "command": "analyze-filters",
        "weights": str(args.weights),
        "baseline": str(args.baseline) if args.baseline else None,
        "out": str(args.out) if args.out else None,
        "norm_eps": Config.analysis.norm_eps,
    })

    relatorio = model_report(list_layer_files(args.weights))
    dados = relatorio.to_dict()
    if args.baseline is not None:
        base = model_report(list_layer_files(args.baseline))
        dados["comparison"] = compare_reports(relatorio, base)

    write_report(dados, args.out)
    if relatorio.failed:
        logger.warning(f"Camadas com falha: {dados['failed_layers']}")
        return EXIT_VALIDACAO
    return EXIT_OK


def cmd_render_spectrum(args: argparse.Namespace) -> int:
    _checar_resize(args.resize)
    echo_config({
        "command": "render-spectrum",
        "dataset": str(args.dataset),
        "out": str(args.out),
        "linear_magnitude": args.linear_magnitude,
        "resize": args.resize,
    })

    stats = dataset_spectrum(args.dataset, linear=args.linear_magnitude, resize=args.resize)
    render_spectrum_png(stats, args.out)
    logger.info(f"Espectro médio gravado em {args.out}")
    return EXIT_OK


def cmd_render_profile(args: argparse.Namespace) -> int:
    _checar_resize(args.resize)
    echo_config({
        "command": "render-profile",
        "dataset": [str(d) for d in args.dataset],
        "out": str(args.out),
        "resize": args.resize,
    })

    perfis = [(d.name or str(d), dataset_spectrum(d, resize=args.resize)) for d in args.dataset]
    render_profile_plot(perfis, args.out)
    logger.info(f"Perfis radiais gravados em {args.out}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    echo_config({
        "command": "verify",
        "dataset": str(args.dataset),
        "out": str(args.out) if args.out else None,
    })

    resultado = verify_dataset(args.dataset)
    write_report(resultado, args.out)
    return EXIT_OK if not resultado["mismatches"] else EXIT_VALIDACAO


COMANDOS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "generate": cmd_generate,
    "analyze-spectrum": cmd_analyze_spectrum,
    "analyze-slope": cmd_analyze_slope,
    "analyze-filters": cmd_analyze_filters,
    "render-spectrum": cmd_render_spectrum,
    "render-profile": cmd_render_profile,
    "verify": cmd_verify,
}


def parse_and_dispatch(argv: Optional[List[str]] = None) -> int:
    """Interpreta argv, executa o subcomando e devolve o código de saída."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_VALIDACAO

    configurar_logging(args.verbose)

    try:
        return COMANDOS[args.command](args)

    except ConfigError as e:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"primgen: erro: {e}\n")
        return EXIT_VALIDACAO

    except (ShapeError, SpectrumError, AnalysisError, SimilarityError, FormatError) as e:
        logger.error(f"Erro de validação: {e}")
        sys.stderr.write(f"primgen: erro: {e}\n")
        return EXIT_VALIDACAO

    except (DatasetError, OSError) as e:
        logger.error(f"Erro de I/O: {e}")
        sys.stderr.write(f"primgen: erro de I/O: {e}\n")
        return EXIT_IO

    except Exception as e:
        logger.exception(f"Erro inesperado em {args.command}: {e}")
        sys.stderr.write(f"primgen: erro inesperado: {e}\n")
        return EXIT_IO


def main() -> None:
    sys.exit(parse_and_dispatch())


if __name__ == "__main__":
    main()
