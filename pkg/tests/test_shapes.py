"""
Testes unitários para rasterização e composição de formas.
"""

import math

import numpy as np
import pytest
from scipy import ndimage

from core.generator import GeneratorConfig
from core.shapes import (
    Decay,
    Fix,
    Monotone,
    PinkTexture,
    Rand,
    ShapeError,
    ShapeKind,
    ShapeSpec,
    Variant,
    add_saliency,
    compose_primitives,
    decay_cap,
    generate_variant,
    parse_size_policy,
    rasterize,
    render_variant,
    sample_shape,
    shape_mask,
)


def _forma(kind, center, size, orientation=0.0, color=(1.0, 0.0, 0.0)):
    return ShapeSpec(
        kind=kind,
        center=center,
        size=size,
        orientation=orientation,
        fill=Monotone(color),
        color=color,
    )


def _pixels(forma, resolucao=256):
    _, _, mascara = shape_mask(forma, resolucao, resolucao)
    return int(mascara.sum())


def _config(variant, resolution=64, shapes=100, **kwargs):
    return GeneratorConfig(variant=variant, resolution=resolution, count=1, shapes=shapes, **kwargs)


class TestDecayCap:
    """Testes para o teto de tamanho da política Decay."""

    def test_teto_inicial_e_h_sobre_5(self):
        assert decay_cap(0, 100, 256) == 51.2
        assert decay_cap(0, 37, 128) == 128 / 5

    def test_teto_final(self):
        assert decay_cap(99, 100, 256) == pytest.approx(0.512)

    def test_teto_nao_cresce(self):
        tetos = [decay_cap(n, 100, 256) for n in range(100)]
        assert all(b <= a for a, b in zip(tetos, tetos[1:]))


class TestSampleShape:
    """Testes para o sorteio de formas."""

    def test_primeira_forma_decay(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            forma = sample_shape(0, 100, Decay(), 256, rng)
            assert 1.0 <= forma.size[0] <= 51.2
            assert 1.0 <= forma.size[1] <= 51.2

    def test_ultima_forma_decay_e_um_pixel(self):
        forma = sample_shape(99, 100, Decay(), 256, np.random.default_rng(0))
        assert forma.size == (1.0, 1.0)

    def test_politica_fix(self):
        forma = sample_shape(42, 100, Fix(1 / 2), 256, np.random.default_rng(0))
        assert forma.size == (128.0, 128.0)

    def test_politica_rand(self):
        rng = np.random.default_rng(1)
        for n in range(200):
            forma = sample_shape(n, 200, Rand(), 256, rng)
            assert 1.0 <= min(forma.size) and max(forma.size) <= 256 / 5

    def test_campos_sorteados(self):
        rng = np.random.default_rng(2)
        tipos = set()
        for n in range(300):
            forma = sample_shape(n % 100, 100, Decay(), 64, rng)
            tipos.add(forma.kind)
            assert 0 <= forma.center[0] < 64 and 0 <= forma.center[1] < 64
            assert 0 <= forma.orientation < math.pi
            assert all(0 <= c <= 1 for c in forma.color)
            assert isinstance(forma.fill, Monotone)

        assert tipos == set(ShapeKind)

    def test_indice_fora_do_intervalo(self):
        with pytest.raises(ShapeError):
            sample_shape(5, 5, Decay(), 64, np.random.default_rng(0))
        with pytest.raises(ShapeError):
            sample_shape(0, 0, Decay(), 64, np.random.default_rng(0))

    def test_cronograma_decay_amostrado(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            for n in range(100):
                forma = sample_shape(n, 100, Decay(), 256, rng)
                limite = max(1.0, 51.2 * (100 - n) / 100)
                assert max(forma.size) <= limite + 1e-9

    @pytest.mark.slow
    def test_cronograma_decay_1e5_pares(self):
        rng = np.random.default_rng(4)
        for _ in range(1000):
            for n in range(100):
                forma = sample_shape(n, 100, Decay(), 256, rng)
                assert max(forma.size) <= max(1.0, 51.2 * (100 - n) / 100) + 1e-9


class TestParseSizePolicy:
    """Testes para a leitura da política de tamanho."""

    def test_formatos_aceitos(self):
        assert parse_size_policy("decay") == Decay()
        assert parse_size_policy("RAND") == Rand()
        assert parse_size_policy("fix:0.1") == Fix(0.1)

    def test_formatos_invalidos(self):
        for texto in ("fix:abc", "fix:0", "fix:1.5", "grow"):
            with pytest.raises(ShapeError):
                parse_size_policy(texto)


class TestRasterize:
    """Testes para a rasterização de formas."""

    def test_retangulo_cobrindo_a_tela(self):
        imagem = np.zeros((32, 32, 3))
        rasterize(_forma(ShapeKind.RECTANGLE, (16.0, 16.0), (32.0, 32.0)), imagem)

        assert np.all(imagem == np.array([1.0, 0.0, 0.0]))

    def test_area_da_elipse(self):
        for ra, rb in [(16, 16), (20, 35), (40, 17)]:
            forma = _forma(ShapeKind.ELLIPSE, (128.3, 127.6), (2.0 * ra, 2.0 * rb))
            assert _pixels(forma) == pytest.approx(math.pi * ra * rb, rel=0.03)

    def test_area_da_linha_alinhada(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            comprimento = float(rng.integers(32, 151))
            espessura = float(rng.integers(2, 9))
            centro = tuple(rng.uniform(100, 156, 2))
            forma = _forma(ShapeKind.LINE, centro, (comprimento, espessura))
            assert _pixels(forma) == pytest.approx(comprimento * espessura, rel=0.10)

    def test_area_de_1000_formas_rotacionadas(self):
        rng = np.random.default_rng(6)
        erros = []
        for _ in range(1000):
            kind = ShapeKind(rng.choice([k.value for k in ShapeKind]))
            if kind is ShapeKind.LINE:
                size = (float(rng.integers(64, 129)), float(rng.integers(16, 33)))
            else:
                size = tuple(float(s) for s in rng.integers(64, 129, 2))
            forma = _forma(kind, tuple(rng.uniform(100, 156, 2)), size, rng.uniform(0, math.pi))

            area = size[0] * size[1] * (math.pi / 4 if kind is ShapeKind.ELLIPSE else 1.0)
            tolerancia = 0.10 if kind is ShapeKind.LINE else 0.03
            pixels = _pixels(forma)
            assert pixels == pytest.approx(area, rel=tolerancia)
            erros.append((pixels - area) / area)

        # sem viés sistemático de borda
        assert abs(np.mean(erros)) < 0.005

    def test_forma_posterior_sobrescreve(self):
        imagem = np.zeros((32, 32, 3))
        rasterize(_forma(ShapeKind.RECTANGLE, (10.0, 10.0), (12.0, 12.0), color=(1.0, 0.0, 0.0)), imagem)
        rasterize(_forma(ShapeKind.RECTANGLE, (14.0, 14.0), (12.0, 12.0), color=(0.0, 0.0, 1.0)), imagem)

        assert np.array_equal(imagem[13, 13], [0.0, 0.0, 1.0])
        assert np.array_equal(imagem[5, 5], [1.0, 0.0, 0.0])

    def test_recorte_nas_bordas(self):
        imagem = np.zeros((16, 16, 3))
        rasterize(_forma(ShapeKind.ELLIPSE, (0.5, 0.5), (20.0, 20.0)), imagem)

        assert imagem[0, 0, 0] == 1.0
        assert imagem[15, 15, 0] == 0.0

    def test_textura_amostrada_no_mesmo_pixel(self):
        imagem = np.zeros((16, 16, 3))
        textura = np.random.default_rng(7).uniform(size=(16, 16, 3))
        forma = ShapeSpec(
            kind=ShapeKind.RECTANGLE,
            center=(8.0, 8.0),
            size=(16.0, 16.0),
            orientation=0.0,
            fill=PinkTexture(1.0),
            color=(0.0, 0.0, 0.0),
        )
        rasterize(forma, imagem, texture=textura)

        assert np.array_equal(imagem, textura)

    def test_textura_exigida_sse_preenchimento_rosa(self):
        imagem = np.zeros((16, 16, 3))
        with pytest.raises(ShapeError):
            rasterize(_forma(ShapeKind.ELLIPSE, (8.0, 8.0), (4.0, 4.0)), imagem, texture=np.zeros((16, 16, 3)))

    def test_tamanho_minimo(self):
        with pytest.raises(ShapeError):
            _forma(ShapeKind.ELLIPSE, (8.0, 8.0), (0.5, 4.0))


class TestComposePrimitives:
    """Testes para a composição Primitives."""

    def test_sem_formas_so_fundo(self):
        imagem = compose_primitives(32, 0, Decay(), np.random.default_rng(0))
        assert np.all(imagem == imagem[0, 0])

    def test_deterministico(self):
        a = compose_primitives(256, 100, Decay(), np.random.default_rng(8))
        b = compose_primitives(256, 100, Decay(), np.random.default_rng(8))
        assert np.array_equal(a, b)

    def test_fundo_fornecido_e_preservado_fora_das_formas(self):
        fundo = np.random.default_rng(1).uniform(size=(32, 32, 3))
        imagem = compose_primitives(32, 0, Decay(), np.random.default_rng(0), background=fundo)

        assert np.array_equal(imagem, fundo)
        assert imagem is not fundo

    def test_cobertura_estritamente_entre_zero_e_um(self):
        config = _config(Variant.PRIMITIVES, resolution=128)
        for seed in range(50):
            resultado = render_variant(Variant.PRIMITIVES, config, np.random.default_rng(seed))
            assert 0.0 < resultado.coverage < 1.0

    @pytest.mark.slow
    def test_cobertura_em_500_imagens_256(self):
        config = _config(Variant.PRIMITIVES, resolution=256)
        coberturas = [
            render_variant(Variant.PRIMITIVES, config, np.random.default_rng(s)).coverage
            for s in range(500)
        ]
        assert all(0.0 < c < 1.0 for c in coberturas)


class TestAddSaliency:
    """Testes para a inserção do objeto saliente."""

    def test_forma_monotona_grande_no_centro(self):
        resolucao = 96
        for seed in range(20):
            fundo = np.zeros((resolucao, resolucao, 3))
            imagem, registro = add_saliency(fundo, False, np.random.default_rng(seed))

            pintados = np.any(imagem != 0, axis=2)
            assert pintados.sum() >= (resolucao / 3) ** 2 * math.pi / 4
            assert registro.shape.kind in (ShapeKind.ELLIPSE, ShapeKind.RECTANGLE)
            assert isinstance(registro.shape.fill, Monotone)

    def test_centro_no_terco_central(self):
        resolucao = 32
        centro = (resolucao / 3, 2 * resolucao / 3)
        rng = np.random.default_rng(9)
        for _ in range(10_000):
            _, registro = add_saliency(np.zeros((resolucao, resolucao, 3)), False, rng)
            cx, cy = registro.shape.center
            assert centro[0] <= cx <= centro[1]
            assert centro[0] <= cy <= centro[1]

            x0, y0, x1, y1 = registro.bbox
            assert x0 < centro[1] and x1 > centro[0]
            assert y0 < centro[1] and y1 > centro[0]

    def test_tamanho_no_intervalo(self):
        rng = np.random.default_rng(10)
        for _ in range(500):
            _, registro = add_saliency(np.zeros((64, 64, 3)), False, rng)
            assert all(64 / 3 <= s <= 2 * 64 / 3 for s in registro.shape.size)

    def test_saliencia_texturizada_nao_e_constante(self):
        imagem, registro = add_saliency(np.zeros((64, 64, 3)), True, np.random.default_rng(11))
        x0, y0, x1, y1 = registro.bbox

        assert isinstance(registro.shape.fill, PinkTexture)
        assert 0.5 <= registro.shape.fill.a <= 3.5
        assert imagem[y0:y1, x0:x1].var() > 0


class TestGenerateVariant:
    """Testes para o despacho das variantes."""

    def test_primitives_ps_sem_formas_igual_pinknoise_ps(self):
        a = generate_variant(Variant.PRIMITIVES_PS, _config(Variant.PRIMITIVES_PS, shapes=0), np.random.default_rng(3))
        b = generate_variant(Variant.PINK_NOISE_PS, _config(Variant.PINK_NOISE_PS, shapes=0), np.random.default_rng(3))
        assert np.array_equal(a, b)

    @pytest.mark.parametrize("variant", list(Variant))
    def test_deterministico(self, variant):
        config = _config(variant)
        a = generate_variant(variant, config, np.random.default_rng(21))
        b = generate_variant(variant, config, np.random.default_rng(21))

        assert a.shape == (64, 64, 3)
        assert np.array_equal(a, b)
        assert a.min() >= 0.0 and a.max() <= 1.0

    def test_fundo_monotono_vs_texturizado(self):
        s = render_variant(Variant.PRIMITIVES_S, _config(Variant.PRIMITIVES_S, shapes=0), np.random.default_rng(4))
        ps = render_variant(Variant.PRIMITIVES_PS, _config(Variant.PRIMITIVES_PS, shapes=0), np.random.default_rng(4))

        def fora_da_caixa(resultado):
            fora = np.ones((64, 64), dtype=bool)
            x0, y0, x1, y1 = resultado.saliency.bbox
            fora[y0:y1, x0:x1] = False
            return resultado.image[fora]

        assert np.ptp(fora_da_caixa(s), axis=0).max() == 0.0
        assert np.ptp(fora_da_caixa(ps), axis=0).min() > 0.0

    def test_primitives_s_tem_regiao_monotona_grande(self):
        resolucao = 64
        config = _config(Variant.PRIMITIVES_S, resolution=resolucao)
        for seed in range(10):
            resultado = render_variant(Variant.PRIMITIVES_S, config, np.random.default_rng(seed))
            cor = np.array(resultado.saliency.shape.color)
            rotulos, _ = ndimage.label(np.all(resultado.image == cor, axis=2))
            maior = np.bincount(rotulos.ravel())[1:].max()
            assert maior >= (resolucao / 3) ** 2 * math.pi / 4

    def test_pinknoise_sem_linhas_vizinhas_iguais(self):
        imagem = generate_variant(Variant.PINK_NOISE, _config(Variant.PINK_NOISE), np.random.default_rng(5))
        diferencas = np.abs(np.diff(imagem, axis=0)).max(axis=(1, 2))
        assert np.all(diferencas > 1e-9)

    def test_metadados_dos_expoentes(self):
        config = _config(Variant.PRIMITIVES_PS)
        resultado = render_variant(Variant.PRIMITIVES_PS, config, np.random.default_rng(6))

        assert len(resultado.exponents) == 2
        assert all(0.5 <= a <= 3.5 for a in resultado.exponents)
        assert resultado.shape_count == 100

    def test_variante_desconhecida(self):
        with pytest.raises(ShapeError):
            generate_variant("Fractal", _config(Variant.PRIMITIVES), np.random.default_rng(0))

    @pytest.mark.slow
    def test_saliencia_em_10000_primitives_ps_128(self):
        resolucao = 128
        config = _config(Variant.PRIMITIVES_PS, resolution=resolucao)
        terco, dois_tercos = resolucao / 3, 2 * resolucao / 3
        for seed in range(10_000):
            registro = render_variant(Variant.PRIMITIVES_PS, config, np.random.default_rng(seed)).saliency
            cx, cy = registro.shape.center
            x0, y0, x1, y1 = registro.bbox
            assert terco <= cx <= dois_tercos and terco <= cy <= dois_tercos
            assert x0 < dois_tercos and x1 > terco and y0 < dois_tercos and y1 > terco


# Executar testes
if __name__ == "__main__":
    pytest.main([__file__, "-v"])
