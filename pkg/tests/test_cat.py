import numpy as np
import pytest

from spectral_cat import cat, errors
from spectral_cat.spectra import WHITE_POINTS, weight_cmf

from .conftest import random_reflectances

A, D65 = np.array(WHITE_POINTS["A"]), np.array(WHITE_POINTS["D65"])
TABLE = np.array([0.2, 0.3, 0.1])


@pytest.mark.parametrize("variant, expected", [
    (cat.ORIGINAL, (0.1707, 0.3000, 0.2426)),
    (cat.SYMMETRIC, (0.1699, 0.3000, 0.2415)),
])
def test_table_example(backend, ctx_a_d65, variant, expected):
    out = cat.transform(ctx_a_d65[variant][0], TABLE)
    assert np.abs(out - expected).max() < 0.005


def test_symmetric_round_trip(ctx_a_d65):
    ab, ba = ctx_a_d65[cat.SYMMETRIC]
    assert np.abs(cat.round_trip(ab, ba, TABLE) - TABLE).max() < 1e-4


def test_original_round_trip_drifts(ctx_a_d65):
    # the original variant is not self-inverse
    ab, ba = ctx_a_d65[cat.ORIGINAL]
    assert np.abs(cat.round_trip(ab, ba, TABLE) - TABLE).max() > 1e-3


@pytest.mark.parametrize("variant", cat.VARIANTS)
def test_white_maps_to_white(backend, variant):
    rng = np.random.default_rng(1)
    for _ in range(5):
        s, d = rng.uniform(0.6, 1.4, (2, 3))
        s[1] = d[1] = 1.0
        ctx = cat.prepare_context(s, d, 1.0, variant)
        out = cat.transform(ctx, ctx.src_wp * 0.7)
        assert np.abs(out - 0.7 * ctx.dst_wp).max() < 1e-8


@pytest.mark.parametrize("variant", cat.VARIANTS)
def test_d_zero_is_exact_identity(variant):
    ctx = cat.prepare_context(A, D65, 0.0, variant)
    assert ctx.identity
    assert np.array_equal(cat.transform(ctx, TABLE), TABLE)


def test_same_white_is_identity():
    ctx = cat.prepare_context(D65, D65, 1.0, cat.SYMMETRIC)
    assert np.array_equal(cat.transform(ctx, TABLE), TABLE)


@pytest.mark.parametrize("variant", cat.VARIANTS)
def test_luminance_and_positivity(backend, variant):
    ctx = cat.prepare_context(A, D65, 1.0, variant)
    src = random_reflectances(np.random.default_rng(2), 300) @ ctx.A_S
    out, ok = cat.transform_many(ctx, src)
    assert ok.all()
    assert np.array_equal(out[:, 1], src[:, 1])
    assert np.all(out > 0)


def test_batch_matches_single(backend, ctx_a_d65):
    ctx = ctx_a_d65[cat.SYMMETRIC][0]
    src = random_reflectances(np.random.default_rng(3), 10) @ ctx.A_S
    out, _ = cat.transform_many(ctx, src)
    for k in range(len(src)):
        np.testing.assert_allclose(cat.transform(ctx, src[k]), out[k],
                                   rtol=1e-14)


def test_batch_marks_failures(ctx_a_d65):
    ctx = ctx_a_d65[cat.ORIGINAL][0]
    src = np.array([TABLE, [0.3, 0.3, -0.1], [0.2, 0.0, 0.1]])
    out, ok = cat.transform_many(ctx, src)
    assert ok.tolist() == [True, False, False]
    assert np.isnan(out[1:]).all()


def test_partial_adaptation_is_monotone_and_continuous():
    outs = [cat.transform(cat.prepare_context(A, D65, D), TABLE)
            for D in np.linspace(0, 1, 11)]
    x = np.array(outs)[:, 0]
    assert np.all(np.diff(x) < 0)
    assert np.abs(np.diff(x)).max() < 0.01


def test_partial_blend(ctx_a_d65):
    ctx = cat.prepare_context(A, D65, 0.25)
    np.testing.assert_allclose(ctx.W_D_effective.values,
                               0.25 * ctx.W_D.values + 0.75 * ctx.W_S.values)
    np.testing.assert_allclose(ctx.A_D, weight_cmf(ctx.W_D_effective))


@pytest.mark.parametrize("D", [-0.1, 1.5])
def test_invalid_d(D):
    with pytest.raises(errors.InvalidD):
        cat.prepare_context(A, D65, D)


def test_bad_variant():
    with pytest.raises(ValueError):
        cat.prepare_context(A, D65, 1.0, "mirror")


@pytest.mark.parametrize("y", [0.0, -0.2])
def test_nonpositive_source_y(ctx_a_d65, y):
    with pytest.raises(errors.DegenerateLuminance):
        cat.transform(ctx_a_d65[cat.ORIGINAL][0], [0.2, y, 0.1])


def test_white_scale_auto_detected():
    a = cat.prepare_context(A * 100, D65 * 100)
    b = cat.prepare_context(A, D65)
    np.testing.assert_allclose(a.src_wp, b.src_wp, rtol=1e-15)
    np.testing.assert_allclose(a.W_D.values, b.W_D.values, rtol=1e-12)


def test_to_unit_scale():
    np.testing.assert_allclose(cat.to_unit_scale([20, 30, 10]), [0.2, 0.3, 0.1])
    np.testing.assert_allclose(cat.to_unit_scale([0.2, 0.3, 0.1]), [0.2, 0.3, 0.1])
    np.testing.assert_allclose(cat.to_unit_scale([1, 1, 1], "0-100"), [.01] * 3)
    with pytest.raises(ValueError):
        cat.to_unit_scale([1, 1, 1], "percent")


@pytest.mark.parametrize("name", ["A", "C", "D65", "EE"])
def test_reconstructed_illuminant_white(name):
    wp = np.array(WHITE_POINTS[name])
    W = cat.reconstruct_illuminant(wp)
    assert np.all(W.values > 0)
    np.testing.assert_allclose(weight_cmf(W).sum(axis=0), wp, atol=1e-8)
