"""Strongly singular oscillatory operator."""

import numpy as np
import pytest

import hardyloc as hl
from hardyloc.families import Case, strong_family
from hardyloc.singular import delta_band, sample_strong_kernel


def spec_for(grid, theta=1.0, conjugate=False):
    return hl.StrongKernelSpec(theta, grid.h, conjugate=conjugate)


def test_eval_outside_support(grid1):
    s = spec_for(grid1)
    assert hl.strong_kernel_eval(s, 3.0) == 0.0


def test_eval_unit_point(grid1):
    s = spec_for(grid1, theta=1.0)
    got = hl.strong_kernel_eval(s, 1.0)
    np.testing.assert_allclose(got, np.exp(1j), rtol=1e-14)


def test_eval_modulus_law(grid1):
    s = spec_for(grid1, theta=0.5)
    cut = s.cutoff
    rng = np.random.default_rng(0)
    for _ in range(100):
        x = float(rng.uniform(0.05, 2.5))
        got = abs(hl.strong_kernel_eval(s, x))
        want = cut(np.array([x]))[0] / x
        assert abs(got - want) <= 1e-13 * max(want, 1.0)


def test_eval_origin_raises(grid1):
    with pytest.raises(ValueError):
        hl.strong_kernel_eval(spec_for(grid1), 0.0)


def test_spec_validation(grid1):
    with pytest.raises(ValueError):
        hl.StrongKernelSpec(-1.0, grid1.h)
    with pytest.raises(ValueError):
        hl.StrongKernelSpec(0.5, 0.0)
    with pytest.raises(ValueError):
        sample_strong_kernel(hl.StrongKernelSpec(0.5, grid1.h / 4), grid1)


def test_sampled_kernel_truncation(grid1):
    s = hl.StrongKernelSpec(0.5, 4 * grid1.h)
    k = sample_strong_kernel(s, grid1).values
    r = grid1.radii()
    assert np.all(k[r < 4 * grid1.h] == 0.0)
    assert np.all(k[r > 2.0] == 0.0)


def test_transform_zero_and_linear(grid1):
    s = spec_for(grid1, theta=0.5)
    assert np.all(hl.strong_transform(grid1, s).values == 0.0)
    rng = np.random.default_rng(1)
    f = grid1.with_values(rng.standard_normal(257))
    g = grid1.with_values(rng.standard_normal(257))
    lhs = hl.strong_transform(grid1.with_values(2.0 * f.values + g.values), s).values
    rhs = 2.0 * hl.strong_transform(f, s).values + hl.strong_transform(g, s).values
    np.testing.assert_allclose(lhs, rhs, rtol=0, atol=1e-12 * np.abs(rhs).max())


def test_delta_sensitivity_is_reported(grid1):
    s = spec_for(grid1, theta=0.5)
    f = hl.sample(lambda x: np.exp(-(x**2)), grid1)
    t1, t2 = delta_band(f, s)
    gap = np.abs(t1.values - t2.values).max()
    assert gap > 0  # the band is a genuine quadrature uncertainty


def test_transform_support(grid1):
    s = spec_for(grid1, theta=0.5)
    prof = np.zeros(257)
    xs = grid1.axis_nodes()
    prof[np.abs(xs) <= 1.0] = 1.0
    f = grid1.with_values(prof)
    out = np.abs(hl.strong_transform(f, s).values)
    outside = np.abs(xs) > 3.0 + 2 * grid1.h
    assert out[outside].max() <= 1e-13 * out.max()


def test_conjugation_symmetry(grid1):
    rng = np.random.default_rng(2)
    f = grid1.with_values(rng.standard_normal(257) + 1j * rng.standard_normal(257))
    s = spec_for(grid1, theta=0.5)
    sbar = spec_for(grid1, theta=0.5, conjugate=True)
    lhs = hl.strong_transform(f.with_values(np.conj(f.values)), s).values
    rhs = np.conj(hl.strong_transform(f, sbar).values)
    np.testing.assert_allclose(lhs, rhs, rtol=0, atol=1e-12 * np.abs(rhs).max())


def test_experiment_errors(grid1, w_exp, bump, ladder):
    with pytest.raises(ValueError):
        hl.strong_boundedness_experiment(w_exp, 2.0, [], bump, ladder)
    fam = strong_family(grid1, w_exp, 4, seed=3)
    with pytest.raises(ValueError):
        hl.strong_boundedness_experiment(w_exp, 3.0, fam, bump, ladder)


def test_experiment_skips_degenerate(grid1, w_exp, bump, ladder):
    fam = strong_family(grid1, w_exp, 4, seed=4)
    fam.append(Case("zzz-zero", "zero", "bump", grid1))
    rep = hl.strong_boundedness_experiment(w_exp, 2.0, fam, bump, ladder, theta=0.5)
    assert any("zzz-zero" in s for s in rep.skipped)
    assert len(rep.rows) == 4


def test_experiment_summary_finite(grid1, w_exp, bump, ladder):
    fam = strong_family(grid1, w_exp, 7, seed=5)
    for p in (1.0, 2.0):
        rep = hl.strong_boundedness_experiment(w_exp, p, fam, bump, ladder, theta=0.5)
        assert np.isfinite(rep.summary["max_ratio"])
        assert rep.summary["max_ratio"] > 0
    rep2 = hl.strong_boundedness_experiment(w_exp, 2.0, fam, bump, ladder, theta=0.25)
    assert np.isfinite(rep2.summary["max_atom_h1_ratio"])
    assert rep2.summary["max_atom_h1_ratio"] > 0
