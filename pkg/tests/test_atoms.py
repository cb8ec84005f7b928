"""Atom generation, validation, and the atom-level bound experiment."""

import numpy as np
import pytest

import hardyloc as hl


def test_atom_deterministic(w_exp):
    spec = hl.AtomSpec(w_exp, 2.0, seed=7, center=(0.5,), side=0.5)
    a = hl.make_atom(spec)
    b = hl.make_atom(spec)
    assert np.array_equal(a.values, b.values)


def test_atom_saturates_norm(w_exp):
    spec = hl.AtomSpec(w_exp, 2.0, seed=3, center=(-1.0,), side=0.5)
    a = hl.make_atom(spec)
    cube = hl.snapped_atom_cube(spec)
    bound = hl.cube_measure(w_exp, cube) ** (1.0 / 2.0 - 1.0)
    norm = hl.lp_norm(a, w_exp, 2.0)
    assert abs(norm - bound) <= 1e-12 * bound


def test_atom_mean_zero_small_cube(w_exp):
    spec = hl.AtomSpec(w_exp, 2.0, seed=4, center=(0.0,), side=0.5)
    a = hl.make_atom(spec)
    l1 = float(np.sum(np.abs(a.values))) * a.h
    assert abs(hl.integrate(a)) <= 1e-10 * l1


def test_atom_validates_round_trip(w_exp):
    spec = hl.AtomSpec(w_exp, 2.0, seed=5, center=(1.5,), side=0.75)
    rep = hl.validate_atom(hl.make_atom(spec), spec)
    assert rep.ok
    assert rep.details["support_leak"] == 0.0


def test_atom_large_cube_skips_cancellation(w_exp):
    spec = hl.AtomSpec(w_exp, 2.0, seed=6, center=(0.0,), side=2.0)
    a = hl.make_atom(spec)
    rep = hl.validate_atom(a, spec)
    assert rep.ok and rep.details["mean_required"] is False
    # profiles are generic, so the integral genuinely does not vanish
    assert abs(hl.integrate(a)) > 1e-6


def test_atom_sup_norm_branch(w_exp):
    spec = hl.AtomSpec(w_exp, np.inf, seed=8, center=(0.5,), side=0.5)
    a = hl.make_atom(spec)
    cube = hl.snapped_atom_cube(spec)
    want = hl.cube_measure(w_exp, cube) ** (-1.0)
    assert abs(np.abs(a.values).max() - want) <= 1e-12 * want
    assert hl.validate_atom(a, spec).ok


def test_mean_projection_idempotent(w_exp, grid1):
    spec = hl.AtomSpec(w_exp, 2.0, seed=9, center=(0.25,), side=0.5)
    a = hl.make_atom(spec)
    cube = hl.snapped_atom_cube(spec)
    mask = np.abs(grid1.axis_nodes() - cube.center[0]) <= cube.side / 2 + grid1.h / 4
    again = a.values.copy()
    again[mask] -= again[mask].mean()
    assert np.abs(again - a.values).max() <= 1e-13 * np.abs(a.values).max()


def test_validate_flags_broken_atoms(w_exp, grid1):
    spec = hl.AtomSpec(w_exp, 2.0, seed=10, center=(0.5,), side=0.5)
    a = hl.make_atom(spec)
    cube = hl.snapped_atom_cube(spec)
    mask = np.abs(grid1.axis_nodes() - cube.center[0]) <= cube.side / 2 + grid1.h / 4

    plus_const = a.values.copy()
    plus_const[mask] += 1.0
    rep = hl.validate_atom(a.with_values(plus_const), spec)
    assert not rep.mean_ok

    rep2 = hl.validate_atom(a.with_values(2.0 * a.values), spec)
    assert not rep2.norm_ok

    leaked = a.values.copy()
    leaked[0] = 1.0
    rep3 = hl.validate_atom(a.with_values(leaked), spec)
    assert not rep3.support_ok


def test_atom_spec_validation(w_exp):
    with pytest.raises(ValueError):
        hl.AtomSpec(w_exp, 1.0, seed=0, center=(0.0,), side=0.5)
    with pytest.raises(ValueError):
        hl.AtomSpec(w_exp, 2.0, seed=0, center=(0.0,), side=3.0)
    with pytest.raises(ValueError):
        hl.AtomSpec(w_exp, 2.0, seed=0)
    with pytest.raises(ValueError):
        hl.make_atom(hl.AtomSpec(w_exp, 2.0, seed=0, single=True))
    with pytest.raises(ValueError):
        hl.snapped_atom_cube(hl.AtomSpec(w_exp, 2.0, seed=0, center=(7.9,), side=1.0))


def test_single_atom_paths(w_exp, grid1):
    a = hl.make_single_atom(2.0, w_exp, seed=11)
    want = w_exp.box_measure() ** (-0.5)
    assert abs(hl.lp_norm(a, w_exp, 2.0) - want) <= 1e-12 * want
    spec = hl.AtomSpec(w_exp, 2.0, seed=11, single=True)
    assert hl.validate_atom(a, spec).ok

    const = hl.sample(lambda x: np.ones_like(x), grid1)
    b = hl.make_single_atom(2.0, w_exp, profile=const)
    assert hl.validate_atom(b, spec).ok

    with pytest.raises(ValueError):
        hl.make_single_atom(2.0, w_exp, profile=grid1)  # zero profile


def test_atom_experiment_errors(w_exp, bump, ladder):
    with pytest.raises(ValueError):
        hl.atom_h1_bound_experiment(0, 2.0, w_exp, bump, ladder)


def test_atom_experiment_small_run(w_exp, bump, ladder):
    rep = hl.atom_h1_bound_experiment(4, 2.0, w_exp, bump, ladder, seed=1)
    assert len(rep.cases) == 4
    assert np.isfinite(rep.max_h1) and rep.max_h1 > 0
    assert all(np.isfinite(v) for v in rep.single_cs_ratio.values())
