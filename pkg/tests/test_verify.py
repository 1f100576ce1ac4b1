import numpy as np
import pytest

import maxent_copula as mc
from conftest import cached_model

SWEEP_2D = [
    ("plinear0.1", lambda: mc.PiecewiseLinearDiagonal(0.1, 2)),
    ("plinear0.2", lambda: mc.PiecewiseLinearDiagonal(0.2, 2)),
    ("plinear0.35", lambda: mc.PiecewiseLinearDiagonal(0.35, 2)),
    ("plinear0.5", lambda: mc.PiecewiseLinearDiagonal(0.5, 2)),
    ("power1.1", lambda: mc.PowerDiagonal(1.1, 2)),
    ("power2^1/2", lambda: mc.PowerDiagonal(2.0 ** 0.5, 2)),
    ("power2^1/3", lambda: mc.PowerDiagonal(2.0 ** (1.0 / 3.0), 2)),
    ("power2^1/5", lambda: mc.PowerDiagonal(2.0 ** 0.2, 2)),
    ("power2", lambda: mc.PowerDiagonal(2.0, 2)),
    ("fgm-1", lambda: mc.FgmDiagonal(-1.0)),
    ("fgm-0.5", lambda: mc.FgmDiagonal(-0.5)),
    ("fgm0", lambda: mc.FgmDiagonal(0.0)),
    ("fgm0.5", lambda: mc.FgmDiagonal(0.5)),
    ("fgm1", lambda: mc.FgmDiagonal(1.0)),
    ("gauss-0.95", lambda: mc.GaussianDiagonal(-0.95)),
    ("gauss-0.5", lambda: mc.GaussianDiagonal(-0.5)),
    ("gauss0", lambda: mc.GaussianDiagonal(0.0)),
    ("gauss0.5", lambda: mc.GaussianDiagonal(0.5)),
    ("gauss0.95", lambda: mc.GaussianDiagonal(0.95)),
]

SWEEP_3D = [
    ("plinear0.1d3", lambda: mc.PiecewiseLinearDiagonal(0.1, 3)),
    ("plinear0.2d3", lambda: mc.PiecewiseLinearDiagonal(0.2, 3)),
    ("plinear0.35d3", lambda: mc.PiecewiseLinearDiagonal(0.35, 3)),
    ("plinear0.5d3", lambda: mc.PiecewiseLinearDiagonal(0.5, 3)),
    ("power1.1d3", lambda: mc.PowerDiagonal(1.1, 3)),
    ("power2^1/2d3", lambda: mc.PowerDiagonal(2.0 ** 0.5, 3)),
    ("power2^1/3d3", lambda: mc.PowerDiagonal(2.0 ** (1.0 / 3.0), 3)),
    ("power2^1/5d3", lambda: mc.PowerDiagonal(2.0 ** 0.2, 3)),
    ("power2d3", lambda: mc.PowerDiagonal(2.0, 3)),
]


@pytest.mark.parametrize("key,factory", SWEEP_2D)
def test_constraints_sweep_2d(key, factory):
    model = cached_model(key, factory)
    marg = mc.check_marginals(model, grid_size=101, tol=1e-6)
    diag = mc.check_diagonal(model, grid_size=101, tol=1e-6)
    assert marg.passed, f"{key}: marginal sup-error {marg.sup_error:.2e}"
    assert diag.passed, f"{key}: diagonal sup-error {diag.sup_error:.2e}"


@pytest.mark.parametrize("key,factory", SWEEP_3D)
def test_constraints_sweep_3d(key, factory):
    model = cached_model(key, factory)
    rep = mc.verify_model(model, grid_size=21, seed=0)
    by_name = {c.name: c for c in rep.checks}
    assert by_name["marginals"].passed, by_name["marginals"].sup_error
    assert by_name["diagonal"].passed, by_name["diagonal"].sup_error


@pytest.mark.parametrize("alpha", [0.2, 0.35])
def test_zero_set_plinear(alpha):
    model = cached_model(f"plinear{alpha}",
                         lambda: mc.PiecewiseLinearDiagonal(alpha, 2))
    check = mc.check_zero_set(model, probes=1000, seed=0)
    assert check.passed
    assert check.grid >= 1000  # probes were actually found
    assert check.sup_error == 0.0


def test_zero_set_vacuous_for_square(independence_model):
    check = mc.check_zero_set(independence_model, probes=500, seed=0)
    assert check.passed
    assert "vacuous" in check.note


def test_zero_set_example_points(plinear02_model):
    # region where delta'(max) = 0
    assert mc.density_at(plinear02_model, (0.05, 0.1)) == 0.0
    # non-maximal coordinate on the slope-2 plateau
    assert mc.density_at(plinear02_model, (0.85, 0.95)) == 0.0


def test_splice_entropy_two_block(two_block_model):
    check = mc.check_splice_entropy(two_block_model, tol=1e-6)
    assert check.passed
    # aggregated J side equals 2 + log 2 directly
    agg = sum(0.5 * (mc.compute_J(mc.rescale(two_block_model.delta, iv))
                     - np.log(0.5))
              for iv in two_block_model.decomposition.intervals)
    assert agg == pytest.approx(2.0 + np.log(2.0), abs=1e-6)


def test_splice_entropy_three_block():
    def factory():
        return mc.SplicedDiagonal([mc.PowerDiagonal(2.0, 2)] * 3,
                                  [0.25, 0.25, 0.5])

    model = cached_model("three_block_t2", factory)
    check = mc.check_splice_entropy(model, tol=1e-6)
    assert check.passed
    want = 2.0 + 0.5 * np.log(4.0) + 0.5 * np.log(2.0)
    assert mc.compute_J(model.delta) == pytest.approx(want, abs=1e-6)


def test_splice_entropy_single_block(independence_model):
    check = mc.check_splice_entropy(independence_model, tol=1e-6)
    assert check.passed and check.sup_error < 1e-9


def test_verify_model_report(two_block_model):
    rep = mc.verify_model(two_block_model, grid_size=51, tol=1e-6)
    assert rep.passed
    d = rep.to_dict()
    assert d["passed"] is True
    assert {c["name"] for c in d["checks"]} == {
        "marginals", "diagonal", "zero_set", "splice_entropy"}
    import json

    json.dumps(d)


def test_tabulated_model_verifies():
    def factory():
        t = np.linspace(0, 1, 21)
        return mc.TabulatedDiagonal(t, t ** 2)

    model = cached_model("tab_sq", factory)
    rep = mc.verify_model(model, grid_size=51, tol=1e-6)
    assert rep.passed
