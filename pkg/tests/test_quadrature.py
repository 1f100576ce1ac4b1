import numpy as np
import pytest

from maxent_copula.quadrature import (integrate_panels, panel_integrals,
                                      shell_integrate)


def test_panel_integrals_polynomial_exact():
    # GL16 per panel integrates low-degree polynomials to machine precision
    edges = np.linspace(0.0, 2.0, 5)
    vals = panel_integrals(lambda x: 3.0 * x * x, edges)
    expected = np.diff(edges ** 3)
    assert np.allclose(vals, expected, atol=1e-14)


def test_integrate_panels_sine():
    edges = np.linspace(0.0, np.pi, 17)
    assert integrate_panels(np.sin, edges) == pytest.approx(2.0, abs=1e-13)


def test_shell_log_singularity():
    # integral of -log t over (0, 1) is exactly 1
    val, diverged = shell_integrate(lambda t: -np.log(t), 0.0, 1.0)
    assert not diverged
    assert val == pytest.approx(1.0, abs=1e-10)


def test_shell_double_log_singularity():
    # -log(t(1-t)) integrates to 2
    val, diverged = shell_integrate(lambda t: -np.log(t * (1.0 - t)), 0.0, 1.0)
    assert not diverged
    assert val == pytest.approx(2.0, abs=1e-10)


def test_shell_power_singularity():
    val, diverged = shell_integrate(lambda t: 1.0 / np.sqrt(t), 0.0, 1.0)
    assert not diverged
    assert val == pytest.approx(2.0, abs=1e-9)


def test_shell_detects_divergence():
    _, diverged = shell_integrate(lambda t: 1.0 / np.maximum(t, 1e-300), 0.0, 1.0)
    assert diverged


def test_shell_smooth_function():
    val, diverged = shell_integrate(np.cos, 0.0, 1.0)
    assert not diverged
    assert val == pytest.approx(np.sin(1.0), abs=1e-12)


def test_shell_empty_interval():
    val, diverged = shell_integrate(np.cos, 0.3, 0.3)
    assert val == 0.0 and not diverged
