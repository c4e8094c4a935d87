from .. import hamiltonians
from .. import mean_field
from .. import thermodynamics
import pytest
import numpy as np

EXACT_BETA_C = np.log(5.0 / 3.0)  # epsilon = lambda = 1


def test_mf_free_energy_examples():
    assert np.isclose(mean_field.mf_free_energy(0.0, 1.0, 1.0, 4.0), -0.8132616, atol=1e-7)
    field = 0.5 * np.sqrt(5.0)
    expected = 0.25 - np.log(2.0 * np.cosh(field))
    assert np.isclose(mean_field.mf_free_energy(0.5, 1.0, 1.0, 4.0), expected, atol=1e-12)
    grid = np.linspace(0.0, 1.0, 6)
    values = mean_field.mf_free_energy(grid, 2.0, 1.0, 3.0)
    assert np.array_equal(values, mean_field.mf_free_energy(-grid, 2.0, 1.0, 3.0))
    # large beta stays finite.
    assert np.isfinite(mean_field.mf_free_energy(1.0, 1e6, 1.0, 4.0))


def test_mf_free_energy_errors():
    with pytest.raises(ValueError):
        mean_field.mf_free_energy(0.1, 0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        mean_field.mf_free_energy(0.1, 1.0, 1.0, -1.0)


def test_minimize_mf_ordered():
    point = mean_field.minimize_mf(1.0, 1.0, 4.0)
    assert 0.9 < point.order_parameter < 0.95
    field = np.sqrt(1.0 + (4.0 * point.order_parameter) ** 2)
    # stationarity: gamma tanh(beta field / 2) / field = 1.
    assert abs(4.0 * np.tanh(0.5 * field) / field - 1.0) < 1e-6
    assert point.free_energy < mean_field.mf_free_energy(0.0, 1.0, 1.0, 4.0)


def test_minimize_mf_disordered():
    point = mean_field.minimize_mf(1.0, 1.0, 0.0)
    assert point.order_parameter == 0.0
    assert np.isclose(point.free_energy, -0.8132616, atol=1e-7)
    point = mean_field.minimize_mf(0.1, 1.0, 4.0)
    assert point.order_parameter == 0.0


def test_limit_free_energy_free_spins():
    for kind in hamiltonians.EFFECTIVE_KINDS:
        point = mean_field.limit_free_energy(kind, 2.0, 1.0, 0.0)
        assert point.order_parameter == 0.0
        assert np.isclose(point.free_energy, -np.log(2.0 * np.cosh(1.0)) / 2.0)
    with pytest.raises(ValueError):
        mean_field.limit_free_energy("Dicke", 1.0, 1.0, 1.0)


def test_exact_critical_temperature():
    solution = mean_field.critical_beta("ExactEffective", 1.0, 1.0)
    assert solution.kind == "ExactEffective"
    assert abs(solution.beta_c - 0.5108256) < 1e-7
    assert abs(mean_field.critical_temperature(solution) - 1.9576117) < 1e-6
    assert abs(solution.beta_c - EXACT_BETA_C) < 1e-10
    assert solution.bracket_width <= 1e-12 * solution.beta_c
    assert solution.residual < 1e-10
    assert not solution.out_of_range


def test_no_transition():
    for kind in ["ExactEffective", "ReslenEffective"]:
        solution = mean_field.critical_beta(kind, 1.0, 0.4)
        assert solution.beta_c is None
        assert mean_field.critical_temperature(solution) is None
        assert not solution.out_of_range
    solution = mean_field.critical_beta("lz", 1.0, 0.0)
    assert solution.beta_c is None
    assert not solution.out_of_range


def test_liberti_zaffino_always_orders():
    solution = mean_field.critical_beta("LibertiZaffino", 1.0, 0.3)
    assert solution.beta_c is not None
    assert 5.0 < solution.beta_c < 6.0
    assert mean_field.critical_beta("LibertiZaffino", 1.0, 0.4).beta_c is not None


def test_ordered_across_whole_scan():
    solution = mean_field.critical_beta("ExactEffective", 1.0, 1e4)
    assert solution.beta_c is None
    assert solution.out_of_range


def test_critical_beta_errors():
    with pytest.raises(ValueError):
        mean_field.critical_beta("Dicke", 1.0, 1.0)
    with pytest.raises(ValueError):
        mean_field.critical_beta("ExactEffective", 0.0, 1.0)
    with pytest.raises(ValueError):
        mean_field.critical_beta("ExactEffective", 1.0, -1.0)


def test_critical_temperature_ordering():
    beta_c = {kind: mean_field.critical_beta(kind, 1.0, 1.0).beta_c for kind in hamiltonians.EFFECTIVE_KINDS}
    assert beta_c["ReslenEffective"] < beta_c["LibertiZaffino"] < beta_c["ExactEffective"]


@pytest.mark.parametrize("kind", hamiltonians.EFFECTIVE_KINDS)
@pytest.mark.parametrize("lam", [0.7, 1.0, 2.0])
def test_gap_equation_matches_minimizer(kind, lam):
    solution = mean_field.critical_beta(kind, 1.0, lam)
    assert solution.beta_c is not None
    assert abs(mean_field.gap_function(kind, solution.beta_c, 1.0, lam)) < 1e-9
    hot = mean_field.limit_free_energy(kind, 0.8 * solution.beta_c, 1.0, lam)
    cold = mean_field.limit_free_energy(kind, 1.25 * solution.beta_c, 1.0, lam)
    assert hot.order_parameter == 0.0
    assert cold.order_parameter > 0.0


@pytest.mark.parametrize("beta", [0.2, 0.5, 1.0, 2.0, 5.0])
@pytest.mark.parametrize("gamma", [0.5, 1.0, 2.0, 4.0])
def test_gap_sign_matches_minimizer_grid(beta, gamma):
    ordered = mean_field.minimize_mf(beta, 1.0, gamma).order_parameter > 0
    lam = np.sqrt(gamma / 4.0)
    assert ordered == (mean_field.gap_function("ExactEffective", beta, 1.0, lam) > 0)


def test_free_energy_continuous_at_transition():
    # the ordered branch must continue the disordered one linearly across beta_c.
    delta = 5e-5 * EXACT_BETA_C

    def f(beta):
        return mean_field.limit_free_energy("ExactEffective", beta, 1.0, 1.0).free_energy

    f_far, f_near = f(EXACT_BETA_C - 2 * delta), f(EXACT_BETA_C - delta)
    extrapolated = f_near + 2.0 * (f_near - f_far)
    assert abs(f(EXACT_BETA_C + delta) - extrapolated) < 1e-6
    assert mean_field.limit_free_energy("ExactEffective", EXACT_BETA_C + delta, 1.0, 1.0).order_parameter < 0.05


def test_reslen_reentrant_transition():
    solution = mean_field.critical_beta("ReslenEffective", 1.0, 0.45)
    assert 1.0 < solution.beta_c < 1.5
    assert 8.0 < solution.beta_c_upper < 9.0
    for beta in (solution.beta_c, solution.beta_c_upper):
        assert abs(mean_field.gap_function("ReslenEffective", beta, 1.0, 0.45)) < 1e-9
    assert mean_field.limit_free_energy("ReslenEffective", 4.0, 1.0, 0.45).order_parameter > 0.0
    assert mean_field.limit_free_energy("ReslenEffective", 20.0, 1.0, 0.45).order_parameter == 0.0
    assert mean_field.limit_free_energy("ReslenEffective", 0.5, 1.0, 0.45).order_parameter == 0.0
    for kind in hamiltonians.EFFECTIVE_KINDS:
        assert mean_field.critical_beta(kind, 1.0, 1.0).beta_c_upper is None


def test_order_parameter_curve():
    betas = np.geomspace(0.1, 10.0, 15)
    curve = mean_field.order_parameter_curve("ExactEffective", betas, 1.0, 1.0)
    assert [p.beta for p in curve] == list(betas)
    m = np.asarray([p.order_parameter for p in curve])
    assert np.all(np.diff(m) >= -1e-8)
    assert m[0] == 0.0
    assert m[-1] > 0.9


@pytest.mark.parametrize("beta", [0.3, 1.0, 3.0])
def test_finite_size_approaches_limit(beta):
    limit = mean_field.limit_free_energy("ExactEffective", beta, 1.0, 1.0).free_energy
    gaps = []
    for n_atoms in (4, 8, 16):
        params = hamiltonians.model_params(1.0, 1.0, n_atoms)
        gaps.append(abs(thermodynamics.free_energy_per_atom(params, "ExactEffective", beta) - limit))
    assert gaps[0] > gaps[1] > gaps[2]
