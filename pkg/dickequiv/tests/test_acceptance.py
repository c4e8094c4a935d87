"""Finite-size equivalence of the Dicke model and its effective spin models at epsilon = lambda = omega = 1."""
from .. import hamiltonians
from .. import mean_field
from .. import thermodynamics
import pytest
import numpy as np

pytestmark = pytest.mark.slow

ATOMS = (4, 8, 12)
BETAS = (0.3, 1.0, 3.0)
TOL = 1e-8


@pytest.fixture(scope="module")
def dicke_points():
    """(beta, N) -> (converged cutoff, f_Dicke, f_spin, f_Exact)."""
    points = {}
    for beta in BETAS:
        for n_atoms in ATOMS:
            params = hamiltonians.model_params(1.0, 1.0, n_atoms)
            cutoff, f_dicke = thermodynamics.cutoff_ladder(params, beta, tol=TOL)[-2]
            f_spin = f_dicke + thermodynamics.free_photon_log_partition(beta) / (beta * n_atoms)
            f_exact = thermodynamics.free_energy_per_atom(params, "ExactEffective", beta)
            points[(beta, n_atoms)] = (cutoff, f_dicke, f_spin, f_exact)
    return points


@pytest.mark.parametrize("beta", BETAS)
def test_dicke_converges_to_exact_effective(dicke_points, beta):
    delta = [abs(dicke_points[(beta, n)][1] - dicke_points[(beta, n)][3]) for n in ATOMS]
    assert delta[0] > delta[1] > delta[2]
    assert delta[2] < delta[0] / 2.0


@pytest.mark.parametrize(
    "kind, beta",
    [("ReslenEffective", 0.3), ("ReslenEffective", 1.0), ("LibertiZaffino", 1.0)],
)
def test_temperature_dependent_models_miss_dicke(dicke_points, kind, beta):
    params = hamiltonians.model_params(1.0, 1.0, 12)
    _, f_dicke, f_spin, f_exact = dicke_points[(beta, 12)]
    discrepancy = abs(thermodynamics.free_energy_per_atom(params, kind, beta) - f_exact)
    assert discrepancy > 3.0 * abs(f_spin - f_exact)
    assert np.isfinite(abs(f_dicke - f_exact))


def test_liberti_zaffino_high_temperature_gap(dicke_points):
    # c_LZ(0.3) - 1 is below 1e-2, so only the ordering against Reslen is asserted here.
    params = hamiltonians.model_params(1.0, 1.0, 12)
    f_exact = dicke_points[(0.3, 12)][3]
    d_lz = abs(thermodynamics.free_energy_per_atom(params, "LibertiZaffino", 0.3) - f_exact)
    d_reslen = abs(thermodynamics.free_energy_per_atom(params, "ReslenEffective", 0.3) - f_exact)
    assert 0.0 < d_lz < d_reslen


def test_coefficient_limits_order_discrepancies():
    params = hamiltonians.model_params(1.0, 1.0, 8)
    hot, cold = 1e-3, 50.0
    d = {}
    for beta in (hot, cold):
        f_exact = thermodynamics.free_energy_per_atom(params, "ExactEffective", beta)
        for kind in ("ReslenEffective", "LibertiZaffino"):
            d[(kind, beta)] = abs(thermodynamics.free_energy_per_atom(params, kind, beta) - f_exact)
    assert d[("LibertiZaffino", hot)] < d[("ReslenEffective", hot)]
    assert d[("ReslenEffective", cold)] < d[("LibertiZaffino", cold)]


def test_critical_temperatures():
    t_c = {
        kind: mean_field.critical_temperature(mean_field.critical_beta(kind, 1.0, 1.0))
        for kind in hamiltonians.EFFECTIVE_KINDS
    }
    assert abs(t_c["ExactEffective"] - 1.9576117) < 1e-6
    assert t_c["ReslenEffective"] > t_c["ExactEffective"]
    assert t_c["LibertiZaffino"] > t_c["ExactEffective"]
    assert mean_field.critical_beta("ExactEffective", 1.0, 0.3).beta_c is None
    assert mean_field.critical_beta("LibertiZaffino", 1.0, 0.3).beta_c is not None


def test_mean_field_limit_oracle(dicke_points):
    limit = mean_field.limit_free_energy("ExactEffective", 1.0, 1.0, 1.0).free_energy
    assert abs(limit - dicke_points[(1.0, 12)][3]) < abs(limit - dicke_points[(1.0, 4)][3])


@pytest.mark.parametrize("beta", BETAS)
@pytest.mark.parametrize("n_atoms", ATOMS)
def test_cutoff_robustness(dicke_points, beta, n_atoms):
    cutoff, f_dicke, _, _ = dicke_points[(beta, n_atoms)]
    params = hamiltonians.model_params(1.0, 1.0, n_atoms)
    assert abs(thermodynamics.free_energy_per_atom(params, "Dicke", beta, cutoff=cutoff + 20) - f_dicke) < 1e-7
