"""Thermodynamic limit of the infinitely coordinated spin models.

Decoupling -(gamma / N) J_x^2 with a transverse magnetization m gives the free
energy per atom

    f(m) = gamma m^2 / 4 - (1 / beta) ln[2 cosh((beta / 2) sqrt(eps^2 + gamma^2 m^2))],

exact as N -> infinity. gamma = 4 lambda^2 c(beta), with c the coupling
coefficient of the chosen effective model.
"""
import collections
import numpy as np
from scipy import optimize
from . import hamiltonians

# order parameter pre-scan and refinement.
N_SCAN = 401
M_TOL = 1e-10
ORDER_THRESHOLD = 1e-13

# gap equation bracket and sign scan.
BETA_LO = 1e-6
BETA_HI = 1e6
N_BETA_SCAN = 1201
MAX_BISECTIONS = 400

LimitPoint = collections.namedtuple("LimitPoint", ["beta", "order_parameter", "free_energy"])
LimitPoint.__doc__ = """Thermodynamic-limit order parameter m* in [0, 1] and free energy per atom."""

GapSolution = collections.namedtuple(
    "GapSolution",
    ["kind", "beta_c", "bracket_width", "residual", "out_of_range", "beta_c_upper"],
    defaults=[None],
)
GapSolution.__doc__ = """Critical inverse temperature from the gap equation.

beta_c is None when no transition is found in [BETA_LO, BETA_HI]; then
residual is NaN and out_of_range flags transitions known to lie outside the
bracket. beta_c_upper is the re-entrant root where the gap function turns
negative again at lower temperature (disorder returns), or None.
"""


def _log_2cosh(x):
    return np.logaddexp(x, -x)


def mf_free_energy(m, beta, epsilon, gamma):
    """Mean-field free energy per atom f(m).

    Parameters
    ----------
    m: float or np.ndarray
        transverse magnetization per spin.
    beta: float
        inverse temperature > 0.
    epsilon: float
        qubit splitting.
    gamma: float
        exchange strength 4 lambda^2 c(beta) >= 0.

    Returns
    -------
    f: float or np.ndarray
    """
    hamiltonians._check_beta(beta)
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}.")
    m = np.asarray(m, dtype=np.float64)
    field = np.sqrt(epsilon ** 2 + (gamma * m) ** 2)
    return (gamma * m ** 2 / 4.0 - _log_2cosh(0.5 * beta * field) / beta)[()]


def minimize_mf(beta, epsilon, gamma, m_max=1.0):
    """Global minimum of f(m) over m in [0, m_max].

    A uniform pre-scan locates the basin, golden-section search refines it.
    m* = 0 exactly unless an interior point beats f(0) by more than 1e-13.

    Returns
    -------
    point: LimitPoint
    """
    grid = np.linspace(0.0, m_max, N_SCAN)
    values = mf_free_energy(grid, beta, epsilon, gamma)
    f_zero = float(values[0])
    best = int(np.argmin(values))
    if best == 0:
        return LimitPoint(beta=float(beta), order_parameter=0.0, free_energy=f_zero)

    def objective(m):
        return float(mf_free_energy(m, beta, epsilon, gamma))

    upper = min(best + 1, N_SCAN - 1)
    try:
        result = optimize.minimize_scalar(
            objective,
            bracket=(grid[best - 1], grid[best], grid[upper]),
            method="golden",
            options={"xtol": M_TOL},
        )
    except ValueError:
        # ties on the scan grid (or the m_max edge) do not form a strict bracket.
        result = optimize.minimize_scalar(
            objective, bounds=(grid[best - 1], grid[upper]), method="bounded", options={"xatol": M_TOL}
        )
    m_star = float(np.clip(result.x, 0.0, m_max))
    f_star = objective(m_star)
    if f_star > float(values[best]):
        m_star, f_star = float(grid[best]), float(values[best])
    if f_star >= f_zero - ORDER_THRESHOLD:
        return LimitPoint(beta=float(beta), order_parameter=0.0, free_energy=f_zero)
    return LimitPoint(beta=float(beta), order_parameter=m_star, free_energy=f_star)


def limit_free_energy(kind, beta, epsilon, lam):
    """Thermodynamic-limit free energy of an effective model.

    For ExactEffective this is also the Dicke model's limit free energy per atom.
    """
    kind = hamiltonians.canonical_kind(kind)
    if kind == hamiltonians.DICKE:
        raise ValueError("use ExactEffective for the thermodynamic limit of the Dicke model.")
    gamma = float(hamiltonians.effective_coupling(kind, beta, lam))
    return minimize_mf(beta, epsilon, gamma)


def order_parameter_curve(kind, betas, epsilon, lam):
    """limit_free_energy along a beta grid."""
    return [limit_free_energy(kind, beta, epsilon, lam) for beta in betas]


def gap_function(kind, beta, epsilon, lam):
    """g(beta) = tanh(beta epsilon / 2) - epsilon / (4 lambda^2 c(beta)); zero at beta_c."""
    gamma = hamiltonians.effective_coupling(kind, beta, lam)
    return np.tanh(0.5 * beta * epsilon) - epsilon / gamma


def critical_beta(kind, epsilon, lam):
    """Solve the gap equation for the critical inverse temperature.

    The sign of g is scanned on a logarithmic grid over [1e-6, 1e6]; the first
    sign change (highest critical temperature) is refined by bisection. If g
    later turns negative again, that root is refined into beta_c_upper.

    Parameters
    ----------
    kind: str
        effective model kind.
    epsilon: float
        qubit splitting > 0.
    lam: float
        coupling >= 0. lam = 0 never orders.

    Returns
    -------
    solution: GapSolution
    """
    kind = hamiltonians.canonical_kind(kind)
    if kind == hamiltonians.DICKE:
        raise ValueError("critical_beta needs an effective model kind, not Dicke.")
    if not epsilon > 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}.")
    if lam < 0:
        raise ValueError(f"lambda must be >= 0, got {lam}.")
    if lam == 0:
        return GapSolution(kind=kind, beta_c=None, bracket_width=np.inf, residual=np.nan, out_of_range=False)
    betas = np.geomspace(BETA_LO, BETA_HI, N_BETA_SCAN)
    g = gap_function(kind, betas, epsilon, lam)
    if g[0] >= 0:
        # ordered already at the highest temperature scanned.
        return GapSolution(kind=kind, beta_c=None, bracket_width=np.inf, residual=np.nan, out_of_range=True)
    positive = np.nonzero(g >= 0)[0]
    if positive.size == 0:
        # c_LZ grows like beta / 2, so a transition always exists beyond BETA_HI.
        return GapSolution(
            kind=kind,
            beta_c=None,
            bracket_width=np.inf,
            residual=np.nan,
            out_of_range=kind == hamiltonians.LIBERTI_ZAFFINO,
        )
    first = positive[0]
    beta_c, bracket_width, residual = _bisect(kind, epsilon, lam, float(betas[first - 1]), float(betas[first]))
    beta_c_upper = None
    # Reslen's c(beta) can fall back below the gap bound as T -> 0.
    negative = np.nonzero(g[first:] < 0)[0]
    if negative.size > 0:
        last = first + negative[0]
        beta_c_upper = _bisect(kind, epsilon, lam, float(betas[last - 1]), float(betas[last]))[0]
    return GapSolution(
        kind=kind,
        beta_c=beta_c,
        bracket_width=bracket_width,
        residual=residual,
        out_of_range=False,
        beta_c_upper=beta_c_upper,
    )


def _bisect(kind, epsilon, lam, lo, hi):
    """Refine a sign change of g on [lo, hi] to the end point with the smaller |g|."""
    rising = gap_function(kind, lo, epsilon, lam) < 0
    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if (gap_function(kind, mid, epsilon, lam) < 0) == rising:
            lo = mid
        else:
            hi = mid
    g_lo = abs(float(gap_function(kind, lo, epsilon, lam)))
    g_hi = abs(float(gap_function(kind, hi, epsilon, lam)))
    if g_lo <= g_hi:
        return lo, hi - lo, g_lo
    return hi, hi - lo, g_hi


def critical_temperature(solution):
    """1 / beta_c, or None when there is no transition."""
    if solution.beta_c is None:
        return None
    return 1.0 / solution.beta_c
