"""Dicke Hamiltonian and its spin-only effective Hamiltonians.

Every effective model has the form epsilon J_z - (4 lambda^2 / N) c(beta) J_x^2,
with c = 1 for the exact equivalent spin model, c = 1 + 2 / (beta (h + 1)) for
the Reslen et al. Hamiltonian and c = (beta / 2) coth(beta / 2) for the
Liberti-Zaffino replacement terms. Temperature-dependent Hamiltonians are
frozen at the same beta used in the Boltzmann weight.
"""
import collections
import numpy as np
from . import algebra

DICKE = "Dicke"
EXACT = "ExactEffective"
RESLEN = "ReslenEffective"
LIBERTI_ZAFFINO = "LibertiZaffino"

MODEL_KINDS = (DICKE, EXACT, RESLEN, LIBERTI_ZAFFINO)
EFFECTIVE_KINDS = (EXACT, RESLEN, LIBERTI_ZAFFINO)

KIND_ALIASES = {
    "dicke": DICKE,
    "exact": EXACT,
    "exacteffective": EXACT,
    "reslen": RESLEN,
    "resleneffective": RESLEN,
    "lz": LIBERTI_ZAFFINO,
    "libertizaffino": LIBERTI_ZAFFINO,
}

ModelParams = collections.namedtuple("ModelParams", ["epsilon", "lam", "n_atoms", "omega"], defaults=[1.0])
ModelParams.__doc__ = """Physical parameters of the Dicke model.

epsilon: float
    qubit level splitting (> 0).
lam: float
    atom-photon coupling lambda (>= 0).
n_atoms: int
    number of atoms N (>= 1).
omega: float
    photon energy (> 0), default 1. Only the Dicke Hamiltonian uses it.
"""


def model_params(epsilon, lam, n_atoms, omega=1.0):
    """Validated ModelParams."""
    if not epsilon > 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}.")
    if not lam >= 0:
        raise ValueError(f"lambda must be >= 0, got {lam}.")
    if not omega > 0:
        raise ValueError(f"omega must be > 0, got {omega}.")
    if int(n_atoms) != n_atoms or n_atoms < 1:
        raise ValueError(f"n_atoms must be a positive integer, got {n_atoms}.")
    return ModelParams(epsilon=float(epsilon), lam=float(lam), n_atoms=int(n_atoms), omega=float(omega))


def canonical_kind(kind):
    """Map a model kind or one of its aliases to its canonical name."""
    if kind in MODEL_KINDS:
        return kind
    key = str(kind).replace("_", "").replace("-", "").lower()
    if key in KIND_ALIASES:
        return KIND_ALIASES[key]
    raise ValueError(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}.")


def _check_beta(beta):
    if not np.all(np.asarray(beta) > 0):
        raise ValueError(f"beta must be > 0, got {beta}.")


def bose_factor(beta):
    """h(beta) = 1 / (e^beta - 1), photon number of an isolated unit-energy mode."""
    _check_beta(beta)
    with np.errstate(over="ignore"):
        return 1.0 / np.expm1(beta)


def _c_exact(beta):
    return np.ones_like(np.asarray(beta, dtype=np.float64))[()]


def _c_reslen(beta):
    # 2 / (beta (h + 1)) = 2 (1 - e^-beta) / beta
    return 1.0 - 2.0 * np.expm1(-beta) / beta


def _c_liberti_zaffino(beta):
    # (beta / 2) coth(beta / 2) = x + 2x / expm1(2x) with x = beta / 2
    x = 0.5 * np.asarray(beta, dtype=np.float64)
    with np.errstate(over="ignore"):
        return (x + 2.0 * x / np.expm1(2.0 * x))[()]


COUPLING_COEFFICIENTS = {
    EXACT: _c_exact,
    RESLEN: _c_reslen,
    LIBERTI_ZAFFINO: _c_liberti_zaffino,
}


def coupling_coefficient(kind, beta):
    """Temperature-dependent factor c(beta) multiplying (2 lambda / sqrt(N))^2 J_x^2.

    Parameters
    ----------
    kind: str
        effective model kind (not Dicke).
    beta: float or array-like
        inverse temperature(s) > 0.

    Returns
    -------
    c: float or np.ndarray
        1 for ExactEffective, 1 + 2 (1 - e^-beta) / beta for ReslenEffective,
        (beta / 2) coth(beta / 2) for LibertiZaffino.
    """
    kind = canonical_kind(kind)
    if kind == DICKE:
        raise ValueError("Dicke is not an effective model and has no coupling coefficient.")
    _check_beta(beta)
    return COUPLING_COEFFICIENTS[kind](np.asarray(beta, dtype=np.float64)[()])


def effective_coupling(kind, beta, lam):
    """gamma(beta) = 4 lambda^2 c(beta), the exchange strength of the J_x^2 term."""
    return 4.0 * lam ** 2 * coupling_coefficient(kind, beta)


def lz_validity_window(beta, epsilon, lam, margin=0.1):
    """Check the claimed validity window of the Liberti-Zaffino Hamiltonian.

    The window is beta^3 lambda^2 < 1 and beta epsilon << 1, the latter made
    concrete as beta epsilon <= margin.

    Returns
    -------
    cubic_ok: bool
    splitting_ok: bool
    """
    _check_beta(beta)
    return bool(beta ** 3 * lam ** 2 < 1.0), bool(beta * epsilon <= margin)


def effective_spin_block(params, sector, kind, beta):
    """Effective spin Hamiltonian restricted to one total-spin sector.

    Parameters
    ----------
    params: ModelParams
        model parameters; omega is not used.
    sector: SpinSector
        spin block to build.
    kind: str
        effective model kind.
    beta: float
        inverse temperature at which c(beta) is frozen.

    Returns
    -------
    block: np.ndarray
        epsilon J_z - (4 lambda^2 / N) c(beta) J_x^2, dimension two_j + 1.
    """
    coefficient = coupling_coefficient(kind, beta)
    gamma = 4.0 * params.lam ** 2 * coefficient / params.n_atoms
    block = params.epsilon * algebra.jz_matrix(sector.two_j)
    if gamma != 0.0:
        block = block - gamma * algebra.jx_squared(sector.two_j)
    return algebra.symmetrized(block)


def dicke_block(params, sector, cutoff):
    """Dicke Hamiltonian restricted to one total-spin sector and truncated boson space.

    omega a^dagger a + epsilon J_z - (2 lambda / sqrt(N)) (a^dagger + a) J_x
    on the (cutoff + 1)(two_j + 1) product basis, boson index outermost.
    """
    if int(cutoff) != cutoff or cutoff < 0:
        raise ValueError(f"cutoff must be a nonnegative integer, got {cutoff}.")
    spin_id = np.eye(sector.two_j + 1)
    boson_id = np.eye(int(cutoff) + 1)
    block = params.omega * algebra.kron(algebra.boson_number(cutoff), spin_id)
    block += params.epsilon * algebra.kron(boson_id, algebra.jz_matrix(sector.two_j))
    if params.lam != 0.0:
        coupling = 2.0 * params.lam / np.sqrt(params.n_atoms)
        block -= coupling * algebra.kron(algebra.boson_x(cutoff), algebra.jx_matrix(sector.two_j))
    return algebra.symmetrized(block)


def sector_block(params, sector, kind, beta, cutoff=None):
    """Dispatch to dicke_block or effective_spin_block."""
    kind = canonical_kind(kind)
    if kind == DICKE:
        if cutoff is None:
            raise ValueError("the Dicke model needs a boson cutoff.")
        return dicke_block(params, sector, cutoff)
    return effective_spin_block(params, sector, kind, beta)


def sector_observables(sector, kind, cutoff=None):
    """Observables J_x^2, J_z and (Dicke only) a^dagger a on a sector block's basis.

    Returns
    -------
    observables: dict
        keys "jx2", "jz" and, for Dicke, "photons".
    """
    kind = canonical_kind(kind)
    jx2 = algebra.jx_squared(sector.two_j)
    jz = algebra.jz_matrix(sector.two_j)
    if kind != DICKE:
        return {"jx2": jx2, "jz": jz}
    boson_id = np.eye(int(cutoff) + 1)
    return {
        "jx2": algebra.kron(boson_id, jx2),
        "jz": algebra.kron(boson_id, jz),
        "photons": algebra.kron(algebra.boson_number(cutoff), np.eye(sector.two_j + 1)),
    }
