"""Finite-N thermodynamics by exact diagonalization of sector blocks.

Partition functions sum over every total-spin sector of the 2^N qubit space,
weighted by its multiplicity. For temperature-dependent effective models
Z(beta) = Tr exp(-beta H(beta)).
"""
import collections
import datetime
import numpy as np
import tensorflow as tf
from scipy import linalg
from scipy import special
from . import algebra
from . import hamiltonians
from .utils import echo

# boson cutoff ladder.
CUTOFF_STEP = 10
MIN_CUTOFF = 20
MAX_CUTOFF = 400

# entropies above -ENTROPY_CLIP are roundoff and reported as 0.
ENTROPY_CLIP = 1e-10

Spectrum = collections.namedtuple("Spectrum", ["eigenvalues", "eigenvectors"], defaults=[None])
Spectrum.__doc__ = """Ascending eigenvalues and (optionally) matching orthonormal eigenvector columns."""

ThermoPoint = collections.namedtuple(
    "ThermoPoint",
    [
        "beta",
        "free_energy_per_atom",
        "internal_energy_per_atom",
        "entropy_per_atom",
        "jx2_per_atom2",
        "jz_per_atom",
        "photon_density",
        "cutoff_used",
    ],
)
ThermoPoint.__doc__ = """Finite-N thermodynamic outputs at one (model, beta) point.

photon_density and cutoff_used are None for effective models.
"""


def eigensolve(h, want_vectors=False, use_tensorflow=False):
    """Full spectral decomposition of a real symmetric matrix.

    Parameters
    ----------
    h: np.ndarray
        real symmetric matrix with at least one row.
    want_vectors: bool, optional
        also return eigenvectors.
        default is False.
    use_tensorflow: bool, optional
        if True, use tensorflow for the decomposition.
        Recommended only for machines with GPUs.
        default is False.

    Returns
    -------
    spectrum: Spectrum
        ascending eigenvalues and, if want_vectors, eigenvectors as columns.
    """
    h = np.asarray(h, dtype=np.float64)
    if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] < 1:
        raise ValueError(f"eigensolve needs a non-empty square matrix, got shape {h.shape}.")
    if not np.all(np.isfinite(h)):
        raise ValueError("eigensolve got a matrix with non-finite entries.")
    if use_tensorflow:
        h_tensor = tf.convert_to_tensor(h, dtype=tf.float64)
        if want_vectors:
            evals, evecs = tf.linalg.eigh(h_tensor)
            return Spectrum(eigenvalues=evals.numpy(), eigenvectors=evecs.numpy())
        return Spectrum(eigenvalues=tf.linalg.eigvalsh(h_tensor).numpy())
    if want_vectors:
        evals, evecs = linalg.eigh(h)
        return Spectrum(eigenvalues=evals, eigenvectors=evecs)
    return Spectrum(eigenvalues=linalg.eigh(h, eigvals_only=True))


def log_partition(spectrum, beta):
    """ln sum_k exp(-beta e_k) with the lowest level factored out."""
    hamiltonians._check_beta(beta)
    evals = np.asarray(spectrum.eigenvalues, dtype=np.float64)
    if evals.size == 0:
        raise ValueError("cannot form a partition function from an empty spectrum.")
    return float(special.logsumexp(-beta * evals))


def gibbs_weights(spectrum, beta):
    """Normalized Boltzmann weights of each level."""
    hamiltonians._check_beta(beta)
    return special.softmax(-beta * np.asarray(spectrum.eigenvalues, dtype=np.float64))


def gibbs_expectation(spectrum, observable, beta):
    """Thermal expectation value sum_k w_k <v_k|O|v_k>.

    Parameters
    ----------
    spectrum: Spectrum
        spectrum with eigenvectors.
    observable: np.ndarray
        real symmetric observable in the same basis as the Hamiltonian.
    beta: float
        inverse temperature.

    Returns
    -------
    expectation: float
    """
    if spectrum.eigenvectors is None:
        raise ValueError("gibbs_expectation needs a spectrum with eigenvectors.")
    observable = np.asarray(observable, dtype=np.float64)
    evecs = spectrum.eigenvectors
    if observable.shape != (evecs.shape[0], evecs.shape[0]):
        raise ValueError(
            f"observable has shape {observable.shape} but the spectrum lives in dimension {evecs.shape[0]}."
        )
    weights = gibbs_weights(spectrum, beta)
    diagonal = np.einsum("ik,ij,jk->k", evecs, observable, evecs)
    return float(weights @ diagonal)


def _sector_log_terms(params, kind, beta, cutoff=None, use_tensorflow=False):
    sectors = algebra.sector_decomposition(params.n_atoms)
    terms = []
    for sector in sectors:
        block = hamiltonians.sector_block(params, sector, kind, beta, cutoff=cutoff)
        spectrum = eigensolve(block, use_tensorflow=use_tensorflow)
        terms.append(np.log(sector.multiplicity) + log_partition(spectrum, beta))
    return np.asarray(terms)


def model_log_partition(params, kind, beta, cutoff=None, use_tensorflow=False):
    """ln Z of a model summed over all spin sectors with multiplicities.

    Parameters
    ----------
    params: ModelParams
        physical parameters.
    kind: str
        model kind. Dicke requires a cutoff, effective kinds must not get one.
    beta: float
        inverse temperature > 0.
    cutoff: int, optional
        boson cutoff for the Dicke model.
    use_tensorflow: bool, optional
        eigensolver backend, see eigensolve.

    Returns
    -------
    log_z: float
    """
    kind = hamiltonians.canonical_kind(kind)
    hamiltonians._check_beta(beta)
    if kind == hamiltonians.DICKE and cutoff is None:
        raise ValueError("model_log_partition needs a boson cutoff for the Dicke model.")
    if kind != hamiltonians.DICKE and cutoff is not None:
        raise ValueError(f"{kind} has no boson mode; do not pass a cutoff.")
    return float(special.logsumexp(_sector_log_terms(params, kind, beta, cutoff, use_tensorflow)))


def free_energy_per_atom(params, kind, beta, cutoff=None, use_tensorflow=False):
    """f = -ln Z / (beta N)."""
    log_z = model_log_partition(params, kind, beta, cutoff=cutoff, use_tensorflow=use_tensorflow)
    return -log_z / (beta * params.n_atoms)


def free_photon_log_partition(beta, omega=1.0):
    """ln Z of an isolated mode of energy omega, -ln(1 - e^(-beta omega))."""
    hamiltonians._check_beta(beta)
    return -float(np.log(-np.expm1(-beta * omega)))


def spin_free_energy_per_atom(params, beta, cutoff, use_tensorflow=False):
    """Dicke free energy per atom with the isolated cavity removed.

    -(ln Z_Dicke - ln Z_photon) / (beta N): the free energy of the qubit
    subsystem that the exact effective spin model describes.
    """
    log_z = model_log_partition(params, hamiltonians.DICKE, beta, cutoff=cutoff, use_tensorflow=use_tensorflow)
    log_z -= free_photon_log_partition(beta, params.omega)
    return -log_z / (beta * params.n_atoms)


def initial_cutoff(params, beta):
    """First rung of the cutoff ladder, max(20, ceil(4 lambda^2 N / omega^2) + ceil(10 / beta))."""
    hamiltonians._check_beta(beta)
    displacement = int(np.ceil(4.0 * params.lam ** 2 * params.n_atoms / params.omega ** 2))
    thermal = int(np.ceil(10.0 / beta))
    return max(MIN_CUTOFF, displacement + thermal)


def cutoff_ladder(params, beta, tol=1e-8, max_cutoff=MAX_CUTOFF, step=CUTOFF_STEP, use_tensorflow=False, verbose=False):
    """Walk the Dicke cutoff schedule until the free energy stops changing.

    Parameters
    ----------
    params: ModelParams
        physical parameters.
    beta: float
        inverse temperature.
    tol: float, optional
        stop once consecutive rungs differ by less than tol in f.
        default is 1e-8.
    max_cutoff: int, optional
        hard cap on the cutoff.
        default is 400.
    step: int, optional
        ladder spacing.
        default is 10.

    Returns
    -------
    ladder: list of (int, float)
        (cutoff, f) for every rung evaluated. The last two rungs differ by
        less than tol.
    """
    if not tol > 0:
        raise ValueError(f"tol must be > 0, got {tol}.")
    cutoff = initial_cutoff(params, beta)
    if cutoff > max_cutoff:
        raise RuntimeError(
            f"initial boson cutoff {cutoff} already exceeds the cap {max_cutoff} "
            f"(lambda={params.lam}, N={params.n_atoms}, beta={beta})."
        )
    ladder = [(cutoff, free_energy_per_atom(params, hamiltonians.DICKE, beta, cutoff, use_tensorflow))]
    while True:
        cutoff += step
        if cutoff > max_cutoff:
            raise RuntimeError(
                f"boson cutoff ladder did not converge to tol={tol} below the cap {max_cutoff} "
                f"(lambda={params.lam}, N={params.n_atoms}, beta={beta}, "
                f"last change {abs(ladder[-1][1] - ladder[-2][1]) if len(ladder) > 1 else float('nan'):.2e})."
            )
        ladder.append((cutoff, free_energy_per_atom(params, hamiltonians.DICKE, beta, cutoff, use_tensorflow)))
        delta = abs(ladder[-1][1] - ladder[-2][1])
        echo(f"{datetime.datetime.now()} cutoff {ladder[-2][0]} -> {cutoff}: |df| = {delta:.2e}", verbose=verbose)
        if delta < tol:
            return ladder


def adaptive_cutoff(params, beta, tol=1e-8, max_cutoff=MAX_CUTOFF, use_tensorflow=False, verbose=False):
    """Smallest ladder cutoff M with |f(M) - f(M + 10)| < tol."""
    ladder = cutoff_ladder(params, beta, tol=tol, max_cutoff=max_cutoff, use_tensorflow=use_tensorflow, verbose=verbose)
    return ladder[-2][0]


def thermo_point(params, kind, beta, tol=1e-8, cutoff=None, max_cutoff=MAX_CUTOFF, use_tensorflow=False, verbose=False):
    """All finite-N thermodynamic outputs at one (model, beta) point.

    Parameters
    ----------
    params: ModelParams
        physical parameters.
    kind: str
        model kind.
    beta: float
        inverse temperature > 0.
    tol: float, optional
        free energy tolerance of the adaptive Dicke cutoff.
        default is 1e-8.
    cutoff: int, optional
        fixed Dicke cutoff; skips the adaptive search.
        default is None.
    max_cutoff: int, optional
        hard cap of the adaptive search.
        default is 400.

    Returns
    -------
    point: ThermoPoint
    """
    kind = hamiltonians.canonical_kind(kind)
    hamiltonians._check_beta(beta)
    is_dicke = kind == hamiltonians.DICKE
    if is_dicke and cutoff is None:
        cutoff = adaptive_cutoff(
            params, beta, tol=tol, max_cutoff=max_cutoff, use_tensorflow=use_tensorflow, verbose=verbose
        )
    if not is_dicke:
        cutoff = None
    n_atoms = params.n_atoms
    log_terms = []
    sector_means = []
    for sector in algebra.sector_decomposition(n_atoms):
        block = hamiltonians.sector_block(params, sector, kind, beta, cutoff=cutoff)
        spectrum = eigensolve(block, want_vectors=True, use_tensorflow=use_tensorflow)
        log_terms.append(np.log(sector.multiplicity) + log_partition(spectrum, beta))
        means = {"energy": float(gibbs_weights(spectrum, beta) @ spectrum.eigenvalues)}
        for name, observable in hamiltonians.sector_observables(sector, kind, cutoff=cutoff).items():
            means[name] = gibbs_expectation(spectrum, observable, beta)
        sector_means.append(means)
    log_terms = np.asarray(log_terms)
    log_z = float(special.logsumexp(log_terms))
    sector_probs = np.exp(log_terms - log_z)

    def average(name):
        return float(sum(p * means[name] for p, means in zip(sector_probs, sector_means)))

    free_energy = -log_z / (beta * n_atoms)
    internal_energy = average("energy") / n_atoms
    entropy = beta * (internal_energy - free_energy)
    if -ENTROPY_CLIP < entropy < 0.0:
        entropy = 0.0
    return ThermoPoint(
        beta=float(beta),
        free_energy_per_atom=free_energy,
        internal_energy_per_atom=internal_energy,
        entropy_per_atom=entropy,
        jx2_per_atom2=average("jx2") / n_atoms ** 2,
        jz_per_atom=average("jz") / n_atoms,
        photon_density=average("photons") / n_atoms if is_dicke else None,
        cutoff_used=int(cutoff) if is_dicke else None,
    )


def ground_energy_per_atom(params, kind, beta=1.0, cutoff=None, use_tensorflow=False):
    """Lowest eigenvalue over all sectors divided by N.

    beta only fixes c(beta) of temperature-dependent effective models.
    """
    kind = hamiltonians.canonical_kind(kind)
    if kind == hamiltonians.DICKE and cutoff is None:
        raise ValueError("ground_energy_per_atom needs a boson cutoff for the Dicke model.")
    lowest = np.inf
    for sector in algebra.sector_decomposition(params.n_atoms):
        block = hamiltonians.sector_block(params, sector, kind, beta, cutoff=cutoff)
        lowest = min(lowest, eigensolve(block, use_tensorflow=use_tensorflow).eigenvalues[0])
    return float(lowest) / params.n_atoms
