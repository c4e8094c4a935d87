"""Collective spin and truncated boson operators.

All operators are dense real symmetric float64 arrays. Product bases put the
boson (Fock) index outermost and the spin projection m, ascending from -J to
+J, innermost.
"""
import collections
import numpy as np
from scipy import special

# largest atom number whose sector multiplicities we compute.
MAX_ATOMS = 20

SpinSector = collections.namedtuple("SpinSector", ["two_j", "multiplicity"])
SpinSector.__doc__ = """Total-spin block of the N-qubit space.

two_j: int
    twice the total spin J, so the block has dimension two_j + 1.
multiplicity: int
    number of copies of the block in the 2^N dimensional space.
"""


def symmetrized(matrix):
    """Return (matrix + matrix.T) / 2 as a float64 array.

    Makes entries[i][j] == entries[j][i] hold bit for bit.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {matrix.shape}.")
    return 0.5 * (matrix + matrix.T)


def _check_nonnegative(value, name):
    if int(value) != value or value < 0:
        raise ValueError(f"{name} must be a nonnegative integer, got {value}.")
    return int(value)


def spin_projections(two_j):
    """Eigenvalues m = -J, ..., +J of J_z in ascending order."""
    two_j = _check_nonnegative(two_j, "two_j")
    return np.arange(two_j + 1, dtype=np.float64) - two_j / 2.0


def jz_matrix(two_j):
    """J_z in the |J, m> basis with m ascending.

    Parameters
    ----------
    two_j: int
        twice the total spin.

    Returns
    -------
    jz: np.ndarray
        (two_j + 1) x (two_j + 1) diagonal matrix.
    """
    return np.diag(spin_projections(two_j))


def jx_matrix(two_j):
    """J_x = (J_+ + J_-) / 2 in the |J, m> basis with m ascending.

    Parameters
    ----------
    two_j: int
        twice the total spin.

    Returns
    -------
    jx: np.ndarray
        (two_j + 1) x (two_j + 1) symmetric tridiagonal matrix with
        <m+1|J_x|m> = sqrt(J(J+1) - m(m+1)) / 2.
    """
    m_vals = spin_projections(two_j)
    j = two_j / 2.0
    lower = m_vals[:-1]
    # clip roundoff below zero before the square root.
    offdiag = 0.5 * np.sqrt(np.maximum(j * (j + 1.0) - lower * (lower + 1.0), 0.0))
    return symmetrized(np.diag(offdiag, 1) + np.diag(offdiag, -1))


def jx_squared(two_j):
    """J_x^2, symmetric pentadiagonal."""
    jx = jx_matrix(two_j)
    return symmetrized(jx @ jx)


def jx_jz_commutator(two_j):
    """C = J_x J_z - J_z J_x, real antisymmetric and equal to -i J_y."""
    jx = jx_matrix(two_j)
    jz = jz_matrix(two_j)
    return jx @ jz - jz @ jx


def boson_number(cutoff):
    """a^dagger a on Fock states 0..cutoff."""
    cutoff = _check_nonnegative(cutoff, "cutoff")
    return np.diag(np.arange(cutoff + 1, dtype=np.float64))


def boson_x(cutoff):
    """a^dagger + a on Fock states 0..cutoff.

    Parameters
    ----------
    cutoff: int
        maximum occupation retained.

    Returns
    -------
    x: np.ndarray
        (cutoff + 1) x (cutoff + 1) tridiagonal matrix with
        <n+1|(a^dagger + a)|n> = sqrt(n + 1).
    """
    cutoff = _check_nonnegative(cutoff, "cutoff")
    offdiag = np.sqrt(np.arange(1, cutoff + 1, dtype=np.float64))
    return symmetrized(np.diag(offdiag, 1) + np.diag(offdiag, -1))


def kron(a, b):
    """Kronecker product a (outer, slow index) x b (inner, fast index)."""
    return symmetrized(np.kron(symmetrized(a), symmetrized(b)))


def sector_decomposition(n_atoms):
    """Decompose N spin-1/2 particles into total-spin sectors.

    Parameters
    ----------
    n_atoms: int
        number of qubits, 1 <= n_atoms <= MAX_ATOMS.

    Returns
    -------
    sectors: list of SpinSector
        sectors with two_j = N mod 2, N mod 2 + 2, ..., N and
        multiplicity C(N, N/2 - J) - C(N, N/2 - J - 1).
    """
    if int(n_atoms) != n_atoms or n_atoms < 1:
        raise ValueError(f"n_atoms must be a positive integer, got {n_atoms}.")
    if n_atoms > MAX_ATOMS:
        raise ValueError(f"n_atoms={n_atoms} exceeds the supported maximum of {MAX_ATOMS}.")
    n_atoms = int(n_atoms)
    sectors = []
    for two_j in range(n_atoms % 2, n_atoms + 1, 2):
        k = (n_atoms - two_j) // 2
        multiplicity = int(special.comb(n_atoms, k, exact=True)) - int(special.comb(n_atoms, k - 1, exact=True))
        sectors.append(SpinSector(two_j=two_j, multiplicity=multiplicity))
    return sectors


def parity_matrix(sector, cutoff):
    """Excitation parity (-1)^(n + m + J) on the boson x spin product basis.

    Parameters
    ----------
    sector: SpinSector
        spin block; only two_j is used.
    cutoff: int
        boson cutoff.

    Returns
    -------
    parity: np.ndarray
        diagonal matrix of +1 and -1 of dimension (cutoff + 1) * (two_j + 1).
    """
    cutoff = _check_nonnegative(cutoff, "cutoff")
    two_j = _check_nonnegative(sector.two_j, "two_j")
    # m + J runs over 0..two_j in the ascending basis.
    boson_sign = (-1.0) ** np.arange(cutoff + 1)
    spin_sign = (-1.0) ** np.arange(two_j + 1)
    return np.diag(np.kron(boson_sign, spin_sign))
