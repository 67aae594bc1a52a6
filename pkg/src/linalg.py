"""
linalg.py - Complex-matrix primitives

Generalized Hermitian eigenextraction and orthonormal null-space construction,
both with a fixed phase convention so repeated calls give bit-identical output.

Functions:
    - generalized_principal_eigenvector: top eigenpair of a HermitianPair
    - null_space_basis: orthonormal columns orthogonal to a set of vectors
    - canonical_phase: rotate a vector so its largest entry is real >= 0
    - rayleigh_quotient: (v^H A v) / (v^H B v), vectorized over columns
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from config import CONDITION_RTOL, HERMITIAN_RTOL
from errors import DimensionError, IllConditionedPairError


def _is_hermitian(m, rtol=HERMITIAN_RTOL):
    scale = max(1.0, np.linalg.norm(m))
    return np.linalg.norm(m - m.conj().T) <= rtol * scale


@dataclass(frozen=True, eq=False)
class HermitianPair:
    """
    Numerator/denominator matrices of a generalized Rayleigh quotient.

    Attributes:
        numerator: Nt x Nt Hermitian positive-semidefinite matrix
        denominator: Nt x Nt Hermitian positive-definite matrix
    """
    numerator: np.ndarray
    denominator: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.numerator, dtype=complex)
        b = np.asarray(self.denominator, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
            raise DimensionError(
                f"pair matrices must be square and equal-sized, got {a.shape} and {b.shape}")
        if not _is_hermitian(a):
            raise IllConditionedPairError("numerator is not Hermitian")
        if not _is_hermitian(b):
            raise IllConditionedPairError("denominator is not Hermitian")
        object.__setattr__(self, 'numerator', a)
        object.__setattr__(self, 'denominator', b)

    @property
    def size(self):
        return self.numerator.shape[0]


def canonical_phase(v):
    """
    Rotate v so that its largest-magnitude entry is real and non-negative.

    Ties on magnitude resolve to the lowest index (np.argmax semantics).
    """
    v = np.asarray(v, dtype=complex)
    idx = int(np.argmax(np.abs(v)))
    mag = np.abs(v[idx])
    if mag == 0.0:
        return v.copy()
    out = v * (np.conj(v[idx]) / mag)
    out[idx] = mag
    return out


def rayleigh_quotient(pair, v):
    """
    Generalized Rayleigh quotient (v^H A v) / (v^H B v).

    Args:
        pair: HermitianPair (A, B)
        v: vector of length Nt, or Nt x K matrix of column vectors

    Returns:
        float, or array of K floats
    """
    v = np.asarray(v, dtype=complex)
    num = np.einsum('i...,ij,j...->...', v.conj(), pair.numerator, v).real
    den = np.einsum('i...,ij,j...->...', v.conj(), pair.denominator, v).real
    return num / den


def generalized_principal_eigenvector(pair):
    """
    Principal eigenpair of A v = lambda B v for a Hermitian pair.

    LAPACK reduces the problem with a Cholesky factorization of B and then
    solves a standard Hermitian eigenproblem, so B is never inverted.

    Args:
        pair: HermitianPair (A, B), B positive-definite

    Returns:
        tuple: (v, lam) - unit-norm eigenvector with its largest entry real and
            non-negative, and the maximum generalized eigenvalue

    Raises:
        IllConditionedPairError: smallest eigenvalue of B below 1e-12 * largest
    """
    b_eigs = scipy.linalg.eigvalsh(pair.denominator)
    if b_eigs[-1] <= 0.0 or b_eigs[0] < CONDITION_RTOL * b_eigs[-1]:
        raise IllConditionedPairError(
            f"denominator is numerically singular (eigenvalues {b_eigs[0]:.3e} .. {b_eigs[-1]:.3e})")

    n = pair.size
    try:
        lams, vecs = scipy.linalg.eigh(pair.numerator, pair.denominator,
                                       subset_by_index=[n - 1, n - 1])
    except np.linalg.LinAlgError as exc:
        raise IllConditionedPairError(f"generalized eigensolver failed: {exc}") from exc

    v = vecs[:, 0]
    v = canonical_phase(v / np.linalg.norm(v))
    return v, float(lams[0])


def null_space_basis(rows, target_dim):
    """
    Orthonormal basis of vectors x with r^H x = 0 for every r in rows.

    The stacked conjugated rows are decomposed by SVD and the trailing right
    singular vectors are kept, so rank-deficient row sets simply leave a
    larger null space to choose from. Each column is phase-canonicalized.

    Args:
        rows: iterable of nonzero complex vectors of length Nt
        target_dim: number of columns wanted

    Returns:
        Nt x target_dim complex matrix with orthonormal columns

    Raises:
        DimensionError: target_dim exceeds the null-space dimension, or a row
            is zero / has the wrong length
    """
    rows = [np.asarray(r, dtype=complex).ravel() for r in rows]
    if not rows:
        raise DimensionError("need at least one row vector")
    nt = rows[0].size
    for r in rows:
        if r.size != nt:
            raise DimensionError("row vectors must share one length")
        if not np.any(r):
            raise DimensionError("row vectors must be nonzero")

    stacked = np.vstack([r.conj() for r in rows])
    basis = scipy.linalg.null_space(stacked)
    if target_dim < 0 or target_dim > basis.shape[1]:
        raise DimensionError(
            f"target_dim {target_dim} exceeds null-space dimension {basis.shape[1]}")
    if target_dim == 0:
        return np.zeros((nt, 0), dtype=complex)

    chosen = basis[:, basis.shape[1] - target_dim:]
    return np.column_stack([canonical_phase(chosen[:, k]) for k in range(target_dim)])
