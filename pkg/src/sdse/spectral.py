"""Dense complex linear-algebra foundations.

Hermitian parts, characteristic polynomials, simple-spectrum eigenstructure
with matrix residues of the resolvent, eigenvalue clustering and the
partial-fraction coefficients of the resolvent for repeated eigenvalues.
"""

import warnings
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
import scipy.linalg
from numpy.polynomial import Polynomial

from .errors import (CapacityError, ConditioningWarning, DimensionError,
                     MultipleSpectrumError, SolvabilityError, SpectralError,
                     ValidationError)

__all__ = [
    "SIZE_CAP", "SOLVABILITY_TOL", "CONDITIONING_MARGIN",
    "hermitian_part", "char_poly", "poly_derivative", "reversed_poly",
    "default_cluster_tol", "eigen_order", "Spectrum", "eig_simple",
    "cluster_spectrum", "declared_spectrum", "solvability_margin",
    "require_solvable", "PartialFractionSet", "partial_fractions",
    "resolvent_sum",
]

SIZE_CAP = 64
SOLVABILITY_TOL = 1e-10
# pairs with |1 - lambda_i conj(lambda_j)| below this still compute, with a warning
CONDITIONING_MARGIN = 1e-6


def _square(M, name="matrix"):
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {M.shape}")
    return M


def hermitian_part(M):
    """Return ``(M + M^*) / 2``.

    Real input gives the symmetric part, complex input the Hermitian part.
    """
    M = _square(M)
    return 0.5 * (M + M.conj().T)


def char_poly(A, cap=SIZE_CAP):
    """Characteristic polynomial ``det(sI - A)`` by the Faddeev-LeVerrier recurrence.

    Parameters
    ----------
    A : (n, n) array_like
    cap : int
        Largest admissible n.  The recurrence loses accuracy quickly for
        large n, so oversize input is refused rather than answered badly.

    Returns
    -------
    numpy.polynomial.Polynomial
        Monic polynomial, coefficients ``a_0 .. a_n`` in ascending degree.
    """
    A = _square(np.asarray(A, dtype=float), "A")
    n = A.shape[0]
    if n > cap:
        raise CapacityError(f"char_poly: n = {n} exceeds the size cap {cap}")
    coef = np.zeros(n + 1, dtype=A.dtype)
    coef[n] = 1.0
    M = np.zeros_like(A)
    eye = np.eye(n, dtype=A.dtype)
    for k in range(1, n + 1):
        M = A @ M + coef[n - k + 1] * eye
        coef[n - k] = -np.trace(A @ M) / k
    return Polynomial(coef)


def poly_derivative(p, k=1):
    """k-th formal derivative; ``k = 0`` returns ``p`` itself."""
    if k < 0:
        raise ValidationError("derivative order must be nonnegative")
    p = p if isinstance(p, Polynomial) else Polynomial(p)
    return p if k == 0 else p.deriv(k)


def reversed_poly(p):
    """``lambda^n p(1/lambda)`` as a polynomial, i.e. the coefficient-reversed ``p``."""
    p = p if isinstance(p, Polynomial) else Polynomial(p)
    return Polynomial(p.coef[::-1])


def default_cluster_tol(A):
    norm = np.linalg.norm(A) if np.size(A) else 0.0
    return 1e-7 * max(1.0, norm)


def eigen_order(values):
    """Indices sorting eigenvalues by descending modulus, real part, imaginary part.

    Keys are rounded to 12 decimals so that conjugate pairs and
    rounding-level ties order deterministically.
    """
    values = np.asarray(values, dtype=complex)
    keys = [(-round(abs(v), 12), -round(v.real, 12), -round(v.imag, 12)) for v in values]
    return sorted(range(len(values)), key=keys.__getitem__)


def solvability_margin(eigenvalues):
    """Smallest ``|1 - lambda_i conj(lambda_j)|`` and the pair attaining it."""
    lam = np.asarray(eigenvalues, dtype=complex)
    if lam.size == 0:
        return np.inf, None
    gap = np.abs(1.0 - np.outer(lam, lam.conj()))
    i, j = np.unravel_index(np.argmin(gap), gap.shape)
    return float(gap[i, j]), (int(i), int(j))


@dataclass(frozen=True)
class Spectrum:
    """Distinct eigenvalues with multiplicities and, when simple, eigenvectors.

    ``right[:, i]`` is x_i, ``left[i]`` is y_i (so ``left @ right = I``) and
    ``residues[i] = outer(x_i, y_i)`` is the residue of ``(sI - A)^{-1}`` at
    lambda_i.  Vectors are only present for spectra produced by
    :func:`eig_simple`.
    """

    eigenvalues: np.ndarray
    multiplicities: Tuple[int, ...]
    right: Optional[np.ndarray] = None
    left: Optional[np.ndarray] = None
    residues: Optional[Tuple[np.ndarray, ...]] = None
    solvability_tol: float = SOLVABILITY_TOL
    margin: float = field(init=False)
    worst_pair: Optional[Tuple[int, int]] = field(init=False)

    def __post_init__(self):
        lam = np.array(self.eigenvalues, dtype=complex).reshape(-1)
        mult = tuple(int(k) for k in self.multiplicities)
        if len(mult) != lam.size or any(k < 1 for k in mult):
            raise ValidationError("one positive multiplicity per eigenvalue is required")
        lam.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "multiplicities", mult)
        margin, pair = solvability_margin(lam)
        object.__setattr__(self, "margin", margin)
        object.__setattr__(self, "worst_pair", pair)

    @property
    def n(self):
        return sum(self.multiplicities)

    @property
    def is_simple(self):
        return all(k == 1 for k in self.multiplicities)

    @property
    def solvable(self):
        return self.margin >= self.solvability_tol

    def __len__(self):
        return len(self.multiplicities)


def require_solvable(spectrum, tol=None):
    """Raise :class:`SolvabilityError` if some ``lambda_i conj(lambda_j)`` is ~1.

    Pairs above the hard gate but below ``CONDITIONING_MARGIN`` trigger a
    :class:`ConditioningWarning` naming the worst pair.
    """
    tol = spectrum.solvability_tol if tol is None else tol
    margin, pair = spectrum.margin, spectrum.worst_pair
    if pair is None:
        return
    li, lj = spectrum.eigenvalues[pair[0]], spectrum.eigenvalues[pair[1]]
    desc = (f"pair (lambda_{pair[0] + 1}, lambda_{pair[1] + 1}) = ({_fmt(li)}, {_fmt(lj)}): "
            f"|1 - lambda_i conj(lambda_j)| = {margin:.3g}")
    if margin < tol:
        raise SolvabilityError("Stein operator is singular for " + desc, pair=pair, magnitude=margin)
    if margin < CONDITIONING_MARGIN:
        warnings.warn("nearly singular Stein operator, " + desc, ConditioningWarning, stacklevel=3)


def _fmt(z):
    z = complex(z)
    return f"{z.real:.6g}" if z.imag == 0 else f"{z.real:.6g}{z.imag:+.6g}j"


def eig_simple(A, cluster_tol=None, solvability_tol=SOLVABILITY_TOL):
    """Eigen-decomposition of a simple-spectrum matrix, with its resolvent residues.

    Left eigenvectors are the rows of ``X^{-1}`` for the right-eigenvector
    matrix ``X``, so ``y_i^T x_j = delta_ij`` and the residues sum to I.

    Raises
    ------
    MultipleSpectrumError
        Two eigenvalues lie closer than ``cluster_tol``; use
        :func:`cluster_spectrum` and the multiplicity routines instead.
    """
    A = _square(np.asarray(A, dtype=float), "A")
    n = A.shape[0]
    if cluster_tol is None:
        cluster_tol = default_cluster_tol(A)
    if n == 0:
        return Spectrum(np.zeros(0, complex), (), np.zeros((0, 0), complex),
                        np.zeros((0, 0), complex), (), solvability_tol)
    vals, X = scipy.linalg.eig(A)
    order = eigen_order(vals)
    vals, X = vals[order], X[:, order]
    if n > 1:
        dist = np.abs(vals[:, None] - vals[None, :]) + np.diag(np.full(n, np.inf))
        i, j = np.unravel_index(np.argmin(dist), dist.shape)
        if dist[i, j] < cluster_tol:
            raise MultipleSpectrumError(
                f"eigenvalues {_fmt(vals[i])} and {_fmt(vals[j])} coincide within "
                f"{cluster_tol:.3g}; cluster the spectrum and use the multiplicity routines")
    Y = np.linalg.inv(X)
    residues = tuple(np.outer(X[:, k], Y[k]) for k in range(n))
    return Spectrum(vals, (1,) * n, X, Y, residues, solvability_tol)


def cluster_spectrum(eigenvalues, cluster_tol, solvability_tol=SOLVABILITY_TOL):
    """Greedy absolute-distance clustering of eigenvalues.

    Each value joins the first cluster whose current mean lies within
    ``cluster_tol``; otherwise it opens a new cluster.  Representatives are
    cluster means, multiplicities are cluster sizes.
    """
    if not cluster_tol > 0:
        raise ValidationError("cluster_tol must be positive")
    clusters = []
    for v in np.asarray(eigenvalues, dtype=complex).reshape(-1):
        for members in clusters:
            if abs(v - np.mean(members)) <= cluster_tol:
                members.append(v)
                break
        else:
            clusters.append([v])
    reps = np.array([np.mean(c) for c in clusters], dtype=complex)
    mult = [len(c) for c in clusters]
    order = eigen_order(reps)
    return Spectrum(reps[order], tuple(mult[k] for k in order), solvability_tol=solvability_tol)


def declared_spectrum(values, multiplicities, solvability_tol=SOLVABILITY_TOL):
    """Spectrum from user-declared eigenvalues, sorted into canonical order."""
    vals = np.asarray(values, dtype=complex).reshape(-1)
    mult = list(multiplicities)
    order = eigen_order(vals)
    return Spectrum(vals[order], tuple(mult[k] for k in order), solvability_tol=solvability_tol)


@dataclass(frozen=True)
class PartialFractionSet:
    """Coefficients of ``(sI - A)^{-1} = sum_i sum_k coefficients[i][k-1] / (s - lambda_i)^k``."""

    eigenvalues: np.ndarray
    multiplicities: Tuple[int, ...]
    coefficients: Tuple[Tuple[np.ndarray, ...], ...]

    @property
    def n(self):
        return sum(self.multiplicities)


def partial_fractions(A, spectrum, null_tol=None):
    """Partial-fraction coefficients of the resolvent of ``A``.

    For a simple spectrum carrying residues these are returned directly.
    Otherwise each generalized eigenspace ``ker (A - lambda_i I)^{n_i}`` is
    computed by SVD, giving the spectral projector ``E_i``; then
    ``coef_k = (A - lambda_i I)^{k-1} E_i``, which equals the sum of
    Jordan-chain outer products ``sum_l x_l y_{k-1+l}^T`` for any choice of
    chains.

    Raises
    ------
    SpectralError
        Multiplicities do not add up to n, or some declared eigenvalue and
        multiplicity do not match a generalized eigenspace of ``A``.
    """
    A = _square(np.asarray(A, dtype=float), "A")
    n = A.shape[0]
    if spectrum.n != n:
        raise SpectralError(f"multiplicities sum to {spectrum.n}, matrix order is {n}")
    lam = spectrum.eigenvalues
    if spectrum.is_simple and spectrum.residues is not None:
        return PartialFractionSet(lam, spectrum.multiplicities,
                                  tuple((R,) for R in spectrum.residues))
    if null_tol is None:
        null_tol = np.sqrt(np.finfo(float).eps)
    eye = np.eye(n)
    bases = []
    for li, ni in zip(lam, spectrum.multiplicities):
        K = np.linalg.matrix_power(A - li * eye, ni)
        _, s, Vh = np.linalg.svd(K)
        scale = max(1.0, s[0])
        if s[n - ni] > null_tol * scale or (ni < n and s[n - ni - 1] <= null_tol * scale):
            raise SpectralError(
                f"eigenvalue {_fmt(li)} with multiplicity {ni} does not match a "
                f"generalized eigenspace of A (singular values {s[max(0, n - ni - 1):]})")
        bases.append(Vh[n - ni:].conj().T)
    V = np.hstack(bases)
    if np.linalg.cond(V) > 1.0 / null_tol:
        raise SpectralError("generalized eigenspaces are numerically dependent")
    W = np.linalg.inv(V)
    coefficients = []
    start = 0
    for li, ni, Vi in zip(lam, spectrum.multiplicities, bases):
        E = Vi @ W[start:start + ni]
        start += ni
        N = A - li * eye
        chain = [E]
        for _ in range(1, ni):
            chain.append(N @ chain[-1])
        coefficients.append(tuple(chain))
    return PartialFractionSet(lam, spectrum.multiplicities, tuple(coefficients))


def resolvent_sum(pf, s):
    """Evaluate the partial-fraction expansion at the point ``s``."""
    n = pf.n
    out = np.zeros((n, n), dtype=complex)
    for li, chain in zip(pf.eigenvalues, pf.coefficients):
        for k, Ak in enumerate(chain, start=1):
            out += Ak / (s - li) ** k
    return out

