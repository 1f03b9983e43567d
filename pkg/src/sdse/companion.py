"""Controllability canonical (companion) realization and the multi-input lift.

For a single-input controllable pair ``(A, b)`` with characteristic
polynomial ``N(s) = a_0 + a_1 s + ... + s^n`` the similarity
``T = ctrb(A, b) @ H_u`` maps the system onto

    A_C = [[0, 1, 0, ...], ..., [-a_0, -a_1, ..., -a_{n-1}]],  b_C = e_n,

with ``A T = T A_C`` and ``b = T b_C``.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import Polynomial

from .errors import ControllabilityError, DimensionError, ScopeError
from .spectral import char_poly, hermitian_part, reversed_poly
from .system import LtiSystem

__all__ = [
    "RANK_TOL", "antidiagonal_identity", "hankel_upper", "hankel_lower",
    "companion_matrix", "controllability_matrix", "CompanionRealization",
    "canonical_realization", "realization_from_roots", "to_companion",
    "mi_realization", "companion_right_eigvec", "companion_left_eigvec",
    "lift_mi",
]

RANK_TOL = 1e-10


def antidiagonal_identity(n):
    """Exchange matrix: ones on the anti-diagonal."""
    return np.eye(n)[::-1].copy()


def _coeffs(poly):
    """Return ``a_0 .. a_n`` of a monic polynomial as a float array."""
    a = np.asarray(poly.coef if isinstance(poly, Polynomial) else poly, dtype=float)
    if a.size == 0 or a[-1] != 1.0:
        raise ValueError("characteristic polynomial must be monic (a_n = 1)")
    return a


def hankel_upper(poly):
    """Upper anti-triangular Hankel matrix of ``a_1, ..., a_{n-1}, 1``."""
    a = _coeffs(poly)
    n = a.size - 1
    H = np.zeros((n, n))
    for k in range(n):
        for l in range(n - k):
            H[k, l] = a[k + l + 1]
    return H


def hankel_lower(poly):
    """Lower anti-triangular Hankel matrix of ``a_0, ..., a_{n-1}``."""
    a = _coeffs(poly)
    n = a.size - 1
    H = np.zeros((n, n))
    for k in range(n):
        for l in range(n - 1 - k, n):
            H[k, l] = a[k + l - (n - 1)]
    return H


def companion_matrix(poly):
    a = _coeffs(poly)
    n = a.size - 1
    A_C = np.eye(n, k=1)
    if n:
        A_C[-1] = -a[:-1]
    return A_C


def controllability_matrix(A, B=None):
    """``[B, AB, ..., A^{n-1} B]``; accepts an :class:`LtiSystem` or ``(A, B)``."""
    if isinstance(A, LtiSystem):
        A, B = A.A, A.B
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if B.ndim == 1:
        B = B[:, None]
    n = A.shape[0]
    blocks = [B]
    for _ in range(1, n):
        blocks.append(A @ blocks[-1])
    return np.hstack(blocks) if n else np.zeros((0, 0))


@dataclass(frozen=True)
class CompanionRealization:
    """Companion data shared by the canonical-form decompositions.

    ``T`` is only defined for single-input systems; for a multi-input
    realization it is ``None`` and ``ctrb`` has ``n * m`` columns.
    """

    poly: Polynomial
    A_C: np.ndarray
    b_C: np.ndarray
    H_u: np.ndarray
    H_l: np.ndarray
    ctrb: np.ndarray
    T: Optional[np.ndarray] = None
    m: int = 1

    @property
    def n(self):
        return self.A_C.shape[0]

    @property
    def coefficients(self):
        return self.poly.coef

    @property
    def dpoly(self):
        return self.poly.deriv()

    @property
    def delta(self):
        """``Delta(lam) = lam^n N(1/lam) = 1 + a_{n-1} lam + ... + a_0 lam^n``."""
        return reversed_poly(self.poly)


def _build(poly, ctrb, T, m):
    poly = Polynomial(_coeffs(poly))
    n = poly.degree()
    b_C = np.zeros(n)
    if n:
        b_C[-1] = 1.0
    return CompanionRealization(poly, companion_matrix(poly), b_C, hankel_upper(poly),
                                hankel_lower(poly), ctrb, T, m)


def canonical_realization(poly):
    """Realization of the canonical pair ``(A_C, e_n)`` itself (so ``T = I``)."""
    poly = Polynomial(_coeffs(poly))
    A_C = companion_matrix(poly)
    b_C = np.zeros(A_C.shape[0])
    if b_C.size:
        b_C[-1] = 1.0
    ctrb = controllability_matrix(A_C, b_C)
    return _build(poly, ctrb, ctrb @ hankel_upper(poly), 1)


def realization_from_roots(roots):
    """Canonical realization whose characteristic polynomial has the given roots."""
    coef = np.real_if_close(np.poly(np.asarray(roots, dtype=complex))[::-1], tol=1e6)
    if np.iscomplexobj(coef):
        raise ValueError("roots must be closed under conjugation")
    return canonical_realization(coef)


def _check_rank(ctrb, n, rank_tol):
    if n == 0:
        return
    s = np.linalg.svd(ctrb, compute_uv=False)
    rank = int(np.sum(s >= rank_tol * s[0])) if s[0] > 0 else 0
    if rank < n:
        raise ControllabilityError(
            f"(A, B) is not controllable: numeric rank of the controllability "
            f"matrix is {rank} < {n} (sigma_min/sigma_max = {s[-1] / s[0] if s[0] else 0:.3g})",
            rank=rank)


def to_companion(sys, rank_tol=RANK_TOL):
    """Companion realization of a controllable single-input system.

    Raises
    ------
    ScopeError
        More than one input; use :func:`mi_realization` and :func:`lift_mi`.
    ControllabilityError
        ``sigma_min(ctrb) < rank_tol * sigma_max(ctrb)``.
    """
    if sys.m != 1:
        raise ScopeError(f"to_companion needs a single input (m = {sys.m}); "
                         "use mi_realization with lift_mi for multi-input systems")
    ctrb = controllability_matrix(sys.A, sys.B)
    _check_rank(ctrb, sys.n, rank_tol)
    poly = char_poly(sys.A)
    return _build(poly, ctrb, ctrb @ hankel_upper(poly), 1)


def mi_realization(sys, rank_tol=RANK_TOL):
    """Companion data for a controllable multi-input system (no single ``T``)."""
    ctrb = controllability_matrix(sys.A, sys.B)
    _check_rank(ctrb, sys.n, rank_tol)
    poly = char_poly(sys.A)
    T = ctrb @ hankel_upper(poly) if sys.m == 1 else None
    return _build(poly, ctrb, T, sys.m)


def companion_right_eigvec(lam, n):
    """``[1, lam, ..., lam^{n-1}]``."""
    return np.asarray(lam, dtype=complex) ** np.arange(n)


def companion_left_eigvec(lam, real):
    """Left eigenvector of ``A_C`` with last component ``-1``.

    Component k is ``-sum_{j >= k} a_j lam^{j-k}``, which coincides with
    ``lam^{-n} H_l x(lam)`` at every root of the characteristic polynomial
    but needs no division by ``lam^n``.  With this scaling
    ``y^T x = -N'(lam)``.
    """
    a = real.coefficients
    n = real.n
    y = np.zeros(n, dtype=complex)
    acc = 0j
    for k in range(n, 0, -1):
        acc = acc * lam + a[k]
        y[k - 1] = -acc
    return y


def lift_mi(P_C, real, m=None, with_asymmetry=False):
    """Map a companion-form Gramian back to original coordinates.

    Computes ``ctrb (H_u P_C H_u kron I_m) ctrb^*`` and returns its Hermitian
    part.  With ``with_asymmetry=True`` also returns the Frobenius norm of
    the anti-Hermitian part that was discarded.
    """
    m = real.m if m is None else m
    n = real.n
    P_C = np.asarray(P_C)
    if P_C.shape != (n, n):
        raise DimensionError(f"P_C must be {n}x{n}, got {P_C.shape}")
    if real.ctrb.shape != (n, n * m):
        raise DimensionError(f"controllability matrix has shape {real.ctrb.shape}, "
                             f"expected ({n}, {n * m}) for m = {m}")
    core = np.kron(real.H_u @ P_C @ real.H_u, np.eye(m))
    raw = real.ctrb @ core @ real.ctrb.conj().T
    P = hermitian_part(raw)
    if with_asymmetry:
        return P, float(np.linalg.norm(raw - P))
    return P
