"""Eigenvalue-resolved Gramians of the companion (controllability canonical) form.

In companion coordinates the decomposition depends only on the
characteristic polynomial ``N``.  With ``x_i = [1, lambda_i, ..., lambda_i^{n-1}]``,
the exchange matrix ``J`` and ``Delta(lambda) = lambda^n N(1/lambda)``:

    Ph_i  = x_i x_i^T J / (N'(lambda_i) Delta(lambda_i))
    Ph_ij = x_i x_j^* / ((1 - lambda_i conj(lambda_j)) N'(lambda_i) conj(N'(lambda_j)))

The symmetrized components are the Hermitian parts of these, and their
total is the symmetric Toeplitz matrix of :func:`toeplitz_coeffs`.
"""

import dataclasses
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
import scipy.linalg

from .companion import (antidiagonal_identity, companion_left_eigvec,
                        companion_right_eigvec, lift_mi, mi_realization)
from .errors import MultipleSpectrumError, SpectralError, ValidationError
from .general import GramianDecomposition, assemble, geometric_factor, horizon_defect
from .spectral import eig_simple, hermitian_part, require_solvable

__all__ = ["CompanionDecomposition", "companion_parts", "companion_sdse_infinite",
           "companion_sdse_finite", "companion_sdse_nonsym", "toeplitz_coeffs",
           "toeplitz_total", "mi_finite_decomposition"]


@dataclass(frozen=True)
class CompanionParts:
    """Eigenvector data of ``A_C`` in the fixed (unnormalized) scaling."""

    eigenvalues: np.ndarray
    x: np.ndarray            # columns x_i
    y: np.ndarray            # columns y_i, last component -1
    dN: np.ndarray           # N'(lambda_i)
    delta: np.ndarray        # lambda_i^n N(1/lambda_i)

    def residue(self, i):
        """``R_i = x_i y_i^T / (-N'(lambda_i))``."""
        return np.outer(self.x[:, i], self.y[:, i]) / (-self.dN[i])


@dataclass(frozen=True)
class CompanionDecomposition:
    """Companion-form decomposition, symmetrized and raw.

    ``sub`` / ``pairs`` hold the symmetrized components at the horizon
    (``None`` = infinite); ``eigenparts`` / ``pair_eigenparts`` the raw
    time-independent parts.  For finite horizons ``initial`` holds
    ``R_i P0 (lambda_i A_C^T)^t`` and ``time_terms`` the raw transient
    ``(R_i P0 - Ph_i)(lambda_i A_C^T)^t``.
    """

    realization: object
    horizon: Optional[int]
    eigenvalues: np.ndarray
    sub: Tuple[np.ndarray, ...]
    pairs: Optional[np.ndarray]
    eigenparts: Tuple[np.ndarray, ...]
    pair_eigenparts: Optional[np.ndarray]
    P0: Optional[np.ndarray] = None
    initial: Tuple[np.ndarray, ...] = ()
    initial_pairs: Optional[np.ndarray] = None
    time_terms: Tuple[np.ndarray, ...] = ()
    toeplitz: Optional[np.ndarray] = None
    blocks: tuple = ()
    total: Optional[np.ndarray] = None
    residual: float = float("nan")
    relative_residual: float = float("nan")
    meta: dict = field(default_factory=dict)


def companion_parts(real, spectrum=None):
    """Eigenvectors and polynomial values at each eigenvalue of ``A_C``.

    The spectrum must be simple and consistent with the realization's
    characteristic polynomial.
    """
    if spectrum is None:
        spectrum = eig_simple(real.A_C)
    if not spectrum.is_simple:
        raise MultipleSpectrumError("companion decomposition needs a simple spectrum; "
                                    "use multi_sdse_companion for repeated eigenvalues")
    n = real.n
    if len(spectrum) != n:
        raise SpectralError(f"spectrum has {len(spectrum)} eigenvalues, realization order is {n}")
    lam = spectrum.eigenvalues
    a = np.abs(real.coefficients)
    for li in lam:
        scale = np.sum(a * np.abs(li) ** np.arange(n + 1))
        if abs(real.poly(li)) > 1e-6 * scale:
            raise SpectralError(f"{li} is not a root of the characteristic polynomial")
    require_solvable(spectrum)
    x = np.column_stack([companion_right_eigvec(li, n) for li in lam]) if n else np.zeros((0, 0))
    y = np.column_stack([companion_left_eigvec(li, real) for li in lam]) if n else np.zeros((0, 0))
    dN = real.dpoly(lam.astype(complex)) if n else np.zeros(0, complex)
    delta = real.delta(lam.astype(complex)) if n else np.zeros(0, complex)
    return CompanionParts(lam, x, y, np.asarray(dN, complex), np.asarray(delta, complex))


def _hermitian_pairs(pairs):
    return 0.5 * (pairs + np.conj(np.swapaxes(pairs, -1, -2)))


def _eigenparts(cp, n):
    J = antidiagonal_identity(n)
    r = len(cp.eigenvalues)
    single = tuple(np.outer(cp.x[:, i], cp.x[:, i]) @ J / (cp.dN[i] * cp.delta[i])
                   for i in range(r))
    pairs = np.zeros((r, r, n, n), dtype=complex)
    for i in range(r):
        for j in range(r):
            mu = cp.eigenvalues[i] * np.conj(cp.eigenvalues[j])
            pairs[i, j] = (np.outer(cp.x[:, i], cp.x[:, j].conj())
                           / ((1.0 - mu) * cp.dN[i] * np.conj(cp.dN[j])))
    return single, pairs


def _finish(d, A_C, Q, P0):
    acc = np.zeros((d.realization.n,) * 2, dtype=complex)
    parts = d.eigenparts if d.horizon is None else d.sub + d.initial
    for M in parts:
        acc += M
    H = hermitian_part(acc)
    total = np.ascontiguousarray(H.real)
    defect, scale = horizon_defect(total, A_C, Q, P0, d.horizon)
    res = float(np.linalg.norm(defect))
    meta = dict(d.meta, imag_defect=float(np.linalg.norm(H.imag)))
    return dataclasses.replace(d, total=total, residual=res,
                               relative_residual=res / scale if scale > 0 else 0.0, meta=meta)


def companion_sdse_infinite(real, spectrum=None):
    """Decomposition of ``P_C`` solving ``A_C P_C A_C^T - P_C = -e_n e_n^T``."""
    cp = companion_parts(real, spectrum)
    n = real.n
    single, pairs = _eigenparts(cp, n)
    d = CompanionDecomposition(
        realization=real, horizon=None, eigenvalues=cp.eigenvalues,
        sub=tuple(hermitian_part(M) for M in single),
        pairs=_hermitian_pairs(pairs),
        eigenparts=single, pair_eigenparts=pairs,
        toeplitz=toeplitz_coeffs(real, cp))
    return _finish(d, real.A_C, np.outer(real.b_C, real.b_C), None)


def _finite_parts(real, t, spectrum, P0):
    if int(t) != t or t < 0:
        raise ValidationError(f"horizon must be a nonnegative integer, got {t!r}")
    t = int(t)
    cp = companion_parts(real, spectrum)
    n = real.n
    if P0 is not None:
        P0 = np.asarray(P0, dtype=float)
        if P0.shape != (n, n):
            raise ValidationError(f"P0 must be {n}x{n}, got {P0.shape}")
        if np.linalg.norm(P0 - P0.T) > 1e-9 * np.linalg.norm(P0):
            raise ValidationError("P0 is not symmetric")
        P0 = 0.5 * (P0 + P0.T)
    single, pairs = _eigenparts(cp, n)
    lam = cp.eigenvalues
    r = len(lam)
    eye = np.eye(n)
    powers = [np.linalg.matrix_power(li * real.A_C.T, t) for li in lam]
    sub = tuple(hermitian_part(Ph @ (eye - S)) for Ph, S in zip(single, powers))
    mu = np.outer(lam, np.conj(lam))
    pair_t = _hermitian_pairs(geometric_factor(mu, t)[:, :, None, None] * pairs)
    initial, initial_pairs = (), None
    time_terms = tuple(-Ph @ S for Ph, S in zip(single, powers))
    if P0 is not None:
        R = [cp.residue(i) for i in range(r)]
        initial = tuple(Ri @ P0 @ S for Ri, S in zip(R, powers))
        initial_pairs = np.zeros_like(pairs)
        for i in range(r):
            for j in range(r):
                initial_pairs[i, j] = (R[i] @ P0 @ R[j].conj().T
                                       * (lam[i] * np.conj(lam[j])) ** t)
        time_terms = tuple((Ri @ P0 - Ph) @ S for Ri, Ph, S in zip(R, single, powers))
    return CompanionDecomposition(
        realization=real, horizon=t, eigenvalues=lam, sub=sub, pairs=pair_t,
        eigenparts=single, pair_eigenparts=pairs, P0=P0, initial=initial,
        initial_pairs=initial_pairs, time_terms=time_terms)


def companion_sdse_finite(real, t, spectrum=None, P0=None):
    """Decomposition of ``P_C(t)`` for ``P_C(t+1) = A_C P_C(t) A_C^T + e_n e_n^T``.

    ``P0`` is the initial Gramian in companion coordinates.
    """
    d = _finite_parts(real, t, spectrum, P0)
    return _finish(d, real.A_C, np.outer(real.b_C, real.b_C), d.P0)


def companion_sdse_nonsym(real, t, spectrum=None, P0=None):
    """Finite-horizon decomposition assembled without symmetrization.

    ``P_C(t) = sum_i Ph_i + sum_i (R_i P0 - Ph_i)(lambda_i A_C^T)^t``; the
    total is built from this raw form, and ``meta['raw_asymmetry']`` records
    how far the raw sum is from Hermitian.
    """
    d = _finite_parts(real, t, spectrum, P0)
    n = real.n
    raw = np.zeros((n, n), dtype=complex)
    for M in d.eigenparts + d.time_terms:
        raw += M
    asym = float(np.linalg.norm(raw - hermitian_part(raw)))
    total = np.ascontiguousarray(hermitian_part(raw).real)
    defect, scale = horizon_defect(total, real.A_C, np.outer(real.b_C, real.b_C), d.P0, d.horizon)
    res = float(np.linalg.norm(defect))
    return dataclasses.replace(
        d, total=total, residual=res, relative_residual=res / scale if scale > 0 else 0.0,
        meta={"raw_asymmetry": asym, "imag_defect": float(np.linalg.norm(raw.imag))})


def toeplitz_coeffs(real, spectrum=None):
    """First row ``p_1 .. p_n`` of the symmetric Toeplitz infinite Gramian ``P_C``.

    ``p_k = sum_i (lambda_i^{k-1} + lambda_i^{1-k}) / (2 lambda_i N'(lambda_i) N(1/lambda_i))``,
    evaluated as ``(lambda^{n+k-2} + lambda^{n-k}) / (2 N'(lambda) Delta(lambda))``
    so that no negative powers appear.
    """
    cp = spectrum if isinstance(spectrum, CompanionParts) else companion_parts(real, spectrum)
    n = real.n
    p = np.zeros(n, dtype=complex)
    for li, dN, dl in zip(cp.eigenvalues, cp.dN, cp.delta):
        k = np.arange(1, n + 1)
        p += (li ** (n + k - 2) + li ** (n - k)) / (2.0 * dN * dl)
    return np.ascontiguousarray(p.real)


def toeplitz_total(p):
    return scipy.linalg.toeplitz(p)


def mi_finite_decomposition(sys, t=None, spectrum=None, P0=None):
    """Original-coordinate decomposition of a controllable multi-input system.

    Each companion component (computed with zero initial condition) is
    lifted by ``ctrb (H_u . H_u kron I_m) ctrb^*``; the initial-condition
    terms ``{R_i P0 (lambda_i A^T)^t}_H`` use the residues of ``A``.  With
    ``t=None`` the infinite-horizon components are lifted.
    """
    if P0 is not None:
        sys = sys.with_initial(P0)
    real = mi_realization(sys)
    if spectrum is None:
        spectrum = eig_simple(sys.A)
    comp = (companion_sdse_infinite(real, spectrum) if t is None
            else companion_sdse_finite(real, t, spectrum))
    lam = comp.eigenvalues
    r = len(lam)
    n = sys.n
    asym = 0.0
    sub = []
    for M in comp.sub:
        L, a = lift_mi(M, real, with_asymmetry=True)
        sub.append(L)
        asym = max(asym, a)
    pairs = np.zeros((r, r, n, n), dtype=complex)
    for i in range(r):
        for j in range(r):
            pairs[i, j], a = lift_mi(comp.pairs[i, j], real, with_asymmetry=True)
            asym = max(asym, a)
    initial, initial_pairs = (), None
    if sys.P0 is not None and t is not None:
        if spectrum.residues is None:
            raise MultipleSpectrumError("initial-condition terms need residues of A")
        R = spectrum.residues
        P0m = sys.P0
        initial = tuple(hermitian_part(Ri @ P0m @ np.linalg.matrix_power(li * sys.A.T, t))
                        for li, Ri in zip(lam, R))
        initial_pairs = np.zeros((r, r, n, n), dtype=complex)
        for i in range(r):
            for j in range(r):
                initial_pairs[i, j] = hermitian_part(
                    R[i] @ P0m @ R[j].conj().T * (lam[i] * np.conj(lam[j])) ** t)
    d = GramianDecomposition(sys if t is not None else sys.with_initial(None), t, lam,
                             tuple(sub), pairs, initial, initial_pairs,
                             meta={"lift_asymmetry": asym})
    return assemble(d)
