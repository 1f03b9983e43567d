"""Eigenvalue-resolved inverse of the companion-form Gramian.

With ``y_j`` the left eigenvectors of ``A_C`` (last component -1) the
inverse of the infinite Gramian is a sum of rank-one eigenparts

    Pinv_j  = Delta(lambda_j) / N'(lambda_j) * J y_j y_j^T,
    Pinv_ij = conj(Delta_i) Delta_j / (conj(N'_i) N'_j)
              * conj(y_i) y_j^T / (1 - conj(lambda_i) lambda_j),

which are biorthogonal to the forward eigenparts:
``Ph_i @ Pinv_j = delta_ij R_i``.  For a finite horizon the sum is
premultiplied by the normalization matrix ``G(t)``.
"""

import warnings
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
import scipy.linalg

from .companion import antidiagonal_identity
from .companion_sdse import (_eigenparts, companion_parts, companion_sdse_finite)
from .errors import (ConditioningWarning, HorizonError, IllConditionedError,
                     SpectralError, ValidationError)
from .spectral import Spectrum, hermitian_part

__all__ = ["InverseDecomposition", "inverse_sdse_infinite", "inverse_sdse_finite",
           "orthogonality_check", "OrthogonalityReport"]

EPS = np.finfo(float).eps
COND_WARN = 1.0 / np.sqrt(EPS)
COND_ERROR = 1.0 / EPS


@dataclass(frozen=True)
class InverseDecomposition:
    """Eigenparts of ``P_C^{-1}`` (infinite) or ``P_C(t)^{-1}`` (finite).

    ``eigenparts[j]`` is the rank-one ``Pinv_j``, ``sub[j]`` its Hermitian
    part; ``pair_eigenparts`` / ``pairs`` likewise for pairs.  For a finite
    horizon ``G`` is the normalization matrix and ``total = G @ sum_j Pinv_j``
    is kept unsymmetrized; ``total_symmetric`` is its Hermitian part.
    """

    realization: object
    horizon: Optional[int]
    eigenvalues: np.ndarray
    eigenparts: Tuple[np.ndarray, ...]
    sub: Tuple[np.ndarray, ...]
    pair_eigenparts: Optional[np.ndarray]
    pairs: Optional[np.ndarray]
    total: np.ndarray
    total_symmetric: np.ndarray
    forward_condition: float
    G: Optional[np.ndarray] = None
    blocks: tuple = ()
    meta: dict = field(default_factory=dict)


def _condition(M):
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0:
        return 1.0
    return float(s[0] / s[-1]) if s[-1] > 0 else float("inf")


def _gate(cond, what, cond_warn, cond_error, exc=IllConditionedError):
    if not cond < cond_error:
        if exc is IllConditionedError:
            raise IllConditionedError(f"{what} is numerically singular (condition {cond:.3g})",
                                      condition=cond)
        raise exc(f"{what} is numerically singular (condition {cond:.3g})")
    if cond > cond_warn:
        warnings.warn(f"{what} is ill-conditioned (condition {cond:.3g})",
                      ConditioningWarning, stacklevel=3)


def _inverse_parts(cp, n):
    J = antidiagonal_identity(n)
    lam = cp.eigenvalues
    r = len(lam)
    single = tuple(cp.delta[j] / cp.dN[j] * J @ np.outer(cp.y[:, j], cp.y[:, j])
                   for j in range(r))
    pairs = np.zeros((r, r, n, n), dtype=complex)
    for i in range(r):
        for j in range(r):
            scale = (np.conj(cp.delta[i]) * cp.delta[j]
                     / (np.conj(cp.dN[i]) * cp.dN[j] * (1.0 - np.conj(lam[i]) * lam[j])))
            pairs[i, j] = scale * np.outer(cp.y[:, i].conj(), cp.y[:, j])
    return single, pairs


def _real(M):
    return np.ascontiguousarray(np.real(M))


def inverse_sdse_infinite(real, spectrum=None, cond_warn=COND_WARN, cond_error=COND_ERROR):
    """Decomposition of ``P_C^{-1}`` for the infinite companion Gramian.

    The condition number of ``P_C`` (assembled from the forward eigenparts)
    is reported; above ``cond_warn`` a warning is issued, above
    ``cond_error`` :class:`IllConditionedError` is raised.
    """
    cp = companion_parts(real, spectrum)
    n = real.n
    fwd, _ = _eigenparts(cp, n)
    P_C = _real(hermitian_part(sum(fwd, np.zeros((n, n), complex))))
    cond = _condition(P_C)
    _gate(cond, "infinite companion Gramian P_C", cond_warn, cond_error)
    single, pairs = _inverse_parts(cp, n)
    raw = sum(single, np.zeros((n, n), complex))
    sym = hermitian_part(raw)
    return InverseDecomposition(
        realization=real, horizon=None, eigenvalues=cp.eigenvalues,
        eigenparts=single, sub=tuple(hermitian_part(M) for M in single),
        pair_eigenparts=pairs, pairs=0.5 * (pairs + np.conj(np.swapaxes(pairs, -1, -2))),
        total=_real(sym), total_symmetric=_real(sym), forward_condition=cond,
        meta={"raw_asymmetry": float(np.linalg.norm(raw - sym)),
              "imag_defect": float(np.linalg.norm(sym.imag))})


@dataclass(frozen=True)
class OrthogonalityReport:
    """Defects ``||Ph_i Pinv_j - delta_ij R_i||_F`` for every pair."""

    defects: np.ndarray
    max_defect: float
    residue_scale: float

    @property
    def relative(self):
        return self.max_defect / self.residue_scale if self.residue_scale > 0 else self.max_defect


def orthogonality_check(fwd, inv, residues=None):
    """Check biorthogonality of forward and inverse eigenparts.

    ``residues`` defaults to ``R_i = x_i y_i^T / (-N'(lambda_i))`` computed
    from the forward realization; for the repeated-eigenvalue case pass the
    block projectors ``M_i M_i^{(-1)}``.
    """
    lf, li = np.asarray(fwd.eigenvalues), np.asarray(inv.eigenvalues)
    if lf.shape != li.shape or not np.allclose(lf, li, rtol=1e-12, atol=1e-12):
        raise SpectralError("forward and inverse decompositions use different spectra")
    if residues is None:
        cp = companion_parts(fwd.realization, Spectrum(lf, (1,) * len(lf)))
        residues = [cp.residue(i) for i in range(len(lf))]
    r = len(lf)
    defects = np.zeros((r, r))
    for i in range(r):
        for j in range(r):
            target = residues[i] if i == j else 0.0
            defects[i, j] = np.linalg.norm(fwd.eigenparts[i] @ inv.eigenparts[j] - target)
    scale = max((float(np.linalg.norm(R)) for R in residues), default=0.0)
    return OrthogonalityReport(defects, float(defects.max(initial=0.0)), scale)


def inverse_sdse_finite(real, t, spectrum=None, P0=None,
                        cond_warn=COND_WARN, cond_error=COND_ERROR):
    """Decomposition of ``P_C(t)^{-1}`` with the normalization matrix ``G(t)``.

    ``G(t)^{-1} = I - J (A_C^T)^t J (A_C^T)^t + sum_i Pinv_i P0 (lambda_i A_C^T)^t``
    is LU-factorized and inverted.  With ``P0 = 0`` the finite Gramian is
    singular for ``t < n``; that case (and any numerically singular
    ``G(t)^{-1}``) raises :class:`HorizonError`.
    """
    if int(t) != t or t < 0:
        raise ValidationError(f"horizon must be a nonnegative integer, got {t!r}")
    t = int(t)
    cp = companion_parts(real, spectrum)
    n = real.n
    P0m = np.zeros((n, n)) if P0 is None else np.asarray(P0, dtype=float)
    fwd_t = companion_sdse_finite(real, t, Spectrum(cp.eigenvalues, (1,) * len(cp.eigenvalues)),
                                  None if P0 is None else P0m)
    cond = _condition(fwd_t.total)
    _gate(cond, f"finite companion Gramian P_C({t})", cond_warn, cond_error, HorizonError)

    single, pairs = _inverse_parts(cp, n)
    J = antidiagonal_identity(n)
    At = np.linalg.matrix_power(real.A_C.T, t)
    Ginv = np.eye(n) - J @ At @ J @ At
    for Pj, lj in zip(single, cp.eigenvalues):
        Ginv = Ginv + Pj @ P0m @ (lj ** t * At)
    gcond = _condition(Ginv)
    _gate(gcond, f"normalization matrix G({t})^(-1)", cond_warn, cond_error, HorizonError)
    lu = scipy.linalg.lu_factor(Ginv)
    G = scipy.linalg.lu_solve(lu, np.eye(n, dtype=Ginv.dtype))
    raw = G @ sum(single, np.zeros((n, n), complex))
    sym = hermitian_part(raw)
    return InverseDecomposition(
        realization=real, horizon=t, eigenvalues=cp.eigenvalues,
        eigenparts=single, sub=tuple(hermitian_part(M) for M in single),
        pair_eigenparts=pairs, pairs=0.5 * (pairs + np.conj(np.swapaxes(pairs, -1, -2))),
        total=_real(raw), total_symmetric=_real(sym), forward_condition=cond, G=G,
        meta={"raw_asymmetry": float(np.linalg.norm(raw - sym)),
              "imag_defect": float(np.linalg.norm(raw.imag)),
              "G_condition": gcond})
