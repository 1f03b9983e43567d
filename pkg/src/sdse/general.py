"""Eigenvalue-resolved Gramians for arbitrary state-space data (simple spectrum).

The infinite Gramian (solution of ``A P A^T - P = -B B^T``) splits as

    P = sum_i Pt_i = sum_ij P_ij,
    Pt_i = {R_i Q (I - lambda_i A^T)^{-1}}_H,
    P_ij = {R_i Q R_j^* / (1 - lambda_i conj(lambda_j))}_H,

with ``R_i`` the residues of the resolvent and ``{.}_H`` the Hermitian part.
The finite-horizon solution ``P(t)`` of ``P(t+1) = A P(t) A^T + Q`` from an
arbitrary ``P(0) = P0`` adds geometric factors and initial-condition terms.
"""

import dataclasses
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .errors import MultipleSpectrumError, ValidationError
from .spectral import eig_simple, hermitian_part, require_solvable
from .system import LtiSystem

__all__ = ["GramianDecomposition", "sdse_infinite", "sdse_finite", "assemble",
           "horizon_defect", "geometric_factor"]


@dataclass(frozen=True)
class GramianDecomposition:
    """Per-eigenvalue and per-pair components of a Gramian.

    ``sub[i]`` is the component attached to ``eigenvalues[i]``,
    ``pairs[i, j]`` the component attached to the pair ``(i, j)``, and
    ``initial`` / ``initial_pairs`` the initial-condition terms (empty /
    ``None`` when no ``P0`` was given).  ``horizon`` is ``None`` for the
    infinite Gramian.  ``total`` and ``residual`` are filled by
    :func:`assemble`.
    """

    system: LtiSystem
    horizon: Optional[int]
    eigenvalues: np.ndarray
    sub: Tuple[np.ndarray, ...]
    pairs: Optional[np.ndarray] = None
    initial: Tuple[np.ndarray, ...] = ()
    initial_pairs: Optional[np.ndarray] = None
    total: Optional[np.ndarray] = None
    residual: float = float("nan")
    relative_residual: float = float("nan")
    meta: dict = field(default_factory=dict)


def geometric_factor(mu, t):
    """``(1 - mu^t) / (1 - mu)``, i.e. ``sum_{k<t} mu^k``."""
    return (1.0 - mu ** t) / (1.0 - mu)


def horizon_defect(P, A, Q, P0=None, horizon=None):
    """Residual of ``P`` as a solution of the Stein equation at the given horizon.

    For ``horizon=None`` this is ``A P A^T - P + Q``.  A finite-horizon
    iterate satisfies ``P(t) - A P(t) A^T = Q - A^t (Q + A P0 A^T - P0) (A^T)^t``,
    which gives a one-step defect that needs no iteration.

    Returns
    -------
    defect : ndarray
    scale : float
        Sum of the Frobenius norms of the terms, for relative measures.
    """
    A = np.asarray(A)
    APA = A @ P @ A.T
    defect = APA - P + Q
    scale = np.linalg.norm(APA) + np.linalg.norm(P) + np.linalg.norm(Q)
    if horizon is not None:
        P0 = np.zeros_like(Q) if P0 is None else P0
        At = np.linalg.matrix_power(A, horizon)
        tail = At @ (Q + A @ P0 @ A.T - P0) @ At.T
        defect = defect - tail
        scale += np.linalg.norm(tail)
    return defect, scale


def _real_total(M):
    M = hermitian_part(M)
    imag = float(np.linalg.norm(M.imag)) if np.iscomplexobj(M) else 0.0
    return np.ascontiguousarray(M.real), imag


def assemble(d):
    """Sum components and initial terms; attach the Stein residual.

    Returns the decomposition with ``total`` (real symmetric), ``residual``
    (Frobenius norm of the defect) and ``relative_residual`` populated; the
    norm of any imaginary part dropped from the sum is kept in
    ``meta['imag_defect']``.
    """
    sys = d.system
    n = sys.n
    acc = np.zeros((n, n), dtype=complex)
    for M in d.sub:
        acc += M
    for M in d.initial:
        acc += M
    total, imag = _real_total(acc)
    P0 = sys.P0 if d.initial else None
    defect, scale = horizon_defect(total, sys.A, sys.Q, P0, d.horizon)
    res = float(np.linalg.norm(defect))
    meta = dict(d.meta, imag_defect=imag)
    return dataclasses.replace(d, total=total, residual=res,
                               relative_residual=res / scale if scale > 0 else 0.0, meta=meta)


def _simple_spectrum(sys, spectrum):
    if spectrum is None:
        spectrum = eig_simple(sys.A)
    if not spectrum.is_simple or spectrum.residues is None:
        raise MultipleSpectrumError(
            "a simple spectrum with residues is required; use the multiplicity "
            "routines (multi_sdse_general) for repeated eigenvalues")
    require_solvable(spectrum)
    return spectrum


def sdse_infinite(sys, spectrum=None):
    """Decomposition of the solution of ``A P A^T - P = -B B^T``.

    ``A`` may be unstable; the result is then the unique solution of the
    algebraic equation rather than a Gramian.
    """
    spectrum = _simple_spectrum(sys, spectrum)
    n = sys.n
    lam = spectrum.eigenvalues
    R = spectrum.residues
    Q = sys.Q
    eye = np.eye(n)
    sub = []
    for li, Ri in zip(lam, R):
        sub.append(hermitian_part(Ri @ Q @ np.linalg.inv(eye - li * sys.A.T)))
    pairs = np.zeros((len(lam), len(lam), n, n), dtype=complex)
    for i, (li, Ri) in enumerate(zip(lam, R)):
        RQ = Ri @ Q
        for j, (lj, Rj) in enumerate(zip(lam, R)):
            pairs[i, j] = hermitian_part(RQ @ Rj.conj().T / (1.0 - li * np.conj(lj)))
    d = GramianDecomposition(LtiSystem(sys.A, sys.B), None, lam, tuple(sub), pairs)
    return assemble(d)


def sdse_finite(sys, t, spectrum=None, P0=None):
    """Decomposition of ``P(t)`` for ``P(t+1) = A P(t) A^T + B B^T``, ``P(0) = P0``.

    ``P0`` defaults to ``sys.P0`` (zero when absent).  The initial-condition
    terms ``R_i P0 (lambda_i A^T)^t`` are kept as printed (not Hermitian);
    their sum ``A^t P0 (A^T)^t`` is symmetric.
    """
    if int(t) != t or t < 0:
        raise ValidationError(f"horizon must be a nonnegative integer, got {t!r}")
    t = int(t)
    if P0 is not None:
        sys = sys.with_initial(P0)
    spectrum = _simple_spectrum(sys, spectrum)
    n = sys.n
    lam = spectrum.eigenvalues
    R = spectrum.residues
    Q = sys.Q
    eye = np.eye(n)
    powers = [np.linalg.matrix_power(li * sys.A.T, t) for li in lam]
    sub = []
    for li, Ri, S in zip(lam, R, powers):
        sub.append(hermitian_part(Ri @ Q @ np.linalg.inv(eye - li * sys.A.T) @ (eye - S)))
    r = len(lam)
    pairs = np.zeros((r, r, n, n), dtype=complex)
    for i in range(r):
        RQ = R[i] @ Q
        for j in range(r):
            mu = lam[i] * np.conj(lam[j])
            pairs[i, j] = hermitian_part(geometric_factor(mu, t) * RQ @ R[j].conj().T)
    initial, initial_pairs = (), None
    if sys.P0 is not None:
        P0m = sys.P0
        initial = tuple(Ri @ P0m @ S for Ri, S in zip(R, powers))
        initial_pairs = np.zeros((r, r, n, n), dtype=complex)
        for i in range(r):
            RP = R[i] @ P0m
            for j in range(r):
                initial_pairs[i, j] = RP @ R[j].conj().T * (lam[i] * np.conj(lam[j])) ** t
    d = GramianDecomposition(sys, t, lam, tuple(sub), pairs, initial, initial_pairs)
    return assemble(d)
