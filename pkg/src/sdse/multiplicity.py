"""Gramian decompositions for dynamics matrices with repeated eigenvalues.

General coordinates use the partial-fraction coefficients ``Ah_k^(i)`` of the
resolvent:

    P(inf) = sum_i sum_k Ah_k^(i) Q (A^T)^{k-1} (I - lambda_i A^T)^{-k}.

In companion coordinates the Jordan chains are closed-form (columns of
binomial coefficients times powers of ``lambda_i``) and each eigenpart
factors through an upper Hankel block of left-chain end components and an
upper-triangular Toeplitz block of Taylor coefficients of ``1 / Delta``.
"""

from dataclasses import dataclass
from math import comb, factorial
from typing import Optional

import numpy as np
import scipy.linalg

from .companion import antidiagonal_identity
from .companion_sdse import CompanionDecomposition
from .errors import (MultipleSpectrumError, ScopeError, SingularityError,
                     SolvabilityError, SpectralError, ValidationError)
from .general import GramianDecomposition, assemble, horizon_defect
from .inverse import InverseDecomposition, _condition
from .spectral import (Spectrum, cluster_spectrum, default_cluster_tol, eig_simple,
                       hermitian_part, partial_fractions, poly_derivative,
                       require_solvable)

__all__ = [
    "JordanChainBlock", "HankelToeplitzPair", "multi_sdse_general",
    "multi_transients", "jordan_chain_companion", "generalized_left_blocks",
    "companion_chains", "taylor_coefficients", "reciprocal_series",
    "hankel_toeplitz_blocks", "multi_sdse_companion",
]


@dataclass(frozen=True)
class JordanChainBlock:
    """Jordan chain ``M`` (n x n_i) for one eigenvalue and its left row block."""

    eigenvalue: complex
    multiplicity: int
    M: np.ndarray
    M_left: Optional[np.ndarray] = None

    @property
    def projector(self):
        """``M_i M_i^{(-1)}``, the spectral projector of the block."""
        return self.M @ self.M_left


@dataclass(frozen=True)
class HankelToeplitzPair:
    toeplitz: np.ndarray
    hankel: np.ndarray


# -- general coordinates ---------------------------------------------------

def _multi_terms(A, Q, pf, t):
    """Stationary and transient parts of each per-eigenvalue component."""
    n = A.shape[0]
    AT = A.T
    eye = np.eye(n)
    ATt = np.linalg.matrix_power(AT, t) if t is not None else None
    stationary, transient = [], []
    for li, chain in zip(pf.eigenvalues, pf.coefficients):
        ni = len(chain)
        F = np.linalg.inv(eye - li * AT)
        # F_j = (1/j!) d^j/dlam^j (I - lam A^T)^{-1} = (A^T)^j F^{j+1}
        Fj = [F]
        for _ in range(1, ni):
            Fj.append(AT @ Fj[-1] @ F)
        stat = np.zeros((n, n), dtype=complex)
        tran = np.zeros((n, n), dtype=complex)
        for k, Ak in enumerate(chain, start=1):
            AQ = Ak @ Q
            stat += AQ @ Fj[k - 1]
            if t is not None:
                # Leibniz: (1/(k-1)!) d^{k-1}[F(lam) (lam A^T)^t] = sum_j F_j S_{k-1-j}
                acc = np.zeros((n, n), dtype=complex)
                for j in range(k):
                    r = k - 1 - j
                    if r <= t:
                        acc += Fj[j] * (comb(t, r) * li ** (t - r))
                tran -= AQ @ acc @ ATt
        stationary.append(stat)
        transient.append(tran)
    return stationary, transient


def _general_pf(sys, pf, spectrum):
    if pf is not None:
        return pf
    if spectrum is None:
        try:
            spectrum = eig_simple(sys.A)
        except MultipleSpectrumError as exc:
            raise MultipleSpectrumError(
                f"{exc}; declare the eigenvalues and multiplicities explicitly") from None
    return partial_fractions(sys.A, spectrum)


def _check_pf_solvable(pf):
    require_solvable(Spectrum(pf.eigenvalues, pf.multiplicities))


def multi_sdse_general(sys, pf=None, t=None, spectrum=None):
    """Per-eigenvalue decomposition of ``P(inf)`` or ``P(t)`` with zero initial condition.

    Components are returned as printed (not Hermitian); only the total is
    symmetrized.  Nonzero ``sys.P0`` is out of scope.
    """
    if sys.P0 is not None and np.any(sys.P0 != 0):
        raise ScopeError("the repeated-eigenvalue decomposition covers zero initial condition only")
    if t is not None and (int(t) != t or t < 0):
        raise ValidationError(f"horizon must be a nonnegative integer, got {t!r}")
    t = None if t is None else int(t)
    pf = _general_pf(sys, pf, spectrum)
    _check_pf_solvable(pf)
    stationary, transient = _multi_terms(sys.A, sys.Q, pf, t)
    sub = stationary if t is None else [s + d for s, d in zip(stationary, transient)]
    d = GramianDecomposition(sys.with_initial(None), t, pf.eigenvalues, tuple(sub),
                             meta={"multiplicities": list(pf.multiplicities)})
    return assemble(d)


def multi_transients(sys, pf, t):
    """Time-dependent parts of the per-eigenvalue components at horizon ``t``.

    Each satisfies ``D_i(t + 1) = A D_i(t) A^T``.
    """
    _, transient = _multi_terms(sys.A, sys.Q, pf, int(t))
    return transient


# -- companion coordinates -------------------------------------------------

def jordan_chain_companion(lam, multiplicity, n):
    """Chain ``M[p, q] = C(p, q) lam^(p - q)`` (0-based, ``p >= q``) of the companion matrix.

    Column q is ``(1/q!) d^q/dlam^q [1, lam, ..., lam^{n-1}]``.
    """
    M = np.zeros((n, multiplicity), dtype=complex)
    for p in range(n):
        for q in range(min(p + 1, multiplicity)):
            M[p, q] = comb(p, q) * complex(lam) ** (p - q)
    return M


def generalized_left_blocks(M, multiplicities, cond_limit=1e12):
    """Row blocks of ``M^{-1}`` partitioned by multiplicity."""
    M = np.asarray(M)
    if sum(multiplicities) != M.shape[0] or M.shape[0] != M.shape[1]:
        raise SpectralError("chain matrix must be square with columns matching the multiplicities")
    if _condition(M) > cond_limit:
        raise SpectralError("generalized eigenvector matrix is singular; "
                            "eigenvalues or multiplicities are inconsistent")
    W = np.linalg.inv(M)
    blocks, start = [], 0
    for ni in multiplicities:
        blocks.append(W[start:start + ni])
        start += ni
    return tuple(blocks)


def companion_chains(real, spectrum):
    """Closed-form chains for every eigenvalue plus their left row blocks."""
    n = real.n
    if spectrum.n != n:
        raise SpectralError(f"multiplicities sum to {spectrum.n}, realization order is {n}")
    Ms = [jordan_chain_companion(li, ni, n)
          for li, ni in zip(spectrum.eigenvalues, spectrum.multiplicities)]
    left = generalized_left_blocks(np.hstack(Ms), spectrum.multiplicities)
    return tuple(JordanChainBlock(complex(li), ni, Mi, Li)
                 for li, ni, Mi, Li in zip(spectrum.eigenvalues, spectrum.multiplicities, Ms, left))


def taylor_coefficients(poly, lam, count):
    """``[p(lam), p'(lam), p''(lam)/2!, ...]`` (``count`` terms)."""
    return np.array([poly_derivative(poly, k)(lam) / factorial(k) for k in range(count)],
                    dtype=complex)


def reciprocal_series(g):
    """Taylor coefficients of ``1/g`` from those of ``g`` (``g[0] != 0``)."""
    g = np.asarray(g, dtype=complex)
    f = np.zeros_like(g)
    f[0] = 1.0 / g[0]
    for k in range(1, g.size):
        f[k] = -f[0] * np.dot(g[1:k + 1], f[k - 1::-1])
    return f


def hankel_toeplitz_blocks(real, block, delta_tol=1e-12):
    """Upper Toeplitz block of ``1/Delta`` derivatives and upper Hankel block of ``y_k[-1]``."""
    ni = block.multiplicity
    g = taylor_coefficients(real.delta, block.eigenvalue, ni)
    scale = np.sum(np.abs(real.coefficients) * abs(block.eigenvalue) ** np.arange(real.n + 1))
    if abs(g[0]) <= delta_tol * scale:
        raise SolvabilityError(
            f"Delta({block.eigenvalue}) = 0: 1/lambda is also an eigenvalue, "
            "so the Stein operator is singular")
    f = reciprocal_series(g)
    T = scipy.linalg.toeplitz(np.r_[f[0], np.zeros(ni - 1)], f)
    ends = block.M_left[:, -1]
    H = np.zeros((ni, ni), dtype=complex)
    for r in range(ni):
        for c in range(ni - r):
            H[r, c] = ends[r + c]
    return HankelToeplitzPair(T, H)


def _companion_spectrum(real, spectrum, cluster_tol):
    if spectrum is None:
        vals = scipy.linalg.eigvals(real.A_C)
        tol = default_cluster_tol(real.A_C) if cluster_tol is None else cluster_tol
        spectrum = cluster_spectrum(vals, tol)
    if spectrum.n != real.n:
        raise SpectralError(f"multiplicities sum to {spectrum.n}, realization order is {real.n}")
    for li, ni in zip(spectrum.eigenvalues, spectrum.multiplicities):
        for k in range(ni):
            val = poly_derivative(real.poly, k)(li)
            scale = np.sum(np.abs(poly_derivative(real.poly, k).coef)
                           * abs(li) ** np.arange(real.n + 1 - k))
            if abs(val) > 1e-6 * scale:
                raise SpectralError(
                    f"{li} is not a root of multiplicity {ni} of the characteristic polynomial")
    require_solvable(spectrum)
    return spectrum


def multi_sdse_companion(real, spectrum=None, inverse=False, cluster_tol=None):
    """Eigenparts of ``P_C(inf)`` (or, with ``inverse=True``, of ``P_C(inf)^{-1}``).

    Forward: ``Ph_i = M_i H_i T_i^T M_i^T J``.
    Inverse: ``Pinv_j = J (M_j^{(-1)})^T T_j^{-T} H_j^{-1} M_j^{(-1)}``.

    Without a declared spectrum the eigenvalues of ``A_C`` are clustered.
    """
    spectrum = _companion_spectrum(real, spectrum, cluster_tol)
    n = real.n
    J = antidiagonal_identity(n)
    chains = companion_chains(real, spectrum)
    pairs = tuple(hankel_toeplitz_blocks(real, b) for b in chains)
    blocks = tuple(zip(chains, pairs))
    lam = spectrum.eigenvalues
    if not inverse:
        parts = tuple(b.M @ ht.hankel @ ht.toeplitz.T @ b.M.T @ J for b, ht in blocks)
        raw = sum(parts, np.zeros((n, n), complex))
        sym = hermitian_part(raw)
        total = np.ascontiguousarray(sym.real)
        defect, scale = horizon_defect(total, real.A_C, np.outer(real.b_C, real.b_C))
        res = float(np.linalg.norm(defect))
        return CompanionDecomposition(
            realization=real, horizon=None, eigenvalues=lam,
            sub=tuple(hermitian_part(M) for M in parts), pairs=None,
            eigenparts=parts, pair_eigenparts=None, blocks=blocks, total=total,
            residual=res, relative_residual=res / scale if scale > 0 else 0.0,
            meta={"raw_asymmetry": float(np.linalg.norm(raw - sym)),
                  "imag_defect": float(np.linalg.norm(sym.imag)),
                  "multiplicities": list(spectrum.multiplicities)})
    parts = []
    for b, ht in blocks:
        if _condition(ht.hankel) > 1e12:
            raise SingularityError(f"Hankel block of eigenvalue {b.eigenvalue} is singular; "
                                   "the inverse eigenpart is undefined")
        Tinv_T = np.linalg.inv(ht.toeplitz).T
        parts.append(J @ b.M_left.T @ Tinv_T @ np.linalg.inv(ht.hankel) @ b.M_left)
    parts = tuple(parts)
    raw = sum(parts, np.zeros((n, n), complex))
    sym = hermitian_part(raw)
    fwd = multi_sdse_companion(real, spectrum)
    return InverseDecomposition(
        realization=real, horizon=None, eigenvalues=lam, eigenparts=parts,
        sub=tuple(hermitian_part(M) for M in parts), pair_eigenparts=None, pairs=None,
        total=np.ascontiguousarray(sym.real), total_symmetric=np.ascontiguousarray(sym.real),
        forward_condition=_condition(fwd.total), blocks=blocks,
        meta={"raw_asymmetry": float(np.linalg.norm(raw - sym)),
              "imag_defect": float(np.linalg.norm(sym.imag)),
              "multiplicities": list(spectrum.multiplicities)})
