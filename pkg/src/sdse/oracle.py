"""Brute-force Stein solvers plus the audit and random-system helpers built on them.

Nothing here touches eigen-decompositions: the solvers are a dense
Kronecker solve and plain iteration, so they can referee every
decomposition path independently.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import CapacityError, DimensionError, SolvabilityError, ValidationError
from .system import LtiSystem

__all__ = ["KRON_CAP", "stein_solve_kron", "stein_iterate", "finite_gramian_sum",
           "ResidualReport", "audit", "random_system", "DEFAULT_TOLERANCE"]

KRON_CAP = 32
DEFAULT_TOLERANCE = 1e-8
_COND_CLAMP = 1e300


def _square(A, name="A"):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {A.shape}")
    return A


def stein_solve_kron(A, Q, cap=KRON_CAP, pivot_tol=1e-13):
    """Solve ``A P A^T - P = -Q`` through ``(I - A kron A) vec(P) = vec(Q)``.

    ``vec`` is row-major, for which ``vec(A P A^T) = (A kron A) vec(P)``.
    Dense LU; cost grows as n^6, hence the size cap.
    """
    A = _square(A)
    Q = _square(Q, "Q")
    n = A.shape[0]
    if Q.shape != (n, n):
        raise DimensionError(f"Q must be {n}x{n}, got {Q.shape}")
    if n > cap:
        raise CapacityError(f"Kronecker oracle is capped at n <= {cap}, got n = {n}")
    if n == 0:
        return np.zeros((0, 0))
    K = np.eye(n * n) - np.kron(A, A)
    with warnings.catch_warnings():
        # exact singularity is reported below as a SolvabilityError
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(K, check_finite=True)
    d = np.abs(np.diag(lu))
    if d.min() <= pivot_tol * max(d.max(), 1.0):
        raise SolvabilityError("I - A kron A is singular: some eigenvalue pair of A "
                               "has product 1, so the Stein equation has no unique solution")
    P = scipy.linalg.lu_solve((lu, piv), Q.reshape(-1)).reshape(n, n)
    return 0.5 * (P + P.T)


def stein_iterate(A, Q, P0, t):
    """``t`` steps of ``P <- A P A^T + Q`` from ``P0``."""
    if int(t) != t or t < 0:
        raise ValidationError(f"horizon must be a nonnegative integer, got {t!r}")
    A = _square(A)
    P = np.array(P0, dtype=float, copy=True)
    for _ in range(int(t)):
        P = A @ P @ A.T + Q
    return 0.5 * (P + P.T)


def finite_gramian_sum(A, B, t):
    """``sum_{k<t} A^k B B^T (A^T)^k``."""
    if int(t) != t or t < 0:
        raise ValidationError(f"horizon must be a nonnegative integer, got {t!r}")
    A = _square(A)
    B = np.asarray(B, dtype=float)
    if B.ndim == 1:
        B = B[:, None]
    n = A.shape[0]
    P = np.zeros((n, n))
    AkB = B
    for _ in range(int(t)):
        P += AkB @ AkB.T
        AkB = A @ AkB
    return P


@dataclass(frozen=True)
class ResidualReport:
    """Audit of a candidate Gramian against the Stein equation and the oracle.

    ``stein_residual`` is the Frobenius defect divided by
    ``max(1, ||Q||, ||A P A^T||, ||P||)``; for a finite horizon the defect
    is the one-step identity with the ``A^t (...) (A^T)^t`` tail.
    """

    stein_residual: float
    oracle_gap: float
    symmetry_defect: float
    condition_estimate: float
    tolerance: float
    passed: bool

    def as_dict(self):
        return {"stein_residual": self.stein_residual, "oracle_gap": self.oracle_gap,
                "symmetry_defect": self.symmetry_defect,
                "condition_estimate": self.condition_estimate,
                "tolerance": self.tolerance, "pass": self.passed}


def _finite(x):
    x = float(x)
    if not np.isfinite(x):
        return _COND_CLAMP
    return min(abs(x), _COND_CLAMP)


def _condition(M):
    if M.size == 0:
        return 1.0
    s = np.linalg.svd(M, compute_uv=False)
    return s[0] / s[-1] if s[-1] > 0 else np.inf


def audit(total, A, Q, P0=None, horizon=None, oracle=None, tolerance=DEFAULT_TOLERANCE,
          inverse=False):
    """Check a candidate Gramian (or, with ``inverse=True``, its inverse).

    ``oracle`` may be passed to avoid recomputing the reference solution.
    For inverse candidates the gap and residual thresholds are scaled by the
    condition number of the reference Gramian.
    """
    total = np.asarray(total, dtype=float)
    A = _square(A)
    Q = _square(Q, "Q")
    n = A.shape[0]
    if total.shape != (n, n):
        raise DimensionError(f"total must be {n}x{n}, got {total.shape}")
    if oracle is None:
        if horizon is None:
            oracle = stein_solve_kron(A, Q)
        else:
            oracle = stein_iterate(A, Q, np.zeros((n, n)) if P0 is None else P0, horizon)
    P = np.linalg.inv(total) if inverse and n else total
    APA = A @ P @ A.T
    defect = APA - P + Q
    scale = max(1.0, np.linalg.norm(Q), np.linalg.norm(APA), np.linalg.norm(P))
    if horizon is not None:
        P0m = np.zeros((n, n)) if P0 is None else np.asarray(P0, dtype=float)
        At = np.linalg.matrix_power(A, int(horizon))
        tail = At @ (Q + A @ P0m @ A.T - P0m) @ At.T
        defect = defect - tail
        scale = max(scale, np.linalg.norm(tail))
    residual = _finite(np.linalg.norm(defect) / scale)
    if inverse:
        ref = np.linalg.inv(oracle) if n else oracle
    else:
        ref = oracle
    ref_norm = np.linalg.norm(ref)
    gap = _finite(np.linalg.norm(total - ref) / (ref_norm if ref_norm > 0 else 1.0))
    tnorm = np.linalg.norm(total)
    sym = _finite(np.linalg.norm(total - total.T) / (tnorm if tnorm > 0 else 1.0))
    cond = _finite(_condition(oracle))
    limit = tolerance * (cond if inverse else 1.0)
    sym_ok = inverse or sym <= limit
    passed = bool(residual <= limit and gap <= limit and sym_ok)
    return ResidualReport(residual, gap, sym, cond, float(tolerance), passed)


def _sample_spectrum(rng, n, radius, inner):
    n_pairs = rng.integers(0, n // 2 + 1)
    mods = rng.uniform(inner * radius, radius, size=n - n_pairs)
    mods[rng.integers(0, mods.size)] = radius
    signs = rng.choice([-1.0, 1.0], size=mods.size)
    angles = rng.uniform(0.1, np.pi - 0.1, size=n_pairs)
    complex_part = mods[:n_pairs] * np.exp(1j * angles)
    real_part = signs[n_pairs:] * mods[n_pairs:]
    eigs = np.concatenate([complex_part, complex_part.conj(), real_part])
    return eigs, complex_part, real_part


def random_system(n, m=1, radius=0.9, seed=0, margin=0.05, separation=0.05,
                  inner=0.1, max_tries=1000):
    """Seeded random real system with spectral radius ``radius``.

    Eigenvalue moduli are drawn from the annulus ``[inner*radius, radius]``
    and complex ones come in conjugate pairs.  A draw is rejected when some
    ``|1 - lam_i lam_j|`` falls below ``margin`` or two eigenvalues sit
    closer than ``separation``; uncontrollable ``(A, B)`` is redrawn too.
    A random orthogonal similarity hides the block-diagonal structure.
    """
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        eigs, cpx, rl = _sample_spectrum(rng, n, radius, inner)
        prod = np.abs(1.0 - np.multiply.outer(eigs, eigs))
        if prod.min() < margin:
            continue
        dist = np.abs(np.subtract.outer(eigs, eigs))
        np.fill_diagonal(dist, np.inf)
        if n > 1 and dist.min() < separation:
            continue
        D = np.zeros((n, n))
        k = 0
        for z in cpx:
            D[k:k + 2, k:k + 2] = [[z.real, z.imag], [-z.imag, z.real]]
            k += 2
        for r in rl:
            D[k, k] = r
            k += 1
        U, _ = np.linalg.qr(rng.standard_normal((n, n)))
        A = U @ D @ U.T
        B = rng.standard_normal((n, m))
        ctrb = np.hstack([np.linalg.matrix_power(A, k) @ B for k in range(n)])
        s = np.linalg.svd(ctrb, compute_uv=False)
        if s[-1] < 1e-6 * s[0]:
            continue
        return LtiSystem(A, B)
    raise ValidationError(f"no admissible system found for n={n}, radius={radius}, seed={seed}")
