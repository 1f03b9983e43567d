"""State-space data container for x(t+1) = A x(t) + B u(t)."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionError, ValidationError


def _as_real_matrix(M, name):
    M = np.array(M, dtype=float, ndmin=2)
    if M.ndim != 2:
        raise DimensionError(f"{name} must be a 2-D array, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValidationError(f"{name} contains non-finite entries")
    return M


@dataclass(frozen=True)
class LtiSystem:
    """Discrete-time LTI system ``(A, B)`` with optional initial Gramian ``P0``.

    ``A`` is n x n and ``B`` is n x m.  A 1-D ``B`` is read as a single
    column.  ``P0`` must be symmetric to ``1e-9 * ||P0||_F``; it is
    symmetrized on construction.
    """

    A: np.ndarray
    B: np.ndarray
    P0: Optional[np.ndarray] = None

    def __post_init__(self):
        A = np.array(self.A, dtype=float)
        if A.size == 0:
            A = A.reshape(0, 0)
        elif A.ndim != 2:
            A = _as_real_matrix(A, "A")
        if A.shape[0] != A.shape[1]:
            raise DimensionError(f"A must be square, got shape {A.shape}")
        if not np.all(np.isfinite(A)):
            raise ValidationError("A contains non-finite entries")
        n = A.shape[0]

        B = np.array(self.B, dtype=float)
        if B.ndim == 1:
            B = B.reshape(-1, 1)
        if n == 0:
            B = np.zeros((0, B.shape[1] if B.ndim == 2 else 1))
        if B.ndim != 2 or B.shape[0] != n:
            raise DimensionError(f"B must have {n} rows, got shape {B.shape}")
        if not np.all(np.isfinite(B)):
            raise ValidationError("B contains non-finite entries")

        P0 = self.P0
        if P0 is not None:
            P0 = _as_real_matrix(P0, "P0") if n else np.zeros((0, 0))
            if P0.shape != (n, n):
                raise DimensionError(f"P0 must be {n}x{n}, got shape {P0.shape}")
            scale = np.linalg.norm(P0)
            if np.linalg.norm(P0 - P0.T) > 1e-9 * scale:
                raise ValidationError("P0 is not symmetric")
            P0 = 0.5 * (P0 + P0.T)

        for arr in (A, B) + ((P0,) if P0 is not None else ()):
            arr.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "P0", P0)

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def m(self):
        return self.B.shape[1]

    @property
    def Q(self):
        """Input covariance ``B B^T``."""
        return self.B @ self.B.T

    def initial(self):
        """``P0``, or the zero matrix when no initial condition was given."""
        return np.zeros((self.n, self.n)) if self.P0 is None else np.array(self.P0)

    def with_initial(self, P0):
        return LtiSystem(self.A, self.B, P0)
