import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

import reference_values as ref  # noqa: E402
from sdse.companion import canonical_realization  # noqa: E402


def rel_err(a, b):
    b_norm = np.linalg.norm(b)
    return np.linalg.norm(np.asarray(a) - np.asarray(b)) / (b_norm if b_norm > 0 else 1.0)


def entrywise_rel(a, b):
    """max |a - b| / max |b|."""
    return np.max(np.abs(np.asarray(a) - np.asarray(b))) / np.max(np.abs(b))


@pytest.fixture
def three_mode():
    return canonical_realization([float(c) for c in ref.THREE_MODE_COEFFS])


@pytest.fixture
def double_pair():
    return canonical_realization([float(c) for c in ref.DOUBLE_PAIR_COEFFS])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
