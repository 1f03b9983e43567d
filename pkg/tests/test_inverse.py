import warnings

import numpy as np
import pytest

import reference_values as ref
from conftest import entrywise_rel, rel_err
from sdse.companion import canonical_realization, realization_from_roots, to_companion
from sdse.companion_sdse import companion_parts, companion_sdse_infinite
from sdse.errors import HorizonError, IllConditionedError
from sdse.inverse import inverse_sdse_finite, inverse_sdse_infinite, orthogonality_check
from sdse.oracle import random_system, stein_iterate


def test_inverse_sub_golden(three_mode):
    inv = inverse_sdse_infinite(three_mode)
    for got, expect in zip(inv.sub, ref.THREE_MODE_INV_SUB):
        assert entrywise_rel(got, expect) < 1e-9


def test_inverse_pairs_golden(three_mode):
    inv = inverse_sdse_infinite(three_mode)
    for (i, j), expect in ref.THREE_MODE_INV_PAIRS.items():
        assert entrywise_rel(inv.pairs[i, j], expect) < 1e-9
        assert entrywise_rel(inv.pairs[j, i], expect) < 1e-9


def test_inverse_scalar():
    inv = inverse_sdse_infinite(canonical_realization([-0.5, 1.0]))
    assert inv.total[0, 0] == pytest.approx(0.75, rel=1e-15)


def test_inverse_identity(three_mode):
    fwd = companion_sdse_infinite(three_mode)
    inv = inverse_sdse_infinite(three_mode)
    assert np.linalg.norm(inv.total @ fwd.total - np.eye(3)) <= 1e-8 * np.linalg.cond(fwd.total)


def test_orthogonality(three_mode):
    rep = orthogonality_check(companion_sdse_infinite(three_mode), inverse_sdse_infinite(three_mode))
    assert rep.max_defect <= 1e-9 * rep.residue_scale
    off = rep.defects[~np.eye(3, dtype=bool)]
    assert off.max() <= 1e-9 * rep.residue_scale


def test_orthogonality_scalar():
    real = canonical_realization([-0.5, 1.0])
    fwd, inv = companion_sdse_infinite(real), inverse_sdse_infinite(real)
    assert (fwd.eigenparts[0] @ inv.eigenparts[0])[0, 0] == pytest.approx(1.0, rel=1e-15)


def test_inverse_row_sums(three_mode):
    inv = inverse_sdse_infinite(three_mode)
    for j, P in enumerate(inv.eigenparts):
        row = inv.pair_eigenparts[:, j].sum(axis=0)
        assert np.linalg.norm(row - P) <= 1e-9 * np.linalg.norm(P)


def test_inverse_eigenparts_rank_one(three_mode):
    for P in inverse_sdse_infinite(three_mode).eigenparts:
        s = np.linalg.svd(P, compute_uv=False)
        assert s[1] <= 1e-12 * s[0]


def test_symmetrized_and_raw_totals_agree(three_mode):
    inv = inverse_sdse_infinite(three_mode)
    raw = sum(inv.eigenparts)
    assert np.linalg.norm(raw.imag) < 1e-10
    assert entrywise_rel(raw.real, inv.total) < 1e-10
    np.testing.assert_array_equal(inv.total, inv.total.T)


def test_uniqueness_from_orthogonality(three_mode):
    fwd = companion_sdse_infinite(three_mode)
    inv = inverse_sdse_infinite(three_mode)
    cp = companion_parts(three_mode)
    n = 3
    for j in range(n):
        # solve P_hat_i X = delta_ij R_i (i = 1..n) for X in the least-squares sense
        rows = np.vstack([np.kron(fwd.eigenparts[i], np.eye(n)) for i in range(n)])
        rhs = np.concatenate([(cp.residue(i) if i == j else np.zeros((n, n))).ravel()
                              for i in range(n)])
        X = np.linalg.lstsq(rows, rhs, rcond=None)[0].reshape(n, n)
        assert rel_err(X, inv.eigenparts[j]) < 1e-7


def test_finite_inverse_t5(three_mode):
    Q = np.outer(three_mode.b_C, three_mode.b_C)
    P5 = stein_iterate(three_mode.A_C, Q, np.zeros((3, 3)), 5)
    got = inverse_sdse_finite(three_mode, 5).total
    assert rel_err(got, ref.THREE_MODE_FINITE_INVERSE[5]) <= 1e-6 * np.linalg.cond(P5)
    assert rel_err(got, np.linalg.inv(P5)) <= 1e-6 * np.linalg.cond(P5)


def test_finite_inverse_zero_horizon(three_mode, rng):
    X = rng.standard_normal((3, 3))
    P0 = X @ X.T + np.eye(3)
    got = inverse_sdse_finite(three_mode, 0, P0=P0).total
    assert rel_err(got, np.linalg.inv(P0)) < 1e-10


def test_finite_inverse_long_horizon_limit():
    real = realization_from_roots([0.6, -0.3, 0.2])
    t = int(np.ceil(np.log(1e-12) / np.log(0.6))) + 1
    fin = inverse_sdse_finite(real, t)
    np.testing.assert_allclose(fin.G, np.eye(3), atol=1e-10)
    assert rel_err(fin.total, inverse_sdse_infinite(real).total) < 1e-10


def test_finite_inverse_with_initial(three_mode, rng):
    X = rng.standard_normal((3, 3))
    P0 = X @ X.T + np.eye(3)
    Q = np.outer(three_mode.b_C, three_mode.b_C)
    for t in (1, 4, 8):
        P = stein_iterate(three_mode.A_C, Q, P0, t)
        got = inverse_sdse_finite(three_mode, t, P0=P0).total
        assert rel_err(got, np.linalg.inv(P)) <= 1e-9 * np.linalg.cond(P)


def test_short_horizon_without_initial_is_singular(three_mode):
    with pytest.raises(HorizonError):
        inverse_sdse_finite(three_mode, 2)


def test_ill_conditioned_gate():
    real = realization_from_roots([0.999, 0.998, 0.997])
    with pytest.raises(IllConditionedError):
        inverse_sdse_infinite(real, cond_error=1e3)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        inverse_sdse_infinite(real, cond_warn=1.0)
    assert caught


@pytest.mark.parametrize("seed", range(5))
def test_random_inverse_identity(seed):
    real = to_companion(random_system(4, 1, [0.5, 0.95, 1.5][seed % 3], seed=seed))
    fwd = companion_sdse_infinite(real)
    inv = inverse_sdse_infinite(real)
    assert np.linalg.norm(inv.total @ fwd.total - np.eye(4)) <= 1e-8 * np.linalg.cond(fwd.total)
