import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize

from dampcap.capacity import (ConvergenceWarning, blahut_arimoto, detected_capacity,
                              holevo_direct, holevo_fourier, mutual_information,
                              report_from_amplitudes, symmetric_capacity)
from dampcap.channel import (apply_channel, direct_transition, fourier_basis,
                             fourier_transition, kraus_operators)
from dampcap.families import ChannelSpec
from dampcap.numerics import von_neumann_entropy

from conftest import random_amplitudes


def h2(f):
    return -f * math.log2(f) - (1 - f) * math.log2(1 - f)


def bsc(f):
    return np.array([[1 - f, f], [f, 1 - f]])


def z_channel(p):
    # letter 1 decays to 0 with probability p
    return np.array([[1.0, p], [0.0, 1 - p]])


def z_capacity(p):
    return math.log2(1 + (1 - p) * p ** (p / (1 - p)))


def brute_force_capacity(q, restarts=8, seed=0):
    """Maximize I(p) over a softmax parametrization with Nelder-Mead."""
    rng = np.random.default_rng(seed)
    d = q.shape[1]

    def info(x):
        p = np.exp(x - x.max())
        p /= p.sum()
        out = q @ p
        mask = q > 0
        val = np.sum(np.where(mask, q * np.log2(np.where(mask, q, 1) / out[:, None]), 0) * p)
        return -val

    best = 0.0
    for _ in range(restarts):
        res = minimize(info, rng.normal(size=d), method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 40_000})
        best = max(best, -res.fun)
    return best


class TestMutualInformation:
    def test_identity_uniform(self):
        assert mutual_information(np.eye(4), np.full(4, 0.25)) == pytest.approx(2.0, abs=1e-14)

    def test_deterministic_prior(self):
        q = direct_transition(random_amplitudes(np.random.default_rng(0), 5))
        assert mutual_information(q, [0, 0, 1, 0, 0]) == pytest.approx(0.0, abs=1e-15)

    def test_bsc(self):
        assert mutual_information(bsc(0.11), [0.5, 0.5]) == pytest.approx(0.50012, abs=1e-4)
        assert mutual_information(bsc(0.11), [0.5, 0.5]) == pytest.approx(1 - h2(0.11), abs=1e-13)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            mutual_information(np.eye(3), [0.5, 0.5])

    def test_matches_holevo_direct_formula(self):
        rng = np.random.default_rng(4)
        for d in range(2, 7):
            q = direct_transition(random_amplitudes(rng, d))
            p = rng.dirichlet(np.ones(d))
            assert mutual_information(q, p) == pytest.approx(holevo_direct(q, p), abs=1e-12)


class TestBlahutArimoto:
    def test_identity(self):
        res = blahut_arimoto(np.eye(8))
        assert res.certified
        assert res.information == pytest.approx(3.0, abs=1e-12)
        np.testing.assert_allclose(res.prior, np.full(8, 1 / 8))

    @pytest.mark.parametrize("p", [0.25, 0.5, 0.75])
    def test_z_channel(self, p):
        res = blahut_arimoto(z_channel(p), tol=1e-9)
        assert res.certified and res.gap <= 1e-9
        assert res.information == pytest.approx(z_capacity(p), abs=1e-6)
        assert abs(res.prior[0] - 0.5) > 0.01

    def test_z_half_is_log_five_quarters(self):
        assert z_capacity(0.5) == pytest.approx(math.log2(5 / 4), abs=1e-15)
        assert blahut_arimoto(z_channel(0.5)).information == pytest.approx(0.32193, abs=1e-5)

    @pytest.mark.parametrize("f", [0.05, 0.11, 0.25])
    def test_bsc(self, f):
        res = blahut_arimoto(bsc(f), tol=1e-9)
        assert res.information == pytest.approx(1 - h2(f), abs=1e-6)
        np.testing.assert_allclose(res.prior, [0.5, 0.5], atol=1e-9)

    def test_useless_channel(self):
        res = blahut_arimoto(np.full((4, 4), 0.25))
        assert res.information == pytest.approx(0.0, abs=1e-15)

    def test_monotone_iterates(self):
        rng = np.random.default_rng(11)
        for d in range(2, 9):
            q = direct_transition(random_amplitudes(rng, d, sparsity=0.4))
            res = blahut_arimoto(q, tol=1e-10, max_iter=5000, record=True)
            assert np.all(np.diff(res.history) >= -1e-12)

    @pytest.mark.filterwarnings("ignore::dampcap.capacity.ConvergenceWarning")
    def test_plain_recursion_monotone(self):
        rng = np.random.default_rng(12)
        for d in range(2, 7):
            q = direct_transition(random_amplitudes(rng, d, sparsity=0.4))
            res = blahut_arimoto(q, tol=1e-8, max_iter=20_000, record=True, accelerate=False)
            assert np.all(np.diff(res.history) >= -1e-12)

    @pytest.mark.filterwarnings("ignore::dampcap.capacity.ConvergenceWarning")
    def test_acceleration_agrees_with_plain_recursion(self):
        # both runs bracket the same capacity, so the brackets must overlap
        rng = np.random.default_rng(13)
        for d in range(2, 7):
            q = direct_transition(random_amplitudes(rng, d, sparsity=0.3))
            fast = blahut_arimoto(q, tol=1e-10)
            slow = blahut_arimoto(q, tol=1e-10, max_iter=50_000, accelerate=False)
            assert fast.certified
            assert fast.information >= slow.information - 1e-12
            assert fast.information <= slow.information + slow.gap + 1e-12

    def test_near_duplicate_letters(self):
        # two inputs differing only at the 1e-6 level: plain iteration crawls here
        q = np.array([[1.0, 1 - 1.1e-6, 0.309], [0.0, 1.1e-6, 0.333], [0.0, 0.0, 0.358]])
        res = blahut_arimoto(q, tol=1e-9)
        assert res.certified
        assert res.information == pytest.approx(brute_force_capacity(q), abs=1e-6)

    def test_unreachable_output_keeps_letter_alive(self):
        # letter 2 alone reaches output 2; the bracket must stay finite
        q = np.array([[1.0, 1.0, 0.996], [0.0, 0.0, 0.0], [0.0, 0.0, 0.004]])
        res = blahut_arimoto(q)
        assert res.certified and np.isfinite(res.gap)
        assert np.all(res.prior > 0)

    def test_uncertified(self):
        q = direct_transition(random_amplitudes(np.random.default_rng(5), 6))
        with pytest.warns(ConvergenceWarning):
            res = blahut_arimoto(q, tol=1e-12, max_iter=2)
        assert not res.certified and res.iterations == 2 and res.gap > 1e-12

    def test_bad_tolerance(self):
        with pytest.raises(ValueError):
            blahut_arimoto(np.eye(2), tol=0)

    def test_against_brute_force(self):
        rng = np.random.default_rng(21)
        for d in (2, 3, 4, 5):
            q = direct_transition(random_amplitudes(rng, d, sparsity=0.3))
            res = blahut_arimoto(q, tol=1e-10)
            assert res.information == pytest.approx(brute_force_capacity(q), abs=1e-6)


class TestSymmetricCapacity:
    def test_examples(self):
        assert symmetric_capacity(np.eye(5)) == pytest.approx(math.log2(5), abs=1e-14)
        assert symmetric_capacity(np.full((3, 3), 1 / 3)) == pytest.approx(0.0, abs=1e-14)
        assert symmetric_capacity(np.full((2, 2), 0.5)) == 0.0

    def test_rejects_non_circulant(self):
        with pytest.raises(ValueError, match="circulant"):
            symmetric_capacity(z_channel(0.3))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 8), st.integers(0, 2**32 - 1))
    def test_agrees_with_blahut_arimoto(self, d, seed):
        rng = np.random.default_rng(seed)
        col = rng.dirichlet(np.full(d, 0.7))
        idx = (np.arange(d)[:, None] - np.arange(d)[None, :]) % d
        q = col[idx]
        tol = 1e-9
        assert abs(symmetric_capacity(q) - blahut_arimoto(q, tol=tol).information) <= 2 * tol


class TestHolevo:
    def test_direct_examples(self):
        assert holevo_direct(np.eye(4), np.full(4, 0.25)) == pytest.approx(2.0)
        full = np.zeros((3, 3))
        full[0] = 1
        assert holevo_direct(full, [0.2, 0.3, 0.5]) == pytest.approx(0.0, abs=1e-15)

    def test_fourier_examples(self):
        assert holevo_fourier(np.eye(6)) == pytest.approx(math.log2(6), abs=1e-10)
        full = np.zeros((4, 4))
        full[0] = 1
        assert holevo_fourier(full) == pytest.approx(0.0, abs=1e-12)

    def test_fourier_against_full_ensemble(self):
        rng = np.random.default_rng(8)
        for d in range(2, 7):
            c = random_amplitudes(rng, d, sparsity=0.3)
            ops = kraus_operators(c)
            f = fourier_basis(d)
            outs = [apply_channel(ops, np.outer(f[:, n], f[:, n].conj())) for n in range(d)]
            avg = sum(outs) / d
            chi = von_neumann_entropy(avg) - np.mean([von_neumann_entropy(o) for o in outs])
            assert holevo_fourier(c) == pytest.approx(chi, abs=1e-10)

    def test_fourier_bounds_symmetric_capacity(self, corpus):
        for c in corpus[::4]:
            assert symmetric_capacity(fourier_transition(c)) <= holevo_fourier(c) + 1e-9


class TestDetectedCapacity:
    def test_noiseless(self):
        r = detected_capacity(ChannelSpec("bosonic", 8, {"gamma": 0.0}))
        assert r.i_direct == pytest.approx(3.0, abs=1e-12)
        assert r.i_fourier == pytest.approx(3.0, abs=1e-12)
        assert r.c_det == pytest.approx(3.0, abs=1e-12)
        assert r.winner == "fourier"  # tie-break

    def test_hypergeometric_point(self):
        r = detected_capacity(ChannelSpec("hypergeometric", 8, {"M": 5, "L": 12}))
        assert r.c_det == pytest.approx(1.074, abs=5e-3)
        assert r.winner == "direct"
        assert r.prior_support() == [0, 2, 3, 7]

    @pytest.mark.parametrize("gamma", [0.1, 0.5, 0.9])
    def test_v_qubit(self, gamma):
        assert detected_capacity(ChannelSpec("v", 2, {"gamma": gamma})).winner == "fourier"

    def test_report_invariants(self, corpus):
        for c in corpus[::10]:
            r = report_from_amplitudes(c)
            assert r.c_det == max(r.i_direct, r.i_fourier)
            assert r.winner == ("fourier" if r.i_fourier >= r.i_direct - 1e-12 else "direct")
            assert abs(r.i_direct - r.chi_direct) < 1e-9
            assert r.i_fourier <= r.chi_fourier + 1e-9
            assert -1e-12 <= r.prior_entropy <= math.log2(c.shape[0]) + 1e-12
            assert r.delta == pytest.approx((r.chi_fourier - r.c_det) / math.log2(c.shape[0]))

    def test_propagates_validation(self):
        with pytest.raises(ValueError):
            detected_capacity(ChannelSpec("constant_ratio", 5, {"gamma": 0.9}))

    def test_to_dict(self):
        r = detected_capacity(ChannelSpec("geometric", 3, {"gamma": 0.4}))
        obj = r.to_dict()
        assert obj["family"] == "geometric" and obj["params"] == {"gamma": 0.4}
        assert len(obj["prior_direct"]) == 3
        for key in ("i_direct", "i_fourier", "c_det", "winner", "chi_direct", "chi_fourier",
                    "delta", "prior_entropy", "ba_iterations"):
            assert key in obj
