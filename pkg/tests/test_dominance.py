import math

import numpy as np
import pytest

from idmtree.data import ContingencyTable, DataError
from idmtree.dominance import (
    CredibleParams, DominanceVerdict, credible_interval, dominates_credible,
    dominates_disjoint, dominates_shared, mi_diff_variance, mi_variance, shared_margin,
)
from idmtree.idm import IdmConfig, expansion_point, mi_interval
from oracles import mc_mi_diff_variance, mc_mi_variance, mi_diff_ref, mi_ref, simplex_grid

DEP = ContingencyTable([[20, 0], [0, 20]])
IND = ContingencyTable([[10, 10], [10, 10]])


def chain_triple(rng, n, flip_a=0.1, flip_b=0.3):
    """Counts over (i, j, k) for i -> j -> k with symmetric flip noise."""
    i = rng.integers(0, 2, n)
    j = np.where(rng.random(n) < flip_a, 1 - i, i)
    k = np.where(rng.random(n) < flip_b, 1 - j, j)
    out = np.zeros((2, 2, 2), dtype=np.int64)
    np.add.at(out, (i, j, k), 1)
    return out


def uniform_t(shape):
    return np.full(shape, 1.0 / np.prod(shape))


class TestVerdictTypes:
    def test_positive_margin_required(self):
        with pytest.raises(ValueError):
            DominanceVerdict(True, 0.0)
        assert not DominanceVerdict.from_margin(0.0)
        assert DominanceVerdict.from_margin(1e-300)

    def test_credible_params(self):
        cp = CredibleParams.from_alpha(0.9545)
        assert cp.r == pytest.approx(2.0, abs=1e-3)
        assert CredibleParams.from_r(2.0).alpha == pytest.approx(0.9545, abs=1e-4)
        with pytest.raises(ValueError):
            CredibleParams(2.0, 0.5)
        with pytest.raises(ValueError):
            CredibleParams.from_alpha(1.0)


class TestDisjoint:
    def test_identical_tables(self):
        v = dominates_disjoint(DEP, DEP)
        assert not v and v.margin <= 0

    def test_dependence_beats_independence(self):
        assert dominates_disjoint(DEP, IND)
        grid = simplex_grid(4, 0.05)
        assert mi_ref(DEP.counts, grid, 1.0).min() > mi_ref(IND.counts, grid, 1.0).max()

    def test_constant_variable_side(self):
        flat = ContingencyTable([[25, 15]])
        v = dominates_disjoint(DEP, flat)
        outer, inner = mi_interval(DEP)
        assert inner.lo > 0 and v
        assert v.margin == pytest.approx(outer.lo, abs=1e-15)

    def test_mismatched_n(self):
        with pytest.raises(DataError):
            dominates_disjoint(DEP, ContingencyTable([[1, 2], [3, 4]]))


class TestShared:
    def test_dependent_over_independent(self):
        rng = np.random.default_rng(0)
        j = np.repeat([0, 1], 20)
        k = rng.integers(0, 2, 40)
        c = np.zeros((2, 2, 2), dtype=np.int64)
        np.add.at(c, (j, j, k), 1)
        assert dominates_shared(c)
        assert mi_diff_ref(c, simplex_grid(8, 0.1), 1.0).min() > 0

    def test_symmetric_triple(self):
        c = np.array([[[6, 2], [1, 3]], [[2, 4], [3, 5]]])
        c = c + c.transpose(2, 1, 0)
        assert not dominates_shared(c)
        assert not dominates_shared(c.transpose(2, 1, 0))

    def test_soundness_against_grid(self):
        rng = np.random.default_rng(1)
        grid = simplex_grid(8, 0.1)
        found = 0
        for _ in range(40):
            c = chain_triple(rng, int(rng.integers(8, 26)), 0.05, 0.45)
            for t in (c, c.transpose(2, 1, 0)):
                if dominates_shared(t):
                    found += 1
                    assert mi_diff_ref(t, grid, 1.0).min() > -0.01
        assert found >= 5

    def test_uses_general_expansion_point(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            c = chain_triple(rng, 30)
            for rule in ("uniform", "empirical"):
                m = shared_margin(c, IdmConfig(tstar_rule=rule))
                grid_min = mi_diff_ref(c, simplex_grid(8, 0.1), 1.0).min()
                assert m <= grid_min + 1e-9

    def test_never_contradicts_disjoint(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            c = chain_triple(rng, int(rng.integers(5, 40)), rng.random(), rng.random())
            a, b = c.sum(axis=2), c.sum(axis=0)
            assert not (dominates_disjoint(a, b) and dominates_shared(c.transpose(2, 1, 0)))
            assert not (dominates_disjoint(b, a) and dominates_shared(c))


class TestVariance:
    def test_constant_variable(self):
        assert mi_variance([[4, 6]], [[0.5, 0.5]], 1.0) == 0.0

    @pytest.mark.xfail(strict=True, reason=(
        "zero cells keep Dirichlet weight s*t for every n, so the dropped "
        "higher-order terms stay large; leading term is 2.0x the posterior variance"))
    def test_monte_carlo_diagonal(self):
        c = np.array([[5, 0], [0, 5]])
        v = mi_variance(c, uniform_t(c.shape), 1.0)
        assert v > 0
        assert v == pytest.approx(mc_mi_variance(c, uniform_t(c.shape), 1.0), rel=0.25)

    @pytest.mark.parametrize("base", [[[10, 2], [2, 10]], [[8, 2], [4, 6]]])
    def test_monte_carlo_positive_cells(self, base):
        c = np.array(base)
        v = mi_variance(c, uniform_t(c.shape), 1.0)
        assert v == pytest.approx(mc_mi_variance(c, uniform_t(c.shape), 1.0), rel=0.25)

    def test_scales_inverse_with_n(self):
        c = np.array([[12, 3], [4, 9]])
        t = uniform_t(c.shape)
        ratio = mi_variance(4 * c, t, 1.0) / mi_variance(c, t, 1.0)
        assert ratio == pytest.approx((c.sum() + 1) / (4 * c.sum() + 1), rel=0.3)

    def test_diff_copy_is_zero(self):
        c = np.zeros((2, 2, 2), dtype=np.int64)
        c[0, 0, 0], c[1, 1, 1] = 7, 5
        t = expansion_point(c, 1.0, "empirical").tstar
        assert mi_diff_variance(c, t, 1.0) == pytest.approx(0.0, abs=1e-10)

    def test_diff_constant_ends(self):
        c = np.array([[[3], [9], [4]]])
        assert mi_diff_variance(c, uniform_t(c.shape), 1.0) == pytest.approx(0.0, abs=1e-15)

    def test_diff_monte_carlo(self):
        c = chain_triple(np.random.default_rng(4), 50, 0.05, 0.3)
        t = uniform_t(c.shape)
        v = mi_diff_variance(c, t, 1.0)
        assert v == pytest.approx(mc_mi_diff_variance(c, t, 1.0), rel=0.25)


class TestCredible:
    def test_constant_variable(self):
        iv = credible_interval([[3, 8, 2]])
        assert (iv.lo, iv.hi) == (0.0, 0.0)

    def test_contains_outer(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            c = rng.integers(0, 10, size=(int(rng.integers(2, 4)), 2))
            assert credible_interval(c).contains(mi_interval(c)[0])

    def test_width_gap(self):
        cfg = IdmConfig()
        c = np.array([[14, 6], [5, 15]])
        r = CredibleParams.from_alpha(cfg.alpha).r
        t = expansion_point(c, 1.0, "uniform").tstar
        gap = credible_interval(c).width - mi_interval(c)[0].width
        assert gap == pytest.approx(2 * r * math.sqrt(mi_variance(c, t, 1.0)), rel=1e-12)

    def test_implies_expectation_level(self):
        rng = np.random.default_rng(6)
        cp = CredibleParams.from_alpha(0.95)
        for _ in range(100):
            c = chain_triple(rng, int(rng.integers(10, 80)), 0.3 * rng.random(), rng.random())
            if dominates_credible(c, IdmConfig(), cp):
                assert dominates_shared(c)
            a, b = c.sum(axis=2), c.sum(axis=0)
            if dominates_credible((a, b), IdmConfig(), cp):
                assert dominates_disjoint(a, b)
        assert dominates_disjoint(DEP, IND)
        dominates_credible((DEP, IND), IdmConfig(), cp)  # may flip; only the implication is asserted

    def test_zero_r_is_expectation_level(self):
        rng = np.random.default_rng(7)
        cp = CredibleParams.from_r(0.0)
        for _ in range(30):
            c = chain_triple(rng, 30, rng.random(), rng.random())
            assert dominates_credible(c, IdmConfig(), cp) == dominates_shared(c)
            a, b = c.sum(axis=2), c.sum(axis=0)
            assert dominates_credible((a, b), IdmConfig(), cp) == dominates_disjoint(a, b)


def test_antisymmetry():
    rng = np.random.default_rng(8)
    for _ in range(200):
        n = int(rng.integers(1, 40))
        shape = tuple(int(x) for x in rng.integers(1, 4, 2))
        a = rng.multinomial(n, rng.dirichlet(np.full(shape[0] * shape[1], 0.5))).reshape(shape)
        b = rng.multinomial(n, rng.dirichlet(np.ones(4))).reshape(2, 2)
        assert not (dominates_disjoint(a, b) and dominates_disjoint(b, a))
        c = chain_triple(rng, n, rng.random(), rng.random())
        assert not (dominates_shared(c) and dominates_shared(c.transpose(2, 1, 0)))
