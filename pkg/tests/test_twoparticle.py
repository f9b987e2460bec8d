import numpy as np
import pytest

from qwalk import core
from qwalk import twoparticle as tp

from .conftest import THETA_GRID

PI = np.pi
SQ = np.sqrt(0.5)


# -- setup -------------------------------------------------------------------


def test_init_pair():
    a, b = tp.init_pair(20)
    assert (a.orientation, a.origin, a[0, 0]) == (tp.FORWARD, (0, 0), (1 + 0j, 0j))
    assert (b.orientation, b.origin, b[20, 20]) == (tp.BACKWARD, (20, 20), (1 + 0j, 0j))
    assert a.norm() == b.norm() == 1.0


@pytest.mark.parametrize("j", [0, -2])
def test_init_rejects_nonpositive_size(j):
    with pytest.raises(ValueError):
        tp.init_pair(j)


def test_flip_protocol_needs_even_size():
    with pytest.raises(ValueError):
        tp.init_pair(3, flip_protocol=True)
    with pytest.raises(ValueError):
        tp.evolve_with_flip(tp.init_pair(3), PI / 4, 3)


def test_statistics_aliases():
    assert tp.normalize_statistics("dist") == "distinguishable"
    assert tp.normalize_statistics("Bosons") == "boson"
    with pytest.raises(ValueError):
        tp.normalize_statistics("anyon")


# -- stepping ----------------------------------------------------------------


def test_forward_step_from_down():
    a = tp.step_walker(tp.Walker2D.at(0, 0), PI / 4)
    assert a[1, 0] == pytest.approx((SQ, 0), abs=1e-15)
    assert a[0, 1] == pytest.approx((0, SQ), abs=1e-15)
    assert a.support() == {(1, 0), (0, 1)}


def test_backward_step_from_down():
    b = tp.step_walker(tp.Walker2D.at(20, 20, orientation=tp.BACKWARD), PI / 4)
    assert b[19, 20] == pytest.approx((SQ, 0), abs=1e-15)
    assert b[20, 19] == pytest.approx((0, SQ), abs=1e-15)


def test_theta_zero_is_deterministic():
    # B(0) = diag(1, -1): a down walker keeps its spin and moves along +x
    a = tp.evolve_pair(tp.init_pair(6), 0.0, 4).a
    assert a.support() == {(4, 0)}
    assert a[4, 0] == (1 + 0j, 0j)


@pytest.mark.parametrize("theta", THETA_GRID)
def test_norm_and_diagonal_support(theta):
    j = 12
    pair = tp.init_pair(j)
    for t in range(1, j + 1):
        pair = tp.step_pair(pair, theta)
        for w in pair:
            assert abs(w.norm() - 1) < 1e-12
        assert all(x + y == t for x, y in pair.a.support())
        assert all(x + y == 2 * j - t for x, y in pair.b.support())


def test_walkers_meet_at_t_equal_j():
    j = 10
    pair = tp.init_pair(j)
    for t in range(1, j + 1):
        pair = tp.step_pair(pair, PI / 4)
        shared = pair.a.support() & pair.b.support()
        assert bool(shared) == (t == j)
    assert pair.a.support() == pair.b.support()


@pytest.mark.parametrize("theta", THETA_GRID)
def test_diagonal_reduction_to_line_walk(theta):
    t = 30
    pair = tp.evolve_pair(tp.init_pair(t), theta, t)
    line = core.position_distribution(core.evolve(core.initial_state(0, core.DOWN), theta, t))
    fwd = tp.diagonal_marginal(pair.a, (0, 0))
    bwd = tp.diagonal_marginal(pair.b, (t, t))
    for u in range(-t, t + 1):
        assert fwd.get(u, 0.0) == pytest.approx(line[-u], abs=1e-12)
        assert bwd.get(u, 0.0) == pytest.approx(line[u], abs=1e-12)


def test_flip_swaps_components():
    w = tp.step_walker(tp.Walker2D.at(0, 0), PI / 5)
    f = tp.flip_walker(w)
    np.testing.assert_array_equal(f.down, w.up)
    np.testing.assert_array_equal(f.up, w.down)


def test_flip_at_theta_zero_focuses_both_walkers():
    pair = tp.evolve_with_flip(tp.init_pair(4, True), 0.0, 4)
    assert pair.a.support() == pair.b.support() == {(2, 2)}
    # two up-steps each pick up a factor -1
    assert pair.a[2, 2] == pair.b[2, 2] == (0j, 1 + 0j)


def test_flip_concentrates_at_centre():
    j = 20
    with_flip = tp.joint_distribution(tp.evolve_with_flip(tp.init_pair(j, True), PI / 4, j))
    without = tp.joint_distribution(tp.evolve_pair(tp.init_pair(j), PI / 4, j))
    assert with_flip.block_total(10, 10) / 2 == pytest.approx(0.7060775756835933, abs=1e-12)
    assert with_flip.site_total(10, 10) / 2 == pytest.approx(0.5906448364257808, abs=1e-12)
    assert without.block_total(10, 10) / 2 == pytest.approx(0.09233856201171864, abs=1e-12)
    anti = [without.site_total(x, j - x) / 2 for x in range(j + 1)]
    assert np.mean(anti) == pytest.approx(1 / 21, abs=1e-12)


# -- joint statistics --------------------------------------------------------


def _met(j=20, theta=PI / 4):
    return tp.evolve_pair(tp.init_pair(j), theta, j)


def test_distinguishable_is_sum_of_walkers():
    pair = _met(8, PI / 3)
    d = tp.joint_distribution(pair, "dist")
    assert d.total().sum() == pytest.approx(2.0, abs=1e-12)
    assert not np.any(d.p_du)
    for site, p in tp.walker_distribution(pair.a).items():
        assert d.site_total(*site) == pytest.approx(p + tp.walker_distribution(pair.b).get(site, 0.0), abs=1e-15)


@pytest.mark.parametrize("stats", ["boson", "fermion"])
def test_indistinguishable_normalized(stats):
    d = tp.joint_distribution(_met(), stats)
    assert d.total().sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(d.total() >= 0)


@pytest.mark.parametrize("stats", ["boson", "fermion"])
def test_disjoint_supports_rejected(stats):
    with pytest.raises(tp.DisjointSupportError):
        tp.joint_distribution(tp.evolve_pair(tp.init_pair(20), PI / 4, 5), stats)


def test_pauli_zero_normalizer():
    # both walkers end purely spin-up on the same site: no down-up channel
    pair = tp.evolve_with_flip(tp.init_pair(4, True), 0.0, 4)
    with pytest.raises(tp.UndefinedStatisticsError) as info:
        tp.joint_distribution(pair, "fermion")
    assert not isinstance(info.value, tp.DisjointSupportError)
    assert tp.joint_distribution(pair, "boson")[2, 2] == (0.0, 1.0, 0.0)


def test_mismatched_times_rejected():
    a, b = tp.init_pair(6)
    with pytest.raises(ValueError):
        tp.joint_distribution(tp.WalkerPair(tp.step_walker(a, 0.3), b), "boson")


@pytest.mark.parametrize("stats", tp.STATISTICS)
def test_label_exchange_invariance(stats):
    pair = _met(14, PI / 5)
    d1 = tp.joint_distribution(pair, stats)
    d2 = tp.joint_distribution(tp.WalkerPair(pair.b, pair.a), stats)
    assert d1.origin == d2.origin
    for name in ("p_dd", "p_uu", "p_du"):
        np.testing.assert_array_equal(getattr(d1, name), getattr(d2, name))


def test_fermion_channel_proportional_to_boson_du():
    pair = _met()
    b = tp.joint_distribution(pair, "boson")
    f = tp.joint_distribution(pair, "fermion")
    mask = b.p_du > 0
    ratio = f.p_du[mask] / b.p_du[mask]
    np.testing.assert_allclose(ratio, ratio[0], rtol=1e-12)
    assert not np.any(f.p_du[~mask])


@pytest.mark.parametrize(
    "site, boson, fermion_du",
    [
        ((4, 16), (0.06070389969527721, 0.014529979870925913, 0.07160026212905342), 0.11158367386944731),
        ((7, 13), (0.023450812536038118, 0.00011744832976628598, 0.0038742407455987222), 0.006037715547317752),
        ((10, 10), (0.0044610522315966916, 0.004461052231596641, 0.008922104463193333), 0.013904435054381369),
    ],
)
def test_pinned_channel_values(site, boson, fermion_du):
    pair = _met()
    assert tp.joint_distribution(pair, "boson")[site] == pytest.approx(boson, abs=1e-14)
    assert tp.joint_distribution(pair, "fermion")[site] == pytest.approx((0, 0, fermion_du), abs=1e-14)


def test_rows_are_row_major_and_drop_zeros():
    d = tp.joint_distribution(_met(6), "boson")
    rows = list(d.rows())
    keys = [(x, y) for x, y, *_ in rows]
    assert keys == sorted(keys)
    assert all(x + y == 6 for x, y in keys)
    assert all(dd or uu or du for *_, dd, uu, du in rows)
