from fractions import Fraction as F

import pytest

import lipsetlab as ll

QUARTER = "geom:1,1/4"


def test_interval_algebra():
    assert ll.normalize([(2, 5), (0, 1), (4, 6)]) == [(0, 1), (2, 6)]
    assert ll.union([(0, 1), (2, 3)], [(F(1, 2), F(5, 2))]) == [(0, 3)]
    assert ll.difference([(0, 3)], [(1, 2)]) == [(0, 1), (2, 3)]
    assert ll.measure_in([(0, 1), (2, 5)], (F(1, 2), 3)) == F(3, 2)
    assert ll.symdiff_measure([(0, 1), (2, 3)], [("1/2", "5/2")]) == 2
    assert ll.measure([]) == 0


def test_cantor_stage_and_params():
    assert ll.cantor_stage(QUARTER, 1) == [(0, F(3, 8)), (F(5, 8), 1)]
    assert ll.measure(ll.cantor_stage(QUARTER, 3)) == F(2835, 4096)
    p = ll.cantor_params(QUARTER, 1, 10)
    assert F(p["d_n"]) == F(3, 8)
    assert F(p["delta_n"]) == F(3, 16)


def test_oracle_bounds():
    lo, hi = ll.bounds(ll.cantor_oracle(QUARTER), (0, 1), 3)
    assert hi == F(2835, 4096)
    assert lo >= F(2835, 4096) * (1 - F(1, 192))
    assert ll.bounds([(0, 1)], (0, 2)) == (1, 1)


def test_density():
    assert ll.side_density([(0, 1)], 0, F(1, 2), "right") == (1, 1)
    v = ll.egd_member([(0, 1)], F(-1, 16), F(1, 2), F(1, 4))
    assert v["status"] == "nonmember"
    assert F(v["witness_r"]) == F(1, 16)
    with pytest.raises(ll.NotFoundError):
        ll.wnd_witness([(0, 1)], (0, 1), F(1, 2), 8)


def test_pl():
    f = [(0, 0), (1, 1), (2, 1)]
    assert ll.pl_eval(f, F(3, 2)) == 1
    assert ll.mf(f, 1, F(1, 2)) == 1
    assert ll.lip([(-1, 1), (0, 0), (1, 1)], 0) == 1
    assert ll.sup_norm_diff([(0, 0), (2, 2)], [(0, 0), (1, 1), (2, 0)]) == 2


def test_builder():
    stages = ll.build([(0, 1)], (-1, 2), 2, k_max=3)
    assert [s["n"] for s in stages] == [0, 1, 2]
    rep = ll.verify([(0, 1)], (-1, 2), 3, k_max=3, samples=50)
    passed = {c["name"]: c["pass"] for c in rep["conditions"]}
    assert passed["C"] and passed["F"] and passed["G"] and passed["Cauchy"]
    f, bound = ll.limit([(0, 1)], (-1, 2), 4, k_max=3)
    assert bound == F(1, 4)
    for (x0, y0), (x1, y1) in zip(f, f[1:]):
        assert abs(y1 - y0) <= x1 - x0


def test_errors():
    with pytest.raises(ll.ParseError):
        ll.cantor_stage("geom:1", 1)
    with pytest.raises(ll.ResourceError):
        ll.cantor_stage(QUARTER, 30)
    with pytest.raises(TypeError):
        ll.measure([(0.5, 1)])


def test_quick_acceptance():
    rows = ll.run_acceptance(only=[1, 3, 7])
    assert [r["id"] for r in rows] == [1, 3, 7]
    assert all(r["pass"] for r in rows)
