from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tvlab.cyclo import order, parse_point, split_level, sym
from tvlab.local_field import tower_for_level
from tvlab.scan import (
    CSV_COLUMNS,
    cross_check_point,
    decomposition_coset_reps,
    demo_habegger,
    enum_torsion,
    norm_valuation,
    point_distance,
    scan_gap,
    scan_orders,
)
from tvlab.torus import DistanceValue, Subvariety, coordinate_point_variety, linear_variety

LINE = linear_variety(2, [((1, 0), 1), ((0, 1), 1), ((0, 0), -1)])


def test_enum_torsion_counts():
    pts = list(enum_torsion(1, 6))
    assert len(pts) == 1 + 1 + 2 + 2 + 4 + 2
    assert len(set(pts)) == len(pts)
    # G_m^2: number of points of order dividing m is m^2
    assert len(list(enum_torsion(2, 12))) == sum(j for j in [
        sum(1 for a in range(m) for b in range(m) if math.gcd(math.gcd(a, b), m) == 1) for m in range(1, 13)])


def test_filters():
    assert scan_orders(12, 3, "unramified") == [1, 2, 4, 5, 7, 8, 10, 11]
    assert scan_orders(12, 3, "p-primary") == [1, 3, 9]
    assert scan_orders(12, 3, "mixed") == [6, 12]
    assert scan_orders(30, 3, max_p_level=1, max_tame_order=4) == [1, 2, 3, 4, 6, 12]
    with pytest.raises(ValueError):
        scan_orders(10, None, "mixed")
    with pytest.raises(ValueError):
        scan_orders(0)


@given(st.integers(1, 200), st.sampled_from([2, 3, 5, 7]))
def test_coset_reps_cover_the_quotient(m, p):
    """Reps are units, 1 mod p^k, and hit each <p>-orbit of (Z/m')^* once."""
    k, tame = split_level(m, p)
    reps = decomposition_coset_reps(m, p)
    assert all(math.gcd(u, m) == 1 and u % p ** k == 1 % p ** k for u in reps)
    orbits = set()
    for u in reps:
        orb = frozenset((u * p ** j) % tame for j in range(tame + 1))
        assert orb not in orbits
        orbits.add(orb)
    units = sum(1 for u in range(tame) if math.gcd(u, tame) == 1)
    assert sum(len(o) for o in orbits) == units


def test_norm_valuation_examples():
    # 1 - zeta_p has norm p
    assert norm_valuation([(1, Fraction(0)), (-1, Fraction(1, 5))], 5, 5) == 1
    # 1 - zeta_9 has norm 3
    assert norm_valuation([(1, Fraction(0)), (-1, Fraction(1, 9))], 9, 3) == 1
    # 1 - zeta_6 is a unit
    assert norm_valuation([(1, Fraction(0)), (-1, Fraction(1, 6))], 6, 3) == 0
    assert norm_valuation([(1, Fraction(1, 3)), (1, Fraction(2, 3)), (1, Fraction(0))], 3, 3) is None


@settings(max_examples=40)
@given(st.integers(1, 30), st.integers(0, 29), st.integers(0, 29), st.sampled_from([3, 5, 7]))
def test_tower_agrees_with_exact_norm(m, a, b, p):
    P = (sym(a, m), sym(b, m))
    r = cross_check_point(P, LINE, p, 20)
    assert r["ok"]
    assert r["member"] == (P in {parse_point("1/6,5/6"), parse_point("5/6,1/6")})


def test_point_distance_examples():
    spec = tower_for_level(7, 3)
    assert point_distance(parse_point("0,0"), LINE, 7, spec) == DistanceValue.val(0)
    spec = tower_for_level(7, 6)
    assert point_distance(parse_point("1/6,5/6"), LINE, 7, spec).is_member
    X = coordinate_point_variety((Fraction(0),))
    spec = tower_for_level(5, 5)
    assert point_distance(parse_point("1/5"), X, 5, spec) == DistanceValue.val(Fraction(1, 4))


def test_scan_small_and_csv():
    rep = scan_gap(LINE, 7, 12, 12, max_p_level=1)
    assert rep.members == [parse_point("1/6,5/6"), parse_point("5/6,1/6")]
    assert rep.min_distance == DistanceValue.val(1)
    assert rep.witness == parse_point("2/3,2/3")
    lines = rep.to_csv().strip().split("\n")
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) - 1 == rep.scanned == len(list(enum_torsion(2, 12, p=7, max_p_level=1)))
    s = rep.summary()
    assert s["member_count"] == 2 and s["stable_at_half_bound"] is True


def test_scan_rows_are_in_order():
    rep = scan_gap(LINE, 5, 10, 10)
    orders = [order(P) for P, _ in rep.rows]
    assert orders == sorted(orders)


def test_workers_are_deterministic():
    a = scan_gap(LINE, 5, 14, 10, workers=1)
    b = scan_gap(LINE, 5, 14, 10, workers=3)
    assert a.to_csv() == b.to_csv() and a.to_json() == b.to_json()


def test_all_embeddings_never_farther():
    a = scan_gap(LINE, 7, 14, 10, max_p_level=1)
    b = scan_gap(LINE, 7, 14, 10, max_p_level=1, all_embeddings=True)
    for (P, d1), (Q, d2) in zip(a.rows, b.rows):
        assert P == Q and d2.closeness_key() <= d1.closeness_key()


def test_mattuck_line_in_gm1():
    X = coordinate_point_variety((Fraction(0),))
    rep = scan_gap(X, 5, 30, 12)
    assert rep.min_distance == DistanceValue.val(Fraction(1, 4))
    assert rep.witness == parse_point("1/5")


def test_habegger_rows():
    rows = demo_habegger(3, 5)
    assert [r.v_exact for r in rows] == [1, 2, 3, 4, 5]
    assert all(r.ok for r in rows)
    with pytest.raises(ValueError):
        demo_habegger(2, 3)
    with pytest.raises(ValueError):
        demo_habegger(5, 9)
