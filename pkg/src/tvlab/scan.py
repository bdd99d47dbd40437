"""Torsion enumeration and gap scans against a subvariety of G_m^n."""
from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from sympy import Poly, ZZ, cyclotomic_poly, symbols

from .cyclo import cyc_sum, format_point, multiplicative_order, order, split_level
from .local_field import DEFAULT_PRECISION, habegger_valuations, tower_for_level, valuation, vp_int
from .local_field import embed_root
from .torus import DistanceValue, Subvariety, generator_terms, points_of_exact_order

FILTERS = ("all", "unramified", "p-primary", "mixed")
CSV_COLUMNS = ("order", "point", "distance_kind", "val_num", "val_den")


def order_admitted(m: int, p: int | None, filter: str = "all",
                   max_p_level: int | None = None, max_tame_order: int | None = None) -> bool:
    if filter not in FILTERS:
        raise ValueError(f"filter must be one of {FILTERS}")
    if p is None:
        if filter != "all" or max_p_level is not None or max_tame_order is not None:
            raise ValueError("filters and level caps need a prime")
        return True
    k, tame = split_level(m, p)
    if max_p_level is not None and k > max_p_level:
        return False
    if max_tame_order is not None and tame > max_tame_order:
        return False
    if filter == "unramified":
        return k == 0
    if filter == "p-primary":
        return tame == 1
    if filter == "mixed":
        return k > 0 and tame > 1
    return True


def scan_orders(B: int, p: int | None = None, filter: str = "all",
                max_p_level: int | None = None, max_tame_order: int | None = None) -> list[int]:
    if B < 1:
        raise ValueError("order bound must be >= 1")
    return [m for m in range(1, B + 1) if order_admitted(m, p, filter, max_p_level, max_tame_order)]


def enum_torsion(n: int, B: int, filter: str = "all", p: int | None = None,
                 max_p_level: int | None = None, max_tame_order: int | None = None):
    """Torsion points of G_m^n of order <= B, each once, by (order, numerators)."""
    for m in scan_orders(B, p, filter, max_p_level, max_tame_order):
        yield from points_of_exact_order(n, m)


# ---------------------------------------------------------------------------
# embeddings

def decomposition_coset_reps(m: int, p: int) -> list[int]:
    """Representatives of (Z/m)^* modulo the decomposition group <p> x (Z/p^k)^*.

    Each representative is the smallest unit u mod m' of its <p>-orbit,
    lifted to Z/m by u mod m' and 1 mod p^k.
    """
    k, tame = split_level(m, p)
    pk = p ** k
    if m == 1:
        return [1]
    seen = set()
    reps = []
    for u in range(tame):
        if math.gcd(u, tame) != 1 or u in seen:
            continue
        seen |= {(u * pow(p, j, tame)) % tame for j in range(multiplicative_order(p, tame))}
        reps.append((u * pk * pow(pk, -1, tame) + tame * pow(tame, -1, pk)) % m)
    return sorted(reps)


def conjugate_terms(terms, u: int):
    return [(k, s * u - math.floor(s * u)) for k, s in terms]


def _terms_valuation(terms, spec) -> DistanceValue:
    acc = spec.zero()
    for scale, root in terms:
        acc = acc + embed_root(root, spec) * scale
    v = valuation(acc)
    return DistanceValue.below_precision() if v.value is None else DistanceValue.val(v.value)


def point_distance(P, X: Subvariety, p: int, spec, all_embeddings: bool = False) -> DistanceValue:
    """Distance from P to X; with all_embeddings, the closest over every embedding."""
    live = [generator_terms(g, P) for g in X.generators]
    live = [t for t in live if not cyc_sum(t).is_zero()]
    if not live:
        return DistanceValue.member()
    us = decomposition_coset_reps(spec.level, p) if all_embeddings else [1]
    best = None
    for u in us:
        d = None
        for terms in live:
            dv = _terms_valuation(conjugate_terms(terms, u), spec)
            d = dv if d is None else (dv if dv.closeness_key() > d.closeness_key() else d)
        if best is None or d.closeness_key() < best.closeness_key():
            best = d
    return best


# ---------------------------------------------------------------------------
# independent evaluator: exact norms and sympy membership

_T = symbols("T")


def _as_poly(terms, m: int) -> Poly:
    coeffs = [0] * m
    for k, s in terms:
        coeffs[int(s * m) % m] += k
    return Poly(list(reversed(coeffs)), _T, domain=ZZ)


def norm_valuation(terms, m: int, p: int) -> int | None:
    """v_p of the absolute norm of sum scale * zeta_m^root, via Res(Phi_m, A); None if zero."""
    A = _as_poly(terms, m)
    Phi = Poly(cyclotomic_poly(m, _T), _T, domain=ZZ)
    if A.rem(Phi).is_zero:
        return None
    return vp_int(int(Phi.resultant(A)), p)


def cross_check_point(P, X: Subvariety, p: int, N: int = DEFAULT_PRECISION) -> dict:
    """Compare tower valuations summed over embeddings with v_p of the exact norm.

    v_p(Norm g(P)) = e f * sum over coset representatives u of v(sigma_u g(P)).
    Membership is rechecked by polynomial division over Z.
    """
    m = math.lcm(order(P), X.level())
    spec = tower_for_level(p, m, N)
    reps = decomposition_coset_reps(m, p)
    ok = True
    member = True
    for g in X.generators:
        terms = generator_terms(g, P)
        exact = norm_valuation(terms, m, p)
        tower_zero = cyc_sum(terms).is_zero()
        if (exact is None) != tower_zero:
            ok = False
            continue
        if exact is None:
            continue
        member = False
        total = Fraction(0)
        for u in reps:
            v = _terms_valuation(conjugate_terms(terms, u), spec)
            if v.kind != "val":
                ok = False
                break
            total += v.value
        else:
            if total * spec.e * spec.f != exact:
                ok = False
    return {"point": P, "ok": ok, "member": member}


# ---------------------------------------------------------------------------
# scan reports

def _scan_order(args) -> tuple[int, list, dict]:
    X, p, m, N, all_embeddings = args
    spec = tower_for_level(p, math.lcm(m, X.level()), N)
    rows = []
    hist = Counter()
    for P in points_of_exact_order(X.n, m):
        d = point_distance(P, X, p, spec, all_embeddings)
        rows.append((P, d))
        hist[str(d)] += 1
    return m, rows, dict(hist)


def _better(a, b) -> bool:
    """a strictly closer than b, ties broken by earlier (order, point)."""
    if b is None:
        return True
    ka, kb = a[1].closeness_key(), b[1].closeness_key()
    if ka != kb:
        return ka < kb
    return (order(a[0]), a[0]) < (order(b[0]), b[0])


@dataclass
class ScanReport:
    prime: int
    precision: int
    bound: int
    max_p_level: int | None
    max_tame_order: int | None
    all_embeddings: bool
    scanned: int
    members: list
    min_distance: DistanceValue | None
    witness: tuple | None
    histogram: dict
    rows: list = field(default_factory=list, repr=False)
    half_bound_min: DistanceValue | None = None
    stable: bool | None = None
    below_precision: int = 0

    @property
    def member_count(self) -> int:
        return len(self.members)

    def summary(self) -> dict:
        md = self.min_distance
        return {
            "prime": self.prime,
            "precision": self.precision,
            "order_bound": self.bound,
            "max_p_level": self.max_p_level,
            "max_tame_order": self.max_tame_order,
            "all_embeddings": self.all_embeddings,
            "scanned": self.scanned,
            "member_count": self.member_count,
            "members": [format_point(P) for P in self.members],
            "below_precision": self.below_precision,
            "min_distance": None if md is None else {"kind": md.kind, "value": None if md.value is None else str(md.value)},
            "witness": None if self.witness is None else format_point(self.witness),
            "half_bound_min": None if self.half_bound_min is None else str(self.half_bound_min),
            "stable_at_half_bound": self.stable,
            "histogram": {str(m): h for m, h in sorted(self.histogram.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for P, d in self.rows:
            num = den = ""
            if d.kind == "val":
                num, den = d.value.numerator, d.value.denominator
            w.writerow((order(P), format_point(P), d.kind, num, den))
        return buf.getvalue()


def _reduce(chunks: Iterable[tuple[int, list, dict]], bound_filter=None):
    """Deterministic reduction over per-order chunks (order-independent result)."""
    rows, members, hist = [], [], {}
    best = None
    below = 0
    for m, chunk_rows, chunk_hist in sorted(chunks, key=lambda c: c[0]):
        if bound_filter is not None and m > bound_filter:
            continue
        hist[m] = chunk_hist
        for P, d in chunk_rows:
            rows.append((P, d))
            if d.is_member:
                members.append(P)
            elif d.kind == "below_precision":
                below += 1
            elif best is None or _better((P, d), best):
                best = (P, d)
    return rows, members, hist, best, below


def scan_gap(X: Subvariety, p: int, B: int, N: int = DEFAULT_PRECISION, *,
             filter: str = "all", max_p_level: int | None = None, max_tame_order: int | None = None,
             all_embeddings: bool = False, workers: int = 1, stabilization: bool = True) -> ScanReport:
    """Scan torsion points of order <= B; report members and the closest non-member.

    Points that cannot be separated from X at precision N are counted as
    below_precision and excluded from the minimum.
    """
    orders = scan_orders(B, p, filter, max_p_level, max_tame_order)
    jobs = [(X, p, m, N, all_embeddings) for m in orders]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            chunks = list(ex.map(_scan_order, jobs))
    else:
        chunks = [_scan_order(j) for j in jobs]
    rows, members, hist, best, below = _reduce(chunks)
    report = ScanReport(
        prime=p, precision=N, bound=B, max_p_level=max_p_level, max_tame_order=max_tame_order,
        all_embeddings=all_embeddings, scanned=len(rows), members=members,
        min_distance=None if best is None else best[1], witness=None if best is None else best[0],
        histogram=hist, rows=rows, below_precision=below)
    if stabilization:
        half = _reduce(chunks, bound_filter=B // 2)[3]
        report.half_bound_min = None if half is None else half[1]
        report.stable = report.half_bound_min == report.min_distance
    return report


# ---------------------------------------------------------------------------

@dataclass
class HabeggerRow:
    n: int
    exponent: int
    v_exact: int
    v_tower: Fraction
    digits_agree: bool

    @property
    def ok(self) -> bool:
        return self.digits_agree and self.v_exact == self.v_tower and self.v_exact >= self.n


def demo_habegger(p: int, n_max: int) -> list[HabeggerRow]:
    """v_p(2^((p-1)p^(n-1)) - 1) >= n: powers of 2 accumulate at 1 in Q_p."""
    if p == 2 or p < 2:
        raise ValueError("p must be an odd prime")
    if not 1 <= n_max <= 8:
        raise ValueError("n_max must lie in 1..8")
    return [HabeggerRow(**r) for r in habegger_valuations(p, n_max)]
