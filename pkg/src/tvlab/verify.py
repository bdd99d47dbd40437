"""Acceptance criteria as named, exact checks, plus the verify-all driver."""
from __future__ import annotations

import json
import math
import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import product

from .boxall import (
    FiniteModule,
    GaloisAction,
    boxall_construct,
    boxall_oracle,
    check_hypotheses,
)
from .cosets import (
    TorsionCoset,
    TorsionSubscheme,
    companion,
    image,
    product_subscheme,
    torsion_core,
    core_of,
)
from .cyclo import GaloisElement, format_point, sym
from .galois_poly import (
    boxall_congruence,
    cyclotomic_factor_free,
    minimal_multiplier,
    tame_membership,
)
from .intpoly import IntPolynomial, cyclotomic
from .scan import cross_check_point, demo_habegger, enum_torsion, scan_gap
from .special_fibre import (
    EllipticCurveFq,
    all_smooth_curves,
    ec_frobenius_annihilate,
    ec_point_count,
    gm_frobenius_identity,
)
from .torus import (
    DistanceValue,
    Subvariety,
    Term,
    distance_intersection_law,
    galois_distance_invariance,
    linear_variety,
    mattuck_gap,
    pullback_distance,
    translation_law,
)

T = IntPolynomial.T()


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float = 0.0
    budget: float | None = None
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        budget = f" (budget {self.budget:g}s)" if self.budget else ""
        return f"[{status}] {self.number}. {self.name}: {self.seconds:.2f}s{budget}"


def _timed(number, name, budget, fn, *args) -> CriterionResult:
    t0 = time.perf_counter()
    try:
        ok, details = fn(*args)
    except AssertionError as exc:
        ok, details = False, {"error": f"assertion: {exc}"}
    dt = time.perf_counter() - t0
    if budget is not None and dt > budget:
        details = dict(details, over_budget=True)
        ok = False
    return CriterionResult(number, name, ok, dt, budget, details)


# ---------------------------------------------------------------------------
# 1. discreteness gap

def check_mattuck(primes=(3, 5, 7), B: int = 100):
    rows = {}
    ok = True
    for p in primes:
        r = mattuck_gap(p, 1, B)
        want = DistanceValue.val(Fraction(1, p - 1))
        witness_ok = r.witness == ((Fraction(0),), (Fraction(1, p),))
        rows[p] = {"gap": str(r.gap), "witness": [format_point(P) for P in r.witness]}
        ok &= r.gap == want and witness_ok
    return ok, rows


# ---------------------------------------------------------------------------
# 2. Tate-Voloch scan

LINE = linear_variety(2, [((1, 0), 1), ((0, 1), 1), ((0, 0), -1)])


def check_gap_scan(B: int = 60, p: int = 7, max_p_level: int = 2, N: int = 20,
                   cross_bound: int = 30, stride: int = 97, X: Subvariety = LINE):
    full = scan_gap(X, p, B, N, max_p_level=max_p_level)
    half = scan_gap(X, p, B // 2, N, max_p_level=max_p_level, stabilization=False)
    expected = [(sym(1, 6), sym(5, 6)), (sym(5, 6), sym(1, 6))]
    members_ok = sorted(full.members) == sorted(expected)
    positive = full.min_distance is not None and full.min_distance.kind == "val" and full.below_precision == 0
    stable = half.min_distance == full.min_distance and full.stable
    # independent evaluator: every point of order <= cross_bound, a stride sample
    # above it, and the witness
    sample = [P for P, _ in full.rows if max(s.denominator for s in P) <= cross_bound]
    sample += [P for i, (P, _) in enumerate(full.rows) if i % stride == 0]
    if full.witness is not None:
        sample.append(full.witness)
    dist = dict(full.rows)
    mismatches = 0
    for P in dict.fromkeys(sample):
        c = cross_check_point(P, X, p, N)
        if not c["ok"] or c["member"] != dist[P].is_member:
            mismatches += 1
    ok = members_ok and positive and stable and mismatches == 0
    return ok, {
        "scanned": full.scanned,
        "members": [format_point(P) for P in full.members],
        "min_distance": str(full.min_distance),
        "witness": None if full.witness is None else format_point(full.witness),
        "min_at_half_bound": str(half.min_distance),
        "cross_checked": len(set(sample)),
        "cross_check_mismatches": mismatches,
    }


# ---------------------------------------------------------------------------
# 3. powers of 2 accumulating at 1

def check_habegger(primes=(3, 5), n_max: int = 6):
    out = {}
    ok = True
    for p in primes:
        rows = demo_habegger(p, n_max)
        out[p] = [(r.n, r.v_exact, str(r.v_tower), r.digits_agree) for r in rows]
        ok &= all(r.ok for r in rows)
    return ok, out


# ---------------------------------------------------------------------------
# 4. distance calculus

def _random_point(rng, n, level):
    return tuple(sym(rng.randrange(level), level) for _ in range(n))


def _random_variety(rng, n, level, gens=None):
    gens = gens or rng.randint(1, 2)
    out = []
    for _ in range(gens):
        terms = []
        for _ in range(rng.randint(1, 3)):
            exps = tuple(rng.randint(-2, 2) for _ in range(n))
            terms.append(Term(exps, rng.choice((1, -1, 2, 3)), sym(rng.randrange(level), level)))
        out.append(tuple(terms))
    return Subvariety(n, tuple(out))


def _random_unimodular_or_isogeny(rng, n):
    while True:
        B = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        if n == 1 and B[0][0] != 0:
            return B
        if n == 2 and B[0][0] * B[1][1] - B[0][1] * B[1][0] != 0:
            return B


def check_distance_calculus(count: int = 1000, seed: int = 20240601):
    rng = random.Random(seed)
    fails = {"intersection": 0, "pullback": 0, "galois": 0, "translation": 0}
    for _ in range(count):
        p = rng.choice((3, 5, 7))
        n = rng.randint(1, 2)
        tame = rng.choice((1, 2, 4))
        k = rng.randint(0, 1)
        level = p ** k * tame
        P = _random_point(rng, n, level)
        Q = _random_point(rng, n, level)
        X = _random_variety(rng, n, level)
        Y = _random_variety(rng, n, level)
        # occasionally force membership so the member branch is exercised
        if rng.random() < 0.15:
            t = X.generators[0][0]
            root = t.root + sum(e * s for e, s in zip(t.exps, P))
            X = Subvariety(n, ((Term(t.exps, 1, t.root), Term((0,) * n, -1, root)),) + X.generators[1:])
        lhs, rhs = distance_intersection_law(P, X, Y, p)
        fails["intersection"] += lhs != rhs
        B = _random_unimodular_or_isogeny(rng, n)
        lhs, rhs = pullback_distance(B, Y, P, p)
        fails["pullback"] += lhs != rhs
        sigma = GaloisElement(p, k, tame, rng.randrange(8), rng.choice([u for u in range(1, p ** k + 1) if u % p]))
        lhs, rhs = galois_distance_invariance(sigma, P, X)
        fails["galois"] += lhs != rhs
        lhs, rhs = translation_law(P, Q, X, p)
        fails["translation"] += lhs != rhs
    return not any(fails.values()), {"instances": count, "failures": fails}


# ---------------------------------------------------------------------------
# 5. the Z engine

def brute_force_core(X_points, n: int, F: IntPolynomial):
    """Largest subset S of (X_points)^d with M(S) = S, by pruning a finite set."""
    data = companion(F, n)
    M = data.action
    size = n * data.d
    S = {tuple(c for part in combo for c in part) for combo in product(X_points, repeat=data.d)}

    def apply(P):
        return tuple(sym(sum(M[i][j] * P[j] for j in range(size))) for i in range(size))

    while True:
        images = {P: apply(P) for P in S}
        hit = set(images.values())
        keep = {P for P in S if images[P] in S and P in hit}
        if keep == S:
            return S
        S = keep


def _random_finite_subscheme(rng, n, max_level=6):
    pts = set()
    for _ in range(rng.randint(1, 4)):
        lvl = rng.randint(1, max_level)
        pts.add(tuple(sym(rng.randrange(lvl), lvl) for _ in range(n)))
    return sorted(pts), TorsionSubscheme(n, [TorsionCoset.point(P) for P in pts])


def _random_subscheme(rng, n, max_components: int = 4):
    """Random union of torsion cosets with at most max_components irreducible pieces."""
    while True:
        cosets = []
        for _ in range(rng.randint(1, 2)):
            lvl = rng.randint(1, 6)
            shift = [sym(rng.randrange(lvl), lvl) for _ in range(n)]
            if rng.random() < 0.5:
                cosets.append(TorsionCoset.point(shift))
            else:
                rows = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(rng.randint(1, n))]
                cosets.append(TorsionCoset(n, rows, shift))
        Z = TorsionSubscheme(n, cosets)
        if len(Z.cosets) <= max_components:
            return Z


def _random_F(rng):
    while True:
        d = rng.randint(1, 2)
        coeffs = [rng.randint(-2, 2) for _ in range(d)] + [1]
        F = IntPolynomial(coeffs)
        if F(0) != 0:
            return F


def check_z_engine(count: int = 50, seed: int = 7):
    X = TorsionSubscheme(1, [TorsionCoset.subgroup(1, [[3]])])
    F = T ** 2 - T - 1
    res = torsion_core(X, F)
    Z_fib = {c.shift for c in res.Z.cosets}
    mu3 = [(sym(i, 3),) for i in range(3)]
    brute = brute_force_core(mu3, 1, F)
    expected = {(sym(a, 3), sym(b, 3)) for a in range(3) for b in range(3)}
    fib_ok = (len(res.Z.cosets) == 9 and all(c.dimension() == 0 for c in res.Z.cosets)
              and Z_fib == brute == expected)

    rng = random.Random(seed)
    fails = {"invariant": 0, "contained": 0, "idempotent": 0, "brute_force": 0}
    for i in range(count):
        n = rng.randint(1, 2) if i % 2 else 1
        F = _random_F(rng)
        finite = i % 2 == 0
        if finite:
            pts, X = _random_finite_subscheme(rng, n)
        else:
            X = _random_subscheme(rng, n)
        data = companion(F, n)
        r = torsion_core(X, F)
        Xd = product_subscheme([X] * data.d)
        fails["invariant"] += image(data.action, r.Z) != r.Z
        fails["contained"] += not r.Z.issubset(Xd)
        fails["idempotent"] += core_of(r.Z, data.action).Z != r.Z
        if finite:
            got = {c.shift for c in r.Z.cosets}
            fails["brute_force"] += got != brute_force_core(pts, n, F)
    ok = fib_ok and not any(fails.values())
    return ok, {"fibonacci_points": len(Z_fib), "fibonacci_brute_force": len(brute), "random": count,
                "failures": fails}


# ---------------------------------------------------------------------------
# 6. polynomial certificates

def check_polynomial_certificates():
    details = {}
    ok = True
    u = T - 1
    for m in range(1, 13):
        qm = boxall_congruence(m)
        ok &= qm * u ** 3 + u * m + u ** 2 * (m * (m - 1) // 2) == T ** m - 1
    details["boxall_congruence"] = "m=1..12 exact"
    c1 = minimal_multiplier(IntPolynomial.const(1), [T - 5, T - 1])
    c2 = minimal_multiplier(u, [u ** 3, T ** 3 - 1])
    ok &= c1.multiplier == 4 and c1.verify() and c2.multiplier == 3 and c2.verify()
    details["multipliers"] = [str(c1), str(c2)]
    tame = {}
    for q in (3, 5, 9, 27, 2, 4):
        tm = tame_membership(q)
        expect = q if q % 2 else 4 * q
        good = tm.claimed == expect and tm.claimed_certificate.verify() and tm.certificate.verify()
        ok &= good
        tame[q] = {"claimed": tm.claimed, "minimal": tm.certificate.multiplier, "ok": good}
    details["tame_membership"] = tame
    cases = [(T - 2, True), (T - 3, True), (T - 5, True), (cyclotomic(3), False),
             (T ** 2 - T - 1, True), (cyclotomic(1) * (T - 2), False)]
    cff = [cyclotomic_factor_free(F) == want for F, want in cases]
    ok &= all(cff)
    details["cyclotomic_factor_free"] = cff
    return ok, details


# ---------------------------------------------------------------------------
# 7. special fibre

def gm_identity_cases(limit: int = 10 ** 4):
    """Every (q, r) with q a prime power, q^r <= limit and r >= 1."""
    from .intpoly import prime_factors
    cases = []
    for q in range(2, limit + 1):
        if len(prime_factors(q)) != 1:
            continue
        r = 1
        while q ** r <= limit:
            cases.append((q, r))
            r += 1
    return cases


def check_special_fibre(hasse_qs=(5, 7, 11, 13), gm_limit: int = 10 ** 4, gm_cases=None):
    E = EllipticCurveFq(5, 1, 0)
    w = ec_point_count(E)
    ok = w.count == 4 and w.trace == 2 and w.F0 == T ** 2 - T * 2 + 5
    ann = [ec_frobenius_annihilate(E, r) for r in (1, 2, 3)]
    ok &= all(a["ok"] and a["points"] == a["expected_points"] for a in ann)
    hasse = 0
    for q in hasse_qs:
        for C in all_smooth_curves(q):
            wd = ec_point_count(C)
            ok &= wd.hasse_ok
            hasse += 1
    cases = gm_cases if gm_cases is not None else gm_identity_cases(gm_limit)
    gm_fail = [c for c in cases if not gm_frobenius_identity(*c)["ok"]]
    ok &= not gm_fail
    return ok, {"count": w.count, "trace": w.trace, "F0": str(w.F0),
                "annihilation": [(a["r"], a["points"]) for a in ann],
                "hasse_curves": hasse, "gm_fields": len(cases), "gm_failures": gm_fail}


# ---------------------------------------------------------------------------
# 8. Boxall

def random_boxall_instance(rng):
    """(A, action, Q) with hypotheses holding and Q not fixed; sigma = I + p N (I + 4N if p = 2)."""
    while True:
        p = rng.choice((2, 3, 5))
        rank = rng.randint(1, 2)
        exps = tuple(sorted((rng.randint(1, 3 if p > 2 else 4) for _ in range(rank)), reverse=True))
        A = FiniteModule(p, exps)
        if A.size() > 4000:
            continue
        c = 4 if p == 2 else p
        orders = A.orders
        # entries keep the map well defined: M_ij divisible by p^(n_i - n_j) when n_j < n_i
        M = []
        for i in range(rank):
            row = []
            for j in range(rank):
                scale = max(1, orders[i] // orders[j])
                row.append(int(i == j) + c * scale * rng.randrange(orders[i]))
            M.append(row)
        try:
            action = GaloisAction(A, [M])
        except ValueError:
            continue
        if not check_hypotheses(A, action):
            continue
        Q = tuple(rng.randrange(o) for o in orders)
        if action.fixes(Q):
            continue
        return A, action, Q


def check_boxall(count: int = 200, seed: int = 41):
    details = {}
    A9 = FiniteModule.parse("9")
    r9 = boxall_construct(A9, GaloisAction(A9, [[[4]]]), (1,))
    oracle9 = {(g.matrix, x) for g, x in boxall_oracle(A9, GaloisAction(A9, [[[4]]]), (1,))}
    ok9 = r9.sigma.matrix == ((4,),) and r9.x == (3,) and (((7,),), (6,)) in oracle9 and (((4,),), (3,)) in oracle9
    A27 = FiniteModule.parse("27")
    r27 = boxall_construct(A27, GaloisAction(A27, [[[4]]]), (1,))
    ok27 = r27.n == 2 and r27.sigma.matrix == ((10,),) and r27.x == (9,)
    A8 = FiniteModule.parse("8")
    ok8 = check_hypotheses(A8, GaloisAction(A8, [[[5]]]))
    details["worked"] = {"Z/9": ok9, "Z/27": ok27, "Z/8 x5 hypotheses": ok8}
    rng = random.Random(seed)
    fails = 0
    for _ in range(count):
        A, action, Q = random_boxall_instance(rng)
        r = boxall_construct(A, action, Q)
        valid = (A.sub(r.sigma(Q), Q) == r.x and A.scale(A.p, r.x) == A.zero and r.x != A.zero
                 and all(x == r.x for x in r.trace))
        in_oracle = any(g.matrix == r.sigma.matrix and x == r.x for g, x in boxall_oracle(A, action, Q))
        fails += not (valid and in_oracle)
    details["random"] = {"instances": count, "failures": fails}
    return ok9 and ok27 and ok8 and fails == 0, details


# ---------------------------------------------------------------------------

def run_criteria(quick: bool = False) -> list[CriterionResult]:
    if quick:
        plan = [
            (1, "Mattuck gap", 10, check_mattuck, (3, 5, 7), 30),
            (2, "Tate-Voloch gap scan", 60, check_gap_scan, 20, 7, 2, 20, 10),
            (3, "powers of 2 near 1", None, check_habegger, (3, 5), 4),
            (4, "distance calculus", None, check_distance_calculus, 100),
            (5, "Z engine", None, check_z_engine, 10),
            (6, "polynomial certificates", None, check_polynomial_certificates),
            (7, "special fibre", None, check_special_fibre, (5, 7), 10 ** 3),
            (8, "Boxall", None, check_boxall, 30),
        ]
    else:
        plan = [
            (1, "Mattuck gap", 10, check_mattuck),
            (2, "Tate-Voloch gap scan", 60, check_gap_scan),
            (3, "powers of 2 near 1", None, check_habegger),
            (4, "distance calculus", None, check_distance_calculus),
            (5, "Z engine", None, check_z_engine),
            (6, "polynomial certificates", None, check_polynomial_certificates),
            (7, "special fibre", None, check_special_fibre),
            (8, "Boxall", None, check_boxall),
        ]
    return [_timed(num, name, budget, fn, *args) for num, name, budget, fn, *args in plan]


TOTAL_BUDGET = 180.0


def verify_all(quick: bool = False) -> dict:
    t0 = time.perf_counter()
    results = run_criteria(quick)
    total = time.perf_counter() - t0
    within = quick or total <= TOTAL_BUDGET
    return {
        "quick": quick,
        "passed": all(r.passed for r in results) and within,
        "seconds": round(total, 3),
        "budget_seconds": TOTAL_BUDGET,
        "criteria": [dict(asdict(r), seconds=round(r.seconds, 3)) for r in results],
    }


def summary_json(summary: dict) -> str:
    return json.dumps(summary, indent=2, default=str)
