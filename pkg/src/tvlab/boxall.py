"""Boxall's lemma on finite p-primary Galois modules, constructively and by brute force."""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .intpoly import prime_factors

GROUP_LIMIT = 10 ** 5


class HypothesisError(ValueError):
    pass


class FixedPointError(ValueError):
    pass


class ProofClaimViolation(AssertionError):
    pass


@dataclass(frozen=True)
class FiniteModule:
    """A = Z/p^{n_1} + ... + Z/p^{n_g}."""

    p: int
    exponents: tuple

    def __post_init__(self):
        if not self.exponents or any(n < 1 for n in self.exponents):
            raise ValueError("need at least one cyclic factor of order >= p")
        object.__setattr__(self, "exponents", tuple(self.exponents))

    @classmethod
    def from_orders(cls, orders: Sequence[int]) -> FiniteModule:
        ps = {q for o in orders for q in prime_factors(o)}
        if len(ps) != 1:
            raise ValueError("all cyclic orders must be powers of one prime")
        p = ps.pop()
        exps = []
        for o in orders:
            e = 0
            while o > 1:
                o //= p
                e += 1
            exps.append(e)
        return cls(p, tuple(exps))

    @classmethod
    def parse(cls, text: str) -> FiniteModule:
        """``"3^2,3^1"`` or ``"9,3"``."""
        orders = []
        for part in text.replace(" ", "").split(","):
            if "^" in part:
                b, e = part.split("^")
                orders.append(int(b) ** int(e))
            else:
                orders.append(int(part))
        return cls.from_orders(orders)

    @property
    def orders(self) -> tuple:
        return tuple(self.p ** n for n in self.exponents)

    @property
    def rank(self) -> int:
        return len(self.exponents)

    def size(self) -> int:
        out = 1
        for o in self.orders:
            out *= o
        return out

    def reduce(self, v) -> tuple:
        return tuple(x % o for x, o in zip(v, self.orders))

    def add(self, a, b):
        return self.reduce([x + y for x, y in zip(a, b)])

    def sub(self, a, b):
        return self.reduce([x - y for x, y in zip(a, b)])

    def scale(self, k: int, a):
        return self.reduce([k * x for x in a])

    @property
    def zero(self):
        return (0,) * self.rank

    def elements(self):
        return product(*(range(o) for o in self.orders))

    def torsion_generators(self, m: int) -> list:
        """Generators of A[m] for m a power of p."""
        gens = []
        for i, o in enumerate(self.orders):
            g = [0] * self.rank
            g[i] = o // min(o, m) if o % m == 0 or m % o == 0 else 0
            if m >= o:
                g[i] = 1
            gens.append(tuple(g))
        return gens

    def in_torsion(self, a, m: int) -> bool:
        return self.scale(m, a) == self.zero


@dataclass(frozen=True)
class Automorphism:
    """Integer matrix acting on column vectors of A."""

    module: FiniteModule
    matrix: tuple

    def __post_init__(self):
        A = self.module
        M = tuple(tuple(int(M_ij) % A.orders[i] for M_ij in row) for i, row in enumerate(self.matrix))
        if len(M) != A.rank or any(len(r) != A.rank for r in M):
            raise ValueError("matrix shape must match the module rank")
        # well defined: p^{n_j} M_ij = 0 mod p^{n_i}
        for i in range(A.rank):
            for j in range(A.rank):
                if (A.orders[j] * M[i][j]) % A.orders[i]:
                    raise ValueError(f"entry ({i},{j}) does not define a homomorphism")
        object.__setattr__(self, "matrix", M)

    def __call__(self, v):
        A = self.module
        return A.reduce([sum(self.matrix[i][j] * v[j] for j in range(A.rank)) for i in range(A.rank)])

    def __mul__(self, other: Automorphism) -> Automorphism:
        A = self.module
        r = A.rank
        M = [[sum(self.matrix[i][t] * other.matrix[t][j] for t in range(r)) for j in range(r)] for i in range(r)]
        return Automorphism(A, tuple(map(tuple, M)))

    def __pow__(self, e: int) -> Automorphism:
        result = identity_automorphism(self.module)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def minus_one(self, v):
        return self.module.sub(self(v), v)

    def is_bijective(self) -> bool:
        A = self.module
        if A.size() > GROUP_LIMIT:
            raise ValueError("module too large to test bijectivity")
        return all(self(v) != A.zero for v in A.elements() if v != A.zero)


def identity_automorphism(A: FiniteModule) -> Automorphism:
    return Automorphism(A, tuple(tuple(int(i == j) for j in range(A.rank)) for i in range(A.rank)))


@dataclass
class GaloisAction:
    module: FiniteModule
    generators: list

    def __post_init__(self):
        self.generators = [g if isinstance(g, Automorphism) else Automorphism(self.module, tuple(map(tuple, g)))
                           for g in self.generators]

    @classmethod
    def from_json(cls, module: FiniteModule, data) -> GaloisAction:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(module, [tuple(map(tuple, m)) for m in data])

    def fixes(self, v) -> bool:
        return all(g(v) == v for g in self.generators)

    def group(self, limit: int = GROUP_LIMIT) -> list[tuple[tuple, Automorphism]]:
        """Breadth-first enumeration of (word, element) for the generated group."""
        e = identity_automorphism(self.module)
        seen = {e.matrix}
        out = [((), e)]
        queue = deque(out)
        while queue:
            word, g = queue.popleft()
            for idx, s in enumerate(self.generators):
                h = s * g
                if h.matrix not in seen:
                    seen.add(h.matrix)
                    item = (word + (idx,), h)
                    out.append(item)
                    queue.append(item)
                    if len(out) > limit:
                        raise ValueError(f"generated group exceeds {limit} elements")
        return out


def check_hypotheses(A: FiniteModule, action: GaloisAction) -> bool:
    """Every generator fixes A[p] pointwise, and A[4] as well when p = 2."""
    m = 4 if A.p == 2 else A.p
    for g in action.generators:
        for v in A.torsion_generators(A.p) + (A.torsion_generators(m) if m != A.p else []):
            if g(v) != v:
                return False
    return True


@dataclass
class BoxallResult:
    n: int
    sigma1_word: tuple
    sigma1: Automorphism
    sigma: Automorphism
    x: tuple
    trace: list = field(default_factory=list)

    @property
    def sigma_word(self) -> tuple:
        return self.sigma1_word * (self.module.p ** (self.n - 1))

    @property
    def module(self) -> FiniteModule:
        return self.sigma.module


def boxall_construct(A: FiniteModule, action: GaloisAction, Q) -> BoxallResult:
    """sigma and x in A[p] - {0} with (sigma - 1) Q = x, following the inductive proof."""
    if not check_hypotheses(A, action):
        raise HypothesisError("the action does not fix A[p] (A[4] for p = 2)")
    Q = A.reduce(Q)
    if action.fixes(Q):
        raise FixedPointError("Q is fixed by the group: no such sigma exists")
    p = A.p
    n = 1
    while not action.fixes(A.scale(p ** n, Q)):
        n += 1
    Qn1 = A.scale(p ** (n - 1), Q)
    sigma1_word, sigma1 = next((w, g) for w, g in action.group() if g(Qn1) != Qn1)
    trace = []
    prev = None
    for i in range(1, n + 1):
        Qi = A.scale(p ** (n - i), Q)
        si = sigma1 ** (p ** (i - 1))
        xi = si.minus_one(Qi)
        trace.append(xi)
        if prev is not None and xi != prev:
            raise ProofClaimViolation(f"x_{i} = {xi} differs from x_{i - 1} = {prev}")
        prev = xi
    sigma = sigma1 ** (p ** (n - 1))
    x = sigma.minus_one(Q)
    assert x == trace[-1]
    if x == A.zero or not A.in_torsion(x, p):
        raise ProofClaimViolation(f"x = {x} is not a nonzero p-torsion element")
    return BoxallResult(n, sigma1_word, sigma1, sigma, x, trace)


def boxall_oracle(A: FiniteModule, action: GaloisAction, Q) -> list[tuple[Automorphism, tuple]]:
    """Every group element sigma with (sigma - 1) Q in A[p] - {0}."""
    Q = A.reduce(Q)
    out = []
    for _, g in action.group():
        x = g.minus_one(Q)
        if x != A.zero and A.in_torsion(x, A.p):
            out.append((g, x))
    return out
