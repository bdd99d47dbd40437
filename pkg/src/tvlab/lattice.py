"""Exact integer linear algebra: Hermite and Smith normal forms, kernels, congruences."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with x*a + y*b = g = gcd(a, b) >= 0; (|a|, sign a, 0) when a | b."""
    if a and b % a == 0:
        return abs(a), (1 if a > 0 else -1), 0
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B):
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


def transpose(A, ncols: int | None = None):
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(r) for r in zip(*A)]


def hnf_with_transform(A: Sequence[Sequence[int]], ncols: int | None = None):
    """Row Hermite normal form.

    Returns (H, U) with U unimodular and U @ A = H padded by zero rows; H lists
    only the nonzero rows, echelon with positive pivots and entries above each
    pivot reduced into [0, pivot).
    """
    rows = [list(map(int, r)) for r in A]
    m = len(rows)
    n = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    U = identity(m)
    r = 0
    pivots = []
    for c in range(n):
        if r >= m:
            break
        # gcd-combine column c into row r
        for i in range(r + 1, m):
            if rows[i][c]:
                a, b = rows[r][c], rows[i][c]
                g, x, y = xgcd(a, b)
                ag, bg = a // g, b // g
                ri, rr = rows[i], rows[r]
                rows[r] = [x * u + y * v for u, v in zip(rr, ri)]
                rows[i] = [-bg * u + ag * v for u, v in zip(rr, ri)]
                Ui, Ur = U[i], U[r]
                U[r] = [x * u + y * v for u, v in zip(Ur, Ui)]
                U[i] = [-bg * u + ag * v for u, v in zip(Ur, Ui)]
        if rows[r][c] == 0:
            continue
        if rows[r][c] < 0:
            rows[r] = [-v for v in rows[r]]
            U[r] = [-v for v in U[r]]
        piv = rows[r][c]
        for i in range(r):
            q = rows[i][c] // piv
            if q:
                rows[i] = [u - q * v for u, v in zip(rows[i], rows[r])]
                U[i] = [u - q * v for u, v in zip(U[i], U[r])]
        pivots.append(c)
        r += 1
    return rows[:r], U


def hnf(A: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[tuple[int, ...], ...]:
    H, _ = hnf_with_transform(A, ncols)
    return tuple(tuple(r) for r in H)


def left_kernel(A: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    """Basis of {v in Z^m : v @ A = 0}."""
    H, U = hnf_with_transform(A, ncols)
    return [list(u) for u in U[len(H):]]


def in_lattice(v: Sequence[int], H) -> bool:
    """v in the Z-span of the echelon basis H."""
    c = lattice_coords(v, H)
    return c is not None and all(x.denominator == 1 for x in c)


def lattice_coords(v: Sequence, H) -> list | None:
    """Coordinates of v in the echelon basis H (rational allowed); None if not in the Q-span."""
    v = [Fraction(x) for x in v]
    coords = []
    for row in H:
        c = next(j for j, x in enumerate(row) if x)
        q = v[c] / row[c]
        coords.append(q)
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    if any(v):
        return None
    return coords


def smith_with_transform(A: Sequence[Sequence[int]], ncols: int | None = None):
    """(D, U, V) with U @ A @ V = D diagonal, d_1 | d_2 | ..., U and V unimodular.

    D is returned as the list of diagonal entries (length min(m, n)).
    """
    M = [list(map(int, r)) for r in A]
    m = len(M)
    n = ncols if ncols is not None else (len(M[0]) if M else 0)
    U, V = identity(m), identity(n)

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(m, n):
        entries = [(abs(M[i][j]), i, j) for i in range(t, m) for j in range(t, n) if M[i][j]]
        if not entries:
            break
        _, i0, j0 = min(entries)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            done = True
            for i in range(t + 1, m):
                if M[i][t]:
                    a, b = M[t][t], M[i][t]
                    g, x, y = xgcd(a, b)
                    ag, bg = a // g, b // g
                    rt, ri = M[t], M[i]
                    M[t] = [x * u + y * v for u, v in zip(rt, ri)]
                    M[i] = [-bg * u + ag * v for u, v in zip(rt, ri)]
                    ut, ui = U[t], U[i]
                    U[t] = [x * u + y * v for u, v in zip(ut, ui)]
                    U[i] = [-bg * u + ag * v for u, v in zip(ut, ui)]
            for j in range(t + 1, n):
                if M[t][j]:
                    done = False
                    a, b = M[t][t], M[t][j]
                    g, x, y = xgcd(a, b)
                    ag, bg = a // g, b // g
                    for row in M:
                        u, v = row[t], row[j]
                        row[t], row[j] = x * u + y * v, -bg * u + ag * v
                    for row in V:
                        u, v = row[t], row[j]
                        row[t], row[j] = x * u + y * v, -bg * u + ag * v
            if done and not any(M[i][t] for i in range(t + 1, m)):
                # divisibility d_t | rest
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if M[i][j] % M[t][t]), None)
                if bad is None:
                    break
                i, _ = bad
                M[t] = [u + v for u, v in zip(M[t], M[i])]
                U[t] = [u + v for u, v in zip(U[t], U[i])]
        if M[t][t] < 0:
            M[t] = [-v for v in M[t]]
            U[t] = [-v for v in U[t]]
        t += 1
    diag = [M[i][i] for i in range(min(m, n))]
    return diag, U, V


def solve_mod1(L: Sequence[Sequence[int]], t: Sequence[Fraction], n: int):
    """Some x in (Q/Z)^n with L x = t mod Z^r, or None.

    Deterministic for given input: built from the Smith form of L.
    """
    from .cyclo import sym
    r = len(L)
    if r == 0:
        return tuple(Fraction(0) for _ in range(n))
    diag, U, V = smith_with_transform(L, n)
    Ut = [sum((U[i][j] * t[j] for j in range(r)), Fraction(0)) for i in range(r)]
    y = [Fraction(0)] * n
    for i in range(r):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if sym(Ut[i]) != 0:
                return None
        else:
            y[i] = Ut[i] / d
    x = [sym(sum((V[i][j] * y[j] for j in range(n)), Fraction(0))) for i in range(n)]
    return tuple(x)


def saturation(L: Sequence[Sequence[int]], n: int) -> tuple[tuple[int, ...], ...]:
    """(Q L) cap Z^n in Hermite form."""
    if not L:
        return ()
    K = left_kernel(transpose(L, n), len(L))  # right kernel of L
    if not K:
        return hnf(identity(n), n)
    return hnf(left_kernel(transpose(K, n), len(K)), n)


def determinant(A: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    M = [list(map(int, r)) for r in A]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]
