"""Exact integer lattice utilities: Hermite normal form, integer kernels,
and saturation of row lattices.  Everything is small and dense; inputs are
lists/tuples of ints.
"""

from __future__ import annotations

import math
from fractions import Fraction


def hnf(rows):
    """Row Hermite normal form: positive pivots, entries above each pivot
    reduced into [0, pivot); zero rows dropped.  Returns a tuple of tuples."""
    M = [list(r) for r in rows]
    m = len(M)
    n = len(M[0]) if m else 0
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, m):
            while M[i][c] != 0:
                q = M[r][c] // M[i][c]
                M[r] = [a - q * b for a, b in zip(M[r], M[i])]
                M[r], M[i] = M[i], M[r]
        if M[r][c] < 0:
            M[r] = [-a for a in M[r]]
        for i in range(r):
            q = M[i][c] // M[r][c]
            if q:
                M[i] = [a - q * b for a, b in zip(M[i], M[r])]
        r += 1
        if r == m:
            break
    return tuple(tuple(row) for row in M[:r])


def int_kernel(rows, n=None):
    """Basis of {x in Z^n : M x = 0} for the integer matrix with the given
    rows; the kernel of an integer matrix is automatically saturated."""
    M = [list(r) for r in rows]
    if n is None:
        n = len(M[0]) if M else 0
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def colop_sub(c1, c2, q):
        for row in M:
            row[c1] -= q * row[c2]
        for row in U:
            row[c1] -= q * row[c2]

    def colswap(c1, c2):
        for row in M:
            row[c1], row[c2] = row[c2], row[c1]
        for row in U:
            row[c1], row[c2] = row[c2], row[c1]

    pr = 0
    for r in range(len(M)):
        piv = next((c for c in range(pr, n) if M[r][c] != 0), None)
        if piv is None:
            continue
        colswap(pr, piv)
        c = pr + 1
        while c < n:
            if M[r][c] == 0:
                c += 1
                continue
            if abs(M[r][c]) < abs(M[r][pr]):
                colswap(pr, c)
                continue
            q = M[r][c] // M[r][pr]
            colop_sub(c, pr, q)
        pr += 1
    ker = []
    for c in range(n):
        if all(M[r][c] == 0 for r in range(len(M))):
            ker.append(tuple(U[r][c] for r in range(n)))
    return ker


def saturate_rows(rows, n=None):
    """HNF basis of the saturation of the row lattice (the integer points of
    its Q-span): kernel of the kernel."""
    rows = [r for r in rows if any(r)]
    if n is None:
        n = len(rows[0]) if rows else 0
    if not rows:
        return tuple()
    ker = int_kernel(rows, n)
    if not ker:
        return hnf([[1 if i == j else 0 for j in range(n)] for i in range(n)])
    return hnf(int_kernel(ker, n))


def primitive_vector(v):
    """Divide by the gcd; canonical sign: first nonzero entry positive."""
    g = 0
    for x in v:
        g = math.gcd(g, abs(x))
    if g == 0:
        return None
    v = tuple(x // g for x in v)
    for x in v:
        if x:
            return v if x > 0 else tuple(-y for y in v)
    return None


def clear_denominators(row):
    """Scale a rational row to coprime integers."""
    l = 1
    for x in row:
        x = Fraction(x)
        l = l * x.denominator // math.gcd(l, x.denominator)
    ints = [int(Fraction(x) * l) for x in row]
    g = 0
    for x in ints:
        g = math.gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def rational_row_space_basis(rows):
    """Reduced row echelon form over Q as a canonical key for the row space."""
    M = [[Fraction(x) for x in row] for row in rows]
    m = len(M)
    n = len(M[0]) if m else 0
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        pv = M[r][c]
        M[r] = [x / pv for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        r += 1
        if r == m:
            break
    return tuple(tuple(row) for row in M[:r])
