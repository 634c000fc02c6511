"""Exact scalar arithmetic: rationals, univariate polynomials over Q, small
number fields with Sturm-based real root isolation, roots of unity and
cyclotomic numbers, and rational matrices.

Rationals are `fractions.Fraction` throughout; it already enforces the
canonical form (reduced, positive denominator).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache


class Reducible(ValueError):
    pass


class DegreeOutOfRange(ValueError):
    pass


class DependentBasis(ValueError):
    pass


class NotSquare(ValueError):
    pass


class NotIrreducible(ValueError):
    pass


class NotQuartic(ValueError):
    pass


def rational(text) -> Fraction:
    """Parse 'p/q' or 'p' into a Fraction."""
    if isinstance(text, Fraction):
        return text
    return Fraction(str(text).strip())


# ---------------------------------------------------------------------------
# univariate polynomials over Q: coefficient tuples, low degree first
# ---------------------------------------------------------------------------

class UPoly:
    """Dense univariate polynomial over Q. Immutable."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def from_ints(cls, *coeffs):
        return cls(coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, UPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return UPoly([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                      for i in range(n)])

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return UPoly([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UPoly([c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return UPoly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UPoly(out)

    __rmul__ = __mul__

    def __divmod__(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [Fraction(0)] * max(0, self.degree - other.degree + 1)
        r = list(self.coeffs)
        d = other.degree
        lc = other.coeffs[-1]
        while len(r) - 1 >= d and any(r):
            while r and r[-1] == 0:
                r.pop()
            if len(r) - 1 < d:
                break
            f = r[-1] / lc
            q[len(r) - 1 - d] = f
            for i in range(d + 1):
                r[len(r) - 1 - d + i] -= f * other.coeffs[i]
            r.pop()
        return UPoly(q), UPoly(r)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def derivative(self):
        return UPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self):
        if self.is_zero():
            return self
        lc = self.coeffs[-1]
        return UPoly([c / lc for c in self.coeffs])

    def shift_compose(self, a):
        """p(x + a)."""
        out = UPoly([Fraction(0)])
        xa = UPoly([Fraction(a), Fraction(1)])
        for c in reversed(self.coeffs):
            out = out * xa + UPoly([c])
        return out

    def primitive_int_coeffs(self):
        """Scale to coprime integer coefficients with positive leading one."""
        if self.is_zero():
            return (0,)
        l = 1
        for c in self.coeffs:
            l = l * c.denominator // math.gcd(l, c.denominator)
        ints = [int(c * l) for c in self.coeffs]
        g = 0
        for c in ints:
            g = math.gcd(g, abs(c))
        ints = [c // g for c in ints]
        if ints[-1] < 0:
            ints = [-c for c in ints]
        return tuple(ints)

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                xs = "x" if i == 1 else f"x^{i}"
                if c == 1:
                    parts.append(xs)
                elif c == -1:
                    parts.append(f"-{xs}")
                else:
                    parts.append(f"{c}*{xs}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


def upoly_gcd(a: UPoly, b: UPoly) -> UPoly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def upoly_xgcd(a: UPoly, b: UPoly):
    """(g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = a, b
    s0, s1 = UPoly([1]), UPoly([])
    t0, t1 = UPoly([]), UPoly([1])
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    lc = r0.coeffs[-1]
    inv = UPoly([1 / lc])
    return r0.monic(), s0 * inv, t0 * inv


def squarefree_part(p: UPoly) -> UPoly:
    g = upoly_gcd(p, p.derivative())
    if g.degree <= 0:
        return p.monic()
    return (p // g).monic()


# ---------------------------------------------------------------------------
# Sturm sequences and real root isolation
# ---------------------------------------------------------------------------

def sturm_sequence(p: UPoly):
    seq = [p, p.derivative()]
    while not seq[-1].is_zero() and seq[-1].degree > 0:
        seq.append(-(seq[-2] % seq[-1]))
    if seq[-1].is_zero():
        seq.pop()
    return seq


def _sign_changes(seq, x):
    signs = []
    for q in seq:
        v = q(x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p: UPoly, lo: Fraction, hi: Fraction) -> int:
    """Distinct real roots of p in (lo, hi]; p must be squarefree for exactness."""
    seq = sturm_sequence(p)
    return _sign_changes(seq, lo) - _sign_changes(seq, hi)


def root_bound(p: UPoly) -> Fraction:
    """Cauchy bound: all real roots lie in (-B, B)."""
    lc = abs(p.coeffs[-1])
    m = max((abs(c) for c in p.coeffs[:-1]), default=Fraction(0))
    return 1 + m / lc


def isolate_real_roots(p: UPoly):
    """Disjoint rational intervals (lo, hi], one distinct real root each."""
    p = squarefree_part(p)
    if p.degree <= 0:
        return []
    seq = sturm_sequence(p)
    B = root_bound(p)
    out = []

    def rec(lo, hi, n):
        if n == 0:
            return
        if n == 1:
            out.append((lo, hi))
            return
        mid = (lo + hi) / 2
        if p(mid) == 0:
            # nudge the split point so roots stay interior to half-open intervals
            mid = (lo + mid) / 2
        nl = _sign_changes(seq, lo) - _sign_changes(seq, mid)
        rec(lo, mid, nl)
        rec(mid, hi, n - nl)

    total = count_real_roots(p, -B, B)
    rec(-B, B, total)
    return out


def refine_root_interval(p: UPoly, lo: Fraction, hi: Fraction, width: Fraction):
    """Bisect an isolating interval (lo, hi] of squarefree p until hi-lo <= width."""
    flo = p(lo)
    while hi - lo > width:
        mid = (lo + hi) / 2
        fm = p(mid)
        if fm == 0:
            eps = min(width, hi - lo) / 4
            return (mid - eps, mid + eps) if width > 0 else (mid, mid)
        if (flo > 0) != (fm > 0):
            hi = mid
        else:
            lo, flo = mid, fm
    return lo, hi


class AlgebraicReal:
    """A real root of a rational polynomial, known by an isolating interval.

    Supports on-demand refinement; enough protocol for interval comparisons
    against rationals and for simultaneous-approximation searches.
    """

    def __init__(self, min_poly: UPoly, lo, hi):
        self.poly = squarefree_part(min_poly)
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        if count_real_roots(self.poly, self.lo, self.hi) != 1:
            raise ValueError("interval does not isolate a single root")

    def interval(self, width) -> tuple[Fraction, Fraction]:
        if self.hi - self.lo > width:
            self.lo, self.hi = refine_root_interval(self.poly, self.lo, self.hi,
                                                    Fraction(width))
        return self.lo, self.hi

    def __float__(self):
        lo, hi = self.interval(Fraction(1, 10 ** 17))
        return float((lo + hi) / 2)

    def __repr__(self):
        return f"AlgebraicReal({self.poly!r} in ({self.lo}, {self.hi}])"


# ---------------------------------------------------------------------------
# irreducibility over Q for degree <= 6
# ---------------------------------------------------------------------------

def _divisors(n):
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def rational_roots(p: UPoly):
    """All rational roots, via the rational root theorem on the primitive part."""
    ints = p.primitive_int_coeffs()
    while ints and ints[0] == 0:
        return [Fraction(0)] + rational_roots(UPoly(ints[1:]))
    if len(ints) <= 1:
        return []
    roots = []
    for q in _divisors(ints[-1]):
        for pn in _divisors(ints[0]):
            for cand in (Fraction(pn, q), Fraction(-pn, q)):
                if p(cand) == 0 and cand not in roots:
                    roots.append(cand)
    return sorted(roots)


def _l2_norm_ceil(ints):
    s = sum(c * c for c in ints)
    return math.isqrt(s) + 1


def _monic_int_factor_search(ints, m):
    """Search a monic integer factor of degree m of the monic integer
    polynomial `ints`; coefficient box from the Mignotte/Landau bound,
    pruned by divisibility of the values at 0 and 1."""
    f = UPoly(ints)
    B = _l2_norm_ceil(ints)
    binom = [math.comb(m, i) for i in range(m + 1)]
    f0 = int(f(0))
    f1 = int(f(1))

    def candidates_g0():
        if f0 != 0:
            for d in _divisors(f0):
                yield d
                yield -d
        else:
            yield 0

    from itertools import product
    mid_bounds = [binom[i] * B for i in range(1, m)]
    for g0 in candidates_g0():
        if abs(g0) > binom[0] * B:
            continue
        for mids in product(*[range(-b, b + 1) for b in mid_bounds]):
            g = UPoly((g0,) + tuple(mids) + (1,))
            g1 = int(g(1))
            if f1 != 0 and (g1 == 0 or f1 % g1 != 0):
                continue
            q, r = divmod(f, g)
            if r.is_zero():
                return g
    return None


def is_irreducible(p: UPoly) -> bool:
    """Irreducibility over Q, degrees 1..6 (monic after normalization)."""
    d = p.degree
    if d <= 0:
        return False
    if d == 1:
        return True
    if rational_roots(p):
        return False
    if d <= 3:
        return True
    ints = p.primitive_int_coeffs()
    lc = ints[-1]
    if lc != 1:
        # y = lc*x turns a_d x^d + ... into a monic integer polynomial with
        # the same factorization pattern over Q
        ints = tuple(ints[i] * lc ** (d - 1 - i) for i in range(d)) + (1,)
    ints = [int(c) for c in ints]
    for m in range(2, d // 2 + 1):
        if _monic_int_factor_search(ints, m) is not None:
            return False
    return True


# ---------------------------------------------------------------------------
# number fields of degree 2..6
# ---------------------------------------------------------------------------

class NumberField:
    """Q[x]/(min_poly) with isolated real roots; min_poly monic irreducible."""

    def __init__(self, min_poly: UPoly):
        min_poly = min_poly.monic()
        d = min_poly.degree
        if not 2 <= d <= 6:
            raise DegreeOutOfRange(f"degree {d} outside 2..6")
        if not is_irreducible(min_poly):
            raise Reducible(f"{min_poly} factors over Q")
        self.min_poly = min_poly
        self.degree = d
        self.real_roots = isolate_real_roots(min_poly)
        self.totally_real = len(self.real_roots) == d
        self._power_traces = self._traces_of_powers()

    def _traces_of_powers(self):
        # Newton's identities on x^d + c_{d-1}x^{d-1} + ... + c_0:
        # p_k = -k c_{d-k} - sum_{i=1}^{k-1} c_{d-i} p_{k-i}   (k <= d)
        # p_k = -sum_{i=1}^{d} c_{d-i} p_{k-i}                 (k > d)
        d = self.degree
        c = self.min_poly.coeffs
        p = [Fraction(d)]
        for k in range(1, 2 * d):
            s = Fraction(0)
            for i in range(1, min(k - 1, d) + 1):
                s += c[d - i] * p[k - i]
            if k <= d:
                s += k * c[d - k]
            p.append(-s)
        return p

    def element(self, coords) -> "FieldElement":
        cs = [Fraction(x) for x in coords]
        if len(cs) > self.degree:
            raise ValueError("too many coordinates")
        cs += [Fraction(0)] * (self.degree - len(cs))
        return FieldElement(self, tuple(cs))

    def generator(self) -> "FieldElement":
        return self.element([0, 1])

    def zero(self):
        return self.element([])

    def one(self):
        return self.element([1])

    def __repr__(self):
        return f"NumberField({self.min_poly!r})"


class FieldElement:
    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords):
        self.field = field
        self.coords = tuple(Fraction(c) for c in coords)
        assert len(self.coords) == field.degree

    def _same(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.element([other])
        if other.field is not self.field:
            raise ValueError("elements of different fields")
        return other

    def __add__(self, other):
        other = self._same(other)
        return FieldElement(self.field,
                            [a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.coords])

    def __sub__(self, other):
        return self + (-self._same(other))

    def __rsub__(self, other):
        return (-self) + self._same(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [a * other for a in self.coords])
        other = self._same(other)
        prod = UPoly(self.coords) * UPoly(other.coords)
        rem = prod % self.field.min_poly
        return self.field.element(rem.coeffs)

    __rmul__ = __mul__

    def inverse(self):
        g, s, _ = upoly_xgcd(UPoly(self.coords), self.field.min_poly)
        if g.degree != 0:
            raise ZeroDivisionError("element is zero")
        inv = (s * UPoly([1 / g.coeffs[0]])) % self.field.min_poly
        return self.field.element(inv.coeffs)

    def __truediv__(self, other):
        return self * self._same(other).inverse()

    def __eq__(self, other):
        try:
            other = self._same(other)
        except (ValueError, TypeError):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash((id(self.field), self.coords))

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def is_rational(self):
        return all(c == 0 for c in self.coords[1:])

    def trace(self) -> Fraction:
        t = self.field._power_traces
        return sum((c * t[i] for i, c in enumerate(self.coords)), Fraction(0))

    def mult_matrix(self) -> "RationalMatrix":
        d = self.field.degree
        cols = []
        basis_poly = UPoly(self.coords)
        x = UPoly([0, 1])
        cur = UPoly([1])
        for _ in range(d):
            col = (basis_poly * cur) % self.field.min_poly
            cs = list(col.coeffs) + [Fraction(0)] * (d - len(col.coeffs))
            cols.append(cs)
            cur = (cur * x) % self.field.min_poly
        return RationalMatrix([[cols[j][i] for j in range(d)] for i in range(d)])

    def embedding_interval(self, root_index: int, width) -> tuple[Fraction, Fraction]:
        """Rational interval of width <= `width` around the image of this
        element under the real embedding sending the generator to root
        `root_index` (interval arithmetic on Horner evaluation)."""
        fld = self.field
        lo, hi = fld.real_roots[root_index]
        w = Fraction(width)
        while True:
            vlo, vhi = Fraction(0), Fraction(0)
            for c in reversed(self.coords):
                cands = (vlo * lo, vlo * hi, vhi * lo, vhi * hi)
                vlo, vhi = min(cands) + c, max(cands) + c
            if vhi - vlo <= w:
                return vlo, vhi
            lo, hi = refine_root_interval(fld.min_poly, lo, hi, (hi - lo) / 4)
            fld.real_roots[root_index] = (lo, hi)

    def compare_embedding(self, other, root_index: int) -> int:
        """Exact sign of (self - other) under the chosen real embedding."""
        diff = self - self._same(other)
        if diff.is_zero():
            return 0
        width = Fraction(1, 16)
        while True:
            lo, hi = diff.embedding_interval(root_index, width)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            width /= 16

    def __repr__(self):
        return f"FieldElement{self.coords}"


def number_field(min_poly: UPoly) -> NumberField:
    return NumberField(min_poly)


def trace_dual_basis(field: NumberField, basis):
    """Basis (s_i) with Tr(r_i s_j) = delta_ij, via the trace Gram matrix."""
    d = field.degree
    if len(basis) != d:
        raise DependentBasis(f"need {d} elements")
    coord_m = RationalMatrix([list(b.coords) for b in basis])
    if coord_m.rank() != d:
        raise DependentBasis("basis is linearly dependent over Q")
    gram = RationalMatrix([[(basis[i] * basis[j]).trace() for j in range(d)]
                           for i in range(d)])
    ginv = gram.inverse()
    out = []
    for j in range(d):
        s = field.zero()
        for k in range(d):
            s = s + basis[k] * ginv.entries[j][k]
        out.append(s)
    return out


def min_poly_of(element: FieldElement) -> UPoly:
    """Monic minimal polynomial via the characteristic polynomial of the
    multiplication matrix, reduced to its squarefree part."""
    cp = char_poly(element.mult_matrix())
    return squarefree_part(cp)


# ---------------------------------------------------------------------------
# roots of unity and cyclotomic numbers (orders <= 24)
# ---------------------------------------------------------------------------

CYCLOTOMIC_MAX_ORDER = 24


class RootOfUnity:
    """exp(2*pi*i*k/N), stored as (order N, exponent k mod N)."""

    __slots__ = ("order", "exponent")

    def __init__(self, order: int, exponent: int):
        if order <= 0:
            raise ValueError("order must be positive")
        self.order = order
        self.exponent = exponent % order

    def __mul__(self, other):
        n = self.order * other.order // math.gcd(self.order, other.order)
        k = self.exponent * (n // self.order) + other.exponent * (n // other.order)
        return RootOfUnity(n, k)

    def inverse(self):
        return RootOfUnity(self.order, -self.exponent)

    def __pow__(self, k: int):
        return RootOfUnity(self.order, self.exponent * k)

    def __eq__(self, other):
        if not isinstance(other, RootOfUnity):
            return NotImplemented
        return (self.exponent * other.order - other.exponent * self.order) \
            % (self.order * other.order) == 0

    def __hash__(self):
        g = math.gcd(self.exponent, self.order)
        if self.exponent == 0:
            return hash((1, 0))
        return hash((self.order // g, self.exponent // g))

    def multiplicative_order(self) -> int:
        return self.order // math.gcd(self.order, self.exponent)

    def is_one(self):
        return self.exponent == 0

    def is_minus_one(self):
        return 2 * self.exponent == self.order

    def to_cyclotomic(self) -> "Cyclotomic":
        if self.exponent == 0:
            return Cyclotomic.from_rational(1)
        n = self.multiplicative_order()
        k = self.exponent * n // self.order
        return Cyclotomic.root_of_unity(n, k)

    def complex_value(self):
        import cmath
        return cmath.exp(2j * cmath.pi * self.exponent / self.order)

    def __repr__(self):
        return f"zeta({self.order})^{self.exponent}"


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> UPoly:
    """Phi_n as an exact integer polynomial."""
    p = UPoly([-1] + [0] * (n - 1) + [1])  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            p = p // cyclotomic_polynomial(d)
    return p


def euler_phi(n: int) -> int:
    out = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out -= out // p
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out -= out // m
    return out


class Cyclotomic:
    """Element of Q(zeta_N) in the power basis modulo Phi_N; N <= 24."""

    __slots__ = ("order", "coords")

    def __init__(self, order: int, coords):
        if order > CYCLOTOMIC_MAX_ORDER:
            raise ValueError(f"cyclotomic order {order} exceeds "
                             f"{CYCLOTOMIC_MAX_ORDER}")
        d = euler_phi(order)
        cs = [Fraction(c) for c in coords]
        cs += [Fraction(0)] * (d - len(cs))
        self.order = order
        self.coords = tuple(cs[:d])

    @classmethod
    def from_rational(cls, x, order=1):
        return cls(order, [Fraction(x)])

    @classmethod
    def root_of_unity(cls, n: int, k: int = 1):
        k %= n
        phi = cyclotomic_polynomial(n)
        xk = UPoly([0] * k + [1]) % phi
        return cls(n, xk.coeffs)

    def _pair(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.from_rational(other, self.order)
        if isinstance(other, RootOfUnity):
            other = other.to_cyclotomic()
        if not isinstance(other, Cyclotomic):
            return None, None
        if self.order == other.order:
            return self, other
        n = self.order * other.order // math.gcd(self.order, other.order)
        return self.change_order(n), other.change_order(n)

    def change_order(self, n: int) -> "Cyclotomic":
        if n == self.order:
            return self
        if n % self.order:
            raise ValueError("new order must be a multiple")
        step = n // self.order
        phi = cyclotomic_polynomial(n)
        acc = UPoly([])
        for i, c in enumerate(self.coords):
            if c:
                acc = acc + UPoly([0] * (i * step) + [c])
        acc = acc % phi
        return Cyclotomic(n, acc.coeffs)

    def __add__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return Cyclotomic(a.order, [x + y for x, y in zip(a.coords, b.coords)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.order, [-c for c in self.coords])

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return Cyclotomic(a.order, [x - y for x, y in zip(a.coords, b.coords)])

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        prod = (UPoly(a.coords) * UPoly(b.coords)) % cyclotomic_polynomial(a.order)
        return Cyclotomic(a.order, prod.coeffs)

    __rmul__ = __mul__

    def inverse(self):
        g, s, _ = upoly_xgcd(UPoly(self.coords), cyclotomic_polynomial(self.order))
        if g.degree != 0:
            raise ZeroDivisionError("zero cyclotomic element")
        inv = (s * UPoly([1 / g.coeffs[0]])) % cyclotomic_polynomial(self.order)
        return Cyclotomic(self.order, inv.coeffs)

    def __truediv__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = Cyclotomic.from_rational(1, self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a.coords == b.coords

    def __hash__(self):
        if self.is_rational():
            return hash(self.coords[0])
        return hash((self.order, self.coords))

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def is_rational(self):
        return all(c == 0 for c in self.coords[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not rational")
        return self.coords[0]

    def conjugate(self):
        """Complex conjugation, zeta -> zeta^(N-1)."""
        z = Cyclotomic.root_of_unity(self.order, self.order - 1)
        acc = Cyclotomic.from_rational(0, self.order)
        for i in reversed(range(len(self.coords))):
            acc = acc * z + Cyclotomic.from_rational(self.coords[i], self.order)
        return acc

    def is_real(self):
        return self == self.conjugate()

    def is_root_of_unity(self):
        """(True, order) when the value is a root of unity, else (False, None).

        Q(zeta_N) contains exactly the roots of unity of order dividing
        lcm(2, N), so a single exact power test decides.
        """
        if self.is_zero():
            return False, None
        m = self.order if self.order % 2 == 0 else 2 * self.order
        if (self ** m) != Cyclotomic.from_rational(1, self.order):
            return False, None
        for d in sorted(_divisors(m)):
            if (self ** d) == Cyclotomic.from_rational(1, self.order):
                return True, d
        return True, m

    def complex_value(self):
        import cmath
        z = cmath.exp(2j * cmath.pi / self.order)
        acc = 0j
        for c in reversed(self.coords):
            acc = acc * z + complex(c)
        return acc

    def __repr__(self):
        return f"Cyclotomic({self.order}, {list(self.coords)})"


# ---------------------------------------------------------------------------
# rational matrices
# ---------------------------------------------------------------------------

class RationalMatrix:
    def __init__(self, entries):
        self.entries = [[Fraction(x) for x in row] for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.rows else 0
        if any(len(r) != self.cols for r in self.entries):
            raise ValueError("ragged rows")

    @classmethod
    def parse(cls, text: str) -> "RationalMatrix":
        rows = []
        for line in text.strip().splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            rows.append([rational(tok) for tok in line.split()])
        return cls(rows)

    def copy(self):
        return RationalMatrix([row[:] for row in self.entries])

    def is_square(self):
        return self.rows == self.cols

    def transpose(self):
        return RationalMatrix([[self.entries[i][j] for i in range(self.rows)]
                               for j in range(self.cols)])

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self.entries == other.entries

    def __mul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.cols != other.rows:
                raise ValueError("dimension mismatch")
            return RationalMatrix(
                [[sum(self.entries[i][k] * other.entries[k][j]
                      for k in range(self.cols))
                  for j in range(other.cols)] for i in range(self.rows)])
        return RationalMatrix([[x * other for x in row] for row in self.entries])

    def __add__(self, other):
        return RationalMatrix([[a + b for a, b in zip(r1, r2)]
                               for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return RationalMatrix([[a - b for a, b in zip(r1, r2)]
                               for r1, r2 in zip(self.entries, other.entries)])

    def _rref(self):
        M = [row[:] for row in self.entries]
        pivots = []
        r = 0
        for c in range(self.cols):
            piv = next((i for i in range(r, self.rows) if M[i][c] != 0), None)
            if piv is None:
                continue
            M[r], M[piv] = M[piv], M[r]
            pv = M[r][c]
            M[r] = [x / pv for x in M[r]]
            for i in range(self.rows):
                if i != r and M[i][c] != 0:
                    f = M[i][c]
                    M[i] = [x - f * y for x, y in zip(M[i], M[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return M, pivots

    def rank(self) -> int:
        return len(self._rref()[1])

    def kernel(self):
        """Basis of the right kernel (list of column vectors)."""
        R, piv = self._rref()
        free = [c for c in range(self.cols) if c not in piv]
        out = []
        for fc in free:
            v = [Fraction(0)] * self.cols
            v[fc] = Fraction(1)
            for i, pc in enumerate(piv):
                v[pc] = -R[i][fc]
            out.append(v)
        return out

    def solve(self, rhs):
        """One solution of A x = rhs, or None."""
        aug = RationalMatrix([row + [Fraction(b)] for row, b in
                              zip(self.entries, rhs)])
        R, piv = aug._rref()
        x = [Fraction(0)] * self.cols
        for i, pc in enumerate(piv):
            if pc == self.cols:
                return None
            x[pc] = R[i][self.cols]
        for i in range(self.rows):
            if sum(self.entries[i][j] * x[j] for j in range(self.cols)) != rhs[i]:
                return None
        return x

    def inverse(self) -> "RationalMatrix":
        if not self.is_square():
            raise NotSquare("inverse of a non-square matrix")
        n = self.rows
        aug = RationalMatrix([self.entries[i] +
                              [Fraction(1 if i == j else 0) for j in range(n)]
                              for i in range(n)])
        R, piv = aug._rref()
        if piv[:n] != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return RationalMatrix([row[n:] for row in R[:n]])

    def det(self) -> Fraction:
        if not self.is_square():
            raise NotSquare("determinant of a non-square matrix")
        M = [row[:] for row in self.entries]
        n = self.rows
        det = Fraction(1)
        for c in range(n):
            piv = next((i for i in range(c, n) if M[i][c] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != c:
                M[c], M[piv] = M[piv], M[c]
                det = -det
            det *= M[c][c]
            inv = 1 / M[c][c]
            for i in range(c + 1, n):
                if M[i][c] != 0:
                    f = M[i][c] * inv
                    M[i] = [x - f * y for x, y in zip(M[i], M[c])]
        return det

    def trace(self) -> Fraction:
        if not self.is_square():
            raise NotSquare("trace of a non-square matrix")
        return sum((self.entries[i][i] for i in range(self.rows)), Fraction(0))

    def __repr__(self):
        return "RationalMatrix(" + repr([[str(x) for x in row]
                                         for row in self.entries]) + ")"


def identity_matrix(n: int) -> RationalMatrix:
    return RationalMatrix([[Fraction(1 if i == j else 0) for j in range(n)]
                           for i in range(n)])


def char_poly(matrix: RationalMatrix) -> UPoly:
    """Exact characteristic polynomial (Faddeev-LeVerrier)."""
    if not matrix.is_square():
        raise NotSquare("characteristic polynomial of a non-square matrix")
    n = matrix.rows
    coeffs = [Fraction(1)]
    Mk = identity_matrix(n)
    for k in range(1, n + 1):
        Mk = matrix * Mk
        c = -Mk.trace() / k
        coeffs.append(c)
        for i in range(n):
            Mk.entries[i][i] += c
    return UPoly(list(reversed(coeffs)))


# ---------------------------------------------------------------------------
# Galois group of an irreducible quartic
# ---------------------------------------------------------------------------

def _fraction_is_square(x: Fraction) -> bool:
    if x < 0:
        return False
    n, d = x.numerator, x.denominator
    return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d


def discriminant(p: UPoly) -> Fraction:
    """disc(p) = (-1)^(d(d-1)/2) Res(p, p') / lc(p), via the Sylvester matrix."""
    d = p.degree
    dp = p.derivative()
    m = dp.degree
    size = d + m
    rows = []
    pc = list(reversed(p.coeffs))
    dc = list(reversed(dp.coeffs))
    for i in range(m):
        rows.append([Fraction(0)] * i + pc + [Fraction(0)] * (size - d - 1 - i))
    for i in range(d):
        rows.append([Fraction(0)] * i + dc + [Fraction(0)] * (size - m - 1 - i))
    res = RationalMatrix(rows).det()
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return sign * res / p.coeffs[-1]


def quartic_galois_class(poly: UPoly) -> str:
    """Galois group of an irreducible quartic: one of C4, V4, D4, A4, S4.

    Classification by the rational-root count of the resolvent cubic and the
    discriminant square test; the C4/D4 split follows Kappe-Warren.
    """
    if poly.degree != 4:
        raise NotQuartic(f"degree {poly.degree}")
    if not is_irreducible(poly):
        raise NotIrreducible(f"{poly} is reducible")
    p = poly.monic()
    e, c_, b, a, _ = p.coeffs  # x^4 + a x^3 + b x^2 + c x + e
    c = c_
    resolvent = UPoly([-(a * a * e - 4 * b * e + c * c), a * c - 4 * e, -b, 1])
    roots = rational_roots(resolvent)
    disc = discriminant(p)
    if len(roots) >= 3:
        return "V4"
    if len(roots) == 0:
        return "A4" if _fraction_is_square(disc) else "S4"
    y0 = roots[0]
    # C4 iff x^2 - y0 x + e and x^2 + a x + (b - y0) both split over Q(sqrt(disc))
    d1 = y0 * y0 - 4 * e
    d2 = a * a - 4 * (b - y0)
    def splits(delta):
        return delta == 0 or _fraction_is_square(delta) or \
            _fraction_is_square(delta * disc)
    return "C4" if splits(d1) and splits(d2) else "D4"
