"""Absolute logarithmic Weil heights of rational data, Mahler-measure
heights of algebraic numbers, Dirichlet simultaneous approximation, and
multiplicative-relation detection in Q*.

Heights of rational tuples are exact: the height is log M for an explicit
positive integer M (the largest coordinate of the coprime integer
representative), and all comparisons happen on M itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import intlat
from .exactnum import AlgebraicReal, UPoly, is_irreducible, Reducible

NUMERIC_ERROR_BOUND = 1e-12


class AllZeroProjective(ValueError):
    pass


class ZeroPolynomial(ValueError):
    pass


class ZeroInput(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class HeightValue:
    """Nonnegative height; 'exact-log' carries the integer whose log it is."""
    value: float
    exactness: str  # 'exact-log' | 'numeric'
    log_argument: int | None = None
    error: float = 0.0

    def __post_init__(self):
        if self.exactness not in ("exact-log", "numeric"):
            raise ValueError("bad exactness tag")
        if self.exactness == "numeric" and self.error > NUMERIC_ERROR_BOUND:
            raise ValueError("numeric error bound too large")

    @classmethod
    def exact_log(cls, m: int) -> "HeightValue":
        return cls(math.log(m), "exact-log", int(m))

    def __repr__(self):
        if self.exactness == "exact-log":
            return f"HeightValue(log {self.log_argument})"
        return f"HeightValue({self.value!r} +- {self.error:g})"


def coprime_integer_representative(coords):
    """Scale a rational tuple to coprime integers (projective representative)."""
    coords = [Fraction(c) for c in coords]
    if all(c == 0 for c in coords):
        raise AllZeroProjective("all coordinates vanish")
    l = 1
    for c in coords:
        l = l * c.denominator // math.gcd(l, c.denominator)
    ints = [int(c * l) for c in coords]
    g = 0
    for x in ints:
        g = math.gcd(g, abs(x))
    return [x // g for x in ints]


def height_point(coords, mode: str = "affine") -> HeightValue:
    """Weil height of a rational point.

    affine: h(x) = sum_v log max(1, |x_1|_v, ..., |x_n|_v); equals the
    projective height of [1 : x_1 : ... : x_n].
    projective: scaling-invariant height of the coprime integer
    representative, log max |c_i|.
    """
    coords = [Fraction(c) for c in coords]
    if not coords:
        raise ValueError("empty point")
    if mode == "affine":
        ints = coprime_integer_representative([Fraction(1)] + coords)
    elif mode == "projective":
        ints = coprime_integer_representative(coords)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return HeightValue.exact_log(max(abs(x) for x in ints))


def height_poly(poly) -> HeightValue:
    """Projective height of the tuple of nonzero coefficients."""
    if poly.is_zero():
        raise ZeroPolynomial("zero polynomial has no height")
    coeffs = [poly.terms[e] for e in poly.support()]
    return height_point(coeffs, mode="projective")


_CYCLOTOMIC_ORDERS_BY_DEGREE = {}
for _m in range(1, 127):
    _d = 1
    _n = _m
    _p = 2
    _phi = _m
    while _p * _p <= _n:
        if _n % _p == 0:
            _phi -= _phi // _p
            while _n % _p == 0:
                _n //= _p
        _p += 1
    if _n > 1:
        _phi -= _phi // _n
    _CYCLOTOMIC_ORDERS_BY_DEGREE.setdefault(_phi, []).append(_m)


def _is_cyclotomic_minpoly(p: UPoly) -> bool:
    d = p.degree
    ints = p.primitive_int_coeffs()
    if ints[-1] != 1:
        return False
    for m in _CYCLOTOMIC_ORDERS_BY_DEGREE.get(d, []):
        xm = UPoly([-1] + [0] * (m - 1) + [1])
        if (xm % p).is_zero():
            return True
    return False


def height_algebraic(min_poly: UPoly) -> HeightValue:
    """Height of an algebraic number via its minimal polynomial:
    h = (1/deg) log M(f) with M the Mahler measure.  Rational and
    root-of-unity cases come out exact; the rest is certified numeric."""
    if min_poly.degree < 1:
        raise ValueError("constant polynomial")
    if min_poly.degree > 6:
        raise ValueError("degree above 6 unsupported")
    if not is_irreducible(min_poly):
        raise Reducible(f"{min_poly} is reducible")
    d = min_poly.degree
    if d == 1:
        # root p/q: Mahler measure of qx - p is max(|p|, q)
        a0, a1 = min_poly.primitive_int_coeffs()
        return HeightValue.exact_log(max(abs(a0), abs(a1)))
    if _is_cyclotomic_minpoly(min_poly):
        return HeightValue.exact_log(1)
    import mpmath
    ints = min_poly.primitive_int_coeffs()
    with mpmath.workdps(60):
        roots, err = mpmath.polyroots([mpmath.mpf(c) for c in reversed(ints)],
                                      maxsteps=200, extraprec=200, error=True)
        measure = mpmath.mpf(abs(ints[-1]))
        for rt in roots:
            measure *= max(mpmath.mpf(1), abs(rt))
        h = mpmath.log(measure) / d
        # |log max(1,|z|)| is 1-Lipschitz in |z|; propagate the root error
        bound = float(d * err) if err > 0 else 1e-40
        value = float(h)
    if bound > NUMERIC_ERROR_BOUND:
        raise ArithmeticError("could not certify the requested accuracy")
    return HeightValue(value, "numeric", None, bound)


# ---------------------------------------------------------------------------
# place decompositions (rational local data; product formula)
# ---------------------------------------------------------------------------

def _factorize(n: int):
    """Prime factorization of a positive integer (trial division +
    deterministic Miller-Rabin / Pollard rho for large leftovers)."""
    out = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 7
    inc = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while f * f <= n and f < 100_000:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += inc[i % 8]
        i += 1
    if n > 1:
        for q in _factor_large(n):
            out[q] = out.get(q, 0) + 1
    return out


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _factor_large(n: int):
    if n == 1:
        return []
    if _is_probable_prime(n):
        return [n]
    # Pollard rho with deterministic restarts
    c = 1
    while True:
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return sorted(_factor_large(d) + _factor_large(n // d))
        c += 1


@dataclass
class PlaceDecomposition:
    """Local data of a nonzero rational: finite exponents ord_p(x) and the
    archimedean magnitude |x|."""
    finite: dict
    archimedean: Fraction
    sign: int

    @classmethod
    def of(cls, x) -> "PlaceDecomposition":
        x = Fraction(x)
        if x == 0:
            raise ZeroInput("zero has no place decomposition")
        fin = {}
        for p, e in _factorize(abs(x.numerator)).items():
            fin[p] = fin.get(p, 0) + e
        for p, e in _factorize(x.denominator).items():
            fin[p] = fin.get(p, 0) - e
        return cls(dict(sorted(fin.items())), abs(x), 1 if x > 0 else -1)

    def reconstruct(self) -> Fraction:
        out = Fraction(self.sign)
        for p, e in self.finite.items():
            out *= Fraction(p) ** e
        return out

    def product_formula_holds(self) -> bool:
        """prod_v |x|_v = 1: |x|_p = p^(-ord_p), |x|_inf = archimedean."""
        prod = self.archimedean
        for p, e in self.finite.items():
            prod *= Fraction(p) ** (-e)
        return prod == 1


# ---------------------------------------------------------------------------
# Dirichlet simultaneous approximation
# ---------------------------------------------------------------------------

def _as_interval_value(theta):
    if isinstance(theta, AlgebraicReal):
        return theta
    return Fraction(theta)


def _abs_leq(value, q: int, p: int, bound: Fraction) -> bool:
    """Decide |q*theta - p| <= bound exactly (refining when algebraic)."""
    if isinstance(value, Fraction):
        return abs(q * value - p) <= bound
    width = bound / 4
    while True:
        lo, hi = value.interval(width)
        dlo, dhi = q * lo - p, q * hi - p
        if -bound <= dlo and dhi <= bound:
            return True
        if dlo > bound or dhi < -bound:
            return False
        width /= 16


def _nearest_int(value, q: int) -> int:
    """Integer near q*value; the caller rechecks both neighbors, so a
    moderately refined midpoint estimate suffices."""
    if isinstance(value, Fraction):
        x = q * value
    else:
        lo, hi = value.interval(Fraction(1, 64 * q))
        x = q * (lo + hi) / 2
    fl = x.numerator // x.denominator
    return fl if x - fl <= Fraction(1, 2) else fl + 1


def dirichlet_approx(thetas, Q: int):
    """Smallest q with 1 <= q < Q^n and |q*theta_i - p_i| <= 1/Q for all i;
    exhaustive search (existence is Dirichlet's theorem)."""
    if Q < 2:
        raise ValueError("Q must be at least 2")
    vals = [_as_interval_value(t) for t in thetas]
    n = len(vals)
    bound = Fraction(1, Q)
    for q in range(1, Q ** n):
        ps = []
        ok = True
        for v in vals:
            p = _nearest_int(v, q)
            # check p and, if the nearest is ambiguous, its neighbors
            good = None
            for cand in (p, p - 1, p + 1):
                if _abs_leq(v, q, cand, bound):
                    good = cand
                    break
            if good is None:
                ok = False
                break
            ps.append(good)
        if ok:
            return q, ps
    raise AssertionError("Dirichlet's theorem guarantees a solution")


# ---------------------------------------------------------------------------
# multiplicative relations among rationals
# ---------------------------------------------------------------------------

def _minimal_supnorm_in_lattice(basis, search_cap=4_000_000):
    """Minimal sup-norm nonzero vector in the row lattice of `basis`
    (exact box enumeration; ties broken lexicographically)."""
    from itertools import product as iproduct
    from .exactnum import RationalMatrix

    k = len(basis)
    n = len(basis[0])
    best = min((tuple(b) for b in basis),
               key=lambda v: (max(abs(x) for x in v), v))
    s0 = max(abs(x) for x in best)
    # coefficient box: any lattice vector v = c*B has c = v * pinv with
    # pinv = B^T (B B^T)^-1, so |c_j| <= supnorm(v) * column-abs-sum of pinv
    B = RationalMatrix([list(r) for r in basis])
    Bt = B.transpose()
    G = B * Bt
    pinv = Bt * G.inverse()  # n x k
    col_bounds = []
    for j in range(k):
        col_bounds.append(sum(abs(pinv.entries[i][j]) for i in range(n)))
    ranges = []
    total = 1
    for j in range(k):
        b = int(s0 * col_bounds[j]) + 1
        ranges.append(range(-b, b + 1))
        total *= 2 * b + 1
    if total > search_cap:
        raise BudgetExceeded(f"relation search space {total} too large")
    for cs in iproduct(*ranges):
        if not any(cs):
            continue
        v = tuple(sum(cs[j] * basis[j][i] for j in range(k)) for i in range(n))
        if not any(v):
            continue
        key = (max(abs(x) for x in v), v)
        if key < (max(abs(x) for x in best), best):
            best = v
    return best


def mult_relation(rs):
    """Primitive integer vector b of minimal sup-norm with r^b in {+1, -1},
    or None when only b = 0 works.  b lies in the integer kernel of the
    prime-exponent matrix of |r_i| (the sign is then automatically +-1)."""
    rs = [Fraction(r) for r in rs]
    if any(r == 0 for r in rs):
        raise ZeroInput("zero entry")
    n = len(rs)
    primes = set()
    decs = []
    for r in rs:
        d = PlaceDecomposition.of(r)
        decs.append(d)
        primes.update(d.finite)
    primes = sorted(primes)
    rows = [[decs[i].finite.get(p, 0) for i in range(n)] for p in primes]
    kernel = intlat.int_kernel(rows, n) if rows else \
        [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    if not kernel:
        return None
    best = _minimal_supnorm_in_lattice(kernel)
    return intlat.primitive_vector(best)


# ---------------------------------------------------------------------------
# Northcott enumeration
# ---------------------------------------------------------------------------

def enumerate_bounded(height_bound: float, arity: int, cap: int = 10 ** 7):
    """All rational n-tuples of affine height <= bound, lexicographic by
    value.  Coordinatewise, p/q must satisfy max(|p|, q) <= exp(bound)."""
    if height_bound < 0:
        raise ValueError("height bound must be nonnegative")
    m_max = int(math.floor(math.exp(height_bound) + 1e-9))
    coords = set()
    for q in range(1, m_max + 1):
        for p in range(-m_max, m_max + 1):
            if math.gcd(abs(p), q) == 1 and max(abs(p), q) <= m_max:
                coords.add(Fraction(p, q))
    coords = sorted(coords)
    if len(coords) ** arity > cap:
        raise BudgetExceeded(
            f"{len(coords) ** arity} candidate tuples exceed the cap {cap}")
    from itertools import product as iproduct
    out = []
    for tup in iproduct(coords, repeat=arity):
        ints = coprime_integer_representative([Fraction(1)] + list(tup))
        if max(abs(x) for x in ints) <= m_max:
            out.append(tup)
            if len(out) > cap:
                raise BudgetExceeded(f"more than {cap} tuples")
    return out
