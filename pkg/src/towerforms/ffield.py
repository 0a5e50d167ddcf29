"""Finite field arithmetic: GF(p) and GF(p^k) with a fixed defining polynomial.

These classes expose the raw-element protocol used throughout the package:
zero/one/add/neg/sub/mul/inv/div/eq/is_zero plus finite-field extras
(element enumeration, Euler-criterion squareness, brute-force square roots).
GF(p) raws are ints in [0, p); GF(p^k) raws are little-endian int tuples of
length <= k with no trailing zeros (the zero element is the empty tuple).
"""

from functools import lru_cache

from . import polys
from .errors import DivisionByZero, TowerFormsError


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class Zp:
    """Prime field GF(p); raws are ints in [0, p)."""

    def __init__(self, p):
        if not _is_prime(p):
            raise TowerFormsError(f"{p} is not prime")
        self.p = p
        self.zero = 0
        self.one = 1 % p

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise DivisionByZero("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def eq(self, a, b):
        return a % self.p == b % self.p

    def is_zero(self, a):
        return a % self.p == 0

    def from_int(self, n):
        return n % self.p

    def elements(self):
        return range(self.p)


@lru_cache(maxsize=None)
def _prime_field(p):
    return Zp(p)


def irreducible_over(F, poly):
    """Trial-division irreducibility test for a monic polynomial over a finite field."""
    d = polys.deg(poly)
    if d <= 0:
        return False
    if d == 1:
        return True
    for g in monic_polys(F, 1, polys.deg(poly) // 2):
        if irreducible_cached_check(F, g) and not polys.pmod(F, poly, g):
            return False
    return True


def monic_polys(F, lo, hi):
    """Yield all monic polynomials of degree lo..hi, in lex order of coefficients."""
    elts = list(F.elements())
    for d in range(lo, hi + 1):
        idx = [0] * d
        while True:
            yield tuple(elts[i] for i in idx) + (F.one,)
            k = 0
            while k < d:
                idx[k] += 1
                if idx[k] < len(elts):
                    break
                idx[k] = 0
                k += 1
            else:
                break
            if k == d:
                break


def irreducible_cached_check(F, g):
    # low-degree guard used inside the trial-division loop; degree 1 always irreducible
    if polys.deg(g) == 1:
        return True
    for h in monic_polys(F, 1, polys.deg(g) // 2):
        if polys.deg(h) < polys.deg(g) and not polys.pmod(F, g, h):
            return False
    return True


def irreducibles(F, d):
    """All monic irreducible polynomials of degree d over a finite field F."""
    return [g for g in monic_polys(F, d, d) if irreducible_over(F, g)]


@lru_cache(maxsize=None)
def canonical_modulus(p, k):
    """The lexicographically minimal monic irreducible of degree k over GF(p)."""
    F = _prime_field(p)
    if k == 1:
        return (0, 1)
    for g in monic_polys(F, k, k):
        if irreducible_over(F, g):
            return g
    raise TowerFormsError(f"no irreducible of degree {k} over GF({p})")  # unreachable


class Fq:
    """GF(p^k) as GF(p)[X]/(modulus); raws are little-endian int tuples."""

    def __init__(self, p, k, modulus=None):
        if p == 2:
            raise TowerFormsError("even characteristic is not supported")
        self.p = p
        self.k = k
        self.base = _prime_field(p)
        if modulus is None:
            modulus = canonical_modulus(p, k)
        modulus = polys.trim(self.base, modulus)
        if polys.deg(modulus) != k or not self.base.eq(modulus[-1], 1):
            raise TowerFormsError("modulus must be monic of the stated degree")
        if k > 1 and not irreducible_over(self.base, modulus):
            raise TowerFormsError("modulus is not irreducible")
        self.modulus = modulus
        self.order = p ** k
        self.zero = ()
        self.one = (1,)

    def add(self, a, b):
        return polys.padd(self.base, a, b)

    def neg(self, a):
        return polys.pneg(self.base, a)

    def sub(self, a, b):
        return polys.psub(self.base, a, b)

    def mul(self, a, b):
        return polys.pmod(self.base, polys.pmul(self.base, a, b), self.modulus)

    def inv(self, a):
        if not a:
            raise DivisionByZero("inverse of zero")
        g, s, _ = polys.pxgcd(self.base, a, self.modulus)
        if polys.deg(g) != 0:
            raise DivisionByZero("element not invertible")
        return polys.pmod(self.base, polys.pscale(self.base, s, self.base.inv(g[0])),
                          self.modulus)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return a == ()

    def from_int(self, n):
        return polys.const(self.base, n % self.p)

    def pow_(self, a, n):
        if n < 0:
            return self.pow_(self.inv(a), -n)
        result = self.one
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def elements(self):
        for i in range(self.order):
            digits = []
            n = i
            for _ in range(self.k):
                digits.append(n % self.p)
                n //= self.p
            yield polys.trim(self.base, digits)

    def is_square(self, a):
        """Euler criterion; a must be nonzero."""
        return self.pow_(a, (self.order - 1) // 2) == self.one

    def sqrt(self, a):
        """Some square root of a, or None.  Brute force; fields here are small."""
        if self.is_zero(a):
            return self.zero
        for x in self.elements():
            if self.mul(x, x) == a:
                return x
        return None
