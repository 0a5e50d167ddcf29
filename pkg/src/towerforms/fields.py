"""Field towers, exact elements, valuations, residues and square classes.

A tower is a finite base field GF(p^k) (odd p) with an ordered stack of
transcendental levels.  A LaurentSeries level carries henselian t-adic
semantics; a RationalFunction level carries global semantics.  Elements are
held exactly as reduced fractions of polynomials in the outermost level
symbol, with coefficients one level down; for a Laurent level this is the
dense subfield K(t) of K((t)), which suffices because every decision made
here factors through valuations and residues of unit parts.
"""

import random
from dataclasses import dataclass, field
from functools import cached_property

from . import polys
from .errors import (DivisionByZero, NotIntegralUnit, TowerFormsError,
                     TowerMismatch, UnsupportedLevel, ZeroArgument)
from .ffield import Fq, _is_prime

LAURENT = "laurent"
RATFUNC = "ratfunc"


@dataclass(frozen=True)
class LevelDescriptor:
    symbol: str
    kind: str

    def __post_init__(self):
        if self.kind not in (LAURENT, RATFUNC):
            raise TowerFormsError(f"unknown level kind {self.kind!r}")


class FracField:
    """Field of fractions of polynomials over an inner field object.

    Raws are (num, den) pairs of coefficient tuples; den is monic and
    coprime to num, zero is ((), (one,)).
    """

    def __init__(self, inner, symbol):
        self.inner = inner
        self.symbol = symbol
        self.zero = ((), (inner.one,))
        self.one = ((inner.one,), (inner.one,))
        self.gen = ((inner.zero, inner.one), (inner.one,))

    def make(self, num, den):
        F = self.inner
        num = polys.trim(F, num)
        den = polys.trim(F, den)
        if not den:
            raise DivisionByZero("zero denominator")
        if not num:
            return self.zero
        g = polys.pgcd(F, num, den)
        if polys.deg(g) > 0:
            num = polys.pdivmod(F, num, g)[0]
            den = polys.pdivmod(F, den, g)[0]
        lead = den[-1]
        if not F.eq(lead, F.one):
            inv = F.inv(lead)
            num = polys.pscale(F, num, inv)
            den = polys.pscale(F, den, inv)
        return (num, den)

    def add(self, a, b):
        F = self.inner
        return self.make(
            polys.padd(F, polys.pmul(F, a[0], b[1]), polys.pmul(F, b[0], a[1])),
            polys.pmul(F, a[1], b[1]))

    def neg(self, a):
        return (polys.pneg(self.inner, a[0]), a[1])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        F = self.inner
        return self.make(polys.pmul(F, a[0], b[0]), polys.pmul(F, a[1], b[1]))

    def inv(self, a):
        if not a[0]:
            raise DivisionByZero("inverse of zero")
        return self.make(a[1], a[0])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return a[0] == ()

    def from_int(self, n):
        c = self.inner.from_int(n)
        return ((c,), (self.inner.one,)) if not self.inner.is_zero(c) else self.zero

    def const(self, c):
        """Embed an inner-field raw as a constant fraction."""
        if self.inner.is_zero(c):
            return self.zero
        return ((c,), (self.inner.one,))


@dataclass(frozen=True)
class FieldTower:
    """GF(p^k) plus an ordered stack of transcendental levels (innermost first)."""

    base_char: int
    base_degree: int = 1
    levels: tuple = ()
    base_modulus: tuple = None

    def __post_init__(self):
        if self.base_char == 2 or not _is_prime(self.base_char):
            raise TowerFormsError("base characteristic must be an odd prime")
        if self.base_degree < 1:
            raise TowerFormsError("base degree must be positive")
        object.__setattr__(self, "levels", tuple(self.levels))
        syms = [lv.symbol for lv in self.levels]
        if len(set(syms)) != len(syms):
            raise TowerFormsError("level symbols must be pairwise distinct")
        for i, lv in enumerate(self.levels):
            if lv.kind == RATFUNC and i != len(self.levels) - 1:
                raise TowerFormsError("a RationalFunction level must be outermost")

    @cached_property
    def chain(self):
        """Field objects from the base outward; chain[-1] is the element field."""
        fields = [Fq(self.base_char, self.base_degree, self.base_modulus)]
        for lv in self.levels:
            fields.append(FracField(fields[-1], lv.symbol))
        return fields

    @property
    def ops(self):
        return self.chain[-1]

    @property
    def q(self):
        return self.base_char ** self.base_degree

    def drop_outer(self, n=1):
        """The tower with the outermost n levels removed."""
        return FieldTower(self.base_char, self.base_degree, self.levels[:-n] if n else self.levels,
                          self.base_modulus)

    def laurent_rank(self):
        return sum(1 for lv in self.levels if lv.kind == LAURENT)

    def element(self, raw):
        return Element(self, raw)

    def from_int(self, n):
        return Element(self, self.ops.from_int(n))

    @property
    def zero(self):
        return Element(self, self.ops.zero)

    @property
    def one(self):
        return Element(self, self.ops.one)

    def gen(self, symbol):
        """The element given by a level symbol."""
        for idx, lv in enumerate(self.levels):
            if lv.symbol == symbol:
                raw = self.chain[idx + 1].gen
                for j in range(idx + 1, len(self.levels)):
                    raw = self.chain[j + 1].const(raw)
                return Element(self, raw)
        raise TowerFormsError(f"unknown symbol {symbol!r}")

    def embed(self, elem):
        """Embed an element of an inner prefix tower into this tower."""
        inner = elem.tower
        if (inner.base_char, inner.base_degree, inner.base_modulus) != \
                (self.base_char, self.base_degree, self.base_modulus) or \
                inner.levels != self.levels[:len(inner.levels)]:
            raise TowerMismatch("not an inner prefix tower")
        raw = elem.raw
        for j in range(len(inner.levels), len(self.levels)):
            raw = self.chain[j + 1].const(raw)
        return Element(self, raw)

    def describe(self):
        s = f"GF({self.q})"
        for lv in self.levels:
            s += f"(({lv.symbol}))" if lv.kind == LAURENT else f"({lv.symbol})"
        return s


class Element:
    """An exact element of a FieldTower, in canonical form."""

    __slots__ = ("tower", "raw")

    def __init__(self, tower, raw):
        self.tower = tower
        self.raw = raw

    def _coerce(self, other):
        if isinstance(other, int):
            return self.tower.from_int(other)
        if not isinstance(other, Element):
            return NotImplemented
        if other.tower != self.tower:
            raise TowerMismatch(
                f"{self.tower.describe()} vs {other.tower.describe()}")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Element(self.tower, self.tower.ops.add(self.raw, other.raw))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Element(self.tower, self.tower.ops.sub(self.raw, other.raw))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Element(self.tower, self.tower.ops.mul(self.raw, other.raw))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Element(self.tower, self.tower.ops.div(self.raw, other.raw))

    def __rtruediv__(self, other):
        return self._coerce(other).__truediv__(self)

    def __neg__(self):
        return Element(self.tower, self.tower.ops.neg(self.raw))

    def __pow__(self, n):
        if n < 0:
            return (self.tower.one / self) ** (-n)
        result = self.tower.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.tower.from_int(other)
        if not isinstance(other, Element):
            return NotImplemented
        return self.tower == other.tower and self.raw == other.raw

    def __hash__(self):
        return hash((self.tower, self.raw))

    def is_zero(self):
        return self.tower.ops.is_zero(self.raw)

    def __repr__(self):
        return f"<{format_element(self)} in {self.tower.describe()}>"


def arith(a, b, op):
    """Spec-facing arithmetic dispatcher."""
    if a.tower != b.tower:
        raise TowerMismatch("elements of different towers")
    return {"add": a.__add__, "sub": a.__sub__,
            "mul": a.__mul__, "div": a.__truediv__}[op](b)


# ---------------------------------------------------------------------------
# valuation / residue


def _level_valuation(field, raw):
    """t-adic valuation of a nonzero fraction at the outermost symbol."""
    num, den = raw
    F = field.inner
    return polys.pshift_order(F, num) - polys.pshift_order(F, den)


def _level_unit_residue(field, raw, shift):
    """Residue of raw * t^(-shift); raw must have valuation == shift."""
    num, den = raw
    F = field.inner
    on, od = polys.pshift_order(F, num), polys.pshift_order(F, den)
    num = num[on:]
    den = den[od:]
    return F.div(num[0], den[0])


def valuation(tower, a):
    """Composed valuation vector over all Laurent levels, outermost first."""
    if a.is_zero():
        raise ZeroArgument("valuation of zero")
    if tower.laurent_rank() < 1:
        raise UnsupportedLevel("tower has no LaurentSeries level")
    raw = a.raw
    out = []
    for i in range(len(tower.levels) - 1, -1, -1):
        lv = tower.levels[i]
        f = tower.chain[i + 1]
        if lv.kind == RATFUNC:
            num, den = raw
            if polys.deg(num) > 0 or polys.deg(den) > 0:
                raise UnsupportedLevel(
                    "element involves the RationalFunction variable")
            raw = f.inner.div(num[0], den[0]) if num else f.inner.zero
            continue
        v = _level_valuation(f, raw)
        out.append(v)
        raw = _level_unit_residue(f, raw, v)
    return tuple(out)


def residue(tower, a):
    """Image of an integral unit (or zero) in the residue tower."""
    rt = _residue_tower(tower)
    if a.is_zero():
        return rt.zero
    idx = len(tower.levels) - 1
    f = tower.chain[idx + 1]
    raw = a.raw
    v = _level_valuation(f, raw)
    if v != 0:
        raise NotIntegralUnit(f"valuation {v} != 0")
    return Element(rt, _level_unit_residue(f, raw, 0))


def _residue_tower(tower):
    if not tower.levels or tower.levels[-1].kind != LAURENT:
        raise UnsupportedLevel("outermost level is not LaurentSeries")
    return tower.drop_outer()


def is_square(tower, a):
    """Square-class decision under the tower's semantics."""
    if a.is_zero():
        raise ZeroArgument("square class of zero")
    return _is_square_raw(tower, len(tower.levels), a.raw)


def _is_square_raw(tower, depth, raw):
    f = tower.chain[depth]
    if depth == 0:
        return f.is_square(raw)
    lv = tower.levels[depth - 1]
    if lv.kind == LAURENT:
        v = _level_valuation(f, raw)
        if v % 2:
            return False
        return _is_square_raw(tower, depth - 1, _level_unit_residue(f, raw, v))
    # global rational-function semantics: num*den must be a square up to
    # a square leading coefficient one level down
    F = f.inner
    g = polys.pmul(F, raw[0], raw[1])
    lead = g[-1]
    monic = polys.pscale(F, g, F.inv(lead))
    if polys.psqrt(F, monic) is None:
        return False
    return _is_square_raw(tower, depth - 1, lead)


def try_sqrt(tower, a):
    """Exact square root within the represented subfield, or None.

    Over a Laurent level this can fail even when is_square holds: the
    henselian square root need not lie in K(t).
    """
    if a.is_zero():
        return tower.zero
    raw = _try_sqrt_raw(tower, len(tower.levels), a.raw)
    return None if raw is None else Element(tower, raw)


def _try_sqrt_raw(tower, depth, raw):
    f = tower.chain[depth]
    if depth == 0:
        return f.sqrt(raw) if f.is_square(raw) else None
    F = f.inner
    num, den = raw
    ln, ld = num[-1], den[-1]
    lead = F.div(ln, ld)
    mn = polys.pscale(F, num, F.inv(ln))
    md = polys.pscale(F, den, F.inv(ld))
    rn = polys.psqrt(F, mn)
    rd = polys.psqrt(F, md)
    if rn is None or rd is None:
        return None
    rl = _try_sqrt_raw(tower, depth - 1, lead)
    if rl is None:
        return None
    return f.mul(f.make(rn, rd), f.const(rl))


def newton_sqrt(tower, a, precision):
    """An element s of the tower with val(s^2 - a) >= precision.

    a must be a square under henselian semantics with even valuation at the
    outermost Laurent level.  Iteration happens in exact field arithmetic;
    only the agreement with the true square root is truncated.
    """
    exact = try_sqrt(tower, a)
    if exact is not None:
        return exact
    if not tower.levels or tower.levels[-1].kind != LAURENT:
        raise TowerFormsError("newton_sqrt needs an outermost Laurent level")
    t = tower.gen(tower.levels[-1].symbol)
    v = valuation(tower, a)[0]
    if v % 2:
        raise TowerFormsError("odd valuation: not a square")
    unit = a * t ** (-v)
    r0 = residue(tower, unit)
    rt = _residue_tower(tower)
    s_res = try_sqrt(rt, r0)
    if s_res is None:
        s_res = newton_sqrt(rt, r0, precision)
    s = tower.embed(s_res)
    two = tower.from_int(2)
    while True:
        err = s * s - unit
        if err.is_zero() or valuation(tower, err)[0] >= precision:
            break
        s = (s + unit / s) / two
    return s * t ** (v // 2)


# ---------------------------------------------------------------------------
# sampling


@dataclass(frozen=True)
class SampleBudget:
    """Complexity bound for the deterministic element sampler."""

    max_val: int = 2       # Laurent exponent range [-max_val, max_val]
    max_deg: int = 2       # polynomial degree bound at RationalFunction levels
    series_terms: int = 2  # extra unit-part terms at Laurent levels


def sample(tower, budget=SampleBudget(), seed=0):
    """Deterministic pseudorandom nonzero element within the budget."""
    rng = random.Random((seed, tower.describe()).__repr__())
    return Element(tower, _sample_raw(tower, len(tower.levels), budget, rng))


def _sample_raw(tower, depth, budget, rng):
    f = tower.chain[depth]
    if depth == 0:
        elts = [e for e in f.elements() if not f.is_zero(e)]
        return rng.choice(elts)
    lv = tower.levels[depth - 1]
    if lv.kind == LAURENT:
        e = rng.randint(-budget.max_val, budget.max_val)
        coeffs = [_sample_raw(tower, depth - 1, budget, rng)]
        for _ in range(rng.randint(0, budget.series_terms)):
            c = _sample_raw(tower, depth - 1, budget, rng) \
                if rng.random() < 0.7 else f.inner.zero
            coeffs.append(c)
        unit = f.make(tuple(coeffs), (f.inner.one,))
        tpow = f.gen if e >= 0 else f.inv(f.gen)
        raw = unit
        for _ in range(abs(e)):
            raw = f.mul(raw, tpow)
        return raw
    # rational-function level: ratio of random polynomials
    def rand_poly(force_nonzero):
        d = rng.randint(0, budget.max_deg)
        coeffs = [_sample_raw(tower, depth - 1, budget, rng)
                  if rng.random() < 0.8 else f.inner.zero for _ in range(d + 1)]
        if force_nonzero and all(f.inner.is_zero(c) for c in coeffs):
            coeffs[0] = _sample_raw(tower, depth - 1, budget, rng)
        return tuple(coeffs)
    num = rand_poly(True)
    den = rand_poly(True)
    return f.make(num, den)


def sample_unit(tower, budget=SampleBudget(), seed=0):
    """A sampled element scaled to valuation zero at every Laurent level."""
    a = sample(tower, budget, seed)
    if not tower.laurent_rank() or any(lv.kind == RATFUNC for lv in tower.levels):
        return a
    v = valuation(tower, a)
    syms = [lv.symbol for lv in reversed(tower.levels)]
    for comp, s in zip(v, syms):
        if comp:
            a = a * tower.gen(s) ** (-comp)
    return a


# ---------------------------------------------------------------------------
# formatting


def format_element(a):
    return _format_raw(a.tower, len(a.tower.levels), a.raw)


def _format_poly(tower, depth, poly, sym):
    if not poly:
        return "0"
    parts = []
    for i, c in enumerate(poly):
        f = tower.chain[depth]
        if f.is_zero(c):
            continue
        cs = _format_raw(tower, depth, c)
        if i == 0:
            parts.append(cs)
        else:
            xs = sym if i == 1 else f"{sym}^{i}"
            parts.append(xs if cs == "1" else f"{_par(cs)}*{xs}")
    return " + ".join(parts)


def _par(s):
    return f"({s})" if ("+" in s or "-" in s or "*" in s or "/" in s) else s


def _format_raw(tower, depth, raw):
    if depth == 0:
        f = tower.chain[0]
        if f.k == 1:
            return str(raw[0] if raw else 0)
        return _format_poly_base(tower, raw)
    sym = tower.levels[depth - 1].symbol
    num, den = raw
    ns = _format_poly(tower, depth - 1, num, sym)
    if den == (tower.chain[depth - 1].one,):
        return ns
    ds = _format_poly(tower, depth - 1, den, sym)
    return f"{_par(ns)}/{_par(ds)}"


def _format_poly_base(tower, raw):
    if not raw:
        return "0"
    parts = []
    for i, c in enumerate(raw):
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            xs = "g" if i == 1 else f"g^{i}"
            parts.append(xs if c == 1 else f"{c}*{xs}")
    return " + ".join(parts)
