"""Places of GF(q)(X), completions, and Hasse-Minkowski isotropy.

A form over the rational function field is isotropic iff it is isotropic in
every completion; since the residue fields are finite, each local check is a
rank-1 Springer decomposition over GF(q^deg).  Forms of dimension >= 5 are
always isotropic (the u-invariant of a global function field is 4), so only
the places supporting some diagonal entry ever need to be inspected.

Place machinery is implemented for prime base fields GF(p)(X) only: residue
fields at a degree-m place are realized as GF(p^m) with the place polynomial
as defining modulus, which needs prime-field coefficients.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache

from . import fields as fl
from . import ffield, polys, qforms
from .errors import (BudgetExceeded, ConfigUnsupported, TowerFormsError,
                     ZeroArgument)

INFINITY = "infinity"
FINITE = "finite"


@dataclass(frozen=True)
class Place:
    kind: str
    poly: tuple = None  # monic irreducible, little-endian GF(p) ints

    @property
    def degree(self):
        return 1 if self.kind == INFINITY else len(self.poly) - 1

    def describe(self):
        if self.kind == INFINITY:
            return "Infinity"
        return _poly_str(self.poly)


def _poly_str(f):
    if not f:
        return "0"
    parts = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            head = "" if c == 1 else str(c) + "*"
            parts.append(f"{head}X" if i == 1 else f"{head}X^{i}")
    return " + ".join(parts)


def _global_base(tower):
    """Validate a GF(p)(X) tower and return (p, Zp, ratfunc symbol)."""
    if len(tower.levels) != 1 or tower.levels[0].kind != fl.RATFUNC:
        raise ConfigUnsupported("places are defined over GF(q)(X) towers only")
    if tower.base_degree != 1:
        raise ConfigUnsupported("place machinery needs a prime base field")
    return tower.base_char, tower.chain[0].base, tower.levels[0].symbol


def _to_int_poly(f):
    # ratfunc numerators/denominators carry GF(p^1) raws (length-<=1 tuples)
    return tuple(c[0] if c else 0 for c in f)


def _from_int_poly(f):
    return tuple((c,) if c else () for c in f)


def _frac_raw(elem):
    num, den = elem.raw
    return _to_int_poly(num), _to_int_poly(den)


@lru_cache(maxsize=None)
def _factor_monic(p, f):
    """Factor a monic polynomial over GF(p) into {irreducible: multiplicity}."""
    F = ffield_prime(p)
    out = {}
    rem = f
    d = 1
    while polys.deg(rem) > 0:
        if 2 * d > polys.deg(rem):
            out[rem] = out.get(rem, 0) + 1
            break
        for g in _irreducibles(p, d):
            while polys.deg(rem) >= d and not polys.pmod(F, rem, g):
                rem = polys.pdivmod(F, rem, g)[0]
                out[g] = out.get(g, 0) + 1
        d += 1
    return out


def ffield_prime(p):
    return ffield._prime_field(p)


@lru_cache(maxsize=None)
def _irreducibles(p, d):
    return tuple(ffield.irreducibles(ffield_prime(p), d))


def factor(p, f):
    """Factor a nonzero GF(p)[X] polynomial: (leading unit, {irred: mult})."""
    F = ffield_prime(p)
    f = polys.trim(F, f)
    if not f:
        raise ZeroArgument("cannot factor the zero polynomial")
    lc = f[-1]
    return lc, _factor_monic(p, polys.pmonic(F, f))


def places_of_interest(q):
    p, _, _ = _global_base(q.tower)
    finite = set()
    for d in q.diag:
        num, den = _frac_raw(d)
        for f in (num, den):
            if polys.deg(f) > 0:
                finite.update(factor(p, f)[1])
    places = sorted((Place(FINITE, f) for f in finite),
                    key=lambda P: (P.degree, P.poly))
    places.append(Place(INFINITY))
    return places


def places_for_elements(tower, elems):
    """Support of a list of field elements (used by the product formula)."""
    diag = tuple(e for e in elems if not e.is_zero())
    return places_of_interest(qforms.QuadraticForm(tower, diag))


# ---------------------------------------------------------------------------
# localization


def residue_tower(tower, place):
    p, _, _ = _global_base(tower)
    if place.degree == 1:
        return fl.FieldTower(p, 1)
    return fl.FieldTower(p, place.degree, base_modulus=place.poly)


def place_valuation(tower, place, elem):
    p, F, _ = _global_base(tower)
    if elem.is_zero():
        raise ZeroArgument("valuation of zero")
    num, den = _frac_raw(elem)
    if place.kind == INFINITY:
        return polys.deg(den) - polys.deg(num)
    mult = 0
    for f, sign in ((num, 1), (den, -1)):
        while not polys.pmod(F, f, place.poly):
            f = polys.pdivmod(F, f, place.poly)[0]
            mult += sign
    return mult


def place_residue_unit(tower, place, elem):
    """Residue of the unit part elem / pi^v in the residue tower."""
    p, F, _ = _global_base(tower)
    if elem.is_zero():
        raise ZeroArgument("residue of zero")
    num, den = _frac_raw(elem)
    rt = residue_tower(tower, place)
    if place.kind == INFINITY:
        return rt.element((num[-1],)) / rt.element((den[-1],))
    parts = []
    for f in (num, den):
        while not polys.pmod(F, f, place.poly):
            f = polys.pdivmod(F, f, place.poly)[0]
        parts.append(polys.pmod(F, f, place.poly))
    return rt.element(tuple(parts[0])) / rt.element(tuple(parts[1]))


@dataclass(frozen=True)
class Completion:
    place: Place
    residue_tower: fl.FieldTower
    entries: tuple  # per diagonal entry: (valuation, unit residue Element)


def localize(q, place):
    rt = residue_tower(q.tower, place)
    entries = tuple((place_valuation(q.tower, place, d),
                     place_residue_unit(q.tower, place, d))
                    for d in q.diag)
    return Completion(place, rt, entries)


def _finite_anisotropic_dim(tower, diag):
    """Anisotropic dimension of a diagonal form over a finite field."""
    n = len(diag)
    if n == 0:
        return 0
    if n % 2 == 1:
        return 1
    det = tower.one
    for d in diag:
        det = det * d
    signed = det if (n // 2) % 2 == 0 else -det
    return 0 if fl.is_square(tower, signed) else 2


def local_anisotropic_dimension(comp):
    parts = {0: [], 1: []}
    for v, r in comp.entries:
        parts[v % 2].append(r)
    return (_finite_anisotropic_dim(comp.residue_tower, parts[0])
            + _finite_anisotropic_dim(comp.residue_tower, parts[1]))


def local_is_isotropic(comp):
    return local_anisotropic_dimension(comp) < len(comp.entries)


# ---------------------------------------------------------------------------
# global decisions


def is_isotropic_global(q):
    if q.dim >= 5:
        return True
    if q.dim == 1:
        return False
    if q.dim == 2:
        return fl.is_square(q.tower, -(q.diag[0] * q.diag[1]))
    return all(local_is_isotropic(localize(q, P))
               for P in places_of_interest(q))


def anisotropic_dimension_global(q):
    """dim of the anisotropic kernel, from local data.

    Over a field with no real places the global anisotropic dimension is the
    maximum of the local ones: every anisotropic kernel of dimension >= 2
    stays anisotropic in some completion (dim >= 3 by Hasse-Minkowski, dim 2
    because a global non-square is a non-square at some place), and places
    outside the support contribute at most the parity/discriminant floor
    accounted for by the global discriminant test.
    """
    n = q.dim
    best = n % 2
    if n % 2 == 0:
        det = q.det()
        signed = det if (n // 2) % 2 == 0 else -det
        if not fl.is_square(q.tower, signed):
            best = 2
    for P in places_of_interest(q):
        best = max(best, local_anisotropic_dimension(localize(q, P)))
    return best


def witt_index_global(q):
    return (q.dim - anisotropic_dimension_global(q)) // 2


def hyperbolic_global(q):
    return q.dim % 2 == 0 and anisotropic_dimension_global(q) == 0


def global_isotropy_report(q):
    places = []
    for P in places_of_interest(q):
        comp = localize(q, P)
        places.append({
            "place": P.describe(),
            "degree": P.degree,
            "isotropic": local_is_isotropic(comp),
            "entries": [[v, fl.format_element(r)] for v, r in comp.entries],
        })
    return {"field": q.tower.describe(),
            "dim": q.dim,
            "isotropic": is_isotropic_global(q),
            "places": places}


# ---------------------------------------------------------------------------
# Hilbert symbol


def hilbert_symbol(a, b, v):
    if a.is_zero() or b.is_zero():
        raise ZeroArgument("Hilbert symbol needs nonzero arguments")
    if isinstance(v, Place):
        tower = a.tower
        va = place_valuation(tower, v, a)
        vb = place_valuation(tower, v, b)
        rt = residue_tower(tower, v)
        ra = place_residue_unit(tower, v, a)
        rb = place_residue_unit(tower, v, b)
    else:
        if v.rank != 1:
            raise ConfigUnsupported("Hilbert symbol needs a rank-1 valuation")
        rt = v.residue_tower
        if rt.levels:
            raise ConfigUnsupported("Hilbert symbol needs a finite residue field")
        va = v.value_vector(a)[0]
        vb = v.value_vector(b)[0]
        pi = v.monomial((1,))
        ra = v.residue(a / pi ** va)
        rb = v.residue(b / pi ** vb)
    sign = rt.one if (va * vb) % 2 == 0 else -rt.one
    sym = sign * ra ** vb * rb ** (-va)
    return 1 if fl.is_square(rt, sym) else -1


# ---------------------------------------------------------------------------
# explicit witnesses and Witt decomposition


def square_class_rep(tower, elem):
    """(s, c) with elem = s*c^2 and s a squarefree-polynomial representative."""
    p, F, _ = _global_base(tower)
    if elem.is_zero():
        raise ZeroArgument("square class of zero")
    num, den = _frac_raw(elem)
    support = {}
    for f, sign in ((num, 1), (den, -1)):
        _, fac = factor(p, f)
        for g, m in fac.items():
            support[g] = support.get(g, 0) + sign * m
    s = (1,)
    for g in sorted(g for g, m in support.items() if m % 2):
        s = polys.pmul(F, s, g)
    s_elem = _embed_poly(tower, s)
    root = fl.try_sqrt(tower, elem / s_elem)
    if root is None:
        nu = _nonsquare_constant(p)
        s = polys.pscale(F, s, nu)
        s_elem = _embed_poly(tower, s)
        root = fl.try_sqrt(tower, elem / s_elem)
        if root is None:
            raise TowerFormsError("internal: square class reduction failed")
    return s, root


def _nonsquare_constant(p):
    F = ffield_prime(p)
    for c in range(2, p):
        if pow(c, (p - 1) // 2, p) != 1:
            return c
    raise TowerFormsError("internal: no non-square in GF(p)")  # p odd


def _embed_poly(tower, f):
    num = _from_int_poly(f)
    return tower.element((tuple(num), ((1,),)))


def isotropic_vector_global(q, degree_cap=12, side_cap=400_000):
    """An explicit nontrivial zero over GF(p)(X), or None if q is anisotropic.

    Small isotropic subforms are tried first (binary ones give exact
    square-root witnesses, and any 5-dimensional subform is isotropic), then
    a meet-in-the-middle search over polynomial vectors of growing degree on
    the chosen subform.  Raises BudgetExceeded if the form is isotropic but
    no witness appears within the degree cap / enumeration budget.
    """
    if not is_isotropic_global(q):
        return None
    n = q.dim
    tower = q.tower
    for i, j in itertools.combinations(range(n), 2):
        root = fl.try_sqrt(tower, -(q.diag[j] / q.diag[i]))
        if root is not None:
            vec = [tower.zero] * n
            vec[i], vec[j] = root, tower.one
            return tuple(vec)
    def iso_subsets(k):
        return [idx for idx in itertools.combinations(range(n), k)
                if is_isotropic_global(
                    qforms.QuadraticForm(tower, tuple(q.diag[i] for i in idx)))]

    candidates = []
    if n >= 4:
        candidates = iso_subsets(3)
        if not candidates:
            candidates = iso_subsets(4)
    if n >= 5:
        candidates.append(tuple(range(5)))
    elif not candidates:
        candidates.append(tuple(range(n)))
    found = _subform_witness(q, candidates, degree_cap, side_cap)
    assert q.evaluate(found).is_zero()
    return found


def _subform_witness(q, candidates, degree_cap, side_cap):
    p, F, _ = _global_base(q.tower)
    preps = {idx: [square_class_rep(q.tower, q.diag[i]) for i in idx]
             for idx in candidates}
    exhausted = True
    for D in range(degree_cap + 1):
        exhausted = True
        for idx in candidates:
            reps = preps[idx]
            sq = [s for s, _ in reps]
            k = len(idx)
            half = (k + 1) // 2
            if (p ** (D + 1)) ** half > side_cap:
                continue
            exhausted = False
            vec = _mitm_search(p, F, sq, half, D)
            if vec is not None:
                out = [q.tower.zero] * q.dim
                for pos, (s, c), y in zip(idx, reps, vec):
                    if y:
                        out[pos] = _embed_poly(q.tower, y) / c
                return tuple(out)
        if exhausted:
            break
    if exhausted:
        raise BudgetExceeded("witness search budget exhausted")
    raise BudgetExceeded(f"no witness up to degree {degree_cap}")


def _mitm_search(p, F, sq, half, max_deg):
    """Find polynomial y with sum sq[i]*y_i^2 = 0, each deg(y_i) <= max_deg."""
    table = {}
    for right in _poly_vectors(p, len(sq) - half, max_deg):
        acc = ()
        for s, y in zip(sq[half:], right):
            acc = polys.padd(F, acc, polys.pmul(F, s, polys.pmul(F, y, y)))
        table.setdefault(polys.pneg(F, acc), right)
    for left in _poly_vectors(p, half, max_deg):
        acc = ()
        for s, y in zip(sq, left):
            acc = polys.padd(F, acc, polys.pmul(F, s, polys.pmul(F, y, y)))
        right = table.get(acc)
        if right is not None:
            vec = left + right
            if any(vec):
                return vec
    return None


def _poly_vectors(p, coords, max_deg):
    F = ffield_prime(p)
    coeffs = list(itertools.product(range(p), repeat=max_deg + 1))
    single = [polys.trim(F, c) for c in coeffs]
    return itertools.product(single, repeat=coords)


def witt_decompose_global(q):
    index = 0
    current = q
    while current is not None and is_isotropic_global(current):
        z = isotropic_vector_global(current)
        current = qforms.split_hyperbolic(current, z)
        if current is not None:
            # keep entries small across rounds: squarefree representatives
            current = qforms.QuadraticForm(
                current.tower,
                tuple(_embed_poly(q.tower, square_class_rep(q.tower, d)[0])
                      for d in current.diag))
        index += 1
    return qforms.WittDecomposition(current, index)
