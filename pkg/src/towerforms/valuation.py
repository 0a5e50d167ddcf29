"""Discrete-valuation machinery for Laurent levels of a tower.

Covers Springer decomposition into residue forms, residue-form extraction at
arbitrary nonzero elements, henselian lifting of isotropic vectors, F2
linear algebra on value vectors, and composition of valuations.  Rank-r
contexts view the outermost r Laurent levels as one composed valuation with
lexicographic value group Z^r.
"""

from dataclasses import dataclass
from functools import cached_property

from . import fields as fl
from . import qforms
from .errors import (SingularForm, TowerFormsError, TowerMismatch,
                     WitnessInvalid, ZeroArgument)


@dataclass(frozen=True)
class ValuationCtx:
    """The composed valuation over the outermost `rank` Laurent levels."""

    tower: fl.FieldTower
    rank: int = 1

    def __post_init__(self):
        # rank 0 is the trivial valuation (every element is a unit)
        if self.rank < 0 or self.rank > len(self.tower.levels):
            raise TowerFormsError("rank out of range")
        for lv in self.tower.levels[len(self.tower.levels) - self.rank:]:
            if lv.kind != fl.LAURENT:
                raise TowerFormsError(
                    "valuation context requires LaurentSeries levels")

    @cached_property
    def residue_tower(self):
        return self.tower.drop_outer(self.rank)

    @cached_property
    def symbols(self):
        """Uniformizer symbols, outermost first."""
        tail = self.tower.levels[len(self.tower.levels) - self.rank:]
        return tuple(lv.symbol for lv in reversed(tail))

    def value_vector(self, a):
        if a.is_zero():
            raise ZeroArgument("valuation of zero")
        return fl.valuation(self.tower, a)[:self.rank]

    def monomial(self, exponents):
        """prod t_i^e_i for an exponent vector, outermost first."""
        out = self.tower.one
        for s, e in zip(self.symbols, exponents):
            if e:
                out = out * self.tower.gen(s) ** e
        return out

    def residue(self, a):
        """Iterated residue of a unit down to the residue tower."""
        x = a
        tower = self.tower
        for _ in range(self.rank):
            x = fl.residue(tower, x)
            tower = tower.drop_outer()
        return x

    def coset_reps(self):
        """The 2^rank canonical representatives prod t_i^{e_i}, e in {0,1}^r."""
        out = []
        for mask in range(2 ** self.rank):
            eps = tuple((mask >> i) & 1 for i in range(self.rank - 1, -1, -1))
            out.append((eps, self.monomial(eps)))
        return out


@dataclass(frozen=True)
class ResidueDecomposition:
    ctx: ValuationCtx
    entries: tuple  # ((eps, rep_element, part_form_or_None), ...)

    def part(self, eps):
        for e, _, form in self.entries:
            if e == eps:
                return form
        return None

    def nonzero_parts(self):
        return [(e, rep, form) for e, rep, form in self.entries if form is not None]

    def to_json(self):
        out = []
        for eps, rep, form in self.entries:
            out.append({
                "pi": fl.format_element(rep),
                "form": [] if form is None else
                        [fl.format_element(d) for d in form.diag],
            })
        return out


def _unit_part_and_eps(ctx, d):
    """Scale d by squares so its valuation is the coset representative."""
    w = ctx.value_vector(d)
    eps = tuple(c % 2 for c in w)
    adj = ctx.monomial(tuple(-(wi - ei) for wi, ei in zip(w, eps)))
    unit = d * adj * ctx.monomial(eps) ** -1 if any(eps) else d * adj
    return eps, unit


def raw_springer_split(q, ctx):
    """Group diagonal entries by valuation class; residues of unit parts.

    Returns {eps: [(index, residue_element), ...]}.  This is the plain
    Springer grouping of the given diagonal, without first extracting the
    anisotropic kernel.
    """
    parts = {}
    for i, d in enumerate(q.diag):
        eps, unit = _unit_part_and_eps(ctx, d)
        parts.setdefault(eps, []).append((i, ctx.residue(unit)))
    return parts


def springer_decompose(q, ctx):
    """Residue decomposition of the anisotropic kernel of q."""
    if q.tower != ctx.tower:
        raise TowerMismatch("form and valuation live on different towers")
    q_an = q
    if qforms.is_isotropic(q):
        q_an = qforms.witt_decompose(q).anisotropic_kernel
    entries = []
    split = raw_springer_split(q_an, ctx) if q_an is not None else {}
    for eps, rep in ctx.coset_reps():
        part = split.get(eps)
        form = None
        if part:
            form = qforms.QuadraticForm(ctx.residue_tower,
                                        tuple(r for _, r in part))
        entries.append((eps, rep, form))
    return ResidueDecomposition(ctx, tuple(entries))


def residue_form(q, ctx, pi):
    """The residue form of q at pi, adjusted by the unit between pi and the
    canonical coset representative.  None encodes the zero form."""
    if pi.is_zero():
        raise ZeroArgument("pi must be nonzero")
    dec = springer_decompose(q, ctx)
    w = ctx.value_vector(pi)
    eps = tuple(c % 2 for c in w)
    part = dec.part(eps)
    if part is None:
        return None
    rep = ctx.monomial(eps)
    adj = ctx.monomial(tuple((wi - ei) for wi, ei in zip(w, eps)))
    mult = ctx.residue(rep * adj / pi)
    return qforms.scale(part, mult)


def f2_span(vectors, target):
    """Membership of target in the F2-span of the vectors' parity classes.

    Returns (in_span, basis) where basis is a maximal independent subset of
    the input vectors (as given, not reduced).
    """
    basis = []
    reduced = []

    def reduce(vec):
        v = [c % 2 for c in vec]
        for r in reduced:
            pivot = next((i for i, c in enumerate(r) if c), None)
            if pivot is not None and v[pivot]:
                v = [(a + b) % 2 for a, b in zip(v, r)]
        return v

    for vec in vectors:
        v = reduce(vec)
        if any(v):
            reduced.append(v)
            basis.append(tuple(vec))
    return not any(reduce(target)), basis


def f2_solve(vectors, target):
    """A set of indices I with sum over I of the vectors = target mod 2.

    Returns a list of indices, or None if target is outside the span.
    """
    rows = []  # (reduced vector, index set)
    for idx, vec in enumerate(vectors):
        v = [c % 2 for c in vec]
        combo = {idx}
        for r, rc in rows:
            pivot = next((i for i, c in enumerate(r) if c), None)
            if pivot is not None and v[pivot]:
                v = [(a + b) % 2 for a, b in zip(v, r)]
                combo ^= rc
        if any(v):
            rows.append((v, combo))
    t = [c % 2 for c in target]
    combo = set()
    for r, rc in rows:
        pivot = next((i for i, c in enumerate(r) if c), None)
        if pivot is not None and t[pivot]:
            t = [(a + b) % 2 for a, b in zip(t, r)]
            combo ^= rc
    if any(t):
        return None
    return sorted(combo)


@dataclass(frozen=True)
class LiftResult:
    vector: tuple  # Elements of ctx.tower
    exact: bool
    precision: int | None = None


def hensel_lift_isotropic(q, ctx, residue_witness, precision=16):
    """Lift an isotropic vector of the residue form of a unit-diagonal form.

    The residue witness x must satisfy q-bar(x) = 0, x != 0.  The lifted
    vector z satisfies q(z) = 0 exactly when the relevant discriminant has a
    square root in the represented subfield; otherwise z is Newton-refined
    and q(z) vanishes to at least the stated precision at the outermost
    uniformizer.
    """
    tower = ctx.tower
    rt = ctx.residue_tower
    units = []
    for d in q.diag:
        if any(ctx.value_vector(d)):
            raise TowerFormsError("diagonal entries must be units")
        units.append(ctx.residue(d))
    x_bar = tuple(residue_witness)
    if len(x_bar) != len(units) or all(c.is_zero() for c in x_bar):
        raise WitnessInvalid("witness must be a nonzero vector of matching length")
    val = rt.zero
    for u, c in zip(units, x_bar):
        val = val + u * c * c
    if not val.is_zero():
        raise WitnessInvalid("witness is not a zero of the residue form")
    j = next((i for i, c in enumerate(x_bar) if not (units[i] * c).is_zero()), None)
    if j is None:
        raise WitnessInvalid("residue form is singular at the witness")

    x = tuple(tower.embed(c) for c in x_bar)
    y = tuple(tower.one if i == j else tower.zero for i in range(len(units)))
    qx = _eval_diag(q, x)
    qy = q.diag[j]
    bxy = 2 * q.diag[j] * x[j]
    if qx.is_zero():
        return LiftResult(x, True)
    disc = bxy * bxy - 4 * qx * qy
    root = fl.try_sqrt(tower, disc)
    exact = root is not None
    if not exact:
        root = fl.newton_sqrt(tower, disc, precision)
    if not _vanishes_in_residue(ctx, root - bxy):
        root = -root
    # T = (-bxy + root)/(2 qy) is the root with residue 0
    T = (root - bxy) / (2 * qy)
    z = tuple(xi + T * yi for xi, yi in zip(x, y))
    if exact:
        check = _eval_diag(q, z)
        if not check.is_zero():
            raise TowerFormsError("internal: exact lift failed")
        return LiftResult(z, True)
    return LiftResult(z, False, precision)


def _vanishes_in_residue(ctx, a):
    """True if a maps to 0 in the residue tower (zero or lex-positive value)."""
    if a.is_zero():
        return True
    v = ctx.value_vector(a)
    return v > (0,) * ctx.rank


def _eval_diag(q, vec):
    total = q.tower.zero
    for d, c in zip(q.diag, vec):
        total = total + d * c * c
    return total


def compose(v_outer, v_inner):
    """Compose with a valuation on the residue tower; ranks add."""
    if v_inner.tower != v_outer.residue_tower:
        raise TowerMismatch("inner valuation must live on the residue tower")
    return ValuationCtx(v_outer.tower, v_outer.rank + v_inner.rank)
