"""Pfister symbols: expansion, rewriting, slot normalization, residues."""

import pytest

from towerforms import errors
from towerforms.fields import (LAURENT, SampleBudget, is_square, sample,
                               sample_unit, valuation as val)
from towerforms.pfister import (BilinearPfisterSymbol, QuadraticPfisterSymbol,
                                expand, expand_bilinear,
                                good_slot_presentation, normalize_last_slot,
                                pfister_residues, rewrite)
from towerforms.qforms import form, is_isotropic, isometric
from towerforms.valuation import ValuationCtx, springer_decompose
from conftest import tower


def test_expand_examples(gf3, gf3t):
    # <<0]] is the hyperbolic plane
    q = expand(QuadraticPfisterSymbol(gf3, (), gf3.zero))
    assert is_isotropic(q) and q.dim == 2

    # <<1]] over GF(3): <1, -(1+4)> = <1, 1>, anisotropic
    q = expand(QuadraticPfisterSymbol(gf3, (), gf3.one))
    assert q.diag == (gf3.one, gf3.one)
    assert not is_isotropic(q)

    # <<t, 1]] over GF(3)((t)): <1, -2, -t, 2t>, anisotropic
    t = gf3t.gen("t")
    q = expand(QuadraticPfisterSymbol(gf3t, (t,), gf3t.one))
    assert isometric(q, form(gf3t, 1, -2, -t, 2 * t))
    assert not is_isotropic(q)


def test_degenerate_last_datum_rejected(gf3):
    # 1 + 4b = 0 would make the binary part singular
    b = (gf3.zero - gf3.one) / gf3.from_int(4)
    with pytest.raises(errors.TowerFormsError):
        QuadraticPfisterSymbol(gf3, (), b)


def test_rewrite_examples(gf5t):
    t = gf5t.gen("t")
    s = BilinearPfisterSymbol(gf5t, (gf5t.from_int(2), t))
    out, _ = rewrite(s, ("swap", 1))
    assert out.slots == (t, gf5t.from_int(2))

    s = BilinearPfisterSymbol(gf5t, (t, t))
    out, _ = rewrite(s, ("merge", 1))
    assert out.slots == (2 * t, -(t * t))

    s = BilinearPfisterSymbol(gf5t, (2 * t, -(t * t)))
    out, _ = rewrite(s, ("square_scale", 2, t ** -1))
    assert out.slots == (2 * t, -gf5t.one)


def test_merge_requires_nonzero_sum(gf5t):
    t = gf5t.gen("t")
    s = BilinearPfisterSymbol(gf5t, (t, -t))
    with pytest.raises(errors.RuleNotApplicable):
        rewrite(s, ("merge", 1))


def test_rewrite_soundness_on_samples(gf3t):
    budget = SampleBudget()
    for seed in range(20):
        slots = tuple(sample(gf3t, budget, (seed, i)) for i in range(3))
        s = BilinearPfisterSymbol(gf3t, slots)
        for rule in (("swap", 1), ("swap", 2), ("square_scale", 1, gf3t.gen("t"))):
            out, trace = rewrite(s, rule)
            assert isometric(expand_bilinear(s), expand_bilinear(out))
            assert trace.replay(s).slots == out.slots
        if not (slots[0] + slots[1]).is_zero():
            out, _ = rewrite(s, ("merge", 1))
            assert isometric(expand_bilinear(s), expand_bilinear(out))


def test_normalize_examples(gf5t, gf3t):
    t = gf5t.gen("t")
    ctx = ValuationCtx(gf5t)
    s = BilinearPfisterSymbol(gf5t, (t, t))
    out, trace = normalize_last_slot(s, ctx)
    assert val(gf5t, out.slots[-1]) == (0,)
    assert isometric(expand_bilinear(s), expand_bilinear(out))

    # even valuation in the last slot: just a square rescaling
    t3 = gf3t.gen("t")
    u = gf3t.from_int(2)
    ctx3 = ValuationCtx(gf3t)
    s = BilinearPfisterSymbol(gf3t, (u, t3 ** 2 * u))
    out, _ = normalize_last_slot(s, ctx3)
    assert out.slots == (u, u)

    # already a unit: unchanged, empty trace
    s = BilinearPfisterSymbol(gf3t, (t3, u))
    out, trace = normalize_last_slot(s, ctx3)
    assert out.slots == s.slots and trace.steps == ()


def test_normalize_precondition_violation(gf3t):
    t = gf3t.gen("t")
    s = BilinearPfisterSymbol(gf3t, (gf3t.from_int(2), t))
    with pytest.raises(errors.PreconditionSpanViolated):
        normalize_last_slot(s, ValuationCtx(gf3t))


def _sample_in_span(T, ctx, fold, seed):
    """A bilinear symbol whose last-slot valuation lies in the span."""
    budget = SampleBudget()
    slots = [sample(T, budget, (seed, "s", i)) for i in range(fold - 1)]
    mix = T.one
    for i, a in enumerate(slots):
        if (seed + i) % 2:
            mix = mix * a
    last = mix * sample_unit(T, budget, (seed, "u")) \
        * sample(T, budget, (seed, "sq")) ** 2
    return BilinearPfisterSymbol(T, tuple(slots) + (last,))


@pytest.mark.parametrize("levels,rank", [((("t", LAURENT),), 1),
                                         ((("t", LAURENT), ("u", LAURENT)), 2)])
def test_normalize_postcondition_on_samples(levels, rank):
    T = tower(3, 1, *levels)
    ctx = ValuationCtx(T, rank)
    for seed in range(25):
        s = _sample_in_span(T, ctx, 2 + seed % 3, seed)
        out, trace = normalize_last_slot(s, ctx)
        assert ctx.value_vector(out.slots[-1]) == (0,) * rank
        assert isometric(expand_bilinear(s), expand_bilinear(out))
        assert trace.replay(s).slots == out.slots


def test_good_slot_examples(gf3t):
    t = gf3t.gen("t")
    ctx = ValuationCtx(gf3t)
    s = QuadraticPfisterSymbol(gf3t, (t,), gf3t.one)
    assert good_slot_presentation(s, ctx) == s

    # b = t^2: 1 + 4t^2 is a square in GF(3)((t)), the form is hyperbolic,
    # so the canonical good presentation is b = 0
    s = QuadraticPfisterSymbol(gf3t, (t,), t ** 2)
    out = good_slot_presentation(s, ctx)
    assert isometric(expand(s), expand(out))
    assert out.last.is_zero() or (
        ctx.value_vector(out.last) == (0,)
        and ctx.value_vector(1 + 4 * out.last) == (0,))

    gf7 = tower(7)
    s = QuadraticPfisterSymbol(gf7, (), gf7.from_int(3))
    assert good_slot_presentation(s, ValuationCtx(gf7, 0)) == s


def test_good_slot_nontrivial_b_valuation(gf3t):
    t = gf3t.gen("t")
    ctx = ValuationCtx(gf3t)
    s = QuadraticPfisterSymbol(gf3t, (t,), t)
    out = good_slot_presentation(s, ctx)
    assert isometric(expand(s), expand(out))
    if not out.last.is_zero():
        assert ctx.value_vector(out.last) == (0,)


def test_pfister_residue_examples(gf3t, gf3tu):
    t = gf3t.gen("t")
    ctx = ValuationCtx(gf3t)
    rep = pfister_residues(QuadraticPfisterSymbol(gf3t, (t,), gf3t.one), ctx)
    assert rep.m == 1
    assert rep.first_residue.slots == ()
    assert rep.first_residue.last == gf3t.drop_outer().one
    assert not is_isotropic(expand(rep.first_residue))

    ctx2 = ValuationCtx(gf3tu, 2)
    u, t2 = gf3tu.gen("u"), gf3tu.gen("t")
    rep = pfister_residues(QuadraticPfisterSymbol(gf3tu, (u, t2), gf3tu.one),
                           ctx2)
    assert rep.m == 2
    assert rep.first_residue.last == gf3tu.drop_outer(2).one


def test_pfister_residue_unit_slots(gf3tu):
    # <<u, a; b]] with a, b units for the u-adic valuation:
    # first residue <<a-bar; b-bar]] over GF(3)((t)), m = 1
    u, t = gf3tu.gen("u"), gf3tu.gen("t")
    ctx = ValuationCtx(gf3tu, 1)
    rep = pfister_residues(QuadraticPfisterSymbol(gf3tu, (u, t), gf3tu.one),
                           ctx)
    assert rep.m == 1
    gf3t = gf3tu.drop_outer()
    assert rep.first_residue.slots == (gf3t.gen("t"),)
    assert rep.first_residue.last == gf3t.one
    assert not is_isotropic(expand(rep.first_residue))


def test_pfister_residue_isotropic_input(gf3t):
    t = gf3t.gen("t")
    s = QuadraticPfisterSymbol(gf3t, (t,), gf3t.zero)
    with pytest.raises(errors.IsotropicInput):
        pfister_residues(s, ValuationCtx(gf3t))


def test_residue_report_matches_springer(gf3t):
    # the first residue expansion must match the Springer part at pi = 1
    budget = SampleBudget()
    ctx = ValuationCtx(gf3t)
    checked = 0
    seed = 0
    while checked < 15:
        seed += 1
        slots = (sample(gf3t, budget, (seed, "a")),)
        b = sample_unit(gf3t, budget, (seed, "b"))
        if (1 + 4 * b).is_zero():
            continue
        s = QuadraticPfisterSymbol(gf3t, slots, b)
        q = expand(s)
        if is_isotropic(q):
            continue
        try:
            rep = pfister_residues(s, ctx)
        except errors.ConfigUnsupported:
            # v(1+4b) outside the slot-valuation span: no good presentation
            continue
        part = springer_decompose(q, ctx).part((0,) * ctx.rank)
        r = rep.residue_at(gf3t.one)
        assert r is not None
        mult, first = r
        from towerforms.qforms import scale
        assert isometric(part, scale(expand(first), mult))
        checked += 1
