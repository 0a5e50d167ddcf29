"""DSL parsing, formatting round trips, CLI exit codes and JSON determinism."""

import json

import pytest

from towerforms import dsl, errors
from towerforms.cli import main
from towerforms.fields import SampleBudget, format_element, sample
from towerforms.pfister import BilinearPfisterSymbol, QuadraticPfisterSymbol


def test_parse_field():
    assert dsl.parse_field("GF(3)((t))").describe() == "GF(3)((t))"
    assert dsl.parse_field("GF(9)((t))((u))").describe() == "GF(9)((t))((u))"
    assert dsl.parse_field("GF(5)((t))(X)").describe() == "GF(5)((t))(X)"
    assert dsl.parse_field(" GF( 25 ) (( t ))").q == 25


@pytest.mark.parametrize("bad", ["GF(4)", "GF(6)", "GF(2)", "GF(3)(X)((t))",
                                 "GF(3", "GF(3)[t]", "", "GF(3)((t))junk"])
def test_parse_field_errors_carry_position(bad):
    with pytest.raises(errors.ParseError) as exc:
        dsl.parse_field(bad)
    assert exc.value.pos >= 0
    assert exc.value.text == bad


def test_parse_element():
    T = dsl.parse_field("GF(3)((t))")
    t = T.gen("t")
    assert dsl.parse_element(T, "(1+t)/(2-t^3)") == (1 + t) / (2 - t ** 3)
    assert dsl.parse_element(T, "-2*t") == -2 * t
    assert dsl.parse_element(T, "t^-2") == t ** -2
    assert dsl.parse_element(T, " 1 + 2 * t ") == 1 + 2 * t


def test_parse_element_errors():
    T = dsl.parse_field("GF(3)((t))")
    for bad in ["", "1 +", "y", "t^", "1/0", "(1+t"]:
        with pytest.raises(errors.ParseError):
            dsl.parse_element(T, bad)


def test_base_generator_symbol():
    T9 = dsl.parse_field("GF(9)")
    g = dsl.parse_element(T9, "g")
    assert not g.is_zero()
    assert dsl.parse_element(T9, format_element(g * g + 1)) == g * g + 1
    T3 = dsl.parse_field("GF(3)")
    with pytest.raises(errors.ParseError):
        dsl.parse_element(T3, "g")


def test_parse_form_and_roundtrip():
    T = dsl.parse_field("GF(3)((t))")
    q = dsl.parse_form(T, "diag[1,-2,t,-2*t]")
    assert q.dim == 4
    assert dsl.parse_form(T, dsl.format_form(q)) == q
    with pytest.raises(errors.ParseError):
        dsl.parse_form(T, "diag[1,0]")
    with pytest.raises(errors.ParseError):
        dsl.parse_form(T, "diag[]")


def test_parse_pfister_shapes():
    T = dsl.parse_field("GF(3)((t))")
    s = dsl.parse_pfister(T, "<<t; 1]]")
    assert isinstance(s, QuadraticPfisterSymbol) and s.fold == 2
    assert dsl.parse_pfister(T, s.describe()) == s

    one = dsl.parse_pfister(T, "<<1]]")
    assert isinstance(one, QuadraticPfisterSymbol) and one.fold == 1
    assert dsl.parse_pfister(T, one.describe()) == one

    b = dsl.parse_pfister(T, "<<t, 2>>")
    assert isinstance(b, BilinearPfisterSymbol)
    assert dsl.parse_pfister(T, b.describe()) == b

    with pytest.raises(errors.ParseError):
        dsl.parse_pfister(T, "<<t, 1]]")


def test_element_roundtrip_on_samples():
    for spec in ["GF(3)((t))", "GF(9)((t))((u))", "GF(5)(X)"]:
        T = dsl.parse_field(spec)
        for seed in range(25):
            a = sample(T, SampleBudget(), seed)
            assert dsl.parse_element(T, format_element(a)) == a


# ---------------------------------------------------------------------------
# CLI


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_isotropy_example(capsys):
    code, out, _ = run_cli(capsys, "isotropy", "--field", "GF(3)((t))",
                           "--form", "diag[1,-2,t,-2*t]")
    assert code == 0
    assert out.strip() == "anisotropic"


def test_cli_isotropy_isotropic_answer_is_exit_zero(capsys):
    code, out, _ = run_cli(capsys, "isotropy", "--field", "GF(5)",
                           "--form", "diag[1,1]")
    assert code == 0
    assert out.strip() == "isotropic"


def test_cli_witt(capsys):
    code, out, _ = run_cli(capsys, "witt", "--field", "GF(3)", "--form",
                           "diag[1,-1]", "--json")
    assert code == 0
    js = json.loads(out)
    assert js["witt_index"] == 1 and js["anisotropic_kernel"] is None


def test_cli_square(capsys):
    code, out, _ = run_cli(capsys, "square", "--field", "GF(7)",
                           "--elem", "2")
    assert code == 0 and out.strip() == "square"


def test_cli_pfister_expand(capsys):
    code, out, _ = run_cli(capsys, "pfister-expand", "--field", "GF(3)((t))",
                           "--pfister", "<<t; 1]]", "--json")
    assert code == 0
    T = dsl.parse_field("GF(3)((t))")
    q = dsl.parse_form(T, json.loads(out)["form"])
    from towerforms.qforms import isometric
    assert isometric(q, dsl.parse_form(T, "diag[1,-2,-t,2*t]"))


def test_cli_residue(capsys):
    code, out, _ = run_cli(capsys, "residue", "--field", "GF(3)((t))",
                           "--pfister", "<<t; 1]]", "--json")
    assert code == 0
    js = json.loads(out)
    assert js["first_residue"] == "<<1]]" and js["m"] == 1


def test_cli_pfister_normalize(capsys):
    code, out, _ = run_cli(capsys, "pfister-normalize", "--field",
                           "GF(5)((t))", "--pfister", "<<t, t>>", "--json")
    assert code == 0
    js = json.loads(out)
    T = dsl.parse_field("GF(5)((t))")
    from towerforms.fields import valuation
    last = dsl.parse_pfister(T, js["output"]).slots[-1]
    assert valuation(T, last) == (0,)


def test_cli_link_example(capsys):
    code, out, _ = run_cli(capsys, "link", "--field", "GF(3)(X)",
                           "--p1", "<<X;1]]", "--p2", "<<X+1;1]]")
    assert code == 0 and out.strip() == "linked"


def test_cli_certify(capsys):
    code, out, _ = run_cli(capsys, "certify", "--field", "GF(3)((t))",
                           "--p1", "<<t;1]]", "--p2", "<<t;1]]", "--json")
    assert code == 0
    assert json.loads(out)["certificate"] is not None


def test_cli_verify_pass_and_flags(capsys):
    code, out, _ = run_cli(capsys, "verify", "top-linked", "--field", "GF(3)",
                           "--d", "1", "--samples", "10", "--seed", "42",
                           "--json")
    assert code == 0
    js = json.loads(out)
    assert js["failures"] == [] and js["seed"] == 42 and js["samples"] == 10
    assert js["theorem"] == "top-linked"


def test_cli_verify_higher_local(capsys):
    code, out, _ = run_cli(capsys, "verify", "higher-local-d1", "--q", "3",
                           "--samples", "5", "--seed", "42")
    assert code == 0
    assert "PASS" in out


def test_cli_exit_2_on_bad_input(capsys):
    for argv in (
            ("isotropy", "--field", "GF(4)", "--form", "diag[1]"),
            ("isotropy", "--field", "GF(3)", "--form", "diag[1,"),
            ("isotropy", "--field", "GF(3)", "--form", "diag[0]"),
            ("square", "--field", "GF(3)", "--elem", "1/0"),
            ("verify", "top-linked", "--field", "GF(3)"),
            ("verify", "nonsense", "--q", "3"),
            ("nonsense",),
    ):
        code, _, err = run_cli(capsys, *argv)
        assert code == 2, argv
        assert err


def test_cli_json_determinism(capsys):
    argv = ("verify", "top-linked", "--field", "GF(3)((t))", "--d", "2",
            "--samples", "5", "--seed", "7", "--json")
    first = run_cli(capsys, *argv)
    second = run_cli(capsys, *argv)
    assert first == second
    assert first[0] == 0
