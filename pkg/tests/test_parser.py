from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmlc.errors import LexError, ParseError
from qmlc.parser import lex, parse_source, parse_term
from qmlc.terms import (
    QUBIT,
    UNIT,
    App,
    FunDef,
    IfClassical,
    IfQuantum,
    Let,
    LetPair,
    Pair,
    Program,
    QFalse,
    QTrue,
    Scaled,
    Sup,
    Tensor,
    UnitVal,
    Var,
    render,
    render_term,
    tensor,
)


def kinds(src):
    return [t.kind for t in lex(src)]


class TestLex:
    def test_keyword(self):
        assert kinds("qtrue") == ["qtrue"]

    def test_punctuation(self):
        toks = lex("(x, y)")
        assert [t.kind for t in toks] == ["(", "IDENT", ",", "IDENT", ")"]
        assert [t.text for t in toks if t.kind == "IDENT"] == ["x", "y"]

    def test_imaginary_literal(self):
        (tok,) = lex("0.5i")
        assert tok.kind == "NUMBER" and tok.value == complex(0, 0.5)

    def test_numbers(self):
        assert [t.value for t in lex("1 2.5 3e-1 .5")] == [1, 2.5, 0.3, 0.5]

    def test_comments_and_whitespace_skipped(self):
        assert kinds("qtrue -- a comment ( ) \n  qfalse") == ["qtrue", "qfalse"]

    def test_primed_identifier(self):
        (tok,) = lex("x'")
        assert tok.kind == "IDENT" and tok.text == "x'"

    def test_spans_cover_tokens(self):
        src = "f (x:Q2) : Q2 =\n  x"
        for tok in lex(src):
            assert src[tok.span.start : tok.span.end] == tok.text
        assert lex(src)[-1].span.line == 2 and lex(src)[-1].span.col == 3

    def test_bad_character(self):
        with pytest.raises(LexError) as e:
            lex("qtrue $ qfalse")
        assert e.value.position == 6 and e.value.char == "$"
        assert e.value.span.col == 7


class TestParse:
    def test_epr(self):
        (d,) = parse_source("Epr : Q2*Q2 = (qtrue,qtrue) + (qfalse,qfalse)").defs
        assert d == FunDef(
            "Epr", (), Tensor(QUBIT, QUBIT), Sup(Pair(QTrue(), QTrue()), Pair(QFalse(), QFalse()))
        )

    def test_identity(self):
        (d,) = parse_source("f (x:Q2) : Q2 = x").defs
        assert d.params == (("x", QUBIT),) and d.body == Var("x")

    def test_hadamard(self):
        (d,) = parse_source("Had (b:Q2) : Q2 = ifq b then qfalse + (-1)*qtrue else qfalse + qtrue").defs
        assert d.body == IfQuantum(
            Var("b"), Sup(QFalse(), Scaled(-1, QTrue())), Sup(QFalse(), QTrue())
        )

    def test_tensor_right_associative(self):
        (d,) = parse_source("f : Q2*Q1*Q2 = (qtrue, ((), qfalse))").defs
        assert d.result == Tensor(QUBIT, Tensor(UNIT, QUBIT))
        (d,) = parse_source("f : (Q2*Q1)*Q2 = ((qtrue, ()), qfalse)").defs
        assert d.result == Tensor(Tensor(QUBIT, UNIT), QUBIT)

    def test_sup_is_binary(self):
        with pytest.raises(ParseError):
            parse_source("f : Q2 = qtrue + qfalse + qtrue")

    def test_application_binds_tighter_than_scaling_and_sup(self):
        src = "g (x:Q2) : Q2 = x\nf (y:Q2) : Q2 = 0.5*g y + qfalse ^ [y]"
        body = parse_source(src).defs[1].body
        assert body == Sup(Scaled(0.5, App("g", (Var("y"),))), QFalse(("y",)))

    def test_amplitude_forms(self):
        assert parse_term("(0.5+2i)*qtrue") == Scaled(complex(0.5, 2), QTrue())
        assert parse_term("(-1)*qtrue") == Scaled(-1, QTrue())
        assert parse_term("(1-1i)*qtrue") == Scaled(complex(1, -1), QTrue())
        assert parse_term("-qtrue") == Scaled(-1, QTrue())
        assert parse_term("0.5i*qfalse") == Scaled(0.5j, QFalse())

    def test_let_forms(self):
        t = parse_term("let (a, b) = p in let c = a; d = b in (c, d)")
        assert isinstance(t, LetPair) and (t.x, t.y) == ("a", "b")
        assert t.body == Let("c", Var("a"), Let("d", Var("b"), Pair(Var("c"), Var("d"))))

    def test_weakening(self):
        assert parse_term("x ^ [y, z]") == Var("x", ("y", "z"))
        assert parse_term("qtrue ^ [y]") == QTrue(("y",))
        with pytest.raises(ParseError):
            parse_term("x ^ [y, y]")

    def test_classical_if_and_unit(self):
        t = parse_term("if x then () else ()")
        assert t == IfClassical(Var("x"), UnitVal(), UnitVal())

    def test_nullary_call(self):
        src = "Epr : Q2*Q2 = (qtrue,qtrue) + (qfalse,qfalse)\nf : Q2*Q2 = Epr"
        assert parse_source(src).defs[1].body == App("Epr", ())

    def test_multiline_program_splits_definitions(self):
        src = "g (x:Q2) : Q2 = x\nh (y:Q2) : Q2 = g y\nk : Q2 = qtrue"
        assert parse_source(src).names() == ["g", "h", "k"]

    def test_teleport_listing_parses(self, teleport_program):
        assert teleport_program.names() == [
            "Had", "Qnot", "Meas", "CNot", "Epr", "Bmeas", "U01", "U10", "U11", "U", "Tele"
        ]
        bmeas = teleport_program["Bmeas"].body
        assert isinstance(bmeas, LetPair) and bmeas.bound == App("CNot", (Var("x"), Var("y")))

    @pytest.mark.parametrize(
        "src",
        ["f : Q2 = (qtrue", "f (x Q2) : Q2 = x", "f : Q3 = qtrue", "f : Q2 = let x qtrue in x", "f : Q2 ="],
    )
    def test_error_span_inside_source(self, src):
        with pytest.raises(ParseError) as e:
            parse_source(src)
        span = e.value.span
        assert 0 <= span.start <= len(src) and span.line >= 1 and span.col >= 1

    def test_error_expected_set(self):
        with pytest.raises(ParseError) as e:
            parse_source("f : Q2 = (qtrue")
        assert e.value.expected == {")", ","}


class TestRender:
    def test_pair(self):
        assert render_term(Pair(QTrue(), QFalse())) == "(qtrue, qfalse)"

    def test_scaled(self):
        assert render_term(Scaled(-1, QTrue())) == "(-1)*qtrue"

    def test_identity_round_trip(self):
        p = parse_source("f (x:Q2) : Q2 = x")
        assert parse_source(render(p)) == p

    def test_teleport_round_trip(self, teleport_program):
        assert parse_source(render(teleport_program)) == teleport_program


# ---------------------------------------------------------------- round trip property

NAMES = ["a", "b", "c"]
AMPS = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False).filter(lambda z: z != 0)
WEAK = st.lists(st.sampled_from(NAMES), unique=True, max_size=2).map(tuple)


def terms(depth: int):
    leaves = st.one_of(
        st.builds(Var, st.sampled_from(NAMES), WEAK),
        st.just(UnitVal()),
        st.builds(QTrue, WEAK),
        st.builds(QFalse, WEAK),
        st.builds(App, st.just("g"), st.just(())),
    )
    if depth == 0:
        return leaves
    sub = terms(depth - 1)
    scaled = st.one_of(sub, st.builds(Scaled, AMPS, sub))
    return st.one_of(
        leaves,
        st.builds(Pair, sub, sub),
        st.builds(Let, st.sampled_from(NAMES), sub, sub),
        st.builds(LetPair, st.just("p"), st.just("q"), sub, sub),
        st.builds(IfClassical, sub, sub, sub),
        st.builds(IfQuantum, sub, sub, sub),
        st.builds(Scaled, AMPS, sub),
        st.builds(Sup, scaled, scaled),
        st.builds(App, st.just("h"), st.lists(sub, min_size=1, max_size=2).map(tuple)),
    )


def types(depth: int):
    base = st.sampled_from([UNIT, QUBIT])
    if depth == 0:
        return base
    return st.one_of(base, st.builds(Tensor, types(depth - 1), types(depth - 1)))


@settings(max_examples=300, deadline=None)
@given(body=terms(3), result=types(2), params=st.lists(types(1), max_size=2))
def test_render_parse_round_trip(body, result, params):
    defs = (
        FunDef("g", (), QUBIT, QTrue()),
        FunDef("h", (("y", QUBIT),), QUBIT, Var("y")),
        FunDef("f", tuple((f"x{i}", t) for i, t in enumerate(params)), result, body),
    )
    program = Program(defs)
    again = parse_source(render(program))
    assert again == program


def test_tensor_helper():
    assert tensor() == UNIT and tensor(QUBIT) == QUBIT
    assert tensor(QUBIT, UNIT, QUBIT).size == 2
