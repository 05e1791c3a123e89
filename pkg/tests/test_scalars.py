from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from liedeform.errors import DenominatorVanishes, MissingAssignment, ParseError
from liedeform.notation import parse_ratfun
from liedeform.scalars import (
    MultiPoly,
    PolyRing,
    RatFun,
    format_rational,
    param,
    parse_rational,
    poly_arith,
    poly_substitute,
    poly_truncate,
    t_params,
    x_params,
)

R = PolyRing(t_params(5))
T = {f"t{i}": R.gen(f"t{i}") for i in range(1, 6)}
SYMS = sympy.symbols("t1:6")


def to_sympy(p: MultiPoly):
    syms = [sympy.Symbol(str(g)) for g in p.ring.gens]
    return sympy.expand(
        sum((sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[s**e for s, e in zip(syms, exps)])
             for exps, c in p.terms.items()), sympy.Integer(0))
    )


R3 = PolyRing(t_params(3))
polys = st.dictionaries(
    st.tuples(*[st.integers(0, 2)] * 3),
    st.fractions(min_value=-6, max_value=6, max_denominator=3),
    max_size=5,
).map(lambda d: MultiPoly(R3, d))


# -- rationals ----------------------------------------------------------------


def test_rational_normalization():
    q = Fraction(2, -4)
    assert (q.numerator, q.denominator) == (-1, 2)
    assert parse_rational("-2/4") == q
    assert parse_rational("-6/8") == Fraction(-3, 4)
    assert parse_rational("−3") == -3


@pytest.mark.parametrize("bad", ["1/0", "abc", "", "1.5", "2//3", "2/-4"])
def test_parse_rational_rejects(bad):
    with pytest.raises(ParseError):
        parse_rational(bad)


@given(st.fractions())
def test_format_parse_round_trip(q):
    assert parse_rational(format_rational(q)) == q


# -- parameters -----------------------------------------------------------------


def test_param_names_and_order():
    assert str(param("t3")) == "t3"
    assert param("x2").pretty() == "x²"
    ring = PolyRing(list(x_params(2)) + list(t_params(2)))
    assert [str(g) for g in ring.gens] == ["t1", "t2", "x1", "x2"]
    with pytest.raises(ParseError):
        param("y1")


# -- polynomial arithmetic ------------------------------------------------------------


def test_poly_arith_examples():
    t1, t2, t3, t4, t5 = (T[f"t{i}"] for i in range(1, 6))
    assert str(poly_arith(t1, t2, "mul")) == "t1*t2"
    assert poly_arith(t1 + t2, t1 - t2, "mul") == t1**2 - t2**2
    assert str(poly_arith(t1 * t4 + t3 * t5, -(t1 * t4), "add")) == "t3*t5"


def test_print_order_matches_expected_displays():
    t1, t2, t3, t4, t5 = (T[f"t{i}"] for i in range(1, 6))
    assert str(1 + t1) == "1 + t1"
    assert str(t3 * t5 + t1 * t4) == "t1*t4 + t3*t5"
    assert str(-t2 * t3 + t1 * t5) == "t1*t5 - t2*t3"
    assert (1 + t1).pretty() == "1 + t¹"


def test_no_zero_terms_stored():
    t1 = T["t1"]
    p = t1 - t1
    assert p.terms == {} and not p


@given(polys, polys)
def test_add_mul_match_sympy(a, b):
    assert to_sympy(a + b) == sympy.expand(to_sympy(a) + to_sympy(b))
    assert to_sympy(a * b) == sympy.expand(to_sympy(a) * to_sympy(b))
    assert to_sympy(a - b) == sympy.expand(to_sympy(a) - to_sympy(b))


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(polys, polys)
def test_exact_div_recovers_factor(a, b):
    if b:
        assert (a * b).exact_div(b) == a


def test_truncate_examples():
    t1, t2 = T["t1"], T["t2"]
    assert poly_truncate(t1 + t1**3, 2) == t1
    assert poly_truncate(t1 * t2, 1) == R.zero()
    assert poly_truncate((1 + t1) ** 2, 1) == 1 + 2 * t1


def test_primitive_sign_and_content():
    t1, t2 = T["t1"], T["t2"]
    assert str((-2 * t1 * t2).primitive()) == "t1*t2"
    assert str((Fraction(1, 2) * t1 - 3 * t2).primitive()) == "t1 - 6*t2"


def test_json_round_trip():
    t1, t3 = T["t1"], T["t3"]
    p = 3 * t1 * t3**2 - Fraction(1, 2)
    data = p.to_json()
    assert {"coeff": "3", "exponents": {"t1": 1, "t3": 2}} in data
    assert MultiPoly.from_json(data, R) == p


# -- substitution -----------------------------------------------------------------------


def test_substitute_examples():
    t1, t2, t3, t4, t5 = (T[f"t{i}"] for i in range(1, 6))
    assert not poly_substitute(t1 * t2, {"t1": 0, "t2": 1})
    branch = {"t5": parse_ratfun("-t1*t4/t3", R)}
    assert not poly_substitute(t1 * t4 + t3 * t5, branch, ring=R, partial=True)
    assert poly_substitute(t1**2 - 4 * t2 * t3, {"t1": 5, "t2": 1, "t3": 6}).as_poly() == 1


def test_substitute_requires_coverage():
    with pytest.raises(MissingAssignment):
        poly_substitute(T["t1"] * T["t2"], {"t1": 1})


def test_substituted_denominator_zero():
    with pytest.raises(DenominatorVanishes):
        RatFun(T["t1"], T["t1"] - T["t1"])
    with pytest.raises(DenominatorVanishes):
        parse_ratfun("1/t1", R).evaluate({"t1": 0})


point = st.fixed_dictionaries({f"t{i}": st.fractions(-4, 4, max_denominator=3) for i in range(1, 4)})


@given(polys, polys, point)
def test_substitution_is_multiplicative(a, b, pt):
    lhs = poly_substitute(a * b, pt)
    rhs = poly_substitute(a, pt) * poly_substitute(b, pt)
    assert lhs == rhs
    expected = (to_sympy(a) * to_sympy(b)).subs({sympy.Symbol(k): sympy.Rational(v.numerator, v.denominator) for k, v in pt.items()})
    assert lhs.as_poly().constant_term() == Fraction(int(sympy.numer(expected)), int(sympy.denom(expected)))


# -- rational functions ----------------------------------------------------------------


def test_ratfun_reduction():
    t1, t2 = T["t1"], T["t2"]
    f = RatFun(t1**2 - t2**2, t1 + t2)
    assert f.is_polynomial() and f.as_poly() == t1 - t2
    g = RatFun(t1**2 - 1, t1**2 + 2 * t1 + 1)
    assert str(g) == "(-1 + t1)/(1 + t1)"
    assert RatFun(2 * t1, 4 * t1 * t2) == RatFun(R.one(), 2 * t2)


rat_vals = st.fractions(-4, 4, max_denominator=3)


@given(polys, polys, polys, rat_vals, rat_vals, rat_vals)
def test_ratfun_field_ops_against_sympy(a, b, c, x, y, z):
    if not b or not c:
        return
    f, g = RatFun(a, b), RatFun(c, b + c) if (b + c) else RatFun(c, b)
    expr_f = to_sympy(a) / to_sympy(b)
    expr_g = to_sympy(c) / to_sympy(b + c) if (b + c) else to_sympy(c) / to_sympy(b)
    total = f * g + f
    expected = sympy.simplify(expr_f * expr_g + expr_f - sympy.sympify(0))
    pt = {"t1": x, "t2": y, "t3": z}
    subs = {sympy.Symbol(k): sympy.Rational(v.numerator, v.denominator) for k, v in pt.items()}
    try:
        value = total.evaluate(pt)
    except DenominatorVanishes:
        return
    den = sympy.denom(sympy.together(expected)).subs(subs)
    if den == 0:
        return
    want = sympy.nsimplify(expected.subs(subs))
    assert value == Fraction(int(sympy.numer(want)), int(sympy.denom(want)))


def test_parse_ratfun():
    f = parse_ratfun("-t1^2*t4/t3^2", R)
    assert f.evaluate({"t1": 2, "t3": 1, "t4": 3}) == -12
    with pytest.raises(ParseError):
        parse_ratfun("t1 +", R)
    with pytest.raises(ParseError):
        parse_ratfun("sin(t1)", R)
