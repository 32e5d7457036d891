from fractions import Fraction

from hypothesis import given, settings

from reciprocity.gaussian import ONE, GaussianRational
from reciprocity.parser import parse_rational as P
from reciprocity.rational import INFINITY, FactoredRational, substitute_infinity, valuation
from reciprocity.symbols import residue_sum_check, tame_symbol, weil_product

from strategies import factored, points


def test_tame_examples():
    assert tame_symbol(P("z"), P("z"), 0) == -1
    c = GaussianRational(Fraction(3, 7), 2)
    assert tame_symbol(P("z"), FactoredRational(c), 0) == c.inverse()
    # at infinity: w = 1/z, the bracket limit of -(1-z)/z is 1
    assert tame_symbol(P("z"), P("(1-z)"), INFINITY) == 1


def test_tame_symbol_at_regular_point_is_one():
    assert tame_symbol(P("(z-1)"), P("(z-2)"), 5) == 1


def test_weil_examples():
    assert weil_product(P("z"), P("z")) == 1
    assert tame_symbol(P("z"), P("z"), INFINITY) == -1
    assert weil_product(P("z"), P("(1-z)")) == 1
    assert [tame_symbol(P("z"), P("(1-z)"), p) for p in (0, 1, INFINITY)] == [1, 1, 1]
    assert weil_product(P("3"), P("i")) == 1


def test_residue_sum_examples():
    assert residue_sum_check(P("1/z")) == 0
    assert residue_sum_check(P("z^-1*(z-1)^-1")) == 0
    assert residue_sum_check(P("(z-2)^3")) == 0


@given(factored(), factored(), points)
def test_antisymmetry(f, g, p):
    assert tame_symbol(f, g, p) * tame_symbol(g, f, p) == ONE


@given(factored(), points)
def test_self_symbol_is_sign(f, p):
    # (f, f)_p = (-1)^(v^2) = (-1)^v
    assert tame_symbol(f, f, p) == (-1) ** (valuation(f, p) % 2)


@given(factored(), factored(), factored(), points)
def test_bimultiplicative(f1, f2, g, p):
    assert tame_symbol(f1 * f2, g, p) == tame_symbol(f1, g, p) * tame_symbol(f2, g, p)
    assert tame_symbol(g, f1 * f2, p) == tame_symbol(g, f1, p) * tame_symbol(g, f2, p)


@given(factored(), factored())
def test_chart_coherence(f, g):
    assert tame_symbol(f, g, INFINITY) == tame_symbol(substitute_infinity(f), substitute_infinity(g), 0)


@settings(max_examples=200)
@given(factored(), factored())
def test_weil_reciprocity(f, g):
    assert weil_product(f, g) == 1


@settings(max_examples=200)
@given(factored())
def test_residue_theorem(f):
    assert residue_sum_check(f) == 0
