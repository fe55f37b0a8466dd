import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polysym import ElementarySeries, ParseError, TruncatedSeries, parse, render
from polysym.numbers import ComplexRational
from polysym.parser import tokenize

from conftest import random_poly

Z = TruncatedSeries(2, 4, {(1, 0): 1})
W = TruncatedSeries(2, 4, {(0, 1): 1})


class TestGoldens:
    def test_power_sum(self):
        assert parse("z^2+w^2", 2, 4) == Z**2 + W**2

    def test_binomial_identity(self):
        assert parse("(z+w)^2-2*z*w", 2, 4) == parse("z^2+w^2", 2, 4)

    def test_elementary_alias(self):
        q = parse("s1^2-2*s2", 2, 4)
        assert isinstance(q, ElementarySeries)
        assert q == ElementarySeries(2, 4, {(2, 0): 1, (0, 1): -2})

    def test_indexed_names(self):
        f = parse("z1*z3 - 2*z2", 3, 2)
        assert f == TruncatedSeries(3, 2, {(1, 0, 1): 1, (0, 1, 0): -2})

    def test_decimal_is_exact(self):
        assert parse("0.25*z", 2, 4) == Z / 4
        assert parse(".5", 1, 0).constant_term() == Fraction(1, 2)

    def test_rational_literal(self):
        assert parse("3/4*w", 2, 4) == W * Fraction(3, 4)

    def test_imaginary_unit(self):
        f = parse("(1+2*i)*z", 2, 4)
        assert f.coefficient((1, 0)) == ComplexRational(1, 2)

    def test_precedence(self):
        assert parse("-z^2", 2, 4) == -(Z**2)
        assert parse("2*z^2*w", 2, 4) == 2 * Z**2 * W
        assert parse("1-z-w", 2, 4) == 1 - Z - W

    def test_single_variable_alias(self):
        assert parse("z^3", 1, 3) == TruncatedSeries(1, 3, {(3,): 1})

    def test_truncate_flag(self):
        f = parse("(z+w)^3", 2, 2, truncate=True)
        assert f.terms == {} and f.tail_bound == 8


class TestErrors:
    @pytest.mark.parametrize(
        "text, pos",
        [
            ("zw", 1),
            ("z w", 3),
            ("2z", 2),
            ("z+", 3),
            ("(z+w", 5),
            ("z^w", 3),
            ("z $ w", 3),
            ("1/0", 1),
            ("z^2^2", 4),
            ("z^-1", 3),
        ],
    )
    def test_positions(self, text, pos):
        with pytest.raises(ParseError) as info:
            parse(text, 2, 8)
        assert info.value.position == pos

    def test_mixed_basis(self):
        with pytest.raises(ParseError):
            parse("z+e1", 2, 4)

    def test_index_out_of_range(self):
        with pytest.raises(ParseError):
            parse("z3", 2, 4)

    def test_aliases_restricted(self):
        with pytest.raises(ParseError):
            parse("w", 3, 4)
        with pytest.raises(ParseError):
            parse("z", 3, 4)

    def test_cap_exceeded(self):
        with pytest.raises(ParseError):
            parse("(z+w)^3", 2, 2)
        with pytest.raises(ParseError):
            parse("e2^2", 2, 3)

    def test_depth_limit(self):
        with pytest.raises(ParseError):
            parse("(" * 500 + "z" + ")" * 500, 2, 4)
        with pytest.raises(ParseError):
            parse("-" * 500 + "z", 2, 4)

    def test_long_sum_is_fine(self):
        f = parse("+".join(["z"] * 5000), 2, 4)
        assert f == 5000 * Z

    def test_runaway_power(self):
        with pytest.raises(ParseError):
            parse("(2^4096)^4096", 2, 4)


def test_tokenizer_positions():
    toks = tokenize("z + 12/5")
    assert [(t.kind, t.text, t.pos) for t in toks] == [
        ("name", "z", 1),
        ("op", "+", 3),
        ("number", "12/5", 5),
        ("end", "", 9),
    ]


class TestRender:
    def test_examples(self):
        assert render(Z**2 + W**2) == "z^2 + w^2"
        assert render(Z - 2 * W) == "z - 2*w"
        assert render(1 + (1 - 2 * ComplexRational(0, 1)) * Z) == "1 + (1-2*i)*z"
        assert render(TruncatedSeries.zero(2, 1)) == "0"

    @pytest.mark.parametrize("dim", [1, 2, 3])
    def test_round_trip_random_series(self, rng, dim):
        for _ in range(30):
            f = random_poly(rng, dim, 4, complex_coeffs=rng.random() < 0.5)
            assert parse(render(f), dim, 4) == f

    def test_round_trip_elementary(self):
        q = ElementarySeries(3, 6, {(2, 0, 0): Fraction(-1, 3), (0, 0, 2): ComplexRational(0, 5), (0, 0, 0): 2})
        assert parse(render(q), 3, 6) == q


def random_expression(rng, depth=0):
    r = rng.random()
    if depth > 3 or r < 0.3:
        return rng.choice(["z", "w", "1", "2", "1/3", "0.5", "i", "(2*i)"])
    if r < 0.5:
        return f"({random_expression(rng, depth + 1)})^{rng.randint(0, 2)}"
    if r < 0.6:
        return "-" + random_expression(rng, depth + 1)
    op = rng.choice(["+", "-", "*"])
    return f"({random_expression(rng, depth + 1)}){op}({random_expression(rng, depth + 1)})"


def test_round_trip_random_expressions(rng):
    for _ in range(100):
        f = parse(random_expression(rng), 2, 40, truncate=True)
        g = parse(render(f), 2, 40)
        assert g.terms == f.terms


TOKENS = ["z", "w", "z1", "z3", "e1", "s2", "i", "0", "7", "1/2", "1/0", "0.25", "+", "-", "*", "^",
          "(", ")", " ", "zw", "$", "^9", "^4097", "."]


def test_fuzz_token_streams():
    rng = random.Random(5)
    for _ in range(2000):
        text = "".join(rng.choice(TOKENS) for _ in range(rng.randint(0, 12)))
        try:
            parse(text, 2, 6)
        except ParseError as exc:
            assert exc.position is None or 1 <= exc.position <= len(text) + 1


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="zwe12^*+-()i./ 0", max_size=30))
def test_fuzz_hypothesis(text):
    try:
        parse(text, 2, 6, truncate=True)
    except ParseError:
        pass
