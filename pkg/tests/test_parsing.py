import functools
from importlib import resources

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mipcert.galgebra import GroupAlgebra
from mipcert.mipverify import ytilde_of
from mipcert.parsing import (
    InconsistentPresentation,
    ParseError,
    format_presentation,
    parse_algebra_literal,
    parse_presentation_file,
)
from mipcert.pcgroup import build_G, build_H

DATA = resources.files("mipcert") / "data"


def shipped(name):
    return (DATA / name).read_text()


def test_shipped_files_parse_to_builders():
    assert parse_presentation_file(shipped("G_4_3.pres")).presentation == build_G(4, 3)
    assert parse_presentation_file(shipped("H_4_3.pres")).presentation == build_H(4, 3)


@pytest.mark.parametrize("name", ["G_4_3.pres", "H_4_3.pres"])
def test_round_trip_shipped(name):
    p = parse_presentation_file(shipped(name)).presentation
    text = format_presentation(p, comment="round trip")
    again = parse_presentation_file(text).presentation
    assert again == p
    assert format_presentation(again, comment="round trip") == text


@pytest.mark.parametrize("n,m", [(4, 3), (5, 3), (5, 4), (6, 3)])
def test_round_trip_builders(n, m):
    for p in (build_G(n, m), build_H(n, m)):
        assert parse_presentation_file(format_presentation(p)).presentation == p


def test_broken_file_reports_failing_equation():
    with pytest.raises(InconsistentPresentation) as err:
        parse_presentation_file(shipped("G_4_3_broken.pres"))
    assert any("x^16" in f for f in err.value.failures)
    assert "line" not in str(err.value)
    # unchecked parsing still yields the (inconsistent) presentation
    doc = parse_presentation_file(shipped("G_4_3_broken.pres"), check=False)
    assert doc.presentation.conjugation_rules[(0, 2)] == (0, 0, 2)


def test_corrupt_trivial_zx_parses():
    text = shipped("G_4_3.pres").replace("conj z^x = z^-1", "conj z^x = z")
    assert "conj z^x = z\n" in text
    p = parse_presentation_file(text).presentation
    assert p != build_G(4, 3)


def test_inverse_exponents_reduced():
    doc = parse_presentation_file("gens: x y z\norders: 16 8 4\nconj y^x = y z^-3\n")
    assert doc.presentation.conjugation_rules[(0, 1)] == (0, 1, 1)


def test_spans_recorded():
    doc = parse_presentation_file(shipped("H_4_3.pres"))
    assert "gens" in doc.spans and "orders" in doc.spans
    assert all(isinstance(v, tuple) and len(v) == 2 for v in doc.spans.values())


@pytest.mark.parametrize("text,line,token", [
    ("", 1, None),
    ("gens: x y\norders: 4 3\n", 2, "3"),
    ("gens: x y\norders: 4 4\nconj y^x = w\n", 3, "w"),
    ("gens: x y\norders: 4 4\nconj y^x = y^4\n", 3, "y^4"),
    ("gens: x y\norders: 4 4\nconj x^y = x\n", 3, "x^y"),
    ("gens: x y\norders: 4 4\nconj y^x = y\nconj y^x = y^3\n", 4, "y^x"),
    ("gens: x y\norders: 4 4\nfrobnicate\n", 3, "frobnicate"),
    ("gens: x y\norders: 4 4\npow x = x y\n", 3, "x y"),
    ("# comment\ngens: x y\n\norders: 4 4\nconj y^x = y x\n", 5, "x"),
])
def test_parse_errors_carry_location(text, line, token):
    with pytest.raises(ParseError) as err:
        parse_presentation_file(text)
    assert err.value.line == line
    if token is not None:
        assert err.value.token == token
    assert str(err.value).startswith(f"line {line}")


# -- algebra literals ------------------------------------------------------------------

def test_literal_examples(kH43):
    kH = kH43
    a, b, c = kH.generators()
    assert parse_algebra_literal("1+a", kH) == a + 1
    assert repr(parse_algebra_literal("1+a", kH)) == "1 + a"
    assert parse_algebra_literal("b(a+b+ab)c", kH) == ytilde_of(kH)
    assert parse_algebra_literal("b*(a+b+a*b)*c", kH) == ytilde_of(kH)
    assert parse_algebra_literal("a+a", kH).is_zero()
    assert parse_algebra_literal("0", kH).is_zero()
    assert parse_algebra_literal("a^-1", kH) == kH.unit_inverse(a)
    assert parse_algebra_literal("(1+a)^2", kH) == a * a + 1
    assert parse_algebra_literal("b^2 c", kH) == b * b * c


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 15), st.integers(0, 7), st.integers(0, 3)), min_size=1, max_size=6))
def test_literal_sum_of_monomials(monos):
    kH = _kH()
    text = " + ".join(f"a^{i} b^{j} c^{l}" for i, j, l in monos)
    expect = kH.zero
    for i, j, l in monos:
        expect = expect + kH.embed((i, j, l))
    assert parse_algebra_literal(text, kH) == expect


@functools.cache
def _kH():
    # hypothesis tests cannot take function-scoped fixtures
    return GroupAlgebra(build_H(4, 3))


@pytest.mark.parametrize("text,column", [
    ("a+q", 3),
    ("(a+b", 5),
    ("a+", 3),
    ("a b)", 4),
    ("", 1),
    ("a^b", 3),
    ("(a+1)^-1", 1),
])
def test_literal_errors(kH43, text, column):
    with pytest.raises(ParseError) as err:
        parse_algebra_literal(text, kH43)
    assert err.value.column == column
