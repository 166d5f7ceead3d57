import pytest
from hypothesis import given, strategies as st

from lrgroups.presentation import (
    Presentation,
    PresentationError,
    UndeclaredGenerator,
    Word,
    commutator,
    free_reduce,
    parse_presentation,
    parse_word,
    parse_word_list,
)
from lrgroups.registry import NAMES, get_amalgam

NAMES3 = ("x", "y", "t")


def w(text, names=NAMES3):
    return parse_word(text, names)


def test_conjugation_and_commutator_conventions():
    x, y = Word.gen(0), Word.gen(1)
    assert w("x^y") == (y.inverse() * x * y)
    assert w("[x,y]") == (x.inverse() * y.inverse() * x * y)
    assert commutator(x, y) == w("x^-1 y^-1 x y")


def test_juxtaposition_splits_names_and_suffix_binds_last():
    names = ("p", "q", "r", "s")
    assert parse_word("qrsp^-1", names) == parse_word("q*r*s*p^-1", names)
    assert parse_word("p^qr", names) == parse_word("p^(q*r)", names)


def test_exponent_forms():
    assert w("x^-1") == w("x^{-1}") == w("(x)^(-1)")
    assert w("(xy)^3") == w("xyxyxy")
    assert w("x^0") == Word()
    assert w("1") == Word()


def test_relation_becomes_relator():
    p = parse_presentation("gens: x y\nrels: x^2, y^3, x^y = y^-1 x")
    assert p.generators == ("x", "y")
    assert len(p.relators) == 3
    assert p.relators[2].reduce() == (w("x^y", ("x", "y")) * w("y^-1 x", ("x", "y")).inverse()).reduce()


def test_table1_rows_parse():
    counts = {"S4": 12}
    for name in NAMES:
        spec = get_amalgam(name)
        assert spec.presentation.ngens >= 5
        if name in counts:
            assert len(spec.presentation.relators) == counts[name]


def test_round_trip_format():
    spec = get_amalgam("S3xS4")
    again = parse_presentation(spec.presentation.format())
    assert again.generators == spec.presentation.generators
    assert [r.reduce() for r in again.relators] == [r.reduce() for r in spec.presentation.relators]


def test_errors():
    with pytest.raises(UndeclaredGenerator):
        parse_presentation("gens: x\nrels: y^2")
    with pytest.raises(PresentationError):
        parse_presentation("gens: x x\nrels: x^2")
    with pytest.raises(PresentationError):
        parse_presentation("gens: x\nrels: (x^2")
    with pytest.raises(PresentationError):
        parse_presentation("rels: x")
    with pytest.raises(PresentationError) as err:
        parse_presentation("gens: x\nrels: x^2,\n  x^^2")
    assert err.value.line == 3


def test_word_list():
    words = parse_word_list("xy, t, x^t", NAMES3)
    assert len(words) == 3 and words[2] == w("t^-1 x t")


def test_restrict_and_translate():
    spec = get_amalgam("S4")
    A = spec.presentation
    L = A.restrict(("x", "y", "s", "t"))
    assert L.generators == ("x", "y", "s", "t")
    assert all(r.generators_used() <= {0, 1, 2, 3} for r in L.relators)
    assert len(L.relators) == 9
    word = A.word("s t x")
    there = A.translate(word, L)
    assert L.format_word(there) == "s*t*x"
    assert L.translate(there, A) == word
    with pytest.raises(PresentationError):
        A.translate(A.word("a"), L)


letters = st.lists(st.integers(0, 5), max_size=30)


@given(letters)
def test_free_reduce_idempotent(ls):
    r = free_reduce(ls)
    assert free_reduce(r) == r
    assert all(r[i] != r[i + 1] ^ 1 for i in range(len(r) - 1))


@given(letters, letters)
def test_inverse_and_product(a, b):
    u, v = Word(tuple(a)), Word(tuple(b))
    assert (u * u.inverse()).reduce() == Word()
    assert (u * v).inverse().reduce() == (v.inverse() * u.inverse()).reduce()


@given(letters)
def test_format_parse_round_trip(ls):
    u = Word(tuple(ls)).reduce()
    assert parse_word(u.format(NAMES3), NAMES3).reduce() == u
