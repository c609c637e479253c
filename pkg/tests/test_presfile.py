import pytest

from blimwb.presfile import (
    FREE_CORPUS,
    MAIN_CORPUS,
    PresentationSyntaxError,
    format_presentation,
    load_corpus,
    parse_presentation,
)
from blimwb.words import Word, commutator

x, y = Word.gen(0), Word.gen(1)


def test_grammar_examples():
    P = parse_presentation("gens: x\nrels: x^2")
    assert P.generator_names == ("x",) and P.relators == (x**2,)
    P = parse_presentation("gens: x,y\nrels: [x,y]")
    assert P.relators == (commutator(x, y),)
    P = parse_presentation("gens: x, y\nrels: x = y")
    assert P.relators == (x * ~y,)


def test_comments_whitespace_and_powers():
    text = """
    # dihedral
    gens: x , y   # two generators
    rels: x ^ 4,  y^2
    rels: (x*y)^2, [x, y^-1]^2
    """
    P = parse_presentation(text)
    assert P.relators == (x**4, y**2, (x * y) ** 2, commutator(x, ~y) ** 2)


def test_identity_term_round_trips():
    P = parse_presentation("gens: x\nrels: x*x^-1")
    assert P.relators == (Word(),)
    assert parse_presentation(format_presentation(P)) == P


@pytest.mark.parametrize(
    "text, line, column, fragment",
    [
        ("gens: x\nrels: x^0", 2, 9, "zero exponent"),
        ("gens: x\nrels: y", 2, 7, "unknown generator 'y'"),
        ("gens: x\nrels: x^", 2, 9, "integer exponent"),
        ("gens: x,y\nrels: [x,y", 2, 11, "expected ']'"),
        ("gens: x\nrels: x % x", 2, 9, "unexpected character"),
        ("rels: x", 1, 1, "missing 'gens:'"),
        ("gens: x\nfoo: x", 2, 1, "expected 'gens:'"),
        ("gens: x\nrels: x = x = x", 2, 13, "chained"),
    ],
)
def test_errors_are_position_annotated(text, line, column, fragment):
    with pytest.raises(PresentationSyntaxError) as e:
        parse_presentation(text)
    assert (e.value.line, e.value.column) == (line, column)
    assert fragment in str(e.value)


def test_corpus_round_trips():
    for P in load_corpus(MAIN_CORPUS + FREE_CORPUS):
        assert parse_presentation(format_presentation(P)) == P
    names = [P.name for P in load_corpus()]
    assert names == list(MAIN_CORPUS)
