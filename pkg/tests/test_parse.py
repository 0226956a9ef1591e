import pytest
from hypothesis import given

from mgl.errors import RankMismatchError, WordSyntaxError
from mgl.free import format_word, word
from mgl.parse import Commutator, Gen, flatten, max_generator, parse_word
from strategies import reduced_words


def test_commutator():
    assert word("[x1,x2]").letters == (-1, -2, 1, 2)
    assert isinstance(parse_word("[x1,x2]"), Commutator)


def test_power_and_cancellation():
    assert word("x1^3").letters == (1, 1, 1)
    assert word("x1*x1^-1").is_identity
    assert word("e").is_identity


def test_juxtaposition_and_parens():
    assert word("x1 x2") == word("x1*x2")
    assert word("(x1*x2)^-1") == word("x2^-1*x1^-1")
    assert word("[x1,x2]^2") == word("[x1,x2]*[x1,x2]")
    assert word("[[x1,x2],x3]").rank == 3


def test_rank_inference():
    assert word("x3").rank == 3
    assert word("x1", 4).rank == 4
    assert max_generator(parse_word("x2*x5")) == 5
    assert parse_word("x7") == Gen(7)


def test_rank_too_small():
    with pytest.raises(RankMismatchError):
        flatten(parse_word("x3"), 2)


@pytest.mark.parametrize("text", ["x", "x0", "[x1 x2]", "x1^", "(x1", "x1)", "y1", ""])
def test_syntax_errors_have_position(text):
    with pytest.raises(WordSyntaxError) as exc:
        word(text)
    assert 0 <= exc.value.position <= len(text)


@given(reduced_words(3))
def test_format_parse_roundtrip(w):
    assert word(format_word(w), 3) == w
