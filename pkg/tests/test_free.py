import pytest
from hypothesis import given
from hypothesis import strategies as st

from mgl.errors import CapExceededError, RankMismatchError
from mgl.free import (
    FreeWord,
    ball_size,
    commutator,
    enumerate_ball,
    erase_generator,
    invert,
    iter_sphere,
    multiply,
    reduce,
    substitute,
    word,
    word_length,
)
from strategies import raw_letters, reduced_words

E2 = FreeWord.identity(2)


def test_reduce_examples():
    assert reduce([1, -1], 1).is_identity
    assert reduce([1, 2, -2, 1], 2) == word("x1^2", 2)
    w = word("x1*x2^-1*x1", 2)
    assert reduce(w.letters, 2) == w


def test_reduce_accepts_pairs():
    assert reduce([(1, 1), (2, -1)], 2).letters == (1, -2)


def test_freeword_rejects_unreduced():
    with pytest.raises(ValueError):
        FreeWord(1, (1, -1))


def test_multiply_invert_examples():
    x1, x2 = FreeWord.generator(1, 2), FreeWord.generator(2, 2)
    assert multiply(x1, ~x1).is_identity
    assert invert(x1 * x2).letters == (-2, -1)
    assert word_length(word("x1^2*x2^-1", 2)) == 3


def test_rank_mismatch():
    with pytest.raises(RankMismatchError):
        multiply(FreeWord.generator(1, 1), FreeWord.generator(1, 2))


def test_enumerate_ball_examples():
    b = enumerate_ball(1, 2)
    assert {str(w) for w in b} == {"e", "x1", "x1^-1", "x1^2", "x1^-2"}
    assert len(enumerate_ball(2, 1)) == 5
    assert len(enumerate_ball(2, 2)) == 17


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("r", range(7))
def test_ball_size_formula(n, r):
    ball = enumerate_ball(n, r)
    assert len(ball) == ball_size(n, r) == len(set(ball))
    # naive oracle: closure of {e} under right multiplication by letters
    layer, seen = {()}, {()}
    for _ in range(r):
        nxt = set()
        for t in layer:
            for a in [s * i for i in range(1, n + 1) for s in (1, -1)]:
                u = t[:-1] if t and t[-1] == -a else t + (a,)
                if u not in seen:
                    nxt.add(u)
        seen |= nxt
        layer = nxt
    assert {w.letters for w in ball} == seen


def test_ball_ordered_by_length():
    lengths = [len(w) for w in enumerate_ball(2, 4)]
    assert lengths == sorted(lengths)


def test_ball_cap():
    with pytest.raises(CapExceededError):
        enumerate_ball(3, 6, max_size=100)


def test_iter_sphere_matches_ball():
    assert sum(1 for _ in iter_sphere(2, 3)) == ball_size(2, 3) - ball_size(2, 2)


def test_substitute_examples():
    c = word("[x1,x2]")
    x1, x2 = FreeWord.generator(1, 2), FreeWord.generator(2, 2)
    assert substitute(c, [x1, x1]).is_identity
    assert substitute(word("x1^2"), [x2]) == word("x2^2", 2)


def _letterwise(w, args):
    # expand letter by letter, reduce once at the end
    raw = []
    for a in w.letters:
        img = args[abs(a) - 1].letters
        raw.extend(img if a > 0 else [-b for b in reversed(img)])
    return reduce(raw, args[0].rank)


def test_substitute_commutator_of_product():
    x1, x2 = FreeWord.generator(1, 2), FreeWord.generator(2, 2)
    got = substitute(word("[x1,x2]"), [x1 * x2, x2])
    assert got == _letterwise(word("[x1,x2]"), [x1 * x2, x2])
    assert got == word("x2^-1*x1^-1*x2^-1*x1*x2*x2", 2)


@given(reduced_words(3, 8), st.lists(reduced_words(2, 5), min_size=3, max_size=3))
def test_substitute_matches_letterwise(w, args):
    assert substitute(w, args) == _letterwise(w, args)


def test_erase_generator():
    assert erase_generator(word("x1*x2*x1^-1"), 2, 1).is_identity
    assert erase_generator(word("x1*x2*x1"), 2, 1) == word("x1^2")


def test_commutator_convention():
    x1, x2 = FreeWord.generator(1, 2), FreeWord.generator(2, 2)
    assert commutator(x1, x2).letters == (-1, -2, 1, 2)


@given(raw_letters(3, 20))
def test_reduce_idempotent_and_shortening(raw):
    w = reduce(raw, 3)
    assert reduce(w.letters, 3) == w
    assert len(w) <= len(raw)


@given(reduced_words(2), reduced_words(2), reduced_words(2))
def test_group_axioms(u, v, w):
    assert (u * v) * w == u * (v * w)
    assert (u * ~u).is_identity and (~u * u).is_identity
    assert u * E2 == u == E2 * u
    assert ~(u * v) == ~v * ~u


@given(reduced_words(3), reduced_words(3))
def test_subadditive(u, v):
    assert word_length(u * v) <= word_length(u) + word_length(v)


@given(reduced_words(2, 6), st.integers(-4, 4))
def test_power(u, k):
    expected = E2
    for _ in range(abs(k)):
        expected = expected * (u if k > 0 else ~u)
    assert u**k == expected
