"""Reduced words in the free group F_n.

A letter is a nonzero int: ``+i`` stands for the generator x_i and ``-i`` for
its inverse.  Generators are 1-indexed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import CapExceededError, RankMismatchError

DEFAULT_MAX_FREE_BALL = 2_000_000


def _check_letters(letters, rank):
    for a in letters:
        if a == 0 or abs(a) > rank:
            raise ValueError(f"letter {a} out of range for rank {rank}")


@dataclass(frozen=True)
class FreeWord:
    rank: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be positive")
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        _check_letters(letters, self.rank)
        for a, b in zip(letters, letters[1:]):
            if a == -b:
                raise ValueError(f"word {letters} is not reduced")

    @classmethod
    def identity(cls, rank: int) -> FreeWord:
        return cls(rank, ())

    @classmethod
    def generator(cls, i: int, rank: int, sign: int = 1) -> FreeWord:
        return cls(rank, (i * sign,))

    @property
    def pairs(self) -> list[tuple[int, int]]:
        """Letters as ``(generator_index, exponent_sign)`` pairs."""
        return [(abs(a), 1 if a > 0 else -1) for a in self.letters]

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other: FreeWord) -> FreeWord:
        return multiply(self, other)

    def __invert__(self) -> FreeWord:
        return invert(self)

    def __pow__(self, k: int) -> FreeWord:
        if k < 0:
            return invert(self) ** (-k)
        out = FreeWord.identity(self.rank)
        for _ in range(k):
            out = multiply(out, self)
        return out

    def __str__(self):
        return format_word(self)

    def __repr__(self):
        return f"FreeWord({self.rank}, {format_word(self)!r})"


def _free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for a in letters:
        if stack and stack[-1] == -a:
            stack.pop()
        else:
            stack.append(a)
    return tuple(stack)


def reduce(raw: Iterable, rank: int) -> FreeWord:
    """Freely reduce a list of letters.

    ``raw`` may contain signed ints or ``(index, sign)`` pairs.
    """
    letters = []
    for a in raw:
        if isinstance(a, tuple):
            i, s = a
            if s not in (1, -1):
                raise ValueError(f"exponent sign must be +1 or -1, got {s}")
            a = i * s
        letters.append(int(a))
    _check_letters(letters, rank)
    return FreeWord(rank, _free_reduce(letters))


def _same_rank(u: FreeWord, v: FreeWord):
    if u.rank != v.rank:
        raise RankMismatchError(f"rank {u.rank} vs rank {v.rank}")


def multiply(u: FreeWord, v: FreeWord) -> FreeWord:
    _same_rank(u, v)
    a, b = u.letters, v.letters
    k = 0
    while k < len(a) and k < len(b) and a[-1 - k] == -b[k]:
        k += 1
    return FreeWord(u.rank, a[: len(a) - k] + b[k:])


def invert(u: FreeWord) -> FreeWord:
    return FreeWord(u.rank, tuple(-a for a in reversed(u.letters)))


def word_length(u: FreeWord) -> int:
    return len(u.letters)


def commutator(u: FreeWord, v: FreeWord) -> FreeWord:
    """``[u, v] = u^-1 v^-1 u v``."""
    return invert(u) * invert(v) * u * v


def conjugate(w: FreeWord, g: FreeWord) -> FreeWord:
    """``g w g^-1``."""
    return g * w * invert(g)


def substitute(w: FreeWord, args: Sequence[FreeWord]) -> FreeWord:
    """Replace each x_i in ``w`` by ``args[i-1]`` and reduce."""
    if len(args) != w.rank:
        raise RankMismatchError(f"word of rank {w.rank} needs {w.rank} arguments, got {len(args)}")
    rank = args[0].rank
    for a in args:
        if a.rank != rank:
            raise RankMismatchError("substitution arguments have different ranks")
    inv = [invert(a) for a in args]
    out: list[int] = []
    for letter in w.letters:
        piece = args[letter - 1] if letter > 0 else inv[-letter - 1]
        out.extend(piece.letters)
    return FreeWord(rank, _free_reduce(out))


def erase_generator(w: FreeWord, i: int, new_rank: int | None = None) -> FreeWord:
    """Delete every x_i^{+-1} from ``w`` and reduce; optionally drop to ``new_rank``."""
    letters = _free_reduce(a for a in w.letters if abs(a) != i)
    return FreeWord(new_rank if new_rank is not None else w.rank, letters)


def ball_size(rank: int, radius: int) -> int:
    if radius < 0:
        return 0
    if rank == 1:
        return 2 * radius + 1
    q = 2 * rank - 1
    return 1 + 2 * rank * (q**radius - 1) // (q - 1)


def sphere_size(rank: int, length: int) -> int:
    if length == 0:
        return 1
    return 2 * rank * (2 * rank - 1) ** (length - 1)


def _alphabet(rank):
    return [s * i for i in range(1, rank + 1) for s in (1, -1)]


def _unchecked(rank, letters):
    w = object.__new__(FreeWord)
    object.__setattr__(w, "rank", rank)
    object.__setattr__(w, "letters", letters)
    return w


def iter_sphere(rank: int, length: int) -> Iterator[FreeWord]:
    """Reduced words of exactly the given length, by DFS over reduced extensions."""
    alphabet = _alphabet(rank)
    if length == 0:
        yield _unchecked(rank, ())
        return
    stack = [(a,) for a in reversed(alphabet)]
    while stack:
        prefix = stack.pop()
        if len(prefix) == length:
            yield _unchecked(rank, prefix)
            continue
        last = prefix[-1]
        for a in reversed(alphabet):
            if a != -last:
                stack.append(prefix + (a,))


def enumerate_ball(rank: int, radius: int, max_size: int | None = DEFAULT_MAX_FREE_BALL) -> list[FreeWord]:
    """All reduced words of length <= radius, shortest first."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    size = ball_size(rank, radius)
    if max_size is not None and size > max_size:
        raise CapExceededError(
            f"free ball B_F({radius}) of rank {rank} has {size} words (cap {max_size})",
            cap=max_size,
            reached=max(r for r in range(radius + 1) if ball_size(rank, r) <= max_size),
        )
    out = []
    for r in range(radius + 1):
        out.extend(iter_sphere(rank, r))
    return out


def format_word(w: FreeWord) -> str:
    """Canonical text form, e.g. ``x1^2*x2^-1``; the identity prints as ``e``."""
    if not w.letters:
        return "e"
    parts = []
    letters = w.letters
    k = 0
    while k < len(letters):
        a = letters[k]
        j = k
        while j < len(letters) and letters[j] == a:
            j += 1
        exp = (j - k) * (1 if a > 0 else -1)
        parts.append(f"x{abs(a)}" if exp == 1 else f"x{abs(a)}^{exp}")
        k = j
    return "*".join(parts)


def word(text: str, rank: int | None = None) -> FreeWord:
    """Parse and flatten ``text`` in one step."""
    from .parse import flatten, parse_word

    return flatten(parse_word(text), rank)
