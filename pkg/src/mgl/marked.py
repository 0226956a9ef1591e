"""Marked groups: a rank, a word-problem oracle, and the marking.

A :class:`MarkedGroup` identifies the n-marked group (G, S) with the normal
subgroup N of F_n of words that evaluate to the identity.  Concrete groups are
backed by a :class:`GroupOracle` that can multiply hashable element keys; a
:class:`MembershipGroup` only answers membership in N.
"""

from __future__ import annotations

import csv
import itertools
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Sequence

import numpy as np

from .errors import CapExceededError, RankMismatchError, SpecError
from .free import FreeWord, enumerate_ball, erase_generator, invert, multiply

DEFAULT_MAX_GROUP_BALL = 1_000_000
DEFAULT_MAX_ORDER = 1_000_000
PERM_DEGREE_CAP = 12

ElementKey = Hashable


class GroupOracle:
    """A group whose elements are hashable keys.

    Subclasses set ``identity``, ``order`` (``None`` when infinite) and
    ``native_gens``, and implement ``mul`` and ``inv``.
    """

    identity: ElementKey
    order: int | None
    native_gens: tuple

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def format(self, a) -> str:
        return str(a)

    def evaluate_native(self, w: FreeWord):
        """Evaluate a word over the native generators."""
        if w.rank != len(self.native_gens):
            raise RankMismatchError(f"word has rank {w.rank}, group has {len(self.native_gens)} native generators")
        return _evaluate(self, self.native_gens, w)

    def elements(self) -> list:
        """All elements (finite groups only), in a fixed order."""
        if self.order is None:
            raise ValueError("infinite group has no element list")
        return _closure(self, self.native_gens, max_size=self.order)

    def cayley_table(self, elements: list, index: dict) -> np.ndarray:
        k = len(elements)
        table = np.empty((k, k), dtype=np.int32)
        for i, a in enumerate(elements):
            for j, b in enumerate(elements):
                table[i, j] = index[self.mul(a, b)]
        return table


def _evaluate(oracle, gens, w):
    inverses = {}
    out = oracle.identity
    for a in w.letters:
        if a > 0:
            g = gens[a - 1]
        else:
            g = inverses.get(a)
            if g is None:
                g = inverses[a] = oracle.inv(gens[-a - 1])
        out = oracle.mul(out, g)
    return out


def _closure(oracle, seeds, max_size=DEFAULT_MAX_ORDER):
    """Elements of the subgroup generated by ``seeds``, in BFS order."""
    steps = list(seeds) + [oracle.inv(s) for s in seeds]
    seen = {oracle.identity: None}
    order = [oracle.identity]
    queue = deque(order)
    while queue:
        a = queue.popleft()
        for s in steps:
            b = oracle.mul(a, s)
            if b not in seen:
                seen[b] = None
                order.append(b)
                if len(order) > max_size:
                    raise CapExceededError(f"subgroup exceeds {max_size} elements", cap=max_size, reached=len(order))
                queue.append(b)
    return order


class CyclicOracle(GroupOracle):
    """Z/m on the integers 0..m-1; ``modulus=0`` is Z itself."""

    def __init__(self, modulus: int):
        if modulus < 0:
            raise SpecError("modulus must be >= 0")
        self.modulus = modulus
        self.identity = 0
        self.order = modulus or None
        self.native_gens = (1 % modulus if modulus else 1,)

    def mul(self, a, b):
        return (a + b) % self.modulus if self.modulus else a + b

    def inv(self, a):
        return (-a) % self.modulus if self.modulus else -a

    def elements(self):
        return list(range(self.modulus))

    def cayley_table(self, elements, index):
        m = self.modulus
        r = np.arange(m, dtype=np.int32)
        return ((r[:, None] + r[None, :]) % m).astype(np.int32)


class FiniteCayleyTable(GroupOracle):
    """Elements 0..k-1 with 0 the identity; ``table[i][j]`` is the index of g_i g_j."""

    def __init__(self, table):
        t = np.asarray(table, dtype=np.int64)
        _validate_table(t)
        self.table = t.astype(np.int32)
        k = len(t)
        self.identity = 0
        self.order = k
        inv = np.argmax(self.table == 0, axis=1)
        self._inv = [int(x) for x in inv]
        self.native_gens = tuple(range(1, k)) if k > 1 else (0,)

    def mul(self, a, b):
        return int(self.table[a, b])

    def inv(self, a):
        return self._inv[a]

    def elements(self):
        return list(range(self.order))

    def cayley_table(self, elements, index):
        return self.table.copy()


def _validate_table(t):
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise SpecError("Cayley table must be a non-empty square matrix")
    k = t.shape[0]
    if t.min() < 0 or t.max() >= k:
        raise SpecError("Cayley table entries must lie in 0..order-1")
    full = np.arange(k)
    for i in range(k):
        if not np.array_equal(np.sort(t[i]), full):
            raise SpecError(f"Cayley table row {i} is not a permutation (not a Latin square)")
        if not np.array_equal(np.sort(t[:, i]), full):
            raise SpecError(f"Cayley table column {i} is not a permutation (not a Latin square)")
    if not (np.array_equal(t[0], full) and np.array_equal(t[:, 0], full)):
        raise SpecError("row and column 0 of a Cayley table must be the identity")
    for i in range(k):
        # (g_i g_j) g_l == g_i (g_j g_l) for all j, l
        if not np.array_equal(t[t[i]], t[i][t]):
            raise SpecError(f"Cayley table is not associative (first failure with left factor {i})")


def load_table_csv(path) -> list[list[int]]:
    with open(path, newline="") as fh:
        rows = [[int(x) for x in row if x.strip()] for row in csv.reader(fh) if any(c.strip() for c in row)]
    return rows


class PermutationOracle(GroupOracle):
    """Permutations of 0..degree-1 as image tuples.

    Products act on the right: ``mul(p, q)`` applies ``p`` first, then ``q``.
    """

    def __init__(self, degree: int, gens: Sequence[Sequence[int]], max_order: int = DEFAULT_MAX_ORDER):
        if degree < 1 or degree > PERM_DEGREE_CAP:
            raise SpecError(f"permutation degree must be in 1..{PERM_DEGREE_CAP}")
        self.degree = degree
        perms = []
        for g in gens:
            g = tuple(int(x) for x in g)
            if len(g) != degree or sorted(g) != list(range(degree)):
                raise SpecError(f"{g} is not a permutation of degree {degree}")
            perms.append(g)
        self.identity = tuple(range(degree))
        self.native_gens = tuple(perms) or (self.identity,)
        self._max_order = max_order

    def mul(self, a, b):
        return tuple(b[x] for x in a)

    def inv(self, a):
        out = [0] * len(a)
        for i, x in enumerate(a):
            out[x] = i
        return tuple(out)

    @cached_property
    def _elements(self):
        return _closure(self, self.native_gens, max_size=self._max_order)

    @property
    def order(self):
        return len(self._elements)

    def elements(self):
        return list(self._elements)

    def cayley_table(self, elements, index):
        E = np.array(elements, dtype=np.int64)
        k, d = E.shape
        weights = d ** np.arange(d, dtype=np.int64)
        codes = E @ weights
        sorter = np.argsort(codes)
        table = np.empty((k, k), dtype=np.int32)
        for i in range(k):
            # row i: elements[i] then elements[j]  ->  E[j][E[i]]
            composed = E[:, E[i]] @ weights
            table[i] = sorter[np.searchsorted(codes, composed, sorter=sorter)]
        return table

    def format(self, a):
        return format_cycles(a)


def parse_cycles(text, degree: int) -> tuple[int, ...]:
    """Cycle notation on points 1..degree, e.g. ``"(1,2)(3,4,5)"`` or ``[[1,2],[3,4,5]]``."""
    if isinstance(text, str):
        body = text.replace(" ", "")
        if body in ("", "()"):
            cycles = []
        else:
            if not (body.startswith("(") and body.endswith(")")):
                raise SpecError(f"bad cycle notation {text!r}")
            try:
                cycles = [[int(x) for x in c.split(",")] for c in body[1:-1].split(")(")]
            except ValueError:
                raise SpecError(f"bad cycle notation {text!r}") from None
    else:
        cycles = [list(c) for c in text]
    image = list(range(degree))
    seen = set()
    for c in cycles:
        for p in c:
            if not 1 <= p <= degree:
                raise SpecError(f"point {p} outside 1..{degree} (permutation degree mismatch)")
            if p in seen:
                raise SpecError(f"point {p} repeated in cycles {text!r}")
            seen.add(p)
        for a, b in zip(c, c[1:] + c[:1]):
            image[a - 1] = b - 1
    return tuple(image)


def format_cycles(p) -> str:
    seen = set()
    parts = []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc = []
        x = start
        while x not in seen:
            seen.add(x)
            cyc.append(str(x + 1))
            x = p[x]
        parts.append("(" + ",".join(cyc) + ")")
    return "".join(parts) or "()"


class DirectProductOracle(GroupOracle):
    """Direct product of marked groups; the native generators are the factors'
    marked generators, embedded factor by factor."""

    def __init__(self, factors: Sequence["MarkedGroup"]):
        if not factors:
            raise SpecError("a direct product needs at least one factor")
        for f in factors:
            if not isinstance(f, MarkedGroup):
                raise SpecError("direct product factors must be marked groups with element keys")
        self.factors = [f.oracle for f in factors]
        self.identity = tuple(o.identity for o in self.factors)
        orders = [o.order for o in self.factors]
        self.order = None if any(x is None for x in orders) else math.prod(orders)
        gens = []
        for k, f in enumerate(factors):
            for s in f.marking:
                g = list(self.identity)
                g[k] = s
                gens.append(tuple(g))
        self.native_gens = tuple(gens)

    def mul(self, a, b):
        return tuple(o.mul(x, y) for o, x, y in zip(self.factors, a, b))

    def inv(self, a):
        return tuple(o.inv(x) for o, x in zip(self.factors, a))

    def _factor_views(self):
        out = []
        for o in self.factors:
            els = o.elements()
            idx = {e: i for i, e in enumerate(els)}
            out.append((els, o.cayley_table(els, idx)))
        return out

    def elements(self):
        if self.order is None:
            raise ValueError("infinite group has no element list")
        return [tuple(t) for t in itertools.product(*(o.elements() for o in self.factors))]

    def cayley_table(self, elements, index):
        table = np.zeros((1, 1), dtype=np.int64)
        for els, t in self._factor_views():
            k = len(els)
            n = table.shape[0]
            # combined index = outer * k + inner, matching itertools.product order
            table = (table[:, None, :, None] * k + t[None, :, None, :]).reshape(n * k, n * k)
        return table.astype(np.int32)

    def format(self, a):
        return "(" + ", ".join(o.format(x) for o, x in zip(self.factors, a)) + ")"


class FreeOracle(GroupOracle):
    """F_n itself; N = {e}."""

    def __init__(self, rank: int):
        self.rank = rank
        self.identity = ()
        self.order = None
        self.native_gens = tuple((i,) for i in range(1, rank + 1))

    def mul(self, a, b):
        return multiply(FreeWord(self.rank, a), FreeWord(self.rank, b)).letters

    def inv(self, a):
        return tuple(-x for x in reversed(a))

    def format(self, a):
        return str(FreeWord(self.rank, a))


@dataclass
class FiniteView:
    """Index-based picture of a finite marked group."""

    elements: list
    index: dict
    table: np.ndarray
    inverse: np.ndarray
    identity: int
    gens: tuple

    @property
    def order(self):
        return len(self.elements)

    def word_values(self, w: FreeWord, args: np.ndarray) -> np.ndarray:
        """Evaluate ``w`` on index arrays: ``args`` has shape (arity, batch)."""
        out = np.full(args.shape[1], self.identity, dtype=np.int32)
        for a in w.letters:
            x = args[a - 1] if a > 0 else self.inverse[args[-a - 1]]
            out = self.table[out, x]
        return out


class MarkedGroup:
    """An n-marked group backed by an oracle with element keys.

    The i-th free generator x_i maps to ``marking[i-1]``; repeats and the
    identity are allowed.
    """

    has_normal_form = True

    def __init__(self, oracle: GroupOracle, marking: Sequence, name: str | None = None, spec: dict | None = None):
        if not marking:
            raise SpecError("empty marking")
        self.oracle = oracle
        self.marking = tuple(marking)
        self.rank = len(self.marking)
        self.name = name or type(oracle).__name__
        self.spec = spec
        self._inverse_marking = tuple(oracle.inv(s) for s in self.marking)

    def __repr__(self):
        return f"<MarkedGroup {self.name} rank={self.rank}>"

    @property
    def order(self) -> int | None:
        return self.oracle.order

    @property
    def is_finite(self) -> bool:
        return self.oracle.order is not None

    @property
    def identity(self):
        return self.oracle.identity

    def mul(self, a, b):
        return self.oracle.mul(a, b)

    def inv(self, a):
        return self.oracle.inv(a)

    def step(self, a, letter: int):
        """Right-multiply ``a`` by the marked generator ``letter`` (signed)."""
        g = self.marking[letter - 1] if letter > 0 else self._inverse_marking[-letter - 1]
        return self.oracle.mul(a, g)

    def format_element(self, a) -> str:
        return self.oracle.format(a)

    def _check(self, w: FreeWord):
        if w.rank != self.rank:
            raise RankMismatchError(f"word of rank {w.rank} in a group of rank {self.rank}")

    def element_key(self, w: FreeWord):
        self._check(w)
        out = self.oracle.identity
        for a in w.letters:
            out = self.step(out, a)
        return out

    normal_form = element_key

    def contains(self, w: FreeWord) -> bool:
        return self.element_key(w) == self.oracle.identity

    def equal_elements(self, u: FreeWord, v: FreeWord) -> bool:
        return self.element_key(u) == self.element_key(v)

    def norm(self, w: FreeWord, max_size: int = DEFAULT_MAX_GROUP_BALL) -> int:
        return norm(self, w, max_size)

    def pad(self) -> "MarkedGroup":
        return pad_marking(self)

    def evaluate(self, w: FreeWord, args: Sequence):
        """Evaluate the word map ``w`` at a tuple of element keys."""
        if len(args) != w.rank:
            raise RankMismatchError(f"word of arity {w.rank} given {len(args)} arguments")
        return _evaluate(self.oracle, args, w)

    @cached_property
    def _view(self) -> FiniteView:
        if not self.is_finite:
            raise ValueError(f"{self.name} is infinite")
        els = self.oracle.elements()
        index = {e: i for i, e in enumerate(els)}
        table = self.oracle.cayley_table(els, index)
        inverse = np.argmax(table == index[self.oracle.identity], axis=1).astype(np.int32)
        return FiniteView(els, index, table, inverse, index[self.oracle.identity], tuple(index[s] for s in self.marking))

    def finite_view(self) -> FiniteView:
        return self._view

    def elements(self) -> list:
        return self.finite_view().elements

    def generates(self) -> bool:
        """Whether the marking generates the whole (finite) group."""
        return len(_closure(self.oracle, self.marking, max_size=self.order)) == self.order


class MembershipGroup:
    """A marked group known only through membership in N.

    Element equality falls back to ``contains(u v^-1)``, memoised.
    """

    has_normal_form = False
    order = None
    is_finite = False

    def __init__(self, rank: int, contains: Callable[[FreeWord], bool], name: str = "membership-oracle"):
        self.rank = rank
        self._contains = contains
        self._memo: dict = {}
        self.name = name
        self.spec = None

    def __repr__(self):
        return f"<MembershipGroup {self.name} rank={self.rank}>"

    def contains(self, w: FreeWord) -> bool:
        if w.rank != self.rank:
            raise RankMismatchError(f"word of rank {w.rank} in a group of rank {self.rank}")
        hit = self._memo.get(w.letters)
        if hit is None:
            hit = self._memo[w.letters] = bool(self._contains(w))
        return hit

    def equal_elements(self, u: FreeWord, v: FreeWord) -> bool:
        return self.contains(multiply(u, invert(v)))

    def element_key(self, w):
        raise TypeError(f"{self.name} has no normal form; use equal_elements")

    def norm(self, w: FreeWord, max_size: int = DEFAULT_MAX_GROUP_BALL) -> int:
        return norm(self, w, max_size)

    def pad(self):
        return pad_marking(self)


def pad_marking(G):
    """View an n-marked group as (n+1)-marked by appending the identity."""
    if isinstance(G, MarkedGroup):
        return MarkedGroup(G.oracle, G.marking + (G.oracle.identity,), name=f"pad({G.name})")
    n = G.rank
    return MembershipGroup(n + 1, lambda w: G.contains(erase_generator(w, n + 1, new_rank=n)), name=f"pad({G.name})")


class ElementIndex:
    """Assigns vertex ids to group elements met during a search.

    Uses element keys when the group has them; otherwise compares
    representative words by membership tests.
    """

    def __init__(self, G):
        self.G = G
        self.keyed = G.has_normal_form
        self.ids: dict = {}
        self.reps: list[FreeWord] = []

    def find(self, key, w: FreeWord):
        if self.keyed:
            return self.ids.get(key)
        for i, rep in enumerate(self.reps):
            if self.G.equal_elements(w, rep):
                return i
        return None

    def add(self, key, w: FreeWord) -> int:
        i = len(self.reps)
        self.reps.append(w)
        if self.keyed:
            self.ids[key] = i
        return i


def bfs(G, radius: int | None = None, max_size: int = DEFAULT_MAX_GROUP_BALL, stop: Callable | None = None):
    """Breadth-first search of the Cayley graph of (G, S u S^-1) from the identity.

    Returns ``(keys, words, dist)`` in discovery order; ``words`` are shortest
    representatives.  ``stop(key, word)`` ends the search early when true.
    """
    n = G.rank
    ident = FreeWord.identity(n)
    keyed = G.has_normal_form
    index = ElementIndex(G)
    key0 = G.identity if keyed else None
    index.add(key0, ident)
    keys, words, dist = [key0], [ident], [0]
    if stop and stop(key0, ident):
        return keys, words, dist
    head = 0
    letters = [s * i for i in range(1, n + 1) for s in (1, -1)]
    while head < len(keys):
        d = dist[head]
        if radius is not None and d >= radius:
            break
        k, w = keys[head], words[head]
        head += 1
        for a in letters:
            if w.letters and w.letters[-1] == -a:
                continue
            nw = FreeWord(n, w.letters + (a,))
            nk = G.step(k, a) if keyed else None
            if index.find(nk, nw) is not None:
                continue
            index.add(nk, nw)
            keys.append(nk)
            words.append(nw)
            dist.append(d + 1)
            if len(keys) > max_size:
                raise CapExceededError(
                    f"Cayley ball of {G.name} exceeds {max_size} elements", cap=max_size, reached=d
                )
            if stop and stop(nk, nw):
                return keys, words, dist
    if not keyed:
        keys = list(range(len(words)))
    return keys, words, dist


def norm(G, w: FreeWord, max_size: int = DEFAULT_MAX_GROUP_BALL) -> int:
    """Word norm |g|_S of the element represented by ``w``."""
    if w.rank != G.rank:
        raise RankMismatchError(f"word of rank {w.rank} in a group of rank {G.rank}")
    if G.has_normal_form:
        return key_norm(G, G.element_key(w), max_size)
    keys, words, dist = bfs(G, max_size=max_size, stop=lambda _k, u: G.equal_elements(u, w))
    if G.equal_elements(words[-1], w):
        return dist[-1]
    raise ValueError("element not reachable from the marking")


def key_norm(G: MarkedGroup, key, max_size: int = DEFAULT_MAX_GROUP_BALL) -> int:
    keys, _, dist = bfs(G, max_size=max_size, stop=lambda k, _w: k == key)
    if keys[-1] != key:
        raise ValueError("element not reachable from the marking")
    return dist[-1]


def shortest_word(G: MarkedGroup, key, max_size: int = DEFAULT_MAX_GROUP_BALL) -> FreeWord:
    keys, words, _ = bfs(G, max_size=max_size, stop=lambda k, _w: k == key)
    if keys[-1] != key:
        raise ValueError("element not reachable from the marking")
    return words[-1]


# --- spec ingestion ---------------------------------------------------------


def _marking_words(marking, native_rank, path):
    from .free import word

    out = []
    for k, m in enumerate(marking):
        if isinstance(m, FreeWord):
            out.append(m)
            continue
        if not isinstance(m, str):
            raise SpecError(f"marking entry {m!r} must be a word string", f"{path}.marking[{k}]")
        try:
            out.append(word(m, native_rank))
        except ValueError as exc:
            raise SpecError(str(exc), f"{path}.marking[{k}]") from None
    return out


def make_marked(spec: dict, path: str = "$", self_check: bool = True, max_order: int = DEFAULT_MAX_ORDER) -> MarkedGroup:
    """Build a marked group from a JSON-compatible GroupSpec.

    Malformed specs raise :class:`SpecError` carrying the path of the
    offending (sub)document.
    """
    try:
        return _make_marked(spec, path, self_check, max_order)
    except SpecError as exc:
        if exc.path is None:
            raise SpecError(str(exc), path) from None
        raise


def _make_marked(spec, path, self_check, max_order):
    if not isinstance(spec, dict) or "kind" not in spec:
        raise SpecError("group spec must be an object with a 'kind'", path)
    kind = spec["kind"]
    name = spec.get("name")
    if kind == "cyclic":
        m = spec.get("modulus")
        if not isinstance(m, int) or m < 0:
            raise SpecError("'modulus' must be a non-negative integer", path)
        oracle = CyclicOracle(m)
        raw = spec.get("marking", [1])
        if not raw:
            raise SpecError("empty marking", path)
        marking = []
        for k, x in enumerate(raw):
            if isinstance(x, int):
                marking.append(x % m if m else x)
            else:
                marking.append(oracle.evaluate_native(_marking_words([x], 1, path)[0]))
        name = name or ("Z" if m == 0 else f"C{m}")
    elif kind == "table":
        if "csv" in spec:
            table = load_table_csv(spec["csv"])
        elif "table" in spec:
            table = spec["table"]
        else:
            raise SpecError("table spec needs 'table' or 'csv'", path)
        if "order" in spec and spec["order"] != len(table):
            raise SpecError(f"'order' is {spec['order']} but the table has {len(table)} rows", path)
        oracle = FiniteCayleyTable(table)
        raw = spec.get("marking")
        if not raw:
            raise SpecError("empty marking", path)
        for x in raw:
            if not isinstance(x, int) or not 0 <= x < oracle.order:
                raise SpecError(f"marking index {x!r} out of range", path)
        marking = list(raw)
        name = name or f"table{oracle.order}"
    elif kind == "perm":
        d = spec.get("degree")
        if not isinstance(d, int):
            raise SpecError("'degree' must be an integer", path)
        gens = []
        for k, g in enumerate(spec.get("gens", [])):
            try:
                gens.append(parse_cycles(g, d))
            except SpecError as exc:
                raise SpecError(str(exc), f"{path}.gens[{k}]") from None
        if not gens:
            raise SpecError("permutation spec needs at least one generator", path)
        oracle = PermutationOracle(d, gens, max_order=max_order)
        words = _marking_words(spec.get("marking") or [f"x{i}" for i in range(1, len(gens) + 1)], len(gens), path)
        marking = [oracle.evaluate_native(w) for w in words]
        name = name or f"perm{d}"
    elif kind == "product":
        factors = spec.get("factors")
        if not factors:
            raise SpecError("product spec needs 'factors'", path)
        fgroups = [make_marked(f, f"{path}.factors[{k}]", self_check=False, max_order=max_order) for k, f in enumerate(factors)]
        oracle = DirectProductOracle(fgroups)
        if "marking" not in spec:
            raise SpecError("product spec needs an explicit 'marking' over the concatenated factor generators", path)
        words = _marking_words(spec["marking"], len(oracle.native_gens), path)
        if not words:
            raise SpecError("empty marking", path)
        marking = [oracle.evaluate_native(w) for w in words]
        name = name or "x".join(g.name for g in fgroups)
    elif kind == "free":
        n = spec.get("rank")
        if not isinstance(n, int) or n < 1:
            raise SpecError("'rank' must be a positive integer", path)
        oracle = FreeOracle(n)
        marking = list(oracle.native_gens)
        name = name or f"F{n}"
    else:
        raise SpecError(f"unknown group kind {kind!r}", path)
    G = MarkedGroup(oracle, marking, name=name, spec=spec)
    if self_check:
        _self_check(G, path)
    return G


def _self_check(G: MarkedGroup, path):
    ident = FreeWord.identity(G.rank)
    if not G.contains(ident):
        raise SpecError("oracle does not contain the identity word", path)
    for w in enumerate_ball(G.rank, 2 if G.rank <= 3 else 1):
        if G.contains(w) != G.contains(invert(w)):
            raise SpecError(f"membership not closed under inverses at {w}", path)
    if G.is_finite and not G.generates():
        raise SpecError("marking does not generate the group", path)
