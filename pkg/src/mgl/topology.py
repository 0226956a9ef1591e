"""Cayley balls, the ultrametric on marked groups, and convergence of sequences."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .catalog import instantiate, resolve_spec
from .errors import CapExceededError, RankMismatchError
from .free import DEFAULT_MAX_FREE_BALL, FreeWord, ball_size, format_word, iter_sphere
from .marked import DEFAULT_MAX_GROUP_BALL, ElementIndex, MarkedGroup, bfs, make_marked
from .parallel import pmap

SCHEMA = "mgl/1"


# --- balls --------------------------------------------------------------------


@dataclass
class LabeledBall:
    """Radius-R ball of a Cayley graph; vertex 0 is the identity.

    ``keys[v]`` is the element key (the vertex number for membership-only
    groups) and ``words[v]`` a shortest representative.  Edges are
    ``(u, v, label)`` with v = u * s_label.
    """

    radius: int
    rank: int
    keys: list
    words: list[FreeWord]
    edges: list[tuple[int, int, int]]
    group: str = ""

    def __len__(self):
        return len(self.keys)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "group": self.group,
            "radius": self.radius,
            "rank": self.rank,
            "vertices": [format_word(w) for w in self.words],
            "edges": [list(e) for e in self.edges],
        }

    @classmethod
    def from_json(cls, doc: dict) -> LabeledBall:
        from .free import word

        rank = doc["rank"]
        words = [word(t, rank) for t in doc["vertices"]]
        return cls(doc["radius"], rank, list(range(len(words))), words, [tuple(e) for e in doc["edges"]], doc.get("group", ""))

    def to_dot(self) -> str:
        lines = [f'digraph "{self.group or "ball"}_R{self.radius}" {{']
        for v, w in enumerate(self.words):
            shape = ', shape=doublecircle' if v == 0 else ""
            lines.append(f'  {v} [label="{format_word(w)}"{shape}];')
        for u, v, i in self.edges:
            lines.append(f'  {u} -> {v} [label="s{i}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_ball(G, R: int, max_size: int = DEFAULT_MAX_GROUP_BALL) -> LabeledBall:
    """BFS ball of radius R in Cay(G, S).

    Edges join vertices that are both inside the ball; marked generators equal
    to the identity contribute no edges.
    """
    if R < 0:
        raise ValueError("radius must be non-negative")
    keys, words, _ = bfs(G, radius=R, max_size=max_size)
    n = G.rank
    edges = []
    if G.has_normal_form:
        where = {k: v for v, k in enumerate(keys)}
        live = [i for i in range(1, n + 1) if G.marking[i - 1] != G.identity]
        for u, k in enumerate(keys):
            for i in live:
                v = where.get(G.step(k, i))
                if v is not None:
                    edges.append((u, v, i))
    else:
        index = ElementIndex(G)
        for k, w in zip(keys, words):
            index.add(k, w)
        live = [i for i in range(1, n + 1) if not G.contains(FreeWord.generator(i, n))]
        for u, w in enumerate(words):
            for i in live:
                v = index.find(None, w * FreeWord.generator(i, n))
                if v is not None:
                    edges.append((u, v, i))
    return LabeledBall(R, n, keys, words, edges, getattr(G, "name", ""))


def canonical_order(ball: LabeledBall) -> list[int]:
    """Vertices in canonical order: BFS from the root following, for each
    label in turn, the outgoing then the incoming edge."""
    out_nb: dict = {}
    in_nb: dict = {}
    for u, v, i in ball.edges:
        out_nb[(u, i)] = v
        in_nb[(v, i)] = u
    order = [0]
    seen = {0}
    head = 0
    while head < len(order):
        u = order[head]
        head += 1
        for i in range(1, ball.rank + 1):
            for nb in (out_nb.get((u, i)), in_nb.get((u, i))):
                if nb is not None and nb not in seen:
                    seen.add(nb)
                    order.append(nb)
    if len(order) != len(ball.keys):
        raise ValueError("ball is not connected")
    return order


def canonical_code(ball: LabeledBall) -> bytes:
    order = canonical_order(ball)
    pos = {v: c for c, v in enumerate(order)}
    edges = sorted((pos[u], pos[v], i) for u, v, i in ball.edges)
    body = ";".join(f"{u},{v},{i}" for u, v, i in edges)
    return f"{ball.rank}|{ball.radius}|{len(order)}|{body}".encode()


def balls_isomorphic(b1: LabeledBall, b2: LabeledBall) -> bool:
    """Root- and label-preserving isomorphism of labeled digraphs."""
    if b1.rank != b2.rank:
        raise RankMismatchError(f"balls over {b1.rank} and {b2.rank} labels")
    return canonical_code(b1) == canonical_code(b2)


def ball_isomorphism(b1: LabeledBall, b2: LabeledBall) -> dict[int, int] | None:
    """The vertex bijection b1 -> b2 when the balls are isomorphic."""
    if not balls_isomorphic(b1, b2):
        return None
    return dict(zip(canonical_order(b1), canonical_order(b2)))


# --- the ultrametric ----------------------------------------------------------


@dataclass(frozen=True)
class NuResult:
    """``exact``: balls of F agree up to ``value`` and differ at value+1.
    Otherwise they agree at least through radius ``value`` (the cap)."""

    value: int
    exact: bool

    def __str__(self):
        return str(self.value) if self.exact else f">={self.value}"

    def at_least(self, c: int) -> bool:
        """Is nu >= c known?"""
        return self.value >= c

    def to_json(self):
        return {"exact": self.value} if self.exact else {"at_least": self.value}


def Exact(v: int) -> NuResult:
    return NuResult(v, True)


def AtLeast(cap: int) -> NuResult:
    return NuResult(cap, False)


@dataclass(frozen=True)
class Distance:
    """2^-nu, or the upper bound 2^-cap when nu was not resolved."""

    value: Fraction
    is_bound: bool

    @property
    def interval(self) -> tuple[Fraction, Fraction]:
        return (Fraction(0), self.value) if self.is_bound else (self.value, self.value)

    def __str__(self):
        exp = self.value.denominator.bit_length() - 1
        return f"<=2^-{exp}" if self.is_bound else f"2^-{exp}"

    def to_json(self):
        exp = self.value.denominator.bit_length() - 1
        return {"value": str(self.value), "log2": -exp, "bound": self.is_bound}


def _check_ranks(G, H):
    if G.rank != H.rank:
        raise RankMismatchError(f"ranks {G.rank} and {H.rank} differ")


def _nu_pairs(G, H, cap, max_size):
    # BFS in the Cayley graph of the diagonal subgroup of G x H: the first
    # pair with exactly one trivial coordinate is reached by a shortest word
    # in the symmetric difference of the two normal subgroups.
    eg, eh = G.identity, H.identity
    start = (eg, eh)
    seen = {start}
    frontier = [start]
    letters = [s * i for i in range(1, G.rank + 1) for s in (1, -1)]
    for r in range(1, cap + 1):
        nxt = []
        for g, h in frontier:
            for a in letters:
                p = (G.step(g, a), H.step(h, a))
                if p in seen:
                    continue
                if (p[0] == eg) != (p[1] == eh):
                    return Exact(r - 1)
                seen.add(p)
                nxt.append(p)
        if len(seen) > max_size:
            raise CapExceededError(f"pair search exceeded {max_size} elements", cap=max_size, reached=r)
        frontier = nxt
        if not frontier:
            break
    return AtLeast(cap)


def _nu_words(G, H, cap, max_free_ball):
    n = G.rank
    for r in range(1, cap + 1):
        if ball_size(n, r) > max_free_ball:
            raise CapExceededError(f"B_F({r}) exceeds {max_free_ball} words", cap=max_free_ball, reached=r - 1)
        for w in iter_sphere(n, r):
            if G.contains(w) != H.contains(w):
                return Exact(r - 1)
    return AtLeast(cap)


def nu(
    G,
    H,
    cap: int,
    method: str = "auto",
    max_free_ball: int = DEFAULT_MAX_FREE_BALL,
    max_size: int = DEFAULT_MAX_GROUP_BALL,
) -> NuResult:
    """Largest r with N and N' agreeing on B_F(r), resolved up to ``cap``.

    ``method="words"`` compares memberships word by word over B_F(r);
    ``"pairs"`` searches the diagonal Cayley graph (needs element keys).
    ``"auto"`` picks ``"pairs"`` whenever both groups have keys.
    """
    _check_ranks(G, H)
    if cap < 1:
        raise ValueError("cap must be >= 1")
    if method == "auto":
        method = "pairs" if G.has_normal_form and H.has_normal_form else "words"
    if method == "pairs":
        return _nu_pairs(G, H, cap, max_size)
    if method == "words":
        return _nu_words(G, H, cap, max_free_ball)
    raise ValueError(f"unknown method {method!r}")


def distance(G, H, cap: int, **kw) -> Distance:
    r = nu(G, H, cap, **kw)
    return Distance(Fraction(1, 2**r.value), not r.exact)


def distance_from_nu(r: NuResult) -> Distance:
    return Distance(Fraction(1, 2**r.value), not r.exact)


# --- sequences ----------------------------------------------------------------


class GroupSequence:
    """An indexed family r -> (G_r, S_r) with an optional candidate limit."""

    def __init__(self, member: Callable[[int], MarkedGroup], limit=None, start: int = 1, name: str = "sequence"):
        self._member = member
        self.limit = limit
        self.start = start
        self.name = name
        self._cache: dict = {}
        self._lock = threading.Lock()

    @classmethod
    def from_templates(cls, member_template, limit=None, start: int = 1, name: str | None = None):
        """Members from a spec template (or preset name) containing ``$r``."""

        def member(r):
            return make_marked(resolve_spec(instantiate(member_template, r)))

        lim = make_marked(resolve_spec(limit)) if limit is not None else None
        label = name or (f"{member_template} -> {limit}" if isinstance(member_template, str) else "sequence")
        return cls(member, lim, start, label)

    @classmethod
    def constant(cls, G, name=None):
        return cls(lambda r: G, G, 1, name or f"const({G.name})")

    @property
    def rank(self):
        return self.limit.rank if self.limit is not None else self.member(self.start).rank

    def member(self, r: int):
        if r < self.start:
            raise IndexError(f"index {r} before start {self.start}")
        with self._lock:
            G = self._cache.get(r)
        if G is None:
            G = self._member(r)
            if self.limit is not None and G.rank != self.limit.rank:
                raise RankMismatchError(f"member {r} has rank {G.rank}, limit has {self.limit.rank}")
            with self._lock:
                G = self._cache.setdefault(r, G)
        return G

    __getitem__ = member

    def indices(self, r_max: int) -> range:
        return range(self.start, r_max + 1)

    def _need_limit(self):
        if self.limit is None:
            raise ValueError(f"sequence {self.name} has no limit")
        return self.limit


def _eventual_start(flags, indices):
    """Least index from which every flag is true (None if the last is false)."""
    r_bar = None
    for r, ok in zip(reversed(indices), reversed(flags)):
        if not ok:
            break
        r_bar = r
    return r_bar


@dataclass
class MembershipReport:
    word: str
    in_limit: bool
    r_bar: int | None
    agreement: dict[int, bool]
    sampled: tuple[int, int]

    @property
    def ok(self):
        return self.r_bar is not None

    def to_json(self):
        return {
            "word": self.word,
            "in_limit": self.in_limit,
            "r_bar": self.r_bar,
            "sampled": list(self.sampled),
            "disagreements": [r for r, ok in self.agreement.items() if not ok],
        }


def eventual_membership(seq: GroupSequence, w: FreeWord, r_max: int, workers: int = 1) -> MembershipReport:
    """Least r_bar with (w in N_r) == (w in N) for every sampled r in [r_bar, r_max]."""
    limit = seq._need_limit()
    inside = limit.contains(w)
    idx = list(seq.indices(r_max))
    flags = pmap(lambda r: seq.member(r).contains(w) == inside, idx, workers)
    return MembershipReport(format_word(w), inside, _eventual_start(flags, idx), dict(zip(idx, flags)), (seq.start, r_max))


def matching_radius(seq: GroupSequence, R: int, r_max: int, workers: int = 1, max_size: int = DEFAULT_MAX_GROUP_BALL) -> int | None:
    """Least r_bar such that the R-balls of the limit and of every sampled
    member r in [r_bar, r_max] are isomorphic."""
    limit = seq._need_limit()
    target = canonical_code(build_ball(limit, R, max_size))
    idx = list(seq.indices(r_max))
    flags = pmap(lambda r: canonical_code(build_ball(seq.member(r), R, max_size)) == target, idx, workers)
    return _eventual_start(flags, idx)


@dataclass
class ConvergenceReport:
    cap: int
    table: dict[int, NuResult]
    thresholds: dict[int, int | None]
    consistent: bool

    def to_json(self):
        return {
            "cap": self.cap,
            "nu": [[r, v.to_json()] for r, v in self.table.items()],
            "thresholds": [[c, r] for c, r in self.thresholds.items()],
            "consistent": self.consistent,
        }


def verify_convergence(seq: GroupSequence, cap: int, r_max: int, workers: int = 1, **kw) -> ConvergenceReport:
    """nu(N, N_r) for every sampled r, plus for each c <= cap the least r_bar
    after which nu >= c on all sampled indices."""
    limit = seq._need_limit()
    idx = list(seq.indices(r_max))
    values = pmap(lambda r: nu(limit, seq.member(r), cap, **kw), idx, workers)
    table = dict(zip(idx, values))
    thresholds = {c: _eventual_start([v.at_least(c) for v in values], idx) for c in range(1, cap + 1)}
    return ConvergenceReport(cap, table, thresholds, all(r is not None for r in thresholds.values()))


@dataclass
class Prop2Report:
    """All three convergence criteria evaluated on the same sampled data."""

    sequence: str
    r_max: int
    metric: ConvergenceReport
    memberships: list[MembershipReport]
    radii: dict[int, int | None] = field(default_factory=dict)

    @property
    def all_consistent(self):
        return (
            self.metric.consistent
            and all(m.ok for m in self.memberships)
            and all(r is not None for r in self.radii.values())
        )

    @property
    def regressed(self) -> bool:
        """Some member agreed with the limit to radius c but the last sampled
        member no longer does: sampled evidence against convergence."""
        values = list(self.metric.table.values())
        for c in range(1, self.metric.cap + 1):
            flags = [v.at_least(c) for v in values]
            if flags and not flags[-1] and any(flags):
                return True
        return False

    @property
    def verdict(self) -> str:
        if self.all_consistent:
            return "consistent"
        return "not-consistent" if self.regressed else "inconclusive"

    def to_json(self):
        return {
            "schema": SCHEMA,
            "sequence": self.sequence,
            "sampled_indices": "verified only on sampled indices up to r_max",
            "r_max": self.r_max,
            "metric": self.metric.to_json(),
            "membership": [m.to_json() for m in self.memberships],
            "matching_radius": [[R, r] for R, r in self.radii.items()],
            "consistent": self.all_consistent,
            "verdict": self.verdict,
        }


def convergence_report(seq: GroupSequence, cap: int, r_max: int, word_radius: int = 3, max_R: int = 3, workers: int = 1) -> Prop2Report:
    from .free import enumerate_ball

    metric = verify_convergence(seq, cap, r_max, workers)
    words = enumerate_ball(seq.rank, word_radius)
    members = [eventual_membership(seq, w, r_max, workers) for w in words]
    radii = {R: matching_radius(seq, R, r_max, workers) for R in range(max_R + 1)}
    return Prop2Report(seq.name, r_max, metric, members, radii)
