"""Word maps, value sets w{G}, verbal subgroups G_w and bounded conciseness."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from .errors import CapExceededError
from .free import FreeWord, format_word, substitute, word
from .marked import DEFAULT_MAX_GROUP_BALL, MarkedGroup, _closure, bfs, shortest_word
from .parallel import pmap
from .topology import SCHEMA, GroupSequence, build_ball, matching_radius

DEFAULT_MAX_EVALUATIONS = 10**7
_CHUNK = 1 << 18


@dataclass(frozen=True)
class WordMap:
    """A word w in F_r, read as the map G^r -> G."""

    word: FreeWord
    display: str = ""

    @classmethod
    def parse(cls, text: str, arity: int | None = None) -> WordMap:
        return cls(word(text, arity), text)

    @property
    def arity(self) -> int:
        return self.word.rank

    def __str__(self):
        return self.display or format_word(self.word)


def as_word_map(w) -> WordMap:
    if isinstance(w, WordMap):
        return w
    if isinstance(w, FreeWord):
        return WordMap(w, format_word(w))
    return WordMap.parse(w)


def _value_indices(G: MarkedGroup, w: WordMap, max_evaluations: int) -> np.ndarray:
    view = G.finite_view()
    k, a = view.order, w.arity
    total = k**a
    if total > max_evaluations:
        raise CapExceededError(f"|G|^arity = {k}^{a} = {total} evaluations exceeds cap {max_evaluations}", cap=max_evaluations)
    found = np.zeros(k, dtype=bool)
    powers = k ** np.arange(a - 1, -1, -1, dtype=np.int64)
    for lo in range(0, total, _CHUNK):
        flat = np.arange(lo, min(total, lo + _CHUNK), dtype=np.int64)
        args = ((flat[None, :] // powers[:, None]) % k).astype(np.int32)
        found[view.word_values(w.word, args)] = True
    return np.flatnonzero(found)


def w_values(G: MarkedGroup, w, max_evaluations: int = DEFAULT_MAX_EVALUATIONS) -> frozenset:
    """Exact w{G} for a finite group, by evaluating w on all of G^arity."""
    w = as_word_map(w)
    view = G.finite_view()
    return frozenset(view.elements[i] for i in _value_indices(G, w, max_evaluations))


def w_values_sampled(G, w, budget: int = 10**5, radius: int = 4, seed: int = 0, max_size: int = DEFAULT_MAX_GROUP_BALL) -> frozenset:
    """A subset of w{G}: arguments are drawn from the ball of the given radius,
    all tuples if there are at most ``budget`` of them, else ``budget`` random ones."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    w = as_word_map(w)
    keys = build_ball(G, radius, max_size).keys
    if len(keys) ** w.arity <= budget:
        tuples = itertools.product(keys, repeat=w.arity)
    else:
        rng = random.Random(seed)
        tuples = ([rng.choice(keys) for _ in range(w.arity)] for _ in range(budget))
    return frozenset(G.evaluate(w.word, args) for args in tuples)


def _closure_indices(view, seeds) -> np.ndarray:
    seeds = np.unique(np.asarray(list(seeds), dtype=np.int32))
    steps = np.unique(np.concatenate([seeds, view.inverse[seeds]]))
    member = np.zeros(view.order, dtype=bool)
    member[view.identity] = True
    frontier = np.array([view.identity], dtype=np.int32)
    while frontier.size:
        prods = np.unique(view.table[frontier][:, steps])
        fresh = prods[~member[prods]]
        member[fresh] = True
        frontier = fresh
    return np.flatnonzero(member)


def subgroup_closure(G: MarkedGroup, seeds, max_size: int = DEFAULT_MAX_GROUP_BALL) -> frozenset:
    """The subgroup generated by ``seeds`` (element keys)."""
    seeds = list(seeds)
    if not seeds:
        raise ValueError("seeds must be non-empty")
    if G.is_finite:
        view = G.finite_view()
        return frozenset(view.elements[i] for i in _closure_indices(view, [view.index[s] for s in seeds]))
    return frozenset(_closure(G.oracle, seeds, max_size=max_size))


@dataclass
class ConcisenessRecord:
    group: str
    word: str
    m: int
    verbal_order: int
    values: list = field(repr=False, default_factory=list)
    exhaustive: bool = True
    order: int | None = None

    def to_json(self):
        return {"group": self.group, "m": self.m, "verbal_order": self.verbal_order, "exhaustive": self.exhaustive}


def conciseness_record(G: MarkedGroup, w, max_evaluations: int = DEFAULT_MAX_EVALUATIONS) -> ConcisenessRecord:
    """|w{G}| and |G_w| for a finite group."""
    w = as_word_map(w)
    view = G.finite_view()
    vals = _value_indices(G, w, max_evaluations)
    closure = _closure_indices(view, vals)
    return ConcisenessRecord(
        G.name, str(w), len(vals), len(closure), [G.format_element(view.elements[i]) for i in vals], True, view.order
    )


@dataclass
class DeltaProfile:
    """Empirical lower envelope m -> max |G_w| over the groups seen so far."""

    word: str
    family: str
    records: list[ConcisenessRecord] = field(default_factory=list)
    errors: list[tuple[str, str]] = field(default_factory=list)

    @property
    def delta(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for rec in self.records:
            out[rec.m] = max(out.get(rec.m, 0), rec.verbal_order)
        return dict(sorted(out.items()))

    def add(self, rec: ConcisenessRecord):
        self.records.append(rec)

    def merge(self, other: DeltaProfile) -> DeltaProfile:
        return DeltaProfile(self.word, self.family, self.records + other.records, self.errors + other.errors)

    def to_json(self):
        return {
            "schema": SCHEMA,
            "word": self.word,
            "family": self.family,
            "records": [r.to_json() for r in self.records],
            "errors": [{"group": g, "error": e} for g, e in self.errors],
            "delta": [[m, b] for m, b in self.delta.items()],
        }

    def to_table(self) -> str:
        rows = [("group", "m", "|G_w|", "exhaustive")]
        rows += [(r.group, str(r.m), str(r.verbal_order), "yes" if r.exhaustive else "no") for r in self.records]
        rows += [(g, "-", "-", f"error: {e}") for g, e in self.errors]
        widths = [max(len(row[c]) for row in rows) for c in range(4)]
        lines = ["  ".join(cell.ljust(wd) for cell, wd in zip(row, widths)).rstrip() for row in rows]
        lines.append("")
        lines.append("delta: " + ", ".join(f"{m}->{b}" for m, b in self.delta.items()))
        return "\n".join(lines)


def delta_profile(family, w, family_name: str = "family", workers: int = 1, max_evaluations: int = DEFAULT_MAX_EVALUATIONS) -> DeltaProfile:
    """Conciseness records over a family of finite marked groups.

    Members may be marked groups or zero-argument callables building one;
    a member that fails is recorded in ``errors``.
    """
    w = as_word_map(w)

    def one(member):
        try:
            G = member() if callable(member) else member
            return conciseness_record(G, w, max_evaluations), None
        except Exception as exc:  # recorded, not fatal
            label = getattr(member, "name", None) or getattr(member, "__name__", repr(member))
            return None, (label, f"{type(exc).__name__}: {exc}")

    profile = DeltaProfile(str(w), family_name)
    for rec, err in pmap(one, family, workers):
        if rec is not None:
            profile.add(rec)
        else:
            profile.errors.append(err)
    return profile


def key_norms(G: MarkedGroup, keys, max_size: int = DEFAULT_MAX_GROUP_BALL) -> dict:
    """Word norms of several elements from one BFS."""
    todo = set(keys)
    out = {}

    def stop(k, _w):
        todo.discard(k)
        return not todo

    found, _, dist = bfs(G, max_size=max_size, stop=stop)
    wanted = set(keys)
    for k, d in zip(found, dist):
        if k in wanted and k not in out:
            out[k] = d
    if len(out) != len(wanted):
        raise ValueError("some elements are not reachable from the marking")
    return out


@dataclass
class FiniteSupport:
    """Ball elements whose w-values cover everything found so far.

    ``stabilized`` is a heuristic: the last ``stable`` radius increments found
    no new values.  ``exact`` means the ball exhausted a finite group.
    """

    support: list
    support_words: list[FreeWord]
    values: frozenset
    value_words: dict
    stabilized: bool
    exact: bool
    history: list[tuple[int, int]]

    @property
    def radius(self):
        return self.history[-1][0] if self.history else 0


def finite_support(G: MarkedGroup, w, radii=range(0, 9), stable: int = 2, max_evaluations: int = DEFAULT_MAX_EVALUATIONS, max_size: int = DEFAULT_MAX_GROUP_BALL) -> FiniteSupport:
    """Grow w{B(R)} over a schedule of radii until it stops changing."""
    w = as_word_map(w)
    witness: dict = {}
    history = []
    quiet = 0
    exact = False
    ball = None
    prev_size = -1
    for R in radii:
        ball = build_ball(G, R, max_size)
        n = len(ball.keys)
        if n**w.arity > max_evaluations:
            raise CapExceededError(f"{n}^{w.arity} evaluations at radius {R} exceed {max_evaluations}", cap=max_evaluations, reached=R)
        before = len(witness)
        for combo in itertools.product(range(n), repeat=w.arity):
            v = G.evaluate(w.word, [ball.keys[i] for i in combo])
            if v not in witness:
                witness[v] = combo
        history.append((R, len(witness)))
        exact = G.is_finite and n == G.order
        if history[:-1]:
            quiet = quiet + 1 if len(witness) == before else 0
        if quiet >= stable or (exact and n == prev_size):
            break
        prev_size = n
    used = sorted({i for combo in witness.values() for i in combo})
    value_words = {}
    for v, combo in witness.items():
        # BFS balls of growing radius share a prefix, so indices stay valid
        value_words[v] = substitute(w.word, [ball.words[i] for i in combo])
    return FiniteSupport(
        [ball.keys[i] for i in used],
        [ball.words[i] for i in used],
        frozenset(witness),
        value_words,
        quiet >= stable or exact,
        exact,
        history,
    )


# --- the bounded-conciseness proof, replayed ----------------------------------


@dataclass
class Step:
    name: str
    status: str  # "pass" | "fail" | "inconclusive" | "not-met"
    witness: dict = field(default_factory=dict)

    def to_json(self):
        return {"step": self.name, "status": self.status, "witness": self.witness}


@dataclass
class TheoremAReport:
    sequence: str
    word: str
    r_max: int
    steps: list[Step]

    @property
    def verdict(self) -> str:
        statuses = [s.status for s in self.steps]
        if "fail" in statuses:
            return "fail"
        if "not-met" in statuses:
            return "hypothesis-not-met"
        if "inconclusive" in statuses:
            return "inconclusive"
        return "pass"

    def step(self, name) -> Step:
        return next(s for s in self.steps if s.name == name)

    def to_json(self):
        return {
            "schema": SCHEMA,
            "sequence": self.sequence,
            "word": self.word,
            "r_max": self.r_max,
            "scale": "at desk scale: 'for all r >= r_bar' checked on sampled r <= r_max",
            "steps": [s.to_json() for s in self.steps],
            "verdict": self.verdict,
        }


def theorem_a_check(
    seq: GroupSequence,
    w,
    r_max: int,
    radii=range(0, 9),
    stable: int = 2,
    max_evaluations: int = DEFAULT_MAX_EVALUATIONS,
    max_size: int = DEFAULT_MAX_GROUP_BALL,
    workers: int = 1,
) -> TheoremAReport:
    """Replay the proof that bounded conciseness passes to limits.

    (a) w{G} inside a ball B(R) of the limit; (b) a matching radius r_bar for
    R-balls; (c) |w{G_r}| = |w{G}| for sampled r >= r_bar; (d) a uniform bound
    delta on |(G_r)_w|; (e) an enlarged R' whose balls hold every (G_r)_w, and
    G_w of the same order inside the matched ball of the limit.
    """
    w = as_word_map(w)
    G = seq._need_limit()
    report = TheoremAReport(seq.name, str(w), r_max, [])
    steps = report.steps

    def fmt(keys):
        return sorted(G.format_element(k) for k in keys)

    # (a)
    try:
        if G.is_finite:
            values = w_values(G, w, max_evaluations)
            stabilized = True
        else:
            fs = finite_support(G, w, radii, stable, max_evaluations, max_size)
            values, stabilized = fs.values, fs.stabilized
    except CapExceededError as exc:
        steps.append(Step("a", "inconclusive", {"reason": str(exc)}))
        return report
    if not stabilized:
        steps.append(Step("a", "not-met", {"reason": "w-values keep growing with the radius; w{G} appears infinite", "values_found": len(values)}))
        return report
    norms = key_norms(G, values, max_size)
    R = max(norms.values())
    m = len(values)
    steps.append(Step("a", "pass", {"R": R, "m": m, "values": fmt(values)}))

    # (b)
    r_bar = matching_radius(seq, R, r_max, workers, max_size)
    if r_bar is None:
        steps.append(Step("b", "inconclusive", {"R": R, "reason": f"no matching index up to r_max={r_max}"}))
        return report
    steps.append(Step("b", "pass", {"R": R, "r_bar": r_bar}))
    idx = list(range(r_bar, r_max + 1))

    # words of the limit's values, transported into each member
    value_words = {k: shortest_word(G, k, max_size) for k in values}

    def member_data(r):
        H = seq.member(r)
        vals = _value_indices(H, w, max_evaluations)
        view = H.finite_view()
        transported = {view.index[H.element_key(u)] for u in value_words.values()}
        closure = _closure_indices(view, vals)
        closure_keys = [view.elements[i] for i in closure]
        radius = max(key_norms(H, closure_keys, max_size).values())
        return len(vals), transported == set(vals.tolist()), len(closure), radius

    try:
        data = dict(zip(idx, pmap(member_data, idx, workers)))
    except CapExceededError as exc:
        steps.append(Step("c", "inconclusive", {"reason": str(exc)}))
        return report

    # (c)
    sizes = {r: d[0] for r, d in data.items()}
    identified = all(d[1] for d in data.values())
    ok_c = all(s == m for s in sizes.values()) and identified
    steps.append(Step("c", "pass" if ok_c else "fail", {"m": m, "sizes": sorted(set(sizes.values())), "values_identified": identified}))
    if not ok_c:
        return report

    # (d)
    orders = {r: d[2] for r, d in data.items()}
    delta = max(orders.values())
    steps.append(Step("d", "pass", {"delta": delta, "orders": sorted(set(orders.values()))}))

    # (e)
    R2 = max([R] + [d[3] for d in data.values()])
    r_tilde = matching_radius(seq, R2, r_max, workers, max_size)
    if r_tilde is None:
        steps.append(Step("e", "inconclusive", {"R": R2, "reason": f"no matching index up to r_max={r_max}"}))
        return report
    r_tilde = max(r_tilde, r_bar)
    try:
        closure = subgroup_closure(G, values, max_size=delta)
    except CapExceededError:
        steps.append(Step("e", "fail", {"R": R2, "reason": f"G_w has more than delta={delta} elements"}))
        return report
    inside = max(key_norms(G, closure, max_size).values()) <= R2
    later = {orders[r] for r in range(r_tilde, r_max + 1)}
    ok_e = inside and later == {len(closure)} and len(closure) <= delta
    steps.append(
        Step("e", "pass" if ok_e else "fail", {"R": R2, "r_tilde": r_tilde, "limit_verbal_order": len(closure), "member_orders": sorted(later), "inside_ball": inside})
    )
    return report
