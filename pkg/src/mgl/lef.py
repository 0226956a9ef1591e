"""LEF witnesses: a finite set F of G, a finite group Q and a partial map
phi: G -> Q that is injective on F and multiplicative on F x F."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import IncompleteWitnessError, SpecError
from .free import FreeWord, format_word, word
from .marked import DEFAULT_MAX_GROUP_BALL, MarkedGroup, make_marked, shortest_word
from .parallel import pmap
from .topology import SCHEMA, GroupSequence, ball_isomorphism, build_ball
from .verbal import key_norms


@dataclass
class LefWitness:
    """``phi`` maps element keys of the subject group to element keys of Q.

    It is partial: only F u F.F (and whatever else the builder knew) is
    covered.  ``reps`` keeps a representative word for every key in ``phi``.
    """

    subject: str
    F: list[FreeWord]
    Q: MarkedGroup
    phi: dict
    reps: dict
    provenance: dict = field(default_factory=lambda: {"kind": "manual"})

    def to_json(self) -> dict:
        view = self.Q.finite_view()
        if self.Q.spec is not None:
            q = {"spec": self.Q.spec}
        else:
            q = {"table": view.table.tolist(), "marking": list(view.gens)}
        return {
            "schema": SCHEMA,
            "subject": self.subject,
            "F": [format_word(f) for f in self.F],
            "Q": q,
            "phi": [[format_word(self.reps[k]), view.index[v]] for k, v in self.phi.items()],
            "provenance": self.provenance,
        }


def witness_from_json(doc: dict, G: MarkedGroup) -> LefWitness:
    try:
        F = [word(f, G.rank) for f in doc["F"]]
        q = doc["Q"]
        if "spec" in q:
            Q = make_marked(q["spec"], "$.Q.spec")
        else:
            Q = make_marked({"kind": "table", "table": q["table"], "marking": q["marking"]}, "$.Q")
        elements = Q.finite_view().elements
        phi, reps = {}, {}
        for k, (text, idx) in enumerate(doc["phi"]):
            w = word(text, G.rank)
            if not 0 <= idx < len(elements):
                raise SpecError(f"Q element index {idx} out of range", f"$.phi[{k}]")
            key = G.element_key(w)
            phi[key] = elements[idx]
            reps[key] = w
    except (KeyError, TypeError) as exc:
        raise SpecError(f"malformed witness: {exc}") from None
    return LefWitness(doc.get("subject", G.name), F, Q, phi, reps, doc.get("provenance", {"kind": "manual"}))


@dataclass
class LefVerdict:
    injectivity: list[tuple[str, str]]
    multiplicativity: list[tuple[str, str]]

    @property
    def passed(self) -> bool:
        return not self.injectivity and not self.multiplicativity

    @property
    def violated(self) -> set[str]:
        out = set()
        if self.injectivity:
            out.add("injectivity")
        if self.multiplicativity:
            out.add("multiplicativity")
        return out

    def to_json(self):
        return {
            "schema": SCHEMA,
            "passed": self.passed,
            "violations": {
                "injectivity": [list(p) for p in self.injectivity],
                "multiplicativity": [list(p) for p in self.multiplicativity],
            },
        }


def homomorphism_violations(G: MarkedGroup, Q: MarkedGroup, phi: dict, domain, skip_undefined: bool = False) -> list[tuple]:
    """Ordered pairs (g, h) of ``domain`` keys with phi(gh) != phi(g) phi(h).

    With ``skip_undefined`` pairs whose product lies outside phi's domain are
    ignored; otherwise they raise :class:`IncompleteWitnessError`.
    """
    domain = list(domain)
    missing = [g for g in domain if g not in phi]
    if missing:
        raise IncompleteWitnessError(missing)
    bad = []
    for g in domain:
        for h in domain:
            gh = G.mul(g, h)
            if gh not in phi:
                if skip_undefined:
                    continue
                raise IncompleteWitnessError([gh])
            if phi[gh] != Q.mul(phi[g], phi[h]):
                bad.append((g, h))
    return bad


def is_homomorphism_on(G: MarkedGroup, Q: MarkedGroup, phi: dict, domain, skip_undefined: bool = False) -> bool:
    return not homomorphism_violations(G, Q, phi, domain, skip_undefined)


def _distinct_keys(G, F):
    keys = [G.element_key(f) for f in F]
    if len(set(keys)) != len(keys):
        raise ValueError("elements of F must be pairwise distinct in G")
    return keys


def check_lef_witness(G: MarkedGroup, wit: LefWitness) -> LefVerdict:
    """Injective on F and multiplicative on every ordered pair from F."""
    keys = _distinct_keys(G, wit.F)
    needed = set(keys) | {G.mul(a, b) for a in keys for b in keys}
    missing = [k for k in needed if k not in wit.phi]
    if missing:
        raise IncompleteWitnessError([G.format_element(k) for k in missing])
    text = dict(zip(keys, (format_word(f) for f in wit.F)))
    inj = []
    for i, a in enumerate(keys):
        for b in keys[i + 1 :]:
            if wit.phi[a] == wit.phi[b]:
                inj.append((text[a], text[b]))
    mult = [(text[g], text[h]) for g, h in homomorphism_violations(G, wit.Q, wit.phi, keys)]
    return LefVerdict(inj, mult)


def lef_witness_from_limit(
    seq: GroupSequence,
    F: list[FreeWord],
    r_max: int,
    workers: int = 1,
    max_size: int = DEFAULT_MAX_GROUP_BALL,
) -> LefWitness | None:
    """Build a witness for F in the limit from a member with a matching ball.

    R is large enough that the paths u.v (u, v shortest words of elements of
    F) stay in the ball, so F.F is inside it and the ball isomorphism is
    multiplicative on F.  Returns ``None`` when no member up to ``r_max``
    matches.
    """
    G = seq._need_limit()
    keys = _distinct_keys(G, F)
    products = {G.mul(a, b) for a in keys for b in keys}
    norms = key_norms(G, set(keys) | products, max_size)
    R = max([norms[p] for p in products] + [2 * norms[k] for k in keys])
    ball = build_ball(G, R, max_size)

    def attempt(r):
        Bq = build_ball(seq.member(r), R, max_size)
        return ball_isomorphism(ball, Bq), Bq

    idx = list(seq.indices(r_max))
    batch = max(1, workers)
    for lo in range(0, len(idx), batch):
        chunk = idx[lo : lo + batch]
        for r, (iso, Bq) in zip(chunk, pmap(attempt, chunk, workers)):
            if iso is not None:
                phi = {ball.keys[v]: Bq.keys[iso[v]] for v in range(len(ball.keys))}
                reps = {ball.keys[v]: ball.words[v] for v in range(len(ball.keys))}
                return LefWitness(G.name, list(F), seq.member(r), phi, reps, {"kind": "constructed", "r": r, "R": R})
    return None


def words_for(G: MarkedGroup, keys) -> list[FreeWord]:
    return [shortest_word(G, k) for k in keys]
