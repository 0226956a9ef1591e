import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.combinatorics import Permutation

from mgl import catalog
from mgl.errors import CapExceededError
from mgl.free import enumerate_ball, word
from mgl.marked import make_marked
from mgl.topology import GroupSequence
from mgl.verbal import (
    WordMap,
    conciseness_record,
    delta_profile,
    finite_support,
    subgroup_closure,
    theorem_a_check,
    w_values,
    w_values_sampled,
)
from oracles import Q8_UNITS, naive_closure, naive_commutator_values, qinv, qmul

S3 = catalog.preset("S3")
Q8 = catalog.preset("Q8")
COMM = WordMap.parse("[x1,x2]")


def _fmt(G, keys):
    return sorted(G.format_element(k) for k in keys)


def test_s3_commutators():
    vals = w_values(S3, COMM)
    assert _fmt(S3, vals) == ["()", "(1,2,3)", "(1,3,2)"]


def test_q8_commutators():
    vals = w_values(Q8, COMM)
    assert len(vals) == 2 and Q8.identity in vals


@pytest.mark.parametrize("name", ["S3", "Q8", "D5", "C2xC4"])
def test_identity_word_gives_everything(name):
    G = catalog.preset(name)
    assert w_values(G, "x1") == frozenset(G.elements())


def test_sampled_examples():
    Z = catalog.preset("Z")
    assert w_values_sampled(Z, "[x1,x1]") == {Z.identity}
    G = catalog.preset("Q8xZ")
    vals = w_values_sampled(G, COMM, radius=3)
    assert len(vals) == 2 and all(k[1] == 0 for k in vals)


def test_closure_examples():
    A3 = subgroup_closure(S3, w_values(S3, COMM))
    assert len(A3) == 3
    g = [S3.element_key(word("x1", 2)), S3.element_key(word("x2", 2))]
    assert len(subgroup_closure(S3, g)) == 6


def test_conciseness_records():
    assert (conciseness_record(S3, COMM).m, conciseness_record(S3, COMM).verbal_order) == (3, 3)
    r = conciseness_record(Q8, COMM)
    assert (r.m, r.verbal_order, r.order) == (2, 2, 8)
    a5 = conciseness_record(catalog.preset("A5"), COMM)
    assert (a5.m, a5.verbal_order) == (60, 60)


def test_naive_s3_and_a5_oracle():
    for n, gens in [(3, [Permutation([1, 0, 2]), Permutation([1, 2, 0])]), (5, [Permutation([1, 2, 0, 3, 4]), Permutation([1, 2, 3, 4, 0])])]:
        e = Permutation(list(range(n)))
        els = naive_closure(gens, lambda a, b: a * b, e)
        vals = naive_commutator_values(els, lambda a, b: a * b, lambda a: ~a)
        G = catalog.preset("S3" if n == 3 else "A5")
        rec = conciseness_record(G, COMM)
        assert rec.m == len(vals)
        assert rec.verbal_order == len(naive_closure(vals, lambda a, b: a * b, e))


def test_naive_quaternion_oracle():
    vals = naive_commutator_values(Q8_UNITS, qmul, qinv)
    assert vals == {(1, 0, 0, 0), (-1, 0, 0, 0)}
    rec = conciseness_record(Q8, COMM)
    assert rec.m == len(vals) == rec.verbal_order


def test_evaluation_cap():
    with pytest.raises(CapExceededError):
        w_values(catalog.preset("S4"), "[x1,x2]*x3", max_evaluations=1000)


def test_delta_profile_family():
    family = [catalog.preset(f"Q8xC{n}") for n in range(1, 21)]
    prof = delta_profile(family, COMM, "Q8xC_n")
    assert all((r.m, r.verbal_order) == (2, 2) for r in prof.records)
    assert prof.delta == {2: 2}
    assert delta_profile([], COMM).delta == {}


def test_delta_profile_records_errors():
    def broken():
        raise ValueError("nope")

    prof = delta_profile([lambda: S3, broken], COMM)
    assert len(prof.records) == 1 and len(prof.errors) == 1
    assert "error" in prof.to_table()


def test_delta_merge_order_independent():
    groups = [catalog.preset(n) for n in ["S3", "Q8", "A4", "D4", "S4"]]
    a = delta_profile(groups[:2], COMM)
    b = delta_profile(groups[2:], COMM)
    assert a.merge(b).delta == b.merge(a).delta == delta_profile(groups, COMM).delta


def test_delta_monotone():
    base = delta_profile([S3, Q8], COMM)
    bigger = delta_profile([S3, Q8, catalog.preset("A4")], COMM)
    assert all(bigger.delta[m] >= b for m, b in base.delta.items())


def test_profile_json_shape():
    doc = delta_profile([S3], COMM, "fam").to_json()
    assert doc["records"] == [{"group": "S3", "m": 3, "verbal_order": 3, "exhaustive": True}]
    assert doc["delta"] == [[3, 3]]


def test_finite_support_examples():
    fs = finite_support(S3, COMM, radii=range(0, 6))
    assert fs.exact and fs.stabilized and len(fs.values) == 3
    G = catalog.preset("Q8xZ")
    fs = finite_support(G, COMM)
    assert fs.stabilized and len(fs.values) == 2
    for v, w in fs.value_words.items():
        assert G.element_key(w) == v
    sq = finite_support(catalog.preset("Z"), "x1^2", radii=range(0, 8))
    assert not sq.stabilized
    assert [n for _, n in sq.history] == sorted({n for _, n in sq.history})


def test_theorem_a_examples():
    seq = GroupSequence.from_templates("Q8xC$r", "Q8xZ")
    rep = theorem_a_check(seq, COMM, 30)
    assert rep.verdict == "pass"
    assert rep.step("a").witness["m"] == 2 and rep.step("d").witness["delta"] == 2
    const = theorem_a_check(GroupSequence.constant(S3), COMM, 5)
    assert const.verdict == "pass" and const.step("b").witness["r_bar"] == 1
    bad = theorem_a_check(GroupSequence.from_templates("C$r", "Z"), "x1^2", 20)
    assert bad.verdict == "hypothesis-not-met"
    assert bad.step("a").status == "not-met"


def test_theorem_a_cap_is_inconclusive():
    seq = GroupSequence.from_templates("Q8xC$r", "Q8xZ")
    rep = theorem_a_check(seq, COMM, 5)
    assert rep.verdict == "inconclusive" and rep.step("b").status == "inconclusive"
    rep = theorem_a_check(seq, COMM, 30, max_evaluations=10)
    assert rep.verdict == "inconclusive"


CATALOG = [make_marked(s) for _, s in catalog.finite_catalog()]
RANK2_WORDS = [w for w in enumerate_ball(2, 3) if not w.is_identity]


@settings(max_examples=60)
@given(st.sampled_from(CATALOG), st.sampled_from(RANK2_WORDS), st.integers(0, 10**6))
def test_verbal_invariants(G, w, seed):
    rng = random.Random(seed)
    vals = w_values(G, w)
    assert G.identity in vals
    els = G.elements()
    g = rng.choice(els)
    for v in vals:
        assert G.mul(G.mul(G.inv(g), v), g) in vals
    Gw = subgroup_closure(G, vals)
    assert G.order % len(Gw) == 0
    assert all(G.mul(G.mul(G.inv(g), h), g) in Gw for h in Gw)


@settings(max_examples=25)
@given(st.sampled_from(CATALOG[:20]), st.sampled_from(RANK2_WORDS))
def test_sampled_subset_of_exact(G, w):
    assert w_values_sampled(G, w, budget=200, radius=2) <= w_values(G, w)


def test_word_values_match_evaluate():
    G = catalog.preset("D4")
    w = word("x1^2*[x1,x2]")
    els = G.elements()
    naive = {G.evaluate(w, [a, b]) for a, b in product(els, repeat=2)}
    assert naive == w_values(G, w)
