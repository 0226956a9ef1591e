import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mgl import catalog
from mgl.errors import RankMismatchError
from mgl.free import FreeWord, enumerate_ball, word
from mgl.marked import MembershipGroup, make_marked, pad_marking
from mgl.topology import (
    AtLeast,
    Exact,
    GroupSequence,
    LabeledBall,
    ball_isomorphism,
    balls_isomorphic,
    build_ball,
    canonical_code,
    convergence_report,
    distance,
    eventual_membership,
    matching_radius,
    nu,
    verify_convergence,
)
from oracles import brute_nu, cyclic_path_ball

Z = catalog.preset("Z")


def C(n):
    return catalog.preset(f"C{n}")


def zr_to_z():
    return GroupSequence.from_templates("C$r", "Z")


def _ball_model(ball, n):
    # translate vertices to residues through their words
    res = [sum(1 if a > 0 else -1 for a in w.letters) for w in ball.words]
    res = [x % n if n else x for x in res]
    return sorted(res), sorted((res[u], res[v]) for u, v, _ in ball.edges)


def test_ball_of_z():
    b = build_ball(Z, 2)
    assert len(b) == 5 and len(b.edges) == 4
    assert _ball_model(b, 0) == cyclic_path_ball(0, 2)


def test_ball_of_c6_misses_far_edges():
    b = build_ball(C(6), 2)
    pts, edges = _ball_model(b, 6)
    assert pts == [0, 1, 2, 4, 5]
    assert edges == [(0, 1), (1, 2), (4, 5), (5, 0)]


def test_radius_zero_ball():
    for G in (Z, catalog.preset("S3"), catalog.preset("F2")):
        b = build_ball(G, 0)
        assert len(b) == 1 and b.edges == []


def test_identity_generator_gives_no_edges():
    G = make_marked({"kind": "cyclic", "modulus": 4, "marking": [1, 0]})
    b = build_ball(G, 2)
    assert all(i == 1 for _, _, i in b.edges)


def test_codes_z_vs_cyclic():
    assert canonical_code(build_ball(Z, 2)) == canonical_code(build_ball(C(6), 2))
    assert canonical_code(build_ball(Z, 2)) != canonical_code(build_ball(C(5), 2))
    assert len(build_ball(C(5), 2).edges) == 5


@pytest.mark.parametrize("R", range(1, 6))
def test_iso_law(R):
    bz = build_ball(Z, R)
    for n in range(2, 21):
        # independent model: the residue picture is a path iff no wrap-around
        pts, edges = cyclic_path_ball(n, R)
        is_path = len(pts) == 2 * R + 1 and len(edges) == 2 * R
        assert balls_isomorphic(bz, build_ball(C(n), R)) == is_path == (n >= 2 * R + 2)


def test_iso_rank_mismatch():
    with pytest.raises(RankMismatchError):
        balls_isomorphic(build_ball(Z, 1), build_ball(catalog.preset("F2"), 1))


def test_isomorphism_map_is_label_preserving():
    b1, b2 = build_ball(Z, 3), build_ball(C(9), 3)
    phi = ball_isomorphism(b1, b2)
    assert phi[0] == 0
    e2 = set(b2.edges)
    assert all((phi[u], phi[v], i) in e2 for u, v, i in b1.edges)
    assert ball_isomorphism(b1, build_ball(C(5), 3)) is None


def test_membership_group_ball_matches_keyed():
    M = MembershipGroup(2, catalog.preset("S3").contains, name="S3?")
    assert canonical_code(build_ball(M, 3)) == canonical_code(build_ball(catalog.preset("S3"), 3))


def test_ball_json_roundtrip_and_dot():
    b = build_ball(catalog.preset("S3"), 2)
    doc = json.loads(json.dumps(b.to_json()))
    assert canonical_code(LabeledBall.from_json(doc)) == canonical_code(b)
    dot = b.to_dot()
    assert dot.startswith("digraph") and dot.count("->") == len(b.edges)


def test_nu_examples():
    assert nu(Z, Z, 8) == AtLeast(8)
    assert nu(C(4), C(2), 8) == Exact(1)
    for n in range(2, 13):
        assert nu(Z, C(n), 16) == Exact(n - 1)


def test_distance_examples():
    d = distance(Z, C(5), 16)
    assert d.value == Fraction(1, 16) and not d.is_bound and str(d) == "2^-4"
    same = distance(Z, Z, 10)
    assert same.is_bound and same.value == Fraction(1, 1024) and same.interval[0] == 0
    assert distance(C(4), C(2), 8).value == Fraction(1, 2)


def test_nu_membership_fallback():
    M = MembershipGroup(1, lambda w: len(w) % 7 == 0 if all(a > 0 for a in w.letters) or all(a < 0 for a in w.letters) else False)
    assert nu(M, C(7), 10) == AtLeast(10)
    assert nu(M, Z, 10) == Exact(6)


PAIRS = [(a, b) for a in ["S3", "Q8", "D4", "C2xC4", "V4", "Q8[table]"] for b in ["S3", "Q8", "D4", "C2xC4", "V4", "Q8[table]"]]
SPECS = dict(catalog.finite_catalog())


@pytest.mark.parametrize("a,b", PAIRS[:18])
def test_pair_route_matches_brute_force(a, b):
    G, H = make_marked(SPECS[a]), make_marked(SPECS[b])
    want = brute_nu(G, H, 6)
    got = nu(G, H, 6, method="pairs")
    assert (got.value, got.exact) == want
    assert nu(G, H, 6, method="words") == got


@settings(max_examples=40)
@given(st.integers(1, 60), st.integers(1, 60), st.integers(1, 8))
def test_cyclic_nu_formula(m, n, cap):
    # N = mZ, N' = nZ agree on [-r, r] iff no nonzero multiple of one but not the other lies there
    r = 0
    while r < cap and ((r + 1) % m == 0) == ((r + 1) % n == 0):
        r += 1
    want = AtLeast(cap) if r == cap else Exact(r)
    assert nu(C(m), C(n), cap) == want


def test_unknown_method():
    with pytest.raises(ValueError):
        nu(Z, Z, 3, method="magic")


def test_eventual_membership_examples():
    seq = zr_to_z()
    rep = eventual_membership(seq, word("x1^3"), 20)
    assert not rep.in_limit and rep.r_bar == 4
    assert eventual_membership(seq, FreeWord.identity(1), 20).r_bar == 1
    const = GroupSequence.constant(catalog.preset("S3"))
    assert eventual_membership(const, word("[x1,x2]"), 10).r_bar == 1


def test_matching_radius_examples():
    seq = zr_to_z()
    assert matching_radius(seq, 2, 20) == 6
    assert matching_radius(seq, 0, 20) == 1
    assert matching_radius(GroupSequence.constant(catalog.preset("Q8")), 3, 10) == 1


def test_verify_convergence_examples():
    rep = verify_convergence(zr_to_z(), 16, 20)
    assert [rep.table[r] for r in range(1, 17)] == [Exact(r - 1) for r in range(1, 17)]
    assert rep.consistent
    const = verify_convergence(GroupSequence.constant(C(7)), 5, 6)
    assert all(v == AtLeast(5) for v in const.table.values())


def test_wrong_limit_is_not_consistent():
    seq = GroupSequence.from_templates("C$r", "C5")
    rep = convergence_report(seq, 8, 20)
    assert not rep.metric.consistent
    assert rep.verdict == "not-consistent"
    x5 = eventual_membership(seq, word("x1^5"), 20)
    assert x5.in_limit and x5.r_bar is None


def test_three_conditions_agree():
    rep = convergence_report(zr_to_z(), 16, 30, word_radius=4, max_R=5)
    assert rep.metric.consistent
    assert all(m.ok for m in rep.memberships)
    assert all(r is not None for r in rep.radii.values())
    assert rep.verdict == "consistent"


def test_short_run_is_inconclusive():
    assert convergence_report(zr_to_z(), 16, 15).verdict == "inconclusive"


def test_sequence_rank_check():
    seq = GroupSequence.from_templates("C$r", "F2")
    with pytest.raises(RankMismatchError):
        seq.member(3)


def _relabel(ball, rng):
    n = len(ball.keys)
    perm = [0] + rng.sample(range(1, n), n - 1)
    inv = {old: new for new, old in enumerate(perm)}
    edges = [(inv[u], inv[v], i) for u, v, i in ball.edges]
    rng.shuffle(edges)
    return LabeledBall(ball.radius, ball.rank, [ball.keys[p] for p in perm], [ball.words[p] for p in perm], edges)


def test_code_invariant_under_relabeling():
    rng = random.Random(3)
    b = build_ball(catalog.preset("S4"), 3)
    code = canonical_code(b)
    for _ in range(50):
        assert canonical_code(_relabel(b, rng)) == code


@pytest.mark.parametrize("a,b", [("S3", "C6[2,3]"), ("Q8", "D4"), ("C2xC4", "Q8"), ("V4", "C2xC4")])
def test_iso_implies_same_shape(a, b):
    for R in range(4):
        b1, b2 = build_ball(make_marked(SPECS[a]), R), build_ball(make_marked(SPECS[b]), R)
        if balls_isomorphic(b1, b2):
            assert len(b1) == len(b2)
            for i in range(1, b1.rank + 1):
                assert sum(1 for e in b1.edges if e[2] == i) == sum(1 for e in b2.edges if e[2] == i)


def test_padding_preserves_nu():
    for a, b in PAIRS[:10]:
        G, H = make_marked(SPECS[a]), make_marked(SPECS[b])
        assert nu(pad_marking(G), pad_marking(H), 8) == nu(G, H, 8)


def test_ball_vertices_are_distinct_elements():
    G = catalog.preset("D5")
    b = build_ball(G, 4)
    assert len(set(b.keys)) == len(b)
    assert {G.element_key(w) for w in enumerate_ball(2, 4)} == set(b.keys)
