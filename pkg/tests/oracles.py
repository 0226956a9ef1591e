"""Independent reference computations used by the tests.

Nothing here calls into the ball, metric or verbal machinery of the package;
only word enumeration and plain membership tests are shared.
"""

from itertools import product

from mgl.free import enumerate_ball


def brute_nu(G, H, cap):
    """(value, exact) by comparing N and N' word by word over B_F(r)."""
    ball = enumerate_ball(G.rank, cap + 1)
    for r in range(1, cap + 1):
        for w in ball:
            if len(w) == r and G.contains(w) != H.contains(w):
                return r - 1, True
    return cap, False


def cyclic_path_ball(n, R):
    """Hand model of the R-ball of Z/n (n = 0 for Z): vertex set and edges
    as residues."""
    pts = sorted({k % n if n else k for k in range(-R, R + 1)})
    edges = sorted((a, (a + 1) % n if n else a + 1) for a in pts if ((a + 1) % n if n else a + 1) in pts)
    return pts, edges


# quaternions as 4-tuples, no tables
def qmul(a, b):
    a1, b1, c1, d1 = a
    a2, b2, c2, d2 = b
    return (
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


def qinv(a):
    return (a[0], -a[1], -a[2], -a[3])


Q8_UNITS = [tuple(s * (i == k) for i in range(4)) for k in range(4) for s in (1, -1)]


def naive_commutator_values(elements, mul, inv):
    return {mul(mul(inv(a), inv(b)), mul(a, b)) for a, b in product(elements, repeat=2)}


def naive_closure(seeds, mul, identity):
    out = {identity} | set(seeds)
    while True:
        new = {mul(a, b) for a in out for b in out} - out
        if not new:
            return out
        out |= new


def mod_violations(F, phi, r):
    """Violated LEF conditions for a map phi: Z -> Z/r given as a dict on
    integers, checked with plain modular arithmetic."""
    out = set()
    if len({phi[a] for a in F}) != len(F):
        out.add("injectivity")
    if any(phi[a + b] != (phi[a] + phi[b]) % r for a in F for b in F):
        out.add("multiplicativity")
    return out
