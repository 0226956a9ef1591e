"""Built-in group presets and their default markings.

Preset names (factors joined by ``x`` form direct products):

=========  ==================================  ===========================
name       group                               default marking
=========  ==================================  ===========================
``Z``      integers                            (1)
``C<n>``   cyclic of order n                   (1)
``D<n>``   dihedral of order 2n, n >= 3        (rotation, reflection)
``S<n>``   symmetric, 2 <= n <= 6              ((1,2), (1,...,n))
``A<n>``   alternating, 3 <= n <= 6            ((1,2,3), long cycle)
``Q8``     quaternion group                    (i, j)
``V4``     Klein four group C2xC2              (a, b)
``F<n>``   free group of rank n                (x1, ..., xn)
=========  ==================================  ===========================

A product's default marking concatenates its factors' markings.
"""

from __future__ import annotations

import copy
import re

from .errors import SpecError
from .marked import MarkedGroup, format_cycles, make_marked

MAX_SYMMETRIC_DEGREE = 6


def cyclic_spec(n: int, marking=None) -> dict:
    spec = {"kind": "cyclic", "modulus": n, "marking": list(marking) if marking is not None else [1]}
    spec["name"] = "Z" if n == 0 else f"C{n}"
    return spec


def z_spec() -> dict:
    return cyclic_spec(0)


def _cycle(points):
    return "(" + ",".join(str(p) for p in points) + ")"


def dihedral_spec(n: int) -> dict:
    if n < 3:
        raise SpecError("dihedral preset needs n >= 3")
    rot = _cycle(range(1, n + 1))
    refl = "".join(_cycle((i, n + 2 - i)) for i in range(2, n + 1) if i < n + 2 - i)
    return {"kind": "perm", "name": f"D{n}", "degree": n, "gens": [rot, refl], "marking": ["x1", "x2"]}


def symmetric_spec(n: int) -> dict:
    if not 2 <= n <= MAX_SYMMETRIC_DEGREE:
        raise SpecError(f"symmetric preset needs 2 <= n <= {MAX_SYMMETRIC_DEGREE}")
    return {"kind": "perm", "name": f"S{n}", "degree": n, "gens": ["(1,2)", _cycle(range(1, n + 1))], "marking": ["x1", "x2"]}


def alternating_spec(n: int) -> dict:
    if not 3 <= n <= MAX_SYMMETRIC_DEGREE:
        raise SpecError(f"alternating preset needs 3 <= n <= {MAX_SYMMETRIC_DEGREE}")
    if n == 3:
        gens = ["(1,2,3)"]
    else:
        gens = ["(1,2,3)", _cycle(range(1, n + 1)) if n % 2 else _cycle(range(2, n + 1))]
    return {"kind": "perm", "name": f"A{n}", "degree": n, "gens": gens, "marking": [f"x{i + 1}" for i in range(len(gens))]}


# quaternion units in the order 1, -1, i, -i, j, -j, k, -k
_Q8_NAMES = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
_UNIT_MUL = {
    ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
    ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
    ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
    ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
}


def _q8_split(name):
    return (-1, name[1:]) if name.startswith("-") else (1, name)


def q8_multiply(a: str, b: str) -> str:
    sa, ua = _q8_split(a)
    sb, ub = _q8_split(b)
    s, u = _UNIT_MUL[(ua, ub)]
    return u if sa * sb * s == 1 else "-" + u


def q8_table() -> list[list[int]]:
    idx = {n: i for i, n in enumerate(_Q8_NAMES)}
    return [[idx[q8_multiply(a, b)] for b in _Q8_NAMES] for a in _Q8_NAMES]


def q8_spec() -> dict:
    """Q8 by its right regular representation on 8 points."""
    idx = {n: i for i, n in enumerate(_Q8_NAMES)}

    def right_mult(a):
        return tuple(idx[q8_multiply(x, a)] for x in _Q8_NAMES)

    return {"kind": "perm", "name": "Q8", "degree": 8, "gens": [format_cycles(right_mult("i")), format_cycles(right_mult("j"))], "marking": ["x1", "x2"]}


def v4_spec() -> dict:
    spec = product_spec([cyclic_spec(2), cyclic_spec(2)])
    spec["name"] = "V4"
    return spec


def free_spec(n: int) -> dict:
    return {"kind": "free", "name": f"F{n}", "rank": n}


def _default_rank(spec: dict) -> int:
    kind = spec["kind"]
    if kind == "free":
        return spec["rank"]
    if kind == "cyclic":
        return len(spec.get("marking", [1]))
    if kind == "perm":
        return len(spec.get("marking") or spec["gens"])
    return len(spec["marking"])


def product_spec(factors: list[dict], marking=None) -> dict:
    """Direct product; by default each x_i maps to the i-th factor generator."""
    total = sum(_default_rank(f) for f in factors)
    if marking is None:
        marking = [f"x{i}" for i in range(1, total + 1)]
    names = [f.get("name", f["kind"]) for f in factors]
    return {"kind": "product", "name": "x".join(names), "factors": factors, "marking": list(marking)}


_PATTERNS = [
    (re.compile(r"Z$"), lambda m: z_spec()),
    (re.compile(r"C(\d+)$"), lambda m: cyclic_spec(int(m[1]))),
    (re.compile(r"D(\d+)$"), lambda m: dihedral_spec(int(m[1]))),
    (re.compile(r"S(\d+)$"), lambda m: symmetric_spec(int(m[1]))),
    (re.compile(r"A(\d+)$"), lambda m: alternating_spec(int(m[1]))),
    (re.compile(r"Q8$"), lambda m: q8_spec()),
    (re.compile(r"V4$"), lambda m: v4_spec()),
    (re.compile(r"F(\d+)$"), lambda m: free_spec(int(m[1]))),
]


def preset_spec(name: str) -> dict:
    """GroupSpec for a preset name such as ``"S3"`` or ``"Q8xZ"``."""
    parts = name.strip().split("x")
    specs = []
    for part in parts:
        for pat, build in _PATTERNS:
            m = pat.match(part)
            if m:
                specs.append(build(m))
                break
        else:
            raise SpecError(f"unknown preset {part!r} in {name!r}")
    if len(specs) == 1:
        return specs[0]
    return product_spec(specs)


def preset(name: str) -> MarkedGroup:
    return make_marked(preset_spec(name))


def instantiate(template, r: int):
    """Replace the placeholder ``$r`` in a spec template (or preset name)."""
    if isinstance(template, str):
        if template == "$r":
            return r
        return template.replace("$r", str(r))
    if isinstance(template, list):
        return [instantiate(t, r) for t in template]
    if isinstance(template, dict):
        return {k: instantiate(v, r) for k, v in template.items()}
    return copy.copy(template)


def resolve_spec(obj) -> dict:
    """A GroupSpec from a dict or a preset name."""
    if isinstance(obj, str):
        return preset_spec(obj)
    if isinstance(obj, dict):
        return obj
    raise SpecError(f"cannot interpret {obj!r} as a group")


def finite_catalog() -> list[tuple[str, dict]]:
    """Finite marked groups of order <= 40 and rank <= 3, including a few
    non-default markings (repeats, the identity, redundant generators)."""
    out = []
    for n in range(1, 13):
        out.append((f"C{n}", cyclic_spec(n)))
    for n in range(3, 11):
        out.append((f"D{n}", dihedral_spec(n)))
    for name in ["S3", "S4", "A4", "Q8", "V4", "C2xC4", "C2xC2xC2", "Q8xC2", "S3xC2", "D4xC2", "S3xC3"]:
        out.append((name, preset_spec(name)))
    out.append(("C6[2,3]", {"kind": "cyclic", "name": "C6[2,3]", "modulus": 6, "marking": [2, 3]}))
    out.append(("C5[1,1]", {"kind": "cyclic", "name": "C5[1,1]", "modulus": 5, "marking": [1, 1]}))
    out.append(("C4[1,0]", {"kind": "cyclic", "name": "C4[1,0]", "modulus": 4, "marking": [1, 0]}))
    out.append(("C12[3,4,6]", {"kind": "cyclic", "name": "C12[3,4,6]", "modulus": 12, "marking": [3, 4, 6]}))
    out.append(
        ("S3[transpositions]", {"kind": "perm", "name": "S3[transpositions]", "degree": 3, "gens": ["(1,2)", "(1,3)", "(2,3)"]})
    )
    out.append(("Q8[table]", {"kind": "table", "name": "Q8[table]", "order": 8, "table": q8_table(), "marking": [2, 4]}))
    out.append(("A4[3gens]", {"kind": "perm", "name": "A4[3gens]", "degree": 4, "gens": ["(1,2,3)", "(2,3,4)", "(1,2)(3,4)"]}))
    return out
