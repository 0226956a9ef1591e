"""JSON Schemas (draft 2020-12) for everything the CLI emits with --json."""

_TAG = {"const": "mgl/1"}
_WORD = {"type": "string"}
_NU = {
    "type": "object",
    "oneOf": [
        {"required": ["exact"], "properties": {"exact": {"type": "integer", "minimum": 0}}, "additionalProperties": False},
        {"required": ["at_least"], "properties": {"at_least": {"type": "integer", "minimum": 1}}, "additionalProperties": False},
    ],
}
_DIST = {
    "type": "object",
    "required": ["value", "log2", "bound"],
    "properties": {"value": {"type": "string"}, "log2": {"type": "integer"}, "bound": {"type": "boolean"}},
}


def _obj(required, **props):
    return {"type": "object", "required": ["schema", *required], "properties": {"schema": _TAG, **props}}


BALL = _obj(
    ["radius", "rank", "vertices", "edges", "code"],
    radius={"type": "integer", "minimum": 0},
    rank={"type": "integer", "minimum": 1},
    group={"type": "string"},
    vertices={"type": "array", "items": _WORD},
    edges={"type": "array", "items": {"type": "array", "items": {"type": "integer"}, "minItems": 3, "maxItems": 3}},
    code={"type": "string", "pattern": "^[0-9a-f]*$"},
)

DISTANCE = _obj(["nu", "distance", "cap"], nu=_NU, distance=_DIST, cap={"type": "integer"}, groups={"type": "array"})

CONVERGE = _obj(
    ["sequence", "r_max", "metric", "membership", "matching_radius", "consistent"],
    sequence={"type": "string"},
    r_max={"type": "integer"},
    metric={
        "type": "object",
        "required": ["cap", "nu", "thresholds", "consistent"],
        "properties": {"nu": {"type": "array", "items": {"type": "array", "prefixItems": [{"type": "integer"}, _NU]}}},
    },
    membership={
        "type": "array",
        "items": {"type": "object", "required": ["word", "in_limit", "r_bar", "sampled", "disagreements"]},
    },
    matching_radius={"type": "array", "items": {"type": "array"}},
    consistent={"type": "boolean"},
    verdict={"enum": ["consistent", "not-consistent", "inconclusive"]},
)

WVALUES = _obj(
    ["group", "word", "exhaustive", "count", "values"],
    group={"type": "string"},
    word=_WORD,
    exhaustive={"type": "boolean"},
    count={"type": "integer", "minimum": 1},
    values={"type": "array", "items": {"type": "string"}},
)

_RECORD = {
    "type": "object",
    "required": ["group", "m", "verbal_order", "exhaustive"],
    "properties": {
        "group": {"type": "string"},
        "m": {"type": "integer", "minimum": 1},
        "verbal_order": {"type": "integer", "minimum": 1},
        "exhaustive": {"type": "boolean"},
    },
}

CONCISE = _obj(["record"], record=_RECORD, word=_WORD)

DELTA = _obj(
    ["word", "family", "records", "delta"],
    word=_WORD,
    family={"type": "string"},
    records={"type": "array", "items": _RECORD},
    errors={"type": "array"},
    delta={"type": "array", "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}},
)

THEOREM_A = _obj(
    ["sequence", "word", "r_max", "steps", "verdict"],
    steps={
        "type": "array",
        "items": {
            "type": "object",
            "required": ["step", "status", "witness"],
            "properties": {"status": {"enum": ["pass", "fail", "inconclusive", "not-met"]}},
        },
    },
    verdict={"enum": ["pass", "fail", "inconclusive", "hypothesis-not-met"]},
)

LEF_WITNESS = _obj(
    ["F", "Q", "phi", "provenance"],
    subject={"type": "string"},
    F={"type": "array", "items": _WORD},
    Q={"type": "object", "oneOf": [{"required": ["spec"]}, {"required": ["table", "marking"]}]},
    phi={"type": "array", "items": {"type": "array", "prefixItems": [_WORD, {"type": "integer", "minimum": 0}], "minItems": 2, "maxItems": 2}},
    provenance={"type": "object"},
)

LEF_VERDICT = _obj(
    ["passed", "violations"],
    passed={"type": "boolean"},
    violations={
        "type": "object",
        "required": ["injectivity", "multiplicativity"],
        "properties": {
            "injectivity": {"type": "array", "items": {"type": "array", "items": _WORD}},
            "multiplicativity": {"type": "array", "items": {"type": "array", "items": _WORD}},
        },
    },
)

SEQUENCE_SPEC = {
    "type": "object",
    "required": ["member"],
    "properties": {
        "schema": _TAG,
        "member": {"type": ["object", "string"]},
        "limit": {"type": ["object", "string"]},
        "start": {"type": "integer", "minimum": 0},
        "name": {"type": "string"},
    },
}

BY_COMMAND = {
    "ball": BALL,
    "distance": DISTANCE,
    "converge": CONVERGE,
    "wvalues": WVALUES,
    "concise": CONCISE,
    "delta": DELTA,
    "theorem-a": THEOREM_A,
    "lef-witness": LEF_WITNESS,
    "lef-verdict": LEF_VERDICT,
}
