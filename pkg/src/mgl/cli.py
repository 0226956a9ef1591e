"""Command-line entry point.

Exit codes: 0 success/pass, 1 usage error, 2 inconclusive (a cap was hit),
3 failure or violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field, fields

from . import catalog
from .cache import BallCache
from .errors import CapExceededError, IncompleteWitnessError, MglError, SpecError
from .free import DEFAULT_MAX_FREE_BALL, format_word, word
from .lef import check_lef_witness, lef_witness_from_limit, witness_from_json
from .marked import DEFAULT_MAX_GROUP_BALL, make_marked
from .topology import (
    SCHEMA,
    GroupSequence,
    LabeledBall,
    build_ball,
    canonical_code,
    convergence_report,
    distance_from_nu,
    nu,
)
from .verbal import DEFAULT_MAX_EVALUATIONS, WordMap, conciseness_record, delta_profile, theorem_a_check, w_values, w_values_sampled

EXIT_OK, EXIT_USAGE, EXIT_INCONCLUSIVE, EXIT_FAIL = 0, 1, 2, 3


@dataclass
class Caps:
    max_free_ball: int = DEFAULT_MAX_FREE_BALL
    max_group_ball: int = DEFAULT_MAX_GROUP_BALL
    max_evaluations: int = DEFAULT_MAX_EVALUATIONS
    nu_cap: int = 16
    r_max: int = 50


@dataclass
class ExperimentConfig:
    caps: Caps = field(default_factory=Caps)
    output: str = "text"
    cache: bool = True
    seed: int = 0
    workers: int = 1

    def validate(self):
        for f in fields(Caps):
            if getattr(self.caps, f.name) < 1:
                raise SpecError(f"cap {f.name} must be positive")
        if self.workers < 1:
            raise SpecError("workers must be positive")
        return self

    @classmethod
    def load(cls, path) -> ExperimentConfig:
        doc = _load_json(path)
        caps = Caps(**{k: v for k, v in doc.get("caps", {}).items() if k in {f.name for f in fields(Caps)}})
        cfg = cls(caps=caps)
        for key in ("output", "cache", "seed", "workers"):
            if key in doc:
                setattr(cfg, key, doc[key])
        return cfg


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}", path) from None
    except OSError as exc:
        raise SpecError(str(exc), path) from None


def _document(arg: str):
    """A JSON document from a file path or inline text; ``None`` otherwise."""
    if os.path.exists(arg):
        return _load_json(arg)
    if arg.lstrip().startswith(("{", "[")):
        try:
            return json.loads(arg)
        except json.JSONDecodeError as exc:
            raise SpecError(f"invalid JSON at position {exc.pos}: {exc.msg}", "<inline>") from None
    return None


def group_spec(arg: str) -> dict:
    doc = _document(arg)
    return catalog.preset_spec(arg) if doc is None else doc


def load_group(arg: str):
    return make_marked(group_spec(arg), path=arg if os.path.exists(arg) else "$")


def load_sequence(arg: str) -> GroupSequence:
    """``MEMBER->LIMIT`` shorthand (e.g. ``C$r->Z``) or a sequence document
    ``{"member": template, "limit": spec, "start": 1}``."""
    doc = _document(arg)
    if doc is None:
        if "->" not in arg:
            raise SpecError("sequence shorthand must look like MEMBER->LIMIT", arg)
        member, limit = (s.strip() for s in arg.split("->", 1))
        return GroupSequence.from_templates(member, limit, 1, name=arg)
    if "member" not in doc:
        raise SpecError("sequence spec needs 'member'", arg)
    return GroupSequence.from_templates(doc["member"], doc.get("limit"), doc.get("start", 1), doc.get("name"))


def load_family(arg: str):
    """``C$r:1..20`` shorthand, a comma list of presets, or a document
    ``{"member": template, "range": [a, b]}`` / ``{"groups": [spec, ...]}``."""
    doc = _document(arg)
    if doc is None:
        if ":" in arg:
            template, rng = arg.rsplit(":", 1)
            lo, hi = (int(x) for x in rng.split(".."))
            doc = {"member": template, "range": [lo, hi], "name": arg}
        else:
            doc = {"groups": [s.strip() for s in arg.split(",")], "name": arg}
    name = doc.get("name", "family")
    if "groups" in doc:
        specs = [(str(g.get("name", k)) if isinstance(g, dict) else g, g) for k, g in enumerate(doc["groups"])]
    else:
        lo, hi = doc["range"]
        specs = [(catalog.instantiate(doc["member"], r) if isinstance(doc["member"], str) else f"r={r}", catalog.instantiate(doc["member"], r)) for r in range(lo, hi + 1)]

    def builder(label, spec):
        def build():
            return make_marked(catalog.resolve_spec(spec))

        build.name = label
        return build

    return name, [builder(label, spec) for label, spec in specs]


def _emit(obj, cfg: ExperimentConfig, text: str):
    if cfg.output == "json":
        print(json.dumps(obj, indent=2, sort_keys=False))
    else:
        print(text)


# --- commands -----------------------------------------------------------------


def cmd_ball(args, cfg):
    spec = group_spec(args.group)
    cache = BallCache() if cfg.cache else None
    doc = cache.get(spec, args.radius) if cache else None
    if doc is None:
        G = make_marked(spec)
        ball = build_ball(G, args.radius, cfg.caps.max_group_ball)
        doc = ball.to_json()
        doc["code"] = canonical_code(ball).hex()
        if cache:
            cache.put(spec, args.radius, doc)
    else:
        ball = LabeledBall.from_json(doc)
    if args.dot:
        sys.stdout.write(ball.to_dot())
    elif cfg.output == "json":
        print(json.dumps(doc, indent=2))
    else:
        print(f"ball of radius {doc['radius']} in {doc['group']}: {len(doc['vertices'])} vertices, {len(doc['edges'])} edges")
        for u, v, i in doc["edges"]:
            print(f"  {doc['vertices'][u]} -s{i}-> {doc['vertices'][v]}")
        print(f"code {doc['code']}")
    return EXIT_OK


def cmd_distance(args, cfg):
    G, H = load_group(args.a), load_group(args.b)
    cap = args.cap or cfg.caps.nu_cap
    r = nu(G, H, cap, method=args.method, max_free_ball=cfg.caps.max_free_ball, max_size=cfg.caps.max_group_ball)
    d = distance_from_nu(r)
    obj = {"schema": SCHEMA, "command": "distance", "groups": [G.name, H.name], "cap": cap, "nu": r.to_json(), "distance": d.to_json()}
    if r.exact:
        text = f"nu = {r.value}\nd = {d}"
    else:
        text = f"nu >= {r.value} (not resolved within cap)\nd <= 2^-{r.value} (bound)"
    _emit(obj, cfg, text)
    return EXIT_OK if r.exact else EXIT_INCONCLUSIVE


def cmd_converge(args, cfg):
    seq = load_sequence(args.sequence)
    rep = convergence_report(seq, args.cap or cfg.caps.nu_cap, args.rmax or cfg.caps.r_max, args.word_radius, args.max_radius, cfg.workers)
    obj = rep.to_json()
    obj["command"] = "converge"
    lines = [f"sequence {rep.sequence}, sampled indices {seq.start}..{rep.r_max}"]
    lines.append("(1) nu(N, N_r): " + " ".join(f"{r}:{v}" for r, v in rep.metric.table.items()))
    lines.append(f"    consistent with convergence up to cap {rep.metric.cap}: {rep.metric.consistent}")
    bad = [m.word for m in rep.memberships if not m.ok]
    lines.append(f"(2) eventual membership for {len(rep.memberships)} words: " + ("all settle" if not bad else "no settling index for " + ", ".join(bad)))
    lines.append("(3) matching radius: " + ", ".join(f"R={R}: r_bar={r}" for R, r in rep.radii.items()))
    lines.append(f"verdict: {rep.verdict} (verified only on sampled indices)")
    _emit(obj, cfg, "\n".join(lines))
    return {"consistent": EXIT_OK, "not-consistent": EXIT_FAIL}.get(rep.verdict, EXIT_INCONCLUSIVE)


def cmd_wvalues(args, cfg):
    G = load_group(args.group)
    w = WordMap.parse(args.word)
    exhaustive = G.is_finite and args.sample is None
    if args.exhaustive and not G.is_finite:
        raise UsageError("--exhaustive needs a finite group")
    if exhaustive:
        vals = w_values(G, w, cfg.caps.max_evaluations)
        order = G.finite_view().index
        shown = [G.format_element(v) for v in sorted(vals, key=order.__getitem__)]
    else:
        vals = w_values_sampled(G, w, args.sample or 10**5, args.radius, cfg.seed, cfg.caps.max_group_ball)
        shown = sorted(G.format_element(v) for v in vals)
    obj = {"schema": SCHEMA, "command": "wvalues", "group": G.name, "word": str(w), "exhaustive": exhaustive, "count": len(vals), "values": shown}
    head = f"|w{{G}}| = {len(vals)}" + ("" if exhaustive else " (lower bound, sampled)")
    _emit(obj, cfg, head + "\n" + "\n".join("  " + s for s in shown))
    return EXIT_OK


def cmd_concise(args, cfg):
    G = load_group(args.group)
    rec = conciseness_record(G, WordMap.parse(args.word), cfg.caps.max_evaluations)
    obj = {"schema": SCHEMA, "command": "concise", "word": rec.word, "record": rec.to_json()}
    _emit(obj, cfg, f"{rec.group}: |w{{G}}| = {rec.m}, |G_w| = {rec.verbal_order}, |G| = {rec.order}")
    return EXIT_OK


def cmd_delta(args, cfg):
    name, members = load_family(args.family)
    prof = delta_profile(members, WordMap.parse(args.word), name, cfg.workers, cfg.caps.max_evaluations)
    obj = prof.to_json()
    obj["command"] = "delta"
    _emit(obj, cfg, prof.to_table())
    return EXIT_OK


def cmd_theorem_a(args, cfg):
    seq = load_sequence(args.sequence)
    rep = theorem_a_check(
        seq,
        WordMap.parse(args.word),
        args.rmax or cfg.caps.r_max,
        radii=range(0, args.max_radius + 1),
        stable=args.stable,
        max_evaluations=cfg.caps.max_evaluations,
        max_size=cfg.caps.max_group_ball,
        workers=cfg.workers,
    )
    obj = rep.to_json()
    obj["command"] = "theorem-a"
    lines = [f"sequence {rep.sequence}, word {rep.word}, sampled r <= {rep.r_max}"]
    for s in rep.steps:
        lines.append(f"  ({s.name}) {s.status}: " + ", ".join(f"{k}={v}" for k, v in s.witness.items()))
    lines.append(f"verdict: {rep.verdict} (at desk scale)")
    _emit(obj, cfg, "\n".join(lines))
    return {"pass": EXIT_OK, "fail": EXIT_FAIL}.get(rep.verdict, EXIT_INCONCLUSIVE)


def _verdict_exit(verdict, cfg):
    obj = verdict.to_json()
    obj["command"] = "lef"
    text = "witness passes" if verdict.passed else "witness fails:\n" + "\n".join(
        [f"  injectivity: phi({a}) = phi({b})" for a, b in verdict.injectivity]
        + [f"  multiplicativity: phi({a}*{b}) != phi({a})*phi({b})" for a, b in verdict.multiplicativity]
    )
    _emit(obj, cfg, text)
    return EXIT_OK if verdict.passed else EXIT_FAIL


def cmd_lef(args, cfg):
    if args.verify:
        doc = _load_json(args.verify)
        subject = args.group or doc.get("subject_spec") or doc.get("subject")
        if subject is None:
            raise UsageError("--verify needs --group or a witness with 'subject_spec'")
        G = make_marked(subject) if isinstance(subject, dict) else load_group(subject)
        wit = witness_from_json(doc, G)
        try:
            verdict = check_lef_witness(G, wit)
        except IncompleteWitnessError as exc:
            obj = {"schema": SCHEMA, "command": "lef", "passed": False, "incomplete": exc.missing}
            _emit(obj, cfg, f"incomplete witness: phi undefined on {', '.join(map(str, exc.missing))}")
            return EXIT_FAIL
        return _verdict_exit(verdict, cfg)
    if not args.sequence or not args.F:
        raise UsageError("lef needs SEQUENCE and --F words, or --verify FILE")
    seq = load_sequence(args.sequence)
    rank = seq.rank
    F = [word(f, rank) for f in args.F]
    wit = lef_witness_from_limit(seq, F, args.rmax or cfg.caps.r_max, cfg.workers, cfg.caps.max_group_ball)
    if wit is None:
        _emit({"schema": SCHEMA, "command": "lef", "inconclusive": True}, cfg, "no matching member up to r_max")
        return EXIT_INCONCLUSIVE
    doc = wit.to_json()
    doc["subject_spec"] = seq.limit.spec
    verdict = check_lef_witness(seq.limit, wit)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(doc, fh, indent=2)
    if cfg.output == "json":
        print(json.dumps({"witness": doc, "verdict": verdict.to_json()}, indent=2))
    else:
        p = wit.provenance
        print(f"witness for F = {{{', '.join(format_word(f) for f in F)}}}: Q = {wit.Q.name} (r={p['r']}, R={p['R']}), |phi| = {len(wit.phi)}")
        print("verdict: " + ("pass" if verdict.passed else "fail"))
    return EXIT_OK if verdict.passed else EXIT_FAIL


# --- wiring -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--config", help="JSON config file; flags override it")
    common.add_argument("--workers", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--max-free-ball", type=int)
    common.add_argument("--max-group-ball", type=int)
    common.add_argument("--max-evaluations", type=int)

    p = _Parser(prog="mgl", description="Marked groups, word maps and LEF witnesses.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("ball", parents=[common], help="Cayley ball of a marked group")
    s.add_argument("group")
    s.add_argument("radius", type=int)
    s.add_argument("--dot", action="store_true")
    s.set_defaults(fn=cmd_ball)

    s = sub.add_parser("distance", parents=[common], help="nu and d between two marked groups")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--cap", type=int)
    s.add_argument("--method", choices=["auto", "pairs", "words"], default="auto")
    s.set_defaults(fn=cmd_distance)

    s = sub.add_parser("converge", parents=[common], help="three-way convergence report for a sequence")
    s.add_argument("sequence")
    s.add_argument("--cap", type=int)
    s.add_argument("--rmax", type=int)
    s.add_argument("--word-radius", type=int, default=3)
    s.add_argument("--max-radius", type=int, default=3)
    s.set_defaults(fn=cmd_converge)

    s = sub.add_parser("wvalues", parents=[common], help="the value set w{G}")
    s.add_argument("group")
    s.add_argument("word")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--sample", type=int, metavar="N")
    s.add_argument("--radius", type=int, default=4, help="ball radius for sampling")
    s.set_defaults(fn=cmd_wvalues)

    s = sub.add_parser("concise", parents=[common], help="|w{G}| and |G_w| for a finite group")
    s.add_argument("group")
    s.add_argument("word")
    s.set_defaults(fn=cmd_concise)

    s = sub.add_parser("delta", parents=[common], help="empirical delta profile over a family")
    s.add_argument("family")
    s.add_argument("word")
    s.set_defaults(fn=cmd_delta)

    s = sub.add_parser("theorem-a", parents=[common], help="replay the bounded-conciseness argument on a sequence")
    s.add_argument("sequence")
    s.add_argument("word")
    s.add_argument("--rmax", type=int)
    s.add_argument("--max-radius", type=int, default=8)
    s.add_argument("--stable", type=int, default=2)
    s.set_defaults(fn=cmd_theorem_a)

    s = sub.add_parser("lef", parents=[common], help="build or verify a LEF witness")
    s.add_argument("sequence", nargs="?")
    s.add_argument("--F", nargs="+", metavar="WORD")
    s.add_argument("--rmax", type=int)
    s.add_argument("--verify", metavar="WITNESS")
    s.add_argument("--group", help="subject group for --verify")
    s.add_argument("--out", help="write the constructed witness here")
    s.set_defaults(fn=cmd_lef)
    return p


def _config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    if args.json:
        cfg.output = "json"
    if args.workers is not None:
        cfg.workers = args.workers
    if args.seed is not None:
        cfg.seed = args.seed
    if args.no_cache:
        cfg.cache = False
    for name in ("max_free_ball", "max_group_ball", "max_evaluations"):
        v = getattr(args, name)
        if v is not None:
            setattr(cfg.caps, name, v)
    return cfg.validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        return args.fn(args, cfg)
    except CapExceededError as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (UsageError, SpecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MglError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
