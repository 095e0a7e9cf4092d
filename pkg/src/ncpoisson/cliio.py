"""Spec-file I/O, the command line and canonical JSON reports."""
import argparse
import json
import sys
from pathlib import Path

from .ainfty import AInftyCategory, validate
from .bardual import Functional
from .core import (
    PLUS, STAR, BasisMorphism, DualityError, InvalidInput, fraction_str, to_fraction,
)
from .hochcyc import degrees_present, quillen_check, verify_bicomplex
from .homology import hc_dims
from .parallel import resolve_jobs
from .poisson import (
    bracket, cyclic_average, double_bracket, double_json, functional_json,
    verify_double_poisson,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PARSE = 0, 1, 2, 3

DATA_DIR = Path(__file__).parent / "data"

_TOP = {"meta", "objects", "morphisms", "eps"}
_META = {"name", "d", "max_arity"}
_MORPH = {"id", "source", "target", "degree", "dual", "orientation"}
_EPS = {"out", "word", "value"}


class ParseError(ValueError):
    def __init__(self, message, location=""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


def _expect(cond, msg, loc):
    if not cond:
        raise ParseError(msg, loc)


def _check_keys(obj, allowed, required, loc, strict):
    _expect(isinstance(obj, dict), "expected an object", loc)
    missing = sorted(set(required) - set(obj))
    _expect(not missing, f"missing field(s) {missing}", loc)
    extra = sorted(set(obj) - set(allowed))
    if extra and strict:
        raise ParseError(f"unknown field(s) {extra}", loc)


def _int(v, loc):
    _expect(isinstance(v, int) and not isinstance(v, bool), "expected an integer", loc)
    return v


def _str(v, loc):
    _expect(isinstance(v, str) and v != "", "expected a non-empty string", loc)
    return v


def _scalar(v, loc, strict):
    if isinstance(v, float) or (strict and not isinstance(v, (str, int))):
        raise ParseError("scalars must be exact: an integer or a \"num/den\" string", loc)
    try:
        return to_fraction(v)
    except InvalidInput as exc:
        raise ParseError(str(exc), loc) from exc


def parse_spec_text(text, source="<spec>", strict=True):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{source}:{exc.lineno}:{exc.colno}") from exc
    _check_keys(doc, _TOP, _TOP, source, strict)
    meta = doc["meta"]
    _check_keys(meta, _META, _META, f"{source}: meta", strict)
    name = _str(meta["name"], f"{source}: meta.name")
    d = _int(meta["d"], f"{source}: meta.d")
    max_arity = _int(meta["max_arity"], f"{source}: meta.max_arity")
    _expect(isinstance(doc["objects"], list), "expected a list", f"{source}: objects")
    objects = [_str(o, f"{source}: objects[{i}]") for i, o in enumerate(doc["objects"])]
    _expect(isinstance(doc["morphisms"], list), "expected a list", f"{source}: morphisms")
    raw = []
    for i, m in enumerate(doc["morphisms"]):
        loc = f"{source}: morphisms[{i}]"
        _check_keys(m, _MORPH, _MORPH - {"orientation"}, loc, strict)
        orient = m.get("orientation")
        if orient is not None:
            _expect(orient in (PLUS, STAR), "orientation must be plus or star",
                    f"{loc}.orientation")
        raw.append((_str(m["id"], f"{loc}.id"), _str(m["source"], f"{loc}.source"),
                    _str(m["target"], f"{loc}.target"), _int(m["degree"], f"{loc}.degree"),
                    _str(m["dual"], f"{loc}.dual"), orient))
    morphisms = [BasisMorphism(i, s, t, deg, du, o or _default_orientation(i, du))
                 for i, s, t, deg, du, o in raw]
    _expect(isinstance(doc["eps"], list), "expected a list", f"{source}: eps")
    eps = {}
    for i, e in enumerate(doc["eps"]):
        loc = f"{source}: eps[{i}]"
        _check_keys(e, _EPS, _EPS, loc, strict)
        out = _str(e["out"], f"{loc}.out")
        _expect(isinstance(e["word"], list) and e["word"], "expected a non-empty list",
                f"{loc}.word")
        word = tuple(_str(a, f"{loc}.word") for a in e["word"])
        _expect((out, word) not in eps, "duplicate entry", loc)
        eps[(out, word)] = _scalar(e["value"], f"{loc}.value", strict)
    try:
        return AInftyCategory(objects, morphisms, d, max_arity, eps, name=name)
    except DualityError:
        raise
    except InvalidInput as exc:
        raise ParseError(str(exc), source) from exc


def _default_orientation(mid, dual):
    # the smaller id of a dual pair is the plus member
    return PLUS if mid <= dual else STAR


def parse_spec(path, strict=True):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read file ({exc.strerror})", str(path)) from exc
    return parse_spec_text(text, str(path), strict)


def serialize(cat):
    doc = {
        "meta": {"name": cat.name, "d": cat.d, "max_arity": cat.max_arity},
        "objects": list(cat.objects),
        "morphisms": [
            {"id": m.id, "source": m.source, "target": m.target, "degree": m.degree,
             "dual": m.dual_id, "orientation": m.orientation}
            for m in (cat.morphisms[i] for i in cat.ids)
        ],
        "eps": [{"out": q, "word": list(w), "value": fraction_str(v)}
                for (q, w), v in sorted(cat.eps.items())],
    }
    return canonical_json(doc)


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def parse_functional(text, cat, source="<functional>", strict=True):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{source}:{exc.lineno}:{exc.colno}") from exc
    _expect(isinstance(doc, list), "expected a list of [word, value] pairs", source)
    out = {}
    for i, item in enumerate(doc):
        loc = f"{source}[{i}]"
        _expect(isinstance(item, list) and len(item) == 2, "expected [word, value]", loc)
        word, value = item
        _expect(isinstance(word, list) and word, "expected a non-empty word", loc)
        word = tuple(_str(a, loc) for a in word)
        _expect(all(a in cat.morphisms for a in word), "unknown morphism in word", loc)
        _expect(cat.composable(word), "word is not composable", loc)
        _expect(word not in out, "duplicate word", loc)
        out[word] = _scalar(value, loc, strict)
    return Functional(out)


def load_functional(path, cat, strict=True):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read file ({exc.strerror})", str(path)) from exc
    return parse_functional(text, cat, str(path), strict)


def bundled_spec(name):
    return DATA_DIR / f"{name}.spec"


# commands -------------------------------------------------------------------

def _degree_range(text):
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a..b with integers a ≤ b") from None
    if lo > hi:
        raise argparse.ArgumentTypeError("expected a..b with integers a ≤ b")
    return lo, hi


def _cmd_validate(cat, args, jobs):
    reports = [r.to_json() for r in validate(cat, jobs=jobs)]
    passed = all(r["passed"] for r in reports)
    lines = [f"{r['check']}: {'pass' if r['passed'] else 'FAIL'}"
             f" ({len(r['failures'])} failures)" for r in reports]
    return {"checks": reports, "passed": passed}, lines


def _cmd_bicomplex(cat, args, jobs):
    W = args.max_weight
    bic = verify_bicomplex(cat, W, jobs=jobs).to_json()
    quillen = [quillen_check(cat, n, W, seed=args.seed)
               for n in degrees_present(cat, W)]
    passed = bic["passed"] and all(q["passed"] for q in quillen)
    lines = [f"bicomplex (weight ≤ {W}, {bic['checked']} cyclic words): "
             f"{'pass' if bic['passed'] else 'FAIL'}",
             f"quillen ({len(quillen)} degrees): "
             f"{'pass' if all(q['passed'] for q in quillen) else 'FAIL'}"]
    return {"bicomplex": bic, "quillen": quillen, "passed": passed}, lines


def _cmd_poisson(cat, args, jobs):
    rep = verify_double_poisson(cat, args.max_weight, jobs=jobs).to_json()
    lines = []
    for c in ("degree_check", "skew_check", "derivation_check",
              "double_jacobi_check", "differential_check"):
        r = rep[c]
        lines.append(f"{c}: {'pass' if r['passed'] else 'FAIL'} "
                     f"({r['failure_count']}/{r['checked']} failing)")
    return {"double_poisson": rep, "passed": rep["passed"]}, lines


def _cmd_bracket(cat, args, jobs):
    f = load_functional(args.f, cat, args.strict)
    g = load_functional(args.g, cat, args.strict)
    D = double_bracket(cat, f, g)
    b = bracket(cat, f, g)
    P = cyclic_average(cat, b)
    rep = {"double_bracket": double_json(D), "bracket": functional_json(b),
           "cyclic_bracket": functional_json(P), "passed": True}
    lines = [f"double bracket: {len(D.support)} terms; bracket: {len(b.support)} terms;"
             f" cyclic average: {len(P.support)} terms"]
    return rep, lines


def _cmd_hc(cat, args, jobs):
    W = args.max_weight
    if args.degrees is None:
        ds = degrees_present(cat, W)
        degrees = (ds[0], ds[-1]) if ds else (0, 0)
    else:
        degrees = args.degrees
    rep = hc_dims(cat, W, degrees)
    lines = [f"truncated HC (weight ≤ {W}), degree: chain / cochain"]
    for row in rep["table"]:
        lines.append(f"  {row['degree']:>4}: {row['chain_dim']} / {row['cochain_dim']}"
                     + ("" if row["agree"] else "  MISMATCH"))
    return {"hc": rep, "passed": rep["passed"]}, lines


COMMANDS = {
    "validate": _cmd_validate,
    "bicomplex": _cmd_bicomplex,
    "poisson": _cmd_poisson,
    "bracket": _cmd_bracket,
    "hc": _cmd_hc,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def build_parser():
    p = _Parser(prog="ncpoisson", description="Cyclic A-infinity categories: "
                "checks, cyclic homology and the double Poisson bracket.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("spec", help="category spec file (JSON)")
        s.add_argument("--max-weight", type=int, default=4)
        s.add_argument("--degrees", type=_degree_range, default=None)
        s.add_argument("--strict", action=argparse.BooleanOptionalAction, default=True)
        s.add_argument("--jobs", type=int, default=1)
        s.add_argument("--seed", type=int, default=0)
        if name == "bracket":
            s.add_argument("--f", required=True)
            s.add_argument("--g", required=True)
    return p


def _join_degrees(argv):
    # let "--degrees -2..6" through: argparse would read -2..6 as an option
    out = []
    it = iter(argv)
    for a in it:
        if a == "--degrees":
            nxt = next(it, None)
            out.append(a if nxt is None else f"--degrees={nxt}")
        else:
            out.append(a)
    return out


def run_command(argv):
    """Run one command; returns (exit code, report dict or None, summary lines)."""
    try:
        args = build_parser().parse_args(_join_degrees(list(argv)))
    except _UsageError as exc:
        return EXIT_USAGE, None, [f"usage error: {exc}"]
    if args.max_weight < 1:
        return EXIT_USAGE, None, ["usage error: --max-weight must be positive"]
    if args.jobs < 1:
        return EXIT_USAGE, None, ["usage error: --jobs must be positive"]
    jobs = resolve_jobs(args.jobs)
    try:
        cat = parse_spec(args.spec, strict=args.strict)
        report, lines = COMMANDS[args.command](cat, args, jobs)
    except (ParseError, DualityError) as exc:
        return EXIT_PARSE, None, [f"parse error: {exc}"]
    report = {"command": args.command, "category": cat.name,
              "max_weight": args.max_weight, **report}
    code = EXIT_OK if report["passed"] else EXIT_FAIL
    return code, report, lines


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    code, report, lines = run_command(argv)
    if report is not None:
        sys.stdout.write(canonical_json(report))
    for line in lines:
        print(line, file=sys.stderr)
    return code


def main_exit():
    sys.exit(main())
