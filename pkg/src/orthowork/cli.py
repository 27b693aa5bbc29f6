"""Command-line front end.

Results go to stdout (or ``--out``) as JSON or DOT; a one-line summary goes
to stderr.  Exit codes: 0 success, 1 usage or I/O error, 2 budget exhausted
or unknown, 3 negative mathematical verdict, 4 validation failure.

Lattice arguments are either paths to JSON lattice documents or zoo names.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import documents as docs
from .constructions import (
    DEFAULT_SIZE_CAP,
    dual_copy,
    glued_union,
    horizontal_sum,
    ortho_construction,
    power_witness,
    product,
)
from .exceptions import LatticeError, SizeLimitExceeded, ValidationError
from .generators import make_rng, random_glue_instance, random_ortho_instance
from .interpolation import (
    DEFAULT_CLONE_BUDGET,
    FOUND,
    NOT_REPRESENTABLE,
    Mode,
    extend_pipeline,
    interpolate_unary,
    monotone_check,
    nary_reduce,
    polynomial_clone,
)
from .lattice import dm_completion
from .morphisms import ALL_TAGS, certificate_table, check_triangle, check_triangle_dual
from .ortho import LATTICE_ZOO, ORTHO_ZOO, check_de_morgan, zoo

EXIT_OK, EXIT_USAGE, EXIT_UNKNOWN, EXIT_NEGATIVE, EXIT_INVALID = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_json(ref):
    try:
        with open(ref, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {ref}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{ref} is not valid JSON: {exc}") from None


def load_lattice(ref):
    if os.path.exists(ref):
        return docs.lattice_from_doc(_read_json(ref))
    try:
        return zoo(ref)
    except KeyError:
        raise UsageError(f"{ref!r} is neither a file nor a zoo name") from None


def load_embedding(ref):
    return docs.embedding_from_doc(_read_json(ref), resolve=load_lattice)


def _emit(args, payload):
    text = payload if isinstance(payload, str) else docs.dumps(payload)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc}") from None
    else:
        sys.stdout.write(text)


def _note(msg):
    print(msg, file=sys.stderr)


def _term_doc(t):
    return None if t is None else docs.term_to_doc(t)


# Subcommands


def cmd_validate(args):
    lat = load_lattice(args.lattice)
    report = {"valid": True, "size": lat.size, "ortho": hasattr(lat, "perp"), "lattice": docs.lattice_to_doc(lat)}
    if hasattr(lat, "perp"):
        dm = check_de_morgan(lat)
        report["de_morgan"] = {"pairs_checked": dm.pairs_checked, "failures": dm.failures}
    _emit(args, report)
    _note(f"valid {'ortholattice' if report['ortho'] else 'lattice'} with {lat.size} elements")
    return EXIT_OK


def cmd_relate(args):
    e = load_embedding(args.embedding)
    unknown = [t for t in args.require if t not in ALL_TAGS]
    if unknown:
        raise UsageError(f"unknown certificate tag(s) {unknown}; choose from {list(ALL_TAGS)}")
    table = certificate_table(e)
    out = {tag: {"passed": ok, "detail": msg} for tag, (ok, msg) in table.items()}
    _emit(args, {"map": list(e.map), "certificates": out})
    for tag, (ok, msg) in table.items():
        _note(f"{tag:13s} {'-' if ok is None else 'yes' if ok else 'no'}  {msg}")
    failed = [t for t in args.require if table.get(t, (False,))[0] is not True]
    return EXIT_NEGATIVE if failed else EXIT_OK


def _construction_doc(res, extra=None):
    out = {
        "result": docs.lattice_to_doc(res.result),
        "embeddings": {k: {"map": list(e.map), "certificates": sorted(e.certificates)} for k, e in sorted(res.embeddings.items())},
    }
    if extra:
        out.update(extra)
    return out


def cmd_construct(args):
    cap = args.size_cap
    kind = args.kind
    ins = args.inputs
    if kind in ("product", "hsum"):
        if len(ins) != 2:
            raise UsageError(f"{kind} needs two lattices")
        a, b = (load_lattice(r) for r in ins)
        res = product(a, b, cap) if kind == "product" else horizontal_sum(a, b, cap)
        doc = _construction_doc(res)
    elif kind == "glue":
        if len(ins) != 2:
            raise UsageError("glue needs two embedding documents (L0->L1, L0->L2)")
        e1, e2 = (load_embedding(r) for r in ins)
        res = glued_union(check_triangle(e1)[0], _dual_certified(e2), cap)
        doc = _construction_doc(res)
    elif kind in ("dual-copy", "ortho"):
        if len(ins) != 1:
            raise UsageError(f"{kind} needs one embedding document (L0->L1)")
        e = check_triangle(load_embedding(ins[0]))[0]
        res = dual_copy(e) if kind == "dual-copy" else ortho_construction(e, cap)
        doc = _construction_doc(res)
    elif kind == "dm-completion":
        if len(ins) != 1:
            raise UsageError("dm-completion needs one poset document")
        lat, emb = dm_completion(docs.poset_from_doc(_read_json(ins[0])))
        doc = {"result": docs.lattice_to_doc(lat), "embeddings": {"P→L": {"map": list(emb.map), "certificates": []}}}
        res = None
    elif kind == "power":
        if len(ins) != 1 or args.elements is None:
            raise UsageError("power needs one lattice and --elements")
        lat = load_lattice(ins[0])
        elems = [lat.index(s.strip()) for s in args.elements.split(",")]
        pw = power_witness(lat, elems, args.n, cap)
        doc = {
            "result": docs.lattice_to_doc(pw.ambient),
            "embeddings": {
                "L→M": {"map": list(pw.base.map), "certificates": sorted(pw.base.certificates)},
                "S^n→M": {"map": list(pw.power.map), "certificates": sorted(pw.power.certificates)},
            },
            "power": docs.lattice_to_doc(pw.power_lattice),
        }
        res = None
    elif kind in ("random-glue", "random-ortho"):
        rng = make_rng(args.seed)
        if kind == "random-glue":
            e1, e2 = random_glue_instance(rng)
            res = glued_union(e1, e2, cap)
        else:
            res = ortho_construction(random_ortho_instance(rng), cap)
        doc = _construction_doc(res)
    else:
        raise UsageError(f"unknown construction {kind!r}")
    if args.dot:
        lat = res.result if res is not None else docs.lattice_from_doc(doc["result"])
        doc["dot"] = docs.export_dot(lat, show_perp=hasattr(lat, "perp"))
    _emit(args, doc)
    _note(f"{kind}: {len(doc['result']['elements'])} elements")
    return EXIT_OK


def _dual_certified(e):
    return check_triangle_dual(e)[0]


def _mode(args, lat):
    if args.mode:
        return Mode(args.mode)
    return Mode.ORTHO if hasattr(lat, "perp") else Mode.LATTICE


def cmd_closure(args):
    lat = load_lattice(args.lattice)
    mode = _mode(args, lat)
    clone = polynomial_clone(lat, mode, args.budget)
    members = sorted(clone.members)
    doc = {
        "mode": mode.value,
        "complete": clone.complete,
        "size": len(members),
        "members": [
            {"values": [lat.names[v] for v in vec], "witness": clone.texts[vec]} for vec in members
        ],
    }
    _emit(args, doc)
    _note(f"{len(members)} members ({'complete' if clone.complete else 'truncated'})")
    return EXIT_OK if clone.complete else EXIT_UNKNOWN


def cmd_interpolate(args):
    lat = load_lattice(args.lattice)
    mode = _mode(args, lat)
    f = docs.parse_function(args.fn, lat)
    res = interpolate_unary(lat, mode, f, args.budget)
    mono = monotone_check(f)
    doc = {"status": res.status, "mode": mode.value, "monotone": mono.ok, "term": _term_doc(res.term)}
    _emit(args, doc)
    _note(f"{res.status}" + (f": {res.text}" if res.term is not None else ""))
    return {FOUND: EXIT_OK, NOT_REPRESENTABLE: EXIT_NEGATIVE}.get(res.status, EXIT_UNKNOWN)


def cmd_extend_pipeline(args):
    o0 = load_lattice(args.l0)
    if not hasattr(o0, "perp"):
        raise ValidationError("extend-pipeline needs an ortholattice (add a perp table)")
    f = docs.parse_function(args.fn, o0)
    if f.arity != 1 or len(f) != o0.size:
        raise UsageError("the function must be total and unary on L0")
    ext = load_embedding(args.extension) if args.extension else None
    if ext is not None:
        ext = check_triangle(ext)[0]
    trace = extend_pipeline(o0, f, extension=ext, budget=args.budget, size_cap=args.size_cap)
    _emit(args, trace.to_json())
    _note(f"pipeline {trace.status}" + (f" at {trace.failed_stage}: {trace.reason}" if not trace.ok else ""))
    return EXIT_OK if trace.ok else EXIT_NEGATIVE


def cmd_nary_reduce(args):
    lat = load_lattice(args.lattice)
    g = docs.parse_function(args.fn, lat)
    res = nary_reduce(lat, g, budget=args.budget, generation_cap=args.generation_cap, size_cap=args.size_cap)
    _emit(args, res.to_json())
    _note(res.status)
    return {FOUND: EXIT_OK, NOT_REPRESENTABLE: EXIT_NEGATIVE}.get(res.status, EXIT_UNKNOWN)


def cmd_zoo(args):
    if args.name is None:
        _emit(args, {"ortholattices": sorted(ORTHO_ZOO), "lattices": sorted(LATTICE_ZOO)})
        return EXIT_OK
    lat = load_lattice(args.name)
    if args.export_dot:
        _emit(args, docs.export_dot(lat, show_perp=args.perp, graph_name=args.name))
    else:
        _emit(args, docs.lattice_to_doc(lat))
    _note(f"{args.name}: {lat.size} elements, {len(lat.cover_pairs())} covers")
    return EXIT_OK


def cmd_export_dot(args):
    lat = load_lattice(args.lattice)
    _emit(args, docs.export_dot(lat, show_perp=args.perp))
    return EXIT_OK


def build_parser():
    p = _Parser(prog="orthowork", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=DEFAULT_CLONE_BUDGET, help="clone member budget")
    common.add_argument("--size-cap", type=int, default=DEFAULT_SIZE_CAP, help="largest lattice a construction may build")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized generation")
    common.add_argument("--out", help="write the result here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", parents=[common], help="validate a lattice document")
    s.add_argument("lattice")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("relate", parents=[common], help="certificate table of an embedding")
    s.add_argument("embedding")
    s.add_argument("--require", action="append", default=[], help="exit 3 unless this tag holds")
    s.set_defaults(func=cmd_relate)

    s = sub.add_parser("construct", parents=[common], help="build a new lattice")
    s.add_argument(
        "kind",
        choices=["product", "hsum", "glue", "dual-copy", "ortho", "dm-completion", "power", "random-glue", "random-ortho"],
    )
    s.add_argument("inputs", nargs="*")
    s.add_argument("--elements", help="comma separated element names (power)")
    s.add_argument("--n", type=int, default=2, help="arity (power)")
    s.add_argument("--dot", action="store_true", help="include a DOT rendering")
    s.set_defaults(func=cmd_construct)

    for name, func, helptext in (
        ("closure", cmd_closure, "unary polynomial clone"),
        ("interpolate", cmd_interpolate, "interpolate a partial unary function"),
    ):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("lattice")
        s.add_argument("--mode", choices=[m.value for m in Mode])
        if name == "interpolate":
            s.add_argument("--fn", required=True, help='function literal, e.g. "0:1,1:0"')
        s.set_defaults(func=func)

    s = sub.add_parser("extend-pipeline", parents=[common], help="interpolate any f over an ortho-extension")
    s.add_argument("--l0", required=True)
    s.add_argument("--fn", required=True)
    s.add_argument("--extension", help="embedding document L0' -> L1")
    s.set_defaults(func=cmd_extend_pipeline)

    s = sub.add_parser("nary-reduce", parents=[common], help="interpolate an n-ary partial function")
    s.add_argument("lattice")
    s.add_argument("--fn", required=True, help='e.g. "(a,b):0,(a,a):a"')
    s.add_argument("--generation-cap", type=int, default=16)
    s.set_defaults(func=cmd_nary_reduce)

    s = sub.add_parser("zoo", parents=[common], help="list or print zoo entries")
    s.add_argument("--name")
    s.add_argument("--export-dot", action="store_true")
    s.add_argument("--perp", action="store_true", help="draw perp pairs")
    s.set_defaults(func=cmd_zoo)

    s = sub.add_parser("export-dot", parents=[common], help="Hasse diagram as DOT")
    s.add_argument("lattice")
    s.add_argument("--perp", action="store_true")
    s.set_defaults(func=cmd_export_dot)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        _note(f"error: {exc}")
        return EXIT_USAGE
    except SizeLimitExceeded as exc:
        _note(f"size limit: {exc}")
        return EXIT_UNKNOWN
    except ValidationError as exc:
        _note(f"invalid: {type(exc).__name__}: {exc}")
        return EXIT_INVALID
    except LatticeError as exc:
        _note(f"{type(exc).__name__}: {exc}")
        return EXIT_NEGATIVE
    except (KeyError, ValueError) as exc:
        _note(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
