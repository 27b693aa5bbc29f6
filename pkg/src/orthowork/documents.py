"""JSON documents, the function-table literal syntax and DOT export.

All writers are deterministic: keys are emitted in a fixed order, lists in
id order, and :func:`dumps` always uses the same separators, so loading and
re-saving a canonical document reproduces it byte for byte.
"""
from __future__ import annotations

import json
import re

import numpy as np

from .lattice import FiniteLattice, Poset, relation_from_covers, transitive_closure
from .morphisms import CHECKS, Embedding
from .ortho import validate_ortho, zoo
from .terms import from_json, parse, to_json, to_text

FORMAT_VERSION = 1


def dumps(doc):
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# Lattices


def lattice_to_doc(lattice):
    doc = {
        "elements": list(lattice.names),
        "covers": [list(p) for p in lattice.cover_pairs()],
        "bottom": lattice.bottom,
        "top": lattice.top,
    }
    perp = getattr(lattice, "perp", None)
    if perp is not None:
        doc["perp"] = [int(v) for v in perp]
    return doc


def _pairs(doc, key, names):
    # endpoints may be ids or element names
    pos = {name: i for i, name in enumerate(names)}
    out = []
    for pair in doc.get(key, []):
        if len(pair) != 2:
            raise ValueError(f"{key} entries must be pairs, got {pair!r}")
        out.append(tuple(v if isinstance(v, int) else pos[v] for v in pair))
    return out


def _relation_from_doc(doc, names):
    n = len(names)
    if "leq" in doc:
        rel = np.zeros((n, n), dtype=bool)
        for x, y in _pairs(doc, "leq", names):
            rel[x, y] = True
        np.fill_diagonal(rel, True)
        return transitive_closure(rel)
    return relation_from_covers(n, _pairs(doc, "covers", names))


def lattice_from_doc(doc):
    """Build a lattice (or ortholattice when ``perp`` is present) from a document.

    The order may be given by ``covers`` or by a full ``leq`` pair list; both
    are transitively closed.  Declared bounds are checked.
    """
    if isinstance(doc, str):
        return zoo(doc)
    names = doc["elements"]
    lat = FiniteLattice(names, _relation_from_doc(doc, names), doc.get("bottom"), doc.get("top"))
    if doc.get("perp") is not None:
        return validate_ortho(lat, doc["perp"])
    return lat


def poset_from_doc(doc):
    names = doc["elements"]
    return Poset(names, _relation_from_doc(doc, names))


def poset_to_doc(poset):
    strict = poset.leq.copy()
    np.fill_diagonal(strict, False)
    s = strict.astype(np.float32)
    cov = strict & ~((s @ s) > 0)
    return {"elements": list(poset.names), "covers": [[int(x), int(y)] for x, y in np.argwhere(cov)]}


def embedding_to_doc(e, source_ref=None, target_ref=None):
    return {
        "source": source_ref if source_ref is not None else lattice_to_doc(e.source),
        "target": target_ref if target_ref is not None else lattice_to_doc(e.target),
        "map": list(e.map),
        "certificates": sorted(e.certificates),
    }


def embedding_from_doc(doc, resolve=None):
    """Read an embedding; string endpoints go through ``resolve`` (default: zoo).

    Certificates stored in the document are not trusted: each listed tag is
    re-checked, so a forged tag raises instead of being carried along.
    """
    resolve = resolve or zoo
    ends = []
    for key in ("source", "target"):
        ref = doc[key]
        ends.append(resolve(ref) if isinstance(ref, str) else lattice_from_doc(ref))
    e = Embedding(ends[0], ends[1], doc["map"])
    for tag in doc.get("certificates", []):
        if tag not in CHECKS:
            raise ValueError(f"unknown certificate tag {tag!r}")
        e = e.certify(*CHECKS[tag](e).certificates)
    return e


# Function tables and terms


def _split_top(text):
    """Split on commas outside parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


_ENTRY = re.compile(r"^(\(.*\)|[^:]+):(.+)$")


def parse_function(text, lattice):
    """Parse ``"x:y,..."`` (unary) or ``"(a,b):c,..."`` (n-ary) over element names."""
    from .interpolation import FunctionTable

    entries = {}
    arity = None
    for part in _split_top(text):
        m = _ENTRY.match(part)
        if not m:
            raise ValueError(f"bad function entry {part!r}")
        lhs, rhs = m.group(1).strip(), m.group(2).strip()
        if lhs.startswith("("):
            args = tuple(lattice.index(a.strip()) for a in lhs[1:-1].split(","))
        else:
            args = (lattice.index(lhs),)
        if arity is None:
            arity = len(args)
        elif arity != len(args):
            raise ValueError("mixed arities in function literal")
        if args in entries:
            raise ValueError(f"duplicate argument {lhs!r}")
        entries[args] = lattice.index(rhs)
    return FunctionTable(lattice, arity or 1, entries)


def format_function(f):
    parts = []
    for args in f.domain:
        names = [f.lattice.names[a] for a in args]
        lhs = names[0] if f.arity == 1 else "(" + ",".join(names) + ")"
        parts.append(f"{lhs}:{f.lattice.names[f.entries[args]]}")
    return ",".join(parts)


def function_to_doc(f):
    return {"arity": f.arity, "entries": [[list(a), f.entries[a]] for a in f.domain]}


def function_from_doc(doc, lattice):
    from .interpolation import FunctionTable

    if isinstance(doc, str):
        return parse_function(doc, lattice)
    return FunctionTable(lattice, doc["arity"], {tuple(a): v for a, v in doc["entries"]})


def term_to_doc(t):
    return {"text": to_text(t), "ast": to_json(t)}


def term_from_doc(doc):
    if isinstance(doc, str):
        return parse(doc)
    return from_json(doc["ast"]) if "ast" in doc else parse(doc["text"])


# DOT


def _dot_id(name):
    return json.dumps(name, ensure_ascii=False)


def export_dot(lattice, show_perp=False, graph_name="L"):
    """Hasse diagram in DOT; nodes sorted by (height, name), one rank per height."""
    heights = lattice.heights
    order = sorted(range(lattice.size), key=lambda x: (heights[x], lattice.names[x]))
    lines = [f"digraph {_dot_id(graph_name)} {{", "  rankdir=BT;", "  node [shape=circle];"]
    for x in order:
        lines.append(f"  {_dot_id(lattice.names[x])};")
    for h in sorted(set(heights)):
        members = " ".join(_dot_id(lattice.names[x]) + ";" for x in order if heights[x] == h)
        lines.append(f"  {{ rank=same; {members} }}")
    pos = {x: i for i, x in enumerate(order)}
    for x, y in sorted(lattice.cover_pairs(), key=lambda p: (pos[p[0]], pos[p[1]])):
        lines.append(f"  {_dot_id(lattice.names[x])} -> {_dot_id(lattice.names[y])};")
    perp = getattr(lattice, "perp", None)
    if show_perp and perp is not None:
        for x in order:
            y = int(perp[x])
            if pos[x] < pos[y]:
                lines.append(
                    f"  {_dot_id(lattice.names[x])} -> {_dot_id(lattice.names[y])}"
                    " [style=dashed, dir=none, constraint=false];"
                )
    lines.append("}")
    return "\n".join(lines) + "\n"


# Workspace


class Workspace:
    """Named lattices, embeddings, functions and terms with cross-references.

    Embeddings refer to lattices by name and functions carry the name of
    their lattice; :meth:`to_doc` writes everything in sorted key order.
    """

    SECTIONS = ("lattices", "embeddings", "functions", "terms")

    def __init__(self):
        self.lattices = {}
        self.embeddings = {}
        self.functions = {}
        self.terms = {}

    def _lattice_name(self, lat):
        for name, other in self.lattices.items():
            if other is lat:
                return name
        for name, other in self.lattices.items():
            if other == lat:
                return name
        raise KeyError("lattice is not registered in the workspace")

    def to_doc(self):
        doc = {"version": FORMAT_VERSION}
        doc["lattices"] = {k: lattice_to_doc(v) for k, v in sorted(self.lattices.items())}
        doc["embeddings"] = {
            k: embedding_to_doc(e, self._lattice_name(e.source), self._lattice_name(e.target))
            for k, e in sorted(self.embeddings.items())
        }
        doc["functions"] = {
            k: {"lattice": self._lattice_name(f.lattice), **function_to_doc(f)} for k, f in sorted(self.functions.items())
        }
        doc["terms"] = {k: term_to_doc(t) for k, t in sorted(self.terms.items())}
        return doc

    @classmethod
    def from_doc(cls, doc):
        if doc.get("version", FORMAT_VERSION) != FORMAT_VERSION:
            raise ValueError(f"unsupported workspace version {doc.get('version')}")
        ws = cls()
        for name, ldoc in doc.get("lattices", {}).items():
            ws.lattices[name] = lattice_from_doc(ldoc)

        def resolve(ref):
            if ref in ws.lattices:
                return ws.lattices[ref]
            raise KeyError(f"unresolved lattice reference {ref!r}")

        for name, edoc in doc.get("embeddings", {}).items():
            ws.embeddings[name] = embedding_from_doc(edoc, resolve)
        for name, fdoc in doc.get("functions", {}).items():
            ws.functions[name] = function_from_doc(fdoc, resolve(fdoc["lattice"]))
        for name, tdoc in doc.get("terms", {}).items():
            ws.terms[name] = term_from_doc(tdoc)
        return ws

    def dumps(self):
        return dumps(self.to_doc())

    @classmethod
    def loads(cls, text):
        return cls.from_doc(json.loads(text))
