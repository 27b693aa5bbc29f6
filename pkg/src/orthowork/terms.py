"""Ortho-terms: syntax trees, evaluation, De Morgan normal form, text format.

Text grammar (``&`` binds tighter than ``|``; ``^'`` is postfix perp)::

    expr   := meet ('|' meet)*
    meet   := factor ('&' factor)*
    factor := atom ("^'")*
    atom   := 'x' INDEX | NAME | '"' quoted name '"' | '(' expr ')'

Variables are ``x0, x1, ...`` (``x_0`` is accepted too).  Any other bare
word of letters, digits and underscores is a coefficient name; coefficient
names that are not bare words are written as JSON strings.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    NotAnOrtholattice,
    NotUnary,
    TermSyntaxError,
    UnboundVariable,
    UnresolvedCoefficient,
)


class Term:
    __slots__ = ()

    def __and__(self, other):
        return Meet(self, other)

    def __or__(self, other):
        return Join(self, other)

    def __invert__(self):
        return Perp(self)

    def __str__(self):
        return to_text(self)

    @property
    def children(self):
        return ()

    def size(self):
        return 1 + sum(c.size() for c in self.children)

    def depth(self):
        return 1 + max((c.depth() for c in self.children), default=0)

    def variables(self):
        out = set()
        for node in walk(self):
            if isinstance(node, Var):
                out.add(node.index)
        return out

    def constants(self):
        out = set()
        for node in walk(self):
            if isinstance(node, Const):
                out.add(node.name)
        return out


@dataclass(frozen=True)
class Var(Term):
    index: int


@dataclass(frozen=True)
class Const(Term):
    name: str


@dataclass(frozen=True)
class Meet(Term):
    left: Term
    right: Term

    @property
    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Join(Term):
    left: Term
    right: Term

    @property
    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Perp(Term):
    arg: Term

    @property
    def children(self):
        return (self.arg,)


def walk(t):
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children))


# Printing and parsing

_BARE = re.compile(r"[A-Za-z0-9_]+\Z")
_VAR = re.compile(r"x_?(\d+)\Z")


def const_text(name):
    if _BARE.match(name) and not _VAR.match(name):
        return name
    return json.dumps(name, ensure_ascii=False)


def to_text(t):
    if isinstance(t, Var):
        return f"x{t.index}"
    if isinstance(t, Const):
        return const_text(t.name)
    if isinstance(t, Perp):
        inner = to_text(t.arg)
        if isinstance(t.arg, (Meet, Join)):
            inner = f"({inner})"
        return inner + "^'"
    if isinstance(t, Meet):
        left, right = to_text(t.left), to_text(t.right)
        if isinstance(t.left, Join):
            left = f"({left})"
        if isinstance(t.right, (Meet, Join)):
            right = f"({right})"
        return f"{left} & {right}"
    if isinstance(t, Join):
        left, right = to_text(t.left), to_text(t.right)
        if isinstance(t.right, Join):
            right = f"({right})"
        return f"{left} | {right}"
    raise TypeError(f"not a term: {t!r}")


_TOKEN = re.compile(r"""\s*(?:(?P<perp>\^')|(?P<op>[&|()])|(?P<str>"(?:[^"\\]|\\.)*")|(?P<word>[A-Za-z0-9_]+))""")


def _tokenize(text):
    pos = 0
    tokens = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise TermSyntaxError(f"unexpected character {text[pos]!r} at {pos}", position=pos)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        value = m.group(kind)
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def parse(text):
    """Parse the text format into a :class:`Term`."""
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos]

    def advance():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def expr():
        node = meet()
        while peek()[1] == "|" and peek()[0] == "op":
            advance()
            node = Join(node, meet())
        return node

    def meet():
        node = factor()
        while peek()[1] == "&" and peek()[0] == "op":
            advance()
            node = Meet(node, factor())
        return node

    def factor():
        node = atom()
        while peek()[0] == "perp":
            advance()
            node = Perp(node)
        return node

    def atom():
        kind, value, start = advance()
        if kind == "word":
            m = _VAR.match(value)
            return Var(int(m.group(1))) if m else Const(value)
        if kind == "str":
            return Const(json.loads(value))
        if kind == "op" and value == "(":
            node = expr()
            kind2, value2, start2 = advance()
            if value2 != ")":
                raise TermSyntaxError(f"expected ')' at {start2}", position=start2)
            return node
        what = "end of input" if kind == "end" else repr(value)
        raise TermSyntaxError(f"unexpected {what} at {start}", position=start)

    node = expr()
    kind, value, start = peek()
    if kind != "end":
        raise TermSyntaxError(f"unexpected {value!r} at {start}", position=start)
    return node


# JSON AST


def to_json(t):
    if isinstance(t, Var):
        return {"op": "var", "index": t.index}
    if isinstance(t, Const):
        return {"op": "const", "name": t.name}
    if isinstance(t, Perp):
        return {"op": "perp", "args": [to_json(t.arg)]}
    op = "meet" if isinstance(t, Meet) else "join"
    return {"op": op, "args": [to_json(t.left), to_json(t.right)]}


def from_json(doc):
    op = doc["op"]
    if op == "var":
        return Var(int(doc["index"]))
    if op == "const":
        return Const(doc["name"])
    args = [from_json(a) for a in doc["args"]]
    if op == "perp":
        return Perp(*args)
    if op == "meet":
        return Meet(*args)
    if op == "join":
        return Join(*args)
    raise ValueError(f"unknown term node {op!r}")


# Evaluation


def evaluate(t, lattice, assignment, coefficients=None):
    """Evaluate ``t`` in ``lattice``.

    ``assignment`` maps variable indices to element ids (a sequence or a
    dict); values may be numpy arrays, in which case evaluation is
    elementwise.  Coefficients resolve through ``coefficients`` first and
    then by element name.
    """
    cache = {}

    def ev(node):
        key = id(node)
        if key in cache:
            return cache[key]
        if isinstance(node, Var):
            try:
                val = assignment[node.index]
            except (IndexError, KeyError):
                raise UnboundVariable(f"x{node.index} is not assigned", index=node.index) from None
        elif isinstance(node, Const):
            if coefficients is not None and node.name in coefficients:
                val = coefficients[node.name]
            else:
                try:
                    val = lattice.index(node.name)
                except KeyError:
                    raise UnresolvedCoefficient(f"no coefficient named {node.name!r}", name=node.name) from None
        elif isinstance(node, Meet):
            val = lattice.meet_table[ev(node.left), ev(node.right)]
        elif isinstance(node, Join):
            val = lattice.join_table[ev(node.left), ev(node.right)]
        elif isinstance(node, Perp):
            perp = getattr(lattice, "perp", None)
            if perp is None:
                raise NotAnOrtholattice("perp needs an ortholattice")
            val = perp[ev(node.arg)]
        else:
            raise TypeError(f"not a term: {node!r}")
        cache[key] = val
        return val

    out = ev(t)
    if isinstance(out, np.ndarray) and out.ndim > 0:
        return out
    return int(out)


def function_vector(t, lattice, points, coefficients=None):
    """Values of a unary term at each of ``points``, as a tuple."""
    pts = np.asarray(points, dtype=np.intp)
    vals = evaluate(t, lattice, [pts], coefficients)
    vals = np.broadcast_to(vals, pts.shape)
    return tuple(int(v) for v in vals)


# Rewriting


def nnf(t):
    """Push every perp down to a variable or constant (De Morgan + involution)."""

    def go(node, negate):
        if isinstance(node, (Var, Const)):
            return Perp(node) if negate else node
        if isinstance(node, Perp):
            return go(node.arg, not negate)
        left, right = go(node.left, negate), go(node.right, negate)
        if isinstance(node, Meet):
            return Join(left, right) if negate else Meet(left, right)
        return Meet(left, right) if negate else Join(left, right)

    return go(t, False)


def is_nnf(t):
    return all(
        not isinstance(node, Perp) or isinstance(node.arg, (Var, Const)) for node in walk(t)
    )


def as_two_variable_lattice_term(t, ortho):
    """Rewrite a unary NNF term as a perp-free lattice term in ``x0`` and ``x1``.

    ``x0^'`` becomes ``x1`` and ``c^'`` becomes the coefficient naming the
    orthocomplement of ``c`` in ``ortho``; substituting ``x1 := x0^'``
    recovers the original function.
    """
    if not is_nnf(t):
        raise ValueError("term is not in De Morgan normal form")
    if t.variables() - {0}:
        raise NotUnary("term uses variables other than x0", variables=sorted(t.variables()))

    def go(node):
        if isinstance(node, Perp):
            arg = node.arg
            if isinstance(arg, Var):
                return Var(1)
            return Const(ortho.names[ortho.orth(ortho.index(arg.name))])
        if isinstance(node, Meet):
            return Meet(go(node.left), go(node.right))
        if isinstance(node, Join):
            return Join(go(node.left), go(node.right))
        return node

    return go(t)


def substitute(t, mapping):
    """Replace each ``Var(i)`` with ``mapping[i]`` when present."""
    if isinstance(t, Var):
        return mapping.get(t.index, t)
    if isinstance(t, Const):
        return t
    if isinstance(t, Perp):
        return Perp(substitute(t.arg, mapping))
    return type(t)(substitute(t.left, mapping), substitute(t.right, mapping))


def rename_constants(t, mapping):
    """Rename coefficients, e.g. to carry a term along an embedding."""
    if isinstance(t, Const):
        return Const(mapping[t.name]) if t.name in mapping else t
    if isinstance(t, Var):
        return t
    if isinstance(t, Perp):
        return Perp(rename_constants(t.arg, mapping))
    return type(t)(rename_constants(t.left, mapping), rename_constants(t.right, mapping))


def transport(t, embedding):
    """Rewrite coefficient names of the embedding's source to target names."""
    s, tgt = embedding.source, embedding.target
    mapping = {name: tgt.names[embedding.map[i]] for i, name in enumerate(s.names)}
    return rename_constants(t, mapping)


def random_term(rng, depth, arity=1, constants=(), perp=True):
    """Random term of depth at most ``depth`` (a ``random.Random`` drives it)."""
    if depth <= 1 or rng.random() < 0.2:
        if constants and rng.random() < 0.35:
            return Const(rng.choice(list(constants)))
        return Var(rng.randrange(arity))
    ops = ["meet", "join", "perp"] if perp else ["meet", "join"]
    op = rng.choice(ops)
    if op == "perp":
        return Perp(random_term(rng, depth - 1, arity, constants, perp))
    left = random_term(rng, depth - 1, arity, constants, perp)
    right = random_term(rng, depth - 1, arity, constants, perp)
    return Meet(left, right) if op == "meet" else Join(left, right)
