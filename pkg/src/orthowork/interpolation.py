"""Polynomial clones and interpolation by (ortho)polynomials at finite scale.

The workhorse is :func:`polynomial_clone`, a breadth-first closure of the
identity and the constants under pointwise meet and join (and perp in ortho
mode).  Functions are packed as vectors of element ids over a fixed list of
evaluation points, and terms are generated in order of size, so the first
witness found for a function is a shortest one; ties are broken by the
lexicographically least printed form.

The interpolation step for monotone partial functions over an *extension*
lattice is realised by bounded search: the clone is searched over the base
lattice itself and then over its horizontal sums with a few small lattices
(see :data:`DEFAULT_FAMILY`).  This is sound but not complete.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import product as cartesian

import numpy as np

from .constructions import (
    DEFAULT_SIZE_CAP,
    ConstructionResult,
    horizontal_sum,
    ortho_construction,
    power_witness,
    product,
)
from .exceptions import GenerationTooLarge, LatticeError, SizeLimitExceeded, StageFailed, ToldStepFailed
from .lattice import chain, diamond, generated_sublattice
from .morphisms import Embedding, check_triangle
from .terms import Const, Join, Perp, Var, evaluate, substitute, to_json, to_text, transport

DEFAULT_CLONE_BUDGET = 2_000_000
DEFAULT_FAMILY = ("none", "3-chain", "B2", "M3", "M4")

FOUND = "found"
NOT_REPRESENTABLE = "not_representable"
UNKNOWN = "unknown"


class Mode(str, Enum):
    LATTICE = "lattice"
    ORTHO = "ortho"


def _family_lattice(name):
    return {"3-chain": lambda: chain(3), "B2": lambda: diamond(2), "M3": lambda: diamond(3), "M4": lambda: diamond(4)}[name]()


@dataclass
class FunctionTable:
    """A partial ``arity``-ary function on the elements of ``lattice``.

    ``entries`` maps argument tuples to element ids.
    """

    lattice: object
    arity: int
    entries: dict

    def __post_init__(self):
        self.entries = {tuple(int(v) for v in k): int(w) for k, w in self.entries.items()}
        n = self.lattice.size
        for args, value in self.entries.items():
            if len(args) != self.arity or not all(0 <= a < n for a in args) or not 0 <= value < n:
                raise ValueError(f"invalid entry {args} -> {value}")

    @classmethod
    def unary(cls, lattice, mapping):
        return cls(lattice, 1, {(int(x),): int(y) for x, y in mapping.items()})

    @classmethod
    def total(cls, lattice, vector):
        if len(vector) != lattice.size:
            raise ValueError("a total unary table needs one value per element")
        return cls(lattice, 1, {(x,): int(y) for x, y in enumerate(vector)})

    @property
    def domain(self):
        return sorted(self.entries)

    def __call__(self, *args):
        return self.entries[tuple(args)]

    def __len__(self):
        return len(self.entries)

    def vector(self):
        """Values over the sorted domain."""
        return tuple(self.entries[k] for k in self.domain)


@dataclass
class MonotoneReport:
    ok: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


def monotone_check(f):
    """Is ``f`` order preserving on its domain (componentwise order on tuples)?

    On failure the witness is a pair ``(a, b)`` with ``a <= b`` but
    ``f(a) </= f(b)``.
    """
    leq = f.lattice.leq
    dom = f.domain
    for a in dom:
        for b in dom:
            if a != b and all(leq[x, y] for x, y in zip(a, b)) and not leq[f.entries[a], f.entries[b]]:
                return MonotoneReport(False, (a, b))
    return MonotoneReport(True)


# Clone closure


@dataclass
class CloneTable:
    lattice: object
    mode: Mode
    points: tuple
    members: dict  # value vector over ``points`` -> shortest witness term
    texts: dict
    complete: bool
    max_size: int = 0

    def __len__(self):
        return len(self.members)

    def __contains__(self, vector):
        return tuple(vector) in self.members

    def witness(self, vector):
        return self.members.get(tuple(vector))


def _wrap_perp(t, k):
    return (f"({t})" if k in ("meet", "join") else t) + "^'"


_CHUNK = 1 << 21
_WORD = 62  # bits used per int64 code word


class _Codec:
    """Packs element-id vectors into rows of int64 words (base ``|L|`` digits)."""

    def __init__(self, base, k):
        per_word = max(1, int(_WORD // max(1.0, np.log2(max(base, 2)))))
        while per_word > 1 and base**per_word >= 2**_WORD:
            per_word -= 1
        self.k = k
        self.spans = [(s, min(k, s + per_word)) for s in range(0, max(k, 1), per_word)]
        self.powers = [base ** np.arange(e - s, dtype=np.int64) for s, e in self.spans]

    @property
    def words(self):
        return len(self.spans)

    def encode(self, vecs):
        vecs = np.asarray(vecs, dtype=np.int64).reshape(-1, self.k)
        out = np.zeros((len(vecs), self.words), dtype=np.int64)
        for w, ((s, e), p) in enumerate(zip(self.spans, self.powers)):
            out[:, w] = vecs[:, s:e] @ p
        return out

    @staticmethod
    def key(row):
        return int(row[0]) if len(row) == 1 else tuple(int(v) for v in row)


def _rank_tables(texts):
    """Rank of each text in sorted order, and the end of its prefix block.

    ``end[r]`` is one past the last rank whose text has the rank-``r`` text
    as a prefix; in sorted order those texts are contiguous.
    """
    order = sorted(range(len(texts)), key=texts.__getitem__)
    rank = np.empty(len(texts), dtype=np.int64)
    rank[order] = np.arange(len(texts))
    srt = [texts[i] for i in order]
    end = np.empty(len(texts), dtype=np.int64)
    for r, s in enumerate(srt):
        e = r + 1
        while e < len(srt) and srt[e].startswith(s):
            e += 1
        end[r] = e
    return rank, end


class _Level:
    def __init__(self, vecs, codes, terms, texts, kinds):
        self.vecs, self.codes, self.terms, self.texts, self.kinds = vecs, codes, terms, texts, kinds
        self._wrapped = {}

    def wrapped(self, role):
        """Texts as they appear in a given operand slot, with rank tables."""
        if role not in self._wrapped:
            paren = {"meet_left": ("join",), "meet_right": ("meet", "join"), "join_left": (), "join_right": ("join",)}[role]
            w = [f"({t})" if k in paren else t for t, k in zip(self.texts, self.kinds)]
            self._wrapped[role] = (w,) + _rank_tables(w)
        return self._wrapped[role]


def _fresh_mask(codes, known_keys, known_sorted):
    if codes.shape[1] == 1:
        return ~np.isin(codes[:, 0], known_sorted)
    return np.array([_Codec.key(r) not in known_keys for r in codes], dtype=bool)


def polynomial_clone(lattice, mode=Mode.LATTICE, budget=DEFAULT_CLONE_BUDGET, points=None, target=None, max_term_size=None):
    """Unary polynomial functions of ``lattice``, restricted to ``points``.

    Closes ``{x0} ∪ constants`` under pointwise meet and join, plus
    postcomposition with perp in ortho mode.  Restricting to ``points``
    (default: every element) gives exactly the restrictions of the full
    clone.  Terms are generated by size, so each member's witness is a
    shortest term; among those the least printed form wins.  The search stops
    early once ``target`` is found, when the member count reaches ``budget``
    or when terms would exceed ``max_term_size``; ``complete`` is true only
    if the fixpoint was reached.
    """
    mode = Mode(mode)
    if mode is Mode.ORTHO and getattr(lattice, "perp", None) is None:
        raise LatticeError("ortho mode needs an ortholattice")
    pts = np.array(list(range(lattice.size)) if points is None else list(points), dtype=np.intp)
    k = len(pts)
    codec = _Codec(lattice.size, k)
    target_key = None if target is None else _Codec.key(codec.encode([list(target)])[0])

    known = {}  # code key -> (term, text)
    known_sorted = np.empty(0, dtype=np.int64)
    levels = {}

    def commit(size, cands):
        nonlocal known_sorted
        if not cands:
            return
        rows = sorted(cands.items(), key=lambda kv: kv[1][0])
        terms, texts, kinds, vecs = [], [], [], []
        for key, (text, build, kind, vec) in rows:
            term = build()
            known[key] = (term, text)
            terms.append(term)
            texts.append(text)
            kinds.append(kind)
            vecs.append(vec)
        vecs = np.array(vecs, dtype=np.intp).reshape(len(rows), k)
        levels[size] = _Level(vecs, codec.encode(vecs), terms, texts, kinds)
        if codec.words == 1:
            known_sorted = np.sort(np.concatenate([known_sorted, levels[size].codes[:, 0]]))

    def offer(cands, key, text, build, kind, vec):
        best = cands.get(key)
        if best is None or text < best[0]:
            cands[key] = (text, build, kind, vec)

    cands = {}
    offer(cands, _Codec.key(codec.encode([pts])[0]), "x0", lambda: Var(0), "atom", pts)
    for c in range(lattice.size):
        vec = np.full(k, c, dtype=np.intp)
        term = Const(lattice.names[c])
        offer(cands, _Codec.key(codec.encode([vec])[0]), to_text(term), lambda term=term: term, "atom", vec)
    commit(1, cands)

    complete = False
    size = 1
    tables = {"meet": lattice.meet_table, "join": lattice.join_table}
    nodes = {"meet": _meet_node, "join": _join_node}
    perp_t = lattice.perp if mode is Mode.ORTHO else None
    while True:
        if target_key is not None and target_key in known:
            break
        if len(known) >= budget:
            break
        size += 1
        if size > 2 * max(levels) + 1:
            complete = True
            break
        if max_term_size is not None and size > max_term_size:
            break
        cands = {}
        if perp_t is not None and size - 1 in levels:
            lev = levels[size - 1]
            out = perp_t[lev.vecs]
            codes = codec.encode(out)
            for r in np.flatnonzero(_fresh_mask(codes, known, known_sorted)):
                text = _wrap_perp(lev.texts[r], lev.kinds[r])
                offer(cands, _Codec.key(codes[r]), text, lambda t=lev.terms[r]: Perp(t), "perp", out[r])
        for i in range(1, size - 1):
            j = size - 1 - i
            if i not in levels or j not in levels:
                continue
            for op in ("meet", "join"):
                _combine(levels[i], levels[j], op, tables[op], nodes[op], codec, known, known_sorted, cands, offer, k)
        commit(size, cands)

    members = {}
    texts = {}
    for lev in levels.values():
        for r, vec in enumerate(lev.vecs):
            v = tuple(int(x) for x in vec)
            members[v] = lev.terms[r]
            texts[v] = lev.texts[r]
    return CloneTable(lattice, mode, tuple(int(p) for p in pts), members, texts, complete, max(levels))


def _combine(left, right, op, table, node, codec, known, known_sorted, cands, offer, k):
    """Offer every fresh ``op(a, b)`` with ``a`` from ``left``, ``b`` from ``right``.

    Per fresh value only producers that can carry the least printed form are
    turned into text: the one with the least (left, right) operand ranks,
    plus those whose left operand text extends the winning left text.
    """
    lw, lrank, lend = left.wrapped(f"{op}_left")
    rw, rrank, _ = right.wrapped(f"{op}_right")
    sep = " & " if op == "meet" else " | "
    mb = len(right.terms)
    rows_per_chunk = max(1, _CHUNK // max(1, mb * k))
    for start in range(0, len(left.terms), rows_per_chunk):
        block = left.vecs[start : start + rows_per_chunk]
        res = table[block[:, None, :], right.vecs[None, :, :]].reshape(-1, k)
        codes = codec.encode(res)
        fresh = np.flatnonzero(_fresh_mask(codes, known, known_sorted))
        if not fresh.size:
            continue
        a = start + fresh // mb
        b = fresh % mb
        fc = codes[fresh]
        la, rb = lrank[a], rrank[b]
        order = np.lexsort((rb, la) + tuple(fc[:, w] for w in reversed(range(fc.shape[1]))))
        fc, a, b, la = fc[order], a[order], b[order], la[order]
        first = np.ones(len(order), dtype=bool)
        first[1:] = (fc[1:] != fc[:-1]).any(axis=1)
        group = np.cumsum(first) - 1
        best_la = la[first][group]
        keep = first | ((la > best_la) & (la < lend[best_la]))
        for p in np.flatnonzero(keep):
            ai, bi = int(a[p]), int(b[p])
            text = lw[ai] + sep + rw[bi]
            offer(
                cands,
                _Codec.key(fc[p]),
                text,
                lambda x=left.terms[ai], y=right.terms[bi]: node(x, y),
                op,
                res[(ai - start) * mb + bi],
            )


def _meet_node(a, b):
    from .terms import Meet

    return Meet(a, b)


def _join_node(a, b):
    return Join(a, b)


def closure_escapes(clone):
    """Pointwise combinations of members that fall outside the member set.

    Empty for a completed closure; one full pass over the fixpoint.
    """
    lat = clone.lattice
    vecs = np.array(list(clone.members), dtype=np.intp)
    keys = set(clone.members)
    escapes = []
    for table in (lat.meet_table, lat.join_table):
        res = table[vecs[:, None, :], vecs[None, :, :]].reshape(-1, vecs.shape[1])
        for row in {tuple(int(v) for v in r) for r in res}:
            if row not in keys:
                escapes.append(row)
    if clone.mode is Mode.ORTHO:
        for r in lat.perp[vecs]:
            row = tuple(int(v) for v in r)
            if row not in keys:
                escapes.append(row)
    return escapes


@dataclass
class Interpolation:
    status: str
    term: object = None
    clone_size: int = 0
    complete: bool = False

    @property
    def found(self):
        return self.status == FOUND

    @property
    def text(self):
        return None if self.term is None else to_text(self.term)


def interpolate_unary(lattice, mode, f, budget=DEFAULT_CLONE_BUDGET):
    """Search for a polynomial agreeing with the partial unary ``f`` on its domain.

    Returns ``found`` with a shortest witness, ``not_representable`` when the
    closure completed without it, or ``unknown`` when the budget ran out.
    """
    if f.arity != 1:
        raise ValueError("interpolate_unary needs a unary table")
    dom = [a[0] for a in f.domain]
    if not dom:
        return Interpolation(FOUND, Const(lattice.names[lattice.bottom]), 0, True)
    target = tuple(f.entries[(a,)] for a in dom)
    clone = polynomial_clone(lattice, mode, budget, points=dom, target=target)
    term = clone.witness(target)
    if term is not None:
        return Interpolation(FOUND, term, len(clone), clone.complete)
    return Interpolation(NOT_REPRESENTABLE if clone.complete else UNKNOWN, None, len(clone), clone.complete)


# Bounded search for an interpolating extension


@dataclass
class ExtensionAttempt:
    extension: str
    size: int
    statuses: list

    def to_json(self):
        return {"extension": self.extension, "size": self.size, "statuses": list(self.statuses)}


def told_search(base, tables, family=DEFAULT_FAMILY, budget=DEFAULT_CLONE_BUDGET, size_cap=DEFAULT_SIZE_CAP):
    """Find ``L1`` with ``base ⊴ L1`` over which every partial monotone table
    (given on ``base`` ids) is a lattice polynomial.

    Candidates are ``base`` itself (``"none"``) and ``base`` horizontally
    summed with each named lattice of ``family``.  Returns
    ``(embedding base -> L1, terms, label, attempts)``; ``embedding`` is
    ``None`` when every candidate failed.
    """
    attempts = []
    for label in family:
        if label == "none":
            emb = check_triangle(Embedding.identity(base))[0]
        else:
            try:
                hs = horizontal_sum(base, _family_lattice(label), size_cap)
            except SizeLimitExceeded:
                attempts.append(ExtensionAttempt(label, -1, ["size_limit"]))
                continue
            emb = hs.embeddings["A→L"]
        l1 = emb.target
        terms, statuses = [], []
        for table in tables:
            moved = FunctionTable(l1, 1, {(emb.map[a[0]],): emb.map[v] for a, v in table.entries.items()})
            res = interpolate_unary(l1, Mode.LATTICE, moved, budget)
            statuses.append(res.status)
            if not res.found:
                break
            terms.append(res.term)
        attempts.append(ExtensionAttempt(label if label == "none" else f"hsum(base, {label})", l1.size, statuses))
        if len(terms) == len(tables):
            return emb, terms, attempts[-1].extension, attempts
    return None, None, None, attempts


# Antichain lift and the extension pipeline


@dataclass
class AntichainLift:
    ortho: object
    product: ConstructionResult
    lprime: ConstructionResult
    base: Embedding  # L0 -> L0', ⊴-certified
    antichain: list  # L0' ids of <x, x^perp>
    fbar: FunctionTable
    g1: FunctionTable
    g2: FunctionTable


def _lift_tables(ortho, f, base_map, pair_map, lprime):
    n = ortho.size
    bot = ortho.bottom
    antichain = [pair_map[x * n + ortho.orth(x)] for x in range(n)]
    fbar = FunctionTable.unary(lprime, {antichain[x]: base_map[f.entries[(x,)]] for x in range(n)})
    g1 = FunctionTable.unary(lprime, {base_map[x]: pair_map[x * n + bot] for x in range(n)})
    g2 = FunctionTable.unary(lprime, {base_map[x]: pair_map[bot * n + x] for x in range(n)})
    return antichain, fbar, g1, g2


def antichain_lift(ortho, f, size_cap=DEFAULT_SIZE_CAP):
    """Move a unary ``f`` on ``L0`` to a monotone partial function on
    ``L0' = hsum(L0, L0 x L0)``.

    ``fbar(<x, x^perp>) = f(x)``, ``g1(x) = <x, 0>`` and ``g2(x) = <0, x>``.
    The points ``<x, x^perp>`` form an antichain, which makes ``fbar``
    monotone whatever ``f`` is; both facts are checked here.
    """
    if len(f) != ortho.size or f.arity != 1:
        raise ValueError("f must be a total unary table on L0")
    prod = product(ortho, ortho, size_cap)
    hs = horizontal_sum(ortho, prod.result, size_cap)
    base = hs.embeddings["A→L"]
    antichain, fbar, g1, g2 = _lift_tables(ortho, f, base.map, hs.embeddings["B→L"].map, hs.result)
    leq = hs.result.leq
    for a in antichain:
        for b in antichain:
            if a != b and leq[a, b]:
                raise LatticeError("lifted points are not an antichain", x=a, y=b)
    for table in (fbar, g1, g2):
        if not monotone_check(table):
            raise LatticeError("lifted table is not monotone")
    return AntichainLift(ortho, prod, hs, base, antichain, fbar, g1, g2)


def assemble_h(p, q1, q2):
    """``h(x) = p(q1(x) v q2(x^perp))``."""
    inner = Join(q1, substitute(q2, {0: Perp(Var(0))}))
    return substitute(p, {0: inner})


def _lattice_summary(lat):
    from .documents import lattice_to_doc

    return lattice_to_doc(lat)


def _term_json(t):
    return None if t is None else {"text": to_text(t), "ast": to_json(t)}


@dataclass
class PipelineTrace:
    status: str = "running"
    failed_stage: str | None = None
    reason: str | None = None
    lift: AntichainLift | None = None
    l1: object = None
    l1_embedding: Embedding | None = None  # L0' -> L1
    extension: str | None = None
    ortho: ConstructionResult | None = None
    p: object = None
    q1: object = None
    q2: object = None
    h: object = None
    verification: list = field(default_factory=list)
    attempts: list = field(default_factory=list)

    @property
    def ok(self):
        return self.status == "success"

    def raise_for_status(self):
        if self.status != "success":
            cls = ToldStepFailed if self.failed_stage == "told" else StageFailed
            raise cls(f"stage {self.failed_stage} failed: {self.reason}", stage=self.failed_stage, reason=self.reason)
        return self

    def fail(self, stage, reason):
        self.status = "failed"
        self.failed_stage = stage
        self.reason = reason
        return self

    def to_json(self):
        stages = []
        if self.lift is not None:
            stages.append({"name": "L0", "status": "ok", "lattice": _lattice_summary(self.lift.ortho)})
            stages.append({"name": "L0'", "status": "ok", "lattice": _lattice_summary(self.lift.lprime.result)})
        stages.append(
            {
                "name": "L1",
                "status": "ok" if self.l1 is not None else ("failed" if self.failed_stage == "told" else "skipped"),
                "extension": self.extension,
                "lattice": None if self.l1 is None else _lattice_summary(self.l1),
            }
        )
        stages.append(
            {
                "name": "L",
                "status": "ok" if self.ortho is not None else "skipped",
                "lattice": None if self.ortho is None else _lattice_summary(self.ortho.result),
            }
        )
        return {
            "status": self.status,
            "failed_stage": self.failed_stage,
            "reason": self.reason,
            "stages": stages,
            "attempts": [a.to_json() for a in self.attempts],
            "terms": {name: _term_json(getattr(self, name)) for name in ("p", "q1", "q2", "h")},
            "verification": list(self.verification),
            "verified": bool(self.verification) and all(v["ok"] for v in self.verification),
        }


def extend_pipeline(ortho, f, extension=None, family=DEFAULT_FAMILY, budget=DEFAULT_CLONE_BUDGET, size_cap=DEFAULT_SIZE_CAP):
    """Interpolate an arbitrary unary ``f`` on ``L0`` by an orthopolynomial
    over an ortho-extension of ``L0``.

    Steps: lift ``f`` to monotone ``fbar, g1, g2`` on ``L0'``; find
    ``L1 ⊵ L0'`` with lattice polynomials ``p, q1, q2`` interpolating them
    (``extension`` supplies a ⊴-certified ``L0' -> L1``, otherwise bounded
    search over ``family``); build ``L = ortho(L1, L0)``; assemble
    ``h = p(q1(x) v q2(x^perp))`` with coefficients carried into ``L``; and
    verify ``h(x) = f(x)`` for every ``x`` in ``L0``.  Failures are recorded
    in the returned trace rather than raised.
    """
    trace = PipelineTrace()
    try:
        lift = antichain_lift(ortho, f, size_cap)
    except SizeLimitExceeded as exc:
        return trace.fail("lift", str(exc))
    trace.lift = lift
    tables = [lift.fbar, lift.g1, lift.g2]
    lprime = lift.lprime.result
    if extension is not None:
        if not extension.has("Triangle"):
            return trace.fail("told", "supplied extension is not certified ⊴")
        if extension.source != lprime:
            return trace.fail("told", "supplied extension does not start at L0'")
        emb = Embedding(lprime, extension.target, extension.map, extension.certificates)
        terms = []
        statuses = []
        for table in tables:
            moved = FunctionTable(emb.target, 1, {(emb.map[a[0]],): emb.map[v] for a, v in table.entries.items()})
            res = interpolate_unary(emb.target, Mode.LATTICE, moved, budget)
            statuses.append(res.status)
            if not res.found:
                break
            terms.append(res.term)
        trace.attempts.append(ExtensionAttempt("supplied", emb.target.size, statuses))
        label = "supplied"
        if len(terms) < 3:
            emb = None
    else:
        emb, terms, label, attempts = told_search(lprime, tables, family, budget, size_cap)
        trace.attempts.extend(attempts)
    if emb is None:
        return trace.fail("told", "no interpolating extension found within budget")
    trace.l1, trace.l1_embedding, trace.extension = emb.target, emb, label
    p, q1, q2 = terms
    trace.p, trace.q1, trace.q2 = p, q1, q2

    try:
        e01, _ = check_triangle(lift.base.then(emb))
        result = ortho_construction(e01, size_cap)
    except SizeLimitExceeded as exc:
        return trace.fail("ortho", str(exc))
    trace.ortho = result
    big = result.result
    h = transport(assemble_h(p, q1, q2), result.embeddings["L1→L"])
    trace.h = h

    e0 = result.embeddings["L0→L"]
    ok = True
    for x in range(ortho.size):
        got = evaluate(h, big, [e0.map[x]])
        want = e0.map[f.entries[(x,)]]
        trace.verification.append({"x": ortho.names[x], "h": big.names[got], "f": big.names[want], "ok": got == want})
        ok &= got == want
    if not ok:
        return trace.fail("verify", "h disagrees with f")
    trace.status = "success"
    return trace


def verify_trace(trace, f):
    """Independent re-check of a successful trace: ``h(x) == f(x)`` on ``L0``."""
    if not trace.ok:
        return False
    big = trace.ortho.result
    e0 = trace.ortho.embeddings["L0→L"]
    ortho = trace.lift.ortho
    return all(evaluate(trace.h, big, [e0.map[x]]) == e0.map[f.entries[(x,)]] for x in range(ortho.size))


# n-ary reduction


@dataclass
class NaryResult:
    status: str
    term: object = None
    ambient: object = None
    base: Embedding | None = None  # L -> ambient
    witness: object = None  # PowerWitness
    extension: str | None = None
    star_identity: bool | None = None
    verification: list = field(default_factory=list)
    attempts: list = field(default_factory=list)

    @property
    def found(self):
        return self.status == FOUND

    def to_json(self):
        return {
            "status": self.status,
            "term": _term_json(self.term),
            "extension": self.extension,
            "ambient": None if self.ambient is None else _lattice_summary(self.ambient),
            "star_identity": self.star_identity,
            "verification": list(self.verification),
            "attempts": [a.to_json() for a in self.attempts],
        }


def nary_reduce(lattice, g, budget=DEFAULT_CLONE_BUDGET, family=DEFAULT_FAMILY, generation_cap=16, size_cap=DEFAULT_SIZE_CAP, use_perp=True):
    """Interpolate an ``n``-ary partial ``g`` through unary interpolation.

    ``S`` is the sublattice (closed under perp for ortholattices when
    ``use_perp``) generated by the coordinates of ``g``'s domain; a power
    witness embeds ``S^n`` as ``S'`` in an extension ``M`` of ``lattice``.
    With ``f(iota(s)) = g(s)`` and the coordinate maps
    ``iota_l(s) = iota(0,..,s,..,0)`` interpolated by unary polynomials
    ``p`` and ``q_l``, the result is ``p(q_1(x0) v ... v q_n(x{n-1}))``,
    verified against ``g`` on its whole domain.  Coefficients are named in
    the returned ``ambient`` lattice.
    """
    n = g.arity
    if n == 1:
        mode = Mode.ORTHO if getattr(lattice, "perp", None) is not None and use_perp else Mode.LATTICE
        res = interpolate_unary(lattice, mode, g, budget)
        out = NaryResult(res.status, res.term, lattice, Embedding.identity(lattice))
        out.star_identity = True
        return out
    coords = {a for args in g.entries for a in args}
    perp = getattr(lattice, "perp", None) if use_perp else None
    try:
        s_elems = generated_sublattice(lattice, coords, perp=perp, cap=generation_cap)
    except OverflowError as exc:
        raise GenerationTooLarge(str(exc), cap=generation_cap) from None
    pw = power_witness(lattice, s_elems, n, size_cap)
    sub_index = {v: i for i, v in enumerate(pw.sub_map)}
    tuple_index = {t: i for i, t in enumerate(pw.tuples)}

    # f on iota(S^n) and the coordinate maps, as tables on the power-witness ambient
    f_table = FunctionTable.unary(
        pw.ambient,
        {pw.power.map[tuple_index[tuple(sub_index[a] for a in args)]]: pw.base.map[v] for args, v in g.entries.items()},
    )
    coord_tables = [
        FunctionTable.unary(pw.ambient, {pw.base.map[pw.sub_map[s]]: pw.coords[l][s] for s in range(pw.sub.size)})
        for l in range(n)
    ]
    emb, terms, label, attempts = told_search(pw.ambient, [f_table] + coord_tables, family, budget, size_cap)
    result = NaryResult(UNKNOWN, witness=pw, attempts=attempts)
    if emb is None:
        statuses = [s for a in attempts for s in a.statuses]
        if statuses and all(a.statuses and a.statuses[-1] == NOT_REPRESENTABLE for a in attempts if a.size >= 0):
            result.status = NOT_REPRESENTABLE
        return result
    ambient = emb.target
    base = pw.base.then(emb)
    p, qs = terms[0], terms[1:]
    inner = substitute(qs[0], {0: Var(0)})
    for l in range(1, n):
        inner = Join(inner, substitute(qs[l], {0: Var(l)}))
    term = substitute(p, {0: inner})
    result.term, result.ambient, result.base, result.extension = term, ambient, base, label

    ok = True
    for args, v in sorted(g.entries.items()):
        got = evaluate(term, ambient, [base.map[a] for a in args])
        want = base.map[v]
        result.verification.append(
            {"args": [lattice.names[a] for a in args], "value": ambient.names[got], "expected": ambient.names[want], "ok": got == want}
        )
        ok &= got == want
    result.star_identity = star_identity_holds(pw)
    result.status = FOUND if ok else UNKNOWN
    return result


def star_identity_holds(pw):
    """``iota(s_1..s_n) = iota_1(s_1) v ... v iota_n(s_n)`` for all of ``S^n``."""
    amb = pw.ambient
    for i, t in enumerate(pw.tuples):
        acc = amb.bottom
        for l, s in enumerate(t):
            acc = amb.join(acc, pw.coords[l][s])
        if acc != pw.power.map[i]:
            return False
    return True


# Finite analogue of the iterated construction


@dataclass
class CoverEntry:
    index: int
    route: str  # "direct", "extension" or "uncovered"
    h: object = None
    stage: int | None = None
    verified: bool = False

    def to_json(self, names=None):
        return {
            "index": self.index,
            "route": self.route,
            "stage": self.stage,
            "h": _term_json(self.h),
            "verified": self.verified,
        }


@dataclass
class CoverReport:
    entries: list
    final: object  # the final ortholattice
    base: Embedding  # L0 -> final
    stages: list  # sizes of the intermediate lattices

    @property
    def covered(self):
        return [e.index for e in self.entries if e.route != "uncovered"]

    @property
    def complete(self):
        return all(e.route != "uncovered" for e in self.entries)

    def to_json(self):
        return {
            "covered": self.covered,
            "complete": self.complete,
            "final_size": self.final.size,
            "stage_sizes": list(self.stages),
            "entries": [e.to_json() for e in self.entries],
        }


def iterate_cover(ortho, targets, family=DEFAULT_FAMILY, budget=DEFAULT_CLONE_BUDGET, size_cap=DEFAULT_SIZE_CAP):
    """Cover a list of unary functions on ``L0`` with one ortho-extension.

    Each target is first tried as an orthopolynomial over ``L0`` itself.
    Otherwise the current lattice ``L_i`` (initially ``L0``) is extended to
    ``hsum(L_i, L0 x L0)`` and then by bounded search to ``L_{i+1}`` over
    which the lifted tables interpolate, keeping ``L0 ⊴ L_i`` throughout.
    The final ortholattice is ``ortho(L_k, L0)``; every witness is carried
    there along the composed embeddings and re-verified on all of ``L0``.
    """
    n = ortho.size
    cur = ortho.lattice
    e_cur = check_triangle(Embedding(ortho, cur, range(n)))[0]
    steps = []  # embeddings L_i -> L_{i+1}
    pending = []  # (entry, stage index, p, q1, q2) with coefficients named in L_{stage}
    entries = []
    for idx, f in enumerate(targets):
        direct = interpolate_unary(ortho, Mode.ORTHO, f, budget)
        if direct.found:
            entries.append(CoverEntry(idx, "direct", direct.term))
            continue
        prod = product(ortho, ortho, size_cap)
        try:
            hs = horizontal_sum(cur, prod.result, size_cap)
        except SizeLimitExceeded:
            entries.append(CoverEntry(idx, "uncovered"))
            continue
        base_map = [hs.embeddings["A→L"].map[e_cur.map[x]] for x in range(n)]
        _, fbar, g1, g2 = _lift_tables(ortho, f, base_map, hs.embeddings["B→L"].map, hs.result)
        emb, terms, _, _ = told_search(hs.result, [fbar, g1, g2], family, budget, size_cap)
        if emb is None:
            entries.append(CoverEntry(idx, "uncovered"))
            continue
        step = hs.embeddings["A→L"].then(emb)
        steps.append(check_triangle(step)[0])
        cur = emb.target
        e_cur = check_triangle(e_cur.then(steps[-1]))[0]
        entry = CoverEntry(idx, "extension", stage=len(steps))
        entries.append(entry)
        pending.append((entry, len(steps), terms))

    result = ortho_construction(e_cur, size_cap)
    final = result.result
    to_final = result.embeddings["L1→L"]
    e0 = result.embeddings["L0→L"]
    for entry, stage, (p, q1, q2) in pending:
        carry = steps[stage:]
        emb = to_final if not carry else carry[0].then(to_final) if len(carry) == 1 else _compose(carry).then(to_final)
        entry.h = transport(assemble_h(p, q1, q2), emb)
    for entry in entries:
        if entry.route == "direct":
            entry.h = transport(entry.h, e0)
        if entry.h is not None:
            f = targets[entry.index]
            entry.verified = all(
                evaluate(entry.h, final, [e0.map[x]]) == e0.map[f.entries[(x,)]] for x in range(n)
            )
    return CoverReport(entries, final, e0, [s.target.size for s in steps])


def _compose(steps):
    acc = steps[0]
    for s in steps[1:]:
        acc = acc.then(s)
    return acc


def all_unary_functions(lattice):
    """Every total unary table on ``lattice`` (``|L|^|L|`` of them)."""
    return [FunctionTable.total(lattice, v) for v in cartesian(range(lattice.size), repeat=lattice.size)]
