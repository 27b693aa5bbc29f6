"""Building new lattices from old ones.

Every construction re-derives its full order matrix and re-validates the
result from scratch; nothing is trusted incrementally.  Glued unions are
additionally cross-checked against the brute-force transitive closure of
the two input orders.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as cartesian

import numpy as np

from .exceptions import OrderMismatch, PreconditionNotCertified, SizeLimitExceeded
from .lattice import FiniteLattice, induced_sublattice, transitive_closure
from .morphisms import (
    TRIANGLE,
    TRIANGLE_DUAL,
    Embedding,
    check_convex,
    check_sub01,
    check_subortholattice,
    check_triangle,
    check_triangle_dual,
)
from .ortho import Ortholattice, validate_ortho

DEFAULT_SIZE_CAP = 4096

SHARED, LEFT, RIGHT = "shared", "left", "right"


@dataclass(frozen=True)
class AmalgamElement:
    tag: str
    index: int
    name: str


@dataclass
class ConstructionResult:
    result: FiniteLattice
    embeddings: dict = field(default_factory=dict)
    elements: tuple = ()
    oracle_order: np.ndarray | None = None
    maps: dict = field(default_factory=dict)


def _check_size(n, cap):
    if cap is not None and n > cap:
        raise SizeLimitExceeded(f"construction would have {n} elements (cap {cap})", size=n, cap=cap)


class _Namer:
    """Hands out unique names, falling back to a prefix and then to ``~`` suffixes."""

    def __init__(self, reserved=()):
        self.taken = set(reserved)

    def __call__(self, name, fallback_prefix=""):
        candidate = name
        if candidate in self.taken and fallback_prefix and not name.startswith(fallback_prefix):
            candidate = fallback_prefix + name
        while candidate in self.taken:
            candidate += "~"
        self.taken.add(candidate)
        return candidate


def product(a, b, size_cap=DEFAULT_SIZE_CAP):
    """Componentwise product; element ``(i, j)`` has id ``i * |b| + j``."""
    na, nb = a.size, b.size
    _check_size(na * nb, size_cap)
    names = [f"({x},{y})" for x in a.names for y in b.names]
    leq = (a.leq[:, None, :, None] & b.leq[None, :, None, :]).reshape(na * nb, na * nb)
    lat = FiniteLattice(names, leq)
    ids = np.arange(na * nb)
    return ConstructionResult(
        lat,
        maps={"pi_left": tuple(int(v) for v in ids // nb), "pi_right": tuple(int(v) for v in ids % nb)},
    )


def power(s, n, size_cap=DEFAULT_SIZE_CAP):
    """Flat ``n``-fold product ``s^n`` with names ``(s1,...,sn)``; ids in
    lexicographic order of the tuples."""
    _check_size(s.size**n, size_cap)
    tuples = list(cartesian(range(s.size), repeat=n))
    names = ["(" + ",".join(s.names[v] for v in t) + ")" for t in tuples]
    arr = np.array(tuples, dtype=np.intp).reshape(len(tuples), n)
    leq = np.ones((len(tuples), len(tuples)), dtype=bool)
    for k in range(n):
        leq &= s.leq[arr[:, k][:, None], arr[:, k][None, :]]
    return FiniteLattice(names, leq), tuples


def horizontal_sum(a, b, size_cap=DEFAULT_SIZE_CAP):
    """Glue ``a`` and ``b`` at their bounds; interiors are mutually incomparable.

    Elements of ``a`` keep their ids; interior elements of ``b`` follow in
    ``b`` order.  Both inclusions are returned ⊴-certified.
    """
    interior = [j for j in range(b.size) if j not in (b.bottom, b.top)]
    n = a.size + len(interior)
    _check_size(n, size_cap)
    namer = _Namer(a.names)
    names = list(a.names) + [namer(b.names[j], "R:") for j in interior]
    pos_b = np.empty(b.size, dtype=np.intp)
    pos_b[b.bottom], pos_b[b.top] = a.bottom, a.top
    pos_b[interior] = np.arange(a.size, n)
    leq = np.zeros((n, n), dtype=bool)
    leq[: a.size, : a.size] = a.leq
    leq[np.ix_(pos_b, pos_b)] |= b.leq
    leq[a.bottom, :] = True
    leq[:, a.top] = True
    lat = FiniteLattice(names, leq)
    ea, _ = check_triangle(Embedding(a, lat, range(a.size)))
    eb, _ = check_triangle(Embedding(b, lat, pos_b))
    elements = tuple(AmalgamElement(LEFT if i < a.size else RIGHT, i if i < a.size else int(interior[i - a.size]), names[i]) for i in range(n))
    return ConstructionResult(lat, embeddings={"A→L": ea, "B→L": eb}, elements=elements)


def glued_union(e1, e2, size_cap=DEFAULT_SIZE_CAP, left_prefix="L:", right_prefix="R:"):
    """Union of ``L1`` and ``L2`` glued along a common ``L0``.

    ``e1`` must certify ``L0 ⊴ L1`` and ``e2`` must certify ``L0 ⊴-dual L2``
    over the same ``L0``.  The order is built from the three-case
    characterization (``x <= y`` in ``L1``, in ``L2``, or ``x <=_2 z <=_1 y``
    for some ``z`` in ``L0``) and must coincide with the transitive closure
    of the union of both orders; meets and joins from the three-case formulas
    must coincide with the exhaustively computed ones.  Any disagreement
    raises :class:`OrderMismatch`.

    Result ids: all of ``L1`` in ``L1`` order, then ``L2`` minus ``L0``.
    Shared elements keep their ``L0`` names; the others get ``left_prefix``
    or ``right_prefix`` (empty prefixes fall back to ``L:``/``R:`` on clashes).
    """
    if not e1.has(TRIANGLE):
        raise PreconditionNotCertified("first embedding is not certified ⊴")
    if not e2.has(TRIANGLE_DUAL):
        raise PreconditionNotCertified("second embedding is not certified ⊴-dual")
    if e1.source is not e2.source and e1.source != e2.source:
        raise PreconditionNotCertified("embeddings do not share their source L0")
    l0, l1, l2 = e1.source, e1.target, e2.target
    n1 = l1.size
    extra = [j for j in range(l2.size) if e2.preimage(j) is None]
    n = n1 + len(extra)
    _check_size(n, size_cap)

    pos2 = np.empty(l2.size, dtype=np.intp)
    for z in range(l0.size):
        pos2[e2.map[z]] = e1.map[z]
    pos2[extra] = np.arange(n1, n)
    m1, m2 = e1.array, e2.array

    # three-case characterization
    leq = np.zeros((n, n), dtype=bool)
    leq[:n1, :n1] = l1.leq
    leq[np.ix_(pos2, pos2)] |= l2.leq
    via = (l2.leq[:, m2].astype(np.float32) @ l1.leq[m1, :].astype(np.float32)) > 0
    leq[pos2, :n1] |= via

    # brute-force oracle
    union = np.zeros((n, n), dtype=bool)
    union[:n1, :n1] = l1.leq
    union[np.ix_(pos2, pos2)] |= l2.leq
    oracle = transitive_closure(union)
    if not np.array_equal(leq, oracle):
        x, y = (int(v) for v in np.argwhere(leq != oracle)[0])
        raise OrderMismatch("characterized order differs from transitive closure", x=x, y=y)

    namer = _Namer()
    names = [None] * n
    for z in range(l0.size):
        names[m1[z]] = namer(l0.names[z])
    for i in range(n1):
        if names[i] is None:
            names[i] = namer(left_prefix + l1.names[i], "L:")
    for j in extra:
        names[pos2[j]] = namer(right_prefix + l2.names[j], "R:")
    lat = FiniteLattice(names, oracle)

    _, pi = check_triangle(e1)
    _, sigma = check_triangle_dual(e2)
    pi_a = m2[np.array(pi.pi)]  # projection of L1 elements into L2 ids
    sigma_a = m1[np.array(sigma.pi)]  # least L0 element above, as L1 ids
    meet = np.full((n, n), -1, dtype=np.intp)
    join = np.full((n, n), -1, dtype=np.intp)
    meet[:n1, :n1], join[:n1, :n1] = l1.meet_table, l1.join_table
    meet[np.ix_(pos2, pos2)] = pos2[l2.meet_table]
    join[np.ix_(pos2, pos2)] = pos2[l2.join_table]
    left = [i for i in range(n1) if e1.preimage(i) is None]
    if left and extra:
        li, ej = np.array(left), np.array(extra)
        cross_meet = pos2[l2.meet_table[pi_a[li][:, None], ej[None, :]]]
        cross_join = l1.join_table[li[:, None], sigma_a[ej][None, :]]
        meet[np.ix_(li, pos2[ej])] = cross_meet
        meet[np.ix_(pos2[ej], li)] = cross_meet.T
        join[np.ix_(li, pos2[ej])] = cross_join
        join[np.ix_(pos2[ej], li)] = cross_join.T
    for label, formula, exact in (("meet", meet, lat.meet_table), ("join", join, lat.join_table)):
        if not np.array_equal(formula, exact):
            x, y = (int(v) for v in np.argwhere(formula != exact)[0])
            raise OrderMismatch(f"{label} formula disagrees with exhaustive {label}", x=x, y=y)

    elements = []
    for i in range(n):
        if i < n1:
            z = e1.preimage(i)
            elements.append(AmalgamElement(SHARED, z, names[i]) if z is not None else AmalgamElement(LEFT, i, names[i]))
        else:
            elements.append(AmalgamElement(RIGHT, int(extra[i - n1]), names[i]))
    embeddings = {
        "L0→L": check_sub01(Embedding(l0, lat, m1)),
        "L1→L": check_sub01(Embedding(l1, lat, range(n1))),
        "L2→L": check_sub01(Embedding(l2, lat, pos2)),
    }
    return ConstructionResult(lat, embeddings=embeddings, elements=tuple(elements), oracle_order=oracle)


def _require_ortho_triangle(e):
    if not e.has(TRIANGLE):
        raise PreconditionNotCertified("L0 -> L1 is not certified ⊴")
    if not isinstance(e.source, Ortholattice):
        raise PreconditionNotCertified("L0 carries no orthocomplement")


def dual_copy(e, prime="'"):
    """Order-reversed copy ``L2`` of ``L1`` glued to ``L0`` along ``z -> z^perp``.

    ``L2`` id ``i`` is the image of ``L1`` element ``i`` under the dual
    isomorphism ``iota``; elements outside ``L0`` are named with a trailing
    prime.  The returned ``"L0→L2"`` embedding is ⊴-dual certified.
    """
    _require_ortho_triangle(e)
    l0, l1 = e.source, e.target
    perp0 = l0.perp
    namer = _Namer(l0.names)
    names = []
    for i in range(l1.size):
        w = e.preimage(i)
        names.append(l0.names[perp0[w]] if w is not None else namer(l1.names[i] + prime, "R:"))
    l2 = FiniteLattice(names, l1.leq.T)
    e2, _ = check_triangle_dual(Embedding(l0, l2, [e.map[perp0[z]] for z in range(l0.size)]))
    return ConstructionResult(l2, embeddings={"L0→L2": e2}, maps={"iota": tuple(range(l1.size))})


def ortho_construction(e, size_cap=DEFAULT_SIZE_CAP):
    """The ortholattice ``ortho(L1, L0)``: ``L1`` glued to its dual copy.

    The orthocomplement is ``iota`` on ``L1`` and its inverse on the copy.
    Returns the validated :class:`Ortholattice` with ``L0`` certified as a
    convex subortholattice and ``L1``, ``L2`` certified {0,1}-sublattices.
    """
    _require_ortho_triangle(e)
    l0, l1 = e.source, e.target
    _check_size(2 * l1.size - l0.size, size_cap)
    dc = dual_copy(e)
    glued = glued_union(e, dc.embeddings["L0→L2"], size_cap=size_cap, left_prefix="", right_prefix="")
    pos2 = glued.embeddings["L2→L"].array
    n1 = l1.size
    perp = np.empty(glued.result.size, dtype=np.intp)
    perp[:n1] = pos2[:n1]
    for j in range(l1.size):
        if pos2[j] >= n1:
            perp[pos2[j]] = j
    ortho = validate_ortho(glued.result, perp)
    emb0 = Embedding(l0, ortho, e.map)
    emb0 = check_convex(check_subortholattice(emb0))
    embeddings = {
        "L0→L": emb0,
        "L1→L": check_sub01(Embedding(l1, ortho, range(n1))),
        "L2→L": check_sub01(Embedding(dc.result, ortho, pos2)),
    }
    return ConstructionResult(
        ortho,
        embeddings=embeddings,
        elements=glued.elements,
        oracle_order=glued.oracle_order,
        maps={"iota": tuple(int(v) for v in pos2), "L2": dc.result},
    )


def lemma_step_failures(result, e):
    """Elements ``x`` of ``L1`` outside ``L0`` with ``x v x^perp != 1`` in ``ortho(L1, L0)``."""
    ortho = result.result
    emb = result.embeddings["L1→L"]
    bad = []
    for x in range(e.target.size):
        if e.preimage(x) is None:
            y = emb.map[x]
            if ortho.join(y, ortho.orth(y)) != ortho.top or ortho.meet(y, ortho.orth(y)) != ortho.bottom:
                bad.append(x)
    return bad


@dataclass
class PowerWitness:
    sub: FiniteLattice  # S as a lattice
    sub_map: tuple  # S ids -> L ids
    power_lattice: FiniteLattice  # S^n with flat tuple names
    tuples: list  # S^n id -> tuple of S ids
    square: FiniteLattice  # S^m realised by iterated squaring, m = 2^k >= n
    ambient: FiniteLattice
    base: Embedding  # L -> ambient
    power: Embedding  # S^n -> ambient
    coords: list  # coords[l][s] = ambient id of (0,..,s,..,0), s at position l

    @property
    def arity(self):
        return len(self.coords)


def _nested_index(t, size):
    if len(t) == 1:
        return t[0]
    half = len(t) // 2
    return _nested_index(t[:half], size) * size ** half + _nested_index(t[half:], size)


def power_witness(lattice, elements, n, size_cap=DEFAULT_SIZE_CAP):
    """Certified {0,1}-embedding of ``S^n`` into an extension of ``lattice``.

    ``S`` is the sublattice on ``elements``.  ``S^m`` (``m`` the least power of
    two ``>= n``) is built by iterated squaring; ``S^n`` sits inside it by
    repeating its last coordinate.  The ambient extension is the horizontal
    sum of ``lattice`` and ``S^m``, so ``lattice ⊴ ambient``.
    """
    sub, sub_map = induced_sublattice(lattice, elements)
    m = 1
    square = sub
    while m < n:
        _check_size(square.size**2, size_cap)
        square = product(square, square, size_cap).result
        m *= 2
    _check_size(lattice.size + square.size - 2, size_cap)
    flat, tuples = power(sub, n, size_cap)
    hs = horizontal_sum(lattice, square, size_cap)
    ambient = hs.result
    into_square = hs.embeddings["B→L"]
    padded = [_nested_index(t + (t[-1],) * (m - n), sub.size) for t in tuples]
    emb = check_sub01(Embedding(flat, ambient, [into_square.map[i] for i in padded]))
    base = hs.embeddings["A→L"]
    index_of = {t: i for i, t in enumerate(tuples)}
    coords = []
    for pos in range(n):
        row = []
        for s in range(sub.size):
            t = tuple(s if k == pos else sub.bottom for k in range(n))
            row.append(emb.map[index_of[t]])
        coords.append(tuple(row))
    return PowerWitness(sub, sub_map, flat, tuples, square, ambient, base, emb, coords)


def compose_all(steps):
    """Compose a list of embeddings left to right."""
    acc = steps[0]
    for step in steps[1:]:
        acc = acc.then(step)
    return acc


def chain_union(tower, base=None):
    """Union of a finite increasing chain ``L_0 -> L_1 -> ... -> L_k``.

    At finite length the union is the last lattice; the result carries the
    composed embeddings ``"L{i}→L"``, re-certified: {0,1} always, and ⊴ when
    every step was ⊴-certified.  An empty tower needs ``base`` and yields the
    identity.
    """
    if not tower:
        if base is None:
            raise ValueError("an empty tower needs a base lattice")
        return ConstructionResult(base, embeddings={"L0→L": check_sub01(Embedding.identity(base))})
    for step in tower:
        if not step.has("Sub01"):
            raise PreconditionNotCertified("every step must be {0,1}-certified")
    all_triangle = all(step.has(TRIANGLE) for step in tower)
    embeddings = {}
    for i in range(len(tower)):
        comp = check_sub01(compose_all(tower[i:]))
        if all_triangle:
            comp, _ = check_triangle(comp)
        embeddings[f"L{i}→L"] = comp
    final = tower[-1].target
    embeddings[f"L{len(tower)}→L"] = check_sub01(Embedding.identity(final))
    return ConstructionResult(final, embeddings=embeddings)


def ortho_tower(e0, tower, size_cap=DEFAULT_SIZE_CAP):
    """Apply ``ortho(., L0)`` stagewise to a ⊴-tower over ``L0``.

    ``e0`` certifies ``L0 ⊴ tower[0].source``.  Returns the list of
    construction results and the induced embeddings between consecutive
    ortholattices (each {0,1}- and subortho-certified).
    """
    stages = [e0]
    for step in tower:
        comp, _ = check_triangle(stages[-1].then(step))
        stages.append(comp)
    results = [ortho_construction(s, size_cap) for s in stages]
    maps = []
    for i, step in enumerate(tower):
        lo, hi = results[i], results[i + 1]
        iota_lo, iota_hi = lo.maps["iota"], hi.maps["iota"]
        n1 = step.source.size
        m = [0] * lo.result.size
        for x in range(n1):
            m[x] = step.map[x]
            m[iota_lo[x]] = iota_hi[step.map[x]]
        maps.append(check_subortholattice(Embedding(lo.result, hi.result, m)))
    return results, maps


def ortho_commutes_with_union(e0, tower, size_cap=DEFAULT_SIZE_CAP):
    """Check ``ortho(union T, L0) == union ortho(T, L0)`` for a finite tower.

    Besides comparing the two final ortholattices, every composed map from a
    stage into the union must agree with the map read off from element tags.
    """
    direct = ortho_construction(check_triangle(e0.then(compose_all(tower)))[0] if tower else e0, size_cap)
    results, maps = ortho_tower(e0, tower, size_cap)
    union = chain_union(maps, base=results[0].result)
    if union.result != direct.result:
        return False
    lifts = [compose_all(tower[i:]) if tower[i:] else None for i in range(len(tower) + 1)]
    for i, res in enumerate(results):
        emb = union.embeddings[f"L{i}→L"]
        lift = lifts[i]
        for x, el in enumerate(res.elements):
            if el.tag == RIGHT:
                src = el.index  # L_i id whose iota this is
                tgt_l1 = lift.map[src] if lift is not None else src
                expected = direct.maps["iota"][tgt_l1]
            else:
                expected = lift.map[x] if lift is not None else x
            if emb.map[x] != expected:
                return False
    return True
