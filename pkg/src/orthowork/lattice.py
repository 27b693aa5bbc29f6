"""Finite posets and bounded lattices stored as dense order matrices.

Elements are the integers ``0..n-1``; names are for display only.  The order
lives in a boolean matrix ``leq`` with ``leq[x, y]`` true iff ``x <= y``, and
meet/join tables are computed once at validation time.
"""
from __future__ import annotations

from functools import cached_property

import numpy as np

from .exceptions import (
    DuplicateName,
    MissingBounds,
    NoJoin,
    NoMeet,
    NotAPartialOrder,
    NotASublattice,
)


def transitive_closure(rel):
    """Reflexive-transitive closure of a square boolean relation (Warshall)."""
    closure = np.array(rel, dtype=bool, copy=True)
    np.fill_diagonal(closure, True)
    for k in range(closure.shape[0]):
        closure |= closure[:, k : k + 1] & closure[k : k + 1, :]
    return closure


def relation_from_covers(n, covers):
    rel = np.zeros((n, n), dtype=bool)
    for lo, hi in covers:
        rel[lo, hi] = True
    return transitive_closure(rel)


def _frozen(arr):
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


def _check_names(names):
    seen = {}
    for i, name in enumerate(names):
        if name in seen:
            raise DuplicateName(f"element name {name!r} used twice", x=seen[name], y=i)
        seen[name] = i


def check_partial_order(leq):
    """Raise :class:`NotAPartialOrder` with a witness if ``leq`` is not one."""
    n = leq.shape[0]
    if leq.shape != (n, n):
        raise NotAPartialOrder("order relation must be a square matrix")
    missing = np.flatnonzero(~np.diagonal(leq))
    if missing.size:
        x = int(missing[0])
        raise NotAPartialOrder(f"not reflexive at {x}", axiom="reflexive", x=x, y=x)
    both = leq & leq.T
    np.fill_diagonal(both, False)
    if both.any():
        x, y = (int(v) for v in np.argwhere(both)[0])
        raise NotAPartialOrder(
            f"not antisymmetric: {x} <= {y} <= {x}", axiom="antisymmetric", x=x, y=y
        )
    # float32 matmul is exact for path counts below 2**24
    m = leq.astype(np.float32)
    bad = ((m @ m) > 0) & ~leq
    if bad.any():
        x, z = (int(v) for v in np.argwhere(bad)[0])
        raise NotAPartialOrder(
            f"not transitive: {x} <= ... <= {z} but not {x} <= {z}",
            axiom="transitive",
            x=x,
            y=z,
        )


class Poset:
    """A finite partial order, possibly without bounds."""

    def __init__(self, names, leq):
        self.names = tuple(str(s) for s in names)
        _check_names(self.names)
        leq = np.asarray(leq, dtype=bool)
        check_partial_order(leq)
        self.leq = _frozen(leq)

    @classmethod
    def from_covers(cls, names, covers):
        return cls(names, relation_from_covers(len(names), covers))

    def __len__(self):
        return len(self.names)

    @property
    def size(self):
        return len(self.names)

    def index(self, name):
        return self.names.index(name)

    def lower_bounds(self, elements):
        mask = np.ones(self.size, dtype=bool)
        for a in elements:
            mask &= self.leq[:, a]
        return mask

    def upper_bounds(self, elements):
        mask = np.ones(self.size, dtype=bool)
        for a in elements:
            mask &= self.leq[a, :]
        return mask


def _glb_table(leq):
    """Meet table via exhaustive lower-bound scan; ``-1`` where no glb exists."""
    n = leq.shape[0]
    down_count = leq.sum(axis=0)
    table = np.empty((n, n), dtype=np.intp)
    for x in range(n):
        lower = leq[:, x][:, None] & leq  # lower[z, y]: z below x and y
        score = np.where(lower, down_count[:, None], -1)
        cand = score.argmax(axis=0)
        ok = lower.any(axis=0) & (down_count[cand] == lower.sum(axis=0))
        table[x] = np.where(ok, cand, -1)
    return table


class FiniteLattice:
    """A validated finite bounded lattice.

    Construction checks the partial-order axioms, the bounds and the
    existence of every binary meet and join, raising the first failure with a
    witness (``NotAPartialOrder``, ``MissingBounds``, ``NoMeet``, ``NoJoin``).
    """

    def __init__(self, names, leq, bottom=None, top=None):
        self.names = tuple(str(s) for s in names)
        _check_names(self.names)
        leq = np.asarray(leq, dtype=bool)
        n = len(self.names)
        if leq.shape != (n, n):
            raise NotAPartialOrder(f"order matrix has shape {leq.shape}, expected {(n, n)}")
        check_partial_order(leq)
        bottoms = np.flatnonzero(leq.all(axis=1))
        tops = np.flatnonzero(leq.all(axis=0))
        if n == 0 or not bottoms.size or not tops.size:
            raise MissingBounds("no least or no greatest element")
        self.bottom = int(bottoms[0])
        self.top = int(tops[0])
        if bottom is not None and int(bottom) != self.bottom:
            raise MissingBounds(f"declared bottom {bottom} is not least", x=int(bottom))
        if top is not None and int(top) != self.top:
            raise MissingBounds(f"declared top {top} is not greatest", x=int(top))
        self.leq = _frozen(leq)

        meet = _glb_table(leq)
        bad = np.argwhere(meet < 0)
        if bad.size:
            x, y = (int(v) for v in bad[0])
            raise NoMeet(f"{self.names[x]} and {self.names[y]} have no meet", x=x, y=y)
        join = _glb_table(leq.T)
        bad = np.argwhere(join < 0)
        if bad.size:
            x, y = (int(v) for v in bad[0])
            raise NoJoin(f"{self.names[x]} and {self.names[y]} have no join", x=x, y=y)
        self.meet_table = _frozen(meet)
        self.join_table = _frozen(join)

    # basic queries

    def __len__(self):
        return len(self.names)

    @property
    def size(self):
        return len(self.names)

    @property
    def elements(self):
        return range(len(self.names))

    def __repr__(self):
        return f"{type(self).__name__}(size={self.size}, names={list(self.names)!r})"

    def __eq__(self, other):
        if not isinstance(other, FiniteLattice):
            return NotImplemented
        return (
            type(self) is type(other)
            and self.names == other.names
            and np.array_equal(self.leq, other.leq)
            and self._extra_eq(other)
        )

    def _extra_eq(self, other):
        return True

    __hash__ = object.__hash__

    @cached_property
    def _name_index(self):
        return {name: i for i, name in enumerate(self.names)}

    def index(self, name):
        try:
            return self._name_index[name]
        except KeyError:
            raise KeyError(f"no element named {name!r}") from None

    def le(self, x, y):
        return bool(self.leq[x, y])

    def meet(self, x, y):
        return int(self.meet_table[x, y])

    def join(self, x, y):
        return int(self.join_table[x, y])

    def dual(self):
        return FiniteLattice(self.names, self.leq.T)

    def as_poset(self):
        return Poset(self.names, self.leq)

    # derived structure

    @cached_property
    def covers(self):
        """Boolean matrix: ``covers[x, y]`` iff ``y`` covers ``x``."""
        strict = self.leq.copy()
        np.fill_diagonal(strict, False)
        s = strict.astype(np.float32)
        return _frozen(strict & ~((s @ s) > 0))

    def cover_pairs(self):
        return [(int(x), int(y)) for x, y in np.argwhere(self.covers)]

    @cached_property
    def heights(self):
        """Length of the longest chain from the bottom to each element."""
        order = np.argsort(self.leq.sum(axis=0), kind="stable")
        height = np.zeros(self.size, dtype=int)
        cov = self.covers
        for y in order:
            below = np.flatnonzero(cov[:, y])
            if below.size:
                height[y] = height[below].max() + 1
        return tuple(int(h) for h in height)

    def is_chain(self):
        return bool((self.leq | self.leq.T).all())


def validate_lattice(poset, bottom=None, top=None):
    """Validate a :class:`Poset` (or anything with ``names``/``leq``) as a lattice."""
    return FiniteLattice(poset.names, poset.leq, bottom=bottom, top=top)


def dual(lattice):
    return lattice.dual()


def subset_sup(lattice, elements):
    """Least upper bound of a subset; the empty sup is the bottom."""
    acc = lattice.bottom
    for a in elements:
        acc = lattice.join_table[acc, a]
    return int(acc)


def subset_inf(lattice, elements):
    """Greatest lower bound of a subset; the empty inf is the top."""
    acc = lattice.top
    for a in elements:
        acc = lattice.meet_table[acc, a]
    return int(acc)


# Standard shapes


def chain(n):
    if n < 1:
        raise ValueError("a chain needs at least one element")
    if n == 1:
        names = ["0"]
    elif n == 2:
        names = ["0", "1"]
    elif n == 3:
        names = ["0", "m", "1"]
    else:
        names = ["0"] + [f"c{i}" for i in range(1, n - 1)] + ["1"]
    return FiniteLattice(names, np.triu(np.ones((n, n), dtype=bool)))


def boolean_lattice(k):
    """Subsets of a ``k``-set; atoms are named a, b, c, ... and joins by concatenation."""
    letters = "abcdefghijklmnopqrstuvwxyz"[:k]
    masks = sorted(range(2**k), key=lambda m: (bin(m).count("1"), m))
    full = 2**k - 1

    def name(m):
        if m == 0:
            return "0"
        if m == full:
            return "1"
        return "".join(letters[i] for i in range(k) if m >> i & 1)

    leq = np.array([[a & ~b == 0 for b in masks] for a in masks], dtype=bool)
    return FiniteLattice([name(m) for m in masks], leq)


def diamond(k):
    """``M_k``: bottom, top and ``k`` pairwise incomparable atoms."""
    names = ["0"] + [f"a{i}" for i in range(1, k + 1)] + ["1"]
    n = k + 2
    leq = np.eye(n, dtype=bool)
    leq[0, :] = True
    leq[:, -1] = True
    return FiniteLattice(names, leq)


def pentagon():
    """``N_5``: 0 < a < b < 1 and 0 < c < 1."""
    return FiniteLattice(
        ["0", "a", "b", "c", "1"],
        relation_from_covers(5, [(0, 1), (1, 2), (0, 3), (2, 4), (3, 4)]),
    )


# Sublattices


def generated_sublattice(lattice, elements, perp=None, cap=None):
    """Smallest {0,1}-sublattice containing ``elements`` (closed under ``perp`` if given).

    Returns the sorted list of element ids.  ``cap`` bounds the result size;
    exceeding it raises :class:`OverflowError`.
    """
    current = {lattice.bottom, lattice.top, *map(int, elements)}
    frontier = list(current)
    while frontier:
        if perp is not None:
            for a in frontier:
                b = int(perp[a])
                if b not in current:
                    current.add(b)
                    frontier.append(b)
        new = set()
        members = sorted(current)
        for a in frontier:
            for b in members:
                for c in (lattice.meet_table[a, b], lattice.join_table[a, b]):
                    c = int(c)
                    if c not in current and c not in new:
                        new.add(c)
        if cap is not None and len(current) + len(new) > cap:
            raise OverflowError(f"generated sublattice exceeds {cap} elements")
        current |= new
        frontier = sorted(new)
    return sorted(current)


def induced_sublattice(lattice, elements):
    """The {0,1}-sublattice on ``elements`` plus the inclusion map.

    Raises :class:`NotASublattice` if the set is not closed under meet and
    join or misses a bound.
    """
    elems = sorted(set(int(e) for e in elements))
    members = set(elems)
    if lattice.bottom not in members or lattice.top not in members:
        raise NotASublattice("subset does not contain both bounds")
    for a in elems:
        for b in elems:
            m, j = int(lattice.meet_table[a, b]), int(lattice.join_table[a, b])
            if m not in members:
                raise NotASublattice("subset not closed under meet", x=a, y=b, z=m)
            if j not in members:
                raise NotASublattice("subset not closed under join", x=a, y=b, z=j)
    idx = np.array(elems)
    sub = FiniteLattice([lattice.names[i] for i in elems], lattice.leq[np.ix_(idx, idx)])
    return sub, tuple(elems)


# Dedekind-MacNeille completion


def _popcount(m):
    return bin(m).count("1")


def dm_completion(poset):
    """Lattice of cuts of a finite poset, with the embedding ``x -> (down x, up x)``.

    Cuts are identified by their lower half, which ranges over all
    intersections of principal down-sets (the empty intersection being the
    whole poset).  Elements whose cut is principal keep their name; new cuts
    are named by the maximal elements of their lower half, e.g. ``{a,b}``.
    """
    from .morphisms import Embedding

    n = poset.size
    leq = poset.leq
    down = [sum(1 << z for z in range(n) if leq[z, u]) for u in range(n)]
    full = (1 << n) - 1
    seen = {full}
    queue = [full]
    while queue:
        cut = queue.pop()
        for d in down:
            c = cut & d
            if c not in seen:
                seen.add(c)
                queue.append(c)

    def members(m):
        return [z for z in range(n) if m >> z & 1]

    cuts = sorted(seen, key=lambda m: (_popcount(m), members(m)))
    principal = {d: u for u, d in enumerate(down)}
    names = []
    for m in cuts:
        if m in principal:
            names.append(poset.names[principal[m]])
        else:
            elems = members(m)
            maxima = [a for a in elems if not any(a != b and leq[a, b] for b in elems)]
            names.append("{" + ",".join(poset.names[a] for a in maxima) + "}")
    names = unique_names(names)
    k = len(cuts)
    cut_leq = np.array([[cuts[i] & ~cuts[j] == 0 for j in range(k)] for i in range(k)], dtype=bool)
    lattice = FiniteLattice(names, cut_leq)
    position = {m: i for i, m in enumerate(cuts)}
    return lattice, Embedding(poset, lattice, [position[d] for d in down])


def unique_names(names, reserved=()):
    """Make names unique by priming later duplicates, deterministically."""
    taken = set(reserved)
    out = []
    for name in names:
        candidate = name
        while candidate in taken:
            candidate = candidate + "~"
        taken.add(candidate)
        out.append(candidate)
    return out
