"""Orthocomplemented lattices and a small zoo of standard examples."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import ComplementLawFails, NotInvolution, NotOrderReversing, ValidationError
from .lattice import FiniteLattice, boolean_lattice, chain, diamond, pentagon, relation_from_covers


class Ortholattice(FiniteLattice):
    """A :class:`FiniteLattice` carrying a validated orthocomplement table ``perp``.

    Build instances with :func:`validate_ortho`.
    """

    def __init__(self, lattice, perp):
        # reuse the already-validated tables of ``lattice``
        self.lattice = lattice if type(lattice) is FiniteLattice else lattice.lattice
        for attr in ("names", "leq", "bottom", "top", "meet_table", "join_table"):
            setattr(self, attr, getattr(lattice, attr))
        perp = np.array(perp, dtype=np.intp)
        perp.setflags(write=False)
        self.perp = perp

    def _extra_eq(self, other):
        return np.array_equal(self.perp, other.perp)

    __hash__ = FiniteLattice.__hash__

    def orth(self, x):
        return int(self.perp[x])

    def dual(self):
        # the same orthocomplement works for the reversed order
        return Ortholattice(self.lattice.dual(), self.perp)


def validate_ortho(lattice, perp):
    """Check the orthocomplement axioms exhaustively; return an :class:`Ortholattice`.

    Raises the first failure among ``NotInvolution``, ``NotOrderReversing``
    and ``ComplementLawFails``, in that order.
    """
    n = lattice.size
    perp = np.asarray(perp, dtype=np.intp)
    if perp.shape != (n,) or (perp < 0).any() or (perp >= n).any():
        raise ValidationError(f"perp must be a table of {n} element ids")
    bad = np.flatnonzero(perp[perp] != np.arange(n))
    if bad.size:
        x = int(bad[0])
        raise NotInvolution(f"perp(perp({lattice.names[x]})) != {lattice.names[x]}", x=x)
    # x <= y must give perp(y) <= perp(x)
    reversed_ok = lattice.leq[perp[None, :], perp[:, None]]
    bad = np.argwhere(lattice.leq & ~reversed_ok)
    if bad.size:
        x, y = (int(v) for v in bad[0])
        raise NotOrderReversing(
            f"{lattice.names[x]} <= {lattice.names[y]} but perp is not reversed", x=x, y=y
        )
    idx = np.arange(n)
    joins = lattice.join_table[idx, perp]
    meets = lattice.meet_table[idx, perp]
    bad = np.flatnonzero((joins != lattice.top) | (meets != lattice.bottom))
    if bad.size:
        x = int(bad[0])
        raise ComplementLawFails(f"{lattice.names[x]} is not complemented by its perp", x=x)
    return Ortholattice(lattice, perp)


@dataclass
class DeMorganReport:
    pairs_checked: int
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures


def check_de_morgan(ortho):
    """Exhaustive regression check of both De Morgan laws."""
    p = ortho.perp
    meet, join = ortho.meet_table, ortho.join_table
    lhs_join = p[join]  # (x v y)^perp
    rhs_join = meet[p[:, None], p[None, :]]
    lhs_meet = p[meet]
    rhs_meet = join[p[:, None], p[None, :]]
    failures = [("join", int(x), int(y)) for x, y in np.argwhere(lhs_join != rhs_join)]
    failures += [("meet", int(x), int(y)) for x, y in np.argwhere(lhs_meet != rhs_meet)]
    return DeMorganReport(pairs_checked=ortho.size**2, failures=failures)


# Zoo


def two_chain():
    return validate_ortho(chain(2), [1, 0])


def boolean_algebra(k):
    lat = boolean_lattice(k)
    full = frozenset(range(k))
    letters = "abcdefghijklmnopqrstuvwxyz"[:k]

    def as_set(name):
        if name == "0":
            return frozenset()
        if name == "1":
            return full
        return frozenset(letters.index(ch) for ch in name)

    sets = [as_set(nm) for nm in lat.names]
    pos = {s: i for i, s in enumerate(sets)}
    return validate_ortho(lat, [pos[full - s] for s in sets])


def mo2():
    """``MO_2``: bottom, top and atoms a, a', b, b'."""
    lat = FiniteLattice(["0", "a", "a'", "b", "b'", "1"], diamond(4).leq)
    return validate_ortho(lat, [5, 2, 1, 4, 3, 0])


def hexagon():
    """``O_6``: 0 < a < b < 1 and 0 < b' < a' < 1 with the obvious perp."""
    names = ["0", "a", "b", "b'", "a'", "1"]
    covers = [(0, 1), (1, 2), (2, 5), (0, 3), (3, 4), (4, 5)]
    lat = FiniteLattice(names, relation_from_covers(6, covers))
    return validate_ortho(lat, [5, 4, 3, 2, 1, 0])


ORTHO_ZOO = {
    "2-chain": two_chain,
    "B2": lambda: boolean_algebra(2),
    "B3": lambda: boolean_algebra(3),
    "MO2": mo2,
    "O6": hexagon,
}

LATTICE_ZOO = {
    "1-chain": lambda: chain(1),
    "3-chain": lambda: chain(3),
    "4-chain": lambda: chain(4),
    "5-chain": lambda: chain(5),
    "M3": lambda: diamond(3),
    "N5": pentagon,
}


def zoo(name):
    """Look up a named example; ortholattices first, then plain lattices."""
    if name in ORTHO_ZOO:
        return ORTHO_ZOO[name]()
    if name in LATTICE_ZOO:
        return LATTICE_ZOO[name]()
    raise KeyError(f"unknown zoo entry {name!r}; known: {sorted(ORTHO_ZOO) + sorted(LATTICE_ZOO)}")
