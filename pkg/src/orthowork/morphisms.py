"""Certified embeddings between finite lattices.

An :class:`Embedding` is an injective element map.  The ``check_*``
functions verify one relation each and return a *new* embedding with the
corresponding tag added to ``certificates``; failures raise with a witness.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .exceptions import (
    BoundsNotPreserved,
    NoGreatestBelow,
    NotComposable,
    NotConvex,
    NotDownwardClosed,
    NotInjective,
    NotJoinPreserving,
    NotMeetPreserving,
    PerpNotPreserved,
    MorphismError,
)
from .lattice import subset_sup

SUB01 = "Sub01"
TRIANGLE = "Triangle"
TRIANGLE_DUAL = "TriangleDual"
CONVEX = "Convex"
SUBORTHO = "SubOrtho"
ALL_TAGS = (SUB01, TRIANGLE, TRIANGLE_DUAL, CONVEX, SUBORTHO)


@dataclass(frozen=True, eq=False)
class Embedding:
    source: object
    target: object
    map: tuple
    certificates: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        m = tuple(int(v) for v in self.map)
        object.__setattr__(self, "map", m)
        object.__setattr__(self, "certificates", frozenset(self.certificates))
        if len(m) != self.source.size:
            raise MorphismError(f"map has {len(m)} entries for {self.source.size} source elements")
        if any(not 0 <= v < self.target.size for v in m):
            raise MorphismError("map sends an element outside the target")
        seen = {}
        for x, v in enumerate(m):
            if v in seen:
                raise NotInjective(f"elements {seen[v]} and {x} share an image", x=seen[v], y=x)
            seen[v] = x

    @classmethod
    def identity(cls, lattice):
        return cls(lattice, lattice, range(lattice.size))

    def __call__(self, x):
        return self.map[x]

    def __getitem__(self, x):
        return self.map[x]

    @property
    def array(self):
        return np.array(self.map, dtype=np.intp)

    @property
    def image(self):
        return sorted(self.map)

    @property
    def image_mask(self):
        mask = np.zeros(self.target.size, dtype=bool)
        mask[list(self.map)] = True
        return mask

    def preimage(self, y):
        """Source element mapped to ``y``, or ``None``."""
        try:
            return self.map.index(y)
        except ValueError:
            return None

    def has(self, tag):
        return tag in self.certificates

    def certify(self, *tags):
        return replace(self, certificates=self.certificates | set(tags))

    def then(self, other):
        """Composition ``other o self`` (apply self first); certificates are dropped."""
        if other.source is not self.target and other.source != self.target:
            raise NotComposable("target of the first map is not the source of the second")
        return Embedding(self.source, other.target, [other.map[v] for v in self.map])

    def __repr__(self):
        tags = ",".join(sorted(self.certificates)) or "-"
        return f"Embedding({self.source.size}->{self.target.size}, map={list(self.map)}, [{tags}])"


@dataclass(frozen=True)
class ProjectionTable:
    """``pi[x]``: greatest source element whose image lies below target element ``x``."""

    pi: tuple

    def __getitem__(self, x):
        return self.pi[x]

    def __len__(self):
        return len(self.pi)


def check_sub01(e):
    """Certify that ``e`` is a {0,1}-lattice embedding."""
    if e.has(SUB01):
        return e
    s, t, m = e.source, e.target, e.array
    if m[s.bottom] != t.bottom or m[s.top] != t.top:
        raise BoundsNotPreserved("bounds are not mapped to bounds")
    bad = np.argwhere(t.meet_table[m[:, None], m[None, :]] != m[s.meet_table])
    if bad.size:
        x, y = (int(v) for v in bad[0])
        raise NotMeetPreserving(f"meet of {s.names[x]}, {s.names[y]} not preserved", x=x, y=y)
    bad = np.argwhere(t.join_table[m[:, None], m[None, :]] != m[s.join_table])
    if bad.size:
        x, y = (int(v) for v in bad[0])
        raise NotJoinPreserving(f"join of {s.names[x]}, {s.names[y]} not preserved", x=x, y=y)
    return e.certify(SUB01)


def projections(e):
    """Projection table of ``e``, raising :class:`NoGreatestBelow` where none exists."""
    s, t, m = e.source, e.target, e.array
    down = s.leq.sum(axis=0)
    below = t.leq[m[None, :], np.arange(t.size)[:, None]]  # below[x, z]: m(z) <= x
    score = np.where(below, down[None, :], -1)
    cand = score.argmax(axis=1)
    ok = down[cand] == below.sum(axis=1)
    bad = np.flatnonzero(~ok)
    if bad.size:
        x = int(bad[0])
        cands = np.flatnonzero(below[x])
        maxima = [int(a) for a in cands if not any(a != b and s.leq[a, b] for b in cands)]
        raise NoGreatestBelow(
            f"no greatest source element below {t.names[x]}", x=x, antichain=maxima
        )
    return ProjectionTable(tuple(int(c) for c in cand))


def check_triangle(e):
    """Certify ``source ⊴ target``: projections exist and the image is downward closed.

    Downward closure is required of the image minus the top; ``x <= z`` with
    ``z`` in the image must put ``x`` in the image.  Returns the certified
    embedding and its :class:`ProjectionTable`.
    """
    e = check_sub01(e)
    pi = projections(e)
    t = e.target
    image = e.image_mask
    for z in e.image:
        if z == t.top:
            continue
        outside = np.flatnonzero(t.leq[:, z] & ~image)
        if outside.size:
            x = int(outside[0])
            raise NotDownwardClosed(
                f"{t.names[x]} <= {t.names[z]} but is not in the image", z=z, x=x
            )
    return e.certify(TRIANGLE), pi


def check_triangle_dual(e):
    """Certify the dual relation; the returned table maps each target element
    to the least image element above it."""
    e = check_sub01(e)
    flipped = Embedding(e.source.dual(), e.target.dual(), e.map)
    _, pi = check_triangle(flipped)
    return e.certify(TRIANGLE_DUAL), pi


def check_convex(e):
    """Certify convexity of the image in the bounds-excluding sense.

    Whenever ``0 < a <= x <= a' < 1`` with ``a, a'`` in the image, ``x`` must
    be in the image too.
    """
    t = e.target
    image = e.image_mask
    inner = image.copy()
    inner[[t.bottom, t.top]] = False
    above_some = (t.leq[inner, :]).any(axis=0)  # x >= some inner a
    below_some = (t.leq[:, inner]).any(axis=1)  # x <= some inner a'
    bad = np.flatnonzero(above_some & below_some & ~image)
    if bad.size:
        x = int(bad[0])
        ins = np.flatnonzero(inner)
        a = int(next(v for v in ins if t.leq[v, x]))
        a2 = int(next(v for v in ins if t.leq[x, v]))
        raise NotConvex(f"{t.names[x]} lies between image elements", a=a, x=x, a2=a2)
    return e.certify(CONVEX)


def is_convex(e):
    try:
        check_convex(e)
    except NotConvex:
        return False
    return True


@dataclass(frozen=True)
class SupReport:
    subset: tuple
    source_sup: int
    target_sup: int
    image_of_source_sup: int
    ge_holds: bool
    equality_required: bool
    equal: bool

    @property
    def ok(self):
        return self.ge_holds and (self.equal or not self.equality_required)


def sup_agreement(e, subset):
    """Compare the sup of ``subset`` in the source with the sup of its image.

    The source sup always dominates; if the image is convex and the source
    sup is below the top, they must coincide.  When the source sup is the top
    only the inequality is asserted.
    """
    e = check_sub01(e)
    s, t = e.source, e.target
    subset = tuple(int(a) for a in subset)
    sup_s = subset_sup(s, subset)
    sup_t = subset_sup(t, [e.map[a] for a in subset])
    image_sup = e.map[sup_s]
    convex = e.has(CONVEX) or is_convex(e)
    return SupReport(
        subset=subset,
        source_sup=sup_s,
        target_sup=sup_t,
        image_of_source_sup=image_sup,
        ge_holds=t.le(sup_t, image_sup),
        equality_required=convex and sup_s != s.top,
        equal=image_sup == sup_t,
    )


def check_subortholattice(e):
    """Certify that ``e`` commutes with the orthocomplements of both ends."""
    e = check_sub01(e)
    s, t = e.source, e.target
    if not hasattr(s, "perp") or not hasattr(t, "perp"):
        raise MorphismError("both ends must be ortholattices")
    m = e.array
    bad = np.flatnonzero(t.perp[m] != m[s.perp])
    if bad.size:
        x = int(bad[0])
        raise PerpNotPreserved(f"perp of {s.names[x]} not preserved", x=x)
    return e.certify(SUBORTHO)


CHECKS = {
    SUB01: check_sub01,
    TRIANGLE: lambda e: check_triangle(e)[0],
    TRIANGLE_DUAL: lambda e: check_triangle_dual(e)[0],
    CONVEX: check_convex,
    SUBORTHO: check_subortholattice,
}


def certificate_table(e):
    """Run every applicable check; map tag -> (passed, message)."""
    rows = {}
    for tag, check in CHECKS.items():
        if tag == SUBORTHO and not (hasattr(e.source, "perp") and hasattr(e.target, "perp")):
            rows[tag] = (None, "not applicable")
            continue
        try:
            check(e)
        except MorphismError as exc:
            rows[tag] = (False, f"{type(exc).__name__}: {exc}")
        else:
            rows[tag] = (True, "ok")
    return rows
