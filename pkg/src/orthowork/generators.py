"""Seeded random instances for tests, benchmarks and the CLI.

Every generator takes a ``random.Random`` and certifies what it returns, so
a caller never receives an instance whose preconditions were not checked.
"""
from __future__ import annotations

import random

import numpy as np

from .lattice import Poset, dm_completion, transitive_closure, unique_names
from .morphisms import Embedding, check_triangle, check_triangle_dual
from .ortho import ORTHO_ZOO, zoo


def make_rng(seed):
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_poset(rng, k, density=0.35):
    rel = np.eye(k, dtype=bool)
    for i in range(k):
        for j in range(i + 1, k):
            if rng.random() < density:
                rel[i, j] = True
    return Poset([f"p{i}" for i in range(k)], transitive_closure(rel))


def random_lattice(rng, k, density=0.35):
    """Dedekind-MacNeille completion of a random poset on ``k`` points."""
    lat, _ = dm_completion(random_poset(rng, k, density))
    return lat


def random_triangle_extension(rng, base, extra, prefix="n"):
    """A random ``L1`` with ``base ⊴ L1``, returned as a certified embedding.

    New points ``t`` get a projection ``pi(t)`` below the top of ``base`` and
    sit above exactly the base elements below ``pi(t)``; a new point may lie
    above earlier ones, with projections joined accordingly.  The poset is
    then completed.  Nothing new is ever put below a base element other than
    the top, which keeps the base downward closed.
    """
    n = base.size
    if n == 1:
        # a one-element lattice has 0 = 1 and admits no proper extension
        return check_triangle(Embedding.identity(base))[0]
    names = unique_names(list(base.names) + [f"{prefix}{i + 1}" for i in range(extra)])
    size = n + extra
    rel = np.zeros((size, size), dtype=bool)
    rel[:n, :n] = base.leq
    rel[:, base.top] = True
    np.fill_diagonal(rel, True)
    pis = []
    non_top = [z for z in range(n) if z != base.top]
    for i in range(extra):
        own = rng.choice(non_top)
        below = [j for j in range(i) if rng.random() < 0.3]
        pi = own
        for j in below:
            pi = base.join(pi, pis[j])
        if pi == base.top:
            pi, below = own, []
        pis.append(pi)
        t = n + i
        rel[: n, t] = base.leq[:, pi]
        for j in below:
            rel[n + j, t] = True
    rel = transitive_closure(rel)
    lat, emb = dm_completion(Poset(names, rel))
    e = Embedding(base, lat, [emb.map[z] for z in range(n)])
    return check_triangle(e)[0]


def random_dual_extension(rng, base, extra, prefix="d"):
    """A random ``L2`` with ``base ⊴-dual L2`` (certified)."""
    flipped = random_triangle_extension(rng, base.dual(), extra, prefix)
    e = Embedding(base, flipped.target.dual(), flipped.map)
    return check_triangle_dual(e)[0]


def _small_base(rng, max_base):
    pool = ["2-chain", "B2", "3-chain", "4-chain", "M3", "N5", "MO2", "O6", "B3"]
    while True:
        lat = zoo(rng.choice(pool))
        if lat.size <= max_base:
            return lat.lattice if hasattr(lat, "lattice") else lat


def random_glue_instance(rng, max_size=12, max_base=6):
    """``(e1, e2)`` with ``L0 ⊴ L1`` and ``L0 ⊴-dual L2`` and glued size at most ``max_size``."""
    while True:
        base = _small_base(rng, max_base)
        room = max_size - base.size
        if room < 0:
            continue
        e1 = random_triangle_extension(rng, base, rng.randint(0, max(0, room // 2)))
        e2 = random_dual_extension(rng, base, rng.randint(0, max(0, room // 2)))
        if e1.target.size + e2.target.size - base.size <= max_size:
            return e1, e2


def random_ortho_instance(rng, max_size=12):
    """``e: O0 ⊴ L1`` over a zoo ortholattice with ``|ortho(L1, O0)| <= max_size``."""
    names = sorted(ORTHO_ZOO)
    while True:
        o0 = zoo(rng.choice(names))
        room = (max_size + o0.size) // 2 - o0.size
        if room < 0:
            continue
        e = random_triangle_extension(rng, o0.lattice, rng.randint(0, max(0, room)))
        if 2 * e.target.size - o0.size <= max_size:
            return check_triangle(Embedding(o0, e.target, e.map))[0]


def random_tower(rng, base, levels=2, extra=2):
    """``levels`` consecutive certified ⊴-steps starting at ``base``."""
    steps = []
    cur = base
    for _ in range(levels):
        step = random_triangle_extension(rng, cur, rng.randint(0, extra), prefix=f"s{len(steps) + 1}_")
        steps.append(step)
        cur = step.target
    return steps


def random_function(rng, lattice, arity=1, domain=None):
    """Random table; total on ``lattice`` unless ``domain`` is given."""
    from itertools import product

    from .interpolation import FunctionTable

    dom = domain if domain is not None else list(product(range(lattice.size), repeat=arity))
    return FunctionTable(lattice, arity, {tuple(a): rng.randrange(lattice.size) for a in dom})


def random_subset(rng, lattice):
    return [x for x in range(lattice.size) if rng.random() < 0.5]

