"""Building lattices, checking them, and completing posets.

Run: python demos/01_lattices.py
"""
import numpy as np

from orthowork import FiniteLattice, Poset, boolean_lattice, dm_completion, zoo
from orthowork.exceptions import NoMeet
from orthowork.lattice import transitive_closure

# A lattice is a list of names plus a boolean leq matrix.
B2 = boolean_lattice(2)
print("B2:", B2.names)
a, b = B2.index("a"), B2.index("b")
print("a & b =", B2.names[B2.meet(a, b)], "  a | b =", B2.names[B2.join(a, b)])

# Not every bounded order is a lattice.  Two elements below two others
# (the "bowtie", here with 0 and 1 added) leave r and s without a meet,
# and the error carries the witness pair.
names = ["0", "p", "q", "r", "s", "1"]
rel = np.eye(6, dtype=bool)
rel[0, :] = rel[:, 5] = True
for lo in (1, 2):
    for hi in (3, 4):
        rel[lo, hi] = True
try:
    FiniteLattice(names, transitive_closure(rel))
except NoMeet as exc:
    print("bowtie rejected:", exc)

# ... but the Dedekind-MacNeille completion of the bare bowtie is one, with
# the poset sitting inside it preserving every meet and join that existed.
bow = np.eye(4, dtype=bool)
bow[:2, 2:] = True
bowtie = Poset(["p", "q", "r", "s"], bow)
L, emb = dm_completion(bowtie)
print("completion has", L.size, "elements:", L.names)
print("poset embeds as", [L.names[i] for i in emb.map])

# The zoo holds the small ortholattices used throughout.
for name in ("2-chain", "B2", "MO2", "O6", "B3"):
    O = zoo(name)
    pairs = sorted({tuple(sorted((O.names[x], O.names[O.orth(x)]))) for x in range(O.size)})
    print(f"{name:8s} size {O.size:2d}  perp pairs {pairs}")
