"""Strong extensions, glued unions and the ortho construction.

Run: python demos/02_extensions.py
"""
import random

from orthowork import Embedding, check_triangle, chain, glued_union, ortho_construction, zoo
from orthowork.exceptions import NotDownwardClosed
from orthowork.generators import random_glue_instance
from orthowork.morphisms import certificate_table

# A 3-chain inside a 4-chain.  Sending the middle element to c1 gives a
# downward closed image with projections; sending it to c2 does not.
C3, C4 = chain(3), chain(4)
good, pi = check_triangle(Embedding(C3, C4, [0, 1, 3]))
print("0 < m < 1 into 0 < c1 < c2 < 1 via m -> c1:", sorted(good.certificates))
print("  projections of C4 onto C3:", [C3.names[pi[x]] for x in range(C4.size)])
try:
    check_triangle(Embedding(C3, C4, [0, 2, 3]))
except NotDownwardClosed as exc:
    print("via m -> c2 fails:", exc)
print("full certificate table:", {k: v[0] for k, v in certificate_table(Embedding(C3, C4, [0, 2, 3])).items()})

# Glue a strong extension and a dual strong extension along their common
# base.  The order from the three-case description is checked against the
# transitive closure of both orders, and meets/joins against brute force.
rng = random.Random(3)
e1, e2 = random_glue_instance(rng, max_size=10)
res = glued_union(e1, e2)
print(f"\nglued |L1|={e1.target.size} and |L2|={e2.target.size} over |L0|={e1.source.size}: |L|={res.result.size}")
print("element tags:", [el.tag for el in res.elements])

# The ortho construction: L1 glued to its order-reversed copy, with the
# orthocomplement swapping the two halves.
O = zoo("2-chain")
e = check_triangle(Embedding(O, chain(3), [0, 2]))[0]
ortho = ortho_construction(e)
L = ortho.result
print("\northo(3-chain, 2-chain):", L.names)
print("perp:", {L.names[x]: L.names[L.orth(x)] for x in range(L.size)})
print("L0 -> L certified:", sorted(ortho.embeddings["L0→L"].certificates))
