"""Unary polynomial clones and shortest witness terms.

Run: python demos/03_clones.py
"""
from orthowork import FunctionTable, Mode, interpolate_unary, polynomial_clone, zoo

# On the 2-chain, lattice polynomials give exactly the monotone maps, and
# adding perp gives everything.
O = zoo("2-chain")
for mode, lat in (("lattice", O.lattice), ("ortho", O)):
    clone = polynomial_clone(lat, mode)
    print(f"2-chain {mode:7s}:", {vec: clone.texts[vec] for vec in sorted(clone.members)})

# Sizes grow quickly; every witness is a shortest term, ties broken by text.
for name in ("B2", "O6", "B3"):
    O = zoo(name)
    lat_only = polynomial_clone(O.lattice, "lattice")
    full = polynomial_clone(O, "ortho")
    print(f"{name}: {len(lat_only)} lattice polynomials, {len(full)} orthopolynomials (max term size {full.max_size})")

# Interpolating a concrete function.
B2 = zoo("B2")
perp = FunctionTable.total(B2, B2.perp)
print("\nperp on B2:", interpolate_unary(B2, Mode.ORTHO, perp).text)
swap = FunctionTable.total(B2, [B2.index(n) for n in ("0", "b", "a", "1")])
res = interpolate_unary(B2, Mode.ORTHO, swap)
print("swap a<->b on B2:", res.status)
# partial functions only need to agree on their domain
part = FunctionTable.unary(B2, {B2.index("a"): B2.index("1"), B2.index("1"): B2.index("a")})
print("partial a->1, 1->a:", interpolate_unary(B2, Mode.ORTHO, part).text)
