"""Binary functions through power witnesses.

An n-ary partial function on A is reduced to a unary problem by coding
tuples as elements of S^n, with S the sublattice generated by A.

Run: python demos/05_nary.py
"""
from orthowork import FunctionTable, boolean_lattice, nary_reduce
from orthowork.terms import to_text

B = boolean_lattice(2)
A = [B.index(n) for n in ("0", "a", "b", "1")]
for label, table in (("meet", B.meet_table), ("join", B.join_table)):
    g = FunctionTable(B, 2, {(x, y): int(table[x, y]) for x in A for y in A})
    res = nary_reduce(B, g)
    print(f"{label}: {res.status}, ambient size {res.ambient.size}, star identity {res.star_identity}")
    print("   term:", to_text(res.term)[:120] + ("..." if len(to_text(res.term)) > 120 else ""))
