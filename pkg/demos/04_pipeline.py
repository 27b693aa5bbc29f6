"""Making an arbitrary unary function polynomial by extending the lattice.

A function that is not an orthopolynomial on L0 can become one after L0 is
embedded into a larger ortholattice.  The pipeline: put <x, x^perp> into an
antichain inside L0' = hsum(L0, L0 x L0), find a lattice extension L1 of L0'
where the lifted tables are lattice polynomials, then form ortho(L1, L0) and
assemble h(x) = p(q1(x) | q2(x^perp)).

Run: python demos/04_pipeline.py
"""
from orthowork import FunctionTable, extend_pipeline, zoo
from orthowork.interpolation import interpolate_unary, iterate_cover, verify_trace

B2 = zoo("B2")
swap = FunctionTable.total(B2, [B2.index(n) for n in ("0", "b", "a", "1")])
print("swap on B2 directly:", interpolate_unary(B2, "ortho", swap).status)

trace = extend_pipeline(B2, swap)
print("pipeline:", trace.status, "via", trace.extension)
print("sizes: L0'", trace.lift.lprime.result.size, " L1", trace.l1.size, " L", trace.ortho.result.size)
print("p  =", trace.p)
print("h  =", trace.h)
print("verified on every x:", verify_trace(trace, swap))
for a in trace.attempts:
    print("  attempt", a.extension, a.size, a.statuses)

# perp on the 2-chain is a polynomial already, but the pipeline still has
# to find an L1 in which the lifted tables are lattice polynomials; the
# three-element chain attached as a horizontal summand is the first that works.
O = zoo("2-chain")
trace = extend_pipeline(O, FunctionTable.total(O, [1, 0]))
print("\n2-chain perp:", trace.status, "via", trace.extension, "h =", trace.h)

# Several functions at once, extending stage by stage.
targets = [FunctionTable.total(B2, v) for v in ([2, 1, 1, 2], [0, 1, 2, 3], [3, 3, 0, 2])]
rep = iterate_cover(B2, targets)
print("\ncover of 3 functions on B2: stages", rep.stages, "final size", rep.final.size)
for entry in rep.entries:
    print(" ", entry.route, "stage", entry.stage, "verified", entry.verified)
