"""
Thirteen rays in three dimensions
=================================

From the exclusivity graph to a certified bound on the eigenstate
preparation average A, step by step.
"""
from fractions import Fraction

from onci import (
    builtin_functionals, builtin_graph, builtin_realization, conditional_max,
    derive_onci_bound, enumerate_vertices, ks_bound, make_onci_spec,
    maximal_cliques, polytope_bound, build_polytope, quantum_value,
)
from onci.rational import fmt

# the graph and its 16 maximal cliques (4 triangles, 12 edges)
g = builtin_graph("yo13")
cliques = maximal_cliques(g)
print(len(g), "rays,", len(cliques), "cliques")

# response-function polytope: triangles sum to one, edges at most one
poly = build_polytope(g, cliques, 3)
verts = enumerate_vertices(poly)
print(len(verts), "vertices,", sum(v.is_deterministic() for v in verts), "deterministic")

fs = builtin_functionals("yo13")
print("KS bound of I:", ks_bound(verts, fs.I))
print("max of w_A+w_B+w_C+w_D:", fmt(polytope_bound(verts, fs.F)))

# conditional maxima of T on slices a <= F <= 4/3 lie on a line
for a in (Fraction(1), Fraction(7, 6), Fraction(4, 3)):
    val, _ = conditional_max(poly, fs.F, a, Fraction(4, 3), fs.T)
    print(f"  a = {fmt(a):>4}  max T = {fmt(val)}")

rep = derive_onci_bound(make_onci_spec(poly, fs.F, fs.F_value, fs.c, fs.T, vertices=verts))
print(f"envelope T <= {fmt(rep.alpha)} - {fmt(rep.beta)} a")
print(f"A <= {rep.bound:.9f} at a* = {rep.a_star:.9f}")

# the quantum side: I is the same for every state
q = builtin_realization("yo13")
print("quantum I (maximally mixed):", quantum_value(fs.I, q, "maximally_mixed"))
