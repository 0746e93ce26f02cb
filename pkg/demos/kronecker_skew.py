"""Kronecker quiver with Z2 swapping the two arrows.

Walks through the skew group algebra, the basic corner, and how pushdown
of a simple module splits once you pass to the corner.
"""
from skewalg.quivalg import gabriel_quiver
from skewalg.repcat import (decompose, hom_space, is_indecomposable, pushdown_corner, pushdown_full,
                            restrict, verify_semicovering_module)
from skewalg.workspace import fixture_path, parse_workspace

ws = parse_workspace(fixture_path("kron"))
b = ws.bundles["swap_ab"]
b.base.group_action = b.action
mods = ws.modules

print("base algebra dim:", b.base.dim)
print("skew algebra dim:", b.full.dim)
print("corner dim:      ", b.corner.dim)
# the corner is basic, so it has a Gabriel quiver: a bipartite square
gq = gabriel_quiver(b.corner)
for (s, t), k in sorted(gq.multiplicity.items()):
    print(f"  {s} -> {t}  x{k}")

# S1 is G-stable, so its pushdown to the corner is not indecomposable
c = pushdown_corner(b, mods["S1"])
print("\npushdown of S1 to the corner, dim vector", c.dimension_vector())
print("indecomposable?", type(is_indecomposable(c)).__name__)
for s in decompose(c):
    print("  summand", s.module.dimension_vector())

# P1 is stable too; its pushdown doubles in size
c = pushdown_corner(b, mods["P1"])
print("\npushdown of P1:", c.dimension_vector(), "dim", c.dim)

# restrict after pushdown gives back M plus its twist
F = pushdown_full(b, mods["M10"])
R = restrict(b, F)
print("\nrestrict(pushdown(M10)) dim vector", R.dimension_vector())
print("Hom(M10, restrict) =", hom_space(mods["M10"], R).dim, " Hom(M01, restrict) =", hom_space(mods["M01"], R).dim)

print("\nsemicovering identity on a few pairs:")
for x, y in [("S1", "S1"), ("P1", "S2"), ("M10", "M01"), ("M11", "M1m")]:
    r = verify_semicovering_module(b, mods[x], mods[y])
    print(f"  {x:>3},{y:<3} branch={r.branch:<7} lhs={r.lhs} rhs={r.rhs} {r.status}")
