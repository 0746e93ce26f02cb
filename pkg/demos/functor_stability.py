"""Finitely presented functors whose modules are stable but which are not.

T = coker Hom(-, f) for f: S2 -> P1 landing on the a-image. Both ends of f
are fixed by the swap, yet twisting f moves its image to the b-image, and
the twisted functor is not isomorphic to T.
"""
from skewalg.functcat import (FPFunctor, evaluate, f_twist, functor_stabilizer, functors_isomorphic,
                              nat_trans_space, sfm_check)
from skewalg.morphcat import MorphismObject
from skewalg.repcat import module_stabilizer
from skewalg.workspace import fixture_path, parse_workspace

ws = parse_workspace(fixture_path("kron"))
b = ws.bundles["swap_ab"]
b.base.group_action = b.action
mods = ws.modules

f = MorphismObject(mods["S2"], mods["P1"], ws.morphisms["S2_P1"].map, "S2_P1")
T = FPFunctor(f, "T")
Tg = f_twist((1,), T)

print("stabilizer of S2:", module_stabilizer(mods["S2"]))
print("stabilizer of P1:", module_stabilizer(mods["P1"]))
print("stabilizer of T: ", functor_stabilizer(T))

print("\ndim Nat between T and its twist")
for lab, x, y in [("T,T", T, T), ("T,gT", T, Tg), ("gT,T", Tg, T), ("gT,gT", Tg, Tg)]:
    print(f"  {lab:<6}", nat_trans_space(x, y).dim)
print("T ~ gT?", type(functors_isomorphic(T, Tg)).__name__)

# values look the same everywhere, which is what makes this easy to miss
print("\nvalue dims  name   T  gT")
for name, m in mods.items():
    print(f"            {name:<5} {evaluate(T, m).dim:>2} {evaluate(Tg, m).dim:>2}")

r = sfm_check(T)
print("\nstable-functor vs stable-module count:", r.lhs, r.rhs, r.status)
