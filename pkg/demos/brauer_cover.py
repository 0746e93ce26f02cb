"""Double cover of a Brauer graph from a Z2 degree on half-edges.

sigma_d(h_i) = (sigma h)_{i + d(h)}; the skew algebra of the cover by the
level swap has a basic corner Morita equivalent to the original algebra.
"""
from skewalg.brauer import bg_algebra, double_cover, graphs_isomorphic, disjoint_union, skew_bg_algebra
from skewalg.workspace import fixture_path, parse_workspace

ws = parse_workspace(fixture_path("brauer"))

for name, (g, d) in ws.brauer.items():
    c = double_cover(g, d)
    print(f"== {name}: half-edges {list(g.H)}, degree {d.d}")
    print("   cover sigma:", c.sigma)
    print("   cover edges:", c.edges())
    print("   split cover?", graphs_isomorphic(c, disjoint_union(g, g)))
    res = skew_bg_algebra(g, d)
    # bg_algebra only takes ordinary graphs; a fixed half-edge makes g skew
    ordinary = all(g.iota[h] != h for h in g.H)
    base = bg_algebra(g).dim if ordinary else "n/a (skew)"
    print(f"   dim B_G = {base}, dim cover algebra = {res.cover_algebra.dim}, dim corner = {res.corner.dim}")
    print("   checks:", {k: bool(v) for k, v in res.checks.items()})
