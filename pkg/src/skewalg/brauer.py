"""Skew Brauer graphs, Z2-graded double covers and their Brauer graph algebras.

Half-edges are strings. Permutations are dicts on the half-edge list. The
cover of a graded graph lives on half-edges ``f"{h}_{i}"`` for ``i`` in 0, 1,
listed level 0 first so that level-0 edges come first among the vertices of
the cover algebra.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import ActionInvalid, NotHomogeneous, UnsupportedShape, ValidationError
from .exactfield import DEFAULT_FIELD, FieldSpec, Span
from .groupact import (FiniteAbelianGroup, QuiverAction, _check_automorphism, dual_action,
                       restrict_action_to_corner, skew_algebra)
from .quivalg import Algebra, Quiver, RelationSet, in_ideal, path_basis
from .repcat import CheckRow


def _orbits(perm: dict, order: list) -> list[list]:
    seen, out = set(), []
    for h in order:
        if h in seen:
            continue
        orb, x = [], h
        while x not in seen:
            seen.add(x)
            orb.append(x)
            x = perm[x]
        out.append(orb)
    return out


@dataclass
class SkewBrauerGraph:
    H: tuple
    iota: dict
    sigma: dict
    m: dict
    name: str = ""

    def __post_init__(self):
        self.H = tuple(self.H)
        hs = set(self.H)
        if len(hs) != len(self.H):
            raise ValidationError("half-edge ids must be distinct")
        for nm, perm in (("iota", self.iota), ("sigma", self.sigma)):
            if set(perm) != hs or set(perm.values()) != hs:
                raise ValidationError(f"{nm} is not a permutation of the half-edges")
        if any(self.iota[self.iota[h]] != h for h in self.H):
            raise ValidationError("invariant iota^2 = id violated")
        if set(self.m) != hs or any(int(v) < 1 for v in self.m.values()):
            raise ValidationError("multiplicities must be positive integers on every half-edge")
        for orb in _orbits(self.sigma, list(self.H)):
            if len({self.m[h] for h in orb}) != 1:
                raise ValidationError("invariant m constant on sigma-orbits violated")

    @property
    def H0(self) -> list:
        return [h for h in self.H if self.iota[h] != h]

    @property
    def Hx(self) -> list:
        return [h for h in self.H if self.iota[h] == h]

    @property
    def is_ordinary(self) -> bool:
        return not self.Hx

    def o_vertices(self) -> list[list]:
        return _orbits(self.sigma, list(self.H))

    def edges(self) -> list[list]:
        return _orbits(self.iota, list(self.H))

    def vertex_of(self, h) -> int:
        for k, orb in enumerate(self.o_vertices()):
            if h in orb:
                return k
        raise KeyError(h)

    def valency(self, h) -> int:
        return len(self.o_vertices()[self.vertex_of(h)])

    def edge_of(self, h) -> int:
        for k, e in enumerate(self.edges()):
            if h in e:
                return k
        raise KeyError(h)


@dataclass
class Grading:
    d: dict

    def __call__(self, h) -> int:
        return int(self.d[h]) % 2


def check_homogeneous(g: SkewBrauerGraph, d: Grading):
    if set(d.d) != set(g.H):
        raise NotHomogeneous("grading must be defined on every half-edge")
    for orb in g.o_vertices():
        if sum(d(h) for h in orb) % 2:
            raise NotHomogeneous(f"degrees at the vertex through {orb[0]} do not sum to 0")


def lift(h, i: int) -> str:
    return f"{h}_{i % 2}"


def double_cover(g: SkewBrauerGraph, d: Grading) -> SkewBrauerGraph:
    check_homogeneous(g, d)
    Hd = [lift(h, i) for i in (0, 1) for h in g.H]
    iota, sigma, m = {}, {}, {}
    for h, i in product(g.H, (0, 1)):
        x = lift(h, i)
        iota[x] = lift(h, i + 1) if g.iota[h] == h else lift(g.iota[h], i)
        sigma[x] = lift(g.sigma[h], i + d(h))
        m[x] = g.m[h]
    cover = SkewBrauerGraph(tuple(Hd), iota, sigma, m, name=f"cover({g.name})")
    if not cover.is_ordinary:
        raise ValidationError("double cover has iota-fixed half-edges")
    return cover


def disjoint_union(g1: SkewBrauerGraph, g2: SkewBrauerGraph, tags=("a", "b")) -> SkewBrauerGraph:
    def ren(t, h):
        return f"{t}:{h}"
    H, iota, sigma, m = [], {}, {}, {}
    for t, g in zip(tags, (g1, g2)):
        for h in g.H:
            H.append(ren(t, h))
            iota[ren(t, h)] = ren(t, g.iota[h])
            sigma[ren(t, h)] = ren(t, g.sigma[h])
            m[ren(t, h)] = g.m[h]
    return SkewBrauerGraph(tuple(H), iota, sigma, m)


def canonical_form(g: SkewBrauerGraph) -> tuple:
    """Relabeling-invariant code: per component, the least BFS code over start half-edges."""
    def code(start):
        order, pos = [start], {start: 0}
        k = 0
        while k < len(order):
            x = order[k]
            for y in (g.sigma[x], g.iota[x]):
                if y not in pos:
                    pos[y] = len(order)
                    order.append(y)
            k += 1
        return tuple((pos[g.sigma[x]], pos[g.iota[x]], int(g.m[x])) for x in order), set(order)

    comps, seen = [], set()
    for h in g.H:
        if h in seen:
            continue
        _, members = code(h)
        seen |= members
        comps.append(min(code(x)[0] for x in members))
    return tuple(sorted(comps))


def graphs_isomorphic(g1: SkewBrauerGraph, g2: SkewBrauerGraph) -> bool:
    return canonical_form(g1) == canonical_form(g2)


# -- Brauer graph algebras ---------------------------------------------------

def _edge_label(edge) -> str:
    return "[" + ",".join(edge) + "]"


def _single_edge_tree(g: SkewBrauerGraph) -> bool:
    return len(g.H) == 2 and all(g.sigma[h] == h and g.m[h] == 1 for h in g.H)


def bg_algebra(g: SkewBrauerGraph, fs: FieldSpec = DEFAULT_FIELD, name: str = "") -> Algebra:
    """Brauer graph algebra of an ordinary Brauer graph.

    Vertices are the edges of ``g``; half-edge ``h`` gives an arrow
    ``a_h: [h] -> [sigma h]``. The returned algebra carries
    ``half_edge_arrows`` mapping each half-edge to its arrow id.
    """
    if not g.is_ordinary:
        raise ValidationError("bg_algebra needs an ordinary Brauer graph")
    edges = g.edges()
    elab = {h: _edge_label(e) for e in edges for h in e}
    verts = tuple(_edge_label(e) for e in edges)
    name = name or f"B({g.name})"
    if _single_edge_tree(g):
        # one loop x with x^2 = 0; both half-edges name the same arrow
        q = Quiver(verts, (("x", verts[0], verts[0]),))
        alg = path_basis(q, RelationSet((((1, ("x", "x")),),), nilpotency_bound=2), fs, name=name)
        alg.half_edge_arrows = {h: "x" for h in g.H}
        return alg
    for h in g.H:
        if g.valency(h) == 1 and g.m[h] == 1:
            raise UnsupportedShape(f"truncated vertex at half-edge {h}")
    arr = {h: f"a_{h}" for h in g.H}
    q = Quiver(verts, tuple((arr[h], elab[h], elab[g.sigma[h]]) for h in g.H))

    def cycle(h):
        out, x = [], h
        for _ in range(g.valency(h)):
            out.append(arr[x])
            x = g.sigma[x]
        return tuple(out) * g.m[h]

    rels = []
    for e in edges:
        h, h2 = e
        rels.append(((1, cycle(h)), (-1, cycle(h2))))
    for h in g.H:
        nxt = g.iota[g.sigma[h]]
        rels.append(((1, (arr[h], arr[nxt])),))
    bound = max(g.valency(h) * g.m[h] for h in g.H) + 1
    alg = path_basis(q, RelationSet(tuple(rels), nilpotency_bound=bound), fs, name=name)
    alg.half_edge_arrows = dict(arr)
    return alg


def bd_group_action(g: SkewBrauerGraph, d: Grading, alg: Algebra | None = None,
                    fs: FieldSpec = DEFAULT_FIELD) -> tuple[Algebra, QuiverAction]:
    """The level swap on the cover algebra, as a quiver action of Z2."""
    cover = double_cover(g, d)
    alg = alg if alg is not None else bg_algebra(cover, fs)
    edges = cover.edges()
    elab = {h: _edge_label(e) for e in edges for h in e}

    def swap(x):
        h, i = x.rsplit("_", 1)
        return lift(h, int(i) + 1)

    vperm = {elab[x]: elab[swap(x)] for x in cover.H}
    ha = alg.half_edge_arrows
    amap = {}
    for x in cover.H:
        a, b = ha[x], ha[swap(x)]
        if amap.get(a, (1, b)) != (1, b):
            raise ActionInvalid("level swap is not well defined on arrows")
        amap[a] = (1, b)
    for x in cover.H:
        # induced edge permutation is the level swap
        if vperm[elab[x]] != elab[swap(x)]:
            raise ActionInvalid("edge permutation differs from the level swap")
    return alg, QuiverAction([vperm], [amap], name="level-swap")


# -- the skew corner ---------------------------------------------------------

@dataclass
class SkewBrauerResult:
    graph: SkewBrauerGraph
    grading: Grading
    cover: SkewBrauerGraph
    cover_algebra: Algebra
    bundle: object
    corner: Algebra
    f: np.ndarray
    corner_idempotents: dict        # (edge index, i) -> corner vector, i in None, 0, 1
    corner_arrows: dict             # (h, i, j) -> corner vector
    chi: np.ndarray                 # matrix of the generator formula on the corner
    checks: dict = field(default_factory=dict)


def skew_bg_algebra(g: SkewBrauerGraph, d: Grading, fs: FieldSpec = DEFAULT_FIELD) -> SkewBrauerResult:
    cover = double_cover(g, d)
    B = bg_algebra(cover, fs)
    _, qa = bd_group_action(g, d, B, fs)
    grp = FiniteAbelianGroup([2], name="Z2")
    bundle = skew_algebra(B, qa, grp, name=B.name)
    full = bundle.full
    p = fs.p
    gen = grp.generators[0]
    one = grp.identity
    inv2 = fs.inv(2)
    cel = {h: _edge_label(e) for e in cover.edges() for h in e}
    vl = list(B.vertex_labels)

    def e_full(x):
        return bundle.tensor(B.idempotents[vl.index(cel[x])], one)

    f = np.zeros(full.dim, dtype=np.int64)
    for e in g.edges():
        f = (f + e_full(lift(e[0], 0))) % p
    if not np.array_equal(f, bundle.ebar):
        raise ValidationError("level-0 idempotent f differs from the corner idempotent")
    cspan = Span(fs, bundle.corner_embed, full.dim)

    def to_corner(v):
        return cspan.coords(v)

    # idempotents f_[h]_i
    fid = {}
    for k, e in enumerate(g.edges()):
        base = e_full(lift(e[0], 0))
        if g.iota[e[0]] != e[0]:
            fid[(k, None)] = base
        else:
            gb = bundle.tensor(B.idempotents[vl.index(cel[lift(e[0], 0)])], gen)
            fid[(k, 0)] = ((base + gb) * inv2) % p
            fid[(k, 1)] = ((base - gb) * inv2) % p

    def levels(h):
        k = g.edge_of(h)
        return k, [i for (kk, i) in fid if kk == k]

    # beta_h = a_{h_0} (x) g^{d(h)}
    ha = B.half_edge_arrows
    arrows = {}
    for h in g.H:
        a = B.path_element([(1, (ha[lift(h, 0)],))])
        beta = bundle.tensor(a, grp.power(gen, d(h)))
        ks, Is = levels(h)
        kt, Js = levels(g.sigma[h])
        for i, j in product(Is, Js):
            v = full.mul(full.mul(fid[(ks, i)], beta), fid[(kt, j)])
            arrows[(h, i, j)] = v

    def bump(i):
        return None if i is None else (i + 1) % 2

    gens = [(("e", key), v) for key, v in fid.items()] + [(("a", key), v) for key, v in arrows.items()]
    img = {}
    for (kind, key), v in gens:
        if kind == "e":
            k, i = key
            img[(kind, key)] = fid[(k, bump(i))]
        else:
            h, i, j = key
            sgn = -1 if d(h) else 1
            img[(kind, key)] = (sgn * arrows[(h, bump(i), bump(j))]) % p
    chi = _extend_generator_map(full, [v for _, v in gens], [img[k] for k, _ in gens], f, to_corner,
                                bundle.corner.dim)
    res = SkewBrauerResult(g, d, cover, B, bundle, bundle.corner, f,
                           {k: to_corner(v) for k, v in fid.items()},
                           {k: to_corner(v) for k, v in arrows.items()}, chi)
    dual = restrict_action_to_corner(bundle, dual_action(bundle))
    chi_dual = dual.aut[dual.group.generators[0]]
    res.checks = {
        "chi_automorphism": _check_automorphism(bundle.corner, chi),
        "chi_order_2": np.array_equal((chi @ chi) % p, np.eye(bundle.corner.dim, dtype=np.int64)),
        "chi_matches_dual": np.array_equal(chi % p, chi_dual % p),
    }
    return res


def _extend_generator_map(full: Algebra, gens, imgs, f, to_corner, n: int) -> np.ndarray:
    """Matrix on the corner of the multiplicative extension of gens -> imgs.

    Words in the generators are grown until no new products appear; every word
    must map consistently, otherwise the formula does not define a linear map.
    """
    fs = full.fs
    p = fs.p
    words = [(g, h) for g, h in zip(gens, imgs) if g.any() or h.any()]
    for g, h in zip(gens, imgs):
        if not g.any() and h.any():
            raise ActionInvalid("generator formula sends zero to a nonzero element")
    frontier = list(words)
    span = Span(fs, np.array([w for w, _ in words], dtype=np.int64).reshape(-1, full.dim), full.dim)
    while frontier:
        new = []
        for (w, iw), (g, ig) in product(frontier, zip(gens, imgs)):
            x, ix = full.mul(w, g), full.mul(iw, ig)
            if not x.any() and not ix.any():
                continue
            words.append((x, ix))
            if x.any() and not span.contains(x):
                span = span.extend(x)
                new.append((x, ix))
        frontier = new
    V = np.array([to_corner(w) for w, _ in words], dtype=np.int64)
    W = np.array([to_corner(iw) for _, iw in words], dtype=np.int64)
    if fs.rank(V) != n:
        raise ActionInvalid("generators do not span the corner")
    XT = fs.solve(V, W)
    if XT is None:
        raise ActionInvalid("generator formula is not consistent with the relations")
    return XT.T.copy() % p


def corner_dimension_oracle(res: SkewBrauerResult) -> int:
    """sum over level-0 edges i, j and group elements g of dim e_i B_d e_{g(j)}."""
    B = res.cover_algebra
    C = B.cartan_matrix()
    vl = list(B.vertex_labels)
    cel = {h: _edge_label(e) for e in res.cover.edges() for h in e}
    reps = [vl.index(cel[lift(e[0], 0)]) for e in res.graph.edges()]
    act = B.group_action
    total = 0
    for i in reps:
        for j in reps:
            for gg in act.group.elements:
                total += int(C[i, act.perm[gg][j]])
    return total


# -- structural checks ------------------------------------------------------

@dataclass
class BiserialReport:
    ok: bool
    witnesses: list

    def __bool__(self):
        return self.ok


def is_special_biserial(q: Quiver, r: RelationSet | None = None, fs: FieldSpec = DEFAULT_FIELD,
                        alg: Algebra | None = None) -> BiserialReport:
    if alg is None:
        alg = path_basis(q, r if r is not None else RelationSet(), fs)
    wit = []
    for v in q.vertices:
        outs = [a for a, s, _ in q.arrows if s == v]
        ins = [a for a, _, t in q.arrows if t == v]
        if len(outs) > 2:
            wit.append(f"vertex {v}: {len(outs)} arrows start here")
        if len(ins) > 2:
            wit.append(f"vertex {v}: {len(ins)} arrows end here")
    for a, s, t in q.arrows:
        after = [b for b, s2, _ in q.arrows if s2 == t and not in_ideal(alg, [(1, (a, b))])]
        before = [c for c, _, t2 in q.arrows if t2 == s and not in_ideal(alg, [(1, (c, a))])]
        if len(after) > 1:
            wit.append(f"arrow {a}: nonzero continuations {after}")
        if len(before) > 1:
            wit.append(f"arrow {a}: nonzero predecessors {before}")
    return BiserialReport(not wit, wit)


def is_symmetric(a: Algebra, seed: int = 0, trials: int = 8) -> bool:
    """Existence of a trace form with nondegenerate Gram matrix.

    The forms vanishing on commutators form a subspace; a random member is
    nondegenerate unless every member is, up to probability (dim / p) per trial.
    """
    fs = a.fs
    p = fs.p
    n = a.dim
    M = a.mult  # M[i, j] = coords of b_i b_j
    comm = (M - M.transpose(1, 0, 2)).reshape(n * n, n) % p
    forms = fs.kernel_matrix(comm)     # columns: lambdas with comm @ lam = 0
    if forms.shape[1] == 0:
        return n == 0
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        lam = (forms @ rng.integers(0, p, size=forms.shape[1])) % p
        gram = (M @ lam) % p
        if fs.rank(gram) == n:
            return True
    return False


def verify_brauer(name: str, g: SkewBrauerGraph, d: Grading, fs: FieldSpec = DEFAULT_FIELD) -> list[CheckRow]:
    rows = []
    cover = double_cover(g, d)
    rows.append(CheckRow(f"{name}:cover", "|H_d|=2|H|", len(cover.H), 2 * len(g.H)))
    rows.append(CheckRow(f"{name}:cover", "edges=|H_d|/2", len(cover.edges()), len(cover.H) // 2))
    rows.append(CheckRow(f"{name}:cover", "m_d=m", sum(cover.m[lift(h, i)] == g.m[h] for h in g.H for i in (0, 1)),
                         len(cover.H)))
    if not g.Hx and all(d(h) == 0 for h in g.H):
        rows.append(CheckRow(f"{name}:cover", "two-copies", int(graphs_isomorphic(cover, disjoint_union(g, g))), 1))
    res = skew_bg_algebra(g, d, fs)
    B = res.cover_algebra
    sb = is_special_biserial(B.quiver, B.relations, fs, alg=B)
    rows.append(CheckRow(f"{name}:B_d", "special-biserial", int(sb.ok), 1, detail="; ".join(sb.witnesses)))
    rows.append(CheckRow(f"{name}:B_d", "symmetric", int(is_symmetric(B)), 1))
    rows.append(CheckRow(f"{name}:corner", "dim=brute-force", res.corner.dim, corner_dimension_oracle(res)))
    for key, ok in res.checks.items():
        rows.append(CheckRow(f"{name}:corner", key, int(bool(ok)), 1))
    if g.is_ordinary:
        try:
            base = bg_algebra(g, fs)
        except UnsupportedShape:
            base = None
        if base is not None and all(d(h) == 0 for h in g.H):
            rows.append(CheckRow(f"{name}:corner", "dim=bg_algebra(g)", res.corner.dim, base.dim))
    return rows
