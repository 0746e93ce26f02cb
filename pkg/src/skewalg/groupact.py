"""Finite abelian groups acting on algebras, and skew group algebras.

The skew group algebra of ``A`` by ``G`` has basis ``b (x) g`` with product

    (l (x) g) (m (x) h) = l * g(m) (x) gh,

and full basis index ``b * |G| + index(g)``. Group elements are residue
tuples enumerated in lexicographic order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from math import gcd, lcm, prod

import numpy as np

from .errors import ActionInvalid, FieldIncompatible, NotBasic, ValidationError
from .exactfield import FieldSpec, Span
from .quivalg import Algebra, _as_path, gabriel_quiver


class FiniteAbelianGroup:
    """Z/n_1 x ... x Z/n_k with elements as residue tuples."""

    def __init__(self, cyclic_orders, name: str = ""):
        self.orders = tuple(int(n) for n in cyclic_orders)
        if any(n < 1 for n in self.orders):
            raise ValidationError("cyclic orders must be positive")
        self.name = name
        self.elements = [tuple(g) for g in product(*(range(n) for n in self.orders))]
        self._index = {g: k for k, g in enumerate(self.elements)}

    def __repr__(self):
        return f"FiniteAbelianGroup({list(self.orders)})"

    def __eq__(self, other):
        return isinstance(other, FiniteAbelianGroup) and self.orders == other.orders

    def __hash__(self):
        return hash(self.orders)

    @property
    def order(self) -> int:
        return prod(self.orders)

    @property
    def exponent(self) -> int:
        return lcm(*self.orders) if self.orders else 1

    @property
    def identity(self) -> tuple:
        return tuple(0 for _ in self.orders)

    @property
    def generators(self) -> list:
        return [tuple(int(i == k) for i in range(len(self.orders))) for k in range(len(self.orders))]

    def index(self, g) -> int:
        return self._index[tuple(g)]

    def mul(self, g, h) -> tuple:
        return tuple((a + b) % n for a, b, n in zip(g, h, self.orders))

    def inv(self, g) -> tuple:
        return tuple((-a) % n for a, n in zip(g, self.orders))

    def power(self, g, k: int) -> tuple:
        return tuple((a * k) % n for a, n in zip(g, self.orders))

    def check_field(self, fs: FieldSpec):
        if (fs.p - 1) % self.exponent:
            raise FieldIncompatible(f"exponent {self.exponent} does not divide p-1 = {fs.p - 1}")
        if gcd(fs.p, self.order) != 1:
            raise FieldIncompatible(f"p = {fs.p} divides |G| = {self.order}")

    def characters(self, fs: FieldSpec) -> list["Character"]:
        """All characters, indexed by exponent tuples in lexicographic order."""
        self.check_field(fs)
        roots = [fs.root_of_unity(n) for n in self.orders]
        out = []
        for k in self.elements:
            vals = {}
            for g in self.elements:
                v = 1
                for r, kk, gg in zip(roots, k, g):
                    v = v * pow(r, kk * gg, fs.p) % fs.p
                vals[g] = v
            out.append(Character(self, k, vals, _char_label(self, k)))
        return out


def _char_label(grp: FiniteAbelianGroup, k) -> str:
    if not any(k):
        return "+"
    if grp.orders == (2,):
        return "-"
    return "chi" + "".join(str(x) for x in k)


@dataclass
class Character:
    group: FiniteAbelianGroup
    key: tuple
    values: dict
    label: str

    def __call__(self, g) -> int:
        return self.values[tuple(g)]

    def check_multiplicative(self, fs: FieldSpec) -> bool:
        G = self.group
        return all(self(G.mul(g, h)) == self(g) * self(h) % fs.p for g in G.elements for h in G.elements)


def subgroup_characters(chars, sub) -> list[tuple[str, dict]]:
    """Distinct restrictions of ``chars`` to the subgroup ``sub`` (first label wins)."""
    seen, out = set(), []
    for c in chars:
        vals = tuple(c(g) for g in sub)
        if vals not in seen:
            seen.add(vals)
            out.append((c.label, dict(zip(sub, vals))))
    return out


@dataclass
class QuiverAction:
    """Action of a group on a bound quiver algebra, given on cyclic generators.

    ``vertex_perm[k]`` maps vertex ids, ``arrow_map[k]`` maps an arrow to
    ``(scalar, arrow)``.
    """

    vertex_perm: list
    arrow_map: list
    name: str = ""


@dataclass
class GroupAction:
    """A group acting on an algebra by automorphisms permuting its idempotents.

    ``aut[g]`` is the column-convention matrix of the automorphism ``g``;
    ``perm[g][i]`` is the index of the idempotent ``g(e_i)``.
    """

    group: FiniteAbelianGroup
    algebra: Algebra
    aut: dict
    perm: dict

    def apply(self, g, x) -> np.ndarray:
        return (self.aut[tuple(g)] @ np.asarray(x, dtype=np.int64)) % self.algebra.fs.p

    def stabilizer(self, i: int) -> list:
        return [g for g in self.group.elements if self.perm[g][i] == i]

    def orbit(self, i: int) -> list:
        out = []
        for g in self.group.elements:
            j = self.perm[g][i]
            if j not in out:
                out.append(j)
        return out

    def representatives(self) -> list[int]:
        reps, seen = [], set()
        for i in range(len(self.algebra.idempotents)):
            if i not in seen:
                reps.append(i)
                seen.update(self.orbit(i))
        return reps


def _induced_generator_matrix(alg: Algebra, vperm: dict, amap: dict) -> np.ndarray:
    q = alg.quiver
    n = alg.dim
    out = np.zeros((n, n), dtype=np.int64)
    p = alg.fs.p
    for k, (v, arrs) in enumerate(alg.basis_paths):
        if not arrs:
            img = (vperm[v], ())
            coef = 1
        else:
            coef, new = 1, []
            for a in arrs:
                c, b = amap[a]
                coef = coef * c % p
                new.append(b)
            img = (q.source(new[0]), tuple(new))
        out[:, k] = coef * alg._reduce_path(img) % p
    return out


def _check_automorphism(alg: Algebra, m: np.ndarray) -> bool:
    p = alg.fs.p
    # g(b_i b_j) = g(b_i) g(b_j) on all pairs
    lhs = np.einsum("ijk,lk->ijl", alg.mult, m) % p
    imgs = m.T  # row i = g(b_i)
    rhs = alg.products(imgs, imgs).reshape(alg.dim, alg.dim, alg.dim)
    return np.array_equal(lhs, rhs) and alg.fs.is_invertible(m)


def _idempotent_perm(alg: Algebra, m: np.ndarray) -> list[int]:
    p = alg.fs.p
    out = []
    keys = {tuple(e): k for k, e in enumerate(alg.idempotents)}
    for e in alg.idempotents:
        img = tuple((m @ e) % p)
        if img not in keys:
            raise ActionInvalid("group element does not permute the distinguished idempotents")
        out.append(keys[img])
    return out


def action_from_generators(alg: Algebra, grp: FiniteAbelianGroup, gen_mats) -> GroupAction:
    """Extend generator automorphisms to the group and validate the action."""
    fs = alg.fs
    p = fs.p
    n = alg.dim
    eye = np.eye(n, dtype=np.int64)
    gen_mats = [np.asarray(m, dtype=np.int64) % p for m in gen_mats]
    if len(gen_mats) != len(grp.orders):
        raise ActionInvalid("one automorphism per cyclic generator is required")
    for m, order in zip(gen_mats, grp.orders):
        if not _check_automorphism(alg, m):
            raise ActionInvalid("generator map is not an algebra automorphism")
        acc = eye
        for _ in range(order):
            acc = (m @ acc) % p
        if not np.array_equal(acc, eye):
            raise ActionInvalid("generator order does not act as the identity")
    for a, b in product(gen_mats, repeat=2):
        if not np.array_equal((a @ b) % p, (b @ a) % p):
            raise ActionInvalid("generator automorphisms do not commute")
    aut = {}
    for g in grp.elements:
        acc = eye
        for m, k in zip(gen_mats, g):
            for _ in range(k):
                acc = (m @ acc) % p
        aut[g] = acc
    perm = {g: _idempotent_perm(alg, aut[g]) for g in grp.elements}
    act = GroupAction(grp, alg, aut, perm)
    for i in act.representatives():
        stab = act.stabilizer(i)
        if len(stab) != grp.order and len(stab) != 1:
            raise ActionInvalid(
                f"orbit of vertex {alg.vertex_labels[i]} has size {len(act.orbit(i))}, "
                f"neither 1 nor |G| = {grp.order}: orbit assumption fails")
    return act


def quiver_action(alg: Algebra, act: QuiverAction, grp: FiniteAbelianGroup) -> GroupAction:
    """Validate a quiver action on a bound quiver algebra and induce automorphisms."""
    q = alg.quiver
    if q is None:
        raise ActionInvalid("quiver actions need a bound quiver algebra")
    grp.check_field(alg.fs)
    if len(act.vertex_perm) != len(grp.orders) or len(act.arrow_map) != len(grp.orders):
        raise ActionInvalid("one vertex permutation and arrow map per cyclic generator")
    mats = []
    p = alg.fs.p
    for vperm, amap in zip(act.vertex_perm, act.arrow_map):
        vperm = {v: vperm.get(v, v) for v in q.vertices}
        if sorted(vperm.values()) != sorted(q.vertices):
            raise ActionInvalid("vertex map is not a permutation")
        amap = {a: amap.get(a, (1, a)) for a in q.arrow_ids()}
        if sorted(b for _, b in amap.values()) != sorted(q.arrow_ids()):
            raise ActionInvalid("arrow map is not a permutation")
        for a, (c, b) in amap.items():
            if c % p == 0:
                raise ActionInvalid(f"arrow {a} is sent to a zero multiple")
            if vperm[q.source(a)] != q.source(b) or vperm[q.target(a)] != q.target(b):
                raise ActionInvalid(f"arrow map does not respect incidence at {a}")
        # relations go into the ideal
        for rel in alg.relations.relations:
            img = []
            for c, pth in rel:
                path = _as_path(q, pth)
                coef, new = c, []
                for a in path[1]:
                    cc, b = amap[a]
                    coef = coef * cc % p
                    new.append(b)
                img.append((coef, (q.source(new[0]), tuple(new))))
            if not alg.ideal.contains(alg.paths.vector(img)):
                raise ActionInvalid("a relation is not mapped into the ideal")
        mats.append(_induced_generator_matrix(alg, vperm, amap))
    return action_from_generators(alg, grp, mats)


@dataclass
class SkewAlgebraBundle:
    base: Algebra
    group: FiniteAbelianGroup
    action: GroupAction
    full: Algebra
    ebar: np.ndarray
    corner: Algebra
    corner_vertices: list
    corner_idempotents_full: list   # e_{i0 rho} as full vectors
    corner_embed: np.ndarray        # rows: corner basis as full vectors
    characters: list = field(default_factory=list)
    dual: GroupAction | None = None

    def full_index(self, b: int, g) -> int:
        return b * self.group.order + self.group.index(g)

    def tensor(self, x, g) -> np.ndarray:
        """Full vector of ``x (x) g`` for a base element ``x``."""
        out = np.zeros(self.full.dim, dtype=np.int64)
        gi = self.group.index(g)
        out[gi::self.group.order] = x
        return out % self.full.fs.p

    def group_element(self, g) -> np.ndarray:
        return self.tensor(self.base.unit, g)

    def to_full(self, c) -> np.ndarray:
        return (np.asarray(c, dtype=np.int64) @ self.corner_embed) % self.full.fs.p


def skew_product(act: GroupAction, name: str = "") -> SkewAlgebraBundle:
    """Skew group algebra of ``act.algebra`` by ``act.group`` with its basic corner."""
    alg, grp = act.algebra, act.group
    fs = alg.fs
    p = fs.p
    grp.check_field(fs)
    n, G = alg.dim, grp.order
    N = n * G
    els = grp.elements
    mult = np.zeros((n, G, n, G, n, G), dtype=np.int64)
    for gi, g in enumerate(els):
        # Mg[b, c, l] = coords of b * g(c)
        Mg = np.einsum("bkl,kc->bcl", alg.mult, act.aut[g]) % p
        for hi, h in enumerate(els):
            mult[:, gi, :, hi, :, grp.index(grp.mul(g, h))] = Mg
    mult = mult.reshape(N, N, N)
    labels = [f"{lab}⊗{''.join(map(str, g))}" for lab in alg.labels for g in els]

    def tensor(x, g):
        out = np.zeros(N, dtype=np.int64)
        out[grp.index(g)::G] = x
        return out % p

    chars = grp.characters(fs)
    idem, vlabels = [], []
    for i, e in enumerate(alg.idempotents):
        stab = act.stabilizer(i)
        inv_s = fs.inv(len(stab))
        for lab, rho in subgroup_characters(chars, stab):
            v = np.zeros(N, dtype=np.int64)
            for g in stab:
                v = (v + rho[g] * inv_s * tensor(e, g)) % p
            idem.append(v)
            vlabels.append((alg.vertex_labels[i], lab))
    gens = [tensor(x, grp.identity) for x in alg.generators]
    gens += [tensor(alg.unit, s) for s in grp.generators]
    rad = None
    if alg.rad_basis is not None:
        rad = [tensor(r, g) for r in alg.rad_basis for g in els]
        rad = np.array(rad, dtype=np.int64).reshape(-1, N)
    full = Algebra(fs, labels, mult, tensor(alg.unit, grp.identity), idem, vertex_labels=vlabels,
                   generators=gens, rad_basis=rad, name=f"{name or alg.name}G")
    if full.dim != alg.dim * grp.order:
        raise ValidationError("skew algebra has the wrong dimension")
    reps = act.representatives()
    ebar = np.zeros(N, dtype=np.int64)
    for i in reps:
        ebar = (ebar + tensor(alg.idempotents[i], grp.identity)) % p
    if not np.array_equal(full.mul(ebar, ebar), ebar):
        raise ValidationError("ebar is not idempotent")
    cv_idx = [k for k, (v, _) in enumerate(vlabels) if alg.vertex_labels.index(v) in reps]
    corner_idem_full = [idem[k] for k in cv_idx]
    corner_vertices = [vlabels[k] for k in cv_idx]
    tot = np.zeros(N, dtype=np.int64)
    for e in corner_idem_full:
        tot = (tot + e) % p
    if not np.array_equal(tot, ebar):
        raise ValidationError("corner idempotents do not sum to ebar")
    # Morita fullness: A ebar A = A
    left = full.products(np.eye(N, dtype=np.int64), [ebar])
    if full.span(full.products(left, np.eye(N, dtype=np.int64))).dim != N:
        raise ValidationError("ebar is not a full idempotent")
    cspan = full.sandwich(ebar, ebar)
    rows = cspan.rows
    k = rows.shape[0]
    cmult = np.zeros((k, k, k), dtype=np.int64)
    prods = full.products(rows, rows).reshape(k, k, N)
    for i in range(k):
        cmult[i] = cspan.coords(prods[i])
    crad = None
    if rad is not None:
        jr = full.products(full.products([ebar], rad), [ebar])
        jspan = full.span(jr)
        crad = cspan.coords(jspan.rows) if jspan.dim else np.zeros((0, k), dtype=np.int64)
    corner = Algebra(fs, [f"c{t}" for t in range(k)], cmult, cspan.coords(ebar),
                     [cspan.coords(e) for e in corner_idem_full],
                     vertex_labels=[_vlabel(v) for v in corner_vertices],
                     rad_basis=crad, name=f"corner({full.name})")
    bundle = SkewAlgebraBundle(alg, grp, act, full, ebar, corner, corner_vertices,
                               corner_idem_full, rows, chars)
    if rad is not None:
        check_radical(full)
        gabriel_quiver(corner)  # primitivity witness: raises NotBasic otherwise
    alg.group_action = act
    return bundle


def _vlabel(v) -> str:
    i, rho = v
    return f"({i},{rho})"


def skew_algebra(lam: Algebra, act: QuiverAction, grp: FiniteAbelianGroup, name: str = "") -> SkewAlgebraBundle:
    return skew_product(quiver_action(lam, act, grp), name=name)


def check_radical(alg: Algebra):
    """Verify ``alg.rad_basis`` is a nilpotent ideal with split semisimple quotient."""
    J = alg.span(alg.rad_basis)
    basis = np.eye(alg.dim, dtype=np.int64)
    if J.dim and not (J.contains_all(alg.products(basis, J.rows)) and J.contains_all(alg.products(J.rows, basis))):
        raise ValidationError("radical candidate is not a two-sided ideal")
    cur = J
    for _ in range(alg.dim + 1):
        if cur.dim == 0:
            break
        cur = alg.span(alg.products(cur.rows, J.rows))
    if cur.dim:
        raise ValidationError("radical candidate is not nilpotent")
    idem = alg.idempotents

    def quot_dim(e, f):
        s = alg.sandwich(e, f)
        if J.dim == 0:
            return s.dim, s
        sj = alg.span(alg.products(alg.products([e], J.rows), [f]))
        return s.dim - sj.dim, s

    for i, e in enumerate(idem):
        if quot_dim(e, e)[0] != 1:
            raise NotBasic(f"corner at {alg.vertex_labels[i]} modulo the radical is not one-dimensional")
    for i, j in product(range(len(idem)), repeat=2):
        if i == j:
            continue
        d, s = quot_dim(idem[i], idem[j])
        if d > 1:
            raise NotBasic("off-diagonal corner of the semisimple quotient exceeds dimension one")
        if d == 1:
            # some element of e_i A e_j times e_j A e_i must survive modulo J
            back = alg.sandwich(idem[j], idem[i]).rows
            prods = alg.products(s.rows, back)
            if not prods.size or J.contains_all(prods):
                raise ValidationError("quotient by the radical candidate is not semisimple")


def dual_action(bundle: SkewAlgebraBundle) -> GroupAction:
    """The character group acting on the skew algebra by chi(l (x) g) = chi(g) l (x) g."""
    full, grp = bundle.full, bundle.group
    fs = full.fs
    p = fs.p
    dual_grp = FiniteAbelianGroup(grp.orders, name=f"dual({grp.name})")
    chars = {c.key: c for c in bundle.characters}
    aut = {}
    for k in dual_grp.elements:
        chi = chars[k]
        diag = np.array([chi(g) for _ in range(bundle.base.dim) for g in grp.elements], dtype=np.int64)
        aut[k] = np.diag(diag) % p
    for k, m in aut.items():
        if not _check_automorphism(full, m):
            raise ActionInvalid("character map is not an automorphism")
    for a, b in product(dual_grp.elements, repeat=2):
        if not np.array_equal((aut[a] @ aut[b]) % p, aut[dual_grp.mul(a, b)]):
            raise ActionInvalid("character maps do not compose like characters")
    perm = {k: _idempotent_perm(full, aut[k]) for k in dual_grp.elements}
    act = GroupAction(dual_grp, full, aut, perm)
    bundle.dual = act
    full.group_action = act
    return act


def restrict_action_to_corner(bundle: SkewAlgebraBundle, act: GroupAction) -> GroupAction:
    """Restrict an action on the full skew algebra that fixes ebar to the basic corner."""
    full, corner = bundle.full, bundle.corner
    p = full.fs.p
    cspan = Span(full.fs, bundle.corner_embed, full.dim)
    aut = {}
    for g, m in act.aut.items():
        if not np.array_equal((m @ bundle.ebar) % p, bundle.ebar):
            raise ActionInvalid("action does not fix ebar")
        imgs = (bundle.corner_embed @ m.T) % p   # rows: images of corner basis
        aut[g] = cspan.coords(imgs).T.copy()
    perm = {g: _idempotent_perm(corner, aut[g]) for g in act.group.elements}
    return GroupAction(act.group, corner, aut, perm)


def cartan_equivalent(c1: np.ndarray, c2: np.ndarray) -> bool:
    """Whether two Cartan matrices agree after a simultaneous relabelling."""
    if c1.shape != c2.shape:
        return False
    k = c1.shape[0]
    if k > 8:
        raise ValidationError("Cartan comparison is exhaustive and limited to 8 vertices")
    return any(np.array_equal(c1[np.ix_(s, s)], c2) for s in map(list, permutations(range(k))))


def double_skew_check(bundle: SkewAlgebraBundle) -> dict:
    """Skew the basic corner by the dual group and compare with the base algebra.

    Returns the vertex counts and Cartan matrices on both sides.
    """
    dual = bundle.dual or dual_action(bundle)
    cact = restrict_action_to_corner(bundle, dual)
    b2 = skew_product(cact, name="dual-skew")
    c_base = bundle.base.cartan_matrix()
    c_back = b2.corner.cartan_matrix()
    return {
        "base_vertices": len(bundle.base.idempotents),
        "back_vertices": len(b2.corner.idempotents),
        "base_cartan": c_base,
        "back_cartan": c_back,
        "match": cartan_equivalent(c_base, c_back),
        "bundle": b2,
    }
