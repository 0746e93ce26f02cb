"""The morphism category H(mod A): objects are module maps, morphisms commuting squares.

An object ``f: X -> Y`` is a ``MorphismObject``; a morphism ``f -> h`` is a
pair ``(a, b)`` with ``a: X -> X'``, ``b: Y -> Y'`` and ``b f = h a``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import AlgebraMismatch, Inconclusive, NotAHomomorphism
from .groupact import SkewAlgebraBundle
from .repcat import (DEFAULT_BUDGET, CheckRow, FDModule, Indecomposable, Iso, NonIso,
                     analyze_endomorphisms, direct_sum, eta, eta_inverse, hom_space, is_homomorphism,
                     modules_isomorphic, pairing_rank, pushdown_full, pushdown_morphism, restrict,
                     stabilizer, submodule, trace_radical, twist, zero_module)


class MorphismObject:
    def __init__(self, source: FDModule, target: FDModule, map_, name: str = "", check: bool = True):
        if source.algebra is not target.algebra:
            raise AlgebraMismatch("morphism object across algebras")
        self.source, self.target = source, target
        self.map = np.asarray(map_, dtype=np.int64).reshape(target.dim, source.dim) % source.fs.p
        self.name = name
        if check and not is_homomorphism(self.map, source, target):
            raise NotAHomomorphism(f"map of {name or 'morphism object'} does not intertwine")

    def __repr__(self):
        return f"MorphismObject({self.name}: {self.source.name} -> {self.target.name})"

    @property
    def algebra(self):
        return self.source.algebra

    @property
    def fs(self):
        return self.source.fs

    @property
    def dim(self) -> int:
        return self.source.dim + self.target.dim

    def is_mono(self) -> bool:
        return self.fs.rank(self.map) == self.source.dim

    def rank(self) -> int:
        return self.fs.rank(self.map) if self.map.size else 0


@dataclass
class HHomBasis:
    source: MorphismObject
    target: MorphismObject
    basis: list  # pairs (a, b)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def combine(self, coeffs):
        p = self.source.fs.p
        a = np.zeros((self.target.source.dim, self.source.source.dim), dtype=np.int64)
        b = np.zeros((self.target.target.dim, self.source.target.dim), dtype=np.int64)
        for c, (x, y) in zip(coeffs, self.basis):
            a = (a + int(c) * x) % p
            b = (b + int(c) * y) % p
        return a, b

    def random(self, rng):
        return self.combine(rng.integers(0, self.source.fs.p, size=self.dim))

    def vectors(self) -> np.ndarray:
        n = (self.target.source.dim * self.source.source.dim
             + self.target.target.dim * self.source.target.dim)
        return np.array([pair_vector(x) for x in self.basis], dtype=np.int64).reshape(self.dim, n)


def pair_vector(pair) -> np.ndarray:
    a, b = pair
    return np.concatenate([np.asarray(a).ravel(), np.asarray(b).ravel()])


def is_square(pair, f: MorphismObject, h: MorphismObject) -> bool:
    a, b = pair
    p = f.fs.p
    return (is_homomorphism(a, f.source, h.source) and is_homomorphism(b, f.target, h.target)
            and np.array_equal((b @ f.map) % p, (h.map @ a) % p))


def hhom_space(f: MorphismObject, h: MorphismObject) -> HHomBasis:
    if f.algebra is not h.algebra:
        raise AlgebraMismatch("H-hom space across algebras")
    fs = f.fs
    p = fs.p
    A = hom_space(f.source, h.source).basis
    B = hom_space(f.target, h.target).basis
    if not A and not B:
        return HHomBasis(f, h, [])
    # sum_l d_l B_l f - sum_k c_k h A_k = 0
    cols = [((-(h.map @ a)) % p).ravel() for a in A] + [((b @ f.map) % p).ravel() for b in B]
    nrow = h.target.dim * f.source.dim
    if nrow == 0:
        K = np.eye(len(cols), dtype=np.int64)
    else:
        K = fs.kernel_matrix(np.array(cols, dtype=np.int64).reshape(len(cols), nrow).T)
    zeroA = np.zeros((h.source.dim, f.source.dim), dtype=np.int64)
    zeroB = np.zeros((h.target.dim, f.target.dim), dtype=np.int64)
    basis = []
    for k in range(K.shape[1]):
        c = K[:, k]
        a, b = zeroA.copy(), zeroB.copy()
        for ci, x in zip(c[:len(A)], A):
            a = (a + int(ci) * x) % p
        for ci, y in zip(c[len(A):], B):
            b = (b + int(ci) * y) % p
        basis.append((a, b))
    return HHomBasis(f, h, basis)


def compose_pairs(second, first, p: int):
    return ((second[0] @ first[0]) % p, (second[1] @ first[1]) % p)


def identity_object(m: FDModule, name: str = "") -> MorphismObject:
    return MorphismObject(m, m, np.eye(m.dim, dtype=np.int64), name=name or f"id_{m.name}", check=False)


def h_direct_sum(objs, name: str = "") -> MorphismObject:
    src = direct_sum([o.source for o in objs])
    tgt = direct_sum([o.target for o in objs])
    m = np.zeros((tgt.dim, src.dim), dtype=np.int64)
    r = c = 0
    for o in objs:
        m[r:r + o.target.dim, c:c + o.source.dim] = o.map
        r += o.target.dim
        c += o.source.dim
    return MorphismObject(src, tgt, m, name=name or "+".join(o.name for o in objs), check=False)


def h_twist(g, f: MorphismObject) -> MorphismObject:
    """Componentwise twist; the map matrix is unchanged."""
    tag = "".join(map(str, g))
    return MorphismObject(twist(g, f.source), twist(g, f.target), f.map, name=f"^{tag}{f.name}", check=False)


def h_pushdown(bundle: SkewAlgebraBundle, f: MorphismObject) -> MorphismObject:
    return MorphismObject(pushdown_full(bundle, f.source), pushdown_full(bundle, f.target),
                          pushdown_morphism(bundle, f.map), name=f"F({f.name})", check=False)


def h_pushdown_pair(bundle: SkewAlgebraBundle, pair):
    return (pushdown_morphism(bundle, pair[0]), pushdown_morphism(bundle, pair[1]))


def h_restrict(bundle: SkewAlgebraBundle, fbar: MorphismObject) -> MorphismObject:
    return MorphismObject(restrict(bundle, fbar.source), restrict(bundle, fbar.target), fbar.map,
                          name=f"res({fbar.name})", check=False)


# -- isomorphism and decomposition in H ----------------------------------

def _pair_as_block(pair) -> np.ndarray:
    a, b = pair
    out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=np.int64)
    out[:a.shape[0], :a.shape[1]] = a
    out[a.shape[0]:, a.shape[1]:] = b
    return out


def h_analyze(f: MorphismObject, rng, budget: int = DEFAULT_BUDGET):
    """Indecomposable or SplitWitness (a block-diagonal idempotent pair) for an H-object."""
    E = hhom_space(f, f)
    res = analyze_endomorphisms(f.fs, [_pair_as_block(x) for x in E.basis], rng, budget)
    return res


def h_residue_dim(f: MorphismObject) -> int:
    E = hhom_space(f, f)
    return trace_radical(f.fs, [_pair_as_block(x) for x in E.basis])[1]


def h_multiplicity(u: MorphismObject, n: MorphismObject) -> int:
    p = u.fs.p
    phis = hhom_space(u, n).basis
    psis = hhom_space(n, u).basis
    return pairing_rank(u.fs, phis, psis,
                        lambda ps, ph: int(np.trace((ps[0] @ ph[0]) % p) + np.trace((ps[1] @ ph[1]) % p)))


def h_isomorphic(f: MorphismObject, h: MorphismObject, seed: int = 0, budget: int = DEFAULT_BUDGET, rng=None):
    """Iso with an invertible pair, or NonIso with a certificate."""
    if f.algebra is not h.algebra:
        raise AlgebraMismatch("isomorphism test across algebras")
    rng = rng if rng is not None else np.random.default_rng(seed)
    for x, y, part in ((f.source, h.source, "sources"), (f.target, h.target, "targets")):
        r = modules_isomorphic(x, y, rng=rng, budget=budget)
        if isinstance(r, NonIso):
            return NonIso(f"{part} not isomorphic: {r.reason}")
    if f.rank() != h.rank():
        return NonIso("maps have different ranks")
    if f.dim == 0:
        return Iso((f.map[:0, :0], f.map))
    fs = f.fs
    H, Hb = hhom_space(f, h), hhom_space(h, f)
    ef, eh = hhom_space(f, f).dim, hhom_space(h, h).dim
    if len({H.dim, Hb.dim, ef, eh}) > 1:
        return NonIso(f"H-hom dimensions differ ({ef},{H.dim},{Hb.dim},{eh})")
    for _ in range(budget):
        a, b = H.random(rng)
        if fs.is_invertible(a) and fs.is_invertible(b):
            return Iso((a, b))
    for u in h_decompose(f, rng=rng, budget=budget):
        if h_residue_dim(u) == 1 and h_multiplicity(u, f) != h_multiplicity(u, h):
            return NonIso(f"summand {u.name} occurs with different multiplicities")
    raise Inconclusive("no H-isomorphism found and no obstruction certified")


def h_decompose(f: MorphismObject, seed: int = 0, budget: int = DEFAULT_BUDGET, rng=None) -> list:
    rng = rng if rng is not None else np.random.default_rng(seed)
    fs = f.fs
    p = fs.p
    if f.dim == 0:
        return []
    res = h_analyze(f, rng, budget)
    if isinstance(res, Indecomposable):
        return [f]
    e = res.idempotent
    ds = f.source.dim
    out = []
    for proj in (e, (np.eye(f.dim, dtype=np.int64) - e) % p):
        ea, eb = proj[:ds, :ds], proj[ds:, ds:]
        Ba, Bb = fs.column_basis(ea), fs.column_basis(eb)
        src, La = submodule(f.source, Ba) if Ba.shape[1] else (None, None)
        tgt, Lb = submodule(f.target, Bb) if Bb.shape[1] else (None, None)
        src = src if src is not None else zero_module(f.algebra)
        tgt = tgt if tgt is not None else zero_module(f.algebra)
        if Ba.shape[1] and Bb.shape[1]:
            m = (Lb @ f.map @ Ba) % p
        else:
            m = np.zeros((tgt.dim, src.dim), dtype=np.int64)
        out += h_decompose(MorphismObject(src, tgt, m, name=f.name, check=True), rng=rng, budget=budget)
    for k, o in enumerate(out):
        o.name = f"{f.name}[{k}]"
    return out


def h_stabilizer(f: MorphismObject, seed: int = 0, budget: int = DEFAULT_BUDGET) -> list:
    grp = f.algebra.group_action.group
    return stabilizer(f, grp, h_twist, lambda a, b: h_isomorphic(a, b, seed=seed, budget=budget))


# -- verification -----------------------------------------------------------

HGCM_CASES = {
    # (G_f == G, G_h == G) -> case
    (False, True): "I",
    (True, False): "II",
    (False, False): "III",
    (True, True): "IV",
}


def verify_hgcm(bundle: SkewAlgebraBundle, f: MorphismObject, h: MorphismObject, seed: int = 0,
                budget: int = DEFAULT_BUDGET, stabs: dict | None = None) -> CheckRow:
    grp = bundle.group
    stabs = stabs if stabs is not None else {}
    for x in (f, h):
        if id(x) not in stabs:
            stabs[id(x)] = h_stabilizer(x, seed=seed, budget=budget)
    full_f, full_h = len(stabs[id(f)]) == grp.order, len(stabs[id(h)]) == grp.order
    case = HGCM_CASES[(full_f, full_h)]
    lhs = hhom_space(h_pushdown(bundle, f), h_pushdown(bundle, h)).dim
    if case in ("I", "III"):
        rhs = sum(hhom_space(h_twist(g, f), h).dim for g in grp.elements)
        branch = f"{case}:sum_g H(^gf,h)"
    elif case == "II":
        rhs = sum(hhom_space(f, h_twist(g, h)).dim for g in grp.elements)
        branch = f"{case}:sum_g H(f,^gh)"
    else:
        rhs = grp.order * hhom_space(f, h).dim
        branch = f"{case}:|G|H(f,h)"
    return CheckRow(f"{f.name},{h.name}", branch, lhs, rhs)


@dataclass
class GstabReport:
    name: str
    part1: list = field(default_factory=list)   # (g, witness pair)
    part2: object = None                        # witness pair
    ok1: bool = True
    ok2: bool = True
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.ok1 and self.ok2


def verify_gstab(bundle: SkewAlgebraBundle, f: MorphismObject, seed: int = 0,
                 budget: int = DEFAULT_BUDGET) -> GstabReport:
    """Parts (1) and (2): HF(^gf) = HF(f), and HF^ HF(f) = sum_g ^gf, with invertible witnesses."""
    rng = np.random.default_rng(seed)
    rep = GstabReport(f.name)
    Ff = h_pushdown(bundle, f)
    for g in bundle.group.elements:
        r = h_isomorphic(h_pushdown(bundle, h_twist(g, f)), Ff, rng=rng, budget=budget)
        if isinstance(r, Iso):
            if not _check_h_iso(r.witness, h_pushdown(bundle, h_twist(g, f)), Ff):
                rep.ok1 = False
            rep.part1.append((g, r.witness))
        else:
            rep.ok1 = False
            rep.notes.append(f"(1) fails for g={g}: {r.reason}")
    tw = h_direct_sum([h_twist(g, f) for g in bundle.group.elements])
    r = h_isomorphic(h_restrict(bundle, Ff), tw, rng=rng, budget=budget)
    if isinstance(r, Iso) and _check_h_iso(r.witness, h_restrict(bundle, Ff), tw):
        rep.part2 = r.witness
    else:
        rep.ok2 = False
        rep.notes.append(f"(2) fails: {getattr(r, 'reason', 'bad witness')}")
    return rep


def _check_h_iso(pair, f: MorphismObject, h: MorphismObject) -> bool:
    fs = f.fs
    return is_square(pair, f, h) and fs.is_invertible(pair[0]) and fs.is_invertible(pair[1])


def verify_gstab_part3(bundle: SkewAlgebraBundle, objs, seed: int = 0, budget: int = DEFAULT_BUDGET) -> list:
    """For indecomposable objects with isomorphic pushdowns, find g with f1 = ^g f2.

    Returns rows ``(f1, f2, g or None, witness)``; g is None when no element works.
    """
    rng = np.random.default_rng(seed)
    inds = [f for f in objs if f.dim and isinstance(h_analyze(f, rng, budget), Indecomposable)]
    pushed = {id(f): h_pushdown(bundle, f) for f in inds}
    out = []
    for f1, f2 in product(inds, repeat=2):
        if isinstance(h_isomorphic(pushed[id(f1)], pushed[id(f2)], rng=rng, budget=budget), Iso):
            found = None
            for g in bundle.group.elements:
                r = h_isomorphic(f1, h_twist(g, f2), rng=rng, budget=budget)
                if isinstance(r, Iso):
                    found = (g, r.witness)
                    break
            out.append((f1, f2, found[0] if found else None, found[1] if found else None))
    return out


@dataclass
class HAdjReport:
    lhs_dim: int
    rhs_dim: int
    roundtrip_ok: bool
    lands_ok: bool
    naturality_ok: bool
    mono_checked: bool
    witnesses: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.lhs_dim == self.rhs_dim and self.roundtrip_ok and self.lands_ok and self.naturality_ok


def h_adjunction_check(bundle: SkewAlgebraBundle, f: MorphismObject, mbar: MorphismObject, seed: int = 0,
                       n_samples: int = 5) -> HAdjReport:
    """zeta: H(HF f, mbar) -> H(f, HF^ mbar) built componentwise from the module unit maps."""
    p = f.fs.p
    rng = np.random.default_rng(seed)
    Ff = h_pushdown(bundle, f)
    rm = h_restrict(bundle, mbar)
    H1 = hhom_space(Ff, mbar)
    H2 = hhom_space(f, rm)

    def zeta(pair):
        return (eta(bundle, f.source, pair[0]), eta(bundle, f.target, pair[1]))

    def zeta_inv(pair):
        return (eta_inverse(bundle, f.source, mbar.source, pair[0]),
                eta_inverse(bundle, f.target, mbar.target, pair[1]))

    rt, lands, nat, wit = True, True, True, []
    for k, x in enumerate(H1.basis):
        z = zeta(x)
        if not is_square(z, f, rm):
            lands = False
            wit.append(f"zeta(basis {k}) is not a square")
        if not all(np.array_equal(u, v) for u, v in zip(zeta_inv(z), x)):
            rt = False
            wit.append(f"zeta' zeta differs on basis {k}")
    for k, y in enumerate(H2.basis):
        z = zeta_inv(y)
        if not is_square(z, Ff, mbar):
            lands = False
            wit.append(f"zeta'(basis {k}) is not a square")
        if not all(np.array_equal(u, v) for u, v in zip(zeta(z), y)):
            rt = False
            wit.append(f"zeta zeta' differs on basis {k}")
    Ef, Em = hhom_space(f, f), hhom_space(mbar, mbar)
    for s in range(n_samples if H1.dim else 0):
        x = H1.random(rng)
        u = Ef.random(rng)
        v = Em.random(rng)
        lhs = zeta(compose_pairs(v, compose_pairs(x, h_pushdown_pair(bundle, u), p), p))
        rhs = compose_pairs(v, compose_pairs(zeta(x), u, p), p)
        if not all(np.array_equal(a % p, b % p) for a, b in zip(lhs, rhs)):
            nat = False
            wit.append(f"naturality square {s} fails")
    mono = f.is_mono() and mbar.is_mono()
    return HAdjReport(H1.dim, H2.dim, rt, lands, nat, mono, wit)
