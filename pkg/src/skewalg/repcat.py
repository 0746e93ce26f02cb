"""Right modules over structure-constant algebras and the pushdown functor.

Action matrices use the column convention: ``act[b] @ v`` is ``v . b``, so
``act(x y) = act(y) @ act(x)``. A homomorphism ``M -> N`` is a matrix
``F`` of shape ``(dim N, dim M)`` with ``F act_M(b) = act_N(b) F``;
composition is matrix product.

The pushdown of ``M`` is ``M (x) KG`` with carrier index
``group_index * dim M + i``; ``(b (x) h)`` sends block ``g`` to block
``gh`` through ``act_M(g(b))``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np
from sympy import ZZ
from sympy.polys.galoistools import gf_factor, gf_gcdex, gf_mul, gf_quo

from .errors import (AlgebraMismatch, Inconclusive, NoActionAttached, NotAHomomorphism,
                     StabilizerInconclusive, UniverseInvalid, ValidationError)
from .exactfield import FieldSpec
from .groupact import SkewAlgebraBundle
from .quivalg import Algebra

DEFAULT_BUDGET = 64


class FDModule:
    """A finite-dimensional right module given by one action matrix per basis element."""

    def __init__(self, algebra: Algebra, act, name: str = "", check: bool = True):
        self.algebra = algebra
        self.act = np.asarray(act, dtype=np.int64) % algebra.fs.p
        if self.act.ndim != 3 or self.act.shape[0] != algebra.dim or self.act.shape[1] != self.act.shape[2]:
            raise ValidationError("action array must have shape (dim A, d, d)")
        self.name = name
        if check:
            self.validate()

    def __repr__(self):
        return f"FDModule({self.name or '?'}, dim={self.dim})"

    @property
    def fs(self) -> FieldSpec:
        return self.algebra.fs

    @property
    def dim(self) -> int:
        return self.act.shape[1]

    def action(self, x) -> np.ndarray:
        """Action matrix of an algebra element given by coordinates."""
        x = np.asarray(x, dtype=np.int64) % self.fs.p
        return np.tensordot(x, self.act, axes=(0, 0)) % self.fs.p

    def dimension_vector(self) -> tuple:
        return tuple(self.fs.rank(self.action(e)) for e in self.algebra.idempotents)

    def validate(self):
        p = self.fs.p
        d = self.dim
        if not np.array_equal(self.action(self.algebra.unit), np.eye(d, dtype=np.int64)):
            raise ValidationError("unit does not act as the identity")
        m = self.algebra.mult
        lhs = np.tensordot(m, self.act, axes=([2], [0])) % p          # act(b_i b_j)
        rhs = np.einsum("jab,ibc->ijac", self.act, self.act) % p       # act(b_j) act(b_i)
        if not np.array_equal(lhs, rhs):
            raise ValidationError("action is not compatible with the multiplication (module axiom)")
        if sum(self.dimension_vector()) != d:
            raise ValidationError("dimension vector does not sum to the total dimension")

    @classmethod
    def from_representation(cls, alg: Algebra, dims: dict, arrows: dict, name: str = "") -> "FDModule":
        """Module of a bound quiver algebra from vertex dimensions and arrow matrices.

        ``arrows[a]`` for ``a: i -> j`` has shape ``(dims[j], dims[i])``.
        """
        q = alg.quiver
        if q is None:
            raise ValidationError("representations need a bound quiver algebra")
        p = alg.fs.p
        off, d = {}, 0
        for v in q.vertices:
            off[v] = d
            d += int(dims.get(v, 0))
        mats = {}
        for a, s, t in q.arrows:
            m = np.asarray(arrows.get(a, np.zeros((dims.get(t, 0), dims.get(s, 0)))), dtype=np.int64)
            m = m.reshape(int(dims.get(t, 0)), int(dims.get(s, 0))) % p
            mats[a] = m
        act = np.zeros((alg.dim, d, d), dtype=np.int64)
        for k, (v, arrs) in enumerate(alg.basis_paths):
            if not arrs:
                dv = int(dims.get(v, 0))
                act[k, off[v]:off[v] + dv, off[v]:off[v] + dv] = np.eye(dv, dtype=np.int64)
                continue
            acc = np.eye(int(dims.get(v, 0)), dtype=np.int64)
            for a in arrs:
                acc = (mats[a] @ acc) % p
            t = q.target(arrs[-1])
            act[k, off[t]:off[t] + acc.shape[0], off[v]:off[v] + acc.shape[1]] = acc
        return cls(alg, act, name=name)

    def direct_sum(self, other: "FDModule", name: str = "") -> "FDModule":
        return direct_sum([self, other], name=name)


def direct_sum(mods, name: str = "") -> FDModule:
    alg = mods[0].algebra
    for m in mods:
        if m.algebra is not alg:
            raise AlgebraMismatch("direct sum of modules over different algebras")
    d = sum(m.dim for m in mods)
    act = np.zeros((alg.dim, d, d), dtype=np.int64)
    o = 0
    for m in mods:
        act[:, o:o + m.dim, o:o + m.dim] = m.act
        o += m.dim
    return FDModule(alg, act, name=name or "+".join(m.name for m in mods), check=False)


def zero_module(alg: Algebra, name: str = "0") -> FDModule:
    return FDModule(alg, np.zeros((alg.dim, 0, 0), dtype=np.int64), name=name, check=False)


def submodule(m: FDModule, basis: np.ndarray, name: str = "") -> tuple[FDModule, np.ndarray]:
    """Submodule spanned by the columns of ``basis`` (must be invariant).

    Returns the module and a left inverse of ``basis``.
    """
    fs = m.fs
    L = fs.left_inverse(basis)
    act = np.einsum("kd,bde,ej->bkj", L, m.act, basis) % fs.p
    sub = FDModule(m.algebra, act, name=name, check=False)
    # invariance: basis @ act_sub(b) == act(b) @ basis
    if not np.array_equal(np.einsum("dk,bkj->bdj", basis, act) % fs.p,
                          np.einsum("bde,ej->bdj", m.act, basis) % fs.p):
        raise ValidationError("column span is not a submodule")
    return sub, L


@dataclass
class HomBasis:
    source: FDModule
    target: FDModule
    basis: list

    @property
    def dim(self) -> int:
        return len(self.basis)

    def combine(self, coeffs) -> np.ndarray:
        fs = self.source.fs
        out = np.zeros((self.target.dim, self.source.dim), dtype=np.int64)
        for c, f in zip(coeffs, self.basis):
            out = (out + int(c) * f) % fs.p
        return out

    def random(self, rng) -> np.ndarray:
        return self.combine(rng.integers(0, self.source.fs.p, size=self.dim))


def _intertwiner_kernel(fs: FieldSpec, pairs, rows: int, cols: int) -> np.ndarray:
    """Columns spanning ``{F : F A = B F for each (A, B) in pairs}``, F of shape rows x cols."""
    p = fs.p
    K = np.eye(rows * cols, dtype=np.int64)
    Ir, Ic = np.eye(rows, dtype=np.int64), np.eye(cols, dtype=np.int64)
    for A, B in pairs:
        if K.shape[1] == 0:
            break
        C = (np.kron(Ir, A.T) - np.kron(B, Ic)) % p
        CK = (C @ K) % p
        if not CK.any():
            continue
        ker = fs.kernel_matrix(CK)
        K = (K @ ker) % p
    return K


def hom_space(m: FDModule, n: FDModule) -> HomBasis:
    if m.algebra is not n.algebra:
        raise AlgebraMismatch("hom space between modules over different algebras")
    fs = m.fs
    alg = m.algebra
    if m.dim == 0 or n.dim == 0:
        return HomBasis(m, n, [])
    pairs = [(m.action(x), n.action(x)) for x in alg.generators]
    K = _intertwiner_kernel(fs, pairs, n.dim, m.dim)
    basis = [K[:, k].reshape(n.dim, m.dim).copy() for k in range(K.shape[1])]
    return HomBasis(m, n, basis)


def is_homomorphism(f: np.ndarray, m: FDModule, n: FDModule) -> bool:
    p = m.fs.p
    f = np.asarray(f, dtype=np.int64) % p
    if f.shape != (n.dim, m.dim):
        return False
    lhs = np.einsum("ij,bjk->bik", f, m.act) % p
    rhs = np.einsum("bij,jk->bik", n.act, f) % p
    return np.array_equal(lhs, rhs)


# -- group actions --------------------------------------------------------

def twist(g, m: FDModule) -> FDModule:
    """The twist ^gM with action b -> act_M(g^-1(b))."""
    act = m.algebra.group_action
    if act is None:
        raise NoActionAttached(f"no group action attached to {m.algebra!r}")
    g = tuple(g)
    ginv = act.group.inv(g)
    A = act.aut[ginv]
    new = np.einsum("lb,lxy->bxy", A, m.act) % m.fs.p
    return FDModule(m.algebra, new, name=f"^{''.join(map(str, g))}{m.name}", check=False)


def pushdown_full(bundle: SkewAlgebraBundle, m: FDModule) -> FDModule:
    """Induced module M (x)_A A G over the full skew algebra."""
    if m.algebra is not bundle.base:
        raise AlgebraMismatch("pushdown expects a module over the base algebra")
    grp = bundle.group
    fs = m.fs
    p = fs.p
    G, d, n = grp.order, m.dim, bundle.base.dim
    act = np.zeros((n, G, G * d, G * d), dtype=np.int64)
    for gi, g in enumerate(grp.elements):
        # act_M(g(b)) for every b
        Ag = np.einsum("lb,lxy->bxy", bundle.action.aut[g], m.act) % p
        for hi, h in enumerate(grp.elements):
            ti = grp.index(grp.mul(g, h))
            act[:, hi, ti * d:(ti + 1) * d, gi * d:(gi + 1) * d] = Ag
    act = act.reshape(n * G, G * d, G * d)
    return FDModule(bundle.full, act, name=f"F({m.name})", check=False)


def pushdown_morphism(bundle: SkewAlgebraBundle, f: np.ndarray, m: FDModule | None = None,
                      n: FDModule | None = None) -> np.ndarray:
    """Block-diagonal extension of f, one copy per group element."""
    if m is not None and n is not None and not is_homomorphism(f, m, n):
        raise NotAHomomorphism("pushdown_morphism needs an intertwining map")
    G = bundle.group.order
    return np.kron(np.eye(G, dtype=np.int64), np.asarray(f, dtype=np.int64)) % bundle.full.fs.p


def restrict(bundle: SkewAlgebraBundle, mbar: FDModule) -> FDModule:
    """Restriction along b -> b (x) 1."""
    if mbar.algebra is not bundle.full:
        raise AlgebraMismatch("restrict expects a module over the full skew algebra")
    G = bundle.group.order
    act = mbar.act[0::G]  # identity element has group index 0
    return FDModule(bundle.base, act, name=f"res({mbar.name})", check=False)


def corner_cut(bundle: SkewAlgebraBundle, mbar: FDModule) -> tuple[FDModule, np.ndarray, np.ndarray]:
    """M . ebar as a module over the basic corner; returns (module, basis, left inverse)."""
    fs = mbar.fs
    P = mbar.action(bundle.ebar)
    B = fs.column_basis(P)
    L = fs.left_inverse(B) if B.shape[1] else np.zeros((0, mbar.dim), dtype=np.int64)
    full_acts = np.tensordot(bundle.corner_embed, mbar.act, axes=(1, 0)) % fs.p
    act = np.einsum("kd,bde,ej->bkj", L, full_acts, B) % fs.p
    return FDModule(bundle.corner, act, name=f"{mbar.name}.e", check=False), B, L


def pushdown_corner(bundle: SkewAlgebraBundle, m: FDModule) -> FDModule:
    return corner_cut(bundle, pushdown_full(bundle, m))[0]


def full_group_element_action(bundle: SkewAlgebraBundle, mbar: FDModule, g) -> np.ndarray:
    return mbar.action(bundle.group_element(g))


# -- adjunctions ----------------------------------------------------------

@dataclass
class AdjunctionReport:
    lhs_dim: int
    rhs_dim: int
    roundtrip_ok: bool
    lands_ok: bool
    naturality_ok: bool
    witnesses: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.lhs_dim == self.rhs_dim and self.roundtrip_ok and self.lands_ok and self.naturality_ok


def eta(bundle: SkewAlgebraBundle, x: FDModule, zeta: np.ndarray) -> np.ndarray:
    """Hom(F x, mbar) -> Hom(x, res mbar): restrict to the identity block."""
    return np.asarray(zeta)[:, :x.dim].copy()


def eta_inverse(bundle: SkewAlgebraBundle, x: FDModule, mbar: FDModule, phi: np.ndarray) -> np.ndarray:
    p = mbar.fs.p
    blocks = [(full_group_element_action(bundle, mbar, g) @ phi) % p for g in bundle.group.elements]
    return np.hstack(blocks) if blocks else np.zeros((mbar.dim, 0), dtype=np.int64)


def coeta(bundle: SkewAlgebraBundle, d: FDModule, c: FDModule, psi: np.ndarray) -> np.ndarray:
    """Hom(res D, C) -> Hom(D, F C): psi-tilde(v) = sum_g psi(v . (1 (x) g^-1)) in block g."""
    p = d.fs.p
    grp = bundle.group
    blocks = [(psi @ full_group_element_action(bundle, d, grp.inv(g))) % p for g in grp.elements]
    return np.vstack(blocks) if blocks else np.zeros((0, d.dim), dtype=np.int64)


def coeta_inverse(bundle: SkewAlgebraBundle, c: FDModule, psit: np.ndarray) -> np.ndarray:
    return np.asarray(psit)[:c.dim, :].copy()


def adjunction_check(bundle: SkewAlgebraBundle, x: FDModule, mbar: FDModule, seed: int = 0,
                     n_samples: int = 5) -> AdjunctionReport:
    """Check Hom(F x, mbar) = Hom(x, res mbar) through the explicit unit maps."""
    fs = x.fs
    p = fs.p
    rng = np.random.default_rng(seed)
    Fx = pushdown_full(bundle, x)
    rm = restrict(bundle, mbar)
    H1 = hom_space(Fx, mbar)
    H2 = hom_space(x, rm)
    rt, lands, nat, wit = True, True, True, []
    for k, z in enumerate(H1.basis):
        e = eta(bundle, x, z)
        if not is_homomorphism(e, x, rm):
            lands = False
            wit.append(f"eta(basis {k}) is not a homomorphism")
        if not np.array_equal(eta_inverse(bundle, x, mbar, e), z):
            rt = False
            wit.append(f"eta^-1 eta differs on basis {k}")
    for k, ph in enumerate(H2.basis):
        z = eta_inverse(bundle, x, mbar, ph)
        if not is_homomorphism(z, Fx, mbar):
            lands = False
            wit.append(f"eta^-1(basis {k}) is not a homomorphism")
        if not np.array_equal(eta(bundle, x, z), ph):
            rt = False
            wit.append(f"eta eta^-1 differs on basis {k}")
    Ex, Em = hom_space(x, x), hom_space(mbar, mbar)
    for s in range(n_samples if H1.dim else 0):
        z = H1.random(rng)
        u = Ex.random(rng)
        v = Em.random(rng)
        lhs = eta(bundle, x, (v @ z @ pushdown_morphism(bundle, u)) % p)
        rhs = (v @ eta(bundle, x, z) @ u) % p   # restriction leaves v unchanged
        if not np.array_equal(lhs % p, rhs):
            nat = False
            wit.append(f"naturality square {s} fails")
    return AdjunctionReport(H1.dim, H2.dim, rt, lands, nat, wit)


def coadjunction_check(bundle: SkewAlgebraBundle, d: FDModule, c: FDModule, seed: int = 0,
                       n_samples: int = 5) -> AdjunctionReport:
    """Check Hom(res D, C) = Hom(D, F C) for D over the skew algebra and C over the base."""
    fs = c.fs
    p = fs.p
    rng = np.random.default_rng(seed)
    rd = restrict(bundle, d)
    Fc = pushdown_full(bundle, c)
    H1 = hom_space(rd, c)
    H2 = hom_space(d, Fc)
    rt, lands, nat, wit = True, True, True, []
    for k, ps in enumerate(H1.basis):
        t = coeta(bundle, d, c, ps)
        if not is_homomorphism(t, d, Fc):
            lands = False
            wit.append(f"coeta(basis {k}) is not a homomorphism")
        if not np.array_equal(coeta_inverse(bundle, c, t), ps):
            rt = False
    for k, t in enumerate(H2.basis):
        ps = coeta_inverse(bundle, c, t)
        if not is_homomorphism(ps, rd, c):
            lands = False
        if not np.array_equal(coeta(bundle, d, c, ps), t):
            rt = False
            wit.append(f"coeta coeta^-1 differs on basis {k}")
    Ed, Ec = hom_space(d, d), hom_space(c, c)
    for s in range(n_samples if H1.dim else 0):
        ps = H1.random(rng)
        u = Ed.random(rng)
        v = Ec.random(rng)
        lhs = coeta(bundle, d, c, (v @ ps @ u) % p)
        rhs = (pushdown_morphism(bundle, v) @ coeta(bundle, d, c, ps) @ u) % p
        if not np.array_equal(lhs, rhs):
            nat = False
            wit.append(f"naturality square {s} fails")
    return AdjunctionReport(H1.dim, H2.dim, rt, lands, nat, wit)


# -- endomorphism rings ---------------------------------------------------

@dataclass
class Indecomposable:
    reason: str


@dataclass
class SplitWitness:
    idempotent: np.ndarray


@dataclass
class Iso:
    witness: np.ndarray | tuple | None


@dataclass
class NonIso:
    reason: str


def trace_radical(fs: FieldSpec, mats) -> tuple[np.ndarray, int]:
    """Kernel of the trace form on a matrix algebra, as coefficient columns.

    Equals the Jacobson radical when p exceeds the matrix size.
    """
    k = len(mats)
    if k == 0:
        return np.zeros((0, 0), dtype=np.int64), 0
    p = fs.p
    T = np.zeros((k, k), dtype=np.int64)
    for i in range(k):
        for j in range(i, k):
            T[i, j] = T[j, i] = int(np.sum((mats[i] * mats[j].T) % p) % p)
    K = fs.kernel_matrix(T)
    return K, k - K.shape[1]


def _split_idempotent(fs: FieldSpec, x: np.ndarray):
    """Idempotent polynomial in x separating two coprime factors of its char poly.

    Returns ``(idempotent or None, irreducible factor degrees)``.
    """
    p = fs.p
    chi = [int(c) for c in fs.charpoly(x)]
    _, facs = gf_factor(chi, p, ZZ)
    degs = [len(f) - 1 for f, _ in facs]
    if len(facs) < 2:
        return None, degs
    f0, e0 = facs[0]
    A = [1]
    for _ in range(e0):
        A = gf_mul(A, f0, p, ZZ)
    B = gf_quo(chi, A, p, ZZ)
    s, _, h = gf_gcdex(A, B, p, ZZ)
    if h != [1]:
        return None, degs
    e = fs.polyval_matrix(gf_mul(s, A, p, ZZ), x)
    return e, degs


def analyze_endomorphisms(fs: FieldSpec, mats, rng, budget: int = DEFAULT_BUDGET):
    """Indecomposable or SplitWitness for an endomorphism algebra spanned by ``mats``."""
    if not mats:
        raise ValidationError("zero object has no endomorphism analysis")
    d = mats[0].shape[0]
    K, residue = trace_radical(fs, mats)
    if residue == 1:
        return Indecomposable("End/rad is one-dimensional")
    p = fs.p
    eye = np.eye(d, dtype=np.int64)
    for _ in range(budget):
        c = rng.integers(0, p, size=len(mats))
        x = np.zeros((d, d), dtype=np.int64)
        for ci, m in zip(c, mats):
            x = (x + int(ci) * m) % p
        e, degs = _split_idempotent(fs, x)
        if e is not None:
            if np.array_equal((e @ e) % p, e) and e.any() and not np.array_equal(e, eye):
                return SplitWitness(e)
        elif len(degs) == 1 and degs[0] == residue:
            return Indecomposable(f"End/rad is a field of degree {residue}")
    raise Inconclusive(f"no splitting idempotent or locality certificate in {budget} trials")


def is_indecomposable(m: FDModule, seed: int = 0, budget: int = DEFAULT_BUDGET, rng=None):
    if m.dim == 0:
        raise ValidationError("is_indecomposable needs a nonzero module")
    rng = rng if rng is not None else np.random.default_rng(seed)
    return analyze_endomorphisms(m.fs, hom_space(m, m).basis, rng, budget)


def residue_dim(m: FDModule) -> int:
    return trace_radical(m.fs, hom_space(m, m).basis)[1]


@dataclass
class Summand:
    module: FDModule
    inclusion: np.ndarray   # dim M x dim U
    projection: np.ndarray  # dim U x dim M


def decompose(m: FDModule, seed: int = 0, budget: int = DEFAULT_BUDGET, rng=None) -> list[Summand]:
    """Split m into indecomposable summands with inclusions and projections."""
    rng = rng if rng is not None else np.random.default_rng(seed)
    fs = m.fs
    if m.dim == 0:
        return []
    res = is_indecomposable(m, budget=budget, rng=rng)
    if isinstance(res, Indecomposable):
        return [Summand(m, np.eye(m.dim, dtype=np.int64), np.eye(m.dim, dtype=np.int64))]
    out = []
    e = res.idempotent
    for proj in (e, (np.eye(m.dim, dtype=np.int64) - e) % fs.p):
        B = fs.column_basis(proj)
        sub, L = submodule(m, B, name=m.name)
        P = (L @ proj) % fs.p
        for s in decompose(sub, budget=budget, rng=rng):
            out.append(Summand(s.module, (B @ s.inclusion) % fs.p, (s.projection @ P) % fs.p))
    for k, s in enumerate(out):
        s.module.name = f"{m.name}[{k}]"
    return out


def pairing_rank(fs: FieldSpec, phis, psis, compose_trace) -> int:
    """Rank of the matrix [trace(psi_j o phi_i)]."""
    if not phis or not psis:
        return 0
    T = np.array([[compose_trace(ps, ph) % fs.p for ph in phis] for ps in psis], dtype=np.int64)
    return fs.rank(T)


def summand_multiplicity(u: FDModule, n: FDModule) -> int:
    """How often the indecomposable u (with End/rad = K) occurs as a summand of n."""
    fs = u.fs
    phis = hom_space(u, n).basis
    psis = hom_space(n, u).basis
    return pairing_rank(fs, phis, psis, lambda ps, ph: int(np.trace((ps @ ph) % fs.p)))


def modules_isomorphic(m: FDModule, n: FDModule, seed: int = 0, budget: int = DEFAULT_BUDGET, rng=None):
    if m.algebra is not n.algebra:
        raise AlgebraMismatch("isomorphism test across algebras")
    if m.dimension_vector() != n.dimension_vector():
        return NonIso("dimension vectors differ")
    if m.dim == 0:
        return Iso(np.zeros((0, 0), dtype=np.int64))
    fs = m.fs
    rng = rng if rng is not None else np.random.default_rng(seed)
    Hmn, Hnm = hom_space(m, n), hom_space(n, m)
    emm, enn = hom_space(m, m).dim, hom_space(n, n).dim
    if len({Hmn.dim, Hnm.dim, emm, enn}) > 1:
        return NonIso(f"hom dimensions differ ({emm},{Hmn.dim},{Hnm.dim},{enn})")
    for _ in range(budget):
        f = Hmn.random(rng)
        if fs.is_invertible(f):
            return Iso(f)
    # certificate by summand multiplicities
    for s in decompose(m, rng=rng, budget=budget):
        u = s.module
        if residue_dim(u) == 1 and summand_multiplicity(u, m) != summand_multiplicity(u, n):
            return NonIso(f"summand {u.name} occurs with different multiplicities")
    raise Inconclusive("no isomorphism found and no obstruction certified")


def stabilizer(obj, group, twist_fn, iso_fn) -> list:
    """Group elements g with twist_fn(g, obj) isomorphic to obj."""
    out = []
    for g in group.elements:
        try:
            r = iso_fn(twist_fn(g, obj), obj)
        except Inconclusive as exc:
            raise StabilizerInconclusive(str(exc)) from exc
        if isinstance(r, Iso):
            out.append(g)
    return out


def module_stabilizer(m: FDModule, seed: int = 0, budget: int = DEFAULT_BUDGET) -> list:
    grp = m.algebra.group_action.group if m.algebra.group_action else None
    if grp is None:
        raise NoActionAttached("module algebra has no group action")
    return stabilizer(m, grp, twist, lambda a, b: modules_isomorphic(a, b, seed=seed, budget=budget))


# -- semi-covering identities -----------------------------------------------

@dataclass
class CheckRow:
    case: str
    branch: str
    lhs: int
    rhs: int
    status: str = ""
    detail: str = ""

    def __post_init__(self):
        if not self.status:
            self.status = "pass" if self.lhs == self.rhs else "fail"


def branch_of(stab_x, stab_y, order: int) -> str:
    if len(stab_x) != order:
        return "G_X!=G"
    if len(stab_y) != order:
        return "G_Y!=G"
    return "G_XY=G"


def branch_sum(branch: str, group, x, y, twist_fn, dim_fn) -> int:
    if branch == "G_X!=G":
        return sum(dim_fn(twist_fn(g, x), y) for g in group.elements)
    if branch == "G_Y!=G":
        return sum(dim_fn(x, twist_fn(g, y)) for g in group.elements)
    return group.order * dim_fn(x, y)


def verify_semicovering_module(bundle: SkewAlgebraBundle, m: FDModule, n: FDModule, seed: int = 0,
                               budget: int = DEFAULT_BUDGET, stabs: dict | None = None) -> CheckRow:
    """dim Hom(F m, F n) against the branch formula of the semi-covering property."""
    grp = bundle.group
    stabs = stabs if stabs is not None else {}
    for x in (m, n):
        if id(x) not in stabs:
            stabs[id(x)] = module_stabilizer(x, seed=seed, budget=budget)
    br = branch_of(stabs[id(m)], stabs[id(n)], grp.order)
    lhs = hom_space(pushdown_full(bundle, m), pushdown_full(bundle, n)).dim
    rhs = branch_sum(br, grp, m, n, twist, lambda a, b: hom_space(a, b).dim)
    return CheckRow(f"{m.name},{n.name}", br.replace("X", "M").replace("Y", "N"), lhs, rhs)


# -- radical powers -------------------------------------------------------

def validate_universe(universe, seed: int = 0, budget: int = DEFAULT_BUDGET):
    for u in universe:
        if u.dim == 0 or residue_dim(u) != 1:
            raise UniverseInvalid(f"{u.name} is not indecomposable with End/rad = K")
    for i, j in product(range(len(universe)), repeat=2):
        if i < j:
            r = modules_isomorphic(universe[i], universe[j], seed=seed, budget=budget)
            if isinstance(r, Iso):
                raise UniverseInvalid(f"{universe[i].name} and {universe[j].name} are isomorphic")


def _radical_layer(u: FDModule, v: FDModule, same: bool) -> list:
    H = hom_space(u, v)
    if not same:
        return H.basis
    K, _ = trace_radical(u.fs, H.basis)
    return [H.combine(K[:, k]) for k in range(K.shape[1])]


def rad_power_dims(universe, n: int, check: bool = True) -> list[np.ndarray]:
    """Tables ``dim rad^k(U_i, U_j)`` for k = 1..n, as a list of matrices."""
    if check:
        validate_universe(universe)
    if n < 1:
        raise UniverseInvalid("radical exponent must be at least 1")
    k = len(universe)
    fs = universe[0].fs if universe else None
    R1 = [[_radical_layer(universe[i], universe[j], i == j) for j in range(k)] for i in range(k)]
    cur = R1
    tables = []
    for step in range(1, n + 1):
        tables.append(np.array([[len(cur[i][j]) for j in range(k)] for i in range(k)], dtype=np.int64))
        if step == n:
            break
        nxt = [[None] * k for _ in range(k)]
        for i, j in product(range(k), repeat=2):
            vecs = []
            for t in range(k):
                for s in cur[i][t]:
                    for r in R1[t][j]:
                        vecs.append(((r @ s) % fs.p).ravel())
            shape = (universe[j].dim, universe[i].dim)
            if vecs:
                rows = fs.row_basis(np.array(vecs))
                nxt[i][j] = [r.reshape(shape) for r in rows]
            else:
                nxt[i][j] = []
        cur = nxt
    return tables


def universe_index(x: FDModule, universe, seed: int = 0, budget: int = DEFAULT_BUDGET) -> int:
    for k, u in enumerate(universe):
        if isinstance(modules_isomorphic(x, u, seed=seed, budget=budget), Iso):
            return k
    raise UniverseInvalid(f"{x.name} is not isomorphic to a universe member")


def skew_universe(bundle: SkewAlgebraBundle, universe, seed: int = 0, budget: int = DEFAULT_BUDGET) -> list:
    """Indecomposable summands of pushdowns of universe members, one per iso class."""
    out = []
    for u in universe:
        for s in decompose(pushdown_full(bundle, u), seed=seed, budget=budget):
            if not any(isinstance(modules_isomorphic(s.module, w, seed=seed, budget=budget), Iso) for w in out):
                s.module.name = f"{u.name}~{sum(1 for w in out if w.name.startswith(u.name + '~'))}"
                out.append(s.module)
    return out


def verify_radical_preservation(bundle: SkewAlgebraBundle, universe, skew_univ, n_max: int,
                                seed: int = 0, budget: int = DEFAULT_BUDGET) -> list[CheckRow]:
    """Compare dim rad^n(F M, F N) computed over the skew algebra with the branch formula."""
    grp = bundle.group
    tab = rad_power_dims(universe, n_max)
    tabbar = rad_power_dims(skew_univ, n_max)
    mu = []
    for u in universe:
        Fu = pushdown_full(bundle, u)
        row = [summand_multiplicity(w, Fu) for w in skew_univ]
        if sum(r * w.dim for r, w in zip(row, skew_univ)) != Fu.dim:
            raise UniverseInvalid(f"pushdown of {u.name} is not covered by the skew universe")
        mu.append(np.array(row, dtype=np.int64))
    stabs = [module_stabilizer(u, seed=seed, budget=budget) for u in universe]
    tw_idx = {}
    for i, u in enumerate(universe):
        for g in grp.elements:
            tw_idx[(g, i)] = universe_index(twist(g, u), universe, seed=seed, budget=budget)
    rows = []
    for k in range(n_max):
        T, Tb = tab[k], tabbar[k]
        for i, j in product(range(len(universe)), repeat=2):
            lhs = int(mu[i] @ Tb @ mu[j])
            br = branch_of(stabs[i], stabs[j], grp.order)
            if br == "G_X!=G":
                rhs = sum(int(T[tw_idx[(g, i)], j]) for g in grp.elements)
            elif br == "G_Y!=G":
                rhs = sum(int(T[i, tw_idx[(g, j)]]) for g in grp.elements)
            else:
                rhs = grp.order * int(T[i, j])
            rows.append(CheckRow(f"n={k + 1},{universe[i].name},{universe[j].name}",
                                 br.replace("X", "M").replace("Y", "N"), lhs, rhs))
    return rows
