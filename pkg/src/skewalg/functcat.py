"""Finitely presented functors T = coker Hom(-, f) and the induced functor phi.

A functor is stored through its presentation ``f: M -> N``. Natural
transformations ``T1 -> T2`` are commuting squares ``(a, b)`` from ``f1``
to ``f2`` modulo those whose ``b`` factors as ``f2 s`` for some
``s: N1 -> M2``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AlgebraMismatch, ClassificationInconclusive, Inconclusive
from .exactfield import Span
from .groupact import SkewAlgebraBundle
from .morphcat import (HHomBasis, MorphismObject, compose_pairs, h_pushdown,
                       h_pushdown_pair, h_twist, hhom_space, pair_vector)
from .repcat import (DEFAULT_BUDGET, CheckRow, FDModule, Iso, NonIso, coeta_inverse, decompose,
                     hom_space, modules_isomorphic, module_stabilizer, pushdown_full, restrict,
                     stabilizer, summand_multiplicity, twist)


@dataclass
class FPFunctor:
    presentation: MorphismObject
    name: str = ""

    @property
    def algebra(self):
        return self.presentation.algebra

    @property
    def fs(self):
        return self.presentation.fs


def representable(m: FDModule, name: str = "") -> FPFunctor:
    """Hom(-, M), presented by 0 -> M."""
    from .repcat import zero_module
    z = zero_module(m.algebra)
    return FPFunctor(MorphismObject(z, m, np.zeros((m.dim, 0), dtype=np.int64), check=False),
                     name=name or f"Hom(-,{m.name})")


def _postcomp_matrix(fs, f: np.ndarray, HM, HN) -> np.ndarray:
    """Matrix of Hom(X, M) -> Hom(X, N), u -> f u, in the given hom bases."""
    p = fs.p
    if not HM.basis:
        return np.zeros((len(HN.basis), 0), dtype=np.int64)
    if not HN.basis:
        return np.zeros((0, len(HM.basis)), dtype=np.int64)
    Nrows = np.array([b.ravel() for b in HN.basis], dtype=np.int64)
    # express each f u in the HN basis
    sol = fs.solve(Nrows.T, np.array([((f @ u) % p).ravel() for u in HM.basis], dtype=np.int64).T)
    if sol is None:
        raise ValueError("post-composition leaves the target hom space")
    return sol


@dataclass
class Evaluation:
    dim: int
    projection: np.ndarray      # coker projection on Hom(X, N) coordinates
    image: np.ndarray           # post-composition matrix Hom(X,M) -> Hom(X,N)
    hom_target: object          # HomBasis of Hom(X, N)


def evaluate(t: FPFunctor, x: FDModule) -> Evaluation:
    f = t.presentation
    if x.algebra is not f.algebra:
        raise AlgebraMismatch("evaluation at a module over another algebra")
    fs = f.fs
    HM, HN = hom_space(x, f.source), hom_space(x, f.target)
    P = _postcomp_matrix(fs, f.map, HM, HN)
    d, proj = fs.coker_data(P)
    return Evaluation(d, proj, P, HN)


def phi(bundle: SkewAlgebraBundle, t: FPFunctor) -> FPFunctor:
    return FPFunctor(h_pushdown(bundle, t.presentation), name=f"phi({t.name})")


def f_twist(g, t: FPFunctor) -> FPFunctor:
    return FPFunctor(h_twist(g, t.presentation), name=f"^{''.join(map(str, g))}{t.name}")


@dataclass
class NatSpace:
    hhom: HHomBasis
    factor: Span            # factorizing pairs, as vectors
    squares: Span           # all pairs, as vectors
    reps: list              # representatives of a basis of the quotient

    @property
    def dim(self) -> int:
        return len(self.reps)


def _factor_span(f1: MorphismObject, f2: MorphismObject, H: HHomBasis) -> Span:
    """Pairs in H whose b-component factors through f2."""
    fs = f1.fs
    p = fs.p
    n = H.dim
    vec_len = f2.source.dim * f1.source.dim + f2.target.dim * f1.target.dim
    if n == 0:
        return Span(fs, np.zeros((0, vec_len), dtype=np.int64), vec_len)
    S = hom_space(f1.target, f2.source).basis
    W = [((f2.map @ s) % p).ravel() for s in S]
    Bv = [b.ravel() for _, b in H.basis]
    blen = f2.target.dim * f1.target.dim
    if blen == 0:
        K = np.eye(n, dtype=np.int64)
    else:
        cols = Bv + [(-w) % p for w in W]
        M = np.array(cols, dtype=np.int64).reshape(len(cols), blen).T
        K = fs.kernel_matrix(M)[:n]
    vecs = H.vectors()
    rows = (K.T @ vecs) % p if K.shape[1] else np.zeros((0, vec_len), dtype=np.int64)
    return Span(fs, rows, vec_len)


def nat_trans_space(t1: FPFunctor, t2: FPFunctor) -> NatSpace:
    if t1.algebra is not t2.algebra:
        raise AlgebraMismatch("natural transformations across algebras")
    f1, f2 = t1.presentation, t2.presentation
    fs = f1.fs
    H = hhom_space(f1, f2)
    vec_len = f2.source.dim * f1.source.dim + f2.target.dim * f1.target.dim
    factor = _factor_span(f1, f2, H)
    squares = Span(fs, H.vectors(), vec_len)
    reps = []
    cur = factor
    for pair in H.basis:
        v = pair_vector(pair)
        if not cur.contains(v):
            reps.append(pair)
            cur = cur.extend(v)
    return NatSpace(H, factor, squares, reps)


def _pair_from_vector(v, f1: MorphismObject, f2: MorphismObject):
    na = f2.source.dim * f1.source.dim
    a = np.asarray(v[:na]).reshape(f2.source.dim, f1.source.dim)
    b = np.asarray(v[na:]).reshape(f2.target.dim, f1.target.dim)
    return a, b


def functors_isomorphic(t1: FPFunctor, t2: FPFunctor, probes=(), seed: int = 0,
                        budget: int = DEFAULT_BUDGET, rng=None):
    """Iso((tau, sigma)) with sigma tau = id and tau sigma = id modulo factorizations, or NonIso."""
    rng = rng if rng is not None else np.random.default_rng(seed)
    fs = t1.fs
    p = fs.p
    for x in probes:
        d1, d2 = evaluate(t1, x).dim, evaluate(t2, x).dim
        if d1 != d2:
            return NonIso(f"values at {x.name} differ ({d1} vs {d2})")
    N12, N21 = nat_trans_space(t1, t2), nat_trans_space(t2, t1)
    N11, N22 = nat_trans_space(t1, t1), nat_trans_space(t2, t2)
    dims = (N11.dim, N12.dim, N21.dim, N22.dim)
    if len(set(dims)) > 1:
        return NonIso(f"natural transformation dimensions differ {dims}")
    f1, f2 = t1.presentation, t2.presentation
    id1 = (np.eye(f1.source.dim, dtype=np.int64), np.eye(f1.target.dim, dtype=np.int64))
    id2 = (np.eye(f2.source.dim, dtype=np.int64), np.eye(f2.target.dim, dtype=np.int64))
    if N11.dim == 0:
        # both functors vanish
        return Iso((N12.hhom.combine([0] * N12.hhom.dim), N21.hhom.combine([0] * N21.hhom.dim)))
    for _ in range(budget):
        tau = N12.hhom.random(rng)
        # unknowns: coefficients c of sigma in N21.hhom, then coefficients of the two factor spans
        cols1 = [pair_vector(compose_pairs(s, tau, p)) for s in N21.hhom.basis]
        cols2 = [pair_vector(compose_pairs(tau, s, p)) for s in N21.hhom.basis]
        F11, F22 = N11.factor.rows, N22.factor.rows
        L1, L2 = len(cols1[0]) if cols1 else 0, len(cols2[0]) if cols2 else 0
        k = len(cols1)
        A = np.zeros((L1 + L2, k + F11.shape[0] + F22.shape[0]), dtype=np.int64)
        for j in range(k):
            A[:L1, j] = cols1[j]
            A[L1:, j] = cols2[j]
        A[:L1, k:k + F11.shape[0]] = (-F11.T) % p
        A[L1:, k + F11.shape[0]:] = (-F22.T) % p
        rhs = np.concatenate([pair_vector(id1), pair_vector(id2)])
        sol = fs.solve(A, rhs)
        if sol is not None:
            sigma = N21.hhom.combine(sol[:k])
            return Iso((tau, sigma))
    raise Inconclusive("no natural isomorphism found and no obstruction certified")


def functor_stabilizer(t: FPFunctor, probes=(), seed: int = 0, budget: int = DEFAULT_BUDGET) -> list:
    grp = t.algebra.group_action.group
    return stabilizer(t, grp, f_twist,
                      lambda a, b: functors_isomorphic(a, b, probes=probes, seed=seed, budget=budget))


# -- verification -----------------------------------------------------------

def verify_gcf(bundle: SkewAlgebraBundle, t1: FPFunctor, t2: FPFunctor, stabs: dict) -> CheckRow:
    """dim Nat(phi t1, phi t2) against the branch formula; ``stabs`` maps id(t) to G_T."""
    grp = bundle.group
    s1, s2 = stabs[id(t1)], stabs[id(t2)]
    lhs = nat_trans_space(phi(bundle, t1), phi(bundle, t2)).dim
    if len(s1) != grp.order:
        br = "G_T1!=G"
        rhs = sum(nat_trans_space(f_twist(g, t1), t2).dim for g in grp.elements)
    elif len(s2) != grp.order:
        br = "G_T2!=G"
        rhs = sum(nat_trans_space(t1, f_twist(g, t2)).dim for g in grp.elements)
    else:
        br = "G_T1T2=G"
        rhs = grp.order * nat_trans_space(t1, t2).dim
    return CheckRow(f"{t1.name},{t2.name}", br, lhs, rhs)


def sfm_check(t: FPFunctor, probes=(), seed: int = 0, budget: int = DEFAULT_BUDGET) -> CheckRow:
    """Compare the functor stabilizer with G_M cap G_N of the presentation."""
    f = t.presentation
    gt = functor_stabilizer(t, probes=probes, seed=seed, budget=budget)
    gm = module_stabilizer(f.source, seed=seed, budget=budget)
    gn = module_stabilizer(f.target, seed=seed, budget=budget)
    gmn = [g for g in gm if g in gn]
    order = len(f.algebra.group_action.group.elements)
    lhs = int(len(gt) == order)
    rhs = int(len(gmn) == order)
    return CheckRow(t.name, f"G_T={len(gt)},G_MN={len(gmn)}", lhs, rhs)


def phi_pointwise_rows(bundle: SkewAlgebraBundle, t: FPFunctor, xbars) -> list[CheckRow]:
    """evaluate(phi(t), x) against evaluate(t, restrict(x))."""
    rows = []
    pt = phi(bundle, t)
    for x in xbars:
        lhs = evaluate(pt, x).dim
        rhs = evaluate(t, restrict(bundle, x)).dim
        rows.append(CheckRow(f"{t.name},{x.name}", "pointwise", lhs, rhs))
    return rows


@dataclass
class Classification:
    kind: str           # "pushdown" or "summand"
    module: FDModule    # M over the base with x = F M or x a proper summand of F M


def classify(bundle: SkewAlgebraBundle, xbar: FDModule, candidates, seed: int = 0,
             budget: int = DEFAULT_BUDGET) -> Classification:
    for m in candidates:
        Fm = pushdown_full(bundle, m)
        if Fm.dim == xbar.dim and isinstance(modules_isomorphic(xbar, Fm, seed=seed, budget=budget), Iso):
            return Classification("pushdown", m)
    for m in candidates:
        Fm = pushdown_full(bundle, m)
        if Fm.dim > xbar.dim and xbar.dim:
            parts = decompose(xbar, seed=seed, budget=budget)
            if len(parts) == 1 and summand_multiplicity(xbar, Fm) >= 1:
                return Classification("summand", m)
    raise ClassificationInconclusive(f"{xbar.name} is neither a pushdown nor a proper summand of one")


def phi_pointwise(bundle: SkewAlgebraBundle, t: FPFunctor, xbar: FDModule, candidates,
                  seed: int = 0, budget: int = DEFAULT_BUDGET) -> CheckRow:
    """Case value of phi(t) at xbar from the semi-density split, against T-hat o F^."""
    cl = classify(bundle, xbar, candidates, seed=seed, budget=budget)
    if cl.kind == "pushdown":
        val = sum(evaluate(t, twist(g, cl.module)).dim for g in bundle.group.elements)
    else:
        val = evaluate(t, cl.module).dim
    ref = evaluate(t, restrict(bundle, xbar)).dim
    return CheckRow(f"{t.name},{xbar.name}", cl.kind, val, ref)


def _adjoint_coords(bundle, xbar: FDModule, c: FDModule, HbarC, HresC) -> np.ndarray:
    """Matrix of Hom(x, F C) -> Hom(res x, C) (projection to the identity block) in hom bases."""
    fs = xbar.fs
    if not HbarC.basis or not HresC.basis:
        return np.zeros((len(HresC.basis), len(HbarC.basis)), dtype=np.int64)
    Rrows = np.array([b.ravel() for b in HresC.basis], dtype=np.int64)
    imgs = np.array([coeta_inverse(bundle, c, z).ravel() for z in HbarC.basis], dtype=np.int64)
    sol = fs.solve(Rrows.T, imgs.T)
    if sol is None:
        raise ValueError("adjunction image leaves the hom space")
    return sol


@dataclass
class ExactnessRow:
    case: str
    ok_surjective: bool
    ok_middle: bool
    lhs: int
    rhs: int

    @property
    def passed(self):
        return self.ok_surjective and self.ok_middle and self.lhs == self.rhs


def exactness_at(bundle: SkewAlgebraBundle, t: FPFunctor, xbar: FDModule) -> ExactnessRow:
    """Hom(x, FM) -> Hom(x, FN) -> phi(T)(x) -> 0 with phi(T)(x) computed as T(res x)."""
    fs = xbar.fs
    p = fs.p
    f = t.presentation
    Ff = h_pushdown(bundle, f)
    rx = restrict(bundle, xbar)
    HbarM, HbarN = hom_space(xbar, Ff.source), hom_space(xbar, Ff.target)
    P1 = _postcomp_matrix(fs, Ff.map, HbarM, HbarN)              # Hom(x,FM) -> Hom(x,FN)
    ev = evaluate(t, rx)                                         # T(res x) as coker on Hom(res x, N)
    Z = _adjoint_coords(bundle, xbar, f.target, HbarN, ev.hom_target)
    Q = (ev.projection @ Z) % p if Z.size else np.zeros((ev.dim, HbarN.dim), dtype=np.int64)
    surj = fs.rank(Q) == ev.dim if ev.dim else True
    comp_zero = not ((Q @ P1) % p).any() if Q.size and P1.size else True
    rank_img = fs.rank(P1) if P1.size else 0
    ker_dim = HbarN.dim - (fs.rank(Q) if Q.size else 0)
    mid = comp_zero and rank_img == ker_dim
    return ExactnessRow(f"{t.name},{xbar.name}", surj, mid, rank_img, ker_dim)


def faithfulness_rank(bundle: SkewAlgebraBundle, t1: FPFunctor, t2: FPFunctor) -> tuple[int, int]:
    """(rank, columns) of Nat(t1,t2) -> Nat(phi t1, phi t2) after pushing square pairs."""
    fs = t1.fs
    N = nat_trans_space(t1, t2)
    Nb = nat_trans_space(phi(bundle, t1), phi(bundle, t2))
    if N.dim == 0:
        return 0, 0
    imgs = np.array([pair_vector(h_pushdown_pair(bundle, r)) for r in N.reps], dtype=np.int64)
    # pushed factorizations stay factorizations
    if N.factor.dim:
        fimgs = [pair_vector(h_pushdown_pair(bundle, _pair_from_vector(v, t1.presentation, t2.presentation)))
                 for v in N.factor.rows]
        if not Nb.factor.contains_all(np.array(fimgs)):
            return -1, N.dim
    # coordinates modulo the factor span of the pushed side
    reduced = Nb.factor.reduce(imgs)
    return (fs.rank(reduced) if reduced.any() else 0), N.dim


def yoneda_square_rows(bundle: SkewAlgebraBundle, f: MorphismObject, xbars) -> list[CheckRow]:
    """phi(theta(f)) at x via T-hat o F^ against theta(HF f) at x, with image compatibility."""
    fs = f.fs
    p = fs.p
    t = FPFunctor(f, name=f"theta({f.name})")
    tb = FPFunctor(h_pushdown(bundle, f), name=f"theta(F({f.name}))")
    rows = []
    for x in xbars:
        lhs = evaluate(t, restrict(bundle, x))
        rhs = evaluate(tb, x)
        ok = lhs.dim == rhs.dim
        # the adjunction sends the image of Hom(x, F M) onto the image of Hom(res x, M)
        Z = _adjoint_coords(bundle, x, f.target, rhs.hom_target, lhs.hom_target)
        if ok and Z.size and rhs.image.size:
            pushed = (Z @ rhs.image) % p
            r1 = fs.rank(pushed) if pushed.any() else 0
            r2 = fs.rank(lhs.image) if lhs.image.size and lhs.image.any() else 0
            both = np.hstack([pushed, lhs.image]) if lhs.image.size else pushed
            r12 = fs.rank(both) if both.any() else 0
            ok = r1 == r2 == r12
        rows.append(CheckRow(f"{f.name},{x.name}", "yoneda", lhs.dim, rhs.dim,
                             status="pass" if ok else "fail"))
    return rows
