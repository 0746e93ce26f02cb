"""Independent reference computations used to freeze expected values.

These go through sympy (over Q or through its own GF(p) domain) and never
call the package's linear algebra.
"""
import sympy
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix


def gf_rank(mat, p):
    rows = [[int(x) % p for x in r] for r in mat]
    if not rows or not rows[0]:
        return 0
    dm = DomainMatrix([[GF(p)(x) for x in r] for r in rows], (len(rows), len(rows[0])), GF(p))
    return dm.rank()


def signed(x, p):
    x = int(x) % p
    return x - p if x > p // 2 else x


def hom_dim_q(m, n):
    """dim Hom(M, N) over Q from the generator action matrices (entries lifted to small integers)."""
    p = m.fs.p
    gens = m.algebra.generators
    dm, dn = m.dim, n.dim
    if dm == 0 or dn == 0:
        return 0
    F = sympy.Matrix(dn, dm, lambda i, j: sympy.Symbol(f"f{i}_{j}"))
    eqs = []
    for g in gens:
        A = sympy.Matrix([[signed(x, p) for x in r] for r in m.action(g)])
        B = sympy.Matrix([[signed(x, p) for x in r] for r in n.action(g)])
        eqs += list(F * A - B * F)
    syms = list(F)
    if not eqs:
        return len(syms)
    M, _ = sympy.linear_eq_to_matrix(eqs, syms)
    return len(syms) - M.rank()


def hhom_dim_q(f, h):
    """dim of commuting squares from f to h over Q, solving all equations jointly."""
    p = f.fs.p
    gens = f.algebra.generators
    mats = {}
    syms = []
    for key, (src, dst) in {"a": (f.source, h.source), "b": (f.target, h.target)}.items():
        X = sympy.Matrix(dst.dim, src.dim, lambda i, j: sympy.Symbol(f"{key}{i}_{j}"))
        mats[key] = X
        syms += list(X)
    if not syms:
        return 0

    def lift(m):
        return sympy.Matrix(m.shape[0], m.shape[1], lambda i, j: signed(m[i, j], p))

    eqs = []
    for g in gens:
        eqs += list(mats["a"] * lift(f.source.action(g)) - lift(h.source.action(g)) * mats["a"])
        eqs += list(mats["b"] * lift(f.target.action(g)) - lift(h.target.action(g)) * mats["b"])
    eqs += list(mats["b"] * lift(f.map) - lift(h.map) * mats["a"])
    eqs = [e for e in eqs if e != 0]
    if not eqs:
        return len(syms)
    M, _ = sympy.linear_eq_to_matrix(eqs, syms)
    return len(syms) - M.rank()
