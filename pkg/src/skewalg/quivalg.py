"""Bound quiver algebras and finite-dimensional algebras by structure constants.

Conventions used across the package:

* a path ``p q`` means "first p, then q" and is nonzero only when
  ``target(p) == source(q)``;
* modules are right modules, so an arrow ``a: i -> j`` acts as a map
  ``M(i) -> M(j)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import (DimensionBlowup, NotAdmissible, NotBasic, NotNilpotent,
                     ValidationError)
from .exactfield import DEFAULT_FIELD, FieldSpec, Span

PATH_CAP = 20000
BASIS_CAP = 2000


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple  # (arrow id, source, target)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "arrows", tuple(tuple(a) for a in self.arrows))
        if len(set(self.vertices)) != len(self.vertices):
            raise ValidationError("quiver vertex ids must be unique")
        ids = [a[0] for a in self.arrows]
        if len(set(ids)) != len(ids) or set(ids) & set(self.vertices):
            raise ValidationError("quiver arrow ids must be unique and distinct from vertex ids")
        vs = set(self.vertices)
        for a, s, t in self.arrows:
            if s not in vs or t not in vs:
                raise ValidationError(f"arrow {a} has an undeclared endpoint")

    def source(self, a):
        return self._arrow(a)[1]

    def target(self, a):
        return self._arrow(a)[2]

    def _arrow(self, a):
        for x in self.arrows:
            if x[0] == a:
                return x
        raise KeyError(a)

    def arrow_ids(self) -> list:
        return [a[0] for a in self.arrows]

    def is_acyclic(self) -> bool:
        return self.longest_path() is not None

    def longest_path(self) -> int | None:
        """Length of the longest path, or ``None`` if there is an oriented cycle."""
        succ = {v: [t for _, s, t in self.arrows if s == v] for v in self.vertices}
        memo, onstack = {}, set()

        def depth(v):
            if v in memo:
                return memo[v]
            if v in onstack:
                raise _Cycle
            onstack.add(v)
            d = max((1 + depth(w) for w in succ[v]), default=0)
            onstack.discard(v)
            memo[v] = d
            return d

        try:
            return max((depth(v) for v in self.vertices), default=0)
        except _Cycle:
            return None


class _Cycle(Exception):
    pass


@dataclass(frozen=True)
class RelationSet:
    """Relations as tuples of ``(coefficient, path)`` with paths given as arrow-id tuples."""

    relations: tuple = ()
    nilpotency_bound: int | None = None

    def __post_init__(self):
        rels = tuple(tuple((int(c), tuple(pth)) for c, pth in r) for r in self.relations)
        object.__setattr__(self, "relations", rels)
        for r in rels:
            for _, pth in r:
                if len(pth) < 2:
                    raise ValidationError("relation paths must have length at least 2")
        if self.nilpotency_bound is not None and self.nilpotency_bound < 1:
            raise ValidationError("nilpotency bound must be positive")


# A path is (start vertex, arrow tuple); trivial paths have no arrows.

def path_label(path) -> str:
    v, arrs = path
    return f"e_{v}" if not arrs else "*".join(arrs)


class PathData:
    """Bookkeeping for a truncated path space and the ideal inside it."""

    def __init__(self, quiver: Quiver, bound: int, fs: FieldSpec):
        self.quiver, self.bound, self.fs = quiver, bound, fs
        arrow_pos = {a: k for k, a in enumerate(quiver.arrow_ids())}
        self.arrow_pos = arrow_pos
        paths = [(v, ()) for v in quiver.vertices]
        layer = list(paths)
        for _ in range(bound):
            nxt = []
            for v, arrs in layer:
                end = quiver.target(arrs[-1]) if arrs else v
                for a, s, t in quiver.arrows:
                    if s == end:
                        nxt.append((v, arrs + (a,)))
            paths += nxt
            layer = nxt
            if len(paths) > PATH_CAP:
                raise DimensionBlowup(f"more than {PATH_CAP} paths up to length {bound}")
        vpos = {v: k for k, v in enumerate(quiver.vertices)}
        # columns ordered deglex descending, so RREF pivots are leading terms
        self.key = lambda pth: (len(pth[1]), tuple(arrow_pos[a] for a in pth[1]) if pth[1] else (vpos[pth[0]],))
        self.paths = sorted(paths, key=self.key, reverse=True)
        self.index = {pth: k for k, pth in enumerate(self.paths)}

    def end(self, path):
        v, arrs = path
        return self.quiver.target(arrs[-1]) if arrs else v

    def concat(self, p, q):
        if self.end(p) != q[0]:
            return None
        r = (p[0], p[1] + q[1])
        return r if len(r[1]) <= self.bound else None

    def vector(self, terms) -> np.ndarray:
        v = np.zeros(len(self.paths), dtype=np.int64)
        for c, pth in terms:
            if len(pth[1]) <= self.bound:
                v[self.index[pth]] += c
        return v % self.fs.p

    def mult_maps(self):
        """For each arrow, index arrays for right and left multiplication."""
        out = {}
        for a, s, t in self.quiver.arrows:
            ap = (s, (a,))
            rs, rd, ls, ld = [], [], [], []
            for k, pth in enumerate(self.paths):
                r = self.concat(pth, ap)
                if r is not None:
                    rs.append(k)
                    rd.append(self.index[r])
                l_ = self.concat(ap, pth)
                if l_ is not None:
                    ls.append(k)
                    ld.append(self.index[l_])
            out[a] = (np.array(rs, dtype=np.int64), np.array(rd, dtype=np.int64),
                      np.array(ls, dtype=np.int64), np.array(ld, dtype=np.int64))
        return out


class Algebra:
    """A finite-dimensional algebra given by structure constants.

    ``mult[i, j]`` holds the coordinates of ``b_i * b_j``. ``idempotents``
    is a complete set of primitive orthogonal idempotents given as element
    vectors; ``generators`` (element vectors) generate the algebra and are
    what hom-space solvers intertwine with.
    """

    def __init__(self, fs: FieldSpec, labels, mult, unit, idempotents, vertex_labels=None,
                 generators=None, rad_basis=None, check=True, name=""):
        self.fs = fs
        self.labels = list(labels)
        self.mult = np.asarray(mult, dtype=np.int64) % fs.p
        n = len(self.labels)
        if self.mult.shape != (n, n, n):
            raise ValidationError("multiplication table has the wrong shape")
        self.unit = np.asarray(unit, dtype=np.int64) % fs.p
        self.idempotents = [np.asarray(e, dtype=np.int64) % fs.p for e in idempotents]
        self.vertex_labels = list(vertex_labels) if vertex_labels is not None else list(range(len(self.idempotents)))
        self.generators = (np.eye(n, dtype=np.int64) if generators is None
                           else np.asarray(generators, dtype=np.int64).reshape(-1, n) % fs.p)
        self.rad_basis = None if rad_basis is None else np.asarray(rad_basis, dtype=np.int64).reshape(-1, n) % fs.p
        self.name = name
        # optional attachments
        self.quiver: Quiver | None = None
        self.relations: RelationSet | None = None
        self.paths: PathData | None = None
        self.ideal: SparseSpan | None = None
        self.basis_paths: list | None = None
        self.group_action = None
        if check:
            self.validate()

    @property
    def dim(self) -> int:
        return len(self.labels)

    def __repr__(self):
        return f"Algebra({self.name or '?'}, dim={self.dim})"

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def mul(self, x, y) -> np.ndarray:
        p = self.fs.p
        n = self.dim
        t = (np.asarray(x, dtype=np.int64) @ self.mult.reshape(n, n * n)) % p
        return (np.asarray(y, dtype=np.int64) @ t.reshape(n, n)) % p

    def left_matrix(self, x) -> np.ndarray:
        """Matrix of ``y -> x*y`` in the column convention."""
        n = self.dim
        t = (np.asarray(x, dtype=np.int64) @ self.mult.reshape(n, n * n)) % self.fs.p
        return t.reshape(n, n).T.copy()

    def right_matrix(self, y) -> np.ndarray:
        """Matrix of ``x -> x*y`` in the column convention."""
        t = np.einsum("ijk,j->ik", self.mult, np.asarray(y, dtype=np.int64) % self.fs.p) % self.fs.p
        return t.T.copy()

    def products(self, xs, ys) -> np.ndarray:
        """All products ``x*y`` for rows x of ``xs`` and y of ``ys``, stacked."""
        p, n = self.fs.p, self.dim
        xs = np.asarray(xs, dtype=np.int64).reshape(-1, n)
        ys = np.asarray(ys, dtype=np.int64).reshape(-1, n)
        t = (xs @ self.mult.reshape(n, n * n)) % p          # (|xs|, n*n)
        t = t.reshape(-1, n, n)                             # [x, j, k]
        out = np.einsum("yj,xjk->xyk", ys, t) % p
        return out.reshape(-1, n)

    def span(self, vectors) -> Span:
        return Span(self.fs, vectors, self.dim)

    def sandwich(self, e, f) -> Span:
        """Span of ``e * b * f`` over basis elements b."""
        eb = (self.left_matrix(e)).T  # rows: e*b_j
        return self.span(self.products(eb, [f]))

    def cartan_matrix(self) -> np.ndarray:
        k = len(self.idempotents)
        c = np.zeros((k, k), dtype=np.int64)
        for i, j in product(range(k), repeat=2):
            c[i, j] = self.sandwich(self.idempotents[i], self.idempotents[j]).dim
        return c

    def validate(self):
        p, n = self.fs.p, self.dim
        m = self.mult
        # associativity on all basis triples: (b_i b_j) b_k = b_i (b_j b_k)
        left = np.tensordot(m, m, axes=([2], [0])) % p          # [i,j,k,l]
        right = np.einsum("ilm,jkl->ijkm", m, m) % p
        if not np.array_equal(left, right):
            raise ValidationError("multiplication is not associative")
        lu = self.left_matrix(self.unit)
        ru = self.right_matrix(self.unit)
        eye = np.eye(n, dtype=np.int64)
        if not (np.array_equal(lu, eye) and np.array_equal(ru, eye)):
            raise ValidationError("unit is not a two-sided identity")
        tot = np.zeros(n, dtype=np.int64)
        for i, e in enumerate(self.idempotents):
            tot = (tot + e) % p
            for j, f in enumerate(self.idempotents):
                ef = self.mul(e, f)
                want = e if i == j else np.zeros(n, dtype=np.int64)
                if not np.array_equal(ef, want):
                    raise ValidationError("distinguished idempotents are not orthogonal idempotents")
        if self.idempotents and not np.array_equal(tot, self.unit):
            raise ValidationError("distinguished idempotents do not sum to the unit")

    def is_commutative(self) -> bool:
        return np.array_equal(self.mult, self.mult.transpose(1, 0, 2))

    # -- path algebra helpers ---------------------------------------------
    def path_element(self, terms) -> np.ndarray:
        """Element of a bound quiver algebra from ``(coef, arrow tuple or vertex)`` terms."""
        if self.paths is None:
            raise ValidationError("algebra has no path presentation")
        out = np.zeros(self.dim, dtype=np.int64)
        for c, pth in terms:
            out = (out + c * self._reduce_path(_as_path(self.quiver, pth))) % self.fs.p
        return out

    def _reduce_path(self, path) -> np.ndarray:
        pd = self.paths
        if len(path[1]) > pd.bound:
            return np.zeros(self.dim, dtype=np.int64)
        v = self.ideal.reduce(pd.vector([(1, path)]))
        return v[self._basis_cols]

    def vertex_index(self, v) -> int:
        return self.vertex_labels.index(v)


def _as_path(quiver: Quiver, pth):
    if isinstance(pth, tuple) and len(pth) == 2 and isinstance(pth[1], tuple):
        return pth
    if isinstance(pth, (tuple, list)):
        pth = tuple(pth)
        return (quiver.source(pth[0]), pth)
    if pth in quiver.vertices:
        return (pth, ())
    return (quiver.source(pth), (pth,))


class SparseSpan:
    """Subspace of GF(p)^n in reduced echelon form with sparse rows.

    Rows are dicts keyed by column and indexed by their pivot, the smallest
    column present. Ideals of path algebras are spanned by short combinations
    of paths, so this stays small where a dense echelon form would not.
    """

    def __init__(self, fs: FieldSpec, n: int):
        self.fs, self.n = fs, n
        self.table: dict[int, dict] = {}
        self._cols: dict[int, set] = {}    # non-pivot column -> pivots of rows using it

    @property
    def dim(self) -> int:
        return len(self.table)

    @property
    def pivots(self) -> list[int]:
        return sorted(self.table)

    @property
    def rows(self) -> np.ndarray:
        out = np.zeros((self.dim, self.n), dtype=np.int64)
        for k, c in enumerate(self.pivots):
            for j, v in self.table[c].items():
                out[k, j] = v
        return out

    def reduce_sparse(self, w: dict) -> dict:
        p = self.fs.p
        w = {k: v % p for k, v in w.items() if v % p}
        # pivot columns do not meet other rows, so one pass suffices
        for c in [c for c in w if c in self.table]:
            coef = w.get(c, 0)
            if not coef:
                continue
            for k, v in self.table[c].items():
                x = (w.get(k, 0) - coef * v) % p
                if x:
                    w[k] = x
                else:
                    w.pop(k, None)
        return w

    def add(self, w: dict) -> dict | None:
        """Insert a vector; returns its reduced form, or None if it was already in the span."""
        p = self.fs.p
        w = self.reduce_sparse(w)
        if not w:
            return None
        c = min(w)
        inv = self.fs.inv(w[c])
        w = {k: v * inv % p for k, v in w.items()}
        for piv in list(self._cols.get(c, ())):
            row = self.table[piv]
            coef = row[c]
            for k, v in w.items():
                x = (row.get(k, 0) - coef * v) % p
                if x:
                    if k not in row:
                        self._cols.setdefault(k, set()).add(piv)
                    row[k] = x
                elif k in row:
                    del row[k]
                    self._cols[k].discard(piv)
        self._cols.pop(c, None)
        self.table[c] = w
        for k in w:
            if k != c:
                self._cols.setdefault(k, set()).add(c)
        return w

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64) % self.fs.p
        if v.ndim == 2:
            return np.array([self.reduce(r) for r in v], dtype=np.int64).reshape(v.shape)
        w = self.reduce_sparse({int(k): int(v[k]) for k in np.flatnonzero(v)})
        out = np.zeros(self.n, dtype=np.int64)
        for k, x in w.items():
            out[k] = x
        return out

    def contains(self, v: np.ndarray) -> bool:
        return not self.reduce(v).any()

    def contains_all(self, vs: np.ndarray) -> bool:
        vs = np.asarray(vs, dtype=np.int64)
        return vs.size == 0 or not self.reduce(vs.reshape(-1, self.n)).any()


def _close_ideal(pd: PathData, rows: np.ndarray) -> SparseSpan:
    """Two-sided ideal generated by ``rows`` inside the truncated path space."""
    n = len(pd.paths)
    span = SparseSpan(pd.fs, n)
    shifts = []
    for rs, rd, ls, ld in pd.mult_maps().values():
        for src, dst in ((rs, rd), (ls, ld)):
            m = np.full(n, -1, dtype=np.int64)
            m[src] = dst
            shifts.append(m)
    queue = []
    for r in rows:
        w = span.add({int(k): int(r[k]) for k in np.flatnonzero(r)})
        if w is not None:
            queue.append(w)
    # the span of everything inserted is the span itself, so closing it under
    # arrow multiplication only needs each inserted vector once
    while queue:
        w = queue.pop()
        for m in shifts:
            img = {}
            for k, v in w.items():
                t = int(m[k])
                if t >= 0:
                    img[t] = (img.get(t, 0) + v)
            if img:
                x = span.add(img)
                if x is not None:
                    queue.append(x)
    return span


def default_bound(q: Quiver) -> int:
    lp = q.longest_path()
    if lp is None:
        raise NotAdmissible("quiver has oriented cycles; a nilpotency bound is required")
    return lp + 1


def path_basis(q: Quiver, r: RelationSet, fs: FieldSpec = DEFAULT_FIELD, name: str = "") -> Algebra:
    """Bound quiver algebra KQ/I with a normal-form path basis."""
    bound = r.nilpotency_bound if r.nilpotency_bound is not None else default_bound(q)
    pd = PathData(q, bound, fs)
    rel_rows = []
    for rel in r.relations:
        terms = []
        for c, pth in rel:
            terms.append((c, _as_path(q, pth)))
        _check_composable(q, terms)
        ends = {(pth[0], pd.end(pth)) for _, pth in terms}
        if len(ends) > 1:
            raise ValidationError("paths in one relation must share source and target")
        rel_rows.append(pd.vector(terms))
    rows = np.array(rel_rows, dtype=np.int64).reshape(-1, len(pd.paths))
    ideal = _close_ideal(pd, rows)
    for pth in pd.paths:
        if len(pth[1]) == bound and not ideal.contains(pd.vector([(1, pth)])):
            raise NotAdmissible(f"path {path_label(pth)} of length {bound} is not in the ideal")
    piv = set(ideal.pivots)
    basis_cols = sorted((k for k in range(len(pd.paths)) if k not in piv),
                        key=lambda k: pd.key(pd.paths[k]))
    if len(basis_cols) > BASIS_CAP:
        raise DimensionBlowup(f"basis of size {len(basis_cols)} exceeds the cap {BASIS_CAP}")
    bpaths = [pd.paths[k] for k in basis_cols]
    n = len(bpaths)
    mult = np.zeros((n, n, n), dtype=np.int64)
    for i, pi in enumerate(bpaths):
        for j, pj in enumerate(bpaths):
            c = pd.concat(pi, pj)
            if c is None:
                continue
            mult[i, j] = ideal.reduce(pd.vector([(1, c)]))[basis_cols]
    nv = len(q.vertices)
    unit = np.zeros(n, dtype=np.int64)
    unit[:nv] = 1
    idem = [np.eye(n, dtype=np.int64)[k] for k in range(nv)]
    gens = [np.eye(n, dtype=np.int64)[k] for k in range(n) if len(bpaths[k][1]) <= 1]
    rad = [np.eye(n, dtype=np.int64)[k] for k in range(n) if bpaths[k][1]]
    alg = Algebra(fs, [path_label(b) for b in bpaths], mult, unit, idem, vertex_labels=q.vertices,
                  generators=gens, rad_basis=np.array(rad, dtype=np.int64).reshape(-1, n), name=name)
    alg.quiver, alg.relations, alg.paths, alg.ideal = q, r, pd, ideal
    alg.basis_paths = bpaths
    alg._basis_cols = basis_cols
    return alg


def _check_composable(q: Quiver, terms):
    for _, (v, arrs) in terms:
        cur = v
        for a in arrs:
            if q.source(a) != cur:
                raise ValidationError(f"relation term {'*'.join(arrs)} is not a composable path")
            cur = q.target(a)


def in_ideal(alg: Algebra, terms) -> bool:
    """Whether a combination of paths lies in the defining ideal."""
    pd = alg.paths
    return alg.ideal.contains(pd.vector([(c, _as_path(alg.quiver, pth)) for c, pth in terms]))


@dataclass
class GabrielQuiver:
    quiver: Quiver
    multiplicity: dict = field(default_factory=dict)  # (i, j) -> number of arrows i -> j

    @property
    def n_arrows(self) -> int:
        return sum(self.multiplicity.values())


def gabriel_quiver(a: Algebra, rad_basis=None) -> GabrielQuiver:
    """Quiver of a basic algebra from a given radical.

    Arrows ``i -> j`` are counted by ``dim e_i (J/J^2) e_j``, matching right
    modules with paths composed left to right.
    """
    rb = a.rad_basis if rad_basis is None else np.asarray(rad_basis, dtype=np.int64).reshape(-1, a.dim)
    J = a.span(rb)
    basis = np.eye(a.dim, dtype=np.int64)
    if J.dim and not (J.contains_all(a.products(basis, J.rows)) and J.contains_all(a.products(J.rows, basis))):
        raise ValidationError("radical basis does not span a two-sided ideal")
    powers = [J]
    cur = J
    for _ in range(a.dim + 1):
        if cur.dim == 0:
            break
        cur = a.span(a.products(cur.rows, J.rows))
        powers.append(cur)
    else:
        raise NotNilpotent("radical candidate is not nilpotent")
    if cur.dim:
        raise NotNilpotent("radical candidate is not nilpotent")
    J2 = powers[1] if len(powers) > 1 else a.span(np.zeros((0, a.dim)))
    idem = a.idempotents
    k = len(idem)
    mult = {}
    for i, j in product(range(k), repeat=2):
        eAe = a.sandwich(idem[i], idem[j]).dim
        eJe = _sandwich_sub(a, idem[i], J, idem[j]).dim
        if (i == j and eAe - eJe != 1) or (i != j and eAe != eJe):
            raise NotBasic(f"corner {a.vertex_labels[i]},{a.vertex_labels[j]} of A/J is not as in a basic algebra")
        eJ2e = _sandwich_sub(a, idem[i], J2, idem[j]).dim
        if eJe - eJ2e:
            mult[(a.vertex_labels[i], a.vertex_labels[j])] = eJe - eJ2e
    arrows = []
    for (i, j), m in mult.items():
        for t in range(m):
            arrows.append((f"{i}->{j}#{t}", i, j))
    return GabrielQuiver(Quiver(tuple(a.vertex_labels), tuple(arrows)), mult)


def _sandwich_sub(a: Algebra, e, sub: Span, f) -> Span:
    if sub.dim == 0:
        return sub
    return a.span(a.products(a.products([e], sub.rows), [f]))


def direct_product(fs: FieldSpec, sizes_labels) -> Algebra:
    """Product of copies of the field, one per label (a semisimple basic algebra)."""
    n = len(sizes_labels)
    mult = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        mult[i, i, i] = 1
    return Algebra(fs, [f"e_{v}" for v in sizes_labels], mult, np.ones(n, dtype=np.int64),
                   list(np.eye(n, dtype=np.int64)), vertex_labels=sizes_labels,
                   rad_basis=np.zeros((0, n), dtype=np.int64))
