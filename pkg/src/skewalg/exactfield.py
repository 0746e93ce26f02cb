"""Exact dense linear algebra over a prime field GF(p).

Matrices are plain ``numpy`` int64 arrays holding residues in ``[0, p)``.
Linear maps follow the column convention throughout the package: a matrix
of shape ``(target_dim, source_dim)`` sends source coordinates to target
coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import FieldError

DEFAULT_P = 32003


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _smallest_primitive_root(p: int) -> int:
    if p == 2:
        return 1
    qs = _prime_factors(p - 1)
    for r in range(2, p):
        if all(pow(r, (p - 1) // q, p) != 1 for q in qs):
            return r
    raise FieldError(f"no primitive root modulo {p}")


@dataclass(frozen=True)
class FieldSpec:
    """The prime field GF(p) together with a fixed multiplicative generator."""

    p: int = DEFAULT_P
    primitive_root: int = field(default=0)

    def __post_init__(self):
        p = self.p
        if not (isinstance(p, (int, np.integer)) and 2 <= p < 2**31 and _is_prime(int(p))):
            raise FieldError(f"modulus {p} is not a prime below 2^31")
        r = self.primitive_root or _smallest_primitive_root(p)
        if not 0 < r < p or any(pow(r, (p - 1) // q, p) == 1 for q in _prime_factors(p - 1)):
            raise FieldError(f"{r} is not a primitive root modulo {p}")
        object.__setattr__(self, "primitive_root", r)

    # -- scalars -------------------------------------------------------
    def inv(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in GF(p)")
        return pow(a, self.p - 2, self.p)

    def root_of_unity(self, n: int) -> int:
        """Fixed primitive n-th root of unity, a power of ``primitive_root``."""
        if (self.p - 1) % n:
            raise FieldError(f"GF({self.p}) has no primitive {n}-th root of unity")
        return pow(self.primitive_root, (self.p - 1) // n, self.p)

    def signed(self, a: int) -> int:
        """Symmetric representative, handy for printing."""
        a = int(a) % self.p
        return a - self.p if a > self.p // 2 else a

    # -- matrices ------------------------------------------------------
    def asmat(self, m, rows: int | None = None, cols: int | None = None) -> np.ndarray:
        a = np.array(m, dtype=np.int64)
        if rows is not None:
            a = a.reshape(rows, cols)
        return a % self.p

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return np.zeros((rows, cols), dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def mul(self, *ms: np.ndarray) -> np.ndarray:
        out = ms[0]
        for m in ms[1:]:
            out = (out @ m) % self.p
        return out

    def rref(self, m: np.ndarray) -> tuple[int, np.ndarray, list[int]]:
        """Reduced row-echelon form. Returns ``(rank, reduced, pivot_cols)``."""
        p = self.p
        a = np.array(m, dtype=np.int64) % p
        if a.ndim != 2:
            raise ValueError("rref expects a 2-d array")
        rows, cols = a.shape
        pivots: list[int] = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            nz = np.nonzero(a[r:, c])[0]
            if nz.size == 0:
                continue
            piv = r + nz[0]
            if piv != r:
                a[[r, piv]] = a[[piv, r]]
            a[r] = (a[r] * self.inv(a[r, c])) % p
            others = np.nonzero(a[:, c])[0]
            others = others[others != r]
            if others.size:
                a[others] = (a[others] - np.outer(a[others, c], a[r])) % p
            pivots.append(c)
            r += 1
        return r, a, pivots

    def rank(self, m: np.ndarray) -> int:
        m = np.asarray(m)
        if m.size == 0:
            return 0
        # eliminate along the shorter side
        if m.shape[0] > m.shape[1]:
            m = m.T
        return self.rref(m)[0]

    def row_basis(self, m: np.ndarray) -> np.ndarray:
        """Rows of the RREF spanning the row space of ``m``."""
        m = np.asarray(m, dtype=np.int64)
        if m.size == 0:
            return np.zeros((0, m.shape[1] if m.ndim == 2 else 0), dtype=np.int64)
        r, red, _ = self.rref(m)
        return red[:r]

    def kernel_basis(self, m: np.ndarray) -> list[np.ndarray]:
        """Basis of the right null space ``{x : m @ x = 0}``."""
        m = np.asarray(m, dtype=np.int64)
        cols = m.shape[1]
        if m.shape[0] == 0:
            return [np.eye(cols, dtype=np.int64)[i] for i in range(cols)]
        r, red, pivots = self.rref(m)
        free = [c for c in range(cols) if c not in set(pivots)]
        out = []
        for f in free:
            v = np.zeros(cols, dtype=np.int64)
            v[f] = 1
            for i, pc in enumerate(pivots):
                v[pc] = (-red[i, f]) % self.p
            out.append(v)
        return out

    def kernel_matrix(self, m: np.ndarray) -> np.ndarray:
        """Kernel basis stacked as columns, shape ``(cols, nullity)``."""
        ks = self.kernel_basis(m)
        cols = np.asarray(m).shape[1]
        if not ks:
            return np.zeros((cols, 0), dtype=np.int64)
        return np.stack(ks, axis=1)

    def coker_data(self, m: np.ndarray) -> tuple[int, np.ndarray]:
        """Cokernel of ``m`` (target x source).

        Returns ``(dim, projection)`` with ``projection`` of shape
        ``(dim, target_dim)`` vanishing on the image of ``m``.
        """
        m = np.asarray(m, dtype=np.int64) % self.p
        target = m.shape[0]
        if m.shape[1] == 0 or target == 0:
            return target, np.eye(target, dtype=np.int64)
        # left null space of m = kernel of m^T; rows annihilate the image
        ker = self.kernel_basis(m.T)
        if not ker:
            return 0, np.zeros((0, target), dtype=np.int64)
        return len(ker), np.stack(ker) % self.p

    def solve(self, a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
        """One solution ``x`` of ``a @ x = b`` or ``None``. ``b`` may be 1-d or 2-d."""
        a = np.asarray(a, dtype=np.int64) % self.p
        b = np.asarray(b, dtype=np.int64) % self.p
        vec = b.ndim == 1
        if vec:
            b = b[:, None]
        n = a.shape[1]
        if a.shape[0] == 0:
            return None if b.any() else np.zeros((n,) if vec else (n, b.shape[1]), dtype=np.int64)
        r, red, pivots = self.rref(np.hstack([a, b]))
        if any(pc >= n for pc in pivots):
            return None
        x = np.zeros((n, b.shape[1]), dtype=np.int64)
        for i, pc in enumerate(pivots):
            x[pc] = red[i, n:]
        return x[:, 0] if vec else x

    def inverse(self, m: np.ndarray) -> np.ndarray | None:
        m = np.asarray(m, dtype=np.int64)
        n = m.shape[0]
        if m.shape != (n, n):
            raise ValueError("inverse of a non-square matrix")
        if n == 0:
            return m.copy()
        r, red, pivots = self.rref(np.hstack([m % self.p, np.eye(n, dtype=np.int64)]))
        if r < n or pivots[n - 1] != n - 1:
            return None
        return red[:, n:]

    def is_invertible(self, m: np.ndarray) -> bool:
        m = np.asarray(m)
        return m.shape[0] == m.shape[1] and self.rank(m) == m.shape[0]

    def left_inverse(self, b: np.ndarray) -> np.ndarray:
        """Left inverse of a full-column-rank matrix ``b`` (d x k)."""
        b = np.asarray(b, dtype=np.int64) % self.p
        d, k = b.shape
        if k == 0:
            return np.zeros((0, d), dtype=np.int64)
        r, _, rows = self.rref(b.T)
        if r < k:
            raise ValueError("matrix does not have full column rank")
        sq = self.inverse(b[rows, :])
        out = np.zeros((k, d), dtype=np.int64)
        out[:, rows] = sq
        return out

    def column_basis(self, m: np.ndarray) -> np.ndarray:
        """Columns spanning the column space of ``m`` (a subset of its columns)."""
        m = np.asarray(m, dtype=np.int64) % self.p
        if m.shape[1] == 0:
            return m
        _, _, piv = self.rref(m)
        return m[:, piv]

    def coords(self, basis_rows: np.ndarray, pivots: list[int], v: np.ndarray) -> np.ndarray | None:
        """Coordinates of ``v`` in an RREF row basis, or ``None`` if outside the span."""
        c = np.asarray(v, dtype=np.int64)[pivots] % self.p
        if len(pivots) and ((c @ basis_rows - v) % self.p).any():
            return None
        if not len(pivots) and (np.asarray(v) % self.p).any():
            return None
        return c

    def random_matrix(self, rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
        return rng.integers(0, self.p, size=(rows, cols), dtype=np.int64)

    def charpoly(self, m: np.ndarray) -> list[int]:
        """Characteristic polynomial, coefficients highest degree first.

        Faddeev-LeVerrier; needs ``p > n`` for the divisions.
        """
        p = self.p
        m = np.asarray(m, dtype=np.int64) % p
        n = m.shape[0]
        if n >= p:
            raise FieldError("characteristic polynomial needs p > matrix size")
        coeffs = [1]
        mk = np.zeros_like(m)
        ident = np.eye(n, dtype=np.int64)
        c = 1
        for k in range(1, n + 1):
            mk = (m @ (mk + c * ident)) % p
            c = (-int(np.trace(mk) % p) * self.inv(k)) % p
            coeffs.append(c)
        return coeffs

    def polyval_matrix(self, coeffs: list[int], m: np.ndarray) -> np.ndarray:
        """Evaluate a polynomial (highest degree first) at a square matrix."""
        n = m.shape[0]
        out = np.zeros((n, n), dtype=np.int64)
        ident = np.eye(n, dtype=np.int64)
        for c in coeffs:
            out = (out @ m + int(c) * ident) % self.p
        return out

    def is_nilpotent(self, m: np.ndarray) -> bool:
        n = m.shape[0]
        acc = np.asarray(m, dtype=np.int64) % self.p
        # squaring reaches power >= n in log steps
        k = 1
        while k < n:
            acc = (acc @ acc) % self.p
            k *= 2
        return not acc.any()


class Span:
    """A subspace of GF(p)^n held as RREF rows, with membership and coordinates."""

    def __init__(self, fs: FieldSpec, vectors, n: int | None = None):
        vs = np.asarray(vectors, dtype=np.int64)
        if vs.ndim == 1:
            vs = vs.reshape(0, n) if vs.size == 0 else vs[None, :]
        if vs.shape[0] == 0:
            self.n = n if n is not None else vs.shape[1]
            self.rows = np.zeros((0, self.n), dtype=np.int64)
            self.pivots: list[int] = []
        else:
            self.n = vs.shape[1]
            r, red, piv = fs.rref(vs)
            self.rows, self.pivots = red[:r], piv
        self.fs = fs

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        """Remainder of ``v`` (or each row of a 2-d ``v``) after clearing pivot columns."""
        v = np.asarray(v, dtype=np.int64) % self.fs.p
        if not self.pivots:
            return v
        if v.ndim == 1:
            return (v - v[self.pivots] @ self.rows) % self.fs.p
        return (v - (v[:, self.pivots] @ self.rows) % self.fs.p) % self.fs.p

    def contains(self, v: np.ndarray) -> bool:
        return not self.reduce(v).any()

    def contains_all(self, vs: np.ndarray) -> bool:
        vs = np.asarray(vs, dtype=np.int64)
        return vs.size == 0 or not self.reduce(vs.reshape(-1, self.n)).any()

    def coords(self, v: np.ndarray) -> np.ndarray:
        """Coordinates of ``v`` against ``rows``; raises if ``v`` is outside."""
        v = np.asarray(v, dtype=np.int64) % self.fs.p
        if self.reduce(v).any():
            raise ValueError("vector not in span")
        return v[self.pivots] if v.ndim == 1 else v[:, self.pivots]

    def extend(self, vectors) -> "Span":
        vs = np.asarray(vectors, dtype=np.int64).reshape(-1, self.n)
        return Span(self.fs, np.vstack([self.rows, vs]), self.n)


DEFAULT_FIELD = FieldSpec()
