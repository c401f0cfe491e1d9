"""Exact linear algebra: rank/kernel over any field, Pfaffians and minors of
polynomial matrices, and a blocked modular echelon routine for large F_p systems.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exactmath import Field
from .polyring import MultiPoly


class OddSubset(ValueError):
    pass


class NotSkew(ValueError):
    pass


# ---------------------------------------------------------------------------
# matrices over a field (raw values)


@dataclass
class FieldMatrix:
    field: Field
    rows: list[list]

    @classmethod
    def from_values(cls, field: Field, rows):
        return cls(field, [[field.coerce(x) for x in r] for r in rows])

    @property
    def shape(self):
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def rank_kernel(self):
        return rank_kernel(self.rows, self.field)


def rref(rows: Sequence[Sequence], field: Field) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns."""
    F = field
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if not F.is_zero(m[i][c])), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = F.inv(m[r][c])
        m[r] = [F.mul(x, inv) for x in m[r]]
        for i in range(nrows):
            if i != r and not F.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank_kernel(rows: Sequence[Sequence], field: Field) -> tuple[int, list[list]]:
    """Rank and a kernel basis (one vector per free column, free entry 1)."""
    F = field
    ncols = len(rows[0]) if rows else 0
    red, pivots = rref(rows, F)
    free = [c for c in range(ncols) if c not in set(pivots)]
    kernel = []
    for f in free:
        v = [F.zero] * ncols
        v[f] = F.one
        for r, pc in enumerate(pivots):
            v[pc] = F.neg(red[r][f])
        kernel.append(v)
    return len(pivots), kernel


def rank(rows, field: Field) -> int:
    return len(rref(rows, field)[1]) if rows else 0


def mat_mul(a, b, field: Field):
    F = field
    out = []
    for row in a:
        out_row = []
        for j in range(len(b[0])):
            acc = F.zero
            for k, x in enumerate(row):
                if not F.is_zero(x):
                    acc = F.add(acc, F.mul(x, b[k][j]))
            out_row.append(acc)
        out.append(out_row)
    return out


def mat_vec(a, v, field: Field):
    return [r[0] for r in mat_mul(a, [[x] for x in v], field)]


def determinant_values(m, field: Field):
    """Determinant of a square matrix of field values by elimination."""
    F = field
    m = [list(r) for r in m]
    n = len(m)
    det = F.one
    for c in range(n):
        piv = next((i for i in range(c, n) if not F.is_zero(m[i][c])), None)
        if piv is None:
            return F.zero
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = F.neg(det)
        det = F.mul(det, m[c][c])
        inv = F.inv(m[c][c])
        for i in range(c + 1, n):
            if not F.is_zero(m[i][c]):
                f = F.mul(m[i][c], inv)
                m[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(m[i], m[c])]
    return det


def pfaffian_values(m, field: Field, idx: Sequence[int] | None = None):
    """Pfaffian of a skew matrix of field values, by first-row expansion."""
    F = field
    idx = list(range(len(m))) if idx is None else list(idx)
    if len(idx) % 2:
        raise OddSubset("Pfaffian needs an even index set")
    if not idx:
        return F.one
    i = idx[0]
    acc = F.zero
    for pos in range(1, len(idx)):
        j = idx[pos]
        a = m[i][j]
        if F.is_zero(a):
            continue
        rest = idx[1:pos] + idx[pos + 1:]
        term = F.mul(a, pfaffian_values(m, F, rest))
        acc = F.add(acc, term) if pos % 2 == 1 else F.sub(acc, term)
    return acc


# ---------------------------------------------------------------------------
# matrices of polynomials


class PolyMatrix:
    def __init__(self, entries: Sequence[Sequence[MultiPoly]]):
        self.entries = [list(r) for r in entries]
        if any(len(r) != len(self.entries[0]) for r in self.entries):
            raise ValueError("ragged matrix")

    @property
    def shape(self):
        return len(self.entries), len(self.entries[0])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i):
        return list(self.entries[i])

    def col(self, j):
        return [r[j] for r in self.entries]

    def map(self, fn) -> "PolyMatrix":
        return type(self)([[fn(x) for x in r] for r in self.entries])

    def substitute(self, assignment, target=None):
        return self.map(lambda f: f.substitute(assignment, target))

    def evaluate(self, point) -> list[list]:
        return [[f.eval_raw(point) for f in r] for r in self.entries]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([list(c) for c in zip(*self.entries)])

    def to_json(self):
        return [[f.render() for f in r] for r in self.entries]

    def render_grid(self) -> str:
        return "\n".join("  ".join(f.render() for f in r) for r in self.entries)

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.entries == other.entries


class SkewPolyMatrix(PolyMatrix):
    def __init__(self, entries):
        super().__init__(entries)
        n = len(self.entries)
        for i in range(n):
            if not self.entries[i][i].is_zero():
                raise NotSkew(f"nonzero diagonal entry at {i}")
            for j in range(i + 1, n):
                if self.entries[i][j] != -self.entries[j][i]:
                    raise NotSkew(f"entries ({i},{j}) and ({j},{i}) are not opposite")

    @classmethod
    def from_upper(cls, upper: dict, n: int, zero: MultiPoly) -> "SkewPolyMatrix":
        """Build from {(i, j): entry} with i < j (0-based)."""
        m = [[zero for _ in range(n)] for _ in range(n)]
        for (i, j), f in upper.items():
            m[i][j] = f
            m[j][i] = -f
        return cls(m)


def pfaffian(M: PolyMatrix, rows: Sequence[int] | None = None, _memo=None) -> MultiPoly:
    """Pfaffian of the principal submatrix on ``rows`` (0-based)."""
    rows = tuple(range(M.shape[0])) if rows is None else tuple(rows)
    if len(rows) % 2:
        raise OddSubset("Pfaffian needs an even-size index set")
    memo = {} if _memo is None else _memo
    return _pf(M.entries, rows, memo)


def _pf(m, idx: tuple, memo) -> MultiPoly:
    if idx in memo:
        return memo[idx]
    if not idx:
        zero = m[0][0]
        res = zero + zero.field.one
    elif len(idx) == 2:
        res = m[idx[0]][idx[1]]
    else:
        i = idx[0]
        res = None
        for pos in range(1, len(idx)):
            a = m[i][idx[pos]]
            if a.is_zero():
                continue
            rest = idx[1:pos] + idx[pos + 1:]
            sub = _pf(m, rest, memo)
            if sub.is_zero():
                continue
            t = a * sub
            if res is None:
                res = t if pos % 2 == 1 else -t
            else:
                res = res + t if pos % 2 == 1 else res - t
        if res is None:
            res = m[i][i]  # the zero diagonal entry
    memo[idx] = res
    return res


def sub_pfaffians(M: PolyMatrix, k: int) -> list[tuple[tuple[int, ...], MultiPoly]]:
    """All principal k x k Pfaffians, row subsets in lexicographic order."""
    if k % 2:
        raise OddSubset("k must be even")
    memo: dict = {}
    n = M.shape[0]
    return [(s, _pf(M.entries, s, memo)) for s in itertools.combinations(range(n), k)]


def determinant(entries, _memo=None) -> MultiPoly:
    """Determinant of a square polynomial matrix by Laplace expansion."""
    n = len(entries)
    memo = {} if _memo is None else _memo
    return _det(entries, tuple(range(n)), tuple(range(n)), memo)


def _det(m, rows: tuple, cols: tuple, memo) -> MultiPoly:
    key = (rows, cols)
    if key in memo:
        return memo[key]
    if len(rows) == 1:
        res = m[rows[0]][cols[0]]
    else:
        r = rows[0]
        rest_rows = rows[1:]
        res = None
        for pos, c in enumerate(cols):
            a = m[r][c]
            if a.is_zero():
                continue
            sub = _det(m, rest_rows, cols[:pos] + cols[pos + 1:], memo)
            if sub.is_zero():
                continue
            t = a * sub
            if res is None:
                res = t if pos % 2 == 0 else -t
            else:
                res = res + t if pos % 2 == 0 else res - t
        if res is None:
            res = m[r][cols[0]] - m[r][cols[0]]
    memo[key] = res
    return res


def minors(M: PolyMatrix, k: int) -> list[tuple[tuple, tuple, MultiPoly]]:
    """All k x k minors as (row subset, column subset, minor), rows outer, columns inner."""
    nr, nc = M.shape
    memo: dict = {}
    out = []
    for rs in itertools.combinations(range(nr), k):
        for cs in itertools.combinations(range(nc), k):
            out.append((rs, cs, _det(M.entries, rs, cs, memo)))
    return out


# ---------------------------------------------------------------------------
# blocked modular elimination (numpy)

_FLOAT_SAFE = 2**52


def mulmod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """(a @ b) mod p for int64 arrays with entries in [0, p), exact via float64."""
    inner = a.shape[1]
    if inner == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    step = max(1, _FLOAT_SAFE // ((p - 1) ** 2 + 1))
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(0, inner, step):
        prod = a[:, s:s + step].astype(np.float64) @ b[s:s + step].astype(np.float64)
        out = (out + np.fmod(prod, p).astype(np.int64)) % p
    return out


def _rref_small(X: np.ndarray, p: int, extra: np.ndarray | None = None):
    """In-place RREF of a small dense block; returns pivot columns.

    ``extra`` (same row count) receives the same row operations.
    """
    k = X.shape[0]
    pivots = []
    r = 0
    while r < k:
        nz = np.flatnonzero(X[r:].any(axis=0))
        if nz.size == 0:
            break
        c = int(nz[0])
        pr = r + int(np.flatnonzero(X[r:, c])[0])
        if pr != r:
            X[[r, pr]] = X[[pr, r]]
            if extra is not None:
                extra[[r, pr]] = extra[[pr, r]]
        inv = pow(int(X[r, c]), -1, p)
        X[r] = X[r] * inv % p
        if extra is not None:
            extra[r] = extra[r] * inv % p
        col = X[:, c].copy()
        col[r] = 0
        nzr = np.flatnonzero(col)
        if nzr.size:
            X[nzr] = (X[nzr] - np.outer(col[nzr], X[r])) % p
            if extra is not None:
                extra[nzr] = (extra[nzr] - np.outer(col[nzr], extra[r])) % p
        pivots.append(c)
        r += 1
    return pivots, r


@dataclass
class ModEchelon:
    """Reduced row basis of a row space over F_p.

    ``basis[:, pivots]`` is the identity; ``transform`` (when tracked) expresses
    each basis row in terms of the original input rows.
    """

    p: int
    ncols: int
    basis: np.ndarray
    pivots: list
    transform: np.ndarray | None = None

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vecs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Return (coefficients on basis rows, residual) for row vectors."""
        vecs = np.atleast_2d(vecs) % self.p
        if not self.pivots:
            return np.zeros((vecs.shape[0], 0), dtype=np.int64), vecs
        coef = vecs[:, self.pivots]
        resid = (vecs - mulmod(coef, self.basis, self.p)) % self.p
        return coef, resid


def echelon_mod_p(A: np.ndarray, p: int, track: bool = False, batch: int = 192) -> ModEchelon:
    """Blocked RREF of the row space of A (int64, entries reduced mod p)."""
    A = np.asarray(A, dtype=np.int64) % p
    nrows, ncols = A.shape
    basis = np.zeros((0, ncols), dtype=np.int64)
    trans = np.zeros((0, nrows), dtype=np.int64) if track else None
    pivots: list[int] = []
    for s in range(0, nrows, batch):
        X = A[s:s + batch].copy()
        k = X.shape[0]
        XT = None
        if track:
            XT = np.zeros((k, nrows), dtype=np.int64)
            XT[np.arange(k), np.arange(s, s + k)] = 1
        if pivots:
            coef = X[:, pivots].copy()
            X = (X - mulmod(coef, basis, p)) % p
            if track:
                XT = (XT - mulmod(coef, trans, p)) % p
        new_piv, r = _rref_small(X, p, XT)
        if r == 0:
            continue
        Y = X[:r]
        if pivots:
            c2 = basis[:, new_piv].copy()
            basis = (basis - mulmod(c2, Y, p)) % p
            if track:
                trans = (trans - mulmod(c2, XT[:r], p)) % p
        basis = np.vstack([basis, Y])
        if track:
            trans = np.vstack([trans, XT[:r]])
        pivots = pivots + new_piv
    return ModEchelon(p, ncols, basis, pivots, trans)


class IncrementalEchelon:
    """Reduced row basis grown chunk by chunk, so the full row set never sits in memory."""

    def __init__(self, ncols: int, p: int, batch: int = 192):
        self.p = p
        self.batch = batch
        self.basis = np.zeros((0, ncols), dtype=np.int64)
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, A: np.ndarray) -> None:
        p = self.p
        A = np.asarray(A, dtype=np.int64) % p
        for s in range(0, A.shape[0], self.batch):
            X = A[s:s + self.batch].copy()
            if self.pivots:
                X = (X - mulmod(X[:, self.pivots].copy(), self.basis, p)) % p
            new_piv, r = _rref_small(X, p, None)
            if r == 0:
                continue
            Y = X[:r]
            if self.pivots:
                self.basis = (self.basis - mulmod(self.basis[:, new_piv].copy(), Y, p)) % p
            self.basis = np.vstack([self.basis, Y])
            self.pivots = self.pivots + new_piv


def rank_mod_p(A: np.ndarray, p: int) -> int:
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return 0
    # eliminate along the shorter side
    if A.shape[0] > A.shape[1]:
        A = A.T
    return echelon_mod_p(A, p).rank


def kernel_mod_p(A: np.ndarray, p: int) -> np.ndarray:
    """Kernel basis (rows) of x -> A x over F_p, one vector per free column."""
    A = np.asarray(A, dtype=np.int64) % p
    ech = echelon_mod_p(A, p)
    n = A.shape[1]
    piv = set(ech.pivots)
    free = [c for c in range(n) if c not in piv]
    K = np.zeros((len(free), n), dtype=np.int64)
    for t, f in enumerate(free):
        K[t, f] = 1
        for r, pc in enumerate(ech.pivots):
            K[t, pc] = (-ech.basis[r, f]) % p
    return K
