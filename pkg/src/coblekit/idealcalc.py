"""Graded ideal computations by linear algebra in a single degree.

Nothing here builds a Groebner basis.  The degree-d piece I_d is spanned by
generator * monomial products; its dimension, membership of a target and a
multiplier certificate all come from one echelon form over F_p.  Products
split into independent blocks whenever their monomial supports do (for
Heisenberg-graded ideals this recovers the weight decomposition), and each
block is eliminated separately.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Sequence

import numpy as np

from .exactmath import GF
from .matalg import IncrementalEchelon, echelon_mod_p, mulmod, rank_mod_p, rref
from .polyring import MultiPoly, VarContext, monomials_of_degree


class InhomogeneousInput(ValueError):
    pass


class NoStabilization(RuntimeError):
    pass


@dataclass
class GradedIdeal:
    gens: list
    ctx: VarContext

    def __post_init__(self):
        self.gens = [g for g in self.gens if not g.is_zero()]
        for g in self.gens:
            if g.ctx != self.ctx:
                raise ValueError("generator context differs from ideal context")
            if not g.is_homogeneous():
                raise InhomogeneousInput(f"generator {g.render()[:60]} is not homogeneous")

    def degrees(self) -> list[int]:
        return [g.degree() for g in self.gens]

    def reduce_mod(self, p: int) -> "GradedIdeal":
        if all(g.field == GF(p) for g in self.gens):
            return self
        return GradedIdeal([g.reduce_mod(p) for g in self.gens], self.ctx)

    def __add__(self, other: "GradedIdeal") -> "GradedIdeal":
        return GradedIdeal(self.gens + other.gens, self.ctx)


@dataclass
class MembershipCertificate:
    target: MultiPoly
    generators: list
    multipliers: list
    p: int
    verified: bool = dc_field(default=False)

    def verify(self) -> bool:
        acc = self.target * 0
        for m, g in zip(self.multipliers, self.generators):
            if not m.is_zero():
                acc = acc + m * g
        self.verified = acc == self.target
        return self.verified

    def to_json(self) -> dict:
        return {
            "prime": self.p,
            "multipliers": {str(i): m.render() for i, m in enumerate(self.multipliers) if not m.is_zero()},
        }


class NotMemberInDegree:
    """Verdict: the target is not in I_d over F_p."""

    def __init__(self, degree: int, p: int):
        self.degree = degree
        self.p = p

    def __bool__(self):
        return False

    def __repr__(self):
        return f"NotMemberInDegree(d={self.degree}, p={self.p})"


# ---------------------------------------------------------------------------
# product systems


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        par = self.parent
        root = x
        while par.setdefault(root, root) != root:
            root = par[root]
        while par[x] != root:
            par[x], x = root, par[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def _int_terms(g: MultiPoly, p: int) -> list[tuple[tuple, int]]:
    return [(e, int(c) % p) for e, c in g.terms.items() if int(c) % p]


def _product_rows(gens_p: Sequence[MultiPoly], d: int, p: int):
    """Rows (gen index, multiplier exponent, {monomial: coef}) spanning I_d."""
    n = len(gens_p[0].ctx) if gens_p else 0
    rows = []
    mono_cache: dict = {}
    for gi, g in enumerate(gens_p):
        dg = g.degree()
        if dg > d or g.is_zero():
            continue
        shift = d - dg
        if shift not in mono_cache:
            mono_cache[shift] = monomials_of_degree(n, shift)
        terms = _int_terms(g, p)
        for m in mono_cache[shift]:
            rows.append((gi, m, [(tuple(a + b for a, b in zip(e, m)), c) for e, c in terms]))
    return rows


def _blocks(rows, extra_monos=()):
    """Group row indices by connected monomial support."""
    uf = _UnionFind()
    for _, _, terms in rows:
        first = terms[0][0]
        uf.find(first)
        for e, _ in terms[1:]:
            uf.union(first, e)
    for e in extra_monos:
        uf.find(e)
    blocks: dict = {}
    for ri, (_, _, terms) in enumerate(rows):
        blocks.setdefault(uf.find(terms[0][0]), []).append(ri)
    return uf, blocks


def _block_matrix(rows, idxs):
    cols: dict = {}
    for ri in idxs:
        for e, _ in rows[ri][2]:
            if e not in cols:
                cols[e] = len(cols)
    A = np.zeros((len(idxs), len(cols)), dtype=np.int64)
    for r, ri in enumerate(idxs):
        for e, c in rows[ri][2]:
            A[r, cols[e]] = (A[r, cols[e]] + c)
    return A, cols


def ideal_rank_in_degree(I: GradedIdeal, d: int, p: int) -> int:
    """dim_F_p I_d."""
    Ip = I.reduce_mod(p)
    rows = _product_rows(Ip.gens, d, p)
    if not rows:
        return 0
    _, blocks = _blocks(rows)
    total = 0
    for idxs in blocks.values():
        A, _ = _block_matrix(rows, idxs)
        total += rank_mod_p(A % p, p)
    return total


def hilbert_value(I: GradedIdeal, d: int, p: int) -> int:
    """dim (R/I)_d over F_p."""
    n = len(I.ctx)
    return comb(d + n - 1, n - 1) - ideal_rank_in_degree(I, d, p)


def hilbert_values(I: GradedIdeal, degrees: Sequence[int], p: int) -> dict[int, int]:
    return {d: hilbert_value(I, d, p) for d in degrees}


def member_in_degree(f: MultiPoly, I: GradedIdeal, p: int):
    """Certificate that f lies in I_{deg f} over F_p, or NotMemberInDegree."""
    if not f.is_homogeneous():
        raise InhomogeneousInput("target must be homogeneous")
    Ip = I.reduce_mod(p)
    F = GF(p)
    fp = f if f.field == F else f.reduce_mod(p)
    if fp.is_zero():
        zeros = [MultiPoly.zero(I.ctx, F) for _ in Ip.gens]
        cert = MembershipCertificate(fp, Ip.gens, zeros, p)
        cert.verify()
        return cert
    d = fp.degree()
    rows = _product_rows(Ip.gens, d, p)
    uf, blocks = _blocks(rows, extra_monos=list(fp.terms))
    # split the target along the blocks
    tparts: dict = {}
    for e, c in fp.terms.items():
        tparts.setdefault(uf.find(e), []).append((e, int(c) % p))
    mult_terms = [dict() for _ in Ip.gens]
    for root, tterms in tparts.items():
        idxs = blocks.get(root)
        if not idxs:
            return NotMemberInDegree(d, p)
        A, cols = _block_matrix(rows, idxs)
        A %= p
        ech = echelon_mod_p(A, p, track=True)
        t = np.zeros((1, len(cols)), dtype=np.int64)
        for e, c in tterms:
            t[0, cols[e]] = c
        coef, resid = ech.reduce(t)
        if resid.any():
            return NotMemberInDegree(d, p)
        # combination of original rows
        x = mulmod(coef, ech.transform, p)[0]
        for r in np.flatnonzero(x):
            gi, m, _ = rows[idxs[r]]
            mt = mult_terms[gi]
            mt[m] = (mt.get(m, 0) + int(x[r])) % p
    mults = [MultiPoly(I.ctx, F, {m: c for m, c in mt.items() if c}) for mt in mult_terms]
    cert = MembershipCertificate(fp, Ip.gens, mults, p)
    if not cert.verify():
        raise AssertionError("membership certificate failed exact re-verification")
    return cert


def hilbert_values_incremental(I: GradedIdeal, degrees: Sequence[int], p: int) -> dict[int, int]:
    """Hilbert values building I_d = sum x_i I_(d-1) + (generators of degree d).

    Memory stays at one basis of I_d; suited to many generators in few variables."""
    n = len(I.ctx)
    Ip = I.reduce_mod(p)
    by_deg: dict = {}
    for g in Ip.gens:
        if not g.is_zero():
            by_deg.setdefault(g.degree(), []).append(g)
    top = max(degrees)
    out = {}
    prev = None  # (basis, monomial index) in degree d - 1
    for d in range(0, top + 1):
        monos = monomials_of_degree(n, d)
        index = {m: k for k, m in enumerate(monos)}
        ech = IncrementalEchelon(len(monos), p)
        if prev is not None and prev[0].shape[0]:
            basis, pmonos = prev
            for i in range(n):
                cols = np.array([index[m[:i] + (m[i] + 1,) + m[i + 1:]] for m in pmonos], dtype=np.int64)
                for s in range(0, basis.shape[0], 1024):
                    chunk = basis[s:s + 1024]
                    X = np.zeros((chunk.shape[0], len(monos)), dtype=np.int64)
                    X[:, cols] = chunk
                    ech.add(X)
        gens = by_deg.get(d, [])
        if gens:
            X = np.zeros((len(gens), len(monos)), dtype=np.int64)
            for r, g in enumerate(gens):
                for e, c in g.terms.items():
                    X[r, index[e]] = int(c) % p
            ech.add(X)
        if d in degrees:
            out[d] = len(monos) - ech.rank
        prev = (ech.basis, monos)
    return out


# ---------------------------------------------------------------------------
# slices


def random_slice(I: GradedIdeal, nvars: int, p: int, rng: random.Random, names=None) -> GradedIdeal:
    """Restrict to a random linear subspace: x_i = sum_j L_ij u_j (entries in F_p)."""
    names = names or tuple(f"u{j}" for j in range(1, nvars + 1))
    tctx = VarContext(tuple(names))
    F = GF(p)
    us = [MultiPoly.var(tctx, n, F) for n in names]
    # the map u -> x must be injective, otherwise the slice is not generic
    while True:
        L = np.array([[rng.randrange(p) for _ in us] for _ in I.ctx.names], dtype=np.int64)
        if rank_mod_p(L.copy(), p) == nvars:
            break
    assign = {}
    for name, row in zip(I.ctx.names, L.tolist()):
        acc = MultiPoly.zero(tctx, F)
        for u, a in zip(us, row):
            acc = acc + u.scale(a)
        assign[name] = acc
    Ip = I.reduce_mod(p)
    return GradedIdeal([g.substitute(assign, tctx) for g in Ip.gens], tctx)


@dataclass
class SliceResult:
    value: int | None
    stabilized: bool
    values: list  # per slice: {d: H(d)}
    agree: bool


def stabilized_value(vals: dict[int, int], window: int = 3):
    """Common value of the last ``window`` degrees, or None."""
    ds = sorted(vals)
    if len(ds) < window:
        return None
    tail = [vals[d] for d in ds[-window:]]
    return tail[0] if len(set(tail)) == 1 else None


def slice_hilbert(J: GradedIdeal, p: int, d_lo: int, d_hi: int, window: int = 3) -> dict[int, int]:
    """Hilbert values from d_lo upward, stopping early once ``window`` values agree."""
    vals: dict = {}
    for d in range(d_lo, d_hi + 1):
        vals[d] = hilbert_value(J, d, p)
        if stabilized_value(vals, window) is not None:
            break
    return vals


def slice_degree(
    I: GradedIdeal,
    expected_dim: int,
    p: int = 61,
    d_lo: int = 1,
    d_hi: int = 12,
    seed: int = 0,
    repeats: int = 3,
    window: int = 3,
) -> SliceResult:
    """Degree via the stabilized Hilbert value of generic 0-dimensional slices."""
    n = len(I.ctx)
    k = n - expected_dim
    if k < 1:
        raise ValueError("expected dimension too large for the ambient space")
    rng = random.Random(seed)
    all_vals = []
    finals = []
    for _ in range(repeats):
        J = random_slice(I, k, p, rng)
        vals = slice_hilbert(J, p, d_lo, d_hi, window)
        all_vals.append(vals)
        finals.append(stabilized_value(vals, window))
    stabilized = all(v is not None for v in finals)
    agree = stabilized and len(set(finals)) == 1
    return SliceResult(finals[0] if agree else None, stabilized, all_vals, agree)


# ---------------------------------------------------------------------------
# linear spans


def coefficient_rows(forms: Sequence[MultiPoly]):
    monos: dict = {}
    for f in forms:
        for e in f.terms:
            if e not in monos:
                monos[e] = len(monos)
    rows = []
    for f in forms:
        row = [f.field.zero] * len(monos)
        for e, c in f.terms.items():
            row[monos[e]] = c
        rows.append(row)
    return rows, monos


def linear_span_dim(forms: Sequence[MultiPoly], p: int | None = None) -> int:
    """Dimension of the span over the coefficient field (or over F_p if given)."""
    forms = [f for f in forms]
    if not forms:
        return 0
    if p is not None:
        forms = [f.reduce_mod(p) if f.field != GF(p) else f for f in forms]
        rows, monos = coefficient_rows(forms)
        if not monos:
            return 0
        return rank_mod_p(np.array(rows, dtype=np.int64), p)
    rows, monos = coefficient_rows(forms)
    if not monos:
        return 0
    return len(rref(rows, forms[0].field)[1])


def same_span(a: Sequence[MultiPoly], b: Sequence[MultiPoly], p: int | None = None) -> bool:
    da, db = linear_span_dim(a, p), linear_span_dim(b, p)
    return da == db == linear_span_dim(list(a) + list(b), p)


# ---------------------------------------------------------------------------
# series


def series_coefficients(numerator: Sequence[int], denom_power: int, upto: int) -> list[int]:
    """Coefficients of numerator(T) / (1-T)^denom_power up to T^upto."""
    out = []
    for d in range(upto + 1):
        s = 0
        for k, a in enumerate(numerator):
            if k <= d:
                s += a * comb(d - k + denom_power - 1, denom_power - 1)
        out.append(s)
    return out
