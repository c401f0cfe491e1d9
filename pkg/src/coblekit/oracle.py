"""Brute-force scans over finite fields.

These are deliberately independent of the symbolic machinery: polynomials are
compiled to lists of (coefficient, exponent) pairs and evaluated on numpy
batches of points, with monomial powers cached per batch.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .exactmath import GF, root_of_unity
from .polyring import MultiPoly

DEFAULT_BUDGET = 2 * 10**9


class BudgetExceeded(RuntimeError):
    pass


class DegenerateParameters(ValueError):
    pass


# ---------------------------------------------------------------------------
# compiled evaluators


class CompiledPoly:
    """Straight-line evaluation of a polynomial over F_p on a batch of points."""

    def __init__(self, f: MultiPoly, p: int):
        fp = f if f.field == GF(p) else f.reduce_mod(p)
        self.p = p
        self.nvars = len(f.ctx)
        self.terms = [(int(c) % p, [(i, k) for i, k in enumerate(e) if k]) for e, c in fp.terms.items()]

    def __call__(self, X: np.ndarray, cache: dict | None = None) -> np.ndarray:
        p = self.p
        cache = {} if cache is None else cache
        acc = np.zeros(X.shape[0], dtype=np.int64)
        for c, mono in self.terms:
            t = np.full(X.shape[0], c, dtype=np.int64)
            for i, k in mono:
                key = (i, k)
                pw = cache.get(key)
                if pw is None:
                    pw = np.ones(X.shape[0], dtype=np.int64)
                    base = X[:, i] % p
                    for _ in range(k):
                        pw = pw * base % p
                    cache[key] = pw
                t = t * pw % p
            acc = (acc + t) % p
        return acc


def compile_polys(polys: Sequence[MultiPoly], p: int) -> list[CompiledPoly]:
    return [CompiledPoly(f, p) for f in polys]


# ---------------------------------------------------------------------------
# projective enumeration


def projective_size(n: int, p: int) -> int:
    return sum(p**k for k in range(n + 1))


def decode_points(start: int, stop: int, n: int, p: int) -> np.ndarray:
    """Points of P^n(F_p) with global indices in [start, stop).

    Ordering: first by the position k of the leading 1 (k = 0 first), then the
    trailing coordinates read as a base-p number."""
    out = []
    offset = 0
    for k in range(n + 1):
        size = p ** (n - k)
        lo, hi = max(start, offset), min(stop, offset + size)
        if lo < hi:
            idx = np.arange(lo - offset, hi - offset, dtype=np.int64)
            X = np.zeros((hi - lo, n + 1), dtype=np.int64)
            X[:, k] = 1
            for j in range(n, k, -1):
                X[:, j] = idx % p
                idx //= p
            out.append(X)
        offset += size
    if not out:
        return np.zeros((0, n + 1), dtype=np.int64)
    return np.vstack(out)


@dataclass
class ScanJob:
    p: int
    n: int  # projective dimension
    evaluators: list = field(default_factory=list)  # MultiPoly list, all must vanish
    filters: list = field(default_factory=list)  # callables X -> bool mask
    seed: int = 0
    workers: int = 1
    budget: int = DEFAULT_BUDGET
    chunk: int = 1 << 18
    count_only: bool = False


def _scan_range(job: ScanJob, compiled, start: int, stop: int):
    hits = []
    count = 0
    evals = 0
    for s in range(start, stop, job.chunk):
        X = decode_points(s, min(stop, s + job.chunk), job.n, job.p)
        cache: dict = {}
        for f in compiled:
            if not len(X):
                break
            v = f(X, cache)
            evals += len(X)
            keep = v == 0
            if not keep.all():
                X = X[keep]
                cache = {k: a[keep] for k, a in cache.items()}
        for flt in job.filters:
            if not len(X):
                break
            X = X[flt(X)]
        count += len(X)
        if not job.count_only:
            hits.append(X)
    pts = np.vstack(hits) if hits else np.zeros((0, job.n + 1), dtype=np.int64)
    return pts, count, evals


def scan_projective(job: ScanJob):
    """All points of P^n(F_p) on which every evaluator vanishes (first nonzero = 1).

    Returns (points array, count, evaluation count)."""
    total = projective_size(job.n, job.p)
    nevals = total * max(1, len(job.evaluators))
    if nevals > job.budget:
        raise BudgetExceeded(f"{nevals} evaluations exceed budget {job.budget}")
    compiled = compile_polys(job.evaluators, job.p)
    w = max(1, job.workers)
    bounds = [total * i // w for i in range(w + 1)]
    ranges = list(zip(bounds[:-1], bounds[1:]))
    if w == 1:
        parts = [_scan_range(job, compiled, a, b) for a, b in ranges]
    else:
        with ThreadPoolExecutor(max_workers=w) as ex:
            parts = list(ex.map(lambda r: _scan_range(job, compiled, *r), ranges))
    pts = np.vstack([q[0] for q in parts])
    if len(pts):
        order = np.lexsort(pts.T[::-1])
        pts = pts[order]
    return pts, sum(q[1] for q in parts), sum(q[2] for q in parts)


def normalize_point(x: Sequence[int], p: int) -> tuple:
    x = [int(v) % p for v in x]
    lead = next((v for v in x if v), None)
    if lead is None:
        raise ValueError("zero vector is not a projective point")
    inv = pow(lead, -1, p)
    return tuple(v * inv % p for v in x)


def rank_mod(rows, p: int) -> int:
    from .matalg import rank_mod_p

    return rank_mod_p(np.array(rows, dtype=np.int64) % p, p)


def batch_rank_mod_p(A: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a stack of matrices (N, n, m) over F_p by vectorized elimination."""
    A = np.array(A, dtype=np.int64) % p
    N, n, m = A.shape
    rank = np.zeros(N, dtype=np.int64)
    rows = np.arange(N)
    inv_table = np.array([0] + [pow(v, p - 2, p) for v in range(1, p)], dtype=np.int64) if p < 1 << 16 else None
    for col in range(m):
        # pivot: first row >= rank with a nonzero entry in this column
        r_idx = np.arange(n)[None, :]
        cand = (A[:, :, col] != 0) & (r_idx >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        piv = np.argmax(cand, axis=1)
        sel = rows[has]
        pr, rk = piv[has], rank[has]
        # swap pivot row into position rank
        top = A[sel, rk].copy()
        A[sel, rk] = A[sel, pr]
        A[sel, pr] = top
        pivval = A[sel, rk, col]
        if inv_table is not None:
            inv = inv_table[pivval]
        else:
            inv = np.array([pow(int(v), p - 2, p) for v in pivval], dtype=np.int64)
        A[sel, rk] = A[sel, rk] * inv[:, None] % p
        factors = A[sel, :, col].copy()
        factors[np.arange(len(sel)), rk] = 0
        A[sel] = (A[sel] - factors[:, :, None] * A[sel, rk][:, None, :]) % p
        rank[sel] += 1
    return rank


# ---------------------------------------------------------------------------
# points of X_c


def _dedupe(Z: np.ndarray, p: int) -> np.ndarray:
    if not len(Z):
        return np.zeros((0, 9), dtype=np.int64)
    return np.array(sorted({normalize_point(z, p) for z in Z.tolist()}), dtype=np.int64)


def sample_surface_points(c, p: int, sources=("orbit", "P_M", "P_B", "curve"), verify: bool = True,
                          degenerate_ok: bool = False, workers: int = 1) -> np.ndarray:
    """F_p-points of X_c from the sampling sources, normalized and sorted.

    orbit: Heisenberg translates of z_c; P_M, P_B: scans of the two iota
    eigenspaces; curve: scan of the universal P4."""
    from . import abelian33 as ab

    cv = ab.CVector(*c, field=GF(p))
    if not degenerate_ok and ab.discriminant(cv)[0] == 0:
        raise DegenerateParameters(f"Delta({tuple(c)}) = 0 mod {p}")
    found = []
    if "orbit" in sources:
        z = ab.identity_numeric(c, p)
        if any(z):
            found.append(ab.heisenberg_orbit(z, p))
    for kind in ("M", "B"):
        if f"P_{kind}" in sources:
            I = ab.torsion_restriction(c, kind, p)
            Y, _, _ = scan_projective(ScanJob(p=p, n=len(I.ctx) - 1, evaluators=list(I.gens), workers=workers))
            found.append(ab.torsion_embed(kind, Y, p))
    if "curve" in sources:
        B = ab.universal_p4_basis(c, p)
        I = ab.curve_restriction(c, p)
        Y, _, _ = scan_projective(ScanJob(p=p, n=len(B) - 1, evaluators=list(I.gens), workers=workers))
        found.append(Y @ B % p)
    Z = _dedupe(np.vstack(found) if found else np.zeros((0, 9), dtype=np.int64), p)
    if verify and len(Z):
        on, _ = ab.jacobian_ranks(c, Z, p)
        if not on.all():
            raise ArithmeticError("sampled point off X_c")
    return Z


# ---------------------------------------------------------------------------
# the 360-point sweep


def _sweep_range(p, start, stop, gam_ev, disc_ev, CSflat, chunk):  # disc_ev empty: keep every c
    """Stage 1 over c-indices [start, stop): returns (admissible count, survivors, evaluations)."""
    admissible = 0
    survivors = []
    evals = 0
    npts = CSflat.shape[1] // 9
    for s in range(start, stop, chunk):
        C = decode_points(s, min(stop, s + chunk), 3, p)
        cache: dict = {}
        ok = np.ones(len(C), dtype=bool)
        for f in disc_ev:
            ok &= f(C, cache) != 0
        C = C[ok]
        cache = {k: a[ok] for k, a in cache.items()}
        admissible += len(C)
        if not len(C):
            continue
        G = np.stack([f(C, cache) for f in gam_ev], axis=1)  # (N, 5)
        # generator j at point k is gamma . CS[:, j] at that point; exact in float64
        V = np.rint(G.astype(np.float64) @ CSflat).astype(np.int64) % p
        evals += V.size
        hit = ~V.reshape(len(C), npts, 9).any(axis=2)
        for ci, k in zip(*np.nonzero(hit)):
            survivors.append((tuple(int(x) for x in C[ci]), int(k)))
    return admissible, survivors, evals


def scan_points360_smooth(p: int = 61, workers: int = 1, budget: int = DEFAULT_BUDGET, chunk: int = 4096,
                          progress: Callable | None = None, include_degenerate: bool = False):
    """No (c, point) with Delta(c) != 0 has one of the 360 points on X_c.

    Stage 1 keeps pairs where all 9 Jacobian generators vanish, computed as
    gamma(c) against the CS columns at the point; stage 2 tests the 84 cubic
    Pfaffians on stage-1 survivors."""
    from . import abelian33 as ab
    from . import cobleshioda as cs
    from .report import VerificationReport

    rep = VerificationReport("scan.points360", prime=p)
    with rep.timed():
        if (p - 1) % 3:
            raise ValueError("the sweep needs a cube root of unity in F_p")
        w = root_of_unity(p, 3)
        pts = cs.points360()
        Z = np.array([q.numeric(w, p) for q in pts], dtype=np.int64)
        CSn = cs.cs_numeric(Z, p)  # (360, 5, 9)
        CSflat = CSn.transpose(1, 0, 2).reshape(5, -1).astype(np.float64)
        gam_ev = compile_polys(ab.gammas(ab.C4), p)
        disc_ev = [] if include_degenerate else compile_polys(ab.discriminant_factors(ab.C4), p)
        total = projective_size(3, p)
        need = total * len(pts) * 9
        rep.counts["planned_evaluations"] = need
        if need > budget:
            rep.inconclusive("budget exceeded", {"planned": need, "budget": budget})
            return rep
        w_ = max(1, workers)
        bounds = [total * i // w_ for i in range(w_ + 1)]
        ranges = list(zip(bounds[:-1], bounds[1:]))
        run = lambda r: _sweep_range(p, r[0], r[1], gam_ev, disc_ev, CSflat, chunk)
        if w_ == 1:
            parts = []
            for r in ranges:
                parts.append(run(r))
                if progress:
                    progress(r[1], total)
        else:
            with ThreadPoolExecutor(max_workers=w_) as ex:
                parts = list(ex.map(run, ranges))
        admissible = sum(q[0] for q in parts)
        stage1 = sorted(s for q in parts for s in q[1])
        evals = sum(q[2] for q in parts)
        # stage 2: the cubic Pfaffians at (c, point)
        stage2 = []
        if stage1:
            pf = compile_polys(ab.pfaffian_polys(), p)
            X = np.array([list(c) + Z[k].tolist() for c, k in stage1], dtype=np.int64)
            cache: dict = {}
            on = np.ones(len(X), dtype=bool)
            for f in pf:
                on &= f(X, cache) == 0
            stage2 = [{"c": list(stage1[i][0]), "point": Z[stage1[i][1]].tolist(), "type": pts[stage1[i][1]].kind}
                      for i in np.nonzero(on)[0]]
        rep.counts.update(parameters=total, admissible=admissible, points=len(pts), evaluations=evals,
                          stage1_survivors=len(stage1), stage2_survivors=len(stage2))
        rep.expect("stage-2 survivors are stage-1 survivors", len(stage2) <= len(stage1))
        if include_degenerate:
            rep.note("degenerate parameters included: survivors are expected and not failures")
        else:
            rep.expect("no admissible c has one of the 360 points on X_c", not stage2, stage2[:10])
        rep.counts["survivors"] = stage2[:100]  # full count above
    if rep.elapsed_ms:
        rep.counts["evaluations_per_second"] = int(evals / (rep.elapsed_ms / 1000))
    return rep


def probe_point360(c, k: int, p: int = 61) -> list[int]:
    """Stage-1 values (the 9 generators) at one c and the k-th of the 360 points."""
    from . import abelian33 as ab
    from . import cobleshioda as cs

    w = root_of_unity(p, 3)
    z = np.array([cs.points360()[k].numeric(w, p)], dtype=np.int64)
    M = cs.cs_numeric(z, p)[0]
    g = np.array([int(x) % p for x in ab.gamma_values(ab.CVector(*c, field=GF(p)))], dtype=np.int64)
    return (g @ M % p).tolist()
