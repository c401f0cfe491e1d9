"""The Coble-Shioda variety: the 5 x 9 matrix CS(z) and its minors.

CS(z) has rows (z_j^2) and four rows of products z_a z_b; gamma(c)^T CS(z)
is the vector of Jacobian generators.  The maximal minors (plus four extra
sextics) cut out the union of all the surfaces X_c; the 3 x 3 minors cut out
120 planes and the 2 x 2 minors 360 points.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exactmath import GF, QQ, Cyclotomic, root_of_unity
from .idealcalc import (
    MembershipCertificate,
    GradedIdeal,
    hilbert_values,
    member_in_degree,
    series_coefficients,
    slice_degree,
)
from .matalg import PolyMatrix, minors, rank_mod_p
from .polyring import MultiPoly, VarContext
from .report import VerificationReport

Z9 = VarContext.of("z1..z9")
ZN = tuple(f"z{i}" for i in range(1, 10))

CS_ROWS = (
    "z1^2 z2^2 z3^2 z4^2 z5^2 z6^2 z7^2 z8^2 z9^2",
    "z2*z3 z1*z3 z1*z2 z5*z6 z4*z6 z4*z5 z8*z9 z7*z9 z7*z8",
    "z4*z7 z5*z8 z6*z9 z1*z7 z2*z8 z3*z9 z1*z4 z2*z5 z3*z6",
    "z5*z9 z6*z7 z4*z8 z3*z8 z1*z9 z2*z7 z2*z6 z3*z4 z1*z5",
    "z6*z8 z4*z9 z5*z7 z2*z9 z3*z7 z1*z8 z3*z5 z1*z6 z2*z4",
)

SEXTIC_TEXT = (
    "z2*z6*z7*(z1^3-z3^3-z4^3+z5^3-z8^3+z9^3) + z3*z4*z8*(-z1^3+z2^3-z5^3+z6^3+z7^3-z9^3)"
    " + z1*z5*z9*(-z2^3+z3^3+z4^3-z6^3-z7^3+z8^3)",
    "z3*z5*z7*(z1^3-z2^3-z4^3+z6^3+z8^3-z9^3) + z1*z6*z8*(z2^3-z3^3+z4^3-z5^3-z7^3+z9^3)"
    " + z2*z4*z9*(-z1^3+z3^3+z5^3-z6^3+z7^3-z8^3)",
    "z1*z4*z7*(z2^3-z3^3+z5^3-z6^3+z8^3-z9^3) + z2*z5*z8*(-z1^3+z3^3-z4^3+z6^3-z7^3+z9^3)"
    " + z3*z6*z9*(z1^3-z2^3+z4^3-z5^3+z7^3-z8^3)",
    "z1*z2*z3*(z4^3+z5^3+z6^3-z7^3-z8^3-z9^3) + z4*z5*z6*(-z1^3-z2^3-z3^3+z7^3+z8^3+z9^3)"
    " + z7*z8*z9*(z1^3+z2^3+z3^3-z4^3-z5^3-z6^3)",
)

# Hilbert series numerator over (1-T)^6 of minors + sextics
CS_SERIES = (1, 3, 6, 10, 15, 21, 24, 24, 21, 15, -30, -60, 105, -75, 30, -5)

# the four parallel classes of the affine plane, used for the type-2 planes
PLANE_GROUPS = (
    ((1, 2, 3), (4, 5, 6), (7, 8, 9)),
    ((1, 4, 7), (2, 5, 8), (3, 6, 9)),
    ((1, 6, 8), (2, 4, 9), (3, 5, 7)),
    ((1, 5, 9), (2, 6, 7), (3, 4, 8)),
)


def _entry_pairs() -> list[list[tuple[int, int]]]:
    """CS entries as 0-based index pairs (a, b) meaning z_a z_b."""
    out = []
    for row in CS_ROWS:
        r = []
        for tok in row.split():
            if "^" in tok:
                a = int(tok[1:tok.index("^")]) - 1
                r.append((a, a))
            else:
                x, y = tok.split("*")
                r.append((int(x[1:]) - 1, int(y[1:]) - 1))
        out.append(r)
    return out


def cs_matrix(ctx=Z9, field=QQ) -> PolyMatrix:
    return PolyMatrix([[MultiPoly.parse(t, ctx, field) for t in row.split()] for row in CS_ROWS])


def cs_numeric(Z: np.ndarray, p: int) -> np.ndarray:
    """CS evaluated at rows of Z over F_p, shape (N, 5, 9)."""
    Z = np.asarray(Z, dtype=np.int64) % p
    pairs = _entry_pairs()
    out = np.zeros((len(Z), 5, 9), dtype=np.int64)
    for r in range(5):
        for j, (a, b) in enumerate(pairs[r]):
            out[:, r, j] = Z[:, a] * Z[:, b] % p
    return out


def gamma_cs_identity():
    """gamma(c)^T CS(z) against the Jacobian generators; returns (ok, mismatched indices)."""
    from . import abelian33 as ab

    CS = cs_matrix(ab.CZ9)
    g = ab.gammas()
    gens = ab.jacobian_gens()
    bad = []
    for j in range(9):
        s = MultiPoly.zero(ab.CZ9)
        for r in range(5):
            s = s + g[r] * CS[r, j]
        if s != gens[j]:
            bad.append(j + 1)
    return not bad, bad


@lru_cache(maxsize=None)
def maximal_minors() -> tuple:
    return tuple(m for _, _, m in minors(cs_matrix(), 5))


def extra_sextics(ctx=Z9) -> list[MultiPoly]:
    return [MultiPoly.parse(_expand(t), ctx) for t in SEXTIC_TEXT]


def _expand(text: str) -> str:
    from .abelian33 import _expand_parens

    return _expand_parens(text)


def cs_ideal() -> GradedIdeal:
    return GradedIdeal(list(maximal_minors()) + extra_sextics(), Z9)


def matrix_report() -> VerificationReport:
    rep = VerificationReport("cs.matrix")
    with rep.timed():
        CS = cs_matrix()
        col1 = [CS[r, 0].render() for r in range(5)]
        rep.counts["column1"] = col1
        rep.expect("column 1 is (z1^2, z2z3, z4z7, z5z9, z6z8)", col1 == ["z1^2", "z2*z3", "z4*z7", "z5*z9", "z6*z8"], col1)
        # column j only holds products z_a z_b with a + b = 2j in F_3^2
        bad = []
        for j, col in enumerate(zip(*_entry_pairs())):
            for a, b in col:
                if any((x + y - 2 * t) % 3 for x, y, t in zip(divmod(a, 3), divmod(b, 3), divmod(j, 3))):
                    bad.append((j + 1, a + 1, b + 1))
        rep.expect("column j is graded by 2j in F_3^2", not bad, bad)
        ok, resid = gamma_cs_identity()
        rep.expect("gamma^T CS(z) = Jacobian generators", ok, resid)
        mm = maximal_minors()
        rep.counts["maximal_minors"] = len(mm)
        degs = sorted({m.degree() for m in mm if not m.is_zero()})
        rep.counts["minor_degrees"] = degs
        rep.expect("126 maximal minors of degree 10", len(mm) == 126 and degs == [10], degs)
    return rep


# ---------------------------------------------------------------------------
# extra sextics


def sextic_report(primes=(61, 181)) -> VerificationReport:
    from .abelian33 import CZ9, at_identity

    rep = VerificationReport("cs.sextics", prime=primes[0])
    with rep.timed():
        S = extra_sextics()
        printed4 = ("z1*z2*z3*z4^3", "-z4*z5*z6*z1^3", "z7*z8*z9*z1^3")
        rep.expect("sextics are homogeneous of degree 6", all(s.is_homogeneous() and s.degree() == 6 for s in S))
        for t in printed4:
            e, c = next(iter(MultiPoly.parse(t, Z9).terms.items()))
            rep.expect(f"sextic 4 has the term {t}", S[3].coefficient(e) == c, t)
        # each sextic vanishes on the identity section, for symbolic c
        Sc = extra_sextics(CZ9)
        off = [k + 1 for k, s in enumerate(Sc) if not at_identity(s).is_zero()]
        rep.expect("sextics vanish at z_c for all c", not off, off)
        I = GradedIdeal(list(maximal_minors()), Z9)
        certs = {}
        for p in primes:
            got = []
            for k, s in enumerate(S, start=1):
                res = member_in_degree(s * s, I, p)
                ok = isinstance(res, MembershipCertificate)
                got.append(ok)
                rep.expect(f"sextic {k} squared lies in the minors ideal over F_{p}", ok, k)
            certs[p] = sum(got)
            not_in = member_in_degree(S[0], GradedIdeal(list(maximal_minors()), Z9), p)
            rep.expect(f"sextic 1 itself is not in the degree-6 part over F_{p}", not isinstance(not_in, MembershipCertificate))
        rep.counts["certificates"] = certs
    return rep


# ---------------------------------------------------------------------------
# Hilbert function


def expected_hilbert(upto: int = 11) -> list[int]:
    return series_coefficients(CS_SERIES, 6, upto)


def cs_hilbert(p: int = 61, upto: int = 11) -> dict[int, int]:
    return hilbert_values(cs_ideal(), range(upto + 1), p)


def hilbert_report(primes=(61, 181), upto: int = 11) -> VerificationReport:
    rep = VerificationReport("cs.hilbert", prime=primes[0])
    with rep.timed():
        want = expected_hilbert(upto)
        rep.counts["expected"] = want
        tables = {}
        for p in primes:
            got = cs_hilbert(p, upto)
            tables[p] = [got[d] for d in range(upto + 1)]
            bad = {d: (got[d], want[d]) for d in range(upto + 1) if got[d] != want[d]}
            rep.expect(f"Hilbert values match the series over F_{p}", not bad, bad)
        rep.counts["values"] = tables
        rep.expect("H(5) = 1287 and H(6) = 2999", want[5] == 1287 and want[6] == 2999, want[5:7])
    return rep


# ---------------------------------------------------------------------------
# planes and points


@dataclass(frozen=True)
class Plane:
    """z_b = w^(-i) z_a style plane: for each of three triples (a, b, c), z_b = w^eb z_a and z_c = w^ec z_a.

    kind 1: coordinate plane of an affine line (only the line's coordinates are free)."""

    kind: int
    support: tuple  # kind 1: the line; kind 2: the three triples
    exps: tuple = ()  # kind 2: ((eb, ec) per triple), exponents of w mod 3
    index: tuple = ()  # kind 2: (group, i1, i2, i3, j1, j2, j3)

    def parametrize(self):
        """Map param k -> list of (coordinate, w exponent)."""
        if self.kind == 1:
            return [[(a - 1, 0)] for a in self.support]
        return [[(t[0] - 1, 0), (t[1] - 1, e[0]), (t[2] - 1, e[1])] for t, e in zip(self.support, self.exps)]

    def equations(self) -> list[dict]:
        """Linear equations as {coordinate: w exponent of its coefficient} with signs +/-."""
        if self.kind == 1:
            return [{(l - 1): (0, 1)} for l in range(1, 10) if l not in self.support]
        eqs = []
        for t, e in zip(self.support, self.exps):
            a = t[0] - 1
            for k in (1, 2):
                eqs.append({t[k] - 1: (0, 1), a: (e[k - 1], -1)})
        return eqs


def _plane_ok_indices(i1, i2, i3, j1, j2, j3) -> bool:
    return (i1 + i2 + i3) % 3 == 0 and (j1 + j2 + j3) % 3 == 0 and (i1 - i2 + j1 - j2) % 3 == 0


def type2_plane(group: int, i: tuple, j: tuple) -> Plane:
    # z_a = w^i z_b = w^j z_c  means  z_b = w^(-i) z_a, z_c = w^(-j) z_a
    exps = tuple(((-a) % 3, (-b) % 3) for a, b in zip(i, j))
    return Plane(2, PLANE_GROUPS[group], exps, (group,) + tuple(i) + tuple(j))


def planes120() -> list[Plane]:
    from .abelian33 import H_LINES

    out = [Plane(1, line) for direction in H_LINES for line in direction]
    for g in range(4):
        for i1, i2, i3, j1, j2, j3 in itertools.product(range(3), repeat=6):
            if _plane_ok_indices(i1, i2, i3, j1, j2, j3):
                out.append(type2_plane(g, (i1, i2, i3), (j1, j2, j3)))
    return out


def _entries_on_plane(pl: Plane):
    """CS restricted to the plane: each entry is None or (monomial in s,t,u, w exponent)."""
    where = {}
    for k, coords in enumerate(pl.parametrize()):
        for idx, e in coords:
            where[idx] = (k, e)
    out = []
    for row in _entry_pairs():
        r = []
        for a, b in row:
            if a in where and b in where:
                mono = [0, 0, 0]
                mono[where[a][0]] += 1
                mono[where[b][0]] += 1
                r.append((tuple(mono), (where[a][1] + where[b][1]) % 3))
            else:
                r.append(None)
        out.append(r)
    return out


def _minor_vanishes(entries, rs, cs, F) -> bool:
    """Exact test over Q(w) that a minor of a monomial-entry matrix is zero."""
    acc: dict = {}
    for perm in itertools.permutations(range(len(cs))):
        sign = _perm_parity(perm)
        mono = [0, 0, 0]
        e = 0
        dead = False
        for r, k in zip(rs, perm):
            x = entries[r][cs[k]]
            if x is None:
                dead = True
                break
            mono = [u + v for u, v in zip(mono, x[0])]
            e += x[1]
        if dead:
            continue
        counts = acc.setdefault(tuple(mono), [0, 0, 0])
        counts[e % 3] += sign
    return all(F.from_power_counts(c).is_zero() for c in acc.values())


def _perm_parity(perm) -> int:
    s = 1
    perm = list(perm)
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            s = -s
    return s


def plane_kills_minors(pl: Plane, k: int = 3, F=None) -> bool:
    F = F or Cyclotomic(3)
    ent = _entries_on_plane(pl)
    for rs in itertools.combinations(range(5), k):
        for cs in itertools.combinations(range(9), k):
            if not _minor_vanishes(ent, rs, cs, F):
                return False
    return True


def _plane_point(pl: Plane, params, w: int, p: int) -> list[int]:
    z = [0] * 9
    for k, coords in enumerate(pl.parametrize()):
        for idx, e in coords:
            z[idx] = params[k] * pow(w, e, p) % p
    return z


def planes_report(p: int = 61, seed: int = 0) -> VerificationReport:
    rep = VerificationReport("cs.planes", prime=p, seed=seed)
    with rep.timed():
        F = Cyclotomic(3)
        planes = planes120()
        kinds = [sum(1 for q in planes if q.kind == t) for t in (1, 2)]
        rep.counts["planes"] = {"type1": kinds[0], "type2": kinds[1]}
        rep.expect("120 planes: 12 + 108", kinds == [12, 108], kinds)
        per_group = [sum(1 for q in planes if q.kind == 2 and q.index[0] == g) for g in range(4)]
        rep.expect("27 type-2 planes per point of P^1(F_3)", per_group == [27] * 4, per_group)
        # the printed index conditions are exactly the planes killing the 3x3 minors
        mismatch = []
        for g in range(4):
            for idx in itertools.product(range(3), repeat=6):
                pl = type2_plane(g, idx[:3], idx[3:])
                if plane_kills_minors(pl, 3, F) != _plane_ok_indices(*idx):
                    mismatch.append((g,) + idx)
        rep.expect("index conditions characterize the type-2 planes", not mismatch, mismatch[:10])
        bad = [q.support for q in planes[:12] if not plane_kills_minors(q, 3, F)]
        rep.expect("3x3 minors vanish on the type-1 planes", not bad, bad)
        rng = random.Random(seed)
        w = root_of_unity(p, 3)
        ranks = []
        for q in planes:
            z = _plane_point(q, [rng.randrange(1, p) for _ in range(3)], w, p)
            ranks.append(rank_mod_p(cs_numeric(np.array([z]), p)[0], p))
        rep.counts["generic_ranks"] = sorted(set(ranks))
        rep.expect("generic CS-rank on every plane is 2", set(ranks) == {2}, sorted(set(ranks)))
    return rep


@dataclass(frozen=True)
class Point:
    """Point with coordinates 0 or w^e: exps[i] is None for a zero coordinate."""

    kind: int
    exps: tuple

    def numeric(self, w: int, p: int) -> list[int]:
        return [0 if e is None else pow(w, e, p) for e in self.exps]

    def exact(self, F) -> list:
        return [F.zero if e is None else F.root_power(e) for e in self.exps]


def type3_exponents() -> list[tuple]:
    out = []
    for rest in itertools.product(range(3), repeat=8):
        e = (0,) + rest
        a = e[0] + e[1] + e[2]
        if (a - e[3] - e[4] - e[5]) % 3 or (a - e[6] - e[7] - e[8]) % 3:
            continue
        if (e[0] + e[3] + e[6] - e[1] - e[4] - e[7]) % 3:
            continue
        out.append(e)
    return out


def points360() -> list[Point]:
    from .abelian33 import H_LINES

    out = []
    for i in range(9):
        out.append(Point(1, tuple(0 if k == i else None for k in range(9))))
    for direction in H_LINES:
        for line in direction:
            for zj, zk in itertools.product(range(3), repeat=2):
                e = [None] * 9
                e[line[0] - 1], e[line[1] - 1], e[line[2] - 1] = 0, zj, zk
                out.append(Point(2, tuple(e)))
    out += [Point(3, e) for e in type3_exponents()]
    return out


def _cs_exact(pt: Point, F):
    z = pt.exact(F)
    return [[F.mul(z[a], z[b]) for a, b in row] for row in _entry_pairs()]


def _two_minors_vanish(M, F) -> bool:
    for r1, r2 in itertools.combinations(range(5), 2):
        for c1, c2 in itertools.combinations(range(9), 2):
            if not F.is_zero(F.sub(F.mul(M[r1][c1], M[r2][c2]), F.mul(M[r1][c2], M[r2][c1]))):
                return False
    return True


def _collinear_rows_all_nonzero(e) -> bool:
    """The all-nonzero point w^e has CS of rank 1 (direct check of the 8 collinearity conditions)."""
    F = Cyclotomic(3)
    return _two_minors_vanish(_cs_exact(Point(3, tuple(e)), F), F)


def points_report() -> VerificationReport:
    rep = VerificationReport("cs.points")
    with rep.timed():
        F = Cyclotomic(3)
        pts = points360()
        kinds = [sum(1 for q in pts if q.kind == t) for t in (1, 2, 3)]
        rep.counts["points"] = {"type1": kinds[0], "type2": kinds[1], "type3": kinds[2]}
        rep.expect("360 points: 9 + 108 + 243", kinds == [9, 108, 243], kinds)
        rep.expect("pairwise distinct", len({q.exps for q in pts}) == 360)
        bad = [q.exps for q in pts if not _two_minors_vanish(_cs_exact(q, F), F)]
        rep.expect("all 2x2 minors vanish at every point", not bad, bad[:5])
        # the three congruences are exactly the rank-1 condition on all-nonzero points
        direct = [(0,) + r for r in itertools.product(range(3), repeat=8) if _collinear_rows_all_nonzero((0,) + r)]
        rep.counts["type3_direct"] = len(direct)
        rep.expect("3 congruences <=> rank 1 for all-nonzero points", sorted(direct) == sorted(type3_exponents()),
                   len(direct))
    return rep


def _on_plane(pt: Point, pl: Plane) -> bool:
    for eq in pl.equations():
        vals = []
        for idx, (e, sign) in eq.items():
            if pt.exps[idx] is not None:
                vals.append(((pt.exps[idx] + e) % 3, sign))
        # sum of sign * w^exp must vanish; with at most two terms that means cancellation or emptiness
        if not vals:
            continue
        if len(vals) == 1 or vals[0][0] != vals[1][0] or vals[0][1] == vals[1][1]:
            return False
    return True


def incidence() -> np.ndarray:
    planes, pts = planes120(), points360()
    return np.array([[_on_plane(q, pl) for q in pts] for pl in planes], dtype=bool)


def incidence_report() -> VerificationReport:
    rep = VerificationReport("cs.incidence")
    with rep.timed():
        planes, pts = planes120(), points360()
        A = incidence()
        per_plane = sorted(set(A.sum(axis=1).tolist()))
        per_point = sorted(set(A.sum(axis=0).tolist()))
        rep.counts.update(per_plane=per_plane, per_point=per_point, total=int(A.sum()))
        rep.expect("12 points on each plane", per_plane == [12], per_plane)
        rep.expect("4 planes through each point", per_point == [4], per_point)
        rep.expect("1440 incidences", int(A.sum()) == 1440)
        pk = np.array([q.kind for q in planes])
        breakdown = {}
        for t in (1, 2, 3):
            cols = [k for k, q in enumerate(pts) if q.kind == t]
            sig = {(int(A[pk == 1, k].sum()), int(A[pk == 2, k].sum())) for k in cols}
            breakdown[t] = sorted(sig)
        rep.counts["type_breakdown"] = breakdown
        want = {1: [(4, 0)], 2: [(1, 3)], 3: [(0, 4)]}
        rep.expect("type breakdown (type1, type2 planes) per point type", breakdown == want, breakdown)
        # cross-check incidences numerically over F_61
        w = root_of_unity(61, 3)
        ok = True
        for i, pl in enumerate(planes[:20]):
            for k, q in enumerate(pts):
                z = q.numeric(w, 61)
                num = all(sum(sign * pow(w, e, 61) * z[idx] for idx, (e, sign) in eq.items()) % 61 == 0
                          for eq in pl.equations())
                ok &= num == bool(A[i, k])
        rep.expect("incidence agrees with evaluation over F_61", ok)
    return rep


def _dense_product(a: np.ndarray, da: int, b: np.ndarray, db: int, n: int, p: int) -> np.ndarray:
    """Rows of coefficient vectors (degree da, db) multiplied pairwise, over F_p."""
    from .polyring import monomials_of_degree

    ma, mb, mc = (monomials_of_degree(n, d) for d in (da, db, da + db))
    index = {m: k for k, m in enumerate(mc)}
    tgt = np.array([[index[tuple(x + y for x, y in zip(u, v))] for v in mb] for u in ma], dtype=np.int64).ravel()
    N = a.shape[0]
    outer = ((a[:, :, None] * b[:, None, :]) % p).reshape(N, -1)
    flat = (np.arange(N)[:, None] * len(mc) + tgt[None, :]).ravel()
    out = np.bincount(flat, weights=outer.ravel().astype(np.float64), minlength=N * len(mc))
    return np.rint(out).astype(np.int64).reshape(N, len(mc)) % p


def sliced_three_minors(L: np.ndarray, p: int) -> list[MultiPoly]:
    """3 x 3 minors of CS restricted to z = L u (L: 9 x n over F_p), as polynomials in u."""
    from .polyring import monomials_of_degree

    n = L.shape[1]
    q_monos = monomials_of_degree(n, 2)
    qidx = {m: k for k, m in enumerate(q_monos)}
    # z_a z_b as a quadric in u
    quad = np.zeros((9, 9, len(q_monos)), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            e = [0] * n
            e[i] += 1
            e[j] += 1
            quad[:, :, qidx[tuple(e)]] += np.outer(L[:, i], L[:, j])
    quad %= p
    E = np.array([[quad[a, b] for a, b in row] for row in _entry_pairs()])  # (5, 9, #quadrics)
    ta, tb, tc, signs = [], [], [], []
    nkeys = 0
    for rs in itertools.combinations(range(5), 3):
        for cs in itertools.combinations(range(9), 3):
            nkeys += 1
            for perm in itertools.permutations(range(3)):
                ta.append(E[rs[0], cs[perm[0]]])
                tb.append(E[rs[1], cs[perm[1]]])
                tc.append(E[rs[2], cs[perm[2]]])
                signs.append(_perm_parity(perm))
    ab_ = _dense_product(np.array(ta), 2, np.array(tb), 2, n, p)
    abc = _dense_product(ab_, 4, np.array(tc), 2, n, p)
    abc = abc * np.array(signs)[:, None] % p
    dets = abc.reshape(nkeys, 6, -1).sum(axis=1) % p
    Fp = GF(p)
    ctx = VarContext(tuple(f"u{j}" for j in range(1, n + 1)))
    six = monomials_of_degree(n, 6)
    out = []
    for row in dets:
        nz = np.nonzero(row)[0]
        if len(nz):
            out.append(MultiPoly(ctx, Fp, {six[k]: int(row[k]) for k in nz}))
    return out


def degree120(p: int = 61, seed: int = 0, d_hi: int = 9, repeats: int = 3) -> VerificationReport:
    """Slice degree of the 3x3-minors ideal; inconclusive when it does not stabilize."""
    from .idealcalc import hilbert_values_incremental, stabilized_value

    rep = VerificationReport("cs.degree120", prime=p, seed=seed)
    with rep.timed():
        rng = random.Random(seed)
        vals = []
        for _ in range(repeats):
            while True:
                L = np.array([[rng.randrange(p) for _ in range(7)] for _ in range(9)], dtype=np.int64)
                if rank_mod_p(L.copy(), p) == 7:
                    break
            gens = sliced_three_minors(L, p)
            vals.append(hilbert_values_incremental(GradedIdeal(gens, gens[0].ctx), range(6, d_hi + 1), p))
        finals = [stabilized_value(v) for v in vals]
        rep.counts["slice_values"] = vals
        if any(f is None for f in finals) or len(set(finals)) != 1:
            rep.inconclusive("3x3-minors slice did not stabilize within the degree bound", vals)
        else:
            rep.counts["degree"] = finals[0]
            rep.expect("3x3 minors define a surface of degree 120", finals[0] == 120, finals[0])
    return rep


# ---------------------------------------------------------------------------
# the Maschke section and the Burkhardt reduction


def maschke_sections(p: int = 61, seed: int = 0) -> VerificationReport:
    from . import abelian33 as ab
    from .groups import heisenberg33
    from .oracle import normalize_point

    rep = VerificationReport("cs.maschke", prime=p, seed=seed)
    with rep.timed():
        YM = ab.YM
        a = ab.torsion_assignment("M", YM, QQ)
        zero_minors = sum(1 for m in maximal_minors() if m.substitute(a, YM).is_zero())
        rep.counts["minors_zero_on_P_M"] = zero_minors
        rep.expect("126 maximal minors vanish on P_M", zero_minors == 126, zero_minors)
        sec = ab.identity_point()
        in_pm = sec[0].is_zero() and all(sec[i - 1] == -sec[j - 1] for i, j in ab.IOTA_PAIRS)
        rep.expect("the section lands in P_M", in_pm)
        jac = [ab.at_identity(f) for f in ab.jacobian_gens()]
        rep.expect("the section satisfies its Jacobian generators", all(f.is_zero() for f in jac))
        # translates, symbolically in c over F_p
        Fp = GF(p)
        C4 = ab.C4
        secp = [f.reduce_mod(p) for f in sec]
        gens = [f.reduce_mod(p) for f in ab.jacobian_gens()]
        w = root_of_unity(p, 3)
        rng = random.Random(seed)
        cnum = ab.random_admissible_c(p, rng)
        seen = set()
        bad = 0
        for g in heisenberg33().elements():
            img = [secp[g.perm[i]].scale(pow(w, g.phase[i], p)) for i in range(9)]
            assign = {n: MultiPoly.var(C4, n, Fp) for n in ab.CN}
            assign.update({ZN[i]: img[i] for i in range(9)})
            if any(not f.substitute(assign, C4).is_zero() for f in gens):
                bad += 1
            seen.add(normalize_point([int(x.evaluate(cnum).value) for x in img], p))
        rep.counts["distinct_sections"] = len(seen)
        rep.expect("all Heisenberg translates satisfy the Jacobian generators", bad == 0, bad)
        rep.expect("81 distinct sections", len(seen) == 81, len(seen))
    return rep


def affine_group() -> list[tuple]:
    """AGL_2(F_3) acting on the nine points (0-based index 3i + j)."""
    out = []
    for a, b, c, d in itertools.product(range(3), repeat=4):
        if (a * d - b * c) % 3 == 0:
            continue
        for s, t in itertools.product(range(3), repeat=2):
            perm = []
            for k in range(9):
                i, j = divmod(k, 3)
                perm.append(3 * ((a * i + b * j + s) % 3) + (c * i + d * j + t) % 3)
            out.append(tuple(perm))
    return out


def four_subset_orbits() -> list[set]:
    G = affine_group()
    todo = {frozenset(s) for s in itertools.combinations(range(9), 4)}
    orbits = []
    while todo:
        s = next(iter(todo))
        orb = {frozenset(g[i] for i in s) for g in G}
        orbits.append(orb)
        todo -= orb
    return orbits


def _has_line(s) -> bool:
    from .abelian33 import H_LINES

    lines = [frozenset(i - 1 for i in ln) for d in H_LINES for ln in d]
    return any(ln <= s for ln in lines)


def row_dependence(cols, ctx=Z9, field=QQ) -> list[MultiPoly]:
    """v with v^T CS[:, cols] = 0: signed 4x4 minors of the 5 x 4 submatrix."""
    CS = cs_matrix(ctx, field)
    sub = PolyMatrix([[CS[r, c] for c in cols] for r in range(5)])
    full = dict(((rs, m) for rs, _, m in minors(sub, 4)))
    v = []
    for r in range(5):
        rs = tuple(k for k in range(5) if k != r)
        v.append(full[rs].scale(field.from_int((-1) ** r)))
    return v


def burkhardt_subsets(p: int = 61, seed: int = 0, parameters: int = 6) -> VerificationReport:
    """The row dependences for the two 4-subset classes satisfy the Burkhardt quartic on CS.

    Membership of B(v) (degree 32) in the minors ideal is out of reach by linear
    algebra; the check is vanishing on points of X_c for random c together with
    v being proportional to gamma(c) there."""
    from . import abelian33 as ab
    from .oracle import CompiledPoly

    rep = VerificationReport("cs.burkhardt_subsets", prime=p, seed=seed)
    with rep.timed():
        G = affine_group()
        rep.counts["affine_group_order"] = len(G)
        rep.expect("AGL_2(F_3) has order 432", len(G) == 432, len(G))
        orbs = four_subset_orbits()
        rep.counts["orbit_sizes"] = sorted(len(o) for o in orbs)
        reps = (frozenset({0, 1, 2, 3}), frozenset({0, 1, 3, 4}))
        classes_ok = len(orbs) == 2 and all(any(r in o for o in orbs) for r in reps)
        classes_ok &= all(all(_has_line(s) == _has_line(next(iter(o))) for s in o) for o in orbs)
        rep.expect("two orbits on 4-subsets, split by containing a line", classes_ok, rep.counts["orbit_sizes"])
        rng = random.Random(seed)
        samples = 0
        for cols in ((0, 1, 2, 3), (0, 1, 3, 4)):
            v = row_dependence(cols)
            CS = cs_matrix()
            dep_ok = all(sum((v[r] * CS[r, c] for r in range(5)), MultiPoly.zero(Z9)).is_zero() for c in cols)
            rep.expect(f"v{tuple(c + 1 for c in cols)} is a row dependence", dep_ok)
            ev = [CompiledPoly(f, p) for f in v]
            bad = []
            for _ in range(parameters):
                c = ab.random_admissible_c(p, rng)
                gam = [int(x) % p for x in ab.gamma_values(ab.CVector(*c, field=GF(p)))]
                Z = ab.heisenberg_orbit(ab.identity_numeric(c, p), p)
                V = np.array([f(Z) for f in ev]).T % p
                for x, vx in zip(Z, V):
                    b = _burkhardt_num(vx, p)
                    prop = rank_mod_p(np.array([vx, gam]), p) <= 1
                    if b or not prop:
                        bad.append({"c": c, "z": x.tolist()})
                    samples += int(vx.any())
            rep.expect(f"B(v) = 0 and v ~ gamma on X_c for columns {tuple(c + 1 for c in cols)}", not bad, bad[:3])
        rep.counts["nonzero_samples"] = samples
    return rep


def _burkhardt_num(g, p: int) -> int:
    g1, g2, g3, g4, g5 = (int(x) for x in g)
    return (g1 * (g1 ** 3 + g2 ** 3 + g3 ** 3 + g4 ** 3 + g5 ** 3) + 3 * g2 * g3 * g4 * g5) % p
