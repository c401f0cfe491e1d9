"""Elliptic normal quintics in P^4 and the Shioda modular surface S(5)_15.

Coordinates z1..z5, parameters c1, c2.  Indices are 1-based in the names and
read cyclically mod 5.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .exactmath import GF, QQ, Cyclotomic, Scalar, root_of_unity
from .idealcalc import GradedIdeal, hilbert_values, member_in_degree, same_span, series_coefficients, slice_degree
from .matalg import PolyMatrix, SkewPolyMatrix, minors, pfaffian, sub_pfaffians
from .polyring import MultiPoly, VarContext
from .report import VerificationReport

CZ = VarContext.of("c1..c2", "z1..z5")
Z = VarContext.of("z1..z5")
ST = VarContext.of("s t")
C2 = VarContext.of("c1..c2")

# (a, b | c, d) for the quadric c1c2 z_i^2 - c1^2 z_a z_b + c2^2 z_c z_d
QUADRIC_PAIRS = ((2, 5, 3, 4), (1, 3, 4, 5), (2, 4, 1, 5), (3, 5, 1, 2), (1, 4, 2, 3))

S5_NUMERATOR = (1, 2, 3, 4, 5, 6, -3, -2, -1)


class MissingRoot(ValueError):
    pass


@dataclass(frozen=True)
class QuinticParams:
    c1: object
    c2: object
    field: object = QQ

    def __post_init__(self):
        F = self.field
        if F.is_zero(F.coerce(self.c1)) and F.is_zero(F.coerce(self.c2)):
            raise ValueError("(c1, c2) = (0, 0) does not define a curve")


def _zi(i: int) -> str:
    return f"z{(i - 1) % 5 + 1}"


def psi_matrix(c: QuinticParams | None = None) -> SkewPolyMatrix:
    """Psi_c(z); symbolic in c1, c2 when c is None."""
    F = QQ
    v = {n: MultiPoly.var(CZ, n, F) for n in CZ.names}
    c1, c2 = v["c1"], v["c2"]
    z = lambda i: v[f"z{i}"]
    upper = {
        (0, 1): c1 * z(4), (0, 2): c2 * z(2), (0, 3): -c2 * z(5), (0, 4): -c1 * z(3),
        (1, 2): c1 * z(5), (1, 3): c2 * z(3), (1, 4): -c2 * z(1),
        (2, 3): c1 * z(1), (2, 4): c2 * z(4),
        (3, 4): c1 * z(2),
    }
    M = SkewPolyMatrix.from_upper(upper, 5, MultiPoly.zero(CZ, F))
    return M if c is None else specialize_matrix(M, c)


def specialize_matrix(M, c: QuinticParams):
    F = c.field
    vals = {"c1": F.coerce(c.c1), "c2": F.coerce(c.c2)}
    conv = lambda f: f.map_coefficients(F.coerce, F) if f.field != F else f
    return type(M)([[conv(f).specialize(vals, Z) for f in row] for row in M.entries])


def pfaffian_quadrics(c: QuinticParams | None = None) -> list[MultiPoly]:
    """The five quadrics c1c2 z_i^2 - c1^2 z_a z_b + c2^2 z_c z_d."""
    v = {n: MultiPoly.var(CZ, n, QQ) for n in CZ.names}
    c1, c2 = v["c1"], v["c2"]
    out = []
    for i, (a, b, cc, d) in enumerate(QUADRIC_PAIRS, start=1):
        out.append(c1 * c2 * v[f"z{i}"] ** 2 - c1 ** 2 * v[f"z{a}"] * v[f"z{b}"] + c2 ** 2 * v[f"z{cc}"] * v[f"z{d}"])
    if c is None:
        return out
    F = c.field
    vals = {"c1": F.coerce(c.c1), "c2": F.coerce(c.c2)}
    return [f.map_coefficients(F.coerce, F).specialize(vals, Z) if F != QQ else f.specialize(vals, Z) for f in out]


def psi_pfaffians(M) -> list[MultiPoly]:
    """4x4 Pfaffians, the i-th deleting row/column i."""
    memo: dict = {}
    n = M.shape[0]
    return [pfaffian(M, [k for k in range(n) if k != i], memo) for i in range(n)]


def pfaffian_signs(c: QuinticParams | None = None):
    """Signs s_i with Pf(delete i) = s_i * quadric_i, or None where no sign works."""
    pf = psi_pfaffians(psi_matrix(c))
    qs = pfaffian_quadrics(c)
    out = []
    for a, b in zip(pf, qs):
        out.append(1 if a == b else (-1 if a == -b else None))
    return out


def sigma_shift(f: MultiPoly) -> MultiPoly:
    """z_i -> z_{i+1}."""
    assign = {f"z{i}": MultiPoly.var(f.ctx, _zi(i + 1), f.field) for i in range(1, 6)}
    return f.substitute(assign, f.ctx)


# ---------------------------------------------------------------------------
# BHM matrix


def bhm_matrix(field=QQ) -> PolyMatrix:
    z = {i: MultiPoly.var(Z, f"z{i}", field) for i in range(1, 6)}
    rows = [
        [z[1] ** 2, z[2] ** 2, z[3] ** 2, z[4] ** 2, z[5] ** 2],
        [z[2] * z[5], z[1] * z[3], z[2] * z[4], z[3] * z[5], z[1] * z[4]],
        [z[3] * z[4], z[4] * z[5], z[1] * z[5], z[1] * z[2], z[2] * z[3]],
    ]
    return PolyMatrix(rows)


def bhm_minors_ideal(k: int = 3) -> GradedIdeal:
    return GradedIdeal([m for _, _, m in minors(bhm_matrix(), k)], Z)


def row_dependence(i: int, j: int) -> list[MultiPoly]:
    """v(i, j) = col_j x col_i (1-based columns), a kernel vector of the rows."""
    M = bhm_matrix()
    a, b = M.col(j - 1), M.col(i - 1)
    return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]


def printed_v12() -> list[MultiPoly]:
    return [MultiPoly.parse(s, Z) for s in (
        "z1*z3^2*z4-z2*z4*z5^2", "z1^2*z4*z5-z2^2*z3*z4", "z2^3*z5-z1^3*z3")]


def bhm_checks(p: int = 61, extra_primes=(181,)) -> VerificationReport:
    rep = VerificationReport("quintic.bhm", prime=p)
    with rep.timed():
        M = bhm_matrix()
        # lift to the (c, z) context
        lift = lambda f: f.change_context(CZ)
        c1 = MultiPoly.var(CZ, "c1")
        c2 = MultiPoly.var(CZ, "c2")
        qs = pfaffian_quadrics()
        bad = []
        for j in range(5):
            comb = c1 * c2 * lift(M[0, j]) - c1 ** 2 * lift(M[1, j]) + c2 ** 2 * lift(M[2, j])
            if comb != qs[j]:
                bad.append(j + 1)
        rep.expect("row combination equals quadric vector", not bad, bad)
        rep.expect("v(1,2) matches", row_dependence(1, 2) == printed_v12(), [f.render() for f in row_dependence(1, 2)])
        I = bhm_minors_ideal()
        certs = 0
        primes = [p] + [q for q in extra_primes if q != p]
        rep.counts["primes"] = primes
        for q in primes:
            for i, j in combinations(range(1, 6), 2):
                v = row_dependence(i, j)
                if q == p:
                    rep.expect(f"v({i},{j}) annihilates columns {i},{j}", kernel_check(i, j))
                target = v[0] ** 2 + v[1] * v[2]
                cert = member_in_degree(target, I, q)
                if rep.expect(f"v({i},{j}) relation in minors ideal mod {q}", bool(cert), (i, j, q)):
                    certs += 1
        rep.counts["certificates"] = certs
    return rep


def kernel_check(i: int, j: int) -> bool:
    """v(i, j) is orthogonal to columns i and j (the defining property)."""
    M = bhm_matrix()
    v = row_dependence(i, j)
    for col in (i, j):
        s = sum((M[k, col - 1] * v[k] for k in range(3)), MultiPoly.zero(Z))
        if s:
            return False
    return True


# ---------------------------------------------------------------------------
# special loci


def heisenberg_lines():
    """The 25 lines z_i = z_{i+2} + zeta^j z_{i+3} = zeta^{2j} z_{i+1} + z_{i+4} = 0,
    as parametrizations {name: linear form in s, t} over Q(zeta_5)."""
    F = Cyclotomic(5)
    s = MultiPoly.var(ST, "s", F)
    t = MultiPoly.var(ST, "t", F)
    lines = []
    for i in range(1, 6):
        for j in range(5):
            img = {
                _zi(i): MultiPoly.zero(ST, F),
                _zi(i + 3): s,
                _zi(i + 2): s.scale(-F.root_power(j)),
                _zi(i + 1): t,
                _zi(i + 4): t.scale(-F.root_power(2 * j)),
            }
            lines.append(((i, j), img))
    return lines


def section_point():
    """[c1:c2] -> [0 : c2 : -zeta^4 c1 : zeta^3 c1 : -zeta^2 c2] over Q(zeta_5)."""
    F = Cyclotomic(5)
    c1 = MultiPoly.var(C2, "c1", F)
    c2 = MultiPoly.var(C2, "c2", F)
    return [MultiPoly.zero(C2, F), c2, c1.scale(-F.root_power(4)), c1.scale(F.root_power(3)), c2.scale(-F.root_power(2))]


def nilpotent_matrix() -> SkewPolyMatrix:
    z = {i: MultiPoly.var(Z, f"z{i}") for i in range(1, 6)}
    upper = {
        (0, 1): z[1], (0, 2): z[4], (0, 4): z[5],
        (1, 3): z[5], (1, 4): z[2],
        (2, 3): z[2], (2, 4): z[3],
        (3, 4): z[4],
    }
    return SkewPolyMatrix.from_upper(upper, 5, MultiPoly.zero(Z))


def nilpotent_ideal_printed() -> list[MultiPoly]:
    return [MultiPoly.parse(s, Z) for s in (
        "z1*z2-z4*z5", "z1*z3-z2*z4", "z1*z4+z5^2", "z4^2+z2*z5", "z2^2-z3*z5")]


def cusp_parametrization():
    """[i t^5 : s^3 t^2 : s^5 : i s^2 t^3 : s t^4] over Q(i)."""
    F = Cyclotomic(4)
    i = F.gen()
    s = MultiPoly.var(ST, "s", F)
    t = MultiPoly.var(ST, "t", F)
    return [t ** 5 * i, s ** 3 * t ** 2, s ** 5, s ** 2 * t ** 3 * i, s * t ** 4]


def _sub(f: MultiPoly, images, F):
    g = f.map_coefficients(F.coerce, F) if f.field != F else f
    tgt = images[0].ctx
    return g.substitute({f"z{k + 1}": images[k] for k in range(5)}, tgt)


def special_loci(p: int = 11) -> VerificationReport:
    rep = VerificationReport("quintic.special", prime=p)
    with rep.timed():
        rep_lines = check_lines25()
        rep_sec = check_section()
        rep_cusp = check_cusp()
        rep_pts = check_points30(p)
        for sub in (rep_lines, rep_sec, rep_cusp, rep_pts):
            rep.expect(sub.check, sub.passed, sub.witnesses)
            rep.counts[sub.check] = sub.counts
    return rep


def check_lines25() -> VerificationReport:
    rep = VerificationReport("quintic.lines25")
    with rep.timed():
        F = Cyclotomic(5)
        mins = [m for _, _, m in minors(bhm_matrix(), 3)]
        zeros = 0
        lines = heisenberg_lines()
        for key, img in lines:
            for m in mins:
                v = _sub(m, [img[f"z{k}"] for k in range(1, 6)], F)
                if rep.expect(f"line {key}", v.is_zero(), v):
                    zeros += 1
        rep.counts.update(lines=len(lines), zero_polynomials=zeros)
    return rep


def check_section() -> VerificationReport:
    rep = VerificationReport("quintic.section")
    with rep.timed():
        F = Cyclotomic(5)
        pt = section_point()
        c1 = MultiPoly.var(C2, "c1", F)
        c2 = MultiPoly.var(C2, "c2", F)
        n = 0
        for q in pfaffian_quadrics():
            g = q.map_coefficients(F.coerce, F)
            assign = {"c1": c1, "c2": c2}
            assign.update({f"z{k + 1}": pt[k] for k in range(5)})
            v = g.substitute(assign, C2)
            if rep.expect("section on quadric", v.is_zero(), v):
                n += 1
        rep.counts["zero_polynomials"] = n
    return rep


def check_cusp() -> VerificationReport:
    rep = VerificationReport("quintic.cusp")
    with rep.timed():
        F = Cyclotomic(4)
        pf = psi_pfaffians(nilpotent_matrix())
        rep.expect("Pfaffians span the printed ideal", same_span(pf, nilpotent_ideal_printed()))
        par = cusp_parametrization()
        n = 0
        for f in nilpotent_ideal_printed():
            v = _sub(f, par, F)
            if rep.expect("parametrization on ideal", v.is_zero(), v):
                n += 1
        rep.counts["zero_polynomials"] = n
    return rep


def check_points30(p: int = 11) -> VerificationReport:
    from .oracle import ScanJob, scan_projective

    rep = VerificationReport("quintic.points30", prime=p)
    with rep.timed():
        if (p - 1) % 5:
            raise MissingRoot(f"F_{p} has no primitive 5th root of unity")
        mins = [m for _, _, m in minors(bhm_matrix(), 2)]
        pts, count, evals = scan_projective(ScanJob(p=p, n=4, evaluators=mins))
        rep.counts.update(points=count, evaluations=evals)
        rep.expect("30 points", count == 30, count)
    return rep


# ---------------------------------------------------------------------------
# discriminant and smoothness


def singular_ratios() -> list:
    """c1/c2 values in Q(zeta_5) (None for infinity) giving singular curves."""
    F = Cyclotomic(5)
    z = F.gen()
    gold = [-(z ** 2) - z ** 3, -z - z ** 4]  # (1 + sqrt5)/2, (1 - sqrt5)/2
    out = [F.zero, None]
    for g in gold:
        for i in range(5):
            out.append(F.root_power(i) * g)
    return out


def ratios_from_lines(forms) -> list:
    """a c1 + b c2 = 0  ->  c1/c2 = -b/a (None when a = 0)."""
    F = Cyclotomic(5)
    out = []
    for a, b in forms:
        out.append(None if F.is_zero(a) else F.neg(F.div(b, a)))
    return out


def singular_ratios_mod(p: int) -> set:
    out = set()
    for r in singular_ratios():
        if r is None:
            out.add(None)
        else:
            from .exactmath import to_prime_field

            out.add(to_prime_field(r, p))
    return out


def jacobian_rank_at(quadrics, point, p: int) -> int:
    from .oracle import rank_mod

    rows = []
    point = [int(x) for x in point]
    for q in quadrics:
        rows.append([q.differentiate(f"z{k}").reduce_mod(p).eval_raw(point) for k in range(1, 6)])
    return rank_mod(rows, p)


def jacobian_ranks(quadrics, pts: np.ndarray, p: int) -> np.ndarray:
    """Jacobian ranks at a batch of points (vectorized ``jacobian_rank_at``)."""
    from .oracle import batch_rank_mod_p, compile_polys

    grads = compile_polys([q.differentiate(f"z{k}") for q in quadrics for k in range(1, 6)], p)
    cache: dict = {}
    J = np.stack([g(pts, cache) for g in grads], axis=1).reshape(len(pts), len(quadrics), 5)
    return batch_rank_mod_p(J, p)


def curve_points(c1: int, c2: int, p: int):
    from .oracle import ScanJob, scan_projective

    qs = pfaffian_quadrics(QuinticParams(c1, c2, GF(p)))
    pts, _, _ = scan_projective(ScanJob(p=p, n=4, evaluators=qs))
    return qs, pts


def curve_points_solved(c1: int, c2: int, p: int):
    """Same point set as ``curve_points`` without the full P^4 scan.

    On z1 = 1 the first quadric c1c2 - c1^2 z_a z_b + c2^2 z_c z_d = 0 is solved
    for z_b (or leaves z_b free when z_a = 0); the slab z1 = 0 is a P^3 scan."""
    from .oracle import compile_polys, decode_points, projective_size

    if c1 % p == 0:
        return curve_points(c1, c2, p)
    qs = pfaffian_quadrics(QuinticParams(c1, c2, GF(p)))
    a, b, c, d = (k - 1 for k in QUADRIC_PAIRS[0])
    g = np.arange(p, dtype=np.int64)
    za, zc, zd = (m.ravel() for m in np.meshgrid(g, g, g, indexing="ij"))
    rhs = (c1 * c2 + c2 * c2 % p * zc % p * zd) % p
    nz = za != 0
    inv = np.array([0] + [pow(int(x), -1, p) for x in range(1, p)], dtype=np.int64)
    zb = rhs[nz] * inv[za[nz]] % p * pow(c1 * c1, -1, p) % p
    free = (~nz) & (rhs == 0)
    k = int(free.sum())
    slab = np.zeros((int(nz.sum()) + k * p, 5), dtype=np.int64)
    slab[:, 0] = 1
    n1 = int(nz.sum())
    slab[:n1, a], slab[:n1, b], slab[:n1, c], slab[:n1, d] = za[nz], zb, zc[nz], zd[nz]
    slab[n1:, a] = 0
    slab[n1:, b] = np.tile(g, k)
    slab[n1:, c] = np.repeat(zc[free], p)
    slab[n1:, d] = np.repeat(zd[free], p)
    rest = decode_points(0, projective_size(3, p), 3, p)
    X = np.vstack([slab, np.hstack([np.zeros((len(rest), 1), dtype=np.int64), rest])])
    cache: dict = {}
    on = np.ones(len(X), dtype=bool)
    for f in compile_polys(qs, p):
        on &= f(X, cache) == 0
    pts = X[on]
    pts = pts[np.lexsort(pts.T[::-1])]
    return qs, pts


def smoothness_sampling(p: int = 61, samples: int = 50, seed: int = 0) -> VerificationReport:
    rep = VerificationReport("quintic.smoothness", prime=p, seed=seed)
    with rep.timed():
        bad = singular_ratios_mod(p)
        rng = random.Random(seed)
        done = 0
        npts = 0
        while done < samples:
            c1, c2 = rng.randrange(1, p), rng.randrange(1, p)
            if c1 * pow(c2, -1, p) % p in bad:
                continue
            qs, pts = curve_points_solved(c1, c2, p)
            ranks = jacobian_ranks(qs, pts, p)
            for x, r in zip(pts, ranks):
                rep.expect("rank 3 on the curve", r == 3, {"c": (c1, c2), "point": x.tolist(), "rank": int(r)})
            npts += len(pts)
            done += 1
        rep.counts.update(samples=done, points=npts)
    return rep


def degree15(p: int = 61, seed: int = 0) -> VerificationReport:
    rep = VerificationReport("quintic.degree15", prime=p, seed=seed)
    with rep.timed():
        res = slice_degree(bhm_minors_ideal(), expected_dim=2, p=p, seed=seed)
        rep.counts.update(value=res.value, slices=[{str(k): v for k, v in s.items()} for s in res.values])
        if not res.agree:
            rep.inconclusive("slices did not stabilize or agree", res.values)
        else:
            rep.expect("degree 15", res.value == 15, res.value)
    return rep


def s5_hilbert(p: int = 61, upto: int = 8) -> VerificationReport:
    rep = VerificationReport("quintic.hilbert", prime=p)
    with rep.timed():
        got = hilbert_values(bhm_minors_ideal(), range(upto + 1), p)
        want = series_coefficients(S5_NUMERATOR, 3, upto)
        rep.counts.update(computed=got, expected=want)
        rep.expect("Hilbert values match series", [got[d] for d in range(upto + 1)] == want, got)
    return rep


def pfaffian_report() -> VerificationReport:
    rep = VerificationReport("quintic.pfaffians")
    with rep.timed():
        signs = pfaffian_signs()
        rep.counts["signs"] = signs
        rep.expect("Pfaffians equal quadrics up to sign", None not in signs, signs)
        qs = pfaffian_quadrics()
        for i in range(5):
            rep.expect(f"sigma maps quadric {i + 1}", sigma_shift(qs[i]) == qs[(i + 1) % 5])
    return rep
