"""(3,3)-polarized Abelian surfaces from the Cartan subspace of wedge^3 of a 9-space.

Coordinates z1..z9 (the affine plane F_3^2 read row by row), parameters
c1..c4.  Symbolic objects live in the (c, z) context; specializations drop to
the z context over Q or F_p.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np

from .exactmath import GF, QQ, root_of_unity
from .idealcalc import (
    GradedIdeal,
    hilbert_value,
    hilbert_values,
    ideal_rank_in_degree,
    linear_span_dim,
    same_span,
    slice_degree,
)
from .matalg import (
    PolyMatrix,
    SkewPolyMatrix,
    kernel_mod_p,
    minors,
    pfaffian,
    rank_mod_p,
    sub_pfaffians,
)
from .polyring import MultiPoly, VarContext
from .report import VerificationReport

CZ9 = VarContext.of("c1..c4", "z1..z9")
C4 = VarContext.of("c1..c4")
Z9 = VarContext.of("z1..z9")
ZN = tuple(f"z{i}" for i in range(1, 10))
CN = ("c1", "c2", "c3", "c4")

# lines of the affine plane grouped by direction; h_k sums the wedges of direction k
H_LINES = (
    ((1, 2, 3), (4, 5, 6), (7, 8, 9)),
    ((1, 4, 7), (2, 5, 8), (3, 6, 9)),
    ((1, 5, 9), (2, 6, 7), (3, 4, 8)),
    ((1, 6, 8), (2, 4, 9), (3, 5, 7)),
)

PHI_ROWS = (
    "0, -c1*z3, c1*z2, -c2*z7, -c3*z9, -c4*z8, c2*z4, c4*z6, c3*z5",
    "c1*z3, 0, -c1*z1, -c4*z9, -c2*z8, -c3*z7, c3*z6, c2*z5, c4*z4",
    "-c1*z2, c1*z1, 0, -c3*z8, -c4*z7, -c2*z9, c4*z5, c3*z4, c2*z6",
    "c2*z7, c4*z9, c3*z8, 0, -c1*z6, c1*z5, -c2*z1, -c3*z3, -c4*z2",
    "c3*z9, c2*z8, c4*z7, c1*z6, 0, -c1*z4, -c4*z3, -c2*z2, -c3*z1",
    "c4*z8, c3*z7, c2*z9, -c1*z5, c1*z4, 0, -c3*z2, -c4*z1, -c2*z3",
    "-c2*z4, -c3*z6, -c4*z5, c2*z1, c4*z3, c3*z2, 0, -c1*z9, c1*z8",
    "-c4*z6, -c2*z5, -c3*z4, c3*z3, c2*z2, c4*z1, c1*z9, 0, -c1*z7",
    "-c3*z5, -c4*z4, -c2*z6, c4*z2, c3*z1, c2*z3, -c1*z8, c1*z7, 0",
)

# Phi_c(z_c) as displayed
MATRIXC_ROWS = (
    "0, -c1^2, -c1^2, -c2^2, -c3^2, -c4^2, -c2^2, -c4^2, -c3^2",
    "c1^2, 0, 0, -c3*c4, -c2*c4, -c2*c3, -c3*c4, -c2*c3, -c2*c4",
    "c1^2, 0, 0, -c3*c4, -c2*c4, -c2*c3, -c3*c4, -c2*c3, -c2*c4",
    "c2^2, c3*c4, c3*c4, 0, c1*c4, -c1*c3, 0, -c1*c3, c1*c4",
    "c3^2, c2*c4, c2*c4, -c1*c4, 0, c1*c2, -c1*c4, c1*c2, 0",
    "c4^2, c2*c3, c2*c3, c1*c3, -c1*c2, 0, c1*c3, 0, -c1*c2",
    "c2^2, c3*c4, c3*c4, 0, c1*c4, -c1*c3, 0, -c1*c3, c1*c4",
    "c4^2, c2*c3, c2*c3, c1*c3, -c1*c2, 0, c1*c3, 0, -c1*c2",
    "c3^2, c2*c4, c2*c4, -c1*c4, 0, c1*c2, -c1*c4, c1*c2, 0",
)

# Phi restricted to the Maschke space in the iota-adapted basis (coordinates z3, z7, z8, z9)
MASCHKE_BLOCK_ROWS = (
    "0, -c1*z3, -c2*z7, -c3*z9, -c4*z8, 0, 0, 0, 0",
    "c1*z3, 0, -c3*z8-c4*z9, -c4*z7-c2*z8, -c3*z7-c2*z9, 0, 0, 0, 0",
    "c2*z7, c3*z8+c4*z9, 0, c4*z3+c1*z8, -c3*z3-c1*z9, 0, 0, 0, 0",
    "c3*z9, c4*z7+c2*z8, -c4*z3-c1*z8, 0, c2*z3+c1*z7, 0, 0, 0, 0",
    "c4*z8, c3*z7+c2*z9, c3*z3+c1*z9, -c2*z3-c1*z7, 0, 0, 0, 0, 0",
    "0, 0, 0, 0, 0, 0, c3*z8-c4*z9, c4*z7-c2*z8, c2*z9-c3*z7",
    "0, 0, 0, 0, 0, c4*z9-c3*z8, 0, c1*z8-c4*z3, c3*z3-c1*z9",
    "0, 0, 0, 0, 0, c2*z8-c4*z7, c4*z3-c1*z8, 0, c1*z7-c2*z3",
    "0, 0, 0, 0, 0, c3*z7-c2*z9, c1*z9-c3*z3, c2*z3-c1*z7, 0",
)

GAMMA_TEXT = (
    "3*c1*c2*c3*c4",
    "-c1*c2^3-c1*c3^3-c1*c4^3",
    "c2*c1^3+c2*c3^3-c2*c4^3",
    "c3*c1^3-c3*c2^3+c3*c4^3",
    "c4*c1^3+c4*c2^3-c4*c3^3",
)

# generator i: gamma1 z_i^2 + gamma2..gamma5 times the listed products
JACOBIAN_TABLE = (
    ((2, 3), (4, 7), (5, 9), (6, 8)),
    ((1, 3), (5, 8), (6, 7), (4, 9)),
    ((1, 2), (6, 9), (4, 8), (5, 7)),
    ((5, 6), (1, 7), (3, 8), (2, 9)),
    ((4, 6), (2, 8), (1, 9), (3, 7)),
    ((4, 5), (3, 9), (2, 7), (1, 8)),
    ((8, 9), (1, 4), (2, 6), (3, 5)),
    ((7, 9), (2, 5), (3, 4), (1, 6)),
    ((7, 8), (3, 6), (1, 5), (2, 4)),
)

DISC_TEXT = (
    "c1*((c2^3+c3^3+c4^3)^3-(3*c2*c3*c4)^3)",
    "c2*((c1^3+c3^3-c4^3)^3+(3*c1*c3*c4)^3)",
    "c3*((c1^3-c2^3+c4^3)^3+(3*c1*c2*c4)^3)",
    "c4*((c1^3+c2^3-c3^3)^3+(3*c1*c2*c3)^3)",
)

UNIVERSAL_P4_TEXT = (
    "(c2^3+c3^3+c4^3)*z1 + 3*c2*c3*c4*(z2+z3)",
    "(-c1^3-c3^3+c4^3)*z1 + 3*c1*c3*c4*(z4+z7)",
    "(-c1^3-c2^3+c3^3)*z1 + 3*c1*c2*c3*(z6+z8)",
    "(-c1^3+c2^3-c4^3)*z1 + 3*c1*c2*c4*(z5+z9)",
)

PSI_ROWS = (
    "0, c1^2, c2^2, c3^2, c4^2",
    "-c1^2, 0, c3*c4, c2*c4, c2*c3",
    "-c2^2, -c3*c4, 0, -c1*c4, c1*c3",
    "-c3^2, -c2*c4, c1*c4, 0, -c1*c2",
    "-c4^2, -c2*c3, -c1*c3, c1*c2, 0",
)

GAMMA_JACOBIAN_ROWS = (
    "3*c2*c3*c4, -c2^3-c3^3-c4^3, 3*c1^2*c2, 3*c1^2*c3, 3*c1^2*c4",
    "3*c1*c3*c4, -3*c1*c2^2, c1^3+c3^3-c4^3, -3*c2^2*c3, 3*c2^2*c4",
    "3*c1*c2*c4, -3*c1*c3^2, 3*c2*c3^2, c1^3-c2^3+c4^3, -3*c3^2*c4",
    "3*c1*c2*c3, -3*c1*c4^2, -3*c2*c4^2, 3*c3*c4^2, c1^3+c2^3-c3^3",
)

# Maschke space: z1 = 0, z2 = -z3, z4 = -z7, z5 = -z9, z6 = -z8
IOTA_PAIRS = ((2, 3), (4, 7), (5, 9), (6, 8))


class InadmissibleParameters(ValueError):
    """Family parameters on a deeper stratum than the family being studied."""


class DivisibilityFailure(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# parsing helpers


def _parse(text: str, ctx=CZ9, field=QQ) -> MultiPoly:
    return MultiPoly.parse(_expand_parens(text), ctx, field)


def _expand_parens(text: str) -> str:
    """The polynomial parser takes sums of monomials; expand products of brackets."""
    text = text.replace(" ", "")
    if "(" not in text:
        return text
    return _ParenExpander(text).render()


class _ParenExpander:
    """Tiny recursive-descent expander for +, -, *, ^ and brackets."""

    def __init__(self, text: str):
        self.s = text
        self.i = 0

    def render(self) -> str:
        poly = self.expr()
        out = ""
        for m, c in sorted(poly.items()):
            if c:
                body = f"{abs(c)}*{m}" if m else f"{abs(c)}"
                out += ("-" if c < 0 else "+") + body
        return out or "0"

    def peek(self):
        return self.s[self.i] if self.i < len(self.s) else ""

    def expr(self) -> dict:
        acc: dict = {}
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.peek() == "-" else 1
            self.i += 1
        while True:
            t = self.term()
            for m, c in t.items():
                acc[m] = acc.get(m, 0) + sign * c
            if self.peek() in ("+", "-"):
                sign = -1 if self.peek() == "-" else 1
                self.i += 1
            else:
                return acc

    def term(self) -> dict:
        acc = self.power()
        while self.peek() == "*":
            self.i += 1
            acc = _pmul(acc, self.power())
        return acc

    def power(self) -> dict:
        base = self.atom()
        if self.peek() == "^":
            self.i += 1
            j = self.i
            while self.peek().isdigit():
                self.i += 1
            k = int(self.s[j:self.i])
            out = {"": 1}
            for _ in range(k):
                out = _pmul(out, base)
            return out
        return base

    def atom(self) -> dict:
        ch = self.peek()
        if ch == "(":
            self.i += 1
            e = self.expr()
            self.i += 1  # ')'
            return e
        j = self.i
        if ch.isdigit():
            while self.peek().isdigit():
                self.i += 1
            return {"": int(self.s[j:self.i])}
        while self.peek().isalnum() or self.peek() == "_":
            self.i += 1
        return {self.s[j:self.i]: 1}


def _pmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = "*".join(sorted(x for x in (ma.split("*") + mb.split("*")) if x))
            out[m] = out.get(m, 0) + ca * cb
    return out


def _parse_rows(rows, ctx=CZ9):
    return [[_parse(t, ctx) for t in r.split(",")] for r in rows]


def _var(name: str, ctx=CZ9, field=QQ) -> MultiPoly:
    return MultiPoly.var(ctx, name, field)


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class CVector:
    c1: object
    c2: object
    c3: object
    c4: object
    field: object = QQ

    def values(self) -> dict:
        F = self.field
        return {n: F.coerce(v) for n, v in zip(CN, (self.c1, self.c2, self.c3, self.c4))}

    def as_tuple(self) -> tuple:
        return tuple(self.values()[n] for n in CN)

    def is_zero(self) -> bool:
        F = self.field
        return all(F.is_zero(v) for v in self.as_tuple())

    @classmethod
    def parse(cls, text: str, field=QQ) -> "CVector":
        parts = [Fraction(x.strip()) for x in text.strip("()[] ").split(",")]
        if len(parts) != 4:
            raise ValueError("expected four comma-separated values")
        return cls(*parts, field=field)


def specialize(f: MultiPoly, c: CVector, target=Z9) -> MultiPoly:
    """Substitute numeric c into a (c, z) polynomial."""
    F = c.field
    g = f if f.field == F else (f.reduce_mod(F.p) if hasattr(F, "p") else f.map_coefficients(F.coerce, F))
    return g.specialize(c.values(), target)


def set_params(f: MultiPoly, values: dict) -> MultiPoly:
    """Substitute some c_i by polynomials in the c's (e.g. c4 -> 0) keeping the context."""
    assign = {k: (v if isinstance(v, MultiPoly) else MultiPoly.const(f.ctx, v, f.field)) for k, v in values.items()}
    return f.substitute(assign, f.ctx)


# ---------------------------------------------------------------------------
# Phi_c(z)


@lru_cache(maxsize=None)
def phi_matrix_symbolic() -> SkewPolyMatrix:
    return SkewPolyMatrix(_parse_rows(PHI_ROWS))


def phi_matrix(c: CVector | None = None) -> SkewPolyMatrix:
    M = phi_matrix_symbolic()
    if c is None:
        return M
    return SkewPolyMatrix([[specialize(f, c) for f in r] for r in M.entries])


def cartan_element(coeffs=None):
    """sum_k c_k h_k as {sorted 0-based triple: coefficient polynomial}."""
    out = {}
    for k, lines in enumerate(H_LINES):
        ck = coeffs[k] if coeffs is not None else _var(CN[k])
        for line in lines:
            out[tuple(i - 1 for i in line)] = ck
    return out


def _perm_sign(seq) -> int:
    seq = list(seq)
    s = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
            elif seq[i] == seq[j]:
                return 0
    return s


def comultiplication_matrix(v: dict | None = None) -> PolyMatrix:
    """Contract v in wedge^3 A with z in A*: entry (j, k) = sum_i v_{ijk} z_i."""
    v = cartan_element() if v is None else v
    zero = MultiPoly.zero(CZ9)
    m = [[zero for _ in range(9)] for _ in range(9)]
    for triple, coef in v.items():
        for perm in itertools.permutations(triple):
            i, j, k = perm
            s = _perm_sign(perm)
            m[j][k] = m[j][k] + coef * _var(ZN[i]).scale(s)
    return PolyMatrix(m)


def comultiplication_sign() -> int | None:
    """Global sign s with comultiplication matrix = s * printed Phi, or None."""
    A = comultiplication_matrix().entries
    B = phi_matrix_symbolic().entries
    for s in (1, -1):
        if all(A[i][j] == B[i][j].scale(s) for i in range(9) for j in range(9)):
            return s
    return None


def maschke_block() -> tuple[PolyMatrix, PolyMatrix]:
    """(B^T Phi B restricted to the Maschke space, printed block matrix).

    B is the iota-adapted basis e1, e2+e3, e4+e7, e5+e9, e6+e8, e2-e3, ... ."""
    basis = [[1] + [0] * 8]
    for sgn in (1, -1):
        for a, b in IOTA_PAIRS:
            v = [0] * 9
            v[a - 1] = 1
            v[b - 1] = sgn
            basis.append(v)
    Phi = phi_matrix_symbolic().entries
    zero = MultiPoly.zero(CZ9)
    restrict = {"z1": zero}
    for a, b in IOTA_PAIRS:
        restrict[f"z{a}"] = -_var(f"z{b}")
    out = []
    for u in basis:
        row = []
        for w in basis:
            acc = zero
            for i in range(9):
                for j in range(9):
                    if u[i] and w[j]:
                        acc = acc + Phi[i][j].scale(u[i] * w[j])
            row.append(acc.substitute(restrict, CZ9))
        out.append(row)
    return PolyMatrix(out), PolyMatrix(_parse_rows(MASCHKE_BLOCK_ROWS))


def phi_report() -> VerificationReport:
    rep = VerificationReport("ab33.phi")
    with rep.timed():
        M = phi_matrix_symbolic()
        rep.expect("entry (1,2) is -c1 z3", M[0, 1] == _parse("-c1*z3"))
        s = comultiplication_sign()
        rep.counts["comultiplication_sign"] = s
        rep.expect("comultiplication agrees up to one global sign", s is not None)
        got, printed = maschke_block()
        bad = [(i, j) for i in range(9) for j in range(9) if got[i, j] != printed[i, j].scale(2)]
        rep.counts["maschke_scale"] = 2
        rep.expect("Maschke block form (adapted basis, factor 2)", not bad, bad)
        off = all(got[i, j].is_zero() for i in range(5) for j in range(5, 9))
        rep.expect("off-diagonal 5x4 block vanishes", off)
        rep.note("adapted basis vectors e_a +- e_b are unnormalized, so every entry carries a factor 2")
    return rep


# ---------------------------------------------------------------------------
# gamma, Coble cubic, Jacobian ideal


@lru_cache(maxsize=None)
def gammas(ctx=CZ9) -> tuple:
    return tuple(_parse(t, ctx) for t in GAMMA_TEXT)


def coble_cubic_symbolic() -> MultiPoly:
    g = gammas()
    z = [_var(n) for n in ZN]
    f = sum((z[i] ** 3 for i in range(9)), MultiPoly.zero(CZ9)).scale(Fraction(1, 3)) * g[0]
    for k, lines in enumerate(H_LINES):
        s = MultiPoly.zero(CZ9)
        for a, b, c in lines:
            s = s + z[a - 1] * z[b - 1] * z[c - 1]
        f = f + g[k + 1] * s
    return f


def coble_cubic(c: CVector | None = None) -> MultiPoly:
    f = coble_cubic_symbolic()
    return f if c is None else specialize(f, c)


def coble_from_pfaffians():
    """Divide the 8x8 principal Pfaffians by z_i.

    Returns (common quotient, signs, scalar relating it to the displayed cubic)."""
    M = phi_matrix_symbolic()
    memo: dict = {}
    quotients = []
    for i in range(9):
        pf = pfaffian(M, [k for k in range(9) if k != i], memo)
        try:
            q = pf.divide_exact(_var(ZN[i]))
        except ArithmeticError:
            q = None
        if q is None or q * _var(ZN[i]) != pf:
            raise DivisibilityFailure(f"8x8 Pfaffian {i + 1} is not divisible by z{i + 1}")
        quotients.append(q)
    base = quotients[0]
    signs = []
    for q in quotients:
        signs.append(1 if q == base else (-1 if q == -base else None))
    if None in signs:
        raise DivisibilityFailure("quotients differ beyond sign")
    F = coble_cubic_symbolic()
    lam = proportionality(base, F)
    return base, signs, lam


def proportionality(f: MultiPoly, g: MultiPoly):
    """Scalar r with f = r g, or None."""
    if g.is_zero():
        return None if not f.is_zero() else 0
    e, cg = g.leading_term()
    cf = f.coefficient(e)
    Fd = g.field
    r = Fd.div(cf, cg)
    return r if f == g.scale(r) else None


def coble_report() -> VerificationReport:
    rep = VerificationReport("ab33.coble")
    with rep.timed():
        try:
            q, signs, lam = coble_from_pfaffians()
        except DivisibilityFailure as e:
            rep.expect("8x8 Pfaffians divisible by z_i", False, str(e))
            return rep
        rep.counts.update(signs=signs, scalar=str(lam), divisibility_checks=9)
        rep.expect("common quotient equals displayed cubic up to a scalar", lam is not None)
        F = coble_cubic_symbolic()
        e = [0] * 13
        e[4] = 3
        rep.expect("coefficient of z1^3 is c1c2c3c4", F.coefficients_in(ZN)[tuple(e[4:])] == _parse("c1*c2*c3*c4"))
        F1 = coble_cubic(CVector(1, 1, 1, 1))
        rep.counts["c=(1,1,1,1)"] = F1.render()
    return rep


def jacobian_printed() -> list[MultiPoly]:
    g = gammas()
    out = []
    for i, pairs in enumerate(JACOBIAN_TABLE, start=1):
        f = g[0] * _var(f"z{i}") ** 2
        for k, (a, b) in enumerate(pairs):
            f = f + g[k + 1] * _var(f"z{a}") * _var(f"z{b}")
        out.append(f)
    return out


def jacobian_gens(c: CVector | None = None) -> list[MultiPoly]:
    F = coble_cubic_symbolic()
    gens = [F.differentiate(n) for n in ZN]
    return gens if c is None else [specialize(f, c) for f in gens]


def gamma_values(c: CVector) -> tuple:
    return tuple(_eval_c(g, c) for g in gammas())


def _eval_c(f: MultiPoly, c: CVector):
    """Value of a pure-c polynomial at c."""
    F = c.field
    g = specialize(f, c, Z9)
    if g.is_zero():
        return F.zero
    return g.coefficient((0,) * 9)


def burkhardt_form(gs):
    g1, g2, g3, g4, g5 = gs
    return g1 * (g1 ** 3 + g2 ** 3 + g3 ** 3 + g4 ** 3 + g5 ** 3) + g2 * g3 * g4 * g5 * 3


def burkhardt_report() -> VerificationReport:
    rep = VerificationReport("ab33.burkhardt")
    with rep.timed():
        g = gammas()
        B = burkhardt_form(g)
        if rep.expect("Burkhardt identity", B.is_zero(), B.render()[:200]):
            rep.certify("Burkhardt identity", "zero polynomial")
        rep.counts["gamma(1,1,1,1)"] = [str(x) for x in gamma_values(CVector(1, 1, 1, 1))]
        rep.counts["gamma(1,0,0,0)"] = [str(x) for x in gamma_values(CVector(1, 0, 0, 0))]
        rep.expect("gamma(1,0,0,0) = 0", all(x == 0 for x in gamma_values(CVector(1, 0, 0, 0))))
    return rep


def jacobian_report() -> VerificationReport:
    rep = VerificationReport("ab33.jacobian")
    with rep.timed():
        gens = jacobian_gens()
        printed = jacobian_printed()
        bad = [i + 1 for i in range(9) if gens[i] != printed[i]]
        rep.expect("partials equal the displayed generators", not bad, bad)
        from .cobleshioda import gamma_cs_identity

        ok, resid = gamma_cs_identity()
        rep.expect("gamma^T CS(z) reproduces the generators", ok, resid)
    return rep


# ---------------------------------------------------------------------------
# discriminant


@lru_cache(maxsize=None)
def discriminant_factors(ctx=CZ9) -> tuple:
    return tuple(_parse(t, ctx) for t in DISC_TEXT)


def discriminant(c: CVector):
    vals = [_eval_c(f, c) for f in discriminant_factors()]
    F = c.field
    prod = F.one
    for v in vals:
        prod = F.mul(prod, v)
    return prod, vals


def disc_report() -> VerificationReport:
    rep = VerificationReport("ab33.disc")
    with rep.timed():
        for cv, nonzero in (((1, 2, 4, 8), True), ((1, 1, 2, 3), False), ((1, 0, 0, 0), False)):
            d, vals = discriminant(CVector(*cv))
            rep.counts[str(cv)] = [str(v) for v in vals]
            rep.expect(f"Delta{cv} {'!=' if nonzero else '=='} 0", (d != 0) == nonzero, [str(v) for v in vals])
        total = sum(f.degree(CN) for f in discriminant_factors())
        rep.counts["degree"] = total
        rep.expect("degree 40", total == 40)
    return rep


# ---------------------------------------------------------------------------
# 6x6 Pfaffians and the identity section


@lru_cache(maxsize=None)
def pfaffians6() -> tuple:
    """(row subset, Pfaffian) for all 84 principal 6x6 submatrices of Phi_c(z)."""
    return tuple(sub_pfaffians(phi_matrix_symbolic(), 6))


def pfaffian_polys(c: CVector | None = None) -> list[MultiPoly]:
    fs = [f for _, f in pfaffians6()]
    return fs if c is None else [specialize(f, c) for f in fs]


def pfaffian_ideal(c: CVector) -> GradedIdeal:
    return GradedIdeal(pfaffian_polys(c), Z9)


def identity_point(ctx=C4, field=QQ) -> list[MultiPoly]:
    c = {n: MultiPoly.var(ctx, n, field) for n in CN}
    z = MultiPoly.zero(ctx, field)
    return [z, -c["c1"], c["c1"], -c["c2"], -c["c3"], -c["c4"], c["c2"], c["c4"], c["c3"]]


def at_identity(f: MultiPoly) -> MultiPoly:
    """Substitute z = z_c into a (c, z) polynomial; result in c only."""
    pt = identity_point()
    assign = {n: MultiPoly.var(C4, n) for n in CN}
    assign.update({ZN[i]: pt[i] for i in range(9)})
    return f.substitute(assign, C4)


def matrix_at_identity() -> SkewPolyMatrix:
    return SkewPolyMatrix([[at_identity(f) for f in r] for r in phi_matrix_symbolic().entries])


def universal_p4_forms(ctx=CZ9) -> list[MultiPoly]:
    return [_parse(t, ctx) for t in UNIVERSAL_P4_TEXT]


def maschke_vectors() -> list[list[int]]:
    out = []
    for a, b in IOTA_PAIRS:
        v = [0] * 9
        v[a - 1], v[b - 1] = 1, -1
        out.append(v)
    return out


def identity_point_suite(c: CVector | None = None, p: int = 61, seed: int = 0, samples: int = 5) -> VerificationReport:
    rep = VerificationReport("ab33.identity", prime=p, seed=seed)
    with rep.timed():
        pfs = pfaffians6()
        nonzero = [s for s, f in pfs if not at_identity(f).is_zero()]
        rep.counts["pfaffians_checked"] = len(pfs)
        rep.expect("(i) every 6x6 Pfaffian vanishes at z_c", not nonzero, nonzero)
        M = matrix_at_identity()
        printed = SkewPolyMatrix(_parse_rows(MATRIXC_ROWS, C4))
        rep.expect("(ii) Phi_c(z_c) equals the displayed matrix", M == printed)
        pf4 = [f for _, f in sub_pfaffians(M, 4)]
        g4 = list(gammas(C4))
        d1, d2 = linear_span_dim(pf4), linear_span_dim(g4)
        rep.counts["pfaffian4_span"] = d1
        rep.counts["gamma_span"] = d2
        rep.expect("(iii) 4x4 Pfaffian span equals gamma span", d1 == d2 == 5 and same_span(pf4, g4))
        bad = []
        for v in maschke_vectors():
            for i in range(9):
                s = sum((M[i, j].scale(v[j]) for j in range(9) if v[j]), MultiPoly.zero(C4))
                if not s.is_zero():
                    bad.append((v, i))
        rep.expect("(iv) Maschke vectors lie in the kernel", not bad, bad)
        # (v) over F_p
        rng = random.Random(seed)
        cs = [CVector(*(int(x) for x in c.as_tuple()), field=GF(p))] if c is not None else []
        cs += [CVector(*(rng.randrange(1, p) for _ in range(4)), field=GF(p)) for _ in range(samples)]
        checked = 0
        for cv in cs:
            g = [_eval_c(f, cv) for f in gammas()]
            if any(x == 0 for x in g) or any(x == 0 for x in cv.as_tuple()):
                continue
            ok, info = universal_p4_matches_kernel(cv, p)
            rep.expect(f"(v) universal P4 equals kernel at c={cv.as_tuple()}", ok, info)
            checked += 1
        rep.counts["kernel_samples"] = checked
    return rep


def numeric_phi(c, x, p: int) -> np.ndarray:
    """Phi_c(x) over F_p for integer vectors c (length 4) and x (length 9)."""
    c = [int(v) % p for v in c]
    x = [int(v) % p for v in x]
    A = np.zeros((9, 9), dtype=np.int64)
    for (i, j), (s, a, b) in _phi_pattern().items():
        A[i, j] = s * c[a] * x[b] % p
        A[j, i] = (-A[i, j]) % p
    return A


@lru_cache(maxsize=None)
def _phi_pattern() -> dict:
    """(i, j) upper -> (sign, c index, z index): every entry is +-c_a z_b."""
    M = phi_matrix_symbolic()
    out = {}
    for i in range(9):
        for j in range(i + 1, 9):
            (e, coef), = M[i, j].terms.items()
            a = next(k for k in range(4) if e[k])
            b = next(k for k in range(9) if e[4 + k])
            out[(i, j)] = (int(coef), a, b)
    return out


def identity_numeric(c, p: int) -> list[int]:
    c1, c2, c3, c4 = (int(v) % p for v in c)
    return [0, -c1 % p, c1, -c2 % p, -c3 % p, -c4 % p, c2, c4, c3]


def universal_p4_matches_kernel(c: CVector, p: int):
    cv = [int(v) for v in c.as_tuple()]
    K = kernel_mod_p(numeric_phi(cv, identity_numeric(cv, p), p), p)
    forms = [specialize(f, c) for f in universal_p4_forms()]
    L = np.array([[int(f.coefficient(tuple(int(k == i) for k in range(9)))) % p for i in range(9)] for f in forms],
                 dtype=np.int64)
    rank_forms = rank_mod_p(L.copy(), p)
    kill = (L @ K.T) % p if len(K) else np.zeros((4, 0), dtype=np.int64)
    info = {"kernel_dim": len(K), "forms_rank": rank_forms}
    return len(K) == 5 and rank_forms == 4 and not kill.any(), info


# ---------------------------------------------------------------------------
# psi(c) and the gamma map


def psi_matrix() -> SkewPolyMatrix:
    return SkewPolyMatrix(_parse_rows(PSI_ROWS, C4))


def gamma_jacobian_printed() -> PolyMatrix:
    return PolyMatrix(_parse_rows(GAMMA_JACOBIAN_ROWS, C4))


def psi_gamma() -> VerificationReport:
    rep = VerificationReport("ab33.psi")
    with rep.timed():
        P = psi_matrix()
        g = list(gammas(C4))
        prod = [sum((P[i, j] * g[j] for j in range(5)), MultiPoly.zero(C4)) for i in range(5)]
        rep.expect("psi(c) gamma(c) = 0", all(f.is_zero() for f in prod))
        pfs = [pfaffian(P, [k for k in range(5) if k != i]) for i in range(5)]
        match = []
        for f in pfs:
            hit = [(j + 1, s) for j in range(5) for s in (1, -1) if f == g[j].scale(s)]
            match.append(hit[0] if hit else None)
        rep.counts["pfaffian_to_gamma"] = match
        rep.expect("4x4 Pfaffians are +-gamma_i", None not in match and len({m[0] for m in match}) == 5, match)
        J = gamma_jacobian_printed()
        computed = PolyMatrix([[gi.differentiate(n) for gi in g] for n in CN])
        rep.expect("displayed gamma Jacobian equals the derivative matrix", J == computed)
        # Family 4 representative: c3 = -c2, c4 = 0
        sub = {"c3": -MultiPoly.var(C4, "c2"), "c4": MultiPoly.zero(C4)}
        mins = [m.substitute(sub, C4) for _, _, m in minors(J, 4)]
        rep.counts["maximal_minors"] = len(mins)
        rep.expect("maximal minors vanish on (c1, c2, -c2, 0)", all(m.is_zero() for m in mins))
        generic = [m.substitute({"c4": MultiPoly.zero(C4)}, C4) for _, _, m in minors(J, 4)]
        rep.expect("minors do not vanish on all of c4 = 0", any(not m.is_zero() for m in generic))
    return rep


# ---------------------------------------------------------------------------
# multiplication by v : wedge^3 -> wedge^6


TRIPLES = tuple(combinations(range(9), 3))
SEXTUPLES = tuple(combinations(range(9), 6))


def mult_matrix(v: dict, p: int) -> np.ndarray:
    """Matrix of x -> v ^ x from wedge^3 to wedge^6 over F_p (v: {sorted triple: int})."""
    col = {s: k for k, s in enumerate(SEXTUPLES)}
    A = np.zeros((len(SEXTUPLES), len(TRIPLES)), dtype=np.int64)
    for r, x in enumerate(TRIPLES):
        for t, coef in v.items():
            if set(t) & set(x) or not coef % p:
                continue
            seq = tuple(t) + x
            s = _perm_sign(seq)
            A[col[tuple(sorted(seq))], r] = (A[col[tuple(sorted(seq))], r] + s * coef) % p
    return A


def mult_kernel(v: dict, p: int) -> int:
    A = mult_matrix(v, p)
    return len(TRIPLES) - rank_mod_p(A, p)


def cartan_numeric(c) -> dict:
    return {t: int(ck) for t, ck in cartan_element(list(c)).items()}


def random_admissible_c(p: int, rng: random.Random) -> list[int]:
    """Uniform c in (F_p^*)^4 with Delta(c) != 0 mod p."""
    while True:
        c = [rng.randrange(1, p) for _ in range(4)]
        if discriminant(CVector(*c, field=GF(p)))[0] != 0:
            return c


def multker_report(p: int = 61, seed: int = 0, trials: int = 20) -> VerificationReport:
    rep = VerificationReport("ab33.multker", prime=p, seed=seed)
    with rep.timed():
        rng = random.Random(seed)
        c = random_admissible_c(p, rng)
        k = mult_kernel(cartan_numeric(c), p)
        rep.counts["generic_cartan"] = {"c": c, "kernel": k}
        rep.expect("Cartan element with Delta != 0 has 4-dimensional kernel", k == 4, k)
        k1 = mult_kernel(cartan_numeric([1, 0, 0, 0]), p)
        rep.counts["h1"] = k1
        rep.expect("h1 alone has kernel >= 4", k1 >= 4, k1)
        on_wall = mult_kernel(cartan_numeric([1, 2, 3, 0]), p)
        rep.counts["c4=0"] = on_wall
        rep.expect("kernel jumps on a reflection hyperplane", on_wall > 4, on_wall)
        dims = []
        for _ in range(trials):
            v = {t: rng.randrange(p) for t in TRIPLES}
            dims.append(mult_kernel(v, p))
        rep.counts["random"] = dims
        rep.expect("random elements have kernel 4", all(d == 4 for d in dims), dims)
    return rep


# ---------------------------------------------------------------------------
# independence and Heisenberg invariance


def independence93(p: int = 61) -> VerificationReport:
    """Rank over F_p; rank p-adic reduction can only drop, so rank 93 mod p is exact."""
    rep = VerificationReport("ab33.indep93", prime=p)
    with rep.timed():
        J = jacobian_gens()
        P = pfaffian_polys()
        a, b, t = linear_span_dim(J, p), linear_span_dim(P, p), linear_span_dim(J + P, p)
        rep.counts.update(jacobian=a, pfaffians=b, total=t)
        rep.expect("9 Jacobian generators independent", a == 9)
        rep.expect("84 Pfaffians independent", b == 84)
        rep.expect("93 equations independent", t == 93)
        c = random_admissible_c(p, random.Random(0))
        extra = saturation_cubics(CVector(*c, field=GF(p)))
        rep.counts["extra_cubics"] = {"c": c, "dim": extra}
        rep.expect("Pfaffians add exactly 3 cubics to the Jacobian ideal", extra == 3, extra)
    return rep


def heisenberg_invariance(p: int = 61) -> VerificationReport:
    from .groups import heisenberg33

    rep = VerificationReport("ab33.heisenberg", prime=p)
    with rep.timed():
        H = heisenberg33()
        F = GF(p)
        base = [f.reduce_mod(p) for f in pfaffian_polys()]
        jac = [f.reduce_mod(p) for f in jacobian_gens()]
        for label, g in zip(H.names, H.gens):
            img = [g.on_poly(f, ZN) for f in base]
            rep.expect(f"{label} preserves the Pfaffian span", same_span(base, img, p), label)
            imgj = [g.on_poly(f, ZN) for f in jac]
            rep.expect(f"{label} preserves the Jacobian span", same_span(jac, imgj, p), label)
        rep.counts["generators"] = list(H.names)
    return rep


def saturation_cubics(c: CVector) -> int:
    """dim of (Jacobian ideal + Pfaffians)_3 minus dim (Jacobian ideal)_3 over F_p."""
    p = c.field.p
    J = GradedIdeal(jacobian_gens(c), Z9)
    P = pfaffian_ideal(c)
    return ideal_rank_in_degree(J + P, 3, p) - ideal_rank_in_degree(J, 3, p)


# ---------------------------------------------------------------------------
# degeneration families

F2_AVOID_F3 = "c1*c2*c3*((c1^3+c2^3-c3^3)^3+(3*c1*c2*c3)^3)"
F2_AVOID_F4 = "(c1^3-c2^3)*(c2^3+c3^3)*(c1^3+c3^3)"
F3_DISC = "c1*c2*(c1^6-c2^6)"
F4_DISC = "c1*c2*(c1^3-c2^3)*(c1^3+8*c2^3)"

F2_X1_TEXT = (
    "z1", "z6", "z8",
    "c1*(c2^3+c3^3)*z4*z5-c2*(c1^3+c3^3)*z3*z9-c3*(c1^3-c2^3)*z2*z7",
    "c1*(c2^3+c3^3)*z7*z9-c2*(c1^3+c3^3)*z2*z5-c3*(c1^3-c2^3)*z3*z4",
    "c1*(c2^3+c3^3)*z2*z3-c2*(c1^3+c3^3)*z4*z7-c3*(c1^3-c2^3)*z5*z9",
    "c1*c2*c3*(z3^3+z5^3+z7^3)+(c1^3+c2^3-c3^3)*z3*z5*z7",
    "c1*c2*c3*(z2^3+z4^3+z9^3)+(c1^3+c2^3-c3^3)*z2*z4*z9",
)
F2_MINOR_TEXT = "(c2^3+c3^3)*(c1^3+c3^3)*(c1^3-c2^3)*(c1*c2*c3*(z3^3+z5^3+z7^3)+(c1^3+c2^3-c3^3)*z3*z5*z7)"
HESSE_TEXT = "c1*c2*c3*(x^3+y^3+z^3)+(c1^3+c2^3-c3^3)*x*y*z"

# X_1 in Family 3: (vanishing coordinates, (x, y, z, w)) for c2^2 xy - c1^2 zw
F3_X1_COMPONENTS = (
    ((8, 7, 6, 2, 1), (4, 5, 3, 9)),
    ((9, 8, 6, 5, 1), (2, 3, 4, 7)),
    ((8, 6, 4, 3, 1), (7, 9, 2, 5)),
)
F3_QUADRICS_TEXT = ("c1^2*z3*z9-c2^2*z4*z5", "c1^2*z2*z5-c2^2*z7*z9", "c1^2*z4*z7-c2^2*z2*z3")
F3_MINOR_FACTOR = "c1^4*z4*z5-c2^4*z3*z9"
F3_PLANES = (
    (1, 2, 4, 6, 8, 9), (1, 2, 5, 6, 7, 9), (1, 3, 4, 5, 8, 9),
    (1, 3, 5, 6, 7, 8), (2, 3, 4, 5, 7, 9), (2, 3, 4, 6, 7, 8),
)

F4_SEGRE = ((1, 2, 3), (6, 4, 5), (8, 9, 7))
F4_CUBICS_TEXT = (
    ("z1^3+z6^3+z8^3", "z1*z6*z8"),
    ("z2^3+z4^3+z9^3", "z2*z4*z9"),
    ("z3^3+z5^3+z7^3", "z3*z5*z7"),
    ("z1*z2*z3+z4*z5*z6+z7*z8*z9", "z3*z6*z9"),
    ("z2*z3^2+z4*z5^2+z9*z7^2", "z3*z5*z9"),
    ("z1*z3^2+z6*z5^2+z8*z7^2", "z3*z5*z8"),
    ("z3*z2^2+z5*z4^2+z7*z9^2", "z2*z5*z9"),
    ("z1*z2^2+z6*z4^2+z8*z9^2", "z2*z6*z9"),
    ("z3*z1^2+z5*z6^2+z7*z8^2", "z3*z6*z8"),
    ("z2*z1^2+z4*z6^2+z9*z8^2", "z1*z6*z9"),
)
F4_CURVE = "c1*c2^2*(v1^3+v2^3+v3^3)-(c1^3+2*c2^3)*v1*v2*v3"

CV = VarContext.of("c1..c4", "v1..v3", "w1..w3")
CQ = VarContext.of("c1..c4", "s t u v")
XYZ = VarContext.of("c1..c4", "x y z")


def _cvals(c) -> dict:
    return dict(zip(CN, c))


def _at(f: MultiPoly, c, p: int | None = None, target=Z9) -> MultiPoly:
    field = QQ if p is None else GF(p)
    return specialize(f, CVector(*c, field=field), target)


def _is_zero_at(text: str, c) -> bool:
    return _at(_parse(text), list(c) + [0] * (4 - len(c)), target=Z9).is_zero()


def check_admissible(family: int, c) -> None:
    """Raise InadmissibleParameters unless the family's avoidance conditions hold over Q."""
    full = list(c) + [0] * (4 - len(c))
    tests = {2: (F2_AVOID_F3, F2_AVOID_F4), 3: (F3_DISC,), 4: (F4_DISC,)}.get(family, ())
    for t in tests:
        if _is_zero_at(t, full):
            raise InadmissibleParameters(f"family {family}: {t} vanishes at {tuple(c)}")


def _admissible_mod(texts, c, p) -> bool:
    full = list(c) + [0] * (4 - len(c))
    return all(not _at(_parse(t), full, p).is_zero() for t in texts)


def _restrict_zero(f: MultiPoly, names) -> MultiPoly:
    zero = MultiPoly.zero(f.ctx, f.field)
    return f.substitute({n: zero for n in names}, f.ctx)


def _sigma_power(k: int):
    from .groups import heisenberg33

    s = heisenberg33().gen("sigma1")
    return s.power(k)


def _map_index(g, i: int) -> int:
    """1-based coordinate index after a monomial map (substitution z_i -> z_perm(i))."""
    return g.perm[i - 1] + 1


def family2_x1(c3sym=True) -> list[MultiPoly]:
    return [_parse(t) for t in F2_X1_TEXT]


def family2_suite(c=(1, 2, 4), p: int = 61, seed: int = 0) -> VerificationReport:
    check_admissible(2, c)
    rep = VerificationReport("ab33.family2", prime=p, seed=seed)
    with rep.timed():
        full = list(c) + [0]
        if not _admissible_mod((F2_AVOID_F3, F2_AVOID_F4), full, p):
            raise InadmissibleParameters(f"family 2 parameters {tuple(c)} degenerate mod {p}")
        cv = CVector(*full, field=GF(p))
        X1 = [specialize(f, cv) for f in family2_x1()]
        pf = pfaffian_polys(cv)
        restricted = [_restrict_zero(f, ("z1", "z6", "z8")) for f in pf]
        # (i) cubics are restricted Pfaffians, quadrics saturate into the Pfaffian ideal
        base = linear_span_dim(restricted, p)
        for k, cub in enumerate(X1[6:8]):
            rep.expect(f"(i) cubic {k + 1} in the span of restricted Pfaffians",
                       linear_span_dim(restricted + [cub], p) == base)
        I = GradedIdeal(pf + X1[:3], Z9)
        sat = []
        for q in X1[3:6]:
            k_found = None
            for k in range(0, 4):
                d = 2 + k
                if ideal_rank_in_degree(I, d, p) == ideal_rank_in_degree(I + GradedIdeal([q], Z9), d, p):
                    k_found = k
                    break
            sat.append(k_found)
            rep.expect("(i) quadric times m^k lies in Pfaffians + (z1, z6, z8)", k_found is not None, q.render())
        rep.counts["quadric_saturation_exponents"] = sat
        # (ii) Jacobian of the quadrics on z2 = z4 = z9 = 0
        csub = {"c4": 0}
        qs = [set_params(_parse(t), csub) for t in F2_X1_TEXT[3:6]]
        rows = ("z2", "z3", "z4", "z5", "z7", "z9")
        J = PolyMatrix([[_restrict_zero(q.differentiate(v), ("z2", "z4", "z9")) for q in qs] for v in rows])
        target = set_params(_parse(F2_MINOR_TEXT), csub)
        ratios = []
        for _, _, m in minors(J, 3):
            if not m.is_zero():
                ratios.append(proportionality(m, target))
        rep.counts["nonzero_minors"] = len(ratios)
        rep.expect("(ii) nonzero maximal minors are multiples of the displayed product",
                   ratios and None not in ratios, [str(r) for r in ratios])
        # (iii) pairwise intersections carry the Hesse cubic
        rep.expect("(iii) pairwise intersections are Hesse cubics", *_family2_intersections())
        # (iv) smoothness criterion of the Hesse pencil
        lam = _parse("c1*c2*c3")
        mu = _parse("c1^3+c2^3-c3^3")
        crit = lam * (mu ** 3 + lam ** 3 * 27)
        rep.expect("(iv) lambda(mu^3+27lambda^3) equals the Family-3 avoidance polynomial", crit == _parse(F2_AVOID_F3))
        mism = []
        for w in ((1, 2, 0), (1, 1, 3)):
            a = _is_zero_at(F2_AVOID_F3, w)
            b = _is_zero_at(F2_AVOID_F4, w)
            if a != b:
                mism.append({"c": w, "hesse_singular": a, "on_family4": b})
        rep.counts["criterion_vs_family4_condition"] = mism
        rep.note("the Hesse smoothness criterion is the Family-3 avoidance condition, not the Family-4 one")
        # degrees
        x1 = slice_degree(GradedIdeal(X1, Z9), expected_dim=2, p=p, seed=seed)
        rep.counts["deg_X1"] = x1.value
        _expect_slice(rep, "X1 has degree 6", x1, 6)
        full_deg = slice_degree(GradedIdeal(pf, Z9), expected_dim=2, p=p, seed=seed)
        rep.counts["deg_X"] = full_deg.value
        _expect_slice(rep, "Pfaffian locus has degree 18", full_deg, 18)
    return rep


def _expect_slice(rep, label, res, want):
    if not res.agree:
        rep.inconclusive(label + " (slices did not stabilize)", [{str(k): v for k, v in s.items()} for s in res.values])
    else:
        rep.expect(label, res.value == want, res.value)


def _family2_intersections():
    """X_i (i = 1, 2, 3) are sigma1-translates; each pair meets in a coordinate plane."""
    csub = {"c4": 0}
    X1 = [set_params(f, csub) for f in family2_x1()]
    comps = {1: X1, 3: [_sigma_power(1).on_poly(f, ZN) for f in X1], 2: [_sigma_power(2).on_poly(f, ZN) for f in X1]}
    planes = {(1, 2): (2, 4, 9), (1, 3): (3, 5, 7), (2, 3): (1, 6, 8)}
    bad = []
    for (a, b), plane in planes.items():
        others = [n for n in ZN if int(n[1:]) not in plane]
        hesse = _parse(HESSE_TEXT, XYZ)
        assign = {f"z{plane[0]}": MultiPoly.var(XYZ, "x"), f"z{plane[1]}": MultiPoly.var(XYZ, "y"),
                  f"z{plane[2]}": MultiPoly.var(XYZ, "z")}
        assign.update({n: MultiPoly.zero(XYZ) for n in others})
        assign.update({n: MultiPoly.var(XYZ, n) for n in CN})
        hesse = set_params(hesse, csub)
        for idx in (a, b):
            rest = [f.substitute(assign, XYZ) for f in comps[idx]]
            nz = [r for r in rest if not r.is_zero()]
            if not nz or any(proportionality(r, hesse) is None for r in nz):
                bad.append((a, b, idx))
    return not bad, bad


def family3_components():
    """The 9 components as (vanishing indices, (x, y, z, w))."""
    out = []
    for k in (0, 1, 2):
        g = _sigma_power(k)
        for zeros, quad in F3_X1_COMPONENTS:
            out.append((tuple(sorted(_map_index(g, i) for i in zeros)), tuple(_map_index(g, i) for i in quad)))
    return out


def _component_param(quad):
    """Rational parametrization (x, y, z, w) = (c1^2 s t, u v, c2^2 s u, t v) of c2^2 xy = c1^2 zw."""
    s, t, u, v = (MultiPoly.var(CQ, n) for n in "stuv")
    c1, c2 = MultiPoly.var(CQ, "c1"), MultiPoly.var(CQ, "c2")
    x, y, z, w = quad
    img = {f"z{i}": MultiPoly.zero(CQ) for i in range(1, 10)}
    img[f"z{x}"] = c1 ** 2 * s * t
    img[f"z{y}"] = u * v
    img[f"z{z}"] = c2 ** 2 * s * u
    img[f"z{w}"] = t * v
    img.update({n: MultiPoly.var(CQ, n) for n in CN})
    return img


def family3_suite(c=(1, 2), p: int = 61, seed: int = 0) -> VerificationReport:
    check_admissible(3, c)
    rep = VerificationReport("ab33.family3", prime=p, seed=seed)
    with rep.timed():
        csub = {"c3": 0, "c4": 0}
        pf = [set_params(f, csub) for f in pfaffian_polys()]
        comps = family3_components()
        rep.counts["components"] = len(set(comps))
        rep.expect("9 distinct components", len(set(comps)) == 9)
        bad = []
        for zeros, quad in comps:
            img = _component_param(quad)
            if any(not f.substitute(img, CQ).is_zero() for f in pf):
                bad.append((zeros, quad))
        rep.expect("(i) every component lies in the Pfaffian locus", not bad, bad)
        # (ii) regular sequence
        qs = [_parse(t) for t in F3_QUADRICS_TEXT]
        red = [_restrict_zero(q, ("z2", "z7")) for q in qs]
        rep.expect("(ii) z2 = z7 = 0 leaves only q", red[0] == qs[0] and red[1].is_zero() and red[2].is_zero())
        rows = ("z2", "z3", "z4", "z5", "z7", "z9")
        J = PolyMatrix([[_restrict_zero(q.differentiate(v), ("z2", "z7")) for q in qs] for v in rows])
        factor = _parse(F3_MINOR_FACTOR)
        found = set()
        stray = []
        for _, _, m in minors(J, 3):
            if m.is_zero():
                continue
            hit = None
            for k in (3, 4, 5, 9):
                # the cofactor may carry a power of c1 or c2 but no z
                try:
                    q = m.divide_exact(factor * _var(f"z{k}"))
                except ArithmeticError:
                    continue
                if q.degree(ZN) == 0:
                    hit = k
            if hit is None:
                stray.append(m.render())
            else:
                found.add(hit)
        rep.counts["minor_multipliers"] = sorted(found)
        rep.expect("(ii) minors are z_k (c1^4 z4 z5 - c2^4 z3 z9), k in {3,4,5,9}", found == {3, 4, 5, 9} and not stray, stray)
        # q divides c1^4 z4z5 - c2^4 z3z9 only if the coefficient vectors are proportional
        det = _parse("-c2^2") * _parse("-c2^4") - _parse("c1^2") * _parse("c1^4")
        rep.expect("(ii) proportionality forces c1^6 = c2^6", det == _parse("c2^6-c1^6"))
        # (iii) the six planes satisfy the Jacobian generators but not the Pfaffians
        jac = [set_params(f, csub) for f in jacobian_gens()]
        for pl in F3_PLANES:
            names = [f"z{i}" for i in pl]
            ok = all(_restrict_zero(f, names).is_zero() for f in jac)
            outside = any(not _restrict_zero(f, names).is_zero() for f in pf)
            rep.expect(f"(iii) plane {pl} in Jacobian locus, not in Pfaffian locus", ok and outside, pl)
        # (iv) intersection graph
        adj, kinds = family3_graph(c, p)
        deg = adj.sum(axis=1).tolist()
        rep.counts["degrees"] = deg
        rep.counts["intersection_kinds"] = kinds
        rep.expect("(iv) 4-regular", all(d == 4 for d in deg), deg)
        rep.expect("(iv) non-adjacent pairs meet in a point", kinds.get("point", 0) == 18, kinds)
        aut = graph_automorphisms(adj)
        rep.counts["automorphisms"] = aut
        rep.expect("(iv) automorphism group of order 72", aut == 72, aut)
        res = slice_degree(GradedIdeal([_at(f, list(c) + [0, 0], p) for f in pfaffian_polys()], Z9), 2, p=p, seed=seed)
        rep.counts["deg_X"] = res.value
        _expect_slice(rep, "Pfaffian locus has degree 18", res, 18)
    return rep


def family3_graph(c, p: int):
    """Adjacency (P^1 intersections) of the 9 components over F_p."""
    comps = family3_components()
    c1, c2 = (int(x) % p for x in c)
    F = GF(p)

    def quadric(quad):
        x, y, z, w = (MultiPoly.var(Z9, f"z{i}", F) for i in quad)
        return (x * y).scale(c2 * c2 % p) - (z * w).scale(c1 * c1 % p)

    adj = np.zeros((9, 9), dtype=np.int64)
    kinds: dict = {}
    for a, b in combinations(range(9), 2):
        free = (set(range(1, 10)) - set(comps[a][0])) & (set(range(1, 10)) - set(comps[b][0]))
        gens = [MultiPoly.var(Z9, f"z{i}", F) for i in range(1, 10) if i not in free]
        gens += [quadric(comps[a][1]), quadric(comps[b][1])]
        I = GradedIdeal(gens, Z9)
        h = hilbert_values(I, (5, 6), p)
        if (h[5], h[6]) == (6, 7):
            kind = "line"
            adj[a, b] = adj[b, a] = 1
        elif (h[5], h[6]) == (1, 1):
            kind = "point"
        else:
            kind = f"H={h[5]},{h[6]}"
        kinds[kind] = kinds.get(kind, 0) + 1
    return adj, kinds


def graph_automorphisms(adj: np.ndarray, batch: int = 40320) -> int:
    """Brute force over all permutations of the vertex set."""
    n = adj.shape[0]
    count = 0
    perms = itertools.permutations(range(n))
    while True:
        chunk = np.array(list(itertools.islice(perms, batch)), dtype=np.int64)
        if not len(chunk):
            return count
        B = adj[chunk[:, :, None], chunk[:, None, :]]
        count += int((B == adj[None]).all(axis=(1, 2)).sum())


def _segre_images(curve_vars=("v1", "v2", "v3")):
    img = {}
    for r, row in enumerate(F4_SEGRE):
        for k, idx in enumerate(row):
            img[f"z{idx}"] = MultiPoly.var(CV, curve_vars[r]) * MultiPoly.var(CV, f"w{k + 1}")
    img.update({n: MultiPoly.var(CV, n) for n in CN})
    return img


def _multiple_of_curve(f: MultiPoly, curve: MultiPoly) -> bool:
    """Every w-coefficient of f is proportional (over Q[c]) to the curve equation in v."""
    vnames = ("v1", "v2", "v3")
    cc = curve.coefficients_in(vnames)
    for part in f.coefficients_in(("w1", "w2", "w3")).values():
        pc = part.coefficients_in(vnames)
        keys = set(pc) | set(cc)
        zero = MultiPoly.zero(CV)
        for a in keys:
            for b in keys:
                if pc.get(a, zero) * cc.get(b, zero) != pc.get(b, zero) * cc.get(a, zero):
                    return False
    return True


def family4_cubics() -> list[MultiPoly]:
    a, b = _parse("c1*c2^2"), _parse("c1^3+2*c2^3")
    return [a * _parse(s) - b * _parse(t) for s, t in F4_CUBICS_TEXT]


def family4_suite(c=(1, 2), p: int = 61, seed: int = 0) -> VerificationReport:
    check_admissible(4, c)
    rep = VerificationReport("ab33.family4", prime=p, seed=seed)
    with rep.timed():
        c2v = _var("c2")
        csub = {"c3": -c2v, "c4": MultiPoly.zero(CZ9)}
        jac = [set_params(f, csub) for f in jacobian_gens()]
        seg = PolyMatrix([[_var(f"z{i}") for i in row] for row in F4_SEGRE])
        mins = [m for _, _, m in minors(seg, 2)]
        factor = _parse("c2*(c1^3-c2^3)")
        used = []
        for f in jac:
            hit = [k for k, m in enumerate(mins) for s in (1, -1) if f == (factor * m).scale(s)]
            used.append(hit[0] if hit else None)
        rep.expect("(i) Jacobian generators are c2(c1^3-c2^3) times 2x2 minors",
                   None not in used and len(set(used)) == 9, used)
        curve = set_params(_parse(F4_CURVE, CV), {})
        img = _segre_images()
        cubics = family4_cubics()
        bad = [k + 1 for k, f in enumerate(cubics) if not _multiple_of_curve(f.substitute(img, CV), curve)]
        rep.expect("(ii) the 10 cubics vanish on C x P^2", not bad, bad)
        pf = [set_params(f, csub) for f in pfaffian_polys()]
        badp = [k for k, f in enumerate(pf) if not _multiple_of_curve(f.substitute(img, CV), curve)]
        rep.expect("(ii) the Pfaffians vanish on C x P^2", not badp, badp)
        full = [c[0], c[1], -c[1], 0]
        res = slice_degree(GradedIdeal([_at(f, full, p) for f in pfaffian_polys()], Z9), 3, p=p, seed=seed)
        rep.counts["degree"] = res.value
        _expect_slice(rep, "(iii) Pfaffian locus has dimension 3 and degree 9", res, 9)
        r5 = family5_checks(p, seed)
        for w in r5.witnesses:
            rep.witnesses.append(w)
        if r5.status != "pass":
            rep.status = r5.status if rep.status == "pass" else rep.status
        rep.counts["family5"] = r5.counts
    return rep


def family5_checks(p: int = 61, seed: int = 0) -> VerificationReport:
    rep = VerificationReport("ab33.family5", prime=p, seed=seed)
    with rep.timed():
        curve = _parse(F4_CURVE, CV)
        tri = set_params(curve, {"c1": 0})
        rep.expect("(iv) C degenerates to the triangle v1 v2 v3 = 0",
                   proportionality(tri, _parse("c2^3*v1*v2*v3", CV)) is not None, tri.render())
        pf = [set_params(f, {"c1": MultiPoly.zero(CZ9), "c3": -_var("c2"), "c4": MultiPoly.zero(CZ9)})
              for f in pfaffian_polys()]
        degs = []
        for i in range(3):
            img = _segre_images()
            vn = ("v1", "v2", "v3")[i]
            zero = MultiPoly.zero(CV)
            img = {k: v.substitute({vn: zero}, CV) for k, v in img.items()}
            rep.expect(f"(iv) component v{i + 1} = 0 lies in the Pfaffian locus",
                       all(f.substitute(img, CV).is_zero() for f in pf))
            row = F4_SEGRE[i]
            others = [r for k, r in enumerate(F4_SEGRE) if k != i]
            M = PolyMatrix([[MultiPoly.var(Z9, f"z{j}", GF(p)) for j in r] for r in others])
            gens = [MultiPoly.var(Z9, f"z{j}", GF(p)) for j in row] + [m for _, _, m in minors(M, 2)]
            res = slice_degree(GradedIdeal(gens, Z9), 3, p=p, seed=seed)
            degs.append(res.value)
        rep.counts["component_degrees"] = degs
        rep.expect("(iv) three components of degree 3", degs == [3, 3, 3], degs)
        res = slice_degree(GradedIdeal([_at(f, [0, 1, -1, 0], p) for f in pfaffian_polys()], Z9), 3, p=p, seed=seed)
        rep.counts["degree"] = res.value
        _expect_slice(rep, "(iv) total degree 9", res, 9)
    return rep


# ---------------------------------------------------------------------------
# 2-torsion slices, the kernel map x -> K_x, smoothness sampling

YM = VarContext.of("y1..y4")
YB = VarContext.of("y0..y4")
YC = VarContext.of("y1..y5")


def torsion_assignment(kind: str, ctx, field) -> dict:
    """z in terms of y on P_M (iota = -1, z1 = 0) or P_B (iota = +1)."""
    v = lambda n: MultiPoly.var(ctx, n, field)
    out = {}
    if kind == "M":
        out["z1"] = MultiPoly.zero(ctx, field)
        for k, (a, b) in enumerate(IOTA_PAIRS, start=1):
            out[f"z{a}"], out[f"z{b}"] = v(f"y{k}"), -v(f"y{k}")
    elif kind == "B":
        out["z1"] = v("y0")
        for k, (a, b) in enumerate(IOTA_PAIRS, start=1):
            out[f"z{a}"] = out[f"z{b}"] = v(f"y{k}")
    else:
        raise ValueError(kind)
    return out


def torsion_embed(kind: str, Y: np.ndarray, p: int) -> np.ndarray:
    """Numeric version of torsion_assignment on rows of Y."""
    Y = np.asarray(Y, dtype=np.int64)
    Z = np.zeros((len(Y), 9), dtype=np.int64)
    off = 0 if kind == "M" else 1
    if kind == "B":
        Z[:, 0] = Y[:, 0]
    sgn = -1 if kind == "M" else 1
    for k, (a, b) in enumerate(IOTA_PAIRS):
        Z[:, a - 1] = Y[:, k + off]
        Z[:, b - 1] = sgn * Y[:, k + off]
    return Z % p


def torsion_restriction(c, kind: str, p: int) -> GradedIdeal:
    ctx = YM if kind == "M" else YB
    a = torsion_assignment(kind, ctx, GF(p))
    gens = [f.substitute(a, ctx) for f in pfaffian_polys(CVector(*c, field=GF(p)))]
    return GradedIdeal([g for g in gens if not g.is_zero()], ctx)


def universal_p4_basis(c, p: int) -> np.ndarray:
    """Rows spanning the universal P4 at c (kernel of the four linear forms)."""
    cv = CVector(*c, field=GF(p))
    L = np.array([[int(specialize(f, cv).coefficient(tuple(int(k == i) for k in range(9)))) % p
                   for i in range(9)] for f in universal_p4_forms()], dtype=np.int64)
    return kernel_mod_p(L, p)


def curve_restriction(c, p: int) -> GradedIdeal:
    B = universal_p4_basis(c, p)
    F = GF(p)
    ys = [MultiPoly.var(YC, f"y{k}", F) for k in range(1, len(B) + 1)]
    a = {}
    for i in range(9):
        acc = MultiPoly.zero(YC, F)
        for k in range(len(B)):
            if B[k, i]:
                acc = acc + ys[k].scale(int(B[k, i]))
        a[ZN[i]] = acc
    gens = [f.substitute(a, YC) for f in pfaffian_polys(CVector(*c, field=F))]
    return GradedIdeal([g for g in gens if not g.is_zero()], YC)


def surface_degree(c=(1, 2, 4, 8), p: int = 61, seed: int = 0) -> VerificationReport:
    """X_c for a smooth parameter is a surface of degree 18."""
    rep = VerificationReport("ab33.degree18", prime=p, seed=seed)
    with rep.timed():
        if discriminant(CVector(*c, field=GF(p)))[0] == 0:
            raise InadmissibleParameters(f"Delta vanishes at {tuple(c)} mod {p}")
        res = slice_degree(pfaffian_ideal(CVector(*c, field=GF(p))), expected_dim=2, p=p, seed=seed)
        rep.counts["degree"] = res.value
        rep.counts["slices"] = [{str(k): v for k, v in s.items()} for s in res.values]
        _expect_slice(rep, "X_c has degree 18", res, 18)
    return rep


def torsion_slices(c=(1, 2, 4, 8), p: int = 61, seed: int = 0) -> VerificationReport:
    rep = VerificationReport("ab33.torsion", prime=p, seed=seed)
    with rep.timed():
        if discriminant(CVector(*c, field=GF(p)))[0] == 0:
            raise InadmissibleParameters(f"Delta vanishes at {tuple(c)} mod {p}")
        for kind, want in (("M", 6), ("B", 10)):
            res = slice_degree(torsion_restriction(c, kind, p), 0, p=p, seed=seed)
            rep.counts[f"P_{kind}"] = res.value
            _expect_slice(rep, f"P_{kind} slice has length {want}", res, want)
        C = curve_restriction(c, p)
        hv = hilbert_values(C, range(1, 7), p)
        rep.counts["curve_hilbert"] = hv
        ok = all(hv[d] == 6 * d - 1 for d in (3, 4, 5, 6))
        rep.expect("curve Hilbert values are 6d - 1 for d = 3..6", ok, hv)
        res = slice_degree(C, 1, p=p, seed=seed)
        rep.counts["curve_degree"] = res.value
        _expect_slice(rep, "curve has degree 6", res, 6)
    return rep


@lru_cache(maxsize=None)
def _compiled_generators(p: int):
    """Evaluators of the 93 generators of X_c and of their z-gradients, in (c, z)."""
    from .oracle import compile_polys

    gens = pfaffian_polys() + jacobian_gens()
    grads = [f.differentiate(z) for f in gens for z in ZN]
    return compile_polys(gens, p), compile_polys(grads, p)


def jacobian_ranks(c, pts, p: int):
    """(all generators vanish, rank of the 93 x 9 Jacobian) at each point."""
    from .oracle import batch_rank_mod_p

    pts = np.asarray(pts, dtype=np.int64).reshape(-1, 9)
    if not len(pts):
        return np.zeros(0, dtype=bool), np.zeros(0, dtype=np.int64)
    vals, grads = _compiled_generators(p)
    X = np.hstack([np.tile(np.asarray(c, dtype=np.int64) % p, (len(pts), 1)), pts % p])
    cache: dict = {}
    on = np.ones(len(pts), dtype=bool)
    for f in vals:
        on &= f(X, cache) == 0
    G = np.array([g(X, cache) for g in grads]).T.reshape(len(pts), len(vals), 9)
    return on, batch_rank_mod_p(G, p)


def heisenberg_orbit(x, p: int) -> np.ndarray:
    """Distinct normalized H_{3,2}-translates of x over F_p."""
    from .groups import heisenberg33
    from .oracle import normalize_point

    F = GF(p)
    pts = {normalize_point(g.on_point(list(x), F), p) for g in heisenberg33().elements()}
    return np.array(sorted(pts), dtype=np.int64)


def reflection_forms(p: int, seed: int = 0) -> list[tuple]:
    """The 40 linear forms over F_p dividing Delta: the c_k and the factors of each nonic.

    A candidate form c_a + u c_b + v c_w divides a nonic iff the nonic vanishes
    on its hyperplane, tested at random points (the nonics split over F_p when
    p = 1 mod 3)."""
    from .oracle import CompiledPoly

    rng = random.Random(seed)
    out = []
    for k in range(4):
        out.append(tuple(int(i == k) for i in range(4)))
    for k, f in enumerate(discriminant_factors(C4)):
        nonic = f.divide_exact(MultiPoly.var(C4, CN[k]))
        ev = CompiledPoly(nonic, p)
        a, b, w = [i for i in range(4) if i != k]
        T = np.array([[rng.randrange(p) for _ in range(4)] for _ in range(8)], dtype=np.int64)
        for u in range(1, p):
            for v in range(1, p):
                X = T.copy()
                X[:, a] = (-u * X[:, b] - v * X[:, w]) % p
                if not ev(X).any():
                    e = [0] * 4
                    e[a], e[b], e[w] = 1, u, v
                    out.append(tuple(e))
    return out


def point_on_hyperplane(form, forms, p: int, rng: random.Random) -> list[int]:
    """Random c on one hyperplane and off all the others."""
    L = np.array(forms, dtype=np.int64)
    i = next(j for j in range(4) if form[j])
    while True:
        c = [rng.randrange(p) for _ in range(4)]
        s = sum(form[j] * c[j] for j in range(4) if j != i) % p
        c[i] = (-s * pow(form[i], -1, p)) % p
        if int(((L @ np.array(c)) % p == 0).sum()) == 1:
            return c


def fano_checks(c=(1, 2, 4, 8), p: int = 61, seed: int = 0, kernel_samples: int = 200, pairs: int = 50) -> VerificationReport:
    from .oracle import batch_rank_mod_p, sample_surface_points

    rep = VerificationReport("ab33.fano", prime=p, seed=seed)
    with rep.timed():
        rng = np.random.default_rng(seed)
        pts = sample_surface_points(c, p, sources=("orbit", "P_M"))
        rep.counts["points"] = len(pts)
        kernels = []
        bad_dim = []
        worst = 0
        for x in pts:
            K = kernel_mod_p(numeric_phi(c, x, p), p)
            kernels.append(K)
            if len(K) != 5:
                bad_dim.append((x.tolist(), len(K)))
                continue
            Y = rng.integers(0, p, size=(kernel_samples, 5)) @ K % p
            Y = Y[Y.any(axis=1)]
            M = np.array([numeric_phi(c, y, p) for y in Y])
            worst = max(worst, int(batch_rank_mod_p(M, p).max()))
        rep.counts["max_rank_on_kernels"] = worst
        rep.expect("dim ker Phi_c(x) = 5 at every sampled x", not bad_dim, bad_dim[:5])
        rep.expect("rank Phi_c(y) <= 6 for y in K_x", worst <= 6, worst)
        keys = [k.tobytes() for k in kernels]
        rep.counts["distinct_kernels"] = len(set(keys))
        prng = random.Random(seed)
        clash = []
        for _ in range(pairs):
            i, j = prng.sample(range(len(pts)), 2)
            if keys[i] == keys[j]:
                clash.append((pts[i].tolist(), pts[j].tolist()))
        rep.expect("K_x differ for random pairs x != x'", not clash, clash)
        rep.expect("x -> K_x injective on the sample", len(set(keys)) == len(pts), len(set(keys)))
    return rep


def smoothness_sampling(p: int = 61, seed: int = 0, samples: int = 50) -> VerificationReport:
    """Rank 6 everywhere sampled when Delta != 0; a rank drop on every reflection hyperplane."""
    from .oracle import sample_surface_points

    rep = VerificationReport("ab33.smooth", prime=p, seed=seed)
    with rep.timed():
        rng = random.Random(seed)
        bad = []
        npts = 0
        for _ in range(samples):
            c = random_admissible_c(p, rng)
            pts = sample_surface_points(c, p, sources=("orbit", "P_M"), verify=False)
            on, r = jacobian_ranks(c, pts, p)
            npts += len(pts)
            if not on.all() or (r != 6).any():
                bad.append({"c": c, "ranks": sorted(set(r.tolist())), "on": bool(on.all())})
        rep.counts["generic"] = {"parameters": samples, "points": npts}
        rep.expect("rank 6 at every sampled point for Delta != 0", not bad, bad)
        forms = reflection_forms(p, seed)
        rep.counts["hyperplanes"] = len(forms)
        rep.expect("Delta splits into 40 linear forms over F_p", len(forms) == 40, len(forms))
        missing = []
        witnesses = {}
        for form in forms:
            c = point_on_hyperplane(form, forms, p, rng)
            hit = None
            for src in (("orbit", "P_M"), ("P_B",)):
                pts = sample_surface_points(c, p, sources=src, verify=False, degenerate_ok=True)
                on, r = jacobian_ranks(c, pts, p)
                drop = np.nonzero(on & (r < 6))[0]
                if len(drop):
                    hit = (pts[drop[0]].tolist(), int(r[drop[0]]), src[-1])
                    break
            if hit is None:
                missing.append({"form": form, "c": c})
            else:
                witnesses[str(form)] = {"c": c, "point": hit[0], "rank": hit[1], "source": hit[2]}
        rep.counts["rank_drop_witnesses"] = len(witnesses)
        rep.counts["witnesses"] = witnesses
        rep.expect("rank < 6 at some sampled point on every reflection hyperplane", not missing, missing)
    return rep
