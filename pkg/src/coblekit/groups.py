"""Heisenberg actions, finite matrix groups over cyclotomic fields, reflection
arrangements and their flats.

Group elements are stored as integer arrays: an entry x of Q(zeta_n) is kept
as D * x written in the power basis 1, zeta, ..., zeta^(phi(n)-1), where D is
a fixed power of the prime dividing the generator denominators.  Products go
through the multiplication structure tensor of the field, so enumeration is
exact and vectorized at the same time.  Hashing uses the raw bytes of that
canonical integer form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

from .exactmath import CycElt, CyclotomicField, Cyclotomic, QQ
from .matalg import mat_mul, rref
from .polyring import MultiPoly, VarContext


class CapExceeded(RuntimeError):
    pass


class ActionNotLinear(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# Heisenberg actions (monomial matrices)


@dataclass(frozen=True)
class MonomialMap:
    """e_i -> zeta^phase[i] * e_perm[i]."""

    perm: tuple
    phase: tuple
    order: int

    def compose(self, other: "MonomialMap") -> "MonomialMap":
        """self after other."""
        n = len(self.perm)
        perm = tuple(self.perm[other.perm[i]] for i in range(n))
        phase = tuple((other.phase[i] + self.phase[other.perm[i]]) % self.order for i in range(n))
        return MonomialMap(perm, phase, self.order)

    def inverse(self) -> "MonomialMap":
        n = len(self.perm)
        perm = [0] * n
        phase = [0] * n
        for i in range(n):
            perm[self.perm[i]] = i
            phase[self.perm[i]] = (-self.phase[i]) % self.order
        return MonomialMap(tuple(perm), tuple(phase), self.order)

    def power(self, k: int) -> "MonomialMap":
        out = MonomialMap.identity(len(self.perm), self.order)
        for _ in range(k):
            out = self.compose(out)
        return out

    @staticmethod
    def identity(n: int, order: int) -> "MonomialMap":
        return MonomialMap(tuple(range(n)), (0,) * n, order)

    def scalar_exponent(self):
        """k if this map is zeta^k times the identity, else None."""
        if self.perm != tuple(range(len(self.perm))) or len(set(self.phase)) != 1:
            return None
        return self.phase[0]

    def on_poly(self, f: MultiPoly, names: Sequence[str]) -> MultiPoly:
        """Substitute z_i -> zeta^phase[i] z_perm[i] in the variables ``names``."""
        F = f.field
        assign = {}
        for i, nm in enumerate(names):
            img = MultiPoly.var(f.ctx, names[self.perm[i]], F)
            if self.phase[i]:
                img = img.scale(_root(F, self.order, self.phase[i]))
            assign[nm] = img
        return f.substitute(assign, f.ctx)

    def on_point(self, x: Sequence, field) -> list:
        """Point whose coordinates are the pulled-back coordinate functions."""
        return [field.mul(_root(field, self.order, self.phase[i]), field.coerce(x[self.perm[i]]))
                for i in range(len(x))]


def _root(F, order: int, k: int):
    if k % order == 0:
        return F.one
    if isinstance(F, CyclotomicField):
        if F.n % order:
            raise ValueError(f"Q(zeta_{F.n}) lacks {order}th roots")
        return F.root_power(k * (F.n // order))
    # prime field: use the default root
    from .exactmath import root_of_unity

    return pow(root_of_unity(F.p, order), k, F.p)


@dataclass(frozen=True)
class HeisenbergAction:
    names: tuple  # generator labels
    gens: tuple  # MonomialMap per label
    order: int

    @property
    def dim(self) -> int:
        return len(self.gens[0].perm)

    def gen(self, label: str) -> MonomialMap:
        return self.gens[self.names.index(label)]

    def commutator(self, a: str, b: str) -> MonomialMap:
        g, h = self.gen(a), self.gen(b)
        return g.compose(h).compose(g.inverse()).compose(h.inverse())

    def elements(self) -> list[MonomialMap]:
        """All group elements (BFS closure; the groups here have order <= 3^5)."""
        start = MonomialMap.identity(self.dim, self.order)
        seen = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.gens:
                    y = g.compose(x)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return list(seen)


def heisenberg5(a_twist: int = 1) -> HeisenbergAction:
    """H_5 on z1..z5: sigma z_i -> z_{i+1}, tau z_i -> zeta^(a_twist*i) z_i."""
    sigma = MonomialMap(tuple((i + 1) % 5 for i in range(5)), (0,) * 5, 5)
    tau = MonomialMap(tuple(range(5)), tuple((a_twist * (i + 1)) % 5 for i in range(5)), 5)
    return HeisenbergAction(("sigma", "tau"), (sigma, tau), 5)


def affine_index(i: int, j: int) -> int:
    """0-based coordinate of x_{i,j}, i.e. z_{3i+j+1}."""
    return 3 * (i % 3) + (j % 3)


def heisenberg33() -> HeisenbergAction:
    """H_{3,2} on the nine coordinates x_{i,j}."""
    pts = [divmod(k, 3) for k in range(9)]
    s1 = MonomialMap(tuple(affine_index(i + 1, j) for i, j in pts), (0,) * 9, 3)
    s2 = MonomialMap(tuple(affine_index(i, j + 1) for i, j in pts), (0,) * 9, 3)
    t1 = MonomialMap(tuple(range(9)), tuple(i for i, _ in pts), 3)
    t2 = MonomialMap(tuple(range(9)), tuple(j for _, j in pts), 3)
    return HeisenbergAction(("sigma1", "sigma2", "tau1", "tau2"), (s1, s2, t1, t2), 3)


def iota33() -> MonomialMap:
    """x_{i,j} -> x_{-i,-j}."""
    return MonomialMap(tuple(affine_index(-i, -j) for i, j in (divmod(k, 3) for k in range(9))), (0,) * 9, 3)


# ---------------------------------------------------------------------------
# invariants in tensor / exterior powers of monomial representations


def _act_on_basis(maps: Sequence[MonomialMap], slots: Sequence[int], key: tuple):
    """Image of a basis element of (x) Lambda^k_s V_s under the given maps.

    Returns (sign, phase exponent, new key)."""
    sign = 1
    phase = 0
    out = []
    for g, grp in zip(maps, key):
        imgs = [g.perm[i] for i in grp]
        phase += sum(g.phase[i] for i in grp)
        # sort with sign
        arr = list(imgs)
        for a in range(len(arr)):
            for b in range(len(arr) - 1 - a):
                if arr[b] > arr[b + 1]:
                    arr[b], arr[b + 1] = arr[b + 1], arr[b]
                    sign = -sign
        out.append(tuple(arr))
    return sign, phase, tuple(out)


def invariant_basis(factors: Sequence[tuple[HeisenbergAction, int]], field: CyclotomicField) -> list[dict]:
    """Basis of the invariants of a tensor product of exterior powers.

    ``factors`` is a list of (action, k) meaning Lambda^k of that action; the
    actions must share generator labels.  Monomial actions permute basis lines,
    so each invariant is an orbit sum whose line stabilizer acts trivially.
    """
    acts = [a for a, _ in factors]
    order = acts[0].order
    labels = acts[0].names
    gens = [[a.gen(lbl) for a in acts] for lbl in labels]
    spaces = [list(itertools.combinations(range(a.dim), k)) for a, k in factors]
    done = set()
    basis = []
    for key in itertools.product(*spaces):
        if key in done:
            continue
        coeffs = {key: field.one}
        stack = [key]
        ok = True
        while stack:
            x = stack.pop()
            cx = coeffs[x]
            for g in gens:
                sign, ph, y = _act_on_basis(g, [k for _, k in factors], x)
                cy = field.mul(cx, _root(field, order, ph))
                if sign < 0:
                    cy = field.neg(cy)
                if y in coeffs:
                    if coeffs[y] != cy:
                        ok = False
                else:
                    coeffs[y] = cy
                    stack.append(y)
        done.update(coeffs)
        if ok:
            basis.append(coeffs)
    return basis


def heisenberg_invariants(kind: str):
    """Invariant basis for 'wedge3' ((Lambda^3 K^9)^{H_{3,2}}) or 'quintic'
    ((A (x) Lambda^2 B)^{H_5}); returns (basis, field)."""
    if kind == "wedge3":
        F = Cyclotomic(3)
        return invariant_basis([(heisenberg33(), 3)], F), F
    if kind == "quintic":
        # tau acts on A through its cube; this is the twist under which the
        # invariant space is 2-dimensional
        F = Cyclotomic(5)
        return invariant_basis([(heisenberg5(3), 1), (heisenberg5(1), 2)], F), F
    if kind == "trivial":
        triv = HeisenbergAction(("e",), (MonomialMap.identity(3, 1),), 1)
        return invariant_basis([(triv, 1)], QQ), QQ
    raise KeyError(kind)


def span_rank(vectors: Sequence[dict], field) -> int:
    keys = sorted({k for v in vectors for k in v})
    rows = [[v.get(k, field.zero) for k in keys] for v in vectors]
    return len(rref(rows, field)[1]) if rows else 0


# ---------------------------------------------------------------------------
# finite matrix groups


def structure_tensor(F: CyclotomicField) -> np.ndarray:
    d = F.degree
    T = np.zeros((d, d, d), dtype=np.int64)
    for a in range(d):
        for b in range(d):
            r = F.root_power(a + b)
            assert r.den == 1
            T[a, b] = r.num
    return T


@dataclass
class MatrixGroupGen:
    field: CyclotomicField
    mats: list  # list of square matrices of CycElt

    def __post_init__(self):
        from .matalg import determinant_values

        for m in self.mats:
            if self.field.is_zero(determinant_values(m, self.field)):
                raise ValueError("generator is singular")

    @property
    def size(self) -> int:
        return len(self.mats[0])


@dataclass
class MatrixGroup:
    field: CyclotomicField
    scale: int  # D
    elements: np.ndarray  # (N, n, n, d) integer, value = array / D
    gens: MatrixGroupGen | None = None
    _index: dict | None = dc_field(default=None, repr=False)

    def __len__(self):
        return self.elements.shape[0]

    @property
    def order(self) -> int:
        return len(self)

    def exact(self, k: int) -> list[list[CycElt]]:
        return array_to_matrix(self.elements[k], self.scale, self.field)

    def index_of(self, arr: np.ndarray) -> int | None:
        if self._index is None:
            self._index = {e.tobytes(): i for i, e in enumerate(self.elements)}
        return self._index.get(np.ascontiguousarray(arr, dtype=np.int64).tobytes())


def matrix_to_array(m, D: int, F: CyclotomicField) -> np.ndarray:
    n = len(m)
    out = np.zeros((n, len(m[0]), F.degree), dtype=np.int64)
    for i, row in enumerate(m):
        for j, x in enumerate(row):
            x = F.coerce(x)
            if D % x.den:
                raise ValueError("scale does not clear the denominator")
            out[i, j] = [c * (D // x.den) for c in x.num]
    return out


def array_to_matrix(a: np.ndarray, D: int, F: CyclotomicField):
    return [[CycElt(F, [int(v) for v in a[i, j]], D) for j in range(a.shape[1])] for i in range(a.shape[0])]


def _batch_mul(X: np.ndarray, Y: np.ndarray, T: np.ndarray, D: int) -> np.ndarray:
    """(X/D)(Y/D) * D for stacks X (N,n,n,d) and a single Y (n,n,d)."""
    P = np.einsum("nija,jkb,abc->nikc", X, Y, T, optimize=True)
    if (P % D).any():
        raise ArithmeticError("scale too small for exact products")
    return P // D


def _common_scale(mats, F) -> int:
    den = 1
    for m in mats:
        for row in m:
            for x in row:
                x = F.coerce(x)
                den = den * x.den // gcd(den, x.den)
    return den


def enumerate_group(gens: MatrixGroupGen, cap: int = 10**6, scale: int | None = None) -> MatrixGroup:
    """BFS closure of the generated group.

    The working scale starts at the generator denominators and is multiplied
    by that base until every product is integral."""
    F = gens.field
    base = _common_scale(gens.mats, F)
    D = scale or max(base, 1)
    for _ in range(8):
        try:
            return _enumerate(gens, D, cap)
        except ArithmeticError:
            D *= max(base, 2)
    raise ArithmeticError("could not find an exact working scale")


def _enumerate(gens: MatrixGroupGen, D: int, cap: int) -> MatrixGroup:
    F = gens.field
    T = structure_tensor(F)
    n = gens.size
    G = [matrix_to_array(m, D, F) for m in gens.mats]
    ident = np.zeros((n, n, F.degree), dtype=np.int64)
    for i in range(n):
        ident[i, i, 0] = D
    seen = {ident.tobytes()}
    elems = [ident]
    frontier = ident[None]
    while len(frontier):
        new = []
        for g in G:
            P = _batch_mul(frontier, g, T, D)
            for e in P:
                key = e.tobytes()
                if key not in seen:
                    seen.add(key)
                    new.append(e)
                    if len(seen) > cap:
                        raise CapExceeded(f"group exceeds cap {cap}")
        elems.extend(new)
        frontier = np.array(new, dtype=np.int64) if new else np.zeros((0, n, n, F.degree), dtype=np.int64)
    return MatrixGroup(F, D, np.array(elems, dtype=np.int64), gens)


# ---------------------------------------------------------------------------
# concrete generators


def g16_generators() -> MatrixGroupGen:
    F = Cyclotomic(5)
    z = F.gen()
    one = F.one
    mu = [[F.zero, -one], [one, F.zero]]

    def c(*k):  # sum of k_i zeta^i, i = 1..4
        return sum((F.from_int(ki) * z ** (i + 1) for i, ki in enumerate(k)), F.zero)

    fifth = F.from_fraction(Fraction(1, 5))
    nu = [
        [c(4, 3, 2, 1) * fifth, c(-2, -4, -1, -3) * fifth],
        [c(-2, 1, -1, -3) * fifth, c(1, 2, 3, -1) * fifth],
    ]
    return MatrixGroupGen(F, [mu, nu])


def g32_generators() -> MatrixGroupGen:
    F = Cyclotomic(3)
    w = F.gen()
    z, o = F.zero, F.one
    mu = [[o, z, z, z], [z, -o, z, z], [z, z, z, -o], [z, z, -o, z]]
    mu = [[-w * x for x in r] for r in mu]
    s = F.inv(w - w * w)
    nu = [
        [z, o, o, o],
        [z, o, -w - 1, w],
        [z, -o, -w, w + 1],
        [-2 * w - 1, z, z, z],
    ]
    nu = [[s * x for x in r] for r in nu]
    return MatrixGroupGen(F, [mu, nu])


# ---------------------------------------------------------------------------
# reflections


def _minus_identity(G: MatrixGroup) -> np.ndarray:
    A = G.elements.copy()
    n = A.shape[1]
    for i in range(n):
        A[:, i, i, 0] -= G.scale
    return A


def _cyc_prod(X, Y, T):
    return np.einsum("...a,...b,abc->...c", X, Y, T)


def reflections(G: MatrixGroup) -> list[int]:
    """Indices of elements g with rank(g - 1) = 1."""
    T = structure_tensor(G.field)
    A = _minus_identity(G)
    n = A.shape[1]
    nonzero = A.reshape(len(A), -1).any(axis=1)
    rank_le_1 = np.ones(len(A), dtype=bool)
    for (i, k) in itertools.combinations(range(n), 2):
        for (j, l) in itertools.combinations(range(n), 2):
            m = _cyc_prod(A[:, i, j], A[:, k, l], T) - _cyc_prod(A[:, i, l], A[:, k, j], T)
            rank_le_1 &= ~m.any(axis=1)
    return [int(k) for k in np.flatnonzero(nonzero & rank_le_1)]


def canonical_rows(rows, F) -> tuple:
    """RREF with pivot entries 1, zero rows dropped, as a hashable tuple."""
    red, piv = rref(rows, F)
    return tuple(tuple(r) for r in red[: len(piv)])


def reflection_hyperplane(G: MatrixGroup, k: int) -> tuple:
    """Linear form (up to scalar) cutting out the fixed hyperplane of g_k."""
    m = G.exact(k)
    F = G.field
    n = len(m)
    rows = [[F.sub(m[i][j], F.one if i == j else F.zero) for j in range(n)] for i in range(n)]
    return canonical_rows(rows, F)[0]


def hyperplanes(G: MatrixGroup, refl: Sequence[int] | None = None) -> list[tuple]:
    refl = reflections(G) if refl is None else refl
    seen = {}
    for k in refl:
        h = reflection_hyperplane(G, k)
        seen.setdefault(h, 0)
        seen[h] += 1
    return list(seen)


def element_order(G: MatrixGroup, k: int, limit: int = 1000) -> int:
    T = structure_tensor(G.field)
    g = G.elements[k]
    x = g[None]
    ident = np.zeros_like(g)
    for i in range(g.shape[0]):
        ident[i, i, 0] = G.scale
    for o in range(1, limit):
        if np.array_equal(x[0], ident):
            return o
        x = _batch_mul(x, g, T, G.scale)
    raise RuntimeError("order exceeds limit")


# ---------------------------------------------------------------------------
# flats


@dataclass(frozen=True)
class Flat:
    equations: tuple  # canonical RREF rows

    @property
    def codim(self) -> int:
        return len(self.equations)


def flats_by_codim(forms: Sequence[tuple], F, max_codim: int) -> dict[int, list[Flat]]:
    """All intersections of the hyperplanes, grouped by codimension."""
    out = {1: [Flat(canonical_rows([list(h)], F)) for h in forms]}
    out[1] = list(dict.fromkeys(out[1]))
    for c in range(2, max_codim + 1):
        found = {}
        for fl in out[c - 1]:
            for h in forms:
                eqs = canonical_rows([list(r) for r in fl.equations] + [list(h)], F)
                if len(eqs) == c:
                    found[Flat(eqs)] = None
        out[c] = list(found)
    return out


def _inverse(m, F):
    n = len(m)
    aug = [list(r) + [F.one if i == j else F.zero for j in range(n)] for i, r in enumerate(m)]
    red, piv = rref(aug, F)
    if piv != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [r[n:] for r in red]


def act_on_flat(fl: Flat, g_inv, F) -> Flat:
    """Image of {c : L c = 0} under c -> g c has equations L g^{-1}."""
    rows = mat_mul([list(r) for r in fl.equations], g_inv, F)
    return Flat(canonical_rows(rows, F))


def flat_orbits(gens: MatrixGroupGen, flats: Sequence[Flat]) -> list[list[Flat]]:
    """Partition flats into orbits (generator BFS suffices for a finite group)."""
    F = gens.field
    invs = [_inverse(m, F) for m in gens.mats]
    remaining = dict.fromkeys(flats)
    orbits = []
    while remaining:
        start = next(iter(remaining))
        orb = {start: None}
        stack = [start]
        while stack:
            x = stack.pop()
            for gi in invs:
                y = act_on_flat(x, gi, F)
                if y not in orb:
                    orb[y] = None
                    stack.append(y)
        for x in orb:
            remaining.pop(x, None)
        orbits.append(list(orb))
    return orbits


def flat_kernel(fl: Flat, n: int, F) -> list[list]:
    """Basis of the subspace {c : L c = 0}."""
    from .matalg import rank_kernel

    return rank_kernel([list(r) for r in fl.equations], F)[1]


def pointwise_stabilizer_order(G: MatrixGroup, fl: Flat) -> int:
    """Number of group elements fixing every vector of the flat."""
    F = G.field
    T = structure_tensor(F)
    n = G.elements.shape[1]
    K = flat_kernel(fl, n, F)
    A = _minus_identity(G)
    ok = np.ones(len(A), dtype=bool)
    for v in K:
        den = 1
        for x in v:
            den = den * x.den // gcd(den, x.den)
        vec = np.array([[c * (den // x.den) for c in x.num] for x in v], dtype=np.int64)
        img = np.einsum("nija,jb,abc->nic", A, vec, T)
        ok &= ~img.reshape(len(A), -1).any(axis=1)
    return int(ok.sum())


def flat_contains_point(fl: Flat, point, F) -> bool:
    return all(F.is_zero(sum((F.mul(a, F.coerce(b)) for a, b in zip(r, point)), F.zero)) for r in fl.equations)


def flat_from_equations(rows, F) -> Flat:
    return Flat(canonical_rows([[F.coerce(x) for x in r] for r in rows], F))


def orbit_table(G: MatrixGroup, max_codim: int = 3, forms=None) -> list[dict]:
    """Orbit sizes with pointwise-stabilizer orders and representatives, by codimension."""
    F = G.field
    forms = hyperplanes(G) if forms is None else forms
    table = []
    byc = flats_by_codim(forms, F, max_codim)
    for c in range(1, max_codim + 1):
        for orb in flat_orbits(G.gens, byc[c]):
            rep = orb[0]
            table.append({
                "codim": c,
                "size": len(orb),
                "stabilizer": pointwise_stabilizer_order(G, rep),
                "representative": rep,
                "orbit": orb,
            })
    return table


# ---------------------------------------------------------------------------
# the induced action on a space of polynomials


def linear_action_matrix(polys: Sequence[MultiPoly], g, names: Sequence[str]) -> list[list]:
    """M with f_i(g^{-1} c) = sum_j M[j][i] f_j(c); raises if the span is not preserved."""
    F = polys[0].field
    ctx = polys[0].ctx
    ginv = _inverse(g, F)
    cvars = [MultiPoly.var(ctx, nm, F) for nm in names]
    assign = {}
    for i, nm in enumerate(names):
        acc = MultiPoly.zero(ctx, F)
        for j in range(len(names)):
            if not F.is_zero(ginv[i][j]):
                acc = acc + cvars[j].scale(ginv[i][j])
        assign[nm] = acc
    images = [f.substitute(assign, ctx) for f in polys]
    monos = sorted({e for f in polys + images for e in f.terms})
    # solve sum_j x_j f_j = image
    cols = [[f.coefficient(e) for f in polys] for e in monos]
    M = [[F.zero] * len(polys) for _ in polys]
    for i, img in enumerate(images):
        aug = [row + [img.coefficient(e)] for row, e in zip(cols, monos)]
        red, piv = rref(aug, F)
        if len(polys) in piv:
            raise ActionNotLinear("image leaves the span")
        for r, pc in enumerate(piv):
            M[pc][i] = red[r][len(polys)]
    return M


def macdonald_rep(gens: MatrixGroupGen, gammas: Sequence[MultiPoly], names=("c1", "c2", "c3", "c4")) -> MatrixGroupGen:
    """5x5 matrices M(g) for each generator, with gamma_i(g^{-1} c) = sum_j M(g)_{ji} gamma_j(c)."""
    F = gens.field
    lifted = [f.map_coefficients(F.coerce, F) for f in gammas]
    return MatrixGroupGen(F, [linear_action_matrix(lifted, g, names) for g in gens.mats])


def scalar_count(G: MatrixGroup) -> int:
    """Number of scalar matrices in the group."""
    A = G.elements
    n = A.shape[1]
    off = A.copy()
    for i in range(n):
        off[:, i, i] = 0
    diag_equal = np.all(A[:, np.arange(n), np.arange(n)] == A[:, :1, :1].reshape(len(A), 1, -1), axis=(1, 2))
    return int((~off.reshape(len(A), -1).any(axis=1) & diag_equal).sum())


def projective_orbit(G: MatrixGroup, point: Sequence, transpose: bool = True) -> set:
    """Orbit of a projective point under the group (acting by M^T when ``transpose``)."""
    F = G.field
    T = structure_tensor(F)
    den = 1
    vals = [F.coerce(x) for x in point]
    for x in vals:
        den = den * x.den // gcd(den, x.den)
    vec = np.array([[c * (den // x.den) for c in x.num] for x in vals], dtype=np.int64)
    spec = "njia,jb,abc->nic" if transpose else "nija,jb,abc->nic"
    imgs = np.einsum(spec, G.elements, vec, T)
    out = set()
    for v in imgs:
        exact = [CycElt(F, [int(t) for t in v[i]]) for i in range(len(v))]
        lead = next(x for x in exact if not x.is_zero())
        inv = F.inv(lead)
        out.add(tuple(F.mul(x, inv) for x in exact))
    return out


# ---------------------------------------------------------------------------
# reports

from functools import lru_cache  # noqa: E402

from .report import VerificationReport  # noqa: E402

# printed Cartan basis of A (x) Lambda^2 B: (sign, a index, b pair), 1-based
QUINTIC_H = (
    ((1, 1, (3, 4)), (1, 2, (4, 5)), (-1, 3, (1, 5)), (1, 4, (1, 2)), (1, 5, (2, 3))),
    ((-1, 1, (2, 5)), (1, 2, (1, 3)), (1, 3, (2, 4)), (1, 4, (3, 5)), (-1, 5, (1, 4))),
)


@lru_cache(maxsize=None)
def g16() -> MatrixGroup:
    return enumerate_group(g16_generators())


@lru_cache(maxsize=None)
def g32() -> MatrixGroup:
    return enumerate_group(g32_generators())


def _same_span(a: Sequence[dict], b: Sequence[dict], F) -> tuple[int, int, int]:
    ra, rb = span_rank(a, F), span_rank(b, F)
    return ra, rb, span_rank(list(a) + list(b), F)


def heisenberg_report() -> VerificationReport:
    """Commutator laws, group orders, the involution on P_B / P_M and the Cartan invariants."""
    from .abelian33 import H_LINES, IOTA_PAIRS

    rep = VerificationReport("groups.heisenberg")
    with rep.timed():
        h5 = heisenberg5()
        k = h5.commutator("sigma", "tau").scalar_exponent()
        rep.expect("H5 commutator is a primitive 5th root", k is not None and k % 5 != 0, k)
        h33 = heisenberg33()
        for a, b, central in (("sigma1", "tau1", True), ("sigma2", "tau2", True),
                              ("sigma1", "tau2", False), ("sigma2", "tau1", False),
                              ("sigma1", "sigma2", False), ("tau1", "tau2", False)):
            k = h33.commutator(a, b).scalar_exponent()
            want = (k is not None and k % 3 != 0) if central else k == 0
            rep.expect(f"[{a},{b}]", want, k)
        els = h33.elements()
        proj = {(m.perm, tuple((x - m.phase[0]) % 3 for x in m.phase)) for m in els}
        rep.counts["H33 order"] = len(els)
        rep.counts["H33 projective"] = len(proj)
        rep.expect("|H_{3,2}| = 243", len(els) == 243)
        rep.expect("81 projective images", len(proj) == 81)
        rep.expect("|H_5| = 125", len(h5.elements()) == 125)

        # iota: +1 on P_B, -1 on P_M
        io = iota33()
        pb = [0] * 9
        pm = [0] * 9
        pb[0] = 7
        for t, (a, b) in enumerate(IOTA_PAIRS):
            pb[a - 1] = pb[b - 1] = t + 2
            pm[a - 1], pm[b - 1] = t + 2, -(t + 2)
        rep.expect("iota = +1 on P_B", io.on_point(pb, QQ) == [QQ.coerce(x) for x in pb])
        rep.expect("iota = -1 on P_M", io.on_point(pm, QQ) == [QQ.coerce(-x) for x in pm])

        basis, F = heisenberg_invariants("wedge3")
        printed = [{(tuple(i - 1 for i in line),): F.one for line in lines} for lines in H_LINES]
        ra, rb, rab = _same_span(basis, printed, F)
        rep.counts["wedge3 invariants"] = ra
        rep.expect("(wedge^3)^H has dimension 4", ra == 4)
        rep.expect("spanned by h1..h4", rb == 4 and rab == 4, (ra, rb, rab))

        basis, F = heisenberg_invariants("quintic")
        printed = [{((a - 1,), (j - 1, k - 1)): F.from_int(s) for s, a, (j, k) in h} for h in QUINTIC_H]
        ra, rb, rab = _same_span(basis, printed, F)
        rep.counts["quintic invariants"] = ra
        rep.expect("(A x wedge^2 B)^H5 has dimension 2", ra == 2)
        rep.expect("spanned by the printed h1, h2", rb == 2 and rab == 2, (ra, rb, rab))

        triv, _ = heisenberg_invariants("trivial")
        rep.expect("trivial group: everything invariant", len(triv) == 3)
    return rep


def g16_report() -> VerificationReport:
    rep = VerificationReport("groups.g16")
    with rep.timed():
        G = g16()
        refl = reflections(G)
        hyp = hyperplanes(G, refl)
        rep.counts.update(order=len(G), reflections=len(refl), lines=len(hyp), scalars=scalar_count(G))
        rep.expect("order 600", len(G) == 600)
        rep.expect("12 reflection lines", len(hyp) == 12)
        rep.expect("centre Z/10", scalar_count(G) == 10)
    return rep


def g32_report() -> VerificationReport:
    """Order, reflections, hyperplanes and the factorization of the discriminant."""
    from .abelian33 import C4, CN, discriminant_factors

    rep = VerificationReport("groups.g32")
    with rep.timed():
        G = g32()
        refl = reflections(G)
        orders = sorted({element_order(G, k) for k in refl})
        hyp = hyperplanes(G, refl)
        rep.counts.update(order=len(G), reflections=len(refl), reflection_orders=orders,
                          hyperplanes=len(hyp), scalars=scalar_count(G))
        rep.expect("order 155520", len(G) == 155520)
        rep.expect("80 reflections", len(refl) == 80)
        rep.expect("all of order 3", orders == [3], orders)
        rep.expect("40 hyperplanes", len(hyp) == 40)
        rep.expect("centre Z/6", scalar_count(G) == 6)

        F = G.field
        rest = [f.map_coefficients(F.coerce, F) for f in discriminant_factors(C4)]
        matched = 0
        for L in hyp:
            lp = MultiPoly.zero(C4, F)
            for nm, x in zip(CN, L):
                if not F.is_zero(x):
                    lp = lp + MultiPoly.var(C4, nm, F).scale(x)
            for i, f in enumerate(rest):
                try:
                    rest[i] = f.divide_exact(lp)
                except ArithmeticError:
                    continue
                matched += 1
                break
        leftover = [f.degree(CN) for f in rest]
        rep.counts["forms dividing Delta"] = matched
        rep.expect("product of the 40 forms = Delta up to scalar",
                   matched == 40 and leftover == [0] * len(rest), leftover)
        triv = enumerate_group(MatrixGroupGen(F, [[[F.one if i == j else F.zero for j in range(4)] for i in range(4)]]))
        rep.expect("trivial group has no reflections", len(triv) == 1 and reflections(triv) == [])
    return rep


# (codim, size, pointwise stabilizer)
ORBIT_TABLE = ((1, 40, 3), (2, 240, 9), (2, 90, 24), (3, 360, 72), (3, 40, 648))
ORBIT_REPS = {
    (1, 40): [[0, 0, 0, 1]],
    (2, 240): [[0, 0, 1, 0], [0, 0, 0, 1]],
    (2, 90): [[0, 1, 1, 0], [0, 0, 0, 1]],
}


def orbit_rows(G: MatrixGroup | None = None, max_codim: int = 3) -> list[dict]:
    """The flat orbit table in exportable form."""
    G = g32() if G is None else G
    rows = []
    for r in orbit_table(G, max_codim):
        rows.append({
            "codim": r["codim"],
            "size": r["size"],
            "stabilizer": r["stabilizer"],
            "representative": [[x.render() if hasattr(x, "render") else str(x) for x in row]
                               for row in r["representative"].equations],
        })
    return rows


def orbits_report() -> VerificationReport:
    rep = VerificationReport("groups.orbits")
    with rep.timed():
        G = g32()
        table = orbit_table(G, 3)
        got = sorted((r["codim"], r["size"], r["stabilizer"]) for r in table)
        rep.counts["table"] = got
        rep.expect("orbit sizes and stabilizers", got == sorted(ORBIT_TABLE), got)
        for r in table:
            rep.expect(f"orbit-stabilizer codim {r['codim']} size {r['size']}",
                       len(G) % r["stabilizer"] == 0)
        F = G.field
        for (c, size), eqs in ORBIT_REPS.items():
            fl = flat_from_equations(eqs, F)
            hit = [r for r in table if fl in r["orbit"]]
            rep.expect(f"representative {eqs} in orbit of size {size}",
                       len(hit) == 1 and hit[0]["size"] == size and hit[0]["codim"] == c,
                       [h["size"] for h in hit])
    return rep


def macdonald_report() -> VerificationReport:
    """5-dimensional action on the gammas: image PSp4(F3) and the 160-point orbit."""
    from .abelian33 import C4, gammas

    rep = VerificationReport("groups.macdonald")
    with rep.timed():
        gens = macdonald_rep(g32_generators(), gammas(C4))
        M = enumerate_group(gens)
        sc = scalar_count(M)
        rep.counts.update(linear_order=len(M), scalars=sc, projective_order=len(M) // sc)
        rep.expect("projective image of order 25920", len(M) == 25920 * sc)
        orb = projective_orbit(M, [0, 0, 0, 0, 1])
        rep.counts["orbit of [0:0:0:0:1]"] = len(orb)
        rep.expect("orbit of 160 points", len(orb) == 160)
        F = gens.field
        ident = [[F.one if i == j else F.zero for j in range(4)] for i in range(4)]
        m = linear_action_matrix([f.map_coefficients(F.coerce, F) for f in gammas(C4)], ident,
                                 ("c1", "c2", "c3", "c4"))
        rep.expect("identity acts as identity",
                   all(m[i][j] == (F.one if i == j else F.zero) for i in range(5) for j in range(5)))
    return rep
