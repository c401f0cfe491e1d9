"""Sparse multivariate polynomials over the fields of :mod:`exactmath`."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactmath import QQ, CyclotomicField, Field, Scalar, GF, to_prime_field


class ContextMismatch(ValueError):
    pass


class UnknownVariable(KeyError):
    pass


@dataclass(frozen=True)
class VarContext:
    names: tuple[str, ...]
    index: dict = dc_field(init=False, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be unique")
        object.__setattr__(self, "index", {n: i for i, n in enumerate(self.names)})

    @classmethod
    def of(cls, *groups: str | Sequence[str]) -> "VarContext":
        """``VarContext.of("c1..c4", "z1..z9")`` or explicit names."""
        names: list[str] = []
        for g in groups:
            if isinstance(g, str):
                m = re.fullmatch(r"([A-Za-z_]+)(\d+)\.\.\1?(\d+)", g)
                if m:
                    names += [f"{m.group(1)}{k}" for k in range(int(m.group(2)), int(m.group(3)) + 1)]
                else:
                    names += g.split()
            else:
                names += list(g)
        return cls(tuple(names))

    def __len__(self):
        return len(self.names)

    def pos(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise UnknownVariable(name) from None

    def __contains__(self, name):
        return name in self.index


def grevlex_key(e: tuple[int, ...]):
    return (sum(e), tuple(-x for x in reversed(e)))


class MultiPoly:
    """Immutable sparse polynomial: {exponent tuple: nonzero raw coefficient}."""

    __slots__ = ("ctx", "field", "terms", "_hash")

    def __init__(self, ctx: VarContext, field: Field, terms: Mapping | None = None, _trusted=False):
        self.ctx = ctx
        self.field = field
        if _trusted:
            self.terms = terms
        else:
            clean = {}
            n = len(ctx)
            for e, c in (terms or {}).items():
                e = tuple(e)
                if len(e) != n:
                    raise ContextMismatch("exponent length differs from context size")
                c = field.coerce(c.value if isinstance(c, Scalar) else c)
                if not field.is_zero(c):
                    clean[e] = c
            self.terms = clean
        self._hash = None

    # construction ------------------------------------------------------
    @classmethod
    def zero(cls, ctx, field=QQ):
        return cls(ctx, field, {}, _trusted=True)

    @classmethod
    def const(cls, ctx, value, field=QQ):
        return cls(ctx, field, {(0,) * len(ctx): value})

    @classmethod
    def var(cls, ctx, name, field=QQ):
        e = [0] * len(ctx)
        e[ctx.pos(name)] = 1
        return cls(ctx, field, {tuple(e): field.one}, _trusted=True)

    @classmethod
    def monomial(cls, ctx, exps: Sequence[int], coef=1, field=QQ):
        return cls(ctx, field, {tuple(exps): coef})

    def _like(self, terms):
        return MultiPoly(self.ctx, self.field, terms, _trusted=True)

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.ctx != self.ctx:
                raise ContextMismatch(f"{self.ctx.names} vs {other.ctx.names}")
            if other.field != self.field:
                raise ContextMismatch(f"field {self.field!r} vs {other.field!r}")
            return other
        if isinstance(other, Scalar):
            other = other.value
        return MultiPoly.const(self.ctx, other, self.field)

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = F.add(out[e], c)
                if F.is_zero(s):
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return self._like({e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        F = self.field
        out: dict = {}
        if len(other.terms) == 1 and not any(next(iter(other.terms))):
            c0 = next(iter(other.terms.values()))
            return self._like({e: F.mul(c, c0) for e, c in self.terms.items()})
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = F.mul(c1, c2)
                if e in out:
                    out[e] = F.add(out[e], c)
                else:
                    out[e] = c
        return self._like({e: c for e, c in out.items() if not F.is_zero(c)})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.const(self.ctx, self.field.one, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c):
        return self * MultiPoly.const(self.ctx, c, self.field)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(self.ctx, other, self.field)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.ctx == other.ctx and self.field == other.field and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx.names, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    # structure -----------------------------------------------------------
    def degree(self, vars: Iterable[str] | None = None) -> int:
        if not self.terms:
            return -1
        if vars is None:
            return max(sum(e) for e in self.terms)
        idx = [self.ctx.pos(v) for v in vars]
        return max(sum(e[i] for i in idx) for e in self.terms)

    def is_homogeneous(self, vars: Iterable[str] | None = None) -> bool:
        if vars is None:
            degs = {sum(e) for e in self.terms}
        else:
            idx = [self.ctx.pos(v) for v in vars]
            degs = {sum(e[i] for i in idx) for e in self.terms}
        return len(degs) <= 1

    def bidegree(self, first: Iterable[str], second: Iterable[str]) -> set[tuple[int, int]]:
        a = [self.ctx.pos(v) for v in first]
        b = [self.ctx.pos(v) for v in second]
        return {(sum(e[i] for i in a), sum(e[i] for i in b)) for e in self.terms}

    def variables(self) -> list[str]:
        used = set()
        for e in self.terms:
            used.update(i for i, x in enumerate(e) if x)
        return [self.ctx.names[i] for i in sorted(used)]

    def coefficient(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), self.field.zero)

    def coeff_of(self, **powers) -> object:
        e = [0] * len(self.ctx)
        for k, v in powers.items():
            e[self.ctx.pos(k)] = v
        return self.coefficient(e)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def leading_term(self):
        return self.sorted_terms()[0]

    def coefficients_in(self, vars: Sequence[str]) -> dict[tuple[int, ...], "MultiPoly"]:
        """Split as sum over monomials m in ``vars`` of m * (coefficient polynomial)."""
        idx = [self.ctx.pos(v) for v in vars]
        out: dict = {}
        for e, c in self.terms.items():
            key = tuple(e[i] for i in idx)
            rest = list(e)
            for i in idx:
                rest[i] = 0
            out.setdefault(key, {})[tuple(rest)] = c
        return {k: self._like(v) for k, v in out.items()}

    def homogeneous_component(self, d: int, vars: Iterable[str] | None = None) -> "MultiPoly":
        if vars is None:
            return self._like({e: c for e, c in self.terms.items() if sum(e) == d})
        idx = [self.ctx.pos(v) for v in vars]
        return self._like({e: c for e, c in self.terms.items() if sum(e[i] for i in idx) == d})

    # calculus / substitution --------------------------------------------
    def differentiate(self, var: str) -> "MultiPoly":
        i = self.ctx.pos(var)
        F = self.field
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                c2 = F.mul(c, F.from_int(k))
                if not F.is_zero(c2):
                    e2 = list(e)
                    e2[i] = k - 1
                    out[tuple(e2)] = c2
        return self._like(out)

    def substitute(self, assignment: Mapping[str, "MultiPoly"], target: VarContext | None = None) -> "MultiPoly":
        """Simultaneous substitution; unassigned variables map to themselves in ``target``."""
        if target is None:
            vals = list(assignment.values())
            target = vals[0].ctx if vals else self.ctx
        for name in assignment:
            self.ctx.pos(name)
        for v in assignment.values():
            if v.ctx != target:
                raise ContextMismatch("assignment polynomials must share one context")
        images = []
        for name in self.ctx.names:
            if name in assignment:
                img = assignment[name]
                if img.field != self.field:
                    raise ContextMismatch("assignment field differs")
                images.append(img)
            else:
                images.append(None)
        needed = [i for i, img in enumerate(images) if img is None and any(e[i] for e in self.terms)]
        for i in needed:
            images[i] = MultiPoly.var(target, self.ctx.names[i], self.field)
        return _compose(self, images, target)

    def specialize(self, values: Mapping[str, object], target: VarContext) -> "MultiPoly":
        """Plug field values into some variables, landing in ``target``."""
        F = self.field
        vals = {self.ctx.pos(k): F.coerce(v.value if isinstance(v, Scalar) else v) for k, v in values.items()}
        keep = [(i, target.pos(n)) for i, n in enumerate(self.ctx.names) if i not in vals]
        out: dict = {}
        for e, c in self.terms.items():
            for i, x in vals.items():
                if e[i]:
                    c = F.mul(c, F.pow(x, e[i]))
            if F.is_zero(c):
                continue
            e2 = [0] * len(target)
            for i, j in keep:
                e2[j] = e[i]
            e2 = tuple(e2)
            out[e2] = F.add(out[e2], c) if e2 in out else c
        return MultiPoly(target, F, {e: c for e, c in out.items() if not F.is_zero(c)}, _trusted=True)

    def eval_raw(self, point: Sequence):
        F = self.field
        if len(point) != len(self.ctx):
            raise ContextMismatch("point length differs from context size")
        pts = [F.coerce(x.value if isinstance(x, Scalar) else x) for x in point]
        cache: dict = {}
        acc = F.zero
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    pw = cache.get(key)
                    if pw is None:
                        pw = cache[key] = F.pow(pts[i], k)
                    t = F.mul(t, pw)
            acc = F.add(acc, t)
        return acc

    def evaluate(self, point: Sequence) -> Scalar:
        return Scalar(self.field, self.eval_raw(point))

    def map_coefficients(self, fn, field: Field) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            c2 = fn(c)
            if not field.is_zero(c2):
                out[e] = c2
        return MultiPoly(self.ctx, field, out, _trusted=True)

    def reduce_mod(self, p: int) -> "MultiPoly":
        """Image over F_p (cyclotomic generators sent to the default roots)."""
        return self.map_coefficients(lambda c: to_prime_field(c, p), GF(p))

    def change_context(self, target: VarContext) -> "MultiPoly":
        """Re-index into a context containing every variable actually used."""
        used = {i for e in self.terms for i, x in enumerate(e) if x}
        idx = [(i, target.pos(self.ctx.names[i])) for i in sorted(used)]
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * len(target)
            for i, j in idx:
                e2[j] = e[i]
            out[tuple(e2)] = c
        return MultiPoly(target, self.field, out, _trusted=True)

    def divide_exact(self, g: "MultiPoly") -> "MultiPoly":
        """Quotient f/g when g divides f exactly; raises otherwise."""
        q, r = divmod_leading(self, g)
        if r:
            raise ArithmeticError("division not exact")
        return q

    def monic_scale(self):
        """(c, f/c) with c the leading grevlex coefficient."""
        _, c = self.leading_term()
        return c, self.scale(self.field.inv(c))

    # text / json ---------------------------------------------------------
    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                (n if k == 1 else f"{n}^{k}") for n, k in zip(self.ctx.names, e) if k
            )
            cs = _render_coef(self.field, c)
            neg = cs.startswith("-")
            body = cs[1:] if neg else cs
            if mono:
                if body == "1":
                    body = mono
                else:
                    body = f"{body}*{mono}"
            parts.append(("-" if neg else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += sign + body
        return s

    __str__ = render

    def __repr__(self):
        return f"MultiPoly({self.render()})"

    def to_json(self):
        return [[list(e), _render_coef(self.field, c)] for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data, ctx: VarContext, field: Field = QQ) -> "MultiPoly":
        return cls(ctx, field, {tuple(e): _parse_coef(field, s) for e, s in data})

    @classmethod
    def parse(cls, text: str, ctx: VarContext, field: Field = QQ) -> "MultiPoly":
        return parse_poly(text, ctx, field)


def _render_coef(F: Field, c) -> str:
    s = F.render(c)
    if isinstance(F, CyclotomicField):
        if not any(c.num[1:]):
            return s
        return f"({s})"
    return s


def _parse_coef(F: Field, s: str):
    return F.parse(s)


def _compose(f: MultiPoly, images: list, target: VarContext) -> MultiPoly:
    F = f.field
    cache: dict = {}

    def power(i, k):
        key = (i, k)
        if key not in cache:
            if k == 1:
                cache[key] = images[i]
            else:
                half = power(i, k // 2)
                sq = half * half
                cache[key] = sq * images[i] if k % 2 else sq
        return cache[key]

    acc: dict = {}
    one_e = (0,) * len(target)
    for e, c in f.terms.items():
        t = MultiPoly(target, F, {one_e: c}, _trusted=True)
        for i, k in enumerate(e):
            if k:
                t = t * power(i, k)
        for e2, c2 in t.terms.items():
            if e2 in acc:
                acc[e2] = F.add(acc[e2], c2)
            else:
                acc[e2] = c2
    return MultiPoly(target, F, {e: c for e, c in acc.items() if not F.is_zero(c)}, _trusted=True)


def divmod_leading(f: MultiPoly, g: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    """Multivariate division by a single polynomial using grevlex leading terms."""
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    F = f.field
    lt_e, lt_c = g.leading_term()
    inv = F.inv(lt_c)
    q: dict = {}
    rem: dict = {}
    work = dict(f.terms)
    while work:
        e = max(work, key=grevlex_key)
        c = work.pop(e)
        if all(a >= b for a, b in zip(e, lt_e)):
            qe = tuple(a - b for a, b in zip(e, lt_e))
            qc = F.mul(c, inv)
            q[qe] = qc
            for ge, gc in g.terms.items():
                if ge == lt_e:
                    continue
                te = tuple(a + b for a, b in zip(qe, ge))
                v = F.sub(work.get(te, F.zero), F.mul(qc, gc))
                if F.is_zero(v):
                    work.pop(te, None)
                else:
                    work[te] = v
        else:
            rem[e] = c
    return MultiPoly(f.ctx, F, q, _trusted=True), MultiPoly(f.ctx, F, rem, _trusted=True)


def _split_top(text: str) -> list[str]:
    """Split at top-level '+'/'-' keeping signs attached to the term."""
    out, depth, cur = [], 0, ""
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and cur and cur[-1] not in "^*/":
            out.append(cur)
            cur = ch
            continue
        cur += ch
    if cur:
        out.append(cur)
    return out


def parse_poly(text: str, ctx: VarContext, field: Field = QQ) -> MultiPoly:
    """Parse the ``coef*var^exp`` grammar (also tolerates bare monomials and '−')."""
    text = text.replace(" ", "").replace("−", "-")
    if text in ("", "0"):
        return MultiPoly.zero(ctx, field)
    terms: dict = {}
    n = len(ctx)
    for chunk in _split_top(text):
        sign = 1
        while chunk and chunk[0] in "+-":
            if chunk[0] == "-":
                sign = -sign
            chunk = chunk[1:]
        coef = field.from_int(sign)
        e = [0] * n
        for factor in _split_factors(chunk):
            if factor.startswith("("):
                coef = field.mul(coef, field.parse(factor))
                continue
            m = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?", factor)
            if m and m.group(1) in ctx:
                e[ctx.pos(m.group(1))] += int(m.group(2) or 1)
            elif m and not re.fullmatch(r"\d+", factor):
                if isinstance(field, CyclotomicField) and m.group(1) == field.gen_name:
                    coef = field.mul(coef, field.parse(factor))
                else:
                    raise UnknownVariable(m.group(1))
            else:
                coef = field.mul(coef, field.coerce(Fraction(factor)))
        et = tuple(e)
        terms[et] = field.add(terms[et], coef) if et in terms else coef
    return MultiPoly(ctx, field, terms)


def _split_factors(chunk: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in chunk:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "*" and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    if cur:
        out.append(cur)
    return out


def poly_arith(f: MultiPoly, g: MultiPoly, op: str) -> MultiPoly:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown op {op!r}")


class PolyRing:
    """Convenience bundle of a context and a field, with variable accessors."""

    def __init__(self, ctx: VarContext, field: Field = QQ):
        self.ctx = ctx
        self.field = field

    def var(self, name: str) -> MultiPoly:
        return MultiPoly.var(self.ctx, name, self.field)

    def vars(self, names: Iterable[str] | None = None) -> list[MultiPoly]:
        return [self.var(n) for n in (names if names is not None else self.ctx.names)]

    def const(self, value) -> MultiPoly:
        return MultiPoly.const(self.ctx, value, self.field)

    def zero(self) -> MultiPoly:
        return MultiPoly.zero(self.ctx, self.field)

    def one(self) -> MultiPoly:
        return self.const(self.field.one)

    def parse(self, text: str) -> MultiPoly:
        return parse_poly(text, self.ctx, self.field)

    def __getitem__(self, name: str) -> MultiPoly:
        return self.var(name)


def monomials_of_degree(n: int, d: int) -> list[tuple[int, ...]]:
    """All exponent vectors of length n and total degree d (lexicographic)."""
    if n == 0:
        return [()] if d == 0 else []
    if n == 1:
        return [(d,)]
    out = []
    for a in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - a):
            out.append((a,) + rest)
    return out


def polys_to_json(polys: Iterable[MultiPoly]) -> str:
    return json.dumps([p.to_json() for p in polys])
