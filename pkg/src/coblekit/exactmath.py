"""Exact coefficient fields: Q, Q(zeta_n), F_p and F_{p^k}.

Fields are lightweight objects that know how to combine *raw* element
values.  Polynomials and matrices store raw values (``int``/``Fraction`` for
Q, ``int`` for F_p, :class:`CycElt` for Q(zeta_n), :class:`ExtElt` for
F_{p^k}) and call the field methods; :class:`Scalar` is the tagged,
operator-overloaded wrapper used at API boundaries.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

SUPPORTED_CYCLOTOMIC = (3, 4, 5, 12, 15)
DEFAULT_PRIME = 61
FALLBACK_PRIMES = (181, 241, 421)


class FieldError(ArithmeticError):
    pass


class FieldMismatch(FieldError):
    pass


class NoSuchRoot(FieldError):
    pass


# ---------------------------------------------------------------------------
# integer polynomial helpers (coefficient lists, low degree first)


def _poly_divmod_int(a: list[int], b: list[int]) -> tuple[list[int], list[int]]:
    """Division by a monic integer polynomial."""
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 1)
    db = len(b) - 1
    assert b[-1] == 1
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c:
            q[k - db] = c
            for i in range(db + 1):
                a[k - db + i] -= c * b[i]
    r = a[:db] if db > 0 else []
    return q, r


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, low degree first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num, r = _poly_divmod_int(num, list(cyclotomic_polynomial(d)))
            assert not any(r)
    while num and num[-1] == 0:
        num.pop()
    return tuple(num)


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


# ---------------------------------------------------------------------------
# fields


class Field:
    """Interface shared by all coefficient fields."""

    tag: str = "field"
    characteristic: int = 0

    zero: object
    one: object

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def coerce(self, x):
        """Accept ints (and Fractions where meaningful) as field values."""
        if isinstance(x, int):
            return self.from_int(x)
        return x

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def render(self, a) -> str:
        return str(a)

    def parse(self, text: str):
        raise NotImplementedError

    def random(self, rng: random.Random):
        raise NotImplementedError

    def __call__(self, x) -> "Scalar":
        return Scalar(self, self.coerce(x))


class RationalField(Field):
    tag = "rational"
    characteristic = 0
    zero = 0
    one = 1

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero in Q")
        return Fraction(1) / a

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in Q")
        return Fraction(a) / b

    def is_zero(self, a) -> bool:
        return a == 0

    def from_int(self, n: int):
        return n

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x.numerator if x.denominator == 1 else x
        if isinstance(x, int):
            return x
        if isinstance(x, str):
            return self.parse(x)
        raise FieldMismatch(f"cannot coerce {x!r} into Q")

    def render(self, a) -> str:
        a = Fraction(a)
        if a.denominator == 1:
            return str(a.numerator)
        return f"{a.numerator}/{a.denominator}"

    def parse(self, text: str):
        return self.coerce(Fraction(text.strip()))

    def random(self, rng: random.Random):
        den = rng.randint(1, 9)
        return self.coerce(Fraction(rng.randint(-20, 20), den))

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


class PrimeField(Field):
    tag = "prime"

    def __init__(self, p: int):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.zero = 0
        self.one = 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return pow(a, -1, self.p)

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def from_int(self, n: int):
        return n % self.p

    def coerce(self, x):
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, Fraction):
            return x.numerator * self.inv(x.denominator) % self.p
        if isinstance(x, str):
            return self.parse(x)
        raise FieldMismatch(f"cannot coerce {x!r} into F_{self.p}")

    def parse(self, text: str):
        return self.coerce(Fraction(text.strip()))

    def random(self, rng: random.Random):
        return rng.randrange(self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


# --- cyclotomic --------------------------------------------------------------


class CycElt:
    """Element of Q(zeta_n): integer numerators over a positive denominator."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field: "CyclotomicField", num: Sequence[int], den: int = 1):
        if den < 0:
            num = [-x for x in num]
            den = -den
        g = den
        for x in num:
            g = math.gcd(g, x)
            if g == 1:
                break
        if g > 1:
            num = [x // g for x in num]
            den //= g
        self.field = field
        self.num = tuple(num)
        self.den = den
        self._hash = None

    def _check(self, other):
        if isinstance(other, int):
            return self.field.from_int(other)
        if isinstance(other, Fraction):
            return self.field.from_fraction(other)
        if not isinstance(other, CycElt) or other.field.n != self.field.n:
            raise FieldMismatch("cyclotomic fields differ")
        return other

    def __add__(self, other):
        other = self._check(other)
        if self.den == other.den:
            return CycElt(self.field, [a + b for a, b in zip(self.num, other.num)], self.den)
        return CycElt(
            self.field,
            [a * other.den + b * self.den for a, b in zip(self.num, other.num)],
            self.den * other.den,
        )

    __radd__ = __add__

    def __neg__(self):
        return CycElt(self.field, [-a for a in self.num], self.den)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        return self.field._mul(self, other)

    __rmul__ = __mul__

    def inverse(self):
        return self.field.inv(self)

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def __rtruediv__(self, other):
        return self._check(other) * self.inverse()

    def __pow__(self, e: int):
        return self.field.pow(self, e)

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._check(other)
        if not isinstance(other, CycElt):
            return NotImplemented
        return self.field.n == other.field.n and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            if not any(self.num[1:]):
                # agrees with hash of the rational constant
                self._hash = hash(Fraction(self.num[0], self.den))
            else:
                self._hash = hash((self.field.n, self.num, self.den))
        return self._hash

    def coefficients(self) -> list[Fraction]:
        return [Fraction(a, self.den) for a in self.num]

    def __repr__(self):
        return self.field.render(self)


class CyclotomicField(Field):
    tag = "cyclotomic"
    characteristic = 0

    def __init__(self, n: int):
        if n not in SUPPORTED_CYCLOTOMIC:
            raise FieldError(
                f"Q(zeta_{n}) not supported; available: {SUPPORTED_CYCLOTOMIC}"
            )
        self.n = n
        self.modulus = cyclotomic_polynomial(n)
        self.degree = len(self.modulus) - 1
        self.gen_name = "w" if n == 3 else f"z{n}"
        d = self.degree
        # x^k reduced mod Phi_n for 0 <= k < 2d - 1
        self._reduce = []
        for k in range(2 * d - 1):
            vec = [0] * (k + 1)
            vec[k] = 1
            _, r = _poly_divmod_int(vec, list(self.modulus)) if k >= d else (None, vec)
            r = list(r) + [0] * (d - len(r))
            self._reduce.append(r[:d])
        self.zero = CycElt(self, [0] * d)
        self.one = CycElt(self, [1] + [0] * (d - 1))
        gen = [0] * d
        gen[1 % d if d > 1 else 0] = 1
        self._gen = CycElt(self, gen)

    # raw arithmetic
    def _mul(self, a: CycElt, b: CycElt) -> CycElt:
        d = self.degree
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a.num):
            if x:
                for j, y in enumerate(b.num):
                    if y:
                        prod[i + j] += x * y
        out = prod[:d]
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                red = self._reduce[k]
                for t in range(d):
                    if red[t]:
                        out[t] += c * red[t]
        return CycElt(self, out, a.den * b.den)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return self._mul(a, b)

    def neg(self, a):
        return -a

    def inv(self, a: CycElt) -> CycElt:
        if a.is_zero():
            raise ZeroDivisionError("division by zero in cyclotomic field")
        d = self.degree
        # multiplication-by-a matrix, columns = a * x^j
        cols = []
        for j in range(d):
            basis = [0] * d
            basis[j] = 1
            cols.append(self._mul(a, CycElt(self, basis)).coefficients())
        # solve M x = e_0 with M[i][j] = cols[j][i]
        m = [[cols[j][i] for j in range(d)] + [Fraction(int(i == 0))] for i in range(d)]
        for c in range(d):
            piv = next(r for r in range(c, d) if m[r][c] != 0)
            m[c], m[piv] = m[piv], m[c]
            pv = m[c][c]
            m[c] = [x / pv for x in m[c]]
            for r in range(d):
                if r != c and m[r][c] != 0:
                    f = m[r][c]
                    m[r] = [x - f * y for x, y in zip(m[r], m[c])]
        return self.from_fractions([m[i][d] for i in range(d)])

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def from_int(self, n: int) -> CycElt:
        return CycElt(self, [n] + [0] * (self.degree - 1))

    def from_fraction(self, q: Fraction) -> CycElt:
        q = Fraction(q)
        return CycElt(self, [q.numerator] + [0] * (self.degree - 1), q.denominator)

    def from_fractions(self, coeffs: Sequence[Fraction]) -> CycElt:
        coeffs = [Fraction(c) for c in coeffs]
        den = 1
        for c in coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        return CycElt(self, [int(c * den) for c in coeffs], den)

    def coerce(self, x):
        if isinstance(x, CycElt):
            if x.field.n != self.n:
                raise FieldMismatch("cyclotomic fields differ")
            return x
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Fraction):
            return self.from_fraction(x)
        if isinstance(x, str):
            return self.parse(x)
        raise FieldMismatch(f"cannot coerce {x!r} into Q(zeta_{self.n})")

    def gen(self) -> CycElt:
        """The fixed primitive n-th root of unity."""
        return self._gen

    def root_power(self, k: int) -> CycElt:
        return self.pow(self._gen, k % self.n)

    def from_power_counts(self, counts: Sequence[int]) -> CycElt:
        """Sum_k counts[k] * zeta^k (k < n), exact."""
        d = self.degree
        out = [0] * d
        for k, c in enumerate(counts):
            if c:
                r = self.root_power(k)
                for t in range(d):
                    out[t] += c * r.num[t]
        return CycElt(self, out)

    def render(self, a: CycElt) -> str:
        terms = []
        for k, c in enumerate(a.coefficients()):
            if c == 0:
                continue
            mono = "" if k == 0 else (self.gen_name if k == 1 else f"{self.gen_name}^{k}")
            cs = QQ.render(c)
            if not mono:
                terms.append(cs)
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{cs}*{mono}")
        if not terms:
            return "0"
        s = terms[0]
        for t in terms[1:]:
            s += t if t.startswith("-") else "+" + t
        return s

    def parse(self, text: str) -> CycElt:
        text = text.strip().replace(" ", "")
        if text.startswith("(") and text.endswith(")"):
            text = text[1:-1]
        acc = self.zero
        for sign, body in _split_signed_terms(text):
            coef = Fraction(1)
            power = 0
            for factor in body.split("*"):
                if factor.startswith(self.gen_name):
                    rest = factor[len(self.gen_name):]
                    power += int(rest[1:]) if rest.startswith("^") else 1
                else:
                    coef *= Fraction(factor)
            acc = acc + self.from_fraction(sign * coef) * self.root_power(power)
        return acc

    def random(self, rng: random.Random) -> CycElt:
        return self.from_fractions([Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(self.degree)])

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.n == self.n

    def __hash__(self):
        return hash(("Cyc", self.n))

    def __repr__(self):
        return f"Cyclotomic({self.n})"


@lru_cache(maxsize=None)
def Cyclotomic(n: int) -> CyclotomicField:
    return CyclotomicField(n)


def _split_signed_terms(text: str) -> list[tuple[int, str]]:
    """Split 'a+b-c' at top-level signs (ignoring signs after '^' or '/')."""
    out = []
    depth = 0
    cur = ""
    sign = 1
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and i > 0 and text[i - 1] not in "^*/":
            if cur:
                out.append((sign, cur))
            sign = 1 if ch == "+" else -1
            cur = ""
            continue
        if ch in "+-" and depth == 0 and i == 0:
            sign = 1 if ch == "+" else -1
            continue
        cur += ch
    if cur:
        out.append((sign, cur))
    return out


# --- small extensions F_{p^k} --------------------------------------------------


class ExtElt:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: "ExtensionField", coeffs: Sequence[int]):
        self.field = field
        self.coeffs = tuple(c % field.p for c in coeffs)

    def _check(self, other):
        if isinstance(other, int):
            return self.field.from_int(other)
        if not isinstance(other, ExtElt) or other.field != self.field:
            raise FieldMismatch("extension fields differ")
        return other

    def __add__(self, other):
        other = self._check(other)
        return ExtElt(self.field, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return ExtElt(self.field, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        return self.field.mul(self, self._check(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * self.field.inv(self._check(other))

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.from_int(other)
        return isinstance(other, ExtElt) and other.field == self.field and other.coeffs == self.coeffs

    def __hash__(self):
        return hash((self.field.p, self.field.k, self.coeffs))

    def is_zero(self):
        return not any(self.coeffs)

    def __repr__(self):
        return self.field.render(self)


class ExtensionField(Field):
    """F_{p^k} as F_p[x]/(m(x)) with m the lexicographically first monic irreducible."""

    tag = "extension"

    def __init__(self, p: int, k: int):
        self.base = GF(p)
        self.p = p
        self.k = k
        self.characteristic = p
        self.modulus = _first_irreducible(p, k)
        self.zero = ExtElt(self, [0] * k)
        self.one = ExtElt(self, [1] + [0] * (k - 1))

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a: ExtElt, b: ExtElt) -> ExtElt:
        p, k = self.p, self.k
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    prod[i + j] += x * y
        m = self.modulus
        for t in range(2 * k - 2, k - 1, -1):
            c = prod[t] % p
            if c:
                for i in range(k + 1):
                    prod[t - k + i] -= c * m[i]
        return ExtElt(self, prod[:k])

    def inv(self, a: ExtElt) -> ExtElt:
        if a.is_zero():
            raise ZeroDivisionError("division by zero in extension field")
        return self.pow(a, self.p**self.k - 2)

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def from_int(self, n: int) -> ExtElt:
        return ExtElt(self, [n] + [0] * (self.k - 1))

    def coerce(self, x):
        if isinstance(x, ExtElt):
            if x.field != self:
                raise FieldMismatch("extension fields differ")
            return x
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, (list, tuple)):
            return ExtElt(self, x)
        raise FieldMismatch(f"cannot coerce {x!r} into F_{self.p}^{self.k}")

    def gen(self) -> ExtElt:
        return ExtElt(self, [0, 1] + [0] * (self.k - 2))

    def render(self, a: ExtElt) -> str:
        return "[" + ",".join(str(c) for c in a.coeffs) + "]"

    def parse(self, text: str) -> ExtElt:
        return ExtElt(self, [int(t) for t in text.strip("[] ").split(",")])

    def random(self, rng):
        return ExtElt(self, [rng.randrange(self.p) for _ in range(self.k)])

    def elements(self):
        import itertools

        for cs in itertools.product(range(self.p), repeat=self.k):
            yield ExtElt(self, cs)

    def __eq__(self, other):
        return isinstance(other, ExtensionField) and (other.p, other.k) == (self.p, self.k)

    def __hash__(self):
        return hash(("GFext", self.p, self.k))

    def __repr__(self):
        return f"GF({self.p}^{self.k})"


def _first_irreducible(p: int, k: int) -> tuple[int, ...]:
    import itertools

    if k < 2:
        raise FieldError("extension degree must be >= 2")
    for tail in itertools.product(range(p), repeat=k):
        m = list(tail) + [1]
        if m[0] == 0:
            continue
        if _is_irreducible_mod_p(m, p):
            return tuple(m)
    raise FieldError("no irreducible polynomial found")


def _polymod_p(a: list[int], b: list[int], p: int) -> list[int]:
    a = [x % p for x in a]
    inv_lead = pow(b[-1], -1, p)
    while len(a) >= len(b) and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) < len(b):
            break
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, y in enumerate(b):
            a[shift + i] = (a[shift + i] - c * y) % p
        while a and a[-1] == 0:
            a.pop()
    return a


def _is_irreducible_mod_p(m: list[int], p: int) -> bool:
    import itertools

    k = len(m) - 1
    for d in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            f = list(tail) + [1]
            if not _polymod_p(m, f, p):
                return False
    return True


# ---------------------------------------------------------------------------
# tagged scalars


@dataclass(frozen=True)
class Scalar:
    """A field element carrying its field; arithmetic refuses to mix fields."""

    field: Field
    value: object

    def _other(self, other) -> object:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        raise FieldMismatch(f"cannot combine Scalar with {type(other).__name__}")

    def __add__(self, other):
        return Scalar(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return Scalar(self.field, self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        return Scalar(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if self.field.is_zero(b):
            raise ZeroDivisionError("division by zero")
        return Scalar(self.field, self.field.div(self.value, b))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return Scalar(self.field, self.field.pow(self.value, e))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.field.is_zero(self.field.sub(self.value, self.field.from_int(other)))
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.field == other.field and self.field.is_zero(self.field.sub(self.value, other.value))

    def __hash__(self):
        return hash((self.field, self.value))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.value)

    def __str__(self):
        return self.field.render(self.value)

    def __repr__(self):
        return f"Scalar({self.field!r}, {self.field.render(self.value)})"


def field_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Exact add/sub/mul/div of two scalars of the same field."""
    if a.field != b.field:
        raise FieldMismatch(f"{a.field!r} vs {b.field!r}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def multiplicative_order(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ValueError("0 has no multiplicative order")
    for d in _divisors(p - 1):
        if pow(a, d, p) == 1:
            return d
    raise AssertionError("unreachable")


@lru_cache(maxsize=None)
def root_of_unity(p: int, n: int) -> int:
    """Smallest residue of exact multiplicative order n in F_p."""
    if (p - 1) % n:
        raise NoSuchRoot(f"{n} does not divide {p}-1; no primitive {n}th root in F_{p}")
    for a in range(2 if n > 1 else 1, p):
        if pow(a, n, p) == 1 and all(pow(a, m, p) != 1 for m in _divisors(n) if m < n):
            return a
    raise NoSuchRoot(f"no element of order {n} in F_{p}")


def sqrt_mod(a: int, p: int) -> int:
    """Smallest square root of a mod p (brute force; p is small here)."""
    a %= p
    for x in range(p):
        if x * x % p == a:
            return x
    raise NoSuchRoot(f"{a} is not a square mod {p}")


def cyclotomic_embed(x: CycElt, p: int, root: int) -> int:
    """Image of x under the ring map Q(zeta_n) -> F_p sending zeta_n to ``root``."""
    n = x.field.n
    if multiplicative_order(root, p) != n:
        raise NoSuchRoot(f"{root} does not have order {n} mod {p}")
    if x.den % p == 0:
        raise ZeroDivisionError(f"denominator {x.den} not invertible mod {p}")
    acc = 0
    rp = 1
    for c in x.num:
        acc += c * rp
        rp = rp * root % p
    return acc * pow(x.den, -1, p) % p


def to_prime_field(x, p: int, roots: dict[int, int] | None = None) -> int:
    """Reduce an element of Q or Q(zeta_n) into F_p using the default roots."""
    if isinstance(x, CycElt):
        n = x.field.n
        root = (roots or {}).get(n) or root_of_unity(p, n)
        return cyclotomic_embed(x, p, root)
    if isinstance(x, Fraction):
        if x.denominator % p == 0:
            raise ZeroDivisionError(f"denominator {x.denominator} not invertible mod {p}")
        return x.numerator * pow(x.denominator, -1, p) % p
    return int(x) % p
