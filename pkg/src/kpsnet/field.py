"""Finite fields GF(p^k), quadratic towers GF(q^2)/GF(q), and polynomials over them.

Elements are stored as integers 0 <= v < q.  The coefficient vector
(c_0, ..., c_{d-1}) of an element over its coefficient ring (GF(p), or the
base field of a tower) maps to sum(c_i * r**i) with r the ring size.  Integer
order is the canonical element order: it drives the default modulus, the
enumeration order of irreducibles, the choice between the two square roots and
the element <-> polynomial correspondence used by the hierarchy.

Base-field elements of a tower keep their integer value when embedded, so
``ext(base_elem)`` is free.
"""

from __future__ import annotations

import hashlib
import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, NamedTuple, Sequence

TABLE_LIMIT = 1 << 16
_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def mobius(n: int) -> int:
    result = 1
    for f in prime_factors(n):
        if n % (f * f) == 0:
            return 0
        result = -result
    return result


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, k) with q = p**k, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    fs = prime_factors(q)
    if len(fs) != 1:
        raise ValueError(f"{q} is not a prime power")
    p = fs[0]
    k = round(math.log(q, p))
    if p**k != q:
        raise ValueError(f"{q} is not a prime power")
    return p, k


@dataclass(frozen=True)
class Field:
    """Descriptor of GF(r^d) = R[x]/(modulus), R = GF(p) or the ``base`` field.

    ``modulus`` is monic, lowest degree first, with coefficients encoded as
    integers of the coefficient ring.  Build instances with :func:`make_field`
    or :func:`extend`; the constructor does not check irreducibility.
    """

    p: int
    modulus: tuple[int, ...]
    base: Field | None = None

    # -- shape ---------------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree over the immediate coefficient ring."""
        return len(self.modulus) - 1

    @cached_property
    def radix(self) -> int:
        return self.p if self.base is None else self.base.order

    @cached_property
    def order(self) -> int:
        return self.radix**self.degree

    @property
    def q(self) -> int:
        return self.order

    @cached_property
    def k(self) -> int:
        """Absolute degree over GF(p)."""
        return self.degree * (1 if self.base is None else self.base.k)

    @property
    def is_prime_field(self) -> bool:
        return self.base is None and self.degree == 1

    def __repr__(self) -> str:
        if self.base is None:
            return f"GF({self.order})"
        return f"GF({self.order})/GF({self.base.order})"

    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field is self or value.field == self:
                return value
            f = self.base
            while f is not None:
                if value.field == f:
                    return FieldElement(self, value.value)
                f = f.base
            raise ValueError(f"{value!r} does not embed into {self!r}")
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(f"cannot build a field element from {type(value).__name__}")
        if self.is_prime_field:
            return FieldElement(self, value % self.p)
        if not 0 <= value < self.order:
            raise ValueError(f"{value} is outside the encoding range of {self!r}")
        return FieldElement(self, value)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self, v) for v in range(self.order)]

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F (n * 1)."""
        return n % self.p

    # -- coefficient ring ----------------------------------------------------

    def _r_add(self, a, b):
        return (a + b) % self.p if self.base is None else self.base.add(a, b)

    def _r_sub(self, a, b):
        return (a - b) % self.p if self.base is None else self.base.sub(a, b)

    def _r_mul(self, a, b):
        return a * b % self.p if self.base is None else self.base.mul(a, b)

    def coeffs(self, v: int) -> list[int]:
        r = self.radix
        out = []
        for _ in range(self.degree):
            v, d = divmod(v, r)
            out.append(d)
        return out

    def from_coeffs(self, cs: Sequence[int]) -> int:
        v = 0
        for c in reversed(cs):
            v = v * self.radix + c
        return v

    # -- slow, table-free arithmetic (used to build tables and for big q) ----

    def _g_add(self, a: int, b: int) -> int:
        if self.base is None and self.p == 2:
            return a ^ b
        return self.from_coeffs([self._r_add(x, y) for x, y in zip(self.coeffs(a), self.coeffs(b))])

    def _g_neg(self, a: int) -> int:
        return self.from_coeffs([self._r_sub(0, x) for x in self.coeffs(a)])

    def _g_mul(self, a: int, b: int) -> int:
        d = self.degree
        xa, xb = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * d - 1)
        for i, ca in enumerate(xa):
            if ca:
                for j, cb in enumerate(xb):
                    if cb:
                        prod[i + j] = self._r_add(prod[i + j], self._r_mul(ca, cb))
        m = self.modulus
        for i in range(2 * d - 2, d - 1, -1):
            c = prod[i]
            if c:
                for j in range(d):
                    if m[j]:
                        prod[i - d + j] = self._r_sub(prod[i - d + j], self._r_mul(c, m[j]))
        return self.from_coeffs(prod[:d])

    def _g_pow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._g_mul(result, a)
            a = self._g_mul(a, a)
            e >>= 1
        return result

    # -- tables --------------------------------------------------------------

    @cached_property
    def _tables(self):
        """(exp, log, zech) for table-driven arithmetic, or None."""
        q = self.order
        if self.is_prime_field or q > TABLE_LIMIT:
            return None
        n = q - 1
        factors = prime_factors(n)
        for g in range(2, q):
            if all(self._g_pow(g, n // r) != 1 for r in factors):
                break
        else:  # q == 2
            g = 1
        exp = [0] * (2 * n)
        log = [0] * q
        v = 1
        for i in range(n):
            exp[i] = exp[i + n] = v
            log[v] = i
            v = self._g_mul(v, g)
        # zech[i] = log(1 + g^i), -1 where 1 + g^i = 0
        zech = [0] * n
        for i in range(n):
            s = self._g_add(1, exp[i])
            zech[i] = log[s] if s else -1
        return exp, log, zech

    @cached_property
    def _minus_one(self) -> int:
        return self._g_neg(1)

    # -- integer-level arithmetic -------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.is_prime_field:
            return (a + b) % self.p
        t = self._tables
        if t is None:
            return self._g_add(a, b)
        if a == 0:
            return b
        if b == 0:
            return a
        exp, log, zech = t
        n = self.order - 1
        i = log[a]
        z = zech[(log[b] - i) % n]
        return 0 if z < 0 else exp[i + z]

    def neg(self, a: int) -> int:
        if self.is_prime_field:
            return -a % self.p
        if self.p == 2:
            return a
        return self.mul(a, self._minus_one)

    def sub(self, a: int, b: int) -> int:
        if self.is_prime_field:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.is_prime_field:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        t = self._tables
        if t is None:
            return self._g_mul(a, b)
        exp, log, _ = t
        return exp[log[a] + log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in {self!r}")
        if self.is_prime_field:
            return pow(a, -1, self.p)
        t = self._tables
        if t is None:
            return self._g_pow(a, self.order - 2)
        exp, log, _ = t
        return exp[(self.order - 1 - log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        if self.is_prime_field:
            return pow(a, e, self.p)
        t = self._tables
        if t is None:
            return self._g_pow(a, e % (self.order - 1))
        exp, log, _ = t
        return exp[log[a] * e % (self.order - 1)]

    def sqrt(self, a: int) -> int | None:
        """Canonical (smaller) square root of a, or None for non-squares."""
        q = self.order
        if a == 0:
            return 0
        if q % 2 == 0:
            return self.pow(a, q // 2)
        if self.pow(a, (q - 1) // 2) != 1:
            return None
        # Tonelli-Shanks
        s, m = 0, q - 1
        while m % 2 == 0:
            s, m = s + 1, m // 2
        z = next(v for v in range(2, q) if self.pow(v, (q - 1) // 2) != 1)
        c = self.pow(z, m)
        x = self.pow(a, (m + 1) // 2)
        t = self.pow(a, m)
        while t != 1:
            i, tt = 0, t
            while tt != 1:
                tt = self.mul(tt, tt)
                i += 1
            b = c
            for _ in range(s - i - 1):
                b = self.mul(b, b)
            x = self.mul(x, b)
            c = self.mul(b, b)
            t = self.mul(t, c)
            s = i
        return min(x, self.neg(x))

    # -- text encoding -------------------------------------------------------

    def encode(self, v: int) -> str:
        """Fixed-width base-p numeral of v, most significant digit first."""
        digits = []
        for _ in range(self.k):
            v, d = divmod(v, self.p)
            digits.append(d)
        digits.reverse()
        if self.p <= 36:
            return "".join(_DIGITS[d] for d in digits)
        width = len(str(self.p - 1))
        return ".".join(str(d).zfill(width) for d in digits)

    def decode(self, text: str) -> int:
        text = text.strip()
        if self.p <= 36:
            v = int(text, self.p)
        else:
            v = 0
            for part in text.split("."):
                d = int(part)
                if not 0 <= d < self.p:
                    raise ValueError(f"digit {d} out of range for p={self.p}")
                v = v * self.p + d
        if not 0 <= v < self.order:
            raise ValueError(f"{text!r} is not an element of {self!r}")
        return v

    def header(self) -> str:
        """``F p k <hex modulus coeffs>``, with `` / <base header>`` for towers."""
        line = f"F {self.p} {self.k} " + ",".join(format(c, "x") for c in self.modulus)
        if self.base is not None:
            line += " / " + self.base.header()
        return line

    @staticmethod
    def from_header(text: str) -> Field:
        head, _, rest = text.strip().partition(" / ")
        parts = head.split()
        if len(parts) != 4 or parts[0] != "F":
            raise ValueError(f"malformed field header {text!r}")
        p, k = int(parts[1]), int(parts[2])
        modulus = tuple(int(c, 16) for c in parts[3].split(","))
        if not rest:
            field = make_field(p, k, modulus)
        else:
            base = Field.from_header(rest)
            field = extend(base, len(modulus) - 1, modulus)
        if field.k != k:
            raise ValueError(f"field header degree {k} does not match modulus")
        return field


class FieldElement:
    """An element of a :class:`Field`; immutable."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value: int):
        self.field = field
        self.value = value

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise ValueError(f"field mismatch: {self.field!r} vs {other.field!r}")
            return other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.field.from_int(other)
        return NotImplemented

    def _new(self, v: int) -> FieldElement:
        return FieldElement(self.field, v)

    def __add__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._new(self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._new(self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._new(self.field.sub(b, self.value))

    def __mul__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._new(self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._new(self.field.div(self.value, b))

    def __rtruediv__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._new(self.field.div(b, self.value))

    def __pow__(self, e: int) -> FieldElement:
        return self._new(self.field.pow(self.value, e))

    def __neg__(self) -> FieldElement:
        return self._new(self.field.neg(self.value))

    def inverse(self) -> FieldElement:
        return self._new(self.field.inv(self.value))

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.value == other.value and (other.field is self.field or other.field == self.field)
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value == self.field.from_int(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.order, self.value))

    def __lt__(self, other: FieldElement) -> bool:
        return self.value < self._other(other)

    def __le__(self, other: FieldElement) -> bool:
        return self.value <= self._other(other)

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.field!r}({self.field.encode(self.value)})"

    def __str__(self) -> str:
        return self.field.encode(self.value)


class Poly:
    """Polynomial over a :class:`Field`, coefficients lowest degree first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Iterable = ()):
        cs = [c.value if isinstance(c, FieldElement) else int(c) for c in coeffs]
        for c in cs:
            if not 0 <= c < field.order:
                raise ValueError(f"coefficient {c} is not an element of {field!r}")
        while cs and cs[-1] == 0:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls, field: Field) -> Poly:
        return cls(field, (0, 1))

    @classmethod
    def const(cls, field: Field, c: int = 1) -> Poly:
        return cls(field, (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_monic(self) -> bool:
        return self.lead == 1

    def monic(self) -> Poly:
        if not self.coeffs:
            raise ZeroDivisionError("zero polynomial has no monic associate")
        inv = self.field.inv(self.lead)
        return Poly(self.field, [self.field.mul(c, inv) for c in self.coeffs])

    def _check(self, other: Poly) -> None:
        if other.field != self.field:
            raise ValueError("polynomials over different fields")

    def __add__(self, other: Poly) -> Poly:
        self._check(other)
        f = self.field
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        a = a + (0,) * (n - len(a))
        b = b + (0,) * (n - len(b))
        return Poly(f, [f.add(x, y) for x, y in zip(a, b)])

    def __neg__(self) -> Poly:
        return Poly(self.field, [self.field.neg(c) for c in self.coeffs])

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other: Poly) -> Poly:
        self._check(other)
        f = self.field
        if not self.coeffs or not other.coeffs:
            return Poly(f)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = f.add(out[i + j], f.mul(a, b))
        return Poly(f, out)

    def __pow__(self, e: int) -> Poly:
        result = Poly.const(self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other: Poly) -> tuple[Poly, Poly]:
        self._check(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        f = self.field
        rem = list(self.coeffs)
        d = other.degree
        inv = f.inv(other.lead)
        quot = [0] * max(len(rem) - d, 0)
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i]
            if c:
                c = f.mul(c, inv)
                quot[i - d] = c
                for j, b in enumerate(other.coeffs):
                    if b:
                        rem[i - d + j] = f.sub(rem[i - d + j], f.mul(c, b))
        return Poly(f, quot), Poly(f, rem[:d])

    def __mod__(self, other: Poly) -> Poly:
        return divmod(self, other)[1]

    def __floordiv__(self, other: Poly) -> Poly:
        return divmod(self, other)[0]

    def pow_mod(self, e: int, mod: Poly) -> Poly:
        result = Poly.const(self.field) % mod
        base = self % mod
        while e:
            if e & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            e >>= 1
        return result

    def __call__(self, x):
        """Evaluate by Horner's rule; int in, int out; element in, element out."""
        f = self.field
        if isinstance(x, FieldElement):
            return FieldElement(f, self(f(x).value))
        acc = 0
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, x), c)
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            cs = self.field.encode(c).lstrip("0") or "0"
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(cs)
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{cs}*{mono}")
        return " + ".join(terms)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while b.coeffs:
        a, b = b, a % b
    return a.monic() if a.coeffs else a


# -- irreducibility -------------------------------------------------------------


def is_irreducible(f: Poly) -> bool:
    """Rabin's test: x^(q^n) = x mod f and gcd(x^(q^(n/r)) - x, f) = 1 for primes r | n."""
    n = f.degree
    if n < 1:
        raise ValueError("irreducibility is undefined for constant polynomials")
    if n == 1:
        return True
    f = f.monic()
    q = f.field.order
    x = Poly.x(f.field)
    frob = [x]
    for _ in range(n):
        frob.append(frob[-1].pow_mod(q, f))
    if frob[n] != x:
        return False
    return all(poly_gcd(frob[n // r] - x, f).degree == 0 for r in prime_factors(n))


def monic_poly(field: Field, t: int, index: int) -> Poly:
    """The ``index``-th monic degree-t polynomial; lower coefficients are the base-q digits of index."""
    cs = []
    for _ in range(t):
        index, c = divmod(index, field.order)
        cs.append(c)
    return Poly(field, cs + [1])


def iter_irreducibles(field: Field, t: int) -> Iterator[Poly]:
    for idx in range(field.order**t):
        f = monic_poly(field, t, idx)
        if is_irreducible(f):
            yield f


class IrreducibleCount(NamedTuple):
    exact: int
    lower_bound: int


def count_irreducibles(q: int, t: int) -> IrreducibleCount:
    """Number of monic irreducibles of degree t over GF(q).

    ``exact`` is the necklace formula (1/t) sum_{d|t} mu(d) q^(t/d);
    ``lower_bound`` is floor((q^t - sum_{d|t, d<t} q^d) / t).
    """
    if t < 1:
        raise ValueError("degree must be >= 1")
    exact = sum(mobius(d) * q ** (t // d) for d in divisors(t)) // t
    bound = (q**t - sum(q**d for d in divisors(t) if d < t)) // t
    return IrreducibleCount(exact, bound)


def enumerate_irreducibles(field: Field, t: int, count: int | None = None) -> list[Poly]:
    """First ``count`` monic irreducibles of degree t over ``field`` in canonical order."""
    exact = count_irreducibles(field.order, t).exact
    if count is None:
        count = exact
    if count > exact:
        raise ValueError(f"only {exact} monic irreducibles of degree {t} exist over {field!r}, {count} requested")
    return list(itertools.islice(iter_irreducibles(field, t), count))


# -- construction ----------------------------------------------------------------


@lru_cache(maxsize=None)
def prime_field(p: int) -> Field:
    if not is_prime(p):
        raise ValueError(f"characteristic {p} is not prime")
    return Field(p, (0, 1))


@lru_cache(maxsize=None)
def _cached(p: int, modulus: tuple[int, ...], base: Field | None) -> Field:
    return Field(p, modulus, base)


def _modulus_tuple(field: Field, modulus) -> tuple[int, ...]:
    if isinstance(modulus, Poly):
        if modulus.field != field:
            raise ValueError("modulus is over the wrong coefficient field")
        return modulus.coeffs
    return Poly(field, modulus).coeffs


def make_field(p: int, k: int, modulus=None) -> Field:
    """GF(p^k) as GF(p)[x]/(modulus).

    Without a modulus the canonically smallest monic irreducible of degree k is
    used.  A supplied modulus (Poly or coefficient sequence, lowest first) must
    be monic, of degree k and irreducible.
    """
    gf = prime_field(p)
    if k < 1:
        raise ValueError(f"extension degree must be >= 1, got {k}")
    if modulus is None:
        if k == 1:
            return gf
        m = next(iter_irreducibles(gf, k)).coeffs
    else:
        m = _modulus_tuple(gf, modulus)
        if len(m) != k + 1 or m[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {k}")
        if not is_irreducible(Poly(gf, m)):
            raise ValueError(f"modulus {Poly(gf, m)!r} is reducible over GF({p})")
        if k == 1:
            return gf
    return _cached(p, m, None)


def extend(base: Field, degree: int = 2, modulus=None) -> Field:
    """Extension of ``base`` by a monic irreducible of the given degree (canonical if omitted)."""
    if degree < 2:
        raise ValueError("tower extension degree must be >= 2")
    if modulus is None:
        m = next(iter_irreducibles(base, degree)).coeffs
    else:
        m = _modulus_tuple(base, modulus)
        if len(m) != degree + 1 or m[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {degree}")
        if not is_irreducible(Poly(base, m)):
            raise ValueError("tower modulus is reducible over the base field")
    return _cached(base.p, m, base)


def tower(p: int, k: int = 1) -> Field:
    """GF(q^2) built over GF(q), q = p^k."""
    return extend(make_field(p, k), 2)


# -- maps between a tower and its base -------------------------------------------


def _require_quadratic_tower(field: Field) -> Field:
    if field.base is None or field.degree != 2:
        raise ValueError(f"{field!r} has no quadratic base-field link")
    return field.base


def trace_norm(x: FieldElement) -> tuple[FieldElement, FieldElement]:
    """Trace x^q + x and norm x^(q+1) from GF(q^2) down to GF(q)."""
    field = x.field
    base = _require_quadratic_tower(field)
    q = base.order
    xq = field.pow(x.value, q)
    tr = field.add(xq, x.value)
    nm = field.mul(xq, x.value)
    if tr >= q or nm >= q:
        raise ArithmeticError("trace/norm left the base field; tower modulus is inconsistent")
    return FieldElement(base, tr), FieldElement(base, nm)


def sqrt_in_ext(t, ext: Field) -> FieldElement:
    """Canonical square root in GF(q^2) of an element of GF(q), q odd."""
    base = _require_quadratic_tower(ext)
    if base.order % 2 == 0:
        raise ValueError("square roots through the tower need odd q")
    v = ext(base(t) if not isinstance(t, FieldElement) else t).value
    if v >= base.order:
        raise ValueError("argument is not in the base field")
    y = ext.sqrt(v)
    if y is None:  # pragma: no cover - every base element is a square in GF(q^2)
        raise ArithmeticError("base-field element without a square root in GF(q^2)")
    return FieldElement(ext, y)


# -- deterministic expansion -------------------------------------------------------


def expand_seed(seed: FieldElement, context: bytes, n: int, field: Field | None = None) -> list[FieldElement]:
    """Deterministic stream of n uniform elements of ``field`` keyed by (seed, context).

    SHAKE-256 in counter mode with rejection sampling.  ``field`` defaults to
    the seed's field.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    field = field or seed.field
    prefix = b"\x00".join(
        [b"kpsnet-expand", seed.field.header().encode(), field.header().encode(),
         seed.field.encode(seed.value).encode(), len(context).to_bytes(4, "big") + context]
    )
    q = field.order
    bits = max((q - 1).bit_length(), 1)
    width = (bits + 7) // 8
    mask = (1 << bits) - 1
    out: list[FieldElement] = []
    counter = 0
    while len(out) < n:
        block = hashlib.shake_256(prefix + counter.to_bytes(8, "big")).digest(width * 64)
        counter += 1
        for i in range(0, len(block), width):
            v = int.from_bytes(block[i:i + width], "big") & mask
            if v < q:
                out.append(FieldElement(field, v))
                if len(out) == n:
                    break
    return out
