"""Key predistribution on the hyperelliptic curves X_a : y^2 = x^q + x + a over GF(q^2).

For x in GF(q^2) the right-hand side is Tr(x) + a, an element of GF(q), and
every element of GF(q) is a square in GF(q^2).  Users are points; the basis
of L(uQ) is the monomials x^i y^j with 2i + qj <= u and j in {0, 1}.

Note the affine point count: the q values of x with Tr(x) = -a give y = 0
and a single point each, so there are 2q^2 - q affine points, not 2q^2.
User IDs are (x, branch) pairs; branch 1 negates y.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

from . import forms
from .field import Field, FieldElement, sqrt_in_ext, trace_norm


@dataclass(frozen=True)
class CurveDescriptor:
    field: Field  # GF(q^2) with a base-field link to GF(q)
    a: int        # curve parameter, integer encoding in GF(q)

    def __post_init__(self):
        base = self.field.base
        if base is None or self.field.degree != 2:
            raise ValueError("the curve field must be a quadratic tower GF(q^2)/GF(q)")
        if base.order % 2 == 0:
            raise ValueError("q must be odd")
        if not 0 <= self.a < base.order:
            raise ValueError("curve parameter a must lie in GF(q)")

    @property
    def q(self) -> int:
        return self.field.base.order

    @property
    def genus(self) -> int:
        return (self.q - 1) // 2

    def rhs(self, x: int) -> int:
        f = self.field
        return f.add(f.add(f.pow(x, self.q), x), self.a)

    def contains(self, point: CurvePoint) -> bool:
        if point.is_infinity:
            return True
        f = self.field
        return f.mul(point.y.value, point.y.value) == self.rhs(point.x.value)


class CurvePoint(NamedTuple):
    x: FieldElement | None
    y: FieldElement | None

    @property
    def is_infinity(self) -> bool:
        return self.x is None


INFINITY = CurvePoint(None, None)


def make_curve(field: Field, a) -> CurveDescriptor:
    a = field.base(a) if not isinstance(a, FieldElement) else a
    if a.field != field.base:
        raise ValueError("curve parameter must be an element of the base field")
    return CurveDescriptor(field, a.value)


def curve_points(curve: CurveDescriptor) -> list[CurvePoint]:
    """All affine points in canonical order (by x, then y), followed by INFINITY."""
    f = curve.field
    out = []
    for x in range(f.order):
        y = f.sqrt(curve.rhs(x))
        out.append(CurvePoint(FieldElement(f, x), FieldElement(f, y)))
        if y:
            out.append(CurvePoint(FieldElement(f, x), FieldElement(f, f.neg(y))))
    out.append(INFINITY)
    return out


def affine_points(curve: CurveDescriptor) -> list[CurvePoint]:
    return curve_points(curve)[:-1]


def id_to_point(x, branch: int, curve: CurveDescriptor) -> CurvePoint:
    f = curve.field
    x = f(x)
    if branch not in (0, 1):
        raise ValueError("branch must be 0 or 1")
    y = sqrt_in_ext(FieldElement(f.base, curve.rhs(x.value)), f)
    return CurvePoint(x, -y if branch else y)


def point_to_id(point: CurvePoint, curve: CurveDescriptor) -> tuple[FieldElement, int]:
    if point.is_infinity:
        raise ValueError("the point at infinity has no user ID")
    y0 = id_to_point(point.x, 0, curve).y
    if point.y == y0:
        return point.x, 0
    if point.y == -y0:
        return point.x, 1
    raise ValueError("point is not on the curve")


# -- Riemann-Roch bases -----------------------------------------------------------


@dataclass(frozen=True)
class RRBasis:
    q: int
    u: int
    monomials: tuple[tuple[int, int], ...]  # (power of x, power of y)

    def __len__(self) -> int:
        return len(self.monomials)

    def pole_orders(self) -> list[int]:
        return [2 * i + self.q * j for i, j in self.monomials]


def rr_basis(q: int, u: int) -> RRBasis:
    """Monomial basis of L(uQ), sorted by pole order; requires u >= 2g - 1 = q - 2."""
    if q % 2 == 0 or q < 3:
        raise ValueError("q must be an odd prime power")
    if u < q - 2:
        raise ValueError(f"u = {u} < q - 2 = {q - 2}: dimension formula does not apply")
    mons = [(i, j) for j in (0, 1) for i in range((u - q * j) // 2 + 1) if 2 * i + q * j <= u]
    mons.sort(key=lambda m: 2 * m[0] + q * m[1])
    basis = RRBasis(q, u, tuple(mons))
    if len(basis) != u - (q - 1) // 2 + 1:  # pragma: no cover
        raise ArithmeticError("basis size disagrees with u - g + 1")
    return basis


def basis_values(basis: RRBasis, point: CurvePoint, field: Field) -> list[int]:
    if point.is_infinity:
        raise ValueError("basis functions have a pole at infinity")
    x, y = point.x.value, point.y.value
    return [field.mul(field.pow(x, i), field.pow(y, j)) for i, j in basis.monomials]


def evaluate_rr(coeffs, point: CurvePoint, curve: CurveDescriptor, basis: RRBasis) -> FieldElement:
    f = curve.field
    if point.is_infinity:
        raise ValueError("cannot evaluate at the point at infinity")
    if not curve.contains(point):
        raise ValueError("point is not on the curve")
    acc = 0
    for c, v in zip(coeffs, basis_values(basis, point, f)):
        acc = f.add(acc, f.mul(f(c).value, v))
    return FieldElement(f, acc)


# -- the scheme -------------------------------------------------------------------


@dataclass(frozen=True)
class HkpsScheme:
    curve: CurveDescriptor
    w: int

    def __post_init__(self):
        if self.w < 0:
            raise ValueError(f"w must be >= 0, got {self.w}")
        n_points = 2 * self.curve.q**2 - self.curve.q
        if self.size > n_points:
            raise ValueError(f"basis size {self.size} exceeds the {n_points} affine points")

    @property
    def field(self) -> Field:
        return self.curve.field

    @cached_property
    def basis(self) -> RRBasis:
        return rr_basis(self.curve.q, self.w + self.curve.q - 1)

    @property
    def size(self) -> int:
        return self.w + (self.curve.q + 1) // 2

    def values(self, point: CurvePoint) -> list[int]:
        return basis_values(self.basis, point, self.field)

    def header(self) -> str:
        base = self.field.base
        return f"HKPS {base.p} {base.k} {base.encode(self.curve.a)} {self.w}"

    @staticmethod
    def from_header(field: Field, line: str) -> HkpsScheme:
        tag, p, k, a, w = line.split()
        base = field.base
        if tag != "HKPS" or base is None or int(p) != base.p or int(k) != base.k:
            raise ValueError(f"malformed HKPS header {line!r}")
        return HkpsScheme(CurveDescriptor(field, base.decode(a)), int(w))


@dataclass(frozen=True)
class HkpsMaster:
    scheme: HkpsScheme
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != forms.free_count(self.scheme.size, 2):
            raise ValueError("wrong number of master coefficients")

    @property
    def matrix(self) -> list[list[int]]:
        n = self.scheme.size
        pos = forms.index_position(n, 2)
        return [[self.entries[pos[(min(i, j), max(i, j))]] for j in range(n)] for i in range(n)]

    def to_text(self) -> str:
        f = self.scheme.field
        lines = [f.header(), self.scheme.header(), "MASTER"] + [f.encode(v) for v in self.entries]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class HkpsShare:
    scheme: HkpsScheme
    owner: CurvePoint
    coeffs: tuple[int, ...]

    def to_text(self) -> str:
        f = self.scheme.field
        x, branch = point_to_id(self.owner, self.scheme.curve)
        lines = [f.header(), self.scheme.header(), f"SHARE {x} {branch}"] + [f.encode(v) for v in self.coeffs]
        return "\n".join(lines) + "\n"


def hkps_setup(curve: CurveDescriptor, w: int, rng) -> HkpsMaster:
    scheme = HkpsScheme(curve, w)
    n = forms.free_count(scheme.size, 2)
    return HkpsMaster(scheme, tuple(rng.randrange(curve.field.order) for _ in range(n)))


def _as_point(W, curve: CurveDescriptor) -> CurvePoint:
    if isinstance(W, CurvePoint):
        if W.is_infinity:
            raise ValueError("users cannot sit at the point at infinity")
        if not curve.contains(W):
            raise ValueError("point is not on the curve")
        return W
    x, branch = W
    return id_to_point(x, branch, curve)


def hkps_share(master: HkpsMaster, W) -> HkpsShare:
    """Share for the user at point W (a CurvePoint or an (x, branch) ID)."""
    s = master.scheme
    W = _as_point(W, s.curve)
    f = s.field
    u = s.values(W)
    coeffs = []
    for row in master.matrix:
        acc = 0
        for a, ui in zip(row, u):
            acc = f.add(acc, f.mul(a, ui))
        coeffs.append(acc)
    return HkpsShare(s, W, tuple(coeffs))


def hkps_key(share: HkpsShare, W) -> FieldElement:
    s = share.scheme
    W = _as_point(W, s.curve)
    if W == share.owner:
        raise ValueError("a user has no pairwise key with itself")
    f = s.field
    acc = 0
    for c, u in zip(share.coeffs, s.values(W)):
        acc = f.add(acc, f.mul(c, u))
    return FieldElement(f, acc)


class HkpsStorage(NamedTuple):
    actual_bits: float
    formula_bits: float


def hkps_storage_bits(q: int, w: int) -> HkpsStorage:
    """Coefficients actually stored (w + (q+1)/2 elements of GF(q^2)) and the closed-form 2(w + (q-1)/2) log2 q."""
    return HkpsStorage((w + (q + 1) // 2) * math.log2(q * q), 2 * (w + (q - 1) / 2) * math.log2(q))


def master_from_text(text: str) -> HkpsMaster:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    field = Field.from_header(lines[0])
    scheme = HkpsScheme.from_header(field, lines[1])
    if lines[2] != "MASTER":
        raise ValueError("not an HKPS master file")
    return HkpsMaster(scheme, tuple(field.decode(s) for s in lines[3:]))


def share_from_text(text: str) -> HkpsShare:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    field = Field.from_header(lines[0])
    scheme = HkpsScheme.from_header(field, lines[1])
    kind, x, branch = lines[2].split()
    if kind != "SHARE":
        raise ValueError("not an HKPS share file")
    owner = id_to_point(FieldElement(field, field.decode(x)), int(branch), scheme.curve)
    coeffs = tuple(field.decode(s) for s in lines[3:])
    if len(coeffs) != scheme.size:
        raise ValueError("wrong number of share coefficients")
    return HkpsShare(scheme, owner, coeffs)


def curve_trace_check(curve: CurveDescriptor, x: FieldElement) -> FieldElement:
    """x^q + x + a computed through the trace map (must equal ``rhs``)."""
    tr, _ = trace_norm(x)
    return tr + FieldElement(curve.field.base, curve.a)
