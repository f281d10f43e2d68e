"""Generalized Blom-Blundo schemes KPS(P) with basis u_i(x) = x^(i-1) / P(x).

P is a pole polynomial without roots in GF(q), so every u_i is defined on
the whole field.  Distinct P give interchangeable w-secure schemes whose key
functions differ; this is the randomness the hierarchy draws on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from . import forms
from .field import Field, FieldElement, Poly, count_irreducibles, divisors, is_prime


@dataclass(frozen=True)
class GkpsDescriptor:
    field: Field
    w: int
    pole: Poly
    degenerate: bool = False

    def __post_init__(self):
        if self.pole.field != self.field:
            raise ValueError("pole polynomial is over a different field")
        if self.w < 0:
            raise ValueError(f"w must be >= 0, got {self.w}")
        if not self.degenerate and self.H < self.w:
            raise ValueError(f"deg P = {self.H} < w = {self.w}; need H >= w")
        roots = [e for e in range(self.field.order) if self.pole(e) == 0]
        if roots:
            raise ValueError(f"P has a root in {self.field!r}: {self.field.encode(roots[0])}")

    @property
    def H(self) -> int:
        return self.pole.degree

    @property
    def size(self) -> int:
        return self.w + 1

    def basis(self, e: int) -> list[int]:
        """[u_1(e), .., u_{w+1}(e)] as integers."""
        f = self.field
        inv = f.inv(self.pole(e))
        out = [inv]
        for _ in range(self.w):
            out.append(f.mul(out[-1], e))
        return out

    def header(self) -> str:
        p = ",".join(self.field.encode(c) for c in self.pole.coeffs)
        return f"GKPS {self.field.order} {self.w} {self.H} {p}"

    @staticmethod
    def from_header(field: Field, line: str, degenerate: bool = False) -> GkpsDescriptor:
        tag, q, w, H, p = line.split()
        if tag != "GKPS" or int(q) != field.order:
            raise ValueError(f"malformed GKPS header {line!r}")
        pole = Poly(field, [field.decode(c) for c in p.split(",")])
        if pole.degree != int(H):
            raise ValueError("pole degree disagrees with header")
        return GkpsDescriptor(field, int(w), pole, degenerate or pole.degree < int(w))


@dataclass(frozen=True)
class GkpsMaster:
    descriptor: GkpsDescriptor
    entries: tuple[int, ...]  # upper triangle of a_ij, row order

    def __post_init__(self):
        if len(self.entries) != forms.free_count(self.descriptor.size, 2):
            raise ValueError("wrong number of master coefficients")

    @property
    def matrix(self) -> list[list[int]]:
        n = self.descriptor.size
        pos = forms.index_position(n, 2)
        return [[self.entries[pos[(min(i, j), max(i, j))]] for j in range(n)] for i in range(n)]

    def to_text(self) -> str:
        d = self.descriptor
        lines = [d.field.header(), d.header(), "MASTER"] + [d.field.encode(v) for v in self.entries]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class GkpsShare:
    descriptor: GkpsDescriptor
    owner: FieldElement
    coeffs: tuple[int, ...]

    def to_text(self) -> str:
        d = self.descriptor
        lines = [d.field.header(), d.header(), f"SHARE {self.owner}"]
        lines += [d.field.encode(v) for v in self.coeffs]
        return "\n".join(lines) + "\n"


def gkps_setup(field: Field, w: int, P: Poly, rng, *, allow_degenerate: bool = False) -> GkpsMaster:
    """Random symmetric master for KPS(P); ``rng`` needs ``randrange``."""
    d = GkpsDescriptor(field, w, P, allow_degenerate)
    n = forms.free_count(d.size, 2)
    return GkpsMaster(d, tuple(rng.randrange(field.order) for _ in range(n)))


def gkps_share(master: GkpsMaster, e) -> GkpsShare:
    d = master.descriptor
    e = _member(d.field, e)
    u = d.basis(e.value)
    f = d.field
    coeffs = []
    for row in master.matrix:
        acc = 0
        for a, ui in zip(row, u):
            acc = f.add(acc, f.mul(a, ui))
        coeffs.append(acc)
    return GkpsShare(d, e, tuple(coeffs))


def gkps_key(share: GkpsShare, other) -> FieldElement:
    d = share.descriptor
    other = _member(d.field, other)
    if other == share.owner:
        raise ValueError("a user has no pairwise key with itself")
    f = d.field
    acc = 0
    for c, u in zip(share.coeffs, d.basis(other.value)):
        acc = f.add(acc, f.mul(c, u))
    return FieldElement(f, acc)


def direct_key(master: GkpsMaster, e1, e2) -> FieldElement:
    """F(e1, e2) = sum a_ij e1^i e2^j / (P(e1) P(e2)), straight from the master."""
    d = master.descriptor
    f = d.field
    x, y = f(e1).value, f(e2).value
    num = 0
    for i, row in enumerate(master.matrix):
        for j, a in enumerate(row):
            num = f.add(num, f.mul(a, f.mul(f.pow(x, i), f.pow(y, j))))
    return FieldElement(f, f.div(num, f.mul(d.pole(x), d.pole(y))))


class SchemeCount(NamedTuple):
    bound: int
    prime_form: int | None


def gkps_count(q: int, H: int) -> SchemeCount:
    """The counting formula B_H = sum over t | H of N_t^(H/t), N_t the floored irreducible bound.

    The t = 1 term is zero: linear factors always have a root in GF(q).  For
    prime H it collapses to (q^H - q)/H, which is checked here, and is a true
    lower bound on root-free monic P of degree H.  For composite H the power
    counts ordered tuples and can overshoot (q=3, H=4 gives 26 against 24).
    """
    if H < 1:
        raise ValueError("H must be >= 1")
    total = 0
    for t in divisors(H):
        if t == 1:
            continue
        total += count_irreducibles(q, t).lower_bound ** (H // t)
    prime_form = None
    if is_prime(H):
        prime_form = (q**H - q) // H
        if prime_form != total:
            raise ArithmeticError(f"B_H = {total} disagrees with (q^H - q)/H = {prime_form}")
    return SchemeCount(total, prime_form)


class StorageReport(NamedTuple):
    actual_bits: float
    formula_bits: float


def gkps_storage_bits(q: int, w: int, H: int, t: int = 2) -> StorageReport:
    """Share size as stored here (coefficients only; P lives in the descriptor) and the closed-form count."""
    coeff_bits = math.comb(t + w - 1, t - 1) * math.log2(q)
    return StorageReport(coeff_bits, coeff_bits + (H + 1) * math.log2(q))


# -- t-variable form ------------------------------------------------------------


@dataclass(frozen=True)
class GkpsTMaster:
    descriptor: GkpsDescriptor
    t: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.t < 2:
            raise ValueError(f"t must be >= 2, got {self.t}")
        if len(self.entries) != forms.free_count(self.descriptor.size, self.t):
            raise ValueError("wrong number of master coefficients")

    def evaluate(self, ids) -> FieldElement:
        d = self.descriptor
        vecs = [d.basis(d.field(e).value) for e in ids]
        return FieldElement(d.field, forms.evaluate(d.field, d.size, self.entries, vecs))


@dataclass(frozen=True)
class GkpsTShare:
    descriptor: GkpsDescriptor
    t: int
    owner: FieldElement
    entries: tuple[int, ...]


def gkps_t_setup(field: Field, t: int, w: int, P: Poly, rng, *, allow_degenerate: bool = False) -> GkpsTMaster:
    d = GkpsDescriptor(field, w, P, allow_degenerate)
    n = forms.free_count(d.size, t)
    return GkpsTMaster(d, t, tuple(rng.randrange(field.order) for _ in range(n)))


def gkps_t_share(master: GkpsTMaster, e) -> GkpsTShare:
    d = master.descriptor
    e = _member(d.field, e)
    entries = forms.contract(d.field, d.size, master.t, master.entries, d.basis(e.value))
    return GkpsTShare(d, master.t, e, entries)


def gkps_t_key(share: GkpsTShare, others) -> FieldElement:
    d = share.descriptor
    others = [_member(d.field, e) for e in others]
    if len(others) != share.t - 1:
        raise ValueError(f"need {share.t - 1} other IDs, got {len(others)}")
    ids = [share.owner.value] + [e.value for e in others]
    if len(set(ids)) != len(ids):
        raise ValueError("IDs in a privileged set must be pairwise distinct")
    vecs = [d.basis(e.value) for e in others]
    return FieldElement(d.field, forms.evaluate(d.field, d.size, share.entries, vecs))


def _member(field: Field, e) -> FieldElement:
    if isinstance(e, FieldElement) and e.field != field:
        raise ValueError(f"ID {e!r} is not in {field!r}")
    return field(e)


def master_from_text(text: str) -> GkpsMaster:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    field = Field.from_header(lines[0])
    d = GkpsDescriptor.from_header(field, lines[1])
    if lines[2] != "MASTER":
        raise ValueError("not a GKPS master file")
    return GkpsMaster(d, tuple(field.decode(s) for s in lines[3:]))


def share_from_text(text: str) -> GkpsShare:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    field = Field.from_header(lines[0])
    d = GkpsDescriptor.from_header(field, lines[1])
    kind, owner = lines[2].split()
    if kind != "SHARE":
        raise ValueError("not a GKPS share file")
    coeffs = tuple(field.decode(s) for s in lines[3:])
    if len(coeffs) != d.size:
        raise ValueError("wrong number of share coefficients")
    return GkpsShare(d, FieldElement(field, field.decode(owner)), coeffs)
