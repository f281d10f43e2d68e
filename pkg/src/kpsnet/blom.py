"""Classic t-variable, w-secure Blom-Blundo key predistribution.

The TA draws a symmetric polynomial f(x_1..x_t) with degree 0..w in every
variable; user e stores f(e, x_2, .., x_t) and any t users agree on
f(e_1, .., e_t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import forms
from .field import Field, FieldElement


@dataclass(frozen=True)
class BlomMaster:
    field: Field
    t: int
    w: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.t < 2:
            raise ValueError(f"t must be >= 2, got {self.t}")
        if self.w < 0:
            raise ValueError(f"w must be >= 0, got {self.w}")
        if len(self.entries) != forms.free_count(self.w + 1, self.t):
            raise ValueError("wrong number of master coefficients")

    def coefficient(self, *idx: int) -> FieldElement:
        """a[j_1..j_t] for any index order."""
        pos = forms.index_position(self.w + 1, self.t)[tuple(sorted(idx))]
        return FieldElement(self.field, self.entries[pos])

    def evaluate(self, ids) -> FieldElement:
        vecs = [monomials(self.field, self.field(e).value, self.w) for e in ids]
        return FieldElement(self.field, forms.evaluate(self.field, self.w + 1, self.entries, vecs))

    def to_text(self) -> str:
        lines = [self.field.header(), f"BLOM {self.t} {self.w}", "MASTER"]
        lines += [self.field.encode(v) for v in self.entries]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class BlomShare:
    field: Field
    t: int
    w: int
    owner: FieldElement
    entries: tuple[int, ...]

    def to_text(self) -> str:
        lines = [self.field.header(), f"BLOM {self.t} {self.w}", f"SHARE {self.owner}"]
        lines += [self.field.encode(v) for v in self.entries]
        return "\n".join(lines) + "\n"


def monomials(field: Field, e: int, w: int) -> list[int]:
    out = [1]
    for _ in range(w):
        out.append(field.mul(out[-1], e))
    return out


def blom_setup(field: Field, t: int, w: int, rng) -> BlomMaster:
    """Draw a random symmetric master; ``rng`` needs ``randrange`` (random.Random, SystemRandom)."""
    if t < 2:
        raise ValueError(f"t must be >= 2, got {t}")
    n = forms.free_count(w + 1, t)
    return BlomMaster(field, t, w, tuple(rng.randrange(field.order) for _ in range(n)))


def blom_share(master: BlomMaster, e) -> BlomShare:
    e = _member(master.field, e)
    vec = monomials(master.field, e.value, master.w)
    entries = forms.contract(master.field, master.w + 1, master.t, master.entries, vec)
    return BlomShare(master.field, master.t, master.w, e, entries)


def blom_key(share: BlomShare, others) -> FieldElement:
    """Key of the t-set {owner} + others, computed from the owner's share."""
    field = share.field
    others = [_member(field, e) for e in others]
    if len(others) != share.t - 1:
        raise ValueError(f"need {share.t - 1} other IDs, got {len(others)}")
    ids = [share.owner.value] + [e.value for e in others]
    if len(set(ids)) != len(ids):
        raise ValueError("IDs in a privileged set must be pairwise distinct")
    vecs = [monomials(field, e.value, share.w) for e in others]
    return FieldElement(field, forms.evaluate(field, share.w + 1, share.entries, vecs))


def blom_storage_bits(q: int, t: int, w: int) -> float:
    return math.comb(w + t - 1, t - 1) * math.log2(q)


def _member(field: Field, e) -> FieldElement:
    if isinstance(e, FieldElement) and e.field != field:
        raise ValueError(f"ID {e!r} is not in {field!r}")
    return field(e)


def master_from_text(text: str) -> BlomMaster:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    field = Field.from_header(lines[0])
    tag, t, w = lines[1].split()
    if tag != "BLOM" or lines[2] != "MASTER":
        raise ValueError("not a BLOM master file")
    return BlomMaster(field, int(t), int(w), tuple(field.decode(s) for s in lines[3:]))


def share_from_text(text: str) -> BlomShare:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    field = Field.from_header(lines[0])
    tag, t, w = lines[1].split()
    kind, owner = lines[2].split()
    if tag != "BLOM" or kind != "SHARE":
        raise ValueError("not a BLOM share file")
    t, w = int(t), int(w)
    entries = tuple(field.decode(s) for s in lines[3:])
    if len(entries) != forms.free_count(w + 1, t - 1):
        raise ValueError("wrong number of share coefficients")
    return BlomShare(field, t, w, FieldElement(field, field.decode(owner)), entries)
