"""Certification of w-security on small instances.

Two independent routes: the rank property of the evaluation matrix (every
w+1 columns independent), and exact enumeration of every symmetric master
consistent with what a coalition holds, tallying the target key.  The
enumeration only ever sees coalition shares and public IDs.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Sequence

from .curve import CurvePoint, HkpsScheme, affine_points, id_to_point
from .field import Field, FieldElement
from .gkps import GkpsDescriptor

DEFAULT_LIMIT = 10**6


class IntractableError(ValueError):
    pass


class ExposedInstanceError(ValueError):
    pass


# -- evaluation matrices ---------------------------------------------------------------


@dataclass(frozen=True)
class EvalMatrix:
    field: Field
    rows: tuple[tuple[int, ...], ...]  # rows = basis functions
    ids: tuple                          # column labels

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.ids)

    def column(self, j: int) -> list[int]:
        return [r[j] for r in self.rows]


def _basis_fn(scheme):
    if isinstance(scheme, GkpsDescriptor):
        return lambda e: scheme.basis(scheme.field(e).value)
    if isinstance(scheme, HkpsScheme):
        def values(W):
            if not isinstance(W, CurvePoint):
                W = id_to_point(W[0], W[1], scheme.curve)
            return scheme.values(W)
        return values
    raise TypeError(f"unsupported scheme {type(scheme).__name__}")


def build_eval_matrix(scheme, ids: Sequence | None = None) -> EvalMatrix:
    """Basis functions of ``scheme`` evaluated at ``ids`` (default: every field element / affine point)."""
    if ids is None:
        ids = scheme.field.elements() if isinstance(scheme, GkpsDescriptor) else affine_points(scheme.curve)
    ids = tuple(ids)
    if not ids:
        raise ValueError("empty enrollment")
    fn = _basis_fn(scheme)
    cols = [fn(e) for e in ids]
    rows = tuple(tuple(c[i] for c in cols) for i in range(len(cols[0])))
    return EvalMatrix(scheme.field, rows, ids)


def rank(field: Field, vectors: Sequence[Sequence[int]]) -> int:
    """Rank of a list of vectors by Gaussian elimination."""
    m = [list(v) for v in vectors]
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = field.inv(m[r][c])
        row = [field.mul(x, inv) for x in m[r]]
        m[r] = row
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], row)]
        r += 1
        if r == len(m):
            break
    return r


@dataclass(frozen=True)
class MdsResult:
    ok: bool
    witness: tuple | None   # column indices of a dependent subset
    checked: int
    certified: bool         # exhaustive and ok
    statement: str

    def to_text(self) -> str:
        lines = [f"RESULT {'certified' if self.certified else ('pass' if self.ok else 'refuted')}",
                 f"CHECKED {self.checked}", f"STATEMENT {self.statement}"]
        if self.witness is not None:
            lines.append("WITNESS " + ",".join(map(str, self.witness)))
        return "\n".join(lines) + "\n"


def mds_check(matrix: EvalMatrix, w: int, mode: str = "exhaustive", samples: int = 100_000,
              seed: int = 0) -> MdsResult:
    """Is every (w+1)-subset of columns linearly independent?

    ``mode="sampled"`` checks ``samples`` random subsets and never certifies.
    """
    nrows, ncols = matrix.shape
    if w + 1 > ncols:
        raise ValueError(f"w+1 = {w + 1} exceeds the {ncols} columns")
    if nrows < w + 1:
        raise ValueError(f"only {nrows} rows; need at least w+1 = {w + 1}")
    cols = [matrix.column(j) for j in range(ncols)]
    if mode == "exhaustive":
        subsets = itertools.combinations(range(ncols), w + 1)
    elif mode == "sampled":
        rng = random.Random(seed)
        subsets = (tuple(sorted(rng.sample(range(ncols), w + 1))) for _ in range(samples))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    checked = 0
    for sub in subsets:
        checked += 1
        if rank(matrix.field, [cols[j] for j in sub]) < w + 1:
            return MdsResult(False, sub, checked, False, f"columns {sub} are dependent")
    if mode == "exhaustive":
        return MdsResult(True, None, checked, True, f"all {checked} subsets of size {w + 1} independent")
    total = math.comb(ncols, w + 1)
    return MdsResult(True, None, checked, False,
                     f"{checked} sampled subsets of {total} independent; no certificate")


def count_zeros(field: Field, coeffs: Sequence[int], pole) -> int:
    """Zeros on GF(q) of (sum c_i x^(i-1)) / P(x)."""
    n = 0
    for x in range(field.order):
        num = 0
        for c in reversed(coeffs):
            num = field.add(field.mul(num, x), c)
        if num == 0 and pole(x) != 0:
            n += 1
    return n


# -- conditional uniformity ---------------------------------------------------------------


@dataclass(frozen=True)
class UniformityVerdict:
    target: tuple
    coalition: tuple
    distribution: dict   # key value -> number of consistent masters
    consistent: int
    uniform: bool

    def to_text(self) -> str:
        dist = " ".join(f"{k}:{v}" for k, v in sorted(self.distribution.items()))
        return (f"RESULT {'certified' if self.uniform else 'refuted'}\n"
                f"CONSISTENT {self.consistent}\nDISTRIBUTION {dist}\n")


def _functionals(field: Field, n: int, coalition_vecs, target_vecs):
    """Coefficient of each free entry a_ij (i <= j) in every view coordinate and in the key."""
    pairs = list(itertools.combinations_with_replacement(range(n), 2))
    view_rows = []  # one row per (member, coordinate): coefficient per free entry
    for u in coalition_vecs:
        for k in range(n):
            row = []
            for i, j in pairs:
                # c_k = sum_l a_kl u_l
                c = 0
                if i == k:
                    c = field.add(c, u[j])
                if j == k and i != j:
                    c = field.add(c, u[i])
                row.append(c)
            view_rows.append(row)
    u, v = target_vecs
    key_row = []
    for i, j in pairs:
        c = field.mul(u[i], v[j])
        if i != j:
            c = field.add(c, field.mul(u[j], v[i]))
        key_row.append(c)
    return len(pairs), view_rows, key_row


def _enumerate(field: Field, n: int, coalition_vecs, target_vecs, limit: int):
    nfree, view_rows, key_row = _functionals(field, n, coalition_vecs, target_vecs)
    if field.order**nfree > limit:
        raise IntractableError(f"{field.order}^{nfree} masters exceed the limit {limit}")
    tallies: dict = defaultdict(Counter)
    add, mul = field.add, field.mul
    for entries in itertools.product(range(field.order), repeat=nfree):
        view = []
        for row in view_rows:
            acc = 0
            for a, c in zip(entries, row):
                if a and c:
                    acc = add(acc, mul(a, c))
            view.append(acc)
        key = 0
        for a, c in zip(entries, key_row):
            if a and c:
                key = add(key, mul(a, c))
        tallies[tuple(view)][key] += 1
    return tallies


def _verdict(field, target, coalition, tally: Counter) -> UniformityVerdict:
    dist = {FieldElement(field, k): tally.get(k, 0) for k in range(field.order)}
    counts = set(dist.values())
    return UniformityVerdict(tuple(target), tuple(coalition), dist, sum(tally.values()),
                             len(counts) == 1 and 0 not in counts)


def _check_sizes(scheme, coalition, target):
    size = scheme.size
    if len(coalition) > size:
        raise ValueError(f"coalition of {len(coalition)} exceeds the basis size {size}")
    if len(target) != 2 or target[0] == target[1]:
        raise ValueError("target must be two distinct IDs")
    if any(t == c for t in target for c in coalition):
        raise ValueError("target pair must be disjoint from the coalition")


def uniformity_oracle(scheme, coalition: Sequence, target: Sequence, view: Sequence[Sequence[int]],
                      *, limit: int = DEFAULT_LIMIT) -> UniformityVerdict:
    """Distribution of the target key over all masters consistent with the coalition's shares.

    ``view[i]`` is the coefficient vector of ``coalition[i]``'s share.
    """
    _check_sizes(scheme, coalition, target)
    fn = _basis_fn(scheme)
    f = scheme.field
    tallies = _enumerate(f, scheme.size, [fn(c) for c in coalition], [fn(t) for t in target], limit)
    observed = tuple(int(v) for share in view for v in share)
    return _verdict(f, target, coalition, tallies.get(observed, Counter()))


def uniformity_all_views(scheme, coalition: Sequence, target: Sequence, *,
                         limit: int = DEFAULT_LIMIT) -> list[UniformityVerdict]:
    """One verdict per coalition view that some master produces, from a single enumeration."""
    _check_sizes(scheme, coalition, target)
    fn = _basis_fn(scheme)
    f = scheme.field
    tallies = _enumerate(f, scheme.size, [fn(c) for c in coalition], [fn(t) for t in target], limit)
    return [_verdict(f, target, coalition, tallies[v]) for v in sorted(tallies)]


def resilience_check(tree, compromised, target, *, limit: int = DEFAULT_LIMIT) -> UniformityVerdict:
    """Uniformity of a surviving pair's key given the compromised members of its instance."""
    from .hierarchy import compromise, serving_tag, tag_text

    a, b = (tuple(p) for p in target)
    compromised = [tuple(p) for p in compromised]
    if len(a) != len(b) or a == b:
        raise ValueError("target must be two distinct same-level nodes")
    tag = serving_tag(a, b)
    report = compromise(tree, compromised)
    if tag in report.exposed:
        raise ExposedInstanceError(f"instance {tag_text(tag)} is exposed ({report.exposed[tag]})")
    if a in compromised or b in compromised:
        raise ValueError("target pair must be uncompromised")
    members = [p for p in compromised if tree.nodes[p].share(tag) is not None]
    shares = [tree.nodes[p].share(tag) for p in members]
    sa, sb = tree.nodes[a].share(tag), tree.nodes[b].share(tag)
    scheme = sa.descriptor if hasattr(sa, "descriptor") else sa.scheme
    return uniformity_oracle(scheme, [s.owner for s in shares], (sa.owner, sb.owner),
                             [s.coeffs for s in shares], limit=limit)
