"""Non-interactive, identity-based key predistribution for a tree of nodes.

Every node X with children runs a *sibling* instance for its own children.
Every unordered pair of same-level nodes (X, Y) runs a *cross* instance for
the union of their children; X and Y set it up independently from their own
pairwise key, which both can compute.  Each instance is a (2, 2U-2) scheme:
generalized KPS(P_s^h) or a hyperelliptic KPS(a).

A node at level K+1 therefore holds one share per node at its parent's level,
and derives the key with any same-level peer from that one bundle plus the
peer's public path.

Pair-derived instances draw their coefficients from ``expand_seed`` keyed by
the parents' shared key, so their secrecy is computational (as strong as the
expansion function), while sibling instances are drawn from the node's own
randomness.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import random
from collections import Counter
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Mapping, NamedTuple

from . import forms
from .curve import CurveDescriptor, HkpsMaster, HkpsScheme, HkpsShare, hkps_key, hkps_share, id_to_point
from .field import FieldElement, count_irreducibles, enumerate_irreducibles, expand_seed, make_field, tower, trace_norm
from .gkps import GkpsDescriptor, GkpsMaster, GkpsShare, gkps_key, gkps_share

Path = tuple  # tuple[int, ...]; () is the root
BACKENDS = ("gkps", "hkps")


class HierarchyError(ValueError):
    pass


class MissingInstanceError(HierarchyError):
    """The node holds no share of the instance serving the requested pair."""


# -- paths and instance tags ----------------------------------------------------------


def path_text(path: Path) -> str:
    return ".".join(map(str, path)) if path else "-"


def parse_path(text: str) -> Path:
    text = text.strip()
    if text in ("-", ""):
        return ()
    return tuple(int(s) for s in text.split("."))


def sibling_tag(parent: Path) -> tuple:
    return ("S", parent)


def cross_tag(a: Path, b: Path) -> tuple:
    return ("C", min(a, b), max(a, b))


def serving_tag(a: Path, b: Path) -> tuple:
    """Instance that serves the pair (a, b) of same-level nodes."""
    pa, pb = a[:-1], b[:-1]
    return sibling_tag(pa) if pa == pb else cross_tag(pa, pb)


def tag_text(tag: tuple) -> str:
    if tag[0] == "S":
        return "S:" + path_text(tag[1])
    return f"C:{path_text(tag[1])}|{path_text(tag[2])}"


def parse_tag(text: str) -> tuple:
    kind, _, rest = text.partition(":")
    if kind == "S":
        return sibling_tag(parse_path(rest))
    if kind == "C":
        a, b = rest.split("|")
        return cross_tag(parse_path(a), parse_path(b))
    raise ValueError(f"malformed instance tag {text!r}")


def tag_key(tag: tuple):
    return (0 if tag[0] == "S" else 1,) + tuple(tag[1:])


def tag_authors(tag: tuple) -> tuple:
    return tag[1:]


# -- spec ------------------------------------------------------------------------------


@dataclass(frozen=True)
class HierarchySpec:
    """Tree parameters.  ``levels`` counts the root, so a tree has levels 0..levels-1."""

    backend: str
    U: int
    levels: int
    p: int
    k: int = 1
    t: int | None = None
    h: int | None = None

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise HierarchyError(f"backend must be one of {BACKENDS}, got {self.backend!r}")
        if self.U < 1:
            raise HierarchyError(f"expansion number U must be >= 1, got {self.U}")
        if self.levels < 1:
            raise HierarchyError("a hierarchy needs at least the root level")
        q = self.p**self.k
        if self.backend == "gkps":
            if self.t is None or self.h is None:
                raise HierarchyError("gkps backend needs the degree split (t, h)")
            if self.t < 2:
                raise HierarchyError(f"t = {self.t}: linear pole factors have roots in GF(q)")
            if self.t * self.h != 2 * self.U - 1:
                raise HierarchyError(f"t*h = {self.t * self.h} must equal 2U-1 = {2 * self.U - 1}")
            if q < 2 * self.U:
                raise HierarchyError(f"field too small: q = {q} < 2U = {2 * self.U}")
            if count_irreducibles(q, self.t).exact < q:
                raise HierarchyError(f"fewer than q = {q} irreducibles of degree t = {self.t}")
        else:
            if self.p == 2:
                raise HierarchyError("hkps backend needs odd q")
            if 2 * self.U > q * q:
                raise HierarchyError(f"field too small: 2U = {2 * self.U} > q^2 = {q * q}")

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def w(self) -> int:
        return 2 * self.U - 2

    def to_json(self) -> str:
        d = {"backend": self.backend, "U": self.U, "levels": self.levels, "p": self.p, "k": self.k}
        if self.backend == "gkps":
            d.update(t=self.t, h=self.h)
        return json.dumps(d, sort_keys=True)

    @classmethod
    def from_dict(cls, d: Mapping) -> HierarchySpec:
        return cls(d["backend"], int(d["U"]), int(d["levels"]), int(d["p"]), int(d.get("k", 1)),
                   d.get("t"), d.get("h"))


# -- backends ------------------------------------------------------------------------


class _Gkps:
    def __init__(self, spec: HierarchySpec):
        self.spec = spec
        self.field = make_field(spec.p, spec.k)
        self.key_field = self.field
        self.index_field = self.field
        self.w = spec.w
        self._descriptors: dict[int, GkpsDescriptor] = {}
        self._index: dict[GkpsDescriptor, int] = {}

    @cached_property
    def poles(self):
        # canonical element <-> irreducible correspondence: element value i -> i-th irreducible
        return enumerate_irreducibles(self.field, self.spec.t, self.field.order)

    def descriptor(self, index: int) -> GkpsDescriptor:
        if index not in self._descriptors:
            d = GkpsDescriptor(self.field, self.w, self.poles[index] ** self.spec.h)
            self._descriptors[index] = d
            self._index[d] = index
        return self._descriptors[index]

    @property
    def free_count(self) -> int:
        return forms.free_count(self.w + 1, 2)

    def master(self, index: int, entries) -> GkpsMaster:
        return GkpsMaster(self.descriptor(index), tuple(entries))

    def share(self, master: GkpsMaster, pos: int) -> GkpsShare:
        return gkps_share(master, self.field(pos))

    def rebuild_share(self, index: int, pos: int, coeffs) -> GkpsShare:
        return GkpsShare(self.descriptor(index), self.field(pos), tuple(coeffs))

    def index_of(self, share: GkpsShare) -> int:
        d = share.descriptor
        i = 0
        while d not in self._index and i < self.field.order:
            self.descriptor(i)
            i += 1
        return self._index[d]

    def index_from_key(self, key: FieldElement) -> int:
        return key.value

    def share_bits(self) -> float:
        # w + 1 coefficients plus the instance index s (P_s is public given s)
        return (self.w + 2) * math.log2(self.field.order)

    def storage_bound(self, A: int) -> float:
        return 2 * A * (2 * self.spec.U - 1) * math.log2(self.field.order)

    def level1_bound(self) -> float:
        return 2 * (self.spec.U - 1) * math.log2(self.field.order)


class _Hkps:
    def __init__(self, spec: HierarchySpec):
        self.spec = spec
        self.field = tower(spec.p, spec.k)
        self.key_field = self.field
        self.index_field = self.field.base
        self.w = spec.w
        self._schemes: dict[int, HkpsScheme] = {}

    def descriptor(self, index: int) -> HkpsScheme:
        if index not in self._schemes:
            self._schemes[index] = HkpsScheme(CurveDescriptor(self.field, index), self.w)
        return self._schemes[index]

    @property
    def free_count(self) -> int:
        return forms.free_count(self.w + (self.spec.q + 1) // 2, 2)

    def master(self, index: int, entries) -> HkpsMaster:
        return HkpsMaster(self.descriptor(index), tuple(entries))

    def point(self, scheme: HkpsScheme, pos: int):
        # branch 0 only: distinct x give distinct points whatever a is
        return id_to_point(self.field(pos), 0, scheme.curve)

    def share(self, master: HkpsMaster, pos: int) -> HkpsShare:
        return hkps_share(master, self.point(master.scheme, pos))

    def rebuild_share(self, index: int, pos: int, coeffs) -> HkpsShare:
        scheme = self.descriptor(index)
        return HkpsShare(scheme, self.point(scheme, pos), tuple(coeffs))

    def index_of(self, share: HkpsShare) -> int:
        return share.scheme.curve.a

    def index_from_key(self, key: FieldElement) -> int:
        return trace_norm(key)[1].value

    def share_bits(self) -> float:
        n = self.w + (self.spec.q + 1) // 2
        return n * math.log2(self.field.order) + math.log2(self.spec.q)

    def storage_bound(self, A: int) -> float:
        q = self.spec.q
        return 2 * A * (2 * self.spec.U + (q - 3) / 2) * math.log2(q * q)

    def level1_bound(self) -> float:
        q = self.spec.q
        return 2 * (2 * self.spec.U + (q - 3) / 2) * math.log2(q * q)


def make_backend(spec: HierarchySpec):
    return _Gkps(spec) if spec.backend == "gkps" else _Hkps(spec)


# -- tree ------------------------------------------------------------------------------


@dataclass(frozen=True)
class Instance:
    tag: tuple
    index: int  # s (generalized) or a (hyperelliptic), in GF(q)
    master: object


@dataclass(frozen=True)
class NodeState:
    path: Path
    bundle: tuple  # ((tag, share), ...) in canonical tag order

    @property
    def position(self) -> int:
        return self.path[-1]

    @property
    def level(self) -> int:
        return len(self.path)

    @property
    def parent(self) -> Path:
        return self.path[:-1]

    def share(self, tag: tuple):
        for t, s in self.bundle:
            if t == tag:
                return s
        return None

    @property
    def local_id(self):
        """The node's ID in its sibling instance."""
        return self.share(sibling_tag(self.parent)).owner

    def tags(self) -> list[tuple]:
        return [t for t, _ in self.bundle]


def instance_position(tag: tuple, node: Path, U: int) -> int:
    """Local ID index of ``node`` inside instance ``tag``: children of the smaller parent first."""
    j = node[-1]
    if tag[0] == "C" and node[:-1] == tag[2]:
        return U + j
    return j


def derive_key(state: NodeState, peer: Path, U: int) -> FieldElement:
    """Pairwise key from one node's bundle and the peer's public path; no other input."""
    if peer == state.path:
        raise HierarchyError("a node has no pairwise key with itself")
    if len(peer) != len(state.path):
        raise HierarchyError("keys exist only between nodes on the same level")
    tag = serving_tag(state.path, peer)
    share = state.share(tag)
    if share is None:
        raise MissingInstanceError(f"{path_text(state.path)} holds no share of {tag_text(tag)}")
    pos = instance_position(tag, peer, U)
    if isinstance(share, GkpsShare):
        return gkps_key(share, share.descriptor.field(pos))
    return hkps_key(share, (share.scheme.field(pos), 0))


def _node_rng(seed, path: Path, entropy: bool):
    if entropy:
        return random.SystemRandom()
    digest = hashlib.sha256(f"kpsnet-node|{seed}|{path_text(path)}".encode()).digest()
    return random.Random(int.from_bytes(digest, "big"))


@dataclass
class HierarchyTree:
    spec: HierarchySpec
    seed: int | None
    nodes: dict = dc_field(default_factory=dict)      # Path -> NodeState (root excluded)
    instances: dict = dc_field(default_factory=dict)  # tag -> Instance (authority-side masters)
    entropy: bool = False

    @cached_property
    def backend(self):
        return make_backend(self.spec)

    def level(self, K: int) -> list[Path]:
        if K == 0:
            return [()]
        return sorted(p for p in self.nodes if len(p) == K)

    def exists(self, path: Path) -> bool:
        return path == () or path in self.nodes

    def children(self, path: Path) -> list[Path]:
        return sorted(p for p in self.nodes if len(p) == len(path) + 1 and p[:-1] == path)

    def copy(self) -> HierarchyTree:
        return HierarchyTree(self.spec, self.seed, dict(self.nodes), dict(self.instances), self.entropy)

    # -- provisioning --------------------------------------------------------------

    def _instance(self, tag: tuple) -> Instance:
        inst = self.instances.get(tag)
        if inst is not None:
            return inst
        be = self.backend
        if tag[0] == "S":
            rng = _node_rng(self.seed, tag[1], self.entropy)
            index = rng.randrange(be.index_field.order)
            entries = [rng.randrange(be.key_field.order) for _ in range(be.free_count)]
        else:
            a, b = tag[1], tag[2]
            key = derive_key(self.nodes[a], b, self.spec.U)
            index = be.index_from_key(key)
            entries = [e.value for e in expand_seed(key, tag_text(tag).encode(), be.free_count)]
        inst = Instance(tag, index, be.master(index, entries))
        self.instances[tag] = inst
        return inst

    def _provision(self, parent: Path, j: int) -> NodeState:
        if not 0 <= j < self.spec.U:
            raise HierarchyError(f"child index {j} outside 0..U-1")
        child = parent + (j,)
        tags = [sibling_tag(parent)]
        tags += [cross_tag(parent, other) for other in self.level(len(parent)) if other != parent]
        bundle = []
        for tag in sorted(tags, key=tag_key):
            inst = self._instance(tag)
            bundle.append((tag, self.backend.share(inst.master, instance_position(tag, child, self.spec.U))))
        state = NodeState(child, tuple(bundle))
        self.nodes[child] = state
        return state

    # -- text form -------------------------------------------------------------------

    def to_text(self) -> str:
        s = self.spec
        be = self.backend
        kf, xf = be.key_field, be.index_field
        seed = "os" if self.entropy else str(self.seed)
        lines = [f"HIER {s.backend} {s.U} {s.levels - 1} {s.p}^{s.k} {seed}"]
        lines.append(f"PARAMS {s.t} {s.h}" if s.backend == "gkps" else "PARAMS - -")
        for tag in sorted(self.instances, key=tag_key):
            inst = self.instances[tag]
            entries = ",".join(kf.encode(v) for v in inst.master.entries)
            lines.append(f"INSTANCE {tag_text(tag)} {xf.encode(inst.index)} {entries}")
        for path in sorted(self.nodes):
            lines.append(f"NODE {path_text(path)}")
            for tag, share in self.nodes[path].bundle:
                coeffs = ",".join(kf.encode(v) for v in share.coeffs)
                lines.append(f"SHARE {tag_text(tag)} {xf.encode(be.index_of(share))} {coeffs}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> HierarchyTree:
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        head = lines[0].split()
        if head[0] != "HIER" or len(head) != 6:
            raise ValueError("not a HIER file")
        backend, U, L, pk, seed = head[1], int(head[2]), int(head[3]), head[4], head[5]
        p, k = (int(v) for v in pk.split("^"))
        params = lines[1].split()
        t = h = None
        if backend == "gkps":
            t, h = int(params[1]), int(params[2])
        spec = HierarchySpec(backend, U, L + 1, p, k, t, h)
        tree = cls(spec, None if seed == "os" else int(seed), entropy=seed == "os")
        be = tree.backend
        kf, xf = be.key_field, be.index_field
        current = None
        bundle: list = []

        def flush():
            if current is not None:
                tree.nodes[current] = NodeState(current, tuple(bundle))

        for ln in lines[2:]:
            parts = ln.split()
            if parts[0] == "INSTANCE":
                tag, index = parse_tag(parts[1]), xf.decode(parts[2])
                entries = [kf.decode(v) for v in parts[3].split(",")]
                tree.instances[tag] = Instance(tag, index, be.master(index, entries))
            elif parts[0] == "NODE":
                flush()
                current, bundle = parse_path(parts[1]), []
            elif parts[0] == "SHARE":
                tag, index = parse_tag(parts[1]), xf.decode(parts[2])
                coeffs = [kf.decode(v) for v in parts[3].split(",")]
                pos = instance_position(tag, current, U)
                bundle.append((tag, be.rebuild_share(index, pos, coeffs)))
            else:
                raise ValueError(f"unexpected record {parts[0]!r}")
        flush()
        return tree


def full_shape(U: int, levels: int) -> dict:
    """Every node above the last level has U children."""
    shape = {}
    frontier = [()]
    for _ in range(levels - 1):
        nxt = []
        for path in frontier:
            shape[path] = U
            nxt += [path + (j,) for j in range(U)]
        frontier = nxt
    return shape


def build_hierarchy(spec: HierarchySpec, shape: Mapping | None = None, seed: int | None = 0,
                    *, entropy: bool = False) -> HierarchyTree:
    """Provision a tree level by level.  ``shape`` maps a path to its child count (default: full)."""
    if shape is None:
        shape = full_shape(spec.U, spec.levels)
    tree = HierarchyTree(spec, seed, entropy=entropy)
    for K in range(spec.levels - 1):
        for parent in tree.level(K):
            count = shape.get(parent, 0)
            if count > spec.U:
                raise HierarchyError(f"{path_text(parent)} has {count} children > U = {spec.U}")
            for j in range(count):
                tree._provision(parent, j)
    for path in shape:
        if shape[path] and not tree.exists(path):
            raise HierarchyError(f"shape names missing node {path_text(path)}")
    return tree


def pair_key(tree: HierarchyTree, a: Path, b: Path) -> FieldElement:
    for p in (a, b):
        if p not in tree.nodes:
            raise HierarchyError(f"no node at {path_text(p)}")
    if a == b:
        raise HierarchyError("identical paths")
    if len(a) != len(b):
        raise HierarchyError("keys exist only between nodes on the same level")
    return derive_key(tree.nodes[a], b, tree.spec.U)


def add_node(tree: HierarchyTree, parent: Path) -> tuple[HierarchyTree, NodeState]:
    """New child under ``parent``; returns the updated tree and the new node's state.

    Existing NodeStates are untouched.  A node added to a level after its
    cousins were provisioned gets children whose cousins hold no share of the
    corresponding cross instance; those pairs raise MissingInstanceError.
    """
    if not tree.exists(parent):
        raise HierarchyError(f"no node at {path_text(parent)}")
    if len(parent) >= tree.spec.levels - 1:
        raise HierarchyError(f"{path_text(parent)} is on the last level")
    used = {c[-1] for c in tree.children(parent)}
    free = [j for j in range(tree.spec.U) if j not in used]
    if not free:
        raise HierarchyError(f"{path_text(parent)} already has U = {tree.spec.U} children")
    new = tree.copy()
    state = new._provision(parent, free[0])
    return new, state


class StorageReport(NamedTuple):
    actual_bits: float
    bound_bits: float
    instances: int  # A_K: nodes at the parent's level
    level1_bound_bits: float | None  # literal level-1 figure, only for children of the root


def storage_bits(tree: HierarchyTree, path: Path) -> StorageReport:
    if path == ():
        return StorageReport(0.0, 0.0, 0, None)
    if path not in tree.nodes:
        raise HierarchyError(f"no node at {path_text(path)}")
    be = tree.backend
    state = tree.nodes[path]
    A = len(tree.level(len(path) - 1))
    actual = len(state.bundle) * be.share_bits()
    level1 = be.level1_bound() if len(path) == 1 else None
    return StorageReport(actual, be.storage_bound(A), A, level1)


# -- compromise --------------------------------------------------------------------------


@dataclass
class LeakageReport:
    exposed: dict        # tag -> reason ("threshold", "authority", "pair-key")
    derivable: list      # surviving same-level pairs whose key the adversary can compute
    removed: set         # compromised nodes and their descendants
    pruned: HierarchyTree

    @property
    def fully_exposed(self) -> list:
        """Exposed instances other than those merely authored by a compromised node."""
        return sorted((t for t, r in self.exposed.items() if r != "authority"), key=tag_key)

    def to_text(self) -> str:
        lines = [f"EXPOSED {tag_text(t)} {self.exposed[t]}" for t in sorted(self.exposed, key=tag_key)]
        lines += [f"DERIVABLE {path_text(a)} {path_text(b)}" for a, b in self.derivable]
        lines += [f"REMOVED {path_text(p)}" for p in sorted(self.removed)]
        return "\n".join(lines) + ("\n" if lines else "")


def compromise(tree: HierarchyTree, paths) -> LeakageReport:
    """What an adversary holding the given nodes can reach, and the tree after pruning it away.

    An instance is exposed when it has >= w+1 leaked shares, when one of its
    authors is compromised, or (cross instances) when the authors' pairwise
    key is derivable, since its coefficients are expanded from that key.
    """
    comp = set(map(tuple, paths))
    for p in comp:
        if p not in tree.nodes:
            raise HierarchyError(f"no node at {path_text(p)}")
    w = tree.spec.w
    leaked = Counter(tag for p in comp for tag in tree.nodes[p].tags())
    exposed = {tag: "threshold" for tag, n in leaked.items() if n >= w + 1}
    for tag in tree.instances:
        if any(a in comp for a in tag_authors(tag)):
            exposed.setdefault(tag, "authority")
    derivable = []
    depth = max((len(p) for p in tree.nodes), default=0)
    for K in range(1, depth + 1):
        for a, b in itertools.combinations(tree.level(K), 2):
            if a in comp or b in comp or serving_tag(a, b) in exposed:
                derivable.append((a, b))
                if cross_tag(a, b) in tree.instances:
                    exposed.setdefault(cross_tag(a, b), "pair-key")

    removed = {p for p in tree.nodes if any(p[:i] in comp for i in range(1, len(p) + 1))}
    derivable = [(a, b) for a, b in derivable if a not in removed and b not in removed]
    pruned = HierarchyTree(tree.spec, tree.seed, entropy=tree.entropy)
    for path, state in tree.nodes.items():
        if path in removed:
            continue
        if any(t in exposed for t in state.tags()):
            state = NodeState(path, tuple((t, s) for t, s in state.bundle if t not in exposed))
        pruned.nodes[path] = state
    for tag, inst in tree.instances.items():
        if tag not in exposed and any(a == () or a in pruned.nodes for a in tag_authors(tag)):
            pruned.instances[tag] = inst
    return LeakageReport(exposed, derivable, removed, pruned)
