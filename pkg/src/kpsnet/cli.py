"""Command-line front end.

Exit status: 0 success / certified, 1 refuted or precondition violation,
2 intractable, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path as FsPath

from . import blom, curve, gkps, hierarchy, verify
from .field import Field, Poly, count_irreducibles, enumerate_irreducibles, make_field, prime_power, tower

EXIT_OK, EXIT_REFUTED, EXIT_INTRACTABLE, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- helpers ------------------------------------------------------------------------


def _rng(args):
    if getattr(args, "entropy", None) == "os":
        return random.SystemRandom()
    if args.seed is None:
        raise UsageError("--seed is required for generating commands (or pass --entropy os)")
    return random.Random(args.seed)


def _field_for_q(q: int) -> Field:
    p, k = prime_power(q)
    return make_field(p, k)


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        FsPath(out).write_text(text)


def _read(path: str) -> str:
    return FsPath(path).read_text()


def load_scheme_file(text: str):
    """Parse any master or share file written by ``kps gen`` / ``kps share``."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 3:
        raise ValueError("truncated scheme file")
    kind = lines[1].split()[0]
    is_master = lines[2].strip() == "MASTER"
    module = {"BLOM": blom, "GKPS": gkps, "HKPS": curve}.get(kind)
    if module is None:
        raise ValueError(f"unknown scheme kind {kind!r}")
    return (module.master_from_text if is_master else module.share_from_text)(text)


def _scheme_of(obj):
    """(scheme descriptor usable by the verifier, w) for a loaded master/share."""
    if isinstance(obj, (blom.BlomMaster, blom.BlomShare)):
        if obj.t != 2:
            raise ValueError("the verifier handles 2-variable schemes only")
        return gkps.GkpsDescriptor(obj.field, obj.w, Poly.const(obj.field), degenerate=True), obj.w
    if isinstance(obj, (gkps.GkpsMaster, gkps.GkpsShare)):
        return obj.descriptor, obj.descriptor.w
    return obj.scheme, obj.scheme.w


def _parse_id(text: str, obj):
    """Element encoding, or ``x:branch`` for curve schemes."""
    if isinstance(obj, (curve.HkpsMaster, curve.HkpsShare)):
        f = obj.scheme.field
        x, _, branch = text.partition(":")
        return (f(f.decode(x)), int(branch or 0))
    f = obj.field if hasattr(obj, "field") else obj.descriptor.field
    return f(f.decode(text))


def _id_text(ident) -> str:
    if isinstance(ident, tuple):
        return f"{ident[0]}:{ident[1]}"
    return str(ident)


# -- subcommands -------------------------------------------------------------------


def cmd_field_info(args):
    f = make_field(args.p, args.k)
    print(f.header())
    print(f"order {f.order}")
    print(f"modulus {Poly(make_field(args.p, 1), f.modulus)!r}")
    return EXIT_OK


def cmd_irr(args):
    f = _field_for_q(args.q)
    if args.action == "count":
        c = count_irreducibles(args.q, args.t)
        print(f"exact {c.exact}")
        print(f"lower_bound {c.lower_bound}")
        return EXIT_OK
    for poly in enumerate_irreducibles(f, args.t, args.count):
        print(",".join(f.encode(c) for c in poly.coeffs))
    return EXIT_OK


def cmd_kps_gen(args):
    rng = _rng(args)
    if args.backend == "blom":
        master = blom.blom_setup(_field_for_q(args.q), args.t, args.w, rng)
    elif args.backend == "gkps":
        if args.P is None:
            raise UsageError("--P is required for the gkps backend")
        f = _field_for_q(args.q)
        P = Poly(f, [f.decode(c) for c in args.P.split(",")])
        master = gkps.gkps_setup(f, args.w, P, rng)
    else:
        p, k = prime_power(args.q)
        ext = tower(p, k)
        a = ext.base.decode(args.a) if args.a is not None else rng.randrange(ext.base.order)
        master = curve.hkps_setup(curve.CurveDescriptor(ext, a), args.w, rng)
    _write(master.to_text(), args.out)
    return EXIT_OK


def cmd_kps_share(args):
    master = load_scheme_file(_read(args.master))
    ident = _parse_id(args.id, master)
    if isinstance(master, blom.BlomMaster):
        share = blom.blom_share(master, ident)
    elif isinstance(master, gkps.GkpsMaster):
        share = gkps.gkps_share(master, ident)
    elif isinstance(master, curve.HkpsMaster):
        share = curve.hkps_share(master, ident)
    else:
        raise ValueError("--master must name a master file")
    _write(share.to_text(), args.out)
    return EXIT_OK


def cmd_kps_key(args):
    share = load_scheme_file(_read(args.share))
    peers = [_parse_id(p, share) for p in args.peer]
    if isinstance(share, blom.BlomShare):
        key = blom.blom_key(share, peers)
    elif len(peers) != 1:
        raise ValueError("--peer: 2-variable schemes take exactly one peer")
    elif isinstance(share, gkps.GkpsShare):
        key = gkps.gkps_key(share, peers[0])
    elif isinstance(share, curve.HkpsShare):
        key = curve.hkps_key(share, peers[0])
    else:
        raise ValueError("--share must name a share file")
    print(key)
    return EXIT_OK


def _paths(texts):
    return [hierarchy.parse_path(t) for t in texts]


def cmd_hier_build(args):
    spec_data = json.loads(_read(args.spec))
    spec = hierarchy.HierarchySpec.from_dict(spec_data)
    shape = None
    if "shape" in spec_data:
        shape = {hierarchy.parse_path(k): int(v) for k, v in spec_data["shape"].items()}
    entropy = args.entropy == "os"
    if args.seed is None and not entropy:
        raise UsageError("--seed is required for generating commands (or pass --entropy os)")
    tree = hierarchy.build_hierarchy(spec, shape, args.seed, entropy=entropy)
    _write(tree.to_text(), args.out)
    return EXIT_OK


def cmd_hier_key(args):
    tree = hierarchy.HierarchyTree.from_text(_read(args.tree))
    print(hierarchy.pair_key(tree, hierarchy.parse_path(args.a), hierarchy.parse_path(args.b)))
    return EXIT_OK


def cmd_hier_add(args):
    tree = hierarchy.HierarchyTree.from_text(_read(args.tree))
    new, state = hierarchy.add_node(tree, hierarchy.parse_path(args.parent))
    _write(new.to_text(), args.out or args.tree)
    print(f"added {hierarchy.path_text(state.path)}", file=sys.stderr)
    return EXIT_OK


def cmd_hier_storage(args):
    tree = hierarchy.HierarchyTree.from_text(_read(args.tree))
    r = hierarchy.storage_bits(tree, hierarchy.parse_path(args.node))
    print(f"actual_bits {r.actual_bits:.4f}")
    print(f"bound_bits {r.bound_bits:.4f}")
    print(f"instances {r.instances}")
    if r.level1_bound_bits is not None:
        print(f"level1_bound_bits {r.level1_bound_bits:.4f}")
    return EXIT_OK


def cmd_hier_compromise(args):
    tree = hierarchy.HierarchyTree.from_text(_read(args.tree))
    report = hierarchy.compromise(tree, _paths(args.nodes))
    sys.stdout.write(report.to_text())
    if args.out:
        _write(report.pruned.to_text(), args.out)
    return EXIT_OK


def cmd_verify_mds(args):
    scheme, w = _scheme_of(load_scheme_file(_read(args.scheme)))
    result = verify.mds_check(verify.build_eval_matrix(scheme), w, args.mode, args.samples, args.sample_seed)
    sys.stdout.write(result.to_text())
    return EXIT_OK if result.ok else EXIT_REFUTED


def cmd_verify_uniform(args):
    obj = load_scheme_file(_read(args.scheme))
    if not isinstance(obj, (blom.BlomMaster, gkps.GkpsMaster, curve.HkpsMaster)):
        raise ValueError("--scheme must name a master file (the TA plays the coalition)")
    scheme, _ = _scheme_of(obj)
    coalition = [_parse_id(e, obj) for e in args.coalition.split(",") if e] if args.coalition else []
    target = [_parse_id(e, obj) for e in args.target.split(",")]
    if args.all_views:
        verdicts = verify.uniformity_all_views(scheme, coalition, target, limit=args.limit)
        ok = all(v.uniform for v in verdicts)
        print(f"RESULT {'certified' if ok else 'refuted'}")
        print(f"VIEWS {len(verdicts)}")
        return EXIT_OK if ok else EXIT_REFUTED
    view = [_share_coeffs(obj, c) for c in coalition]
    verdict = verify.uniformity_oracle(scheme, coalition, target, view, limit=args.limit)
    sys.stdout.write(verdict.to_text())
    return EXIT_OK if verdict.uniform else EXIT_REFUTED


def _share_coeffs(master, ident):
    if isinstance(master, blom.BlomMaster):
        return blom.blom_share(master, ident).entries
    if isinstance(master, gkps.GkpsMaster):
        return gkps.gkps_share(master, ident).coeffs
    return curve.hkps_share(master, ident).coeffs


def cmd_verify_resilience(args):
    tree = hierarchy.HierarchyTree.from_text(_read(args.tree))
    target = (hierarchy.parse_path(args.a), hierarchy.parse_path(args.b))
    try:
        verdict = verify.resilience_check(tree, _paths(args.nodes or []), target, limit=args.limit)
    except verify.ExposedInstanceError as exc:
        print(f"RESULT refuted\nREASON {exc}")
        return EXIT_REFUTED
    sys.stdout.write(verdict.to_text())
    return EXIT_OK if verdict.uniform else EXIT_REFUTED


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kpsnet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def gen_opts(p):
        p.add_argument("--seed", type=int)
        p.add_argument("--entropy", choices=["os"])
        p.add_argument("--out")

    fp = sub.add_parser("field", help="field descriptors")
    fsub = fp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    info = fsub.add_parser("info")
    info.add_argument("p", type=int)
    info.add_argument("k", type=int)
    info.set_defaults(func=cmd_field_info)

    ip = sub.add_parser("irr", help="irreducible polynomials")
    isub = ip.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("list", "count"):
        p = isub.add_parser(name)
        p.add_argument("--q", type=int, required=True)
        p.add_argument("--t", type=int, required=True)
        if name == "list":
            p.add_argument("--count", type=int)
        p.set_defaults(func=cmd_irr)

    kp = sub.add_parser("kps", help="single scheme lifecycle")
    ksub = kp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    g = ksub.add_parser("gen")
    g.add_argument("--backend", choices=["blom", "gkps", "hkps"], required=True)
    g.add_argument("--q", type=int, required=True, help="field size (hkps: base field, keys live in GF(q^2))")
    g.add_argument("--w", type=int, required=True)
    g.add_argument("--t", type=int, default=2, help="variables (blom)")
    g.add_argument("--P", help="pole polynomial coefficients, lowest first (gkps)")
    g.add_argument("--a", help="curve parameter in GF(q) (hkps; drawn from the seed if omitted)")
    gen_opts(g)
    g.set_defaults(func=cmd_kps_gen)
    s = ksub.add_parser("share")
    s.add_argument("--master", required=True)
    s.add_argument("--id", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_kps_share)
    k = ksub.add_parser("key")
    k.add_argument("--share", required=True)
    k.add_argument("--peer", required=True, action="append")
    k.set_defaults(func=cmd_kps_key)

    hp = sub.add_parser("hier", help="hierarchical provisioning")
    hsub = hp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    b = hsub.add_parser("build")
    b.add_argument("--spec", required=True, help="JSON: backend, U, levels, p, k, t, h, optional shape")
    gen_opts(b)
    b.set_defaults(func=cmd_hier_build)
    hk = hsub.add_parser("key")
    hk.add_argument("--tree", required=True)
    hk.add_argument("--a", required=True)
    hk.add_argument("--b", required=True)
    hk.set_defaults(func=cmd_hier_key)
    ha = hsub.add_parser("add")
    ha.add_argument("--tree", required=True)
    ha.add_argument("--parent", required=True)
    ha.add_argument("--out")
    ha.set_defaults(func=cmd_hier_add)
    hs = hsub.add_parser("storage")
    hs.add_argument("--tree", required=True)
    hs.add_argument("--node", required=True)
    hs.set_defaults(func=cmd_hier_storage)
    hc = hsub.add_parser("compromise")
    hc.add_argument("--tree", required=True)
    hc.add_argument("--nodes", nargs="+", required=True)
    hc.add_argument("--out", help="write the pruned tree here")
    hc.set_defaults(func=cmd_hier_compromise)

    vp = sub.add_parser("verify", help="security certification")
    vsub = vp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    m = vsub.add_parser("mds")
    m.add_argument("--scheme", required=True)
    m.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    m.add_argument("--samples", type=int, default=100_000)
    m.add_argument("--sample-seed", type=int, default=0)
    m.set_defaults(func=cmd_verify_mds)
    u = vsub.add_parser("uniform")
    u.add_argument("--scheme", required=True)
    u.add_argument("--coalition", default="")
    u.add_argument("--target", required=True)
    u.add_argument("--all-views", action="store_true")
    u.add_argument("--limit", type=int, default=verify.DEFAULT_LIMIT)
    u.set_defaults(func=cmd_verify_uniform)
    r = vsub.add_parser("resilience")
    r.add_argument("--tree", required=True)
    r.add_argument("--nodes", nargs="*")
    r.add_argument("--a", required=True)
    r.add_argument("--b", required=True)
    r.add_argument("--limit", type=int, default=verify.DEFAULT_LIMIT)
    r.set_defaults(func=cmd_verify_resilience)
    return parser


def run(argv=None) -> int:
    """Execute one command and return its exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"kpsnet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except verify.IntractableError as exc:
        print(f"kpsnet: intractable: {exc}", file=sys.stderr)
        return EXIT_INTRACTABLE
    except (ValueError, KeyError, OSError, ZeroDivisionError) as exc:
        print(f"kpsnet: error: {exc}", file=sys.stderr)
        return EXIT_REFUTED


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
