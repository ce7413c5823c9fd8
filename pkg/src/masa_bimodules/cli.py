"""Command-line front end.

Exit codes: 0 success or isomorphic, 1 internal error, 2 input error,
3 negative verdict (not isomorphic, or a verification suite failed).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import blocks, oracle, reflexivity, verify
from .groups import FiniteGroup, GroupError, build_group, generate_subgroup
from .support import RelationError, e_star, module_properties, read_relation, star_closure

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_NEGATIVE = 0, 1, 2, 3


class InputError(ValueError):
    pass


def parse_subset(text: str, G: FiniteGroup) -> frozenset:
    """Comma-separated indices, or ``gen:`` followed by generators of a subgroup."""
    body, offset, generated = text, 0, False
    if text.startswith("gen:"):
        body, offset, generated = text[4:], 4, True
    elements = []
    pos = offset
    for tok in body.split(","):
        stripped = tok.strip()
        col = pos + (len(tok) - len(tok.lstrip())) + 1
        if stripped:
            try:
                v = int(stripped)
            except ValueError:
                raise InputError(f"subset {text!r}, column {col}: not an element index: {stripped!r}") from None
            if not 0 <= v < G.order:
                raise InputError(f"subset {text!r}, column {col}: {v} outside 0..{G.order - 1}")
            elements.append(v)
        pos += len(tok) + 1
    if generated:
        if not elements:
            raise InputError("gen: needs at least one generator")
        return frozenset(generate_subgroup(G, elements).elements)
    return frozenset(elements)


def _emit(payload: dict, text: str, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def _fmt_classes(classes) -> str:
    return " ".join("{" + ",".join(map(str, c)) + "}" for c in classes)


def _fmt_dims(dims) -> str:
    return "{" + ",".join(map(str, dims)) + "}"


def _yn(flag: bool) -> str:
    return "yes" if flag else "no"


def cmd_analyze(args) -> int:
    G = build_group(args.group[0])
    E = parse_subset(args.subset[0], G)
    if not E:
        raise InputError("the subset must be nonempty for closure analyses")
    rep = module_properties(G, E)
    _, vn_blocks = star_closure(e_star(G, E))
    payload = {
        "group": G.name,
        "group_order": G.order,
        "subset": sorted(E),
        "unital": rep.unital,
        "selfadjoint": rep.selfadjoint,
        "algebra": rep.algebra,
        "subgroup": rep.von_neumann,
        "generated_subgroup": list(rep.generated_subgroup.elements),
        "coset_classes": [list(c) for c in rep.coset_classes.classes],
        "von_neumann_blocks": list(vn_blocks.dims_multiset()),
    }
    lines = [
        f"group: {G.name} (order {G.order})",
        f"subset: {sorted(E)}",
        f"unital: {_yn(rep.unital)}",
        f"self-adjoint: {_yn(rep.selfadjoint)}",
        f"algebra: {_yn(rep.algebra)}",
        f"subgroup: {_yn(rep.von_neumann)}",
        f"generated subgroup: {list(rep.generated_subgroup.elements)} (order {rep.generated_subgroup.order})",
        f"coset classes: {_fmt_classes(rep.coset_classes.classes)}",
        f"von Neumann algebra blocks: {_fmt_dims(vn_blocks.dims_multiset())}",
    ]
    if rep.unital:
        dims = blocks.envelope_report(e_star(G, E))
        order, idx = blocks.subset_module_invariants(G, E)
        payload["envelope_blocks"] = list(dims)
        payload["invariants"] = {"subgroup_order": order, "index": idx}
        lines.append(f"blocks: {_fmt_dims(dims)}")
        lines.append(f"invariants: |<E>| = {order}, index = {idx}")
    else:
        payload["envelope_blocks"] = None
        payload["invariants"] = None
        lines.append("blocks: n/a (module is not unital)")
    _emit(payload, "\n".join(lines), args.format)
    return EXIT_OK


def cmd_classify(args) -> int:
    if len(args.group) != 2 or len(args.subset) != 2:
        raise InputError("classify needs --group and --subset twice each")
    G1, G2 = (build_group(s) for s in args.group)
    H1 = parse_subset(args.subset[0], G1)
    H2 = parse_subset(args.subset[1], G2)
    v = blocks.module_iso_decide(G1, H1, G2, H2)
    payload = {"groups": [G1.name, G2.name], **v.to_dict()}
    lines = [
        f"groups: {G1.name} (order {G1.order}), {G2.name} (order {G2.order})",
        f"subgroup orders: {v.subgroup_orders[0]}, {v.subgroup_orders[1]}",
        f"indices: {v.indices[0]}, {v.indices[1]}",
        f"verdict: {'isomorphic' if v.isomorphic else 'not isomorphic'}",
    ]
    if v.witness is not None:
        lines.append(f"witness: {list(v.witness)}")
    _emit(payload, "\n".join(lines), args.format)
    return EXIT_OK if v.isomorphic else EXIT_NEGATIVE


def _relation_from_args(args):
    if args.relation_file:
        return read_relation(args.relation_file)
    if args.group and args.subset:
        G = build_group(args.group[0])
        return e_star(G, parse_subset(args.subset[0], G))
    raise InputError("give --relation-file, or --group and --subset")


def cmd_decompose(args) -> int:
    omega = _relation_from_args(args)
    certs = reflexivity.full_decomposition(omega)
    n = omega.ground
    payload = {
        "ground": n,
        "pairs": omega.pairs(),
        "certificates": [c.to_dict() for c in certs],
        "intersection_equals_module": reflexivity.intersect_summands(certs, n) == omega,
    }
    if omega.is_symmetric():
        payload["selfadjoint_intersection_equals_module"] = reflexivity.intersect_selfadjoint(certs, n) == omega
    _emit(payload, reflexivity.format_decomposition(omega, certs), args.format)
    return EXIT_OK


def cmd_envelope(args) -> int:
    omega = _relation_from_args(args)
    bs = blocks.cstar_support(omega)
    ok, witness = blocks.trivial_intersection(omega)
    dims = blocks.envelope_report(omega)
    payload = {
        "ground": omega.ground,
        "classes": [list(c) for c in bs.classes],
        "trivial_intersection": ok,
        "witness": None if witness is None else sorted(witness.selected),
        "envelope_blocks": list(dims),
    }
    lines = [
        f"classes: {_fmt_classes(bs.classes)}",
        f"trivial intersection property: {_yn(ok)}",
        f"envelope blocks: {_fmt_dims(dims)}",
    ]
    _emit(payload, "\n".join(lines), args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    res = verify.run_suite(args.suite, max_order=args.max_order, gamma=args.gamma, trials=args.trials, seed=args.seed)
    _emit(res.to_dict(), res.summary(), args.format)
    return EXIT_OK if res.passed else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--tolerance", type=float, default=None, help="rank and span-membership tolerance")

    inputs = argparse.ArgumentParser(add_help=False)
    inputs.add_argument("--group", action="append", default=[], help="group spec, e.g. cyclic:4")
    inputs.add_argument("--subset", action="append", default=[], help="indices '0,2' or generators 'gen:1'")
    inputs.add_argument("--relation-file", default=None)

    p = argparse.ArgumentParser(prog="masa-bimod", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common, inputs], help="flags, closure and blocks of M(E*)")
    sub.add_parser("classify", parents=[common, inputs], help="decide *-isomorphism of M(H1*) and M(H2*)")
    sub.add_parser("decompose", parents=[common, inputs], help="per-atom CSL decomposition of a support")
    sub.add_parser("envelope", parents=[common, inputs], help="C*-envelope blocks of a unital support")
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=sorted(verify.SUITES))
    v.add_argument("--max-order", type=int, default=None)
    v.add_argument("--gamma", type=int, default=None)
    v.add_argument("--trials", type=int, default=None)
    return p


COMMANDS = {
    "analyze": cmd_analyze,
    "classify": cmd_classify,
    "decompose": cmd_decompose,
    "envelope": cmd_envelope,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.tolerance is not None:
        oracle.configure(rank_tol=args.tolerance, member_tol=args.tolerance)
    try:
        return COMMANDS[args.command](args)
    except (InputError, GroupError, RelationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
