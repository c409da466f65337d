"""Command line interface.

Group arguments are either catalog references like ``p5_exc_b@p=3`` or paths
to JSON files containing a power-commutator specification.  Exit codes:
0 success, 1 a verified claim failed, 2 malformed or inconsistent input,
3 a computation exceeded the configured order bound.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import catalog, claims
from .errors import (
    BadPrime,
    BoundExceeded,
    InconsistentPresentation,
    MalformedRule,
    MindegError,
    UnknownName,
)
from .exceptional import exceptional_scan
from .groups import build_pc_group
from .lattice import all_subgroups
from .mu import mu_certificate

DEFAULT_BOUND = 3125


def _load_group(spec):
    if catalog._REF_RE.match(spec):
        return catalog.resolve(spec)
    if os.path.exists(spec):
        try:
            with open(spec) as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedRule("could not parse %s: %s" % (spec, exc))
        group = build_pc_group(data, check=True)
        group.label = os.path.splitext(os.path.basename(spec))[0]
        return group
    raise UnknownName(
        "%r is neither a catalog reference (name@p=PRIME) nor a file" % spec
    )


def _print_json(obj):
    print(json.dumps(obj, indent=2, sort_keys=True))


def _cmd_catalog(args):
    rows = catalog.list_catalog()
    if args.json:
        _print_json({"schema": 1, "entries": rows})
        return 0
    for r in rows:
        print(
            "%-16s primes=%-4s order=%-5s mu=%-7s %s"
            % (r["name"], r["primes"], r["order"], r["mu"], r["description"])
        )
    return 0


def _cmd_mu(args):
    group = _load_group(args.group)
    cert = mu_certificate(group, bound=args.max_order)
    if args.json:
        _print_json(cert.to_dict())
        return 0
    print(
        "mu = %d, orbits = [%s]"
        % (cert.degree, ", ".join(str(o["index"]) for o in cert.orbits))
    )
    for orb in cert.orbits:
        print("  stabilizer <%s> of index %d" % (", ".join(orb["subgroup_gens"]), orb["index"]))
    if args.witness:
        for label in group.generator_labels:
            print("  %s -> %s" % (label, cert.perm_gens[label]))
    return 0


def _cmd_exceptional(args):
    group = _load_group(args.group)
    report = exceptional_scan(group, bound=args.max_order)
    if args.json:
        _print_json(report.to_dict())
        return 0
    print("group %s of order %d: mu = %d" % (report.group_label, report.group_order, report.mu))
    for e in report.entries:
        tag = "  distinguished" if e.distinguished else ""
        print(
            "  N = <%s> of order %d: mu(G/N) = %d%s"
            % (", ".join(e.normal_gens), e.normal_order, e.mu_quotient, tag)
        )
    print("exceptional = %s" % report.exceptional)
    return 0


def _cmd_subgroups(args):
    group = _load_group(args.group)
    lat = all_subgroups(group, bound=args.max_order)
    rows = []
    for pos, sub in enumerate(lat.subgroups):
        if args.normal and not lat.normal_flags[pos]:
            continue
        if args.order is not None and sub.order != args.order:
            continue
        rows.append(
            {
                "order": sub.order,
                "index": sub.index,
                "normal": bool(lat.normal_flags[pos]),
                "gens": sub.gen_words(),
            }
        )
    if args.json:
        _print_json({"schema": 1, "group": group.label, "subgroups": rows})
        return 0
    for r in rows:
        print(
            "order=%d index=%d normal=%s gens=<%s>"
            % (r["order"], r["index"], "yes" if r["normal"] else "no", ", ".join(r["gens"]))
        )
    print("total: %d" % len(rows))
    return 0


def _cmd_verify(args):
    report = claims.build_all(args.p, tier=args.tier)
    if args.json:
        _print_json(report)
    else:
        for row in report["claims"]:
            print("%s %s: %s" % ("PASS" if row["ok"] else "FAIL", row["id"], row["detail"]))
        print(
            "verified %d claims at p=%d (%s tier): %s"
            % (
                len(report["claims"]),
                report["prime"],
                report["tier"],
                "all passed" if report["ok"] else "FAILURES PRESENT",
            )
        )
    return 0 if report["ok"] else 1


def build_parser():
    ap = argparse.ArgumentParser(
        prog="mindeg",
        description="exact minimal faithful permutation degrees of finite p-groups",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p_cat = sub.add_parser("catalog", help="list the built-in group catalog")
    p_cat.add_argument("--json", action="store_true")
    p_cat.set_defaults(fn=_cmd_catalog)

    p_mu = sub.add_parser("mu", help="minimal faithful permutation degree")
    p_mu.add_argument("group")
    p_mu.add_argument("--json", action="store_true")
    p_mu.add_argument("--witness", action="store_true", help="print permutation images")
    p_mu.add_argument("--max-order", type=int, default=DEFAULT_BOUND)
    p_mu.set_defaults(fn=_cmd_mu)

    p_exc = sub.add_parser("exceptional", help="scan quotients for degree growth")
    p_exc.add_argument("group")
    p_exc.add_argument("--json", action="store_true")
    p_exc.add_argument("--max-order", type=int, default=DEFAULT_BOUND)
    p_exc.set_defaults(fn=_cmd_exceptional)

    p_sub = sub.add_parser("subgroups", help="list subgroups")
    p_sub.add_argument("group")
    p_sub.add_argument("--json", action="store_true")
    p_sub.add_argument("--normal", action="store_true", help="normal subgroups only")
    p_sub.add_argument("--order", type=int, default=None, help="restrict to this order")
    p_sub.add_argument("--max-order", type=int, default=DEFAULT_BOUND)
    p_sub.set_defaults(fn=_cmd_subgroups)

    p_ver = sub.add_parser("verify", help="run the recorded claim checks")
    p_ver.add_argument("--p", type=int, default=3, help="odd verification prime")
    p_ver.add_argument("--tier", choices=("fast", "slow"), default="fast")
    p_ver.add_argument("--json", action="store_true")
    p_ver.set_defaults(fn=_cmd_verify)

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except BoundExceeded as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3
    except (MalformedRule, InconsistentPresentation, UnknownName, BadPrime) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except MindegError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
