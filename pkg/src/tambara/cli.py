"""Batch front end.  Every subcommand prints (or writes) one JSON report.

Exit status: 0 when the computation succeeds and every check passes,
1 when a check fails or the computation raises, 2 on usage errors.
"""

import argparse
import hashlib
import json
import os
import sys

from . import boxprod, genset, mackey
from . import bispan as bs
from . import free as fr
from .groups import UnknownGroup, classify, load_group, normalizer
from .gsets import parse_gset, parse_subgroup


class UsageError(Exception):
    pass


def _group(name):
    try:
        return load_group(name)
    except (UnknownGroup, OSError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def _sub(G, text):
    try:
        return parse_subgroup(G, text)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"cannot parse subgroup {text!r} of {G.name}: {exc}") from exc


def _set(G, text):
    try:
        return parse_gset(G, text)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"cannot parse G-set {text!r}: {exc}") from exc


def _positive(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("bounds must be nonnegative")
    return v


def _comp(G, c):
    K, y, atoms = c
    return {"K": repr(G.sub(K)), "K_id": K, "y": y,
            "atoms": [[repr(G.sub(s)), x] for s, x in atoms],
            "degree": bs.component_degree(G, c)}


# ---------------------------------------------------------------------------
# cache of level bases

def _cached_basis(X, L, max_n):
    root = os.environ.get("TAMB_CACHE_DIR")
    if not root:
        return fr.level_basis(X, L, max_n)
    key = json.dumps({"mul": [list(r) for r in X.group.mul], "X": [h.id for h in X.orbits],
                      "L": L, "n": max_n}, sort_keys=True).encode()
    path = os.path.join(root, "basis-" + hashlib.sha256(key).hexdigest()[:24] + ".json")
    if os.path.exists(path):
        with open(path) as fh:
            return [genset._comp_from_json(c) for c in json.load(fh)]
    basis = fr.level_basis(X, L, max_n)
    os.makedirs(root, exist_ok=True)
    tmp = path + f".{os.getpid()}"
    with open(tmp, "w") as fh:
        json.dump([genset._comp_json(c) for c in basis], fh)
    os.replace(tmp, path)
    return basis


# ---------------------------------------------------------------------------
# subcommands

def cmd_group(a):
    G = _group(a.name or a.group)
    kind = classify(G)
    subs = []
    for H in G.subgroups():
        subs.append({"id": H.id, "label": repr(H), "order": H.order, "normal": H.is_normal(),
                     "class": G.class_rep[H.id], "normalizer": normalizer(H).id})
    return {"group": G.name, "order": G.order, "abelian": G.is_abelian(),
            "classification": kind.kind, "witness": kind.witness,
            "subgroups": subs, "pass": True}


def cmd_basis(a):
    G = _group(a.group)
    X = _set(G, a.set or "empty")
    L = _sub(G, a.level) if a.level else G.whole
    basis = _cached_basis(X, L.id, a.maxdeg)
    rows = [_comp(G, c) for c in basis]
    counts = {}
    for r in rows:
        counts[r["degree"]] = counts.get(r["degree"], 0) + 1
    return {"group": G.name, "X": repr(X), "level": repr(L), "maxdeg": a.maxdeg,
            "size": len(rows), "by_degree": counts, "basis": rows, "pass": True}


def cmd_box(a):
    G = _group(a.group)
    sets = a.set or []
    if len(sets) == 2:
        X, Y = _set(G, sets[0]), _set(G, sets[1])
        levels = [_sub(G, a.level)] if a.level else G.subgroups()
        out = {}
        for L in levels:
            r = boxprod.compare_free(X, Y, L.id, a.maxdeg)
            out[repr(L)] = {"pass": r["pass"], "dress_well_defined": r["dress_well_defined"],
                            "strata": {str(d): v for d, v in r["strata"].items()}}
        return {"group": G.name, "X": repr(X), "Y": repr(Y), "maxdeg": a.maxdeg,
                "levels": out, "pass": all(v["pass"] for v in out.values())}
    if sets:
        Ms = [mackey.free_truncation(_set(G, s), a.maxdeg) for s in sets]
        B = boxprod.box(Ms, truncation=a.maxdeg)
    else:
        B = boxprod.box([mackey.burnside(G), mackey.burnside(G)])
    chk = mackey.check_axioms(B)
    return {"group": G.name, "factors": sets or ["burnside", "burnside"],
            "levels": {repr(G.sub(h)): B.levels[h].invariants for h in sorted(B.levels)},
            "axioms": chk, "pass": chk["pass"]}


def cmd_axioms(a):
    G = _group(a.group)
    if a.set:
        M = mackey.free_truncation(_set(G, a.set), a.maxdeg)
    else:
        M = mackey.burnside(G)
    chk = mackey.check_axioms(M)
    return {"group": G.name, "functor": M.name, "axioms": chk, "pass": chk["pass"]}


def cmd_certify(a):
    G = _group(a.group)
    if a.orbit and a.set:
        raise UsageError("give either --orbit or --set")
    target = _sub(G, a.orbit) if a.orbit else _set(G, a.set or "point")
    L = _sub(G, a.level).id if a.level else None
    rep = genset.certify_generation(G, target, L, a.maxdeg, budget=a.budget, jobs=a.jobs)
    cert = rep.pop("certificate")
    rep["certificate"] = cert.to_json()
    return rep


def cmd_findim(a):
    G = _group(a.group)
    X = _set(G, a.set or "empty")
    rep = genset.relative_findim_check(G, X, a.maxdeg)
    rep["levels"] = {repr(G.sub(L)): v for L, v in rep["levels"].items()}
    return rep


def cmd_norm(a):
    G = _group(a.group)
    if not a.orbit:
        raise UsageError("norm needs --orbit H (the subgroup to induce from)")
    H = _sub(G, a.orbit)
    Hg, _ = H.as_group()
    X_H = _set(Hg, a.set or "point")
    L = _sub(G, a.level) if a.level else G.whole
    return genset.norm_free_check(H, X_H, L.id, a.maxdeg)


COMMANDS = {"group": cmd_group, "basis": cmd_basis, "box": cmd_box, "axioms": cmd_axioms,
            "certify": cmd_certify, "findim": cmd_findim, "norm": cmd_norm}


def build_parser():
    p = argparse.ArgumentParser(prog="tambara", description="Free Tambara functors at desk scale.")
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", default=None, help="preset name (C4, S3, D8, Q8, ...) or JSON table")
    common.add_argument("--set", action="append", default=None,
                        help='G-set such as "C4/e + C4/C2", "point" or "empty"')
    common.add_argument("--orbit", default=None, help="subgroup H, meaning the orbit G/H")
    common.add_argument("--level", default=None, help="subgroup L for the level G/L")
    common.add_argument("--maxdeg", type=_positive, default=3)
    common.add_argument("--budget", type=_positive, default=100000)
    common.add_argument("--jobs", type=_positive, default=os.cpu_count() or 1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="write the JSON report here")
    common.add_argument("--text", action="store_true", help="print a short summary instead of JSON")
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "group":
            sp.add_argument("name", nargs="?")
    return p


def _summary(report):
    lines = []
    for k, v in report.items():
        if isinstance(v, (str, int, float, bool)) or v is None:
            lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def run(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if a.command != "group" and not a.group:
        parser.print_usage(sys.stderr)
        print("error: --group is required", file=sys.stderr)
        return 2
    if a.command == "group" and not (a.name or a.group):
        parser.print_usage(sys.stderr)
        print("error: name a group", file=sys.stderr)
        return 2
    if a.set and a.command != "box" and len(a.set) > 1:
        parser.print_usage(sys.stderr)
        print("error: --set given more than once", file=sys.stderr)
        return 2
    if a.set and a.command != "box":
        a.set = a.set[0]
    try:
        report = COMMANDS[a.command](a)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        report = {"pass": False, "error": type(exc).__name__, "message": str(exc)}
        trace = getattr(exc, "trace", None)
        if trace:
            report["trace"] = trace
    report = {"command": a.command, "seed": a.seed, **report}
    text = json.dumps(report, sort_keys=True, indent=1, default=str) + "\n"
    if a.out:
        with open(a.out, "w") as fh:
            fh.write(text)
    if a.text:
        sys.stdout.write(_summary(report))
    elif not a.out:
        sys.stdout.write(text)
    return 0 if report.get("pass") else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
