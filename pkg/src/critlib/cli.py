"""Command-line front end: ``critlib {matrix,root,mckay,verify-all} ...``.

Exit codes: 0 success, 1 domain error (or a failed verification), 2 usage error.
JSON output uses sorted keys and carries no timestamps.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import chartable, chipfire, mckay, rootsys, suite
from .errors import CritlibError, ParseError
from .intlinalg import IntMatrix, cokernel_invariants


def parse_vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError as exc:
        raise ParseError(f"cannot parse vector {text!r}") from exc


def load_matrix(path: str) -> IntMatrix:
    """Read a matrix file: {"rows","cols","entries"}, {"matrix": [[...]]} or a bare list of rows."""
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if isinstance(obj, dict) and "entries" in obj:
        return IntMatrix.from_json(obj)
    rows = obj.get("matrix") if isinstance(obj, dict) else obj
    try:
        return IntMatrix.from_rows([[int(str(x)) for x in r] for r in rows])
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{path}: malformed matrix: {exc}") from exc


def report(op: str, inputs: dict, outputs: dict, passed: bool | None = None) -> dict:
    out = {"operation": op, "inputs": inputs, "outputs": outputs}
    if passed is not None:
        out["passed"] = passed
    return out


# ---- matrix ----


def run_matrix(args) -> tuple[dict, str]:
    C = load_matrix(args.input)
    inputs = {"matrix": C.tolist()}
    act = args.action
    if act == "critical-group":
        K = cokernel_invariants(C)  # defined for any square matrix, certified or not
        return report(act, inputs, {"critical_group": str(K)}), str(K)
    sys_ = chipfire.certify(C)
    if act == "check":
        r = list(map(str, sys_.certificate.witness_r))
        return (
            report(act, inputs, {"avalanche_finite": True, "witness": r}),
            f"accepted\nwitness r = [{', '.join(r)}]",
        )
    if act == "stabilize":
        if args.config is None:
            raise ParseError("stabilize needs --config")
        v = parse_vector(args.config)
        out, rec = chipfire.stabilize(sys_, v, args.strategy)
        inputs["config"] = list(v)
        return (
            report(act, inputs, {"stable": list(out), "firings": rec.to_json(), "total": rec.total}),
            f"{list(out)}\n{rec.total} firings, counts {list(rec.counts)}",
        )
    if act in ("recurrents", "superstables"):
        vs = (
            chipfire.recurrent_representatives(sys_)
            if act == "recurrents"
            else chipfire.superstable_representatives(sys_)
        )
        return report(act, inputs, {act: [list(v) for v in vs]}), "\n".join(str(list(v)) for v in vs)
    if act == "burning":
        if args.b is None:
            raise ParseError("burning needs --b")
        b = parse_vector(args.b)
        cert = chipfire.check_burning(sys_, b)
        rec = [v for v in chipfire.stable_configs(sys_) if chipfire.recurrent_test_via_burning(sys_, cert, v)]
        inputs["b"] = list(b)
        out = {"z": list(cert.z), "recurrents": [list(v) for v in rec]}
        return report(act, inputs, out), f"burning, z = {list(cert.z)}\n" + "\n".join(str(list(v)) for v in rec)
    if act == "zero-coset":
        v = chipfire.zero_coset_recurrent(sys_)
        return report(act, inputs, {"zero_coset_recurrent": list(v)}), str(list(v))
    raise ParseError(f"unknown matrix action {act!r}")


# ---- root ----


def run_root(args) -> tuple[dict, str]:
    t = rootsys.DynkinType.parse(args.type)
    R = rootsys.root_system(t)
    inputs = {"type": str(t)}
    act = args.action
    if act == "cartan":
        C = R.cartan
        return report(act, inputs, {"cartan": C.tolist()}), str(C)
    if act == "roots":
        roots = [{"coords": list(r.coords), "weights": list(r.weights), "height": r.height} for r in R.positive_roots]
        text = "\n".join(f"{list(r.coords)}  weights {list(r.weights)}" for r in R.positive_roots)
        return report(act, inputs, {"count": len(roots), "positive_roots": roots}), text
    if act == "minuscule":
        mins = sorted(R.minuscule_nodes)
        return report(act, inputs, {"minuscule_nodes": mins}), " ".join(map(str, mins)) or "none"
    if act == "verify-thm1":
        rep = rootsys.verify_minuscule_classification(t)
        text = [("pass" if rep.passed else "FAIL"), "superstables:"]
        text += [rootsys.dynkin_layout(t, v) for v in rep.superstables]
        return report(act, inputs, rep.to_json(), rep.passed), "\n".join(text)
    if act == "chain-from-rho":
        ch = rootsys.stabilization_chain_from_rho(t)
        out = {"states": [list(v) for v in ch.states], "fired": list(ch.record.sequence)}
        text = "\n\n".join(rootsys.dynkin_layout(t, v) for v in ch.states)
        return report(act, inputs, out), text + f"\nfired {list(ch.record.sequence)}"
    if act == "looping":
        if args.node is None:
            raise ParseError("looping needs --node")
        order = parse_vector(args.order) if args.order else None
        seq = rootsys.minuscule_toppling_and_looping(t, args.node, order)
        inputs["node"] = args.node
        if order:
            inputs["order"] = list(order)
        lines = [f"fired {list(seq.fired)}", "toppling:"]
        lines += [rootsys.dynkin_layout(t, v) for v in seq.v]
        lines += [f"padded (dual type {seq.dual_type}):"]
        lines += [rootsys.dynkin_layout(t, v, padded=True) for v in seq.padded]
        return report(act, inputs, seq.to_json()), "\n".join(lines)
    if act == "burning-test":
        if args.b is None:
            raise ParseError("burning-test needs --b")
        b = parse_vector(args.b)
        ok = rootsys.burning_configurations_cartan(t, b)
        inputs["b"] = list(b)
        return report(act, inputs, {"burning": bool(ok)}), "burning" if ok else "not burning"
    raise ParseError(f"unknown root action {act!r}")


# ---- mckay ----


def _table(args) -> chartable.CharacterTable:
    if args.table:
        return chartable.load_table(args.table)
    if not args.group:
        raise ParseError("give --group or --table")
    return chartable.get_table(args.group)


def _data(args) -> mckay.McKayData:
    t = _table(args)
    gamma = parse_vector(args.gamma) if args.gamma else None
    return mckay.mckay_cartan(t, gamma)


def run_mckay(args) -> tuple[dict, str]:
    act = args.action
    if act == "cayley":
        if not args.invariants or not args.generators:
            raise ParseError("cayley needs --invariants and --generators")
        inv = parse_vector(args.invariants)
        gens = [parse_vector(g) for g in args.generators.split(";")]
        if len(inv) == 1:
            gens = [(x,) for g in gens for x in g]
        rep = mckay.cayley_digraph_check(inv, gens, via_mckay=args.via_mckay)
        text = f"arborescences {rep.arborescences}, |A| = {rep.order}, K = {rep.K}, A = {rep.A}"
        return report(act, {"invariants": list(inv), "generators": [list(g) for g in rep.generators]},
                      rep.to_json(), rep.passed), text
    d = _data(args)
    inputs = {"group": d.table.name, "gamma": list(d.gamma.coeffs)}
    if act == "build":
        return report(act, inputs, d.to_json()), f"M = {d.M}\nCtilde = {d.Ctilde}\nC = {d.C}"
    if act == "critical-group":
        K = mckay.critical_group(d)
        return report(act, inputs, {"critical_group": str(K)}), str(K)
    if act == "verify-abelianization":
        rep = mckay.abelianization_map(d)
        prod = mckay.verify_products_annihilated(d)
        out = rep.to_json()
        out["products"] = prod.to_json()
        ok = rep.passed and prod.passed
        text = f"K = {rep.K}, Ghat = {rep.Ghat}, " + ("isomorphism" if rep.isomorphism else "surjection only")
        return report(act, inputs, out, ok), text
    if act == "rng-table":
        gens = [mckay.u_element(d, i) for i in range(1, d.size)]
        table = [[list(mckay.rng_multiply(d, a, b).rep) for b in gens] for a in gens]
        zero = [[mckay.rng_is_zero(d, x) for x in row] for row in table]
        out = {"generators": [list(g) for g in gens], "products": table, "products_zero": zero,
               "critical_group": str(mckay.critical_group(d))}
        text = "\n".join(" ".join("0" if z else "*" for z in row) for row in zero)
        return report(act, inputs, out), text
    raise ParseError(f"unknown mckay action {act!r}")


# ---- verify-all ----


def run_verify_all(args) -> tuple[dict, str, bool]:
    only = [x for part in (args.only or []) for x in part.split(",") if x]
    results = suite.run_all(only)
    ok = all(r.passed for r in results) and bool(results)
    obj = {
        "operation": "verify-all",
        "only": only,
        "results": [r.to_json(timing=args.timing) for r in results],
        "passed": ok,
    }
    text = "\n".join(r.line() for r in results)
    return obj, text, ok


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")

    p = argparse.ArgumentParser(prog="critlib", description="Critical groups, root systems and McKay-Cartan matrices.")
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("matrix", parents=[common], help="chip-firing on a matrix file")
    m.add_argument("action", choices=("check", "stabilize", "recurrents", "superstables", "critical-group",
                                      "burning", "zero-coset"))
    m.add_argument("-i", "--input", required=True, help="matrix JSON file")
    m.add_argument("--config", help="comma-separated configuration")
    m.add_argument("--b", help="comma-separated burning configuration")
    m.add_argument("--strategy", choices=("queue", "max-surplus"), default="queue")

    r = sub.add_parser("root", parents=[common], help="root system data and theorems")
    r.add_argument("action", choices=("cartan", "roots", "minuscule", "verify-thm1", "chain-from-rho",
                                      "looping", "burning-test"))
    r.add_argument("type", help="Dynkin type such as E6 or C4")
    r.add_argument("--node", type=int)
    r.add_argument("--order", help="explicit firing order for looping")
    r.add_argument("--b", help="comma-separated vector")

    k = sub.add_parser("mckay", parents=[common], help="McKay-Cartan matrices of representations")
    k.add_argument("action", choices=("build", "critical-group", "verify-abelianization", "rng-table", "cayley"))
    k.add_argument("--group", help="catalog name, e.g. binary-icosahedral or cyclic-5")
    k.add_argument("--table", help="character table JSON file")
    k.add_argument("--gamma", help="comma-separated multiplicities over Irr(G); default natural")
    k.add_argument("--invariants", help="cayley: comma-separated cyclic orders")
    k.add_argument("--generators", help="cayley: generators, ';' between elements, ',' inside")
    k.add_argument("--via-mckay", action="store_true", help="cayley: also compare with the McKay-Cartan matrix")

    v = sub.add_parser("verify-all", parents=[common], help="run the acceptance suite")
    v.add_argument("--only", action="append", help="module name or criterion number (repeatable)")
    v.add_argument("--json", dest="json_out", help="also write the JSON report here")
    v.add_argument("--timing", action="store_true", help="include wall time per check")
    return p


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify-all":
            obj, text, ok = run_verify_all(args)
            if args.json_out:
                with open(args.json_out, "w") as fh:
                    fh.write(dumps(obj) + "\n")
            print(dumps(obj) if args.format == "json" else text)
            return 0 if ok else 1
        handler = {"matrix": run_matrix, "root": run_root, "mckay": run_mckay}[args.command]
        obj, text = handler(args)
    except (CritlibError, ValueError) as exc:
        if args.format == "json":
            print(dumps({"error": type(exc).__name__, "message": str(exc)}))
        else:
            print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    print(dumps(obj) if args.format == "json" else text)
    return 0 if obj.get("passed", True) else 1


if __name__ == "__main__":
    sys.exit(main())
