"""Command-line entry point.

    heatcocycle verify <suite|all> [--quick] [--seed S]
    heatcocycle jlo --config FILE
    heatcocycle todd --connection FILE
    heatcocycle trace-expr --n N EXPR [--eps K] [--n-trunc T]
    heatcocycle contract-expr --n N EXPR

Every command prints a JSON report.  Exact values are canonical strings and the
report body is deterministic; wall-clock timings live in a separate "timings"
section that ``--no-timings`` drops.  Exit codes: 0 all checks pass, 1 a check
failed, 2 configuration or parse error, 3 truncation audit failure.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from .errors import ConfigError, DomainError, EngineError, TruncationError

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_TRUNCATION = 0, 1, 2, 3


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _connection(doc):
    from .geometry import ConnectionData

    if not isinstance(doc, dict):
        raise ConfigError("a connection must be a JSON object")
    if "Gamma" not in doc:
        try:
            return ConnectionData.flat(int(doc["n"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError("connection config needs an integer field 'n'") from exc
    return ConnectionData.from_json(doc)


# ---------------------------------------------------------------- commands

def cmd_verify(args) -> dict:
    from .suites import SUITES, run_suite

    names = SUITES if args.suite == "all" else (args.suite,)
    suites, timings = [], {}
    for name in names:
        t = time.perf_counter()
        res = run_suite(name, quick=args.quick, seed=args.seed)
        for c in res["checks"]:
            timings[f"{name}/{c['name']}"] = c.pop("seconds")
        timings[name] = round(time.perf_counter() - t, 3)
        suites.append(res)
    checks = [{"suite": s["suite"], "name": c["name"], "passed": c["passed"]} for s in suites for c in s["checks"]]
    return {"command": "verify", "input": {"suite": args.suite, "quick": args.quick, "seed": args.seed},
            "result": {"suites": suites}, "checks": checks, "timings": timings}


def _jlo_config(doc: dict):
    from .jlo import check_sphere_function
    from .parse import parse_function

    if "connection" in doc:
        conn = _connection(doc["connection"])
    elif "n" in doc:
        conn = _connection({"n": doc["n"]})
    else:
        raise ConfigError("jlo config needs a 'connection' object or a dimension 'n'")
    try:
        p = int(doc["p"])
        texts = list(doc["functions"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError("jlo config needs an integer 'p' and a list 'functions'") from exc
    if p % 2 == 0 or p < 1:
        raise ConfigError(f"p must be a positive odd integer, got {p}")
    if len(texts) != p + 1:
        raise ConfigError(f"p = {p} needs {p + 1} functions, got {len(texts)}")
    funcs = []
    for i, t in enumerate(texts):
        f = parse_function(t, conn.n)
        try:
            check_sphere_function(f)
        except DomainError as exc:
            raise ConfigError(f"functions[{i}] = {t!r}: {exc}") from exc
        funcs.append(f)
    n_trunc = doc.get("n_trunc")
    return conn, p, funcs, None if n_trunc is None else int(n_trunc)


def cmd_jlo(args) -> dict:
    from .jlo import dR_cocycle, jlo_component, naive_jlo_component

    doc = _load_json(args.config)
    conn, p, funcs, n_trunc = _jlo_config(doc)
    timings = {}
    t = time.perf_counter()
    audit: dict = {}
    value = jlo_component(p, funcs, conn, n_trunc, audit=audit)
    timings["jlo"] = round(time.perf_counter() - t, 3)
    t = time.perf_counter()
    dr = dR_cocycle(p, funcs, conn)
    timings["dR"] = round(time.perf_counter() - t, 3)
    result = {"value": value.to_string(), "dR": dr.to_string()}
    if doc.get("naive", False):
        t = time.perf_counter()
        result["naive"] = naive_jlo_component(p, funcs, conn, n_trunc).to_string()
        timings["naive"] = round(time.perf_counter() - t, 3)
    return {"command": "jlo", "input": {"connection": conn.to_json(), "p": p, "functions": doc["functions"],
                                        "n_trunc": n_trunc},
            "result": result, "truncation_audit": audit["chains"],
            "checks": [{"name": "jlo = dR", "passed": value == dr}], "timings": timings}


def cmd_todd(args) -> dict:
    from .forms import exterior_derivative, todd_form
    from .geometry import curvature
    from .phfun import to_text

    doc = _load_json(args.connection)
    conn = _connection(doc)
    n = conn.n
    t = time.perf_counter()
    R = curvature(conn)
    T = todd_form(R)
    names = [f"dx{i + 1}" for i in range(n)] + [f"dxi{j + 1}" for j in range(n)]
    by_degree: dict = {}
    for gens, f in sorted(T.terms.items()):
        key = "*".join(names[g] for g in gens) or "1"
        by_degree.setdefault(str(len(gens)), {})[key] = to_text(f)
    closed = not exterior_derivative(T)
    return {"command": "todd", "input": {"connection": conn.to_json()},
            "result": {"flat": R.is_zero(), "todd": by_degree},
            "checks": [{"name": "Todd form is closed", "passed": closed}],
            "timings": {"todd": round(time.perf_counter() - t, 3)}}


def cmd_trace_expr(args) -> dict:
    from .formal import FBElem
    from .opalg import op_text
    from .parse import parse_operator
    from .trace import require_audit, supertrace_series, trace_F, truncation_audit

    n = args.n
    D = parse_operator(args.expr, n)
    if not D:
        raise ConfigError("the operator is zero")
    X0 = FBElem(n, {args.eps: D}, 1, max(args.eps, 0) + 10 ** 6)
    n_trunc = args.n_trunc if args.n_trunc is not None else max(args.eps, 4 * n + X0.cert)
    X = FBElem(n, {args.eps: D}, 1, n_trunc)
    audit = truncation_audit(n, X.cert, n_trunc)
    require_audit(n, X.cert, n_trunc)
    t = time.perf_counter()
    st = supertrace_series(X)
    result = {"operator": op_text(D), "eps_power": args.eps,
              "supertrace_series": {str(k): v.to_string() for k, v in sorted(st.terms.items()) if k <= st.n_trunc},
              "supertrace": st.coefficient(0).to_string()}
    if all(w == ((), ()) for (_, w, _, _) in D.terms):
        tr = trace_F(X)
        result["trace_series"] = {str(k): v.to_string() for k, v in sorted(tr.terms.items()) if k <= tr.n_trunc}
        result["trace"] = tr.coefficient(0).to_string()
    return {"command": "trace-expr", "input": {"n": n, "expr": args.expr, "eps": args.eps, "n_trunc": n_trunc},
            "result": result, "truncation_audit": audit, "checks": [],
            "timings": {"trace": round(time.perf_counter() - t, 3)}}


def cmd_contract_expr(args) -> dict:
    from .opalg import op_text
    from .parse import parse_operator
    from .trace import contract

    D = parse_operator(args.expr, args.n)
    t = time.perf_counter()
    c = contract(D)
    result = {"operator": op_text(D),
              "contraction": {str(k): op_text(v) for k, v in sorted(c.terms.items())}}
    return {"command": "contract-expr", "input": {"n": args.n, "expr": args.expr}, "result": result,
            "checks": [], "timings": {"contract": round(time.perf_counter() - t, 3)}}


# ------------------------------------------------------------------ driver

def build_parser() -> argparse.ArgumentParser:
    from .suites import SUITES

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write the JSON report here instead of stdout")
    common.add_argument("--no-timings", action="store_true", help="omit the timings section")
    ap = argparse.ArgumentParser(prog="heatcocycle", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=SUITES + ("all",))
    v.add_argument("--quick", action="store_true", help="smaller sample counts")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    j = sub.add_parser("jlo", parents=[common], help="JLO-type cocycle and its de Rham value from a config file")
    j.add_argument("--config", required=True)
    j.set_defaults(func=cmd_jlo)

    t = sub.add_parser("todd", parents=[common], help="Todd form of a connection")
    t.add_argument("--connection", required=True)
    t.set_defaults(func=cmd_todd)

    te = sub.add_parser("trace-expr", parents=[common], help="supertrace of eps^k D exp(eps Delta) for an operator expression")
    te.add_argument("--n", type=int, required=True)
    te.add_argument("expr")
    te.add_argument("--eps", type=int, default=0, help="eps power of the payload")
    te.add_argument("--n-trunc", type=int, default=None)
    te.set_defaults(func=cmd_trace_expr)

    ce = sub.add_parser("contract-expr", parents=[common], help="contraction <D exp(eps Delta)> of an operator expression")
    ce.add_argument("--n", type=int, required=True)
    ce.add_argument("expr")
    ce.set_defaults(func=cmd_contract_expr)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "n", None) is not None and args.n < 1:
        print("error: --n must be positive", file=sys.stderr)
        return EXIT_CONFIG
    try:
        report = args.func(args)
    except TruncationError as exc:
        print(f"truncation audit failed: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EngineError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    passed = all(c["passed"] for c in report["checks"])
    report["passed"] = passed
    if args.no_timings:
        report.pop("timings", None)
    out = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK if passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
