"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 refusal because of a size
limit, 3 certificate verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import equilibrium as eq
from . import graph as gr
from . import lp
from . import sequential as seq
from .rational import format_fraction
from .ring import (RingGame, format_profile, game_to_json, instance_digest, instance_from_json,
                   optimum, threshold_profile)

EXIT_OK, EXIT_USAGE, EXIT_LIMIT, EXIT_CERT = 0, 1, 2, 3
WORKERS_ENV = "RINGCAST_WORKERS"


class UsageError(Exception):
    pass


class LimitRefusal(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def ratio_json(value) -> dict:
    if isinstance(value, Fraction):
        return {"exact": format_fraction(value), "decimal": float(value)}
    return {"exact": None, "decimal": float(value)}


def _default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None


def _load_json(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None


def _load_ring(path: str):
    data = _load_json(path)
    try:
        return instance_from_json(data)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _tie(args) -> eq.TieBreak:
    return eq.TieBreak(args.tie)


def _emit(args, payload: dict, rows: list | None = None) -> None:
    """Write JSON (or CSV rows plus a JSON summary on stderr) to --out/stdout."""
    if args.format == "csv":
        if rows is None:
            rows = [{k: v for k, v in payload.items() if not isinstance(v, (dict, list))}]
        buf = io.StringIO()
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        text = buf.getvalue()
        print(json.dumps(payload, indent=2), file=sys.stderr)
    else:
        text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# analyze


def build_analysis(game, tie: eq.TieBreak, limit_n: int, order_limit: int,
                   samples: int | None, seed: int, trace: bool) -> dict:
    n = game.n
    if n > limit_n:
        raise LimitRefusal(f"n={n} exceeds --limit-n {limit_n} for equilibrium enumeration; "
                           f"raise --limit-n (cost grows as 2^n)")
    if n > order_limit and not samples:
        raise LimitRefusal(f"n={n} exceeds the arrival-order limit {order_limit}; "
                           "pass --samples K for sampled estimates")
    if tie is eq.TieBreak.STAY:
        raise UsageError("--tie stay has no meaning for arriving players; use left or right")
    opt = optimum(game)
    nash = eq.enumerate_nash(game, limit=limit_n)
    po_worst, po_best = eq.popoa(game, limit=limit_n)
    worst, best = seq.order_extremes(game, tie=tie, limit=order_limit,
                                     samples=samples, seed=seed)
    gap_order, mirrored = seq.theorem5_order(game)
    gap_play = seq.sequential_play(game, gap_order, tie)
    report = {
        "instance": game_to_json(game),
        "digest": instance_digest(game),
        "tie": tie.value,
        "seed": seed,
        "optimum": {"dropped_edge": opt.dropped_edge, "cost": format_fraction(opt.cost),
                    "profile": format_profile(opt.profile)},
        "nash": {"count": len(nash.equilibria),
                 "best_cost": format_fraction(nash.best_cost),
                 "worst_cost": format_fraction(nash.worst_cost),
                 "best_witness": format_profile(nash.best_witness),
                 "worst_witness": format_profile(nash.worst_witness)},
        "poa": ratio_json(nash.poa),
        "pos": ratio_json(nash.pos),
        "popoa": {"worst": ratio_json(po_worst), "best": ratio_json(po_best)},
        "mspoa": {**ratio_json(worst.ratio), "order": list(worst.order), "label": worst.label,
                  "orders_evaluated": worst.orders_evaluated},
        "mspos": {**ratio_json(best.ratio), "order": list(best.order), "label": best.label,
                  "orders_evaluated": best.orders_evaluated},
        "gap_order": {"order": list(gap_order), "mirrored": mirrored,
                      "cost": format_fraction(gap_play.cost), "ratio": ratio_json(gap_play.ratio)},
        "certificates": {"pos_bound_4_3": nash.pos <= Fraction(4, 3),
                         "mspos_bound_26_19": best.ratio <= lp.MSPOS_BOUND or not best.exact},
    }
    if trace:
        _, dyn = eq.best_response_dynamics(game, schedule="chain")
        report["traces"] = {
            "chain_dynamics": dyn.to_json(),
            "mspoa_play": seq.sequential_play(game, worst.order, tie).to_json(),
            "mspos_play": seq.sequential_play(game, best.order, tie).to_json(),
            "gap_order_play": gap_play.to_json(),
        }
    return report


def cmd_analyze(args) -> int:
    game = _load_ring(args.instance)
    report = build_analysis(game, _tie(args), args.limit_n, args.order_limit,
                            args.samples, args.seed, args.trace)
    _emit(args, report)
    return EXIT_OK


# --------------------------------------------------------------------------
# certify


def certify_pos(k, n: int | None, o: int | None) -> dict:
    chain = 8 if k == "8plus" else int(k)
    if n is None or o is None:
        n, o = 40, 20
    cmp = lp.recompute_appendix_duals(k, n=n, o=o)
    program = lp.build_pos_lp(n, o, chain)
    exact_dual = lp.check_certificate(program, lp.Certificate(cmp.recomputed, cmp.value))
    published = lp.chain_certificate(program, k)
    pub = lp.check_certificate(program, published, normalize=chain > 3)
    if k == "8plus":
        bound = lp.LONG_CHAIN_BOUND
        bound_ok = abs(cmp.value - Fraction(bound)) <= Fraction(1, 10 ** 4)
    else:
        bound = lp.CHAIN_WEIGHTS[k][0]
        bound_ok = True
    if chain <= 3:
        published_ok = pub.certified
    else:
        published_ok = cmp.agrees
    return {
        "lp_id": program.name,
        "bound": bound,
        "certified": bool(exact_dual.certified and published_ok and bound_ok),
        "simplex_value": format_fraction(cmp.value),
        "simplex_value_decimal": float(cmp.value),
        "duals": [format_fraction(y) for y in cmp.recomputed],
        "published_weights": list(cmp.published),
        "published_check": pub.to_json(),
        "recomputed_dual_check": exact_dual.to_json(),
        "mismatches": cmp.to_json()["mismatches"],
        "notes": program.notes,
    }


def certify_mspos(n: int, o: int, i: int) -> dict:
    program = lp.build_mspos_lp(n, o, i)
    out = lp.simplex_solve(program)
    ys = [Fraction(0)] * len(program.constraints)
    for name, w in lp.MSPOS_WEIGHTS.items():
        ys[program.index(name)] = w
    base = lp.Certificate(tuple(ys), lp.MSPOS_BOUND)
    completed = lp.complete_with_maximality(program, base, o)
    check = lp.check_certificate(program, completed)
    return {
        "lp_id": program.name,
        "bound": format_fraction(lp.MSPOS_BOUND),
        "certified": check.certified,
        "simplex_value": format_fraction(out.value) if out.value is not None else None,
        "primal": [format_fraction(x) for x in out.primal] if out.primal else None,
        "duals": [format_fraction(y) for y in out.dual] if out.dual else None,
        "weights": {c.name: format_fraction(y)
                    for c, y in zip(program.constraints, completed.multipliers) if y},
        "check": check.to_json(),
    }


def certify_popoa(n: int, exact: bool, gaps=None) -> dict:
    found = lp.popoa_lower_bound(n, gaps=gaps, exact=exact)
    value = found["value"]
    within = bool(value <= 2)
    out = {
        "lp_id": f"popoa(n={n},p={found['p']})",
        "bound": "2",
        # a float64 solve is evidence, not a certificate
        "certified": within if exact else None,
        "within_bound": within,
        "simplex_value": format_fraction(value) if exact else None,
        "value_decimal": float(value),
        "mode": "exact" if exact else "float64 (approximate)",
        "p": found["p"],
        "restriction": "alternatives restricted to threshold profiles",
    }
    if n <= 14:
        minima = eq.potential_minima(_popoa_game(n, found["p"]))
        held = threshold_profile(n, found["p"]) in minima
        out["threshold_is_potential_minimum"] = held
        out["within_bound"] = within and held
        if exact:
            out["certified"] = out["within_bound"]
    return out


def _popoa_game(n: int, p: int):
    res = lp.simplex_solve(lp.build_popoa_lp(n, p))
    return RingGame(tuple(res.primal))


def cmd_certify(args) -> int:
    if args.target == "pos43":
        if args.k is None:
            raise UsageError("pos43 needs --k (1..7 or 8plus)")
        k = args.k if args.k == "8plus" else int(args.k)
        if k != "8plus" and not 1 <= k <= 7:
            raise UsageError("--k must be 1..7 or 8plus")
        verdict = certify_pos(k, args.n, args.o)
    elif args.target == "mspos2619":
        verdict = certify_mspos(args.n or 3, args.o or 3, 1 if args.i is None else args.i)
    else:
        if args.n is None:
            raise UsageError("popoa needs --n")
        verdict = certify_popoa(args.n, args.exact)
    _emit(args, verdict)
    ok = verdict["certified"]
    if ok is None:
        ok = verdict["within_bound"]
    return EXIT_OK if ok else EXIT_CERT


# --------------------------------------------------------------------------
# search / experiment


def cmd_search(args) -> int:
    if args.objective in ("mspoa", "mspos"):
        if args.n > args.order_limit:
            raise LimitRefusal(f"n={args.n} exceeds the arrival-order limit {args.order_limit}")
        res = seq.extremal_search(args.objective, args.n, trials=args.trials, seed=args.seed,
                                  steps=args.steps, limit=args.order_limit)
        payload = res.to_json()
        row = {"objective": res.objective, "n": res.n, "seed": res.seed,
               "instance": instance_digest(res.game),
               "edges": " ".join(format_fraction(c) for c in res.costs),
               "order": " ".join(map(str, res.order)),
               "ratio": format_fraction(res.ratio), "ratio_decimal": float(res.ratio)}
        _emit(args, payload, [row])
        return EXIT_OK
    if args.objective == "popoa":
        found = lp.popoa_lower_bound(args.n, exact=args.exact)
        rows = [{"n": args.n, "p": p, "value_decimal": float(v),
                 "value": format_fraction(v) if isinstance(v, Fraction) else ""}
                for p, v in sorted(found["values"].items())]
        payload = {"objective": "popoa", "n": args.n, "p": found["p"],
                   "value": ratio_json(found["value"]),
                   "mode": "exact" if args.exact else "float64 (approximate)",
                   "within_2": bool(found["value"] <= 2),
                   "restriction": "alternatives restricted to threshold profiles"}
        _emit(args, payload, rows)
        return EXIT_OK
    res = gr.search_bound4(trials=args.trials, seed=args.seed)
    _emit(args, res.to_json())
    return EXIT_OK


def cmd_experiment(args) -> int:
    exact = None if args.mode == "auto" else args.mode == "exact"
    workers = args.workers if args.workers is not None else _default_workers()
    report = seq.two_permutation_experiment(args.n, args.trials, seed=args.seed, exact=exact,
                                            tie=_tie(args), workers=workers)
    summary = report.to_json()
    rows = [r.csv_row() for r in report.records]
    if args.format == "json":
        summary["records"] = rows
    _emit(args, summary, rows)
    return EXIT_OK


def cmd_graph(args) -> int:
    try:
        game = gr.MulticastGraphGame.from_json(_load_json(args.instance))
    except ValueError as exc:
        raise UsageError(f"{args.instance}: {exc}") from None
    try:
        rep = gr.verify_bound4(game)
    except gr.TooManyTerminalsError as exc:
        raise LimitRefusal(str(exc)) from None
    payload = rep.to_json()
    if not args.trace:
        payload["outcome"].pop("trace")
    _emit(args, payload)
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tie", choices=["left", "right", "stay"], default="left",
                        help="tie rule for arriving players (default: left)")
    common.add_argument("--limit-n", type=int, default=eq.DEFAULT_LIMIT,
                        help="largest n for exhaustive profile enumeration")
    common.add_argument("--order-limit", type=int, default=seq.DEFAULT_ORDER_LIMIT,
                        help="largest n for enumerating all arrival orders")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trace", action="store_true", help="include step-by-step traces")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=["json", "csv"], default="json")

    parser = _Parser(prog="ringcast", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", parents=[common], help="full report for a ring instance")
    p.add_argument("instance", help="JSON instance file")
    p.add_argument("--samples", type=int, help="sample this many orders when n is large")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("certify", parents=[common], help="check a bound's certificate")
    p.add_argument("target", choices=["pos43", "mspos2619", "popoa"])
    p.add_argument("--k", help="chain length 1..7 or 8plus (pos43)")
    p.add_argument("--n", type=int)
    p.add_argument("--o", type=int)
    p.add_argument("--i", type=int)
    p.add_argument("--exact", action="store_true", help="exact simplex for popoa")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("search", parents=[common], help="search for extremal instances")
    p.add_argument("objective", choices=["mspoa", "mspos", "popoa", "bound4"])
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--steps", type=int, default=300)
    p.add_argument("--exact", action="store_true", help="exact simplex for popoa")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("experiment", parents=[common], help="run a randomized experiment")
    p.add_argument("name", choices=["two-perm"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--mode", choices=["auto", "exact", "float"], default="auto")
    p.add_argument("--workers", type=int, help=f"process count (default ${WORKERS_ENV} or 1)")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("graph", parents=[common], help="check the DFS-order bound on a graph")
    p.add_argument("instance", help="graph JSON instance file")
    p.set_defaults(func=cmd_graph)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help or a usage error
        return exc.code
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ringcast: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LimitRefusal, eq.EnumerationLimitError, seq.OrderLimitError) as exc:
        print(f"ringcast: refused: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except ValueError as exc:
        print(f"ringcast: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
