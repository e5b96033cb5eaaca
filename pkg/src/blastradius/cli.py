"""Command-line front door.

Exit codes: 0 success, 1 validation/parse failure, 2 numeric failure,
3 usage error. All output is a pure function of the input files and flags.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bounds import compute_bounds
from .closure import IterationConfig, Mode, bool_reachability, default_hops, khop_closure
from .lifting import lifted_closure
from .metrics import summarize, threshold_filter
from .render import matrix_to_csv, matrix_to_json_obj, round_obj, to_json_text
from .snapshot import (
    NetworkSnapshot,
    PivotPolicy,
    SnapshotError,
    build_adjacency,
    build_pivot_matrix,
    default_pivot_policy,
    parse_policy,
    parse_snapshot,
)
from .whatif import (
    CutKind,
    evaluate_cuts,
    parse_cut_spec,
    rank_cuts,
    ranking_notes,
)

_MODES = {"noisy-or": Mode.NOISY_OR, "max": Mode.MAX_COMPOSE}
_KINDS = {"edge": CutKind.EDGE, "service": CutKind.SERVICE_GLOBAL,
          "class": CutKind.CLASS_GLOBAL}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(3, f"{self.prog}: error: {message}\n")


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--snapshot", required=True, help="snapshot document (JSON)")
    sub.add_argument("--policy", help="pivot policy document (JSON); "
                                      "defaults to the shipped policy")
    sub.add_argument("--hops", type=int, default=None,
                     help="hop cap K (default: number of assets - 1)")
    sub.add_argument("--epsilon", type=float, default=1e-6,
                     help="early-stop tolerance (default 1e-6)")
    sub.add_argument("--mode", choices=sorted(_MODES), default="noisy-or",
                     help="union/composition mode (default noisy-or)")
    sub.add_argument("--lifted", action="store_true",
                     help="run the (node, landing-class) lifted engine")
    sub.add_argument("--out", help="write output here instead of stdout")
    sub.add_argument("--format", choices=["csv", "json", "json-like"], default="csv",
                     help="matrix output format (default csv)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="blastradius",
                     description="Lateral-movement risk metrics over network snapshots")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("validate", parents=[], help="parse and validate a snapshot")
    p.add_argument("--snapshot", required=True)
    p.add_argument("--policy")
    p.set_defaults(func=_cmd_validate)

    p = subs.add_parser("compute", help="K-hop compromise probability matrix")
    _add_common(p)
    p.add_argument("--theta", type=float, default=None,
                   help="also emit the 0/1 view of entries strictly above theta")
    p.set_defaults(func=_cmd_compute)

    p = subs.add_parser("reach", help="boolean K-hop reachability matrix")
    _add_common(p)
    p.set_defaults(func=_cmd_reach)

    p = subs.add_parser("metrics", help="LMS / BRE summary of a closure run")
    _add_common(p)
    p.set_defaults(func=_cmd_metrics)

    p = subs.add_parser("bounds", help="analytic upper/lower bounds for the closure")
    _add_common(p)
    p.add_argument("--require-inf", action="store_true",
                   help="fail (exit 2) when the infinite-hop bound is undefined")
    p.set_defaults(func=_cmd_bounds)

    p = subs.add_parser("whatif", help="rank candidate cuts by metric reduction")
    _add_common(p)
    p.add_argument("--kind", choices=sorted(_KINDS),
                   help="enumerate and rank every candidate of this kind")
    p.add_argument("--top", type=int, default=None, help="keep only the best N")
    p.add_argument("--cut", action="append", default=[],
                   help="evaluate these cuts jointly instead of ranking "
                        "(edge:SRC->DST, service_on_edge:SRC->DST:SVC, "
                        "service:SVC, class:NAME); repeatable")
    p.set_defaults(func=_cmd_whatif)
    return parser


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load(args) -> tuple[NetworkSnapshot, PivotPolicy]:
    snap = parse_snapshot(_read(args.snapshot))
    if args.policy:
        policy = parse_policy(_read(args.policy))
    else:
        policy = default_pivot_policy(snap)
    return snap, policy


def _config(args, snap: NetworkSnapshot) -> IterationConfig:
    hops = args.hops if args.hops is not None else default_hops(snap.n)
    return IterationConfig(max_hops=hops, epsilon=args.epsilon, mode=_MODES[args.mode])


def _class_table(snap: NetworkSnapshot, policy: PivotPolicy) -> dict[str, float]:
    missing = [c for c in snap.classes if c not in policy.class_defaults]
    if missing:
        raise SnapshotError(
            f"--lifted needs a class default for every class; missing: {missing}")
    return {c: policy.class_defaults[c] for c in snap.classes}


def _run_closure(snap: NetworkSnapshot, policy: PivotPolicy, cfg: IterationConfig,
                 lifted: bool):
    if lifted:
        return lifted_closure(snap, _class_table(snap, policy), cfg)
    a = build_adjacency(snap)
    w = build_pivot_matrix(snap, policy)
    return khop_closure(a, w, cfg)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _matrix_text(matrix, labels, fmt: str, extra: dict | None = None) -> str:
    if fmt == "csv":
        return matrix_to_csv(matrix, labels)
    obj = matrix_to_json_obj(matrix, labels)
    if extra:
        obj.update(extra)
    return to_json_text(obj) + "\n"


def _cmd_validate(args) -> int:
    snap = parse_snapshot(_read(args.snapshot))
    if args.policy:
        parse_policy(_read(args.policy))
    print(f"ok: {snap.n} assets, {len(snap.edges)} arcs, "
          f"{len(snap.services)} services, classes: {', '.join(snap.classes) or '-'}")
    return 0


def _cmd_compute(args) -> int:
    snap, policy = _load(args)
    cfg = _config(args, snap)
    result = _run_closure(snap, policy, cfg, args.lifted)
    labels = [a.id for a in snap.assets]
    if args.format == "csv":
        _emit(matrix_to_csv(result.p_final, labels), args.out)
        if args.theta is not None:
            view = threshold_filter(result.p_final, args.theta)
            if args.out:
                base = Path(args.out)
                base.with_name(base.stem + ".threshold" + base.suffix).write_text(
                    matrix_to_csv(view, labels), encoding="utf-8")
            else:
                sys.stdout.write(f"# entries > {args.theta:g}\n")
                sys.stdout.write(matrix_to_csv(view, labels))
    else:
        extra = {}
        if args.theta is not None:
            view = threshold_filter(result.p_final, args.theta)
            extra = {"theta": args.theta,
                     "threshold": [[int(v) for v in row] for row in view]}
        _emit(_matrix_text(result.p_final, labels, "json", extra), args.out)
    return 0


def _cmd_reach(args) -> int:
    snap, _ = _load(args)
    cfg = _config(args, snap)
    s = bool_reachability(build_adjacency(snap), cfg.max_hops)
    labels = [a.id for a in snap.assets]
    _emit(_matrix_text(s, labels, "csv" if args.format == "csv" else "json"), args.out)
    return 0


def _cmd_metrics(args) -> int:
    snap, policy = _load(args)
    cfg = _config(args, snap)
    result = _run_closure(snap, policy, cfg, args.lifted)
    report = summarize(result, cfg.mode, lifted=args.lifted)
    _emit(to_json_text(round_obj(report.to_dict())) + "\n", args.out)
    return 0


def _cmd_bounds(args) -> int:
    snap, policy = _load(args)
    cfg = _config(args, snap)
    a = build_adjacency(snap)
    w = build_pivot_matrix(snap, policy)
    report = compute_bounds(a, w, cfg.max_hops)
    if args.require_inf and report.u_inf is None:
        print("infinite-hop bound undefined: spectral radius of W is not below 1",
              file=sys.stderr)
        return 2
    labels = [a_.id for a_ in snap.assets]
    sections = [("u_k", report.u_k), ("u_k_capped", report.u_k_capped),
                ("lower", report.lower)]
    if report.u_inf is not None:
        sections.insert(2, ("u_inf", report.u_inf))
    summary = (f"spectral_radius={report.spectral_radius:.12g} "
               f"u_inf={'present' if report.u_inf is not None else 'absent'} "
               f"hops={cfg.max_hops}")
    if args.format == "csv":
        if args.out:
            for name, matrix in sections:
                Path(f"{args.out}.{name}.csv").write_text(
                    matrix_to_csv(matrix, labels), encoding="utf-8")
            print(summary)
        else:
            for name, matrix in sections:
                sys.stdout.write(f"# {name}\n")
                sys.stdout.write(matrix_to_csv(matrix, labels))
            print(summary)
    else:
        obj = {"spectral_radius": report.spectral_radius,
               "hops": cfg.max_hops,
               "assets": labels}
        for name, matrix in sections:
            obj[name] = [[float(f"{v:.12g}") for v in row] for row in matrix]
        _emit(to_json_text(round_obj(obj)) + "\n", args.out)
    return 0


def _cmd_whatif(args) -> int:
    snap, policy = _load(args)
    cfg = _config(args, snap)
    if args.cut:
        cuts = [parse_cut_spec(text) for text in args.cut]
        impact = evaluate_cuts(snap, cuts, cfg, policy, lifted=args.lifted)
        impacts = [impact]
        notes: list[str] = []
    else:
        if not args.kind:
            print("whatif needs --kind or at least one --cut", file=sys.stderr)
            return 3
        impacts = rank_cuts(snap, _KINDS[args.kind], cfg, top_n=args.top,
                            policy=policy, lifted=args.lifted)
        notes = ranking_notes(snap, impacts, policy)

    if args.format == "csv":
        lines = [f"{'rank':<5} {'delta_bre':>10} {'delta_lms':>10} "
                 f"{'bre_after':>10}  cut"]
        for rank, imp in enumerate(impacts, start=1):
            lines.append(f"{rank:<5} {imp.delta_bre:>10.4f} {imp.delta_lms:>10.4f} "
                         f"{imp.bre_after:>10.4f}  {imp.describe()}")
        for note in notes:
            lines.append(f"note: {note}")
        _emit("\n".join(lines) + "\n", args.out)
    else:
        obj = {"results": [round_obj(imp.to_dict()) for imp in impacts],
               "notes": notes}
        _emit(to_json_text(obj) + "\n", args.out)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 3
    try:
        return args.func(args)
    except SnapshotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
