"""Command-line interface: ``python -m egroups <command> ...`` (or the ``egroups`` script).

Every command prints a JSON report (or writes it with --out) and exits with
0 when all assertions pass, 2 when some fail and 3 on configuration or
budget refusals.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from ..coordgroup import GroupParams
from ..endo.egroup import check_e_group, script_e_predicate
from ..endo.endos import count_endos, criterion_solutions
from ..endo.homsearch import brute_force_endo_array
from ..errors import EGroupsError, RefusedError
from ..fpgroup import PresentationSyntaxError, parse_presentation, todd_coxeter
from ..modmat import Mat3, format_matrix
from . import campaigns as C
from .report import EXIT_REFUSED, dumps, exit_code, make_report, write_report


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors are configuration refusals, not assertion failures
        self.print_usage(sys.stderr)
        self.exit(EXIT_REFUSED, f"{self.prog}: error: {message}\n")


def _common(sp: argparse.ArgumentParser, family: bool = True) -> None:
    if family:
        sp.add_argument("--p", type=int, default=3)
        sp.add_argument("--r", type=int, default=1)
        sp.add_argument("--t", type=int, default=1)
        sp.add_argument("--T", action="append", default=None, metavar="MATRIX",
                        help='matrix mod p^t, rows separated by "|", e.g. "1 0 0|0 1 0|0 0 1"')
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--out", type=Path, default=None)
    sp.add_argument("--budget-size", type=int, default=C.CONSTRUCTION_CAP, help="largest group order to construct")
    sp.add_argument("--budget-cosets", type=int, default=C.DEFAULT_MAX_COSETS, help="coset table limit")
    sp.add_argument("--budget-endos", type=int, default=C.DEFAULT_BUDGET, help="candidate tuples for brute-force searches")
    sp.add_argument("--timings", action="store_true", help="record wall-clock seconds (reports stop being reproducible)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="egroups", description="Experiments with the groups G(p, r, t, T).")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, text in (
        ("construct", "build and self-validate one instance"),
        ("inspect", "structural invariants of one instance"),
        ("endos", "endomorphism statistics of one instance"),
        ("check-e", "decide the E-group property of one instance"),
    ):
        sp = sub.add_parser(name, help=text)
        _common(sp)
        if name == "endos":
            sp.add_argument("--list", type=int, default=0, metavar="N", help="also print the first N criterion solutions")

    sp = sub.add_parser("sweep", help="run a campaign over a family of T")
    _common(sp)
    sp.add_argument("--kind", choices=("classification", "egroup"), default="classification")
    sp.add_argument("--sample", type=int, default=None, metavar="N", help="draw N matrices (needs --seed)")
    sp.add_argument("--control", action="store_true", help="append the abelian control instance (egroup sweeps)")

    sp = sub.add_parser("iso-classes", help="isomorphism classes of a family")
    _common(sp)
    sp.add_argument("--sample", type=int, default=None, metavar="N")

    sp = sub.add_parser("cyclic-family", help="Q8 x C2^n and the two order-32 groups")
    _common(sp, family=False)
    sp.add_argument("--n-max", type=int, default=3)

    sp = sub.add_parser("lemma22", help="|H| = |H'|^2 |Z(H)| on random 2-generated subgroups")
    _common(sp, family=False)
    sp.add_argument("--trials", type=int, default=100)

    sp = sub.add_parser("engel-check", help="validate the nine exponent-27 relations")
    sp.add_argument("--out", type=Path, default=None)

    sp = sub.add_parser("tc", help="coset enumeration on a presentation file")
    sp.add_argument("file", type=Path)
    sp.add_argument("--max-cosets", type=int, default=C.DEFAULT_MAX_COSETS)
    sp.add_argument("--out", type=Path, default=None)
    return ap


def _config(args, kind: str, **kw) -> C.CampaignConfig:
    matrices = tuple(getattr(args, "T", None) or ())
    sample = getattr(args, "sample", None)
    selector = "sample" if sample else ("list" if matrices else "all")
    return C.CampaignConfig(
        kind=kind,
        p=getattr(args, "p", 3),
        r=getattr(args, "r", 1),
        t=getattr(args, "t", 1),
        selector=selector,
        sample=sample,
        matrices=matrices,
        seed=args.seed,
        size_cap=args.budget_size,
        coset_cap=args.budget_cosets,
        endo_budget=args.budget_endos,
        workers=args.workers,
        out=str(args.out) if args.out else None,
        timings=args.timings,
        **kw,
    )


def _single_params(args) -> GroupParams:
    T = args.T[0] if args.T else None
    if args.T and len(args.T) > 1:
        raise ValueError("this command takes a single --T")
    return GroupParams.of(args.p, args.r, args.t, T)


def _single(args) -> dict:
    cfg = _config(args, "classification")
    params = _single_params(args)
    base = {"instance": params.descriptor(), "params": C._params_json(params)}
    G, pres, backend = C.build_instance(params, cfg)
    rec = {**base, "backend": backend, "status": "pass"}
    if args.command == "construct":
        rec["order"] = G.order
        rec["validation"] = getattr(G, "validation", {})
    elif args.command == "inspect":
        return make_report("inspect", cfg.echo(), [C.classify_instance(params, cfg)])
    elif args.command == "endos":
        if backend == "coordinate":
            A = criterion_solutions(G)
            rec["criterion_solutions"] = int(len(A))
            rec["center_order"] = G.center().order
            rec["endo_count"] = count_endos(G)
            rec["solutions"] = [format_matrix(Mat3.from_array(a, params.T.modulus)) for a in A[: args.list]]
        else:
            rec["endo_count"] = int(len(brute_force_endo_array(G, pres, budget=cfg.endo_budget)))
            rec["method"] = "brute-force"
    elif args.command == "check-e":
        res = check_e_group(G, pres=pres, budget=cfg.endo_budget)
        rec["is_e_group"] = res.is_e_group
        rec["certificate"] = res.certificate
        rec["script_e"] = script_e_predicate(G)
        if res.witness is not None:
            rec["witness"] = res.witness.to_json(G)
            rec["witness_verified"] = res.witness.verify(G)
    return make_report(args.command, cfg.echo(), [rec])


def _tc(args) -> dict:
    pres = parse_presentation(args.file.read_text(), name=args.file.stem)
    G = todd_coxeter(pres, args.max_cosets)
    rec = {
        "instance": pres.name,
        "status": "pass",
        "order": G.order,
        "generators": list(pres.generators),
        "relators": len(pres.relators),
        "enumeration": G.enumeration_stats,
        "validation": G.validation,
    }
    return make_report("tc", {"file": str(args.file), "max_cosets": args.max_cosets}, [rec])


def run(args) -> dict:
    cmd = args.command
    if cmd in ("construct", "inspect", "endos", "check-e"):
        return _single(args)
    if cmd == "sweep":
        cfg = _config(args, args.kind, control=args.control)
        return C.sweep_classification(cfg) if args.kind == "classification" else C.sweep_egroup_falsification(cfg)
    if cmd == "iso-classes":
        return C.count_isomorphism_classes(_config(args, "iso-classes"))
    if cmd == "cyclic-family":
        return C.check_cyclic_family(args.n_max, _config(args, "cyclic-family", n_max=args.n_max))
    if cmd == "lemma22":
        cfg = _config(args, "lemma22", trials=args.trials)
        if cfg.seed is None:
            cfg = replace(cfg, seed=0)
        return C.check_lemma22(cfg)
    if cmd == "engel-check":
        return C.engel_report()
    if cmd == "tc":
        return _tc(args)
    raise AssertionError(cmd)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = run(args)
    except (RefusedError, ValueError, PresentationSyntaxError, OSError) as err:
        print(f"egroups: refused: {err}", file=sys.stderr)
        return EXIT_REFUSED
    except EGroupsError as err:
        print(f"egroups: error: {err}", file=sys.stderr)
        return 2
    out = getattr(args, "out", None)
    if out:
        write_report(report, out)
        s = report["summary"]
        print(f"{report['campaign']}: {s['pass']} pass, {s['fail']} fail, {s['skip']} skip -> {out}")
    else:
        sys.stdout.write(dumps(report))
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
