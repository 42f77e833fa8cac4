"""Campaigns over families of G(p, r, t, T): sweeps, isomorphism classes and side checks.

Every campaign returns a report dict (see ``report``).  Instance-level work
is a pure function of (campaign, parameters, config), so the sweep can be
fanned out over processes and merged back in selector order.
"""

from __future__ import annotations

import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np

from ..coordgroup import CONSTRUCTION_CAP, REGULARITY_CHECKS, GroupParams, make_group, structural_suite
from ..endo.egroup import EWitness, check_e_group, script_e_predicate
from ..endo.endos import EndoSpec, count_endos, criterion_solutions, images_for
from ..endo.homsearch import DEFAULT_BUDGET, find_isomorphism, relators_hold
from ..errors import RefusedError
from ..fpgroup import builtin_presentation, parse_presentation, subgroup_table, todd_coxeter
from ..fpgroup.coset_enum import DEFAULT_MAX_COSETS
from ..groupbase import TABLE_MAX, FiniteGroup
from ..modmat import Mat3, Modulus, enumerate_units, parse_matrix, unit_array
from .report import make_report

KINDS = ("classification", "egroup", "iso-classes", "lemma22", "cyclic-family", "engel")


@dataclass(frozen=True)
class CampaignConfig:
    kind: str = "classification"
    p: int = 3
    r: int = 1
    t: int = 1
    selector: str = "all"  # all | sample | list
    sample: int | None = None
    matrices: tuple[str, ...] = ()
    seed: int | None = None
    size_cap: int = CONSTRUCTION_CAP
    coset_cap: int = DEFAULT_MAX_COSETS
    endo_budget: int = DEFAULT_BUDGET
    workers: int = 1
    out: str | None = None
    trials: int = 100
    n_max: int = 3
    control: bool = False
    timings: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown campaign kind {self.kind!r}")
        if self.selector not in ("all", "sample", "list"):
            raise ValueError(f"unknown T-selector {self.selector!r}")
        if self.selector == "sample":
            if self.sample is None or self.sample < 1:
                raise ValueError("sample selector needs a positive sample size")
            if self.seed is None:
                raise ValueError("sampling needs an explicit seed")
        if self.selector == "list" and not self.matrices:
            raise ValueError("list selector needs at least one matrix")
        for name in ("size_cap", "coset_cap", "endo_budget", "workers", "trials"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if not 0 <= self.n_max <= 6:
            raise ValueError("n_max must lie in 0..6")

    def echo(self) -> dict:
        """Config as stored in reports; output path and worker count do not change results."""
        d = asdict(self)
        d["matrices"] = list(self.matrices)
        d.pop("out")
        d.pop("workers")
        return d


# -- instance selection and construction ----------------------------------------


def select_matrices(cfg: CampaignConfig) -> list[Mat3]:
    mod = Modulus(cfg.p, cfg.t)
    if cfg.selector == "list":
        return [parse_matrix(s, mod) for s in cfg.matrices]
    if cfg.selector == "sample":
        try:
            units = unit_array(mod)
        except RefusedError:
            return list(enumerate_units(mod, sample=cfg.sample, seed=cfg.seed))
        rng = np.random.default_rng(cfg.seed)
        idx = np.sort(rng.choice(len(units), size=min(cfg.sample, len(units)), replace=False))
        return [Mat3.from_array(units[i], mod) for i in idx]
    return [Mat3.from_array(A, mod) for A in unit_array(mod)]


def uses_presentation(params: GroupParams) -> bool:
    return params.p == 2 and params.t == params.r


def build_instance(params: GroupParams, cfg: CampaignConfig) -> tuple[FiniteGroup, object, str]:
    """(group, presentation or None, backend name); p = 2, t = r goes through coset enumeration."""
    seed = cfg.seed or 0
    if uses_presentation(params):
        if params.order > cfg.size_cap:
            raise RefusedError(f"|G| = {params.order} exceeds construction cap {cfg.size_cap}", params.order)
        pres = builtin_presentation("coord", params=params)
        return todd_coxeter(pres, cfg.coset_cap, seed=seed), pres, "presentation"
    return make_group(params, seed=seed, size_cap=cfg.size_cap), None, "coordinate"


def _params_json(params: GroupParams) -> dict:
    return {"p": params.p, "r": params.r, "t": params.t, "T": params.T.row_string()}


def _skip(base: dict, err: Exception) -> dict:
    return {**base, "status": "skip", "reason": f"{type(err).__name__}: {err}"}


# -- counterexamples for failed structural checks --------------------------------


def _counterexample(G: FiniteGroup, params: GroupParams, name: str, facts: dict):
    p, r, t = params.p, params.r, params.t
    fmt = G.format_element
    if name == "center_is_omega_r":
        xs = G.elements()
        omega = xs[np.asarray(G.power(xs, p**r)) == G.identity]
        Z = G.center()
        outside = omega[~Z.contains(omega)]
        if outside.size:
            return {"element": fmt(int(outside[0])), "note": f"x^(p^{r}) = 1 but x is not central"}
        inside = Z.elements[~np.isin(Z.elements, omega)]
        return {"element": fmt(int(inside[0])), "note": f"central but x^(p^{r}) != 1"}
    if name == "2_engel":
        xs = G.elements()
        for x in xs:
            c = np.asarray(G.commutator(G.commutator(int(x), xs), xs))
            bad = np.nonzero(c != G.identity)[0]
            if bad.size:
                return {"x": fmt(int(x)), "y": fmt(int(xs[bad[0]]))}
    if name == "generator_orders":
        return {"generator_orders": facts["generator_orders"], "expected": p ** (r + t)}
    if name == "centralizer_shape":
        Z = G.center()
        for g in G.generators:
            C = G.centralizer(g)
            S = G.closure([g, *Z.witness_generators()])
            extra = C.elements[~S.contains(C.elements)]
            if extra.size:
                return {"generator": fmt(g), "element": fmt(int(extra[0]))}
    return {k: facts.get(k) for k in ("order", "exponent", "center_order", "derived_order", "rank")}


# -- per-instance workers ------------------------------------------------------------


def classify_instance(params: GroupParams, cfg: CampaignConfig) -> dict:
    base = {"instance": params.descriptor(), "params": _params_json(params)}
    t0 = time.perf_counter()
    try:
        G, _, backend = build_instance(params, cfg)
        facts, checks = structural_suite(G, params)
        pe = script_e_predicate(G)
    except (RefusedError, ValueError) as err:
        return _skip(base, err)
    asserted = [k for k in checks if not (backend == "presentation" and k in REGULARITY_CHECKS)]
    failed = [k for k in asserted if not checks[k]]
    rec = {
        **base,
        "backend": backend,
        "status": "fail" if failed else "pass",
        "facts": facts,
        "checks": checks,
        "asserted": asserted,
        "script_e": pe,
        "validation": getattr(G, "validation", {}),
    }
    if backend == "coordinate":
        try:
            rec["endo_stats"] = {"criterion_solutions": int(len(criterion_solutions(G))), "endo_count": count_endos(G)}
        except RefusedError as err:
            rec["endo_stats"] = {"refused": str(err)}
    if failed:
        rec["counterexamples"] = {k: _counterexample(G, params, k, facts) for k in failed}
    if cfg.timings:
        rec["seconds"] = round(time.perf_counter() - t0, 4)
    return rec


def _egroup_verdict(G: FiniteGroup, pres, cfg: CampaignConfig, reduce_central: bool) -> dict:
    res = check_e_group(G, pres=pres, reduce_central=reduce_central, budget=cfg.endo_budget)
    out = {"is_e_group": res.is_e_group, "certificate": res.certificate}
    if res.witness is not None:
        out["witness"] = res.witness.to_json(G)
        out["witness_verified"] = res.witness.verify(G)
    return out


def egroup_instance(params: GroupParams, cfg: CampaignConfig) -> dict:
    base = {"instance": params.descriptor(), "params": _params_json(params)}
    t0 = time.perf_counter()
    try:
        G, pres, backend = build_instance(params, cfg)
        verdict = _egroup_verdict(G, pres, cfg, reduce_central=True)
    except (RefusedError, ValueError) as err:
        return _skip(base, err)
    rec = {**base, "backend": backend, **verdict}
    if verdict["is_e_group"]:
        # red alert: would contradict the theorem; recheck without shortcuts before reporting
        G2, pres2, _ = build_instance(params, cfg)
        again = _egroup_verdict(G2, pres2, cfg, reduce_central=False)
        rec["red_alert"] = {"verification_rerun": again, "confirmed": again["is_e_group"]}
        rec["status"] = "fail"
    else:
        rec["status"] = "pass" if verdict.get("witness_verified") else "fail"
    if cfg.timings:
        rec["seconds"] = round(time.perf_counter() - t0, 4)
    return rec


def _job(args) -> dict:
    kind, p, r, t, entries, cfg = args
    params = GroupParams(p, r, t, Mat3(entries, Modulus(p, t)))
    if kind == "classification":
        return classify_instance(params, cfg)
    return egroup_instance(params, cfg)


def _run_jobs(jobs: list, workers: int) -> list[dict]:
    """Results in job order, whatever the completion order."""
    if workers <= 1 or len(jobs) <= 1:
        return [_job(j) for j in jobs]
    chunk = max(1, len(jobs) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(_job, jobs, chunksize=chunk))


def _family_jobs(kind: str, cfg: CampaignConfig) -> list:
    if not 1 <= cfg.t <= cfg.r:
        raise ValueError(f"need 1 <= t <= r, got r={cfg.r}, t={cfg.t}")
    return [(kind, cfg.p, cfg.r, cfg.t, T.entries, cfg) for T in select_matrices(cfg)]


def _finish(campaign: str, cfg: CampaignConfig, records: list[dict], extra: dict | None = None) -> dict:
    return make_report(campaign, cfg.echo(), records, extra)


# -- campaigns -----------------------------------------------------------------------


def sweep_classification(cfg: CampaignConfig) -> dict:
    """Structural suite and script-E predicate for every selected T."""
    cfg = replace(cfg, kind="classification")
    try:
        jobs = _family_jobs("classification", cfg)
    except (RefusedError, ValueError) as err:
        return _finish("sweep_classification", cfg, [_skip({"instance": f"G({cfg.p},{cfg.r},{cfg.t},*)"}, err)])
    records = _run_jobs(jobs, cfg.workers)
    pe = sum(1 for r in records if r.get("script_e", {}).get("omega_r_equals_center"))
    return _finish("sweep_classification", cfg, records, {"script_e_instances": pe})


def abelian_control(p: int) -> tuple[FiniteGroup, object]:
    """Elementary abelian group of order p^3 with its presentation: every endomorphism commutes."""
    pres = parse_presentation(f"gens: a, b, c\nrel: a^{p}, b^{p}, c^{p}, [a,b], [a,c], [b,c]", name=f"C{p}^3")
    return todd_coxeter(pres), pres


def sweep_egroup_falsification(cfg: CampaignConfig) -> dict:
    """check_e_group on every selected T; a true verdict is a red alert and is rechecked."""
    cfg = replace(cfg, kind="egroup")
    try:
        jobs = _family_jobs("egroup", cfg)
    except (RefusedError, ValueError) as err:
        return _finish("sweep_egroup_falsification", cfg, [_skip({"instance": f"G({cfg.p},{cfg.r},{cfg.t},*)"}, err)])
    records = _run_jobs(jobs, cfg.workers)
    if cfg.control:
        G, pres = abelian_control(cfg.p)
        verdict = _egroup_verdict(G, pres, cfg, reduce_central=False)
        records.append(
            {
                "instance": pres.name,
                "control": True,
                "backend": "presentation",
                "status": "pass" if verdict["is_e_group"] else "fail",
                **verdict,
            }
        )
    alerts = sum(1 for r in records if "red_alert" in r)
    witnesses = sum(1 for r in records if r.get("witness_verified"))
    return _finish("sweep_egroup_falsification", cfg, records, {"red_alerts": alerts, "verified_witnesses": witnesses})


def reverify_witness(record: dict, cfg: CampaignConfig | None = None) -> bool:
    """Rebuild the group from a stored falsification record and recheck its witness from scratch."""
    cfg = cfg or CampaignConfig()
    prm = record["params"]
    params = GroupParams.of(prm["p"], prm["r"], prm["t"], prm["T"])
    G, pres, backend = build_instance(params, cfg)
    w = record["witness"]
    if backend == "coordinate":
        A = parse_matrix(w["endo"]["A"])
        z = np.array([[G.parse_element(s) for s in w["endo"]["z"]]])
        images = images_for(G, A.to_array(), z)
        ok = bool(relators_hold(G, images, builtin_presentation("coord", params=params))[0])
        endo = EndoSpec(tuple(int(v) for v in images[0]), A, tuple(int(v) for v in z[0]))
    else:
        images = [G.parse_element(s) for s in w["endo"]["images"]]
        ok = bool(relators_hold(G, np.array([images]), pres)[0])
        endo = EndoSpec(tuple(images))
    wit = EWitness(endo, G.parse_element(w["x"]), G.parse_element(w["commutator"]))
    return ok and wit.verify(G)


def _histogram_key(G: FiniteGroup) -> tuple:
    return tuple(sorted(G.order_histogram().items()))


def count_isomorphism_classes(cfg: CampaignConfig) -> dict:
    """Partition the selected family into isomorphism classes.

    Instances are bucketed by element-order histogram (different histograms
    are never compared); inside a bucket each instance is tested against the
    class representatives with ``find_isomorphism``.  A search that runs out
    of budget leaves the pair unresolved and opens a new class.
    """
    cfg = replace(cfg, kind="iso-classes")
    records: list[dict] = []
    groups = []
    for T in select_matrices(cfg):
        params = GroupParams(cfg.p, cfg.r, cfg.t, T)
        base = {"instance": params.descriptor(), "params": _params_json(params)}
        if params.order > TABLE_MAX:
            records.append({**base, "status": "skip", "reason": f"order {params.order} above pairwise-search cap {TABLE_MAX}"})
            continue
        try:
            G, pres, _ = build_instance(params, cfg)
        except (RefusedError, ValueError) as err:
            records.append(_skip(base, err))
            continue
        pres = pres or builtin_presentation("coord", params=params)
        groups.append((base, G, pres))
        records.append(base)

    classes: list[dict] = []
    by_hist: dict[tuple, list[int]] = defaultdict(list)
    unresolved = []
    comparisons = 0
    slot = {id(b): i for i, b in enumerate(records)}
    for base, G, pres in groups:
        key = _histogram_key(G)
        found = None
        for ci in by_hist[key]:
            rep = classes[ci]
            comparisons += 1
            try:
                iso = find_isomorphism(rep["pres"], G, G1=rep["group"], budget=cfg.endo_budget)
            except RefusedError:
                unresolved.append([rep["representative"], base["instance"]])
                continue
            if iso:
                found = ci
                break
        if found is None:
            pe = script_e_predicate(G)
            classes.append(
                {
                    "representative": base["instance"],
                    "group": G,
                    "pres": pres,
                    "members": [],
                    "histogram": {str(k): v for k, v in key},
                    "script_e": pe["omega_r_equals_center"],
                }
            )
            found = len(classes) - 1
            by_hist[key].append(found)
        classes[found]["members"].append(base["instance"])
        records[slot[id(base)]] = {**base, "status": "pass", "class": found}

    out_classes = [
        {k: c[k] for k in ("representative", "histogram", "script_e")} | {"size": len(c["members"]), "members": c["members"]}
        for c in classes
    ]
    extra = {
        "class_count": len(classes),
        "histogram_buckets": len(by_hist),
        "script_e_class_count": sum(1 for c in classes if c["script_e"]),
        "script_e_instances": sum(len(c["members"]) for c in classes if c["script_e"]),
        "classes": out_classes,
        "comparisons": comparisons,
        "unresolved_pairs": unresolved,
    }
    return _finish("count_isomorphism_classes", cfg, records, extra)


def _derived_exponent(G: FiniteGroup, D) -> int:
    return int(np.lcm.reduce(G.element_orders(D.elements)))


def _cyclic_record(name: str, G: FiniteGroup, pres, checks: dict, facts: dict, cfg: CampaignConfig) -> dict:
    verdict = _egroup_verdict(G, pres, cfg, reduce_central=False)
    checks["not_e_group"] = (not verdict["is_e_group"]) and bool(verdict.get("witness_verified"))
    failed = [k for k, v in checks.items() if not v]
    rec = {"instance": name, "status": "fail" if failed else "pass", "facts": facts, "checks": checks, **verdict}
    if failed:
        rec["counterexamples"] = {k: facts for k in failed}
    return rec


def check_cyclic_family(n_max: int = 3, cfg: CampaignConfig | None = None) -> dict:
    """Q8 x C2^n for n = 0..n_max, plus the two order-32 groups of the 2-group classification."""
    cfg = replace(cfg or CampaignConfig(kind="cyclic-family"), kind="cyclic-family", n_max=n_max)
    records = []
    for n in range(n_max + 1):
        pres = builtin_presentation("q8xc2n", n=n)
        G = todd_coxeter(pres, cfg.coset_cap)
        D, Z = G.derived_subgroup(), G.center()
        pe = script_e_predicate(G)
        facts = {
            "order": G.order,
            "derived_order": D.order,
            "center_order": Z.order,
            "rank": G.generator_rank(),
            "script_e": pe,
        }
        checks = {
            "order": G.order == 8 * 2**n,
            "derived_cyclic_order_2": D.order == 2 and int(G.element_orders(D.elements).max()) == 2,
            "omega_1_is_center": pe["r"] == 1 and pe["omega_r_equals_center"],
            "rank": facts["rank"] == 2 + n,
        }
        records.append(_cyclic_record(pres.name or f"Q8xC2^{n}", G, pres, checks, facts, cfg))
    for key in ("thm2e_ii", "thm2e_iii"):
        pres = builtin_presentation(key)
        G = todd_coxeter(pres, cfg.coset_cap)
        D = G.derived_subgroup()
        facts = {
            "order": G.order,
            "derived_order": D.order,
            "center_order": G.center().order,
            "rank": G.generator_rank(),
            "quotient_exponent": G.quotient_exponent(D),
            "derived_exponent": _derived_exponent(G, D),
        }
        checks = {
            "order_32": G.order == 32,
            "class_2": G.is_class_le2() and not G.is_abelian(),
            "rank_3": facts["rank"] == 3,
            "exponents_2": facts["quotient_exponent"] == 2 and facts["derived_exponent"] == 2,
        }
        records.append(_cyclic_record(pres.name or key, G, pres, checks, facts, cfg))
    return _finish("check_cyclic_family", cfg, records)


DEFAULT_LEMMA22_INSTANCES = (
    (3, 1, 1, "1 0 0|0 1 0|0 0 1"),
    (3, 1, 1, "0 1 0|0 0 1|1 0 0"),
    (2, 2, 1, "1 0 0|0 1 0|0 0 1"),
    (2, 1, 1, "1 1 0|0 1 0|0 0 1"),
    (5, 1, 1, "1 0 0|0 1 0|0 0 1"),
)


def lemma22_trial(G: FiniteGroup, x: int, y: int) -> dict:
    """|H| = |H'|^2 |Z(H)| for H = <x, y>, computed inside H."""
    H = G.closure([x, y])
    HT = subgroup_table(G, H)
    D, Z = HT.derived_subgroup(), HT.center()
    return {
        "x": G.format_element(x),
        "y": G.format_element(y),
        "order": H.order,
        "derived_order": D.order,
        "center_order": Z.order,
        "holds": H.order == D.order**2 * Z.order,
    }


def check_lemma22(cfg: CampaignConfig, instances=DEFAULT_LEMMA22_INSTANCES) -> dict:
    """Seeded random 2-generated subgroups, spread round-robin over the instances."""
    if cfg.seed is None:
        raise ValueError("lemma22 trials need an explicit seed")
    cfg = replace(cfg, kind="lemma22")
    built = []
    for p, r, t, T in instances:
        params = GroupParams.of(p, r, t, T)
        G, _, _ = build_instance(params, cfg)
        built.append((params, G))
    rng = np.random.default_rng(cfg.seed)
    records = []
    for k in range(cfg.trials):
        params, G = built[k % len(built)]
        x, y = (int(v) for v in rng.integers(0, G.order, 2))
        trial = lemma22_trial(G, x, y)
        rec = {"instance": params.descriptor(), "trial": k, "status": "pass" if trial["holds"] else "fail", **trial}
        records.append(rec)
    return _finish("check_lemma22", cfg, records, {"instances": len(built)})


def engel_report(data=None) -> dict:
    from .engel import ENGEL_DATA, validate_engel_relations

    data = data or ENGEL_DATA
    res = validate_engel_relations(data)
    rec = {"instance": "engel-9", "status": "pass" if res.ok else "fail", **res.to_json(), "relations": data.to_text()}
    return make_report("validate_engel_relations", {"kind": "engel"}, [rec])


__all__ = [
    "CampaignConfig",
    "abelian_control",
    "build_instance",
    "check_cyclic_family",
    "check_lemma22",
    "classify_instance",
    "count_isomorphism_classes",
    "egroup_instance",
    "engel_report",
    "lemma22_trial",
    "reverify_witness",
    "select_matrices",
    "sweep_classification",
    "sweep_egroup_falsification",
    "uses_presentation",
]
