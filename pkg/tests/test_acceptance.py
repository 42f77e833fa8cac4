"""Acceptance criteria 1-10, each at its stated tolerance.

Every test records one line in ``ACCEPTANCE_LINES``; the lines are printed
in the "acceptance criteria" section at the end of the pytest run.  The full
p = 3 sweeps take roughly 20 minutes on one core.
"""

import random
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from egroups.coordgroup import GroupParams, centralizer_shape_holds, make_group
from egroups.endo.endos import A_solution_set, EndoSpec, apply, coord_endo_array, count_endos, criterion_solutions
from egroups.endo.homsearch import brute_force_endo_array, satisfies_relators
from egroups.fpgroup import builtin_presentation, parse_word, todd_coxeter
from egroups.lab import campaigns as C
from egroups.lab.engel import ENGEL_DATA, validate_engel_relations
from egroups.modmat import Mat3, count_criterion_solutions

from test_fpgroup import _random_word

I3 = "1 0 0|0 1 0|0 0 1"
ROT = "0 1 0|0 0 1|1 0 0"


def record(k: int, ok: bool, text: str) -> None:
    ACCEPTANCE_LINES[k] = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {text}"


def _timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


@pytest.fixture(scope="module")
def sweep_p3():
    return _timed(C.sweep_classification, C.CampaignConfig(kind="classification", p=3))


@pytest.fixture(scope="module")
def falsify_p3():
    return _timed(C.sweep_egroup_falsification, C.CampaignConfig(kind="egroup", p=3, control=True))


@pytest.fixture(scope="module")
def falsify_p2():
    return _timed(C.sweep_egroup_falsification, C.CampaignConfig(kind="egroup", p=2, control=True))


@pytest.fixture(scope="module")
def iso_p2():
    return _timed(C.count_isomorphism_classes, C.CampaignConfig(kind="iso-classes", p=2))


# -- 1 ---------------------------------------------------------------------------------------------


def test_criterion_1_structural_sweep_p3(sweep_p3):
    rep, secs = sweep_p3
    s = rep["summary"]
    recs = rep["records"]
    wanted = (
        "order", "derived_order", "center_index", "center_is_agemo_t", "center_is_omega_r",
        "exponent", "generator_orders", "rank", "class_2", "2_engel",
    )
    ok = (
        s["total"] == 11232
        and s["pass"] == 11232
        and all(r["backend"] == "coordinate" for r in recs)
        and all(all(r["checks"][k] for k in wanted) for r in recs)
        and all(r["facts"]["order"] == 729 and r["facts"]["exponent"] == 9 for r in recs)
    )
    record(1, ok, f"G(3,1,1,T) structural suite: {s['pass']}/{s['total']} pass, {s['fail']} fail ({secs:.0f} s, 1 worker)")
    assert ok, [r for r in recs if r["status"] != "pass"][:3]


# -- 2 ---------------------------------------------------------------------------------------------


def test_criterion_2_no_e_groups(falsify_p3, falsify_p2):
    lines, ok = [], True
    for (rep, secs), p, n in ((falsify_p3, 3, 11232), (falsify_p2, 2, 168)):
        recs = [r for r in rep["records"] if not r.get("control")]
        control = [r for r in rep["records"] if r.get("control")]
        cfg = C.CampaignConfig(p=p)
        reverified = sum(C.reverify_witness(r, cfg) for r in recs)
        good = (
            len(recs) == n
            and all(r["is_e_group"] is False and r["status"] == "pass" for r in recs)
            and reverified == n
            and rep["summary"]["red_alerts"] == 0
            and len(control) == 1 and control[0]["is_e_group"] is True
        )
        backend = "presentation" if p == 2 else "coordinate"
        lines.append(f"p={p}: {reverified}/{n} witnesses re-verified ({backend}, {secs:.0f} s)")
        ok &= good
    record(2, ok, "; ".join(lines) + "; abelian controls report E")
    assert ok


# -- 3 ---------------------------------------------------------------------------------------------

ORACLE_INSTANCES = [
    (3, 1, 1, I3),
    (3, 1, 1, ROT),
    (3, 1, 1, "1 2 0|0 1 1|2 0 1"),
    (2, 2, 1, I3),
    (2, 2, 1, ROT),
]


def _oracle_equivalence(p, r, t, T):
    params = GroupParams.of(p, r, t, T)
    G = make_group(params)
    pres = builtin_presentation("coord", params=params)
    H = todd_coxeter(pres)
    # H -> G sending presentation generators to a, b, c; an isomorphism when
    # a, b, c satisfy the relators and the orders agree
    assert satisfies_relators(G, G.generators, pres) and H.order == G.order
    phi = H.evaluate_images(np.array([G.generators]), target=G)[0]
    assert np.unique(phi).size == G.order

    crit = coord_endo_array(G)
    brute = brute_force_endo_array(H, pres)
    crit_set = {tuple(map(int, row)) for row in crit}
    brute_set = {tuple(map(int, row)) for row in phi[brute]}
    n_expected = count_criterion_solutions(params.T) * G.center().order ** 3

    # pointwise comparison of the full maps on a seeded sample of endomorphisms
    rng = np.random.default_rng(p * 100 + r)
    pointwise = True
    for i in rng.choice(len(brute), size=min(200, len(brute)), replace=False):
        on_H = H.evaluate_images(brute[i : i + 1])[0]  # psi on every element of H
        spec = EndoSpec(tuple(int(v) for v in phi[brute[i]]))
        pointwise &= bool(np.array_equal(phi[on_H], apply(G, spec, phi)))
    return {
        "instance": params.descriptor(),
        "crit": len(crit_set),
        "brute": len(brute_set),
        "expected": n_expected,
        "equal": crit_set == brute_set and pointwise,
        "count_ok": len(crit) == len(crit_set) == n_expected == count_endos(G) and len(brute) == len(brute_set),
    }


def test_criterion_3_oracle_equivalence():
    results = [_oracle_equivalence(*inst) for inst in ORACLE_INSTANCES]
    ok = len(results) >= 5 and all(r["equal"] and r["count_ok"] for r in results)
    detail = ", ".join(f"{r['instance']}: {r['crit']}" for r in results)
    record(3, ok, f"criterion endos == brute-force endos on {len(results)} instances ({detail})")
    assert ok, results


# -- 4 ---------------------------------------------------------------------------------------------


def _iso_line(rep, secs):
    s = rep["summary"]
    sizes = [c["size"] for c in s["classes"]]
    ok = s["class_count"] == 4
    record(
        4,
        ok,
        f"{s['total']} groups G(2,1,1,T) fall into {s['class_count']} isomorphism classes (sizes {sizes}; "
        f"4 required); the {s['script_e_instances']} members with Omega_1 = Z form exactly "
        f"{s['script_e_class_count']} classes ({secs:.0f} s)",
    )
    return s


@pytest.mark.xfail(
    strict=True,
    reason="the 168 groups G(2,1,1,T) form 10 isomorphism classes; four is the count of the classes with Omega_1 = Z",
)
def test_criterion_4_all_168_form_four_classes(iso_p2):
    s = _iso_line(*iso_p2)
    assert s["class_count"] == 4


def test_criterion_4_classes_with_omega_equal_center(iso_p2):
    s = _iso_line(*iso_p2)
    assert s["total"] == 168 and s["pass"] == 168 and not s["unresolved_pairs"]
    assert sum(c["size"] for c in s["classes"]) == 168
    assert s["script_e_class_count"] == 4


# -- 5 ---------------------------------------------------------------------------------------------


def test_criterion_5_cyclic_family():
    rep = C.check_cyclic_family(3)
    recs = {r["instance"]: r for r in rep["records"]}
    ok = rep["summary"]["pass"] == rep["summary"]["total"] == 6 and all(r["is_e_group"] is False for r in recs.values())
    record(5, ok, f"Q8 x C2^n (n=0..3) and the two order-32 groups: {rep['summary']['pass']}/6 pass, none is an E-group")
    assert ok, [r for r in rep["records"] if r["status"] != "pass"]


# -- 6 ---------------------------------------------------------------------------------------------


def test_criterion_6_lemma22():
    rep = C.check_lemma22(C.CampaignConfig(kind="lemma22", seed=22, trials=100))
    s = rep["summary"]
    ok = s["total"] == 100 and s["pass"] == 100 and s["instances"] >= 5
    record(6, ok, f"|H| = |H'|^2 |Z(H)|: {s['pass']}/100 seeded subgroups over {s['instances']} instances (seed 22)")
    assert ok


# -- 7 ---------------------------------------------------------------------------------------------


def test_criterion_7_centralizer_shape(sweep_p3):
    rep, _ = sweep_p3
    from_sweep = sum(r["checks"]["centralizer_shape"] for r in rep["records"])
    extra = [GroupParams.of(5, 1, 1), GroupParams.of(3, 2, 1), GroupParams.of(2, 2, 1)]
    extra += [GroupParams(2, 2, 1, T) for T in C.select_matrices(C.CampaignConfig(p=2, selector="sample", sample=20, seed=7))]
    good_extra = 0
    for params in extra:
        G = make_group(params)
        Z = G.center()
        good_extra += all(centralizer_shape_holds(G, g, Z) for g in G.generators)
    ok = from_sweep == 11232 and good_extra == len(extra)
    record(7, ok, f"C_G(g) = <g>Z(G) for a, b, c on {from_sweep + good_extra}/{11232 + len(extra)} coordinate instances")
    assert ok


# -- 8 ---------------------------------------------------------------------------------------------


def _criterion_8():
    rows = []
    for T in C.select_matrices(C.CampaignConfig(p=2, selector="sample", sample=10, seed=8)):
        G = make_group(GroupParams(2, 2, 1, T))
        s_coord = A_solution_set(G, coord_endo_array(G), 2)
        pres = builtin_presentation("coord", params=GroupParams(2, 1, 1, T))
        H = todd_coxeter(pres)
        s_table = A_solution_set(H, brute_force_endo_array(H, pres), 2)
        rows.append((T.row_string(), len(s_coord), len(s_table), s_coord == s_table))
    return rows


@pytest.mark.xfail(
    strict=True,
    reason="G(2,1,1,T) has endomorphisms whose matrices mod 2 fail the criterion, and misses some that satisfy it",
)
def test_criterion_8_invariance_across_r():
    rows = _criterion_8()
    agree = sum(r[3] for r in rows)
    sizes = ", ".join(f"{row[1]}/{row[2]}" for row in rows)
    record(8, agree == 10, f"A-sets of G(2,2,1,T) vs G(2,1,1,T) agree for {agree}/10 seeded T (sizes coord/table: {sizes})")
    assert agree == 10


# -- 9 ---------------------------------------------------------------------------------------------


def test_criterion_9_engel_relations():
    res = validate_engel_relations(ENGEL_DATA)
    mutants = detected = 0
    for rel in range(9):
        for pos in range(4):
            current = ENGEL_DATA.relations[rel][1][pos]
            for a in range(1, 10):
                for b in range(a + 1, 10):
                    if (a, b) == current:
                        continue
                    mutants += 1
                    detected += not validate_engel_relations(ENGEL_DATA.replace_pair(rel, pos, (a, b))).ok
    ok = res.ok and res.distinct_pairs == 36 and detected == mutants
    record(9, ok, f"36/36 pairs covered once, no self-reference; {detected}/{mutants} single-factor mutations detected")
    assert ok


# -- 10 --------------------------------------------------------------------------------------------


def test_criterion_10_group_axioms(sweep_p3, falsify_p2):
    notes, ok = [], True

    # identity and inverse laws were scanned exhaustively at construction time
    vals = [r["validation"] for r in sweep_p3[0]["records"]]
    ok &= all(v["identity_inverse"] == "exhaustive" for v in vals)
    ok &= all(v["associativity"] in ("light-test", "exhaustive") for v in vals)
    notes.append(f"{len(vals)} sweep tables certified")

    # literal |G|^3 scans on every group of order <= 729 built here
    small = [make_group(GroupParams.of(3, 1, 1, T)) for T in (I3, ROT, "1 2 0|0 1 1|2 0 1")]
    small += [make_group(GroupParams(3, 1, 1, T)) for T in C.select_matrices(C.CampaignConfig(selector="sample", sample=5, seed=10))]
    small += [make_group(GroupParams.of(2, 2, 1, T)) for T in (I3, ROT)]
    tables = [todd_coxeter(builtin_presentation(k)) for k in ("thm2e_i", "thm2e_ii", "thm2e_iii")]
    tables += [todd_coxeter(builtin_presentation("q8xc2n", n=n)) for n in range(4)]
    tables += [todd_coxeter(builtin_presentation("coord", params=GroupParams.of(2, 1, 1, T))) for T in (I3, ROT)]
    for G in small + tables:
        ok &= G.check_associativity_exhaustive() == G.order**3
        ok &= G.is_latin_square()
        n = G.order
        xs = np.arange(n)
        ok &= bool(np.all(G.mul(xs, 0) == xs) and np.all(G.mul(G.inv(xs), xs) == 0))
    notes.append(f"{len(small + tables)} groups scanned exhaustively")

    # the presentation-backend family: Latin square, exhaustive identity/inverse/associativity
    v2 = [r for r in falsify_p2[0]["records"] if not r.get("control")]
    family = [todd_coxeter(builtin_presentation("coord", params=GroupParams(2, 1, 1, T)))
              for T in C.select_matrices(C.CampaignConfig(p=2))]
    ok &= len(family) == len(v2) == 168
    ok &= all(G.validation == {"latin_square": True, "identity_inverse": "exhaustive", "associativity": "exhaustive"} for G in family)

    # larger instances: 10^6 seeded triples each
    big = [make_group(GroupParams.of(*prm)) for prm in ((3, 2, 1), (5, 1, 1), (2, 3, 1))]
    ok &= all(G.validation["associativity"] == "sampled:1000000:seed=0" for G in big)
    ok &= all(G.validation["identity_inverse"] == "exhaustive" for G in big)
    tc_big = todd_coxeter(builtin_presentation("coord", params=GroupParams.of(2, 2, 2)))
    v = tc_big.validate(samples=10**6)
    ok &= tc_big.order == 4096 and v["associativity"] == "sampled:1000000:seed=0" and v["latin_square"]
    notes.append(f"{len(big) + 1} larger groups on 10^6 triples")

    # parser round trip
    gens = ["x", "y", "z"]
    rng = random.Random(10)
    words = [_random_word(rng, gens) for _ in range(200)]
    ok &= all(parse_word(str(parse_word(w, gens)), gens) == parse_word(w, gens) for w in words)
    notes.append("200 words round-trip")

    record(10, ok, "; ".join(notes))
    assert ok
