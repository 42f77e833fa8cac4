import numpy as np
import pytest

from egroups.coordgroup import GroupParams, make_group
from egroups.endo import (
    apply,
    brute_force_endo_array,
    check_e_group,
    classify_endo,
    compose,
    count_endos,
    enumerate_endos,
    extract_A,
    find_isomorphism,
    identity_endo,
    is_automorphism,
    satisfies_relators,
    script_e_predicate,
    trivial_endo,
)
from egroups.endo.endos import EndoSpec, coord_endo_array, criterion_solutions, from_images
from egroups.errors import RefusedError
from egroups.fpgroup import builtin_presentation, cyclic_group, direct_product, parse_presentation, todd_coxeter
from egroups.modmat import Mat3, count_criterion_solutions

from oracles import table_homs


@pytest.fixture(scope="module")
def c2xc2():
    pres = parse_presentation("gens: x y\nrel: x^2 = y^2 = [x,y] = 1")
    return todd_coxeter(pres), pres


# -- brute force against the table oracle ----------------------------------------------------


def test_c2xc2_has_16_endos(c2xc2):
    G, pres = c2xc2
    found = brute_force_endo_array(G, pres)
    assert len(found) == 16
    oracle = table_homs(G.build_table().tolist(), list(G.generators), G.build_table().tolist())
    assert {tuple(map(int, r)) for r in found} == set(oracle)


def test_q8_endos_and_automorphisms(q8):
    G, pres = q8
    found = brute_force_endo_array(G, pres)
    t = G.build_table().tolist()
    assert {tuple(map(int, r)) for r in found} == set(table_homs(t, list(G.generators), t))
    autos = [r for r in found if is_automorphism(G, from_images(G, r))]
    assert len(found) == 28 and len(autos) == 24
    for r in found:
        assert satisfies_relators(G, r, pres)


def test_budget_refusal(g211_pres):
    G, pres = g211_pres
    with pytest.raises(RefusedError) as err:
        brute_force_endo_array(G, pres, budget=1000)
    assert err.value.estimate > 1000


# -- criterion enumeration ----------------------------------------------------------------------


def test_count_identity(g311):
    assert count_endos(g311) == count_criterion_solutions(Mat3.identity(3)) * 27**3
    assert count_endos(g311) == 25 * 27**3


def test_enumeration_contains_identity_and_trivial(g221):
    it = enumerate_endos(g221)
    specs = [next(it) for _ in range(64**3 + 1)]
    trivial = specs[0]
    assert trivial.A == Mat3.zero(2) and set(trivial.images) == {g221.identity}
    ident = identity_endo(g221)
    A_rows = criterion_solutions(g221)
    assert any(np.array_equal(A, np.eye(3, dtype=np.int64)) for A in A_rows)
    assert np.all(apply(g221, ident, np.arange(g221.order)) == np.arange(g221.order))


def test_criterion_endos_match_brute_force_small():
    # order 512, brute force with order pruning stays well within budget
    G = make_group(GroupParams.of(2, 2, 1, "0 1 0|0 0 1|1 0 0"))
    crit = coord_endo_array(G)
    brute = brute_force_endo_array(G, builtin_presentation("coord", params=G.params))
    assert len(crit) == count_endos(G)
    assert {tuple(map(int, r)) for r in crit} == {tuple(map(int, r)) for r in brute}


def test_apply_is_multiplicative(g311):
    rng = np.random.default_rng(7)
    A = criterion_solutions(g311)
    Z = g311.center().elements
    for _ in range(5):
        a = A[rng.integers(len(A))]
        z = Z[rng.integers(len(Z), size=3)]
        from egroups.endo.endos import images_for

        endo = EndoSpec(tuple(int(v) for v in images_for(g311, a, z[None, :])[0]))
        x, y = rng.integers(0, g311.order, size=(2, 10**4))
        assert np.array_equal(apply(g311, endo, g311.mul(x, y)), g311.mul(apply(g311, endo, x), apply(g311, endo, y)))


def test_apply_identity_and_trivial(q8):
    G, _ = q8
    xs = np.arange(G.order)
    assert np.array_equal(apply(G, identity_endo(G), xs), xs)
    assert np.all(apply(G, trivial_endo(G), xs) == G.identity)
    assert apply(G, identity_endo(G), 3) == 3


def test_compose_closure(g311):
    rng = np.random.default_rng(8)
    pres = builtin_presentation("coord", params=g311.params)
    A = criterion_solutions(g311)
    from egroups.endo.endos import images_for

    Z = g311.center().elements
    specs = []
    for _ in range(20):
        a = A[rng.integers(len(A))]
        z = Z[rng.integers(len(Z), size=3)]
        specs.append(from_images(g311, images_for(g311, a, z[None, :])[0]))
    for _ in range(100):
        f, g = (specs[i] for i in rng.integers(len(specs), size=2))
        h = compose(g311, f, g)
        assert satisfies_relators(g311, h.images, pres)
        x = rng.integers(0, g311.order, 50)
        assert np.array_equal(apply(g311, h, x), apply(g311, g, apply(g311, f, x)))


# -- classification ---------------------------------------------------------------------------


def test_classification_examples(q8, g311):
    G, _ = q8
    assert classify_endo(G, identity_endo(G)).tag == "central_automorphism"
    assert classify_endo(G, trivial_endo(G)).tag == "image_central"
    assert not is_automorphism(G, trivial_endo(G))
    i, j = G.generators
    swap = from_images(G, (j, i))
    assert is_automorphism(G, swap)
    assert classify_endo(G, swap).tag == "other"
    # A = I with arbitrary central parts is still an automorphism
    Z = g311.center().elements
    from egroups.endo.endos import images_for

    imgs = images_for(g311, np.eye(3, dtype=np.int64), Z[[5, 11, 20]][None, :])[0]
    spec = from_images(g311, imgs)
    assert is_automorphism(g311, spec)
    assert classify_endo(g311, spec).tag == "central_automorphism"


def test_extract_A_reads_back_matrices(g311):
    A = criterion_solutions(g311)
    from egroups.endo.endos import images_for

    Z = g311.center().elements
    for a in A[::5]:
        imgs = images_for(g311, a, Z[[1, 2, 3]][None, :])
        assert np.array_equal(extract_A(g311, imgs, 3)[0], a)


def test_extract_A_on_table_backend(g211_pres):
    G, pres = g211_pres
    # the designated generators read back as the identity matrix
    A = extract_A(G, np.array([G.generators]), 2)[0]
    assert np.array_equal(A, np.eye(3, dtype=np.int64))


# -- E-group decision -------------------------------------------------------------------------


def test_abelian_group_is_e_group():
    pres = parse_presentation("gens: x y\nrel: x^2 = y^4 = [x,y] = 1")
    res = check_e_group(todd_coxeter(pres), pres=pres)
    assert res.is_e_group and res.witness is None
    # x has 4 choices of order dividing 2, y any of 8
    assert res.certificate["endos_examined"] == 4 * 8
    with pytest.raises(ValueError):
        check_e_group(direct_product(cyclic_group(2), cyclic_group(4)))


def test_q8_not_e_group(q8):
    G, pres = q8
    res = check_e_group(G, pres=pres)
    assert not res.is_e_group
    assert res.witness.verify(G)


def test_q8xc2_not_e_group():
    pres = builtin_presentation("thm2e_i")
    G = todd_coxeter(pres)
    res = check_e_group(G, pres=pres)
    assert not res.is_e_group and res.witness.verify(G)


def test_g221_not_e_group_and_reduction_agrees(g221):
    fast = check_e_group(g221)
    slow = check_e_group(g221, reduce_central=False)
    assert not fast.is_e_group and not slow.is_e_group
    assert fast.witness.x == slow.witness.x and fast.witness.value == slow.witness.value
    assert fast.witness.endo.A == slow.witness.endo.A
    assert fast.witness.verify(g221) and slow.witness.verify(g221)
    assert check_e_group(g221).witness == fast.witness


def test_witness_json(g311):
    res = check_e_group(g311)
    js = res.witness.to_json(g311)
    assert set(js) == {"endo", "x", "commutator"}
    assert set(js["endo"]) == {"A", "z"}


# -- structural predicate and isomorphisms -----------------------------------------------------


def test_script_e_predicate_examples(q8, g311):
    G, _ = q8
    assert script_e_predicate(G) == {"r": 1, "omega_r_in_center": True, "omega_r_equals_center": True}
    assert script_e_predicate(g311) == {"r": 1, "omega_r_in_center": True, "omega_r_equals_center": True}
    C4 = cyclic_group(4)
    assert script_e_predicate(C4) == {"r": 2, "omega_r_in_center": True, "omega_r_equals_center": True}


def test_find_isomorphism_examples(q8, g211_pres):
    G, pres = q8
    res = find_isomorphism(pres, G, G1=G)
    assert res and satisfies_relators(G, res.images, pres)
    no = find_isomorphism(pres, cyclic_group(8))
    assert not no and "histogram" in no.reason
    assert "order mismatch" in find_isomorphism(pres, cyclic_group(4)).reason
    H, hp = g211_pres
    assert find_isomorphism(hp, H, G1=H)
