import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from egroups.coordgroup import GroupParams, make_group
from egroups.endo.homsearch import satisfies_relators
from egroups.fpgroup import (
    CosetLimitExceeded,
    PresentationSyntaxError,
    builtin_presentation,
    cyclic_group,
    direct_product,
    parse_presentation,
    parse_word,
    subgroup_table,
    todd_coxeter,
)
from egroups.fpgroup.catalog import KEYS

from oracles import table_homs


def quaternion_table():
    """Q8 from unit quaternions, written out by hand."""
    names = ["1", "i", "j", "k"]
    # unit products: (a, b) -> (sign, c)
    prod = {
        ("1", x): (1, x) for x in names
    } | {(x, "1"): (1, x) for x in names} | {
        ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
        ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
    }
    elems = [(s, n) for s in (1, -1) for n in names]
    idx = {e: n for n, e in enumerate(elems)}
    table = []
    for s1, a in elems:
        row = []
        for s2, b in elems:
            s, c = prod[a, b]
            row.append(idx[(s1 * s2 * s, c)])
        table.append(row)
    return table, (idx[(1, "i")], idx[(1, "j")])


# -- parser ------------------------------------------------------------------------------


def test_c2xc2_example():
    pres = parse_presentation("gens: x y; rel: [x,y] = 1; rel: x^2 = 1; rel: y^2 = 1")
    assert pres.generators == ("x", "y")
    assert len(pres.relators) == 3
    G = todd_coxeter(pres)
    assert G.order == 4 and G.is_abelian() and G.exponent() == 2


def test_commutator_expansion():
    w = parse_word("[x,y]", ["x", "y"])
    # x^-1 y^-1 x y as letters 2g / 2g+1
    assert w.letters({"x": 0, "y": 1}) == [1, 3, 0, 2]
    w = parse_word("[x y, z^-1]", ["x", "y", "z"])
    assert w.letters({"x": 0, "y": 1, "z": 2}) == [3, 1, 4, 0, 2, 5]


def test_chained_equalities_split_against_last_term():
    pres = parse_presentation("gens: x y\nrel: x^2 = y^2 = [x,y]\n")
    assert len(pres.relators) == 2
    direct = parse_presentation("gens: x y\nrel: x^2 [x,y]^-1\nrel: y^2 [x,y]^-1\n")
    assert pres.relators == direct.relators


def test_thm2e_ii_relator_count():
    # "x^4=y^4=[y,z]=1, x^2=z^2=[x,y], (xz)^2=y^2" splits into 3 + 2 + 1 relators
    pres = builtin_presentation("thm2e_ii")
    assert pres.generators == ("x", "y", "z")
    assert len(pres.relators) == 6


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("gens: x\nrel: x^0 = 1", 2, 8),
        ("gens: x\nrel: y^2 = 1", 2, 6),
        ("gens: x y\nrel: [x,y = 1", 2, None),
        ("rel: x = 1", 1, 1),
        ("gens: x x", 1, None),
        ("gens: x\nfoo: x", 2, 1),
        ("", 1, 1),
    ],
)
def test_syntax_errors_carry_position(text, line, col):
    with pytest.raises(PresentationSyntaxError) as err:
        parse_presentation(text)
    assert err.value.line == line
    if col is not None:
        assert err.value.col == col
    assert f"line {line}" in str(err.value)


def test_comments_and_whitespace():
    a = parse_presentation("gens: x   y # two\n\n rel:x^2=1 ; rel: y^-2 = 1  # done\n")
    b = parse_presentation("gens: x, y\nrel: x x = 1\nrel: y^-1 y^-1 = 1\n")
    assert a.relators == b.relators


def _random_word(rng: random.Random, gens, depth=0) -> str:
    parts = []
    for _ in range(rng.randint(1, 4)):
        kind = rng.random()
        if depth < 2 and kind < 0.2:
            parts.append(f"[{_random_word(rng, gens, depth + 1)},{_random_word(rng, gens, depth + 1)}]")
        elif depth < 2 and kind < 0.35:
            e = rng.choice([-3, -2, -1, 2, 3])
            parts.append(f"({_random_word(rng, gens, depth + 1)})^{e}")
        else:
            g = rng.choice(gens)
            e = rng.choice([1, 1, 2, -1, 5, -4])
            parts.append(g if e == 1 else f"{g}^{e}")
    return " ".join(parts)


def test_word_round_trip_corpus():
    gens = ["x", "y", "z"]
    rng = random.Random(2024)
    for _ in range(200):
        text = _random_word(rng, gens)
        w = parse_word(text, gens)
        again = parse_word(str(w), gens)
        assert again == w, text


@settings(max_examples=100)
@given(st.lists(st.tuples(st.sampled_from("xyz"), st.integers(-5, 5).filter(bool)), min_size=1, max_size=8))
def test_presentation_text_round_trip(runs):
    body = " ".join(f"{g}^{e}" for g, e in runs)
    pres = parse_presentation(f"gens: x y z\nrel: {body} = x\n")
    again = parse_presentation(pres.to_text())
    assert again.relators == pres.relators


# -- coset enumeration ---------------------------------------------------------------------


def test_q8_against_quaternion_oracle(q8):
    G, pres = q8
    assert G.order == 8
    qt, qgens = quaternion_table()
    ours = G.build_table().tolist()
    # every homomorphism into the hand-built table; bijective ones are isomorphisms
    homs = table_homs(ours, list(G.generators), qt)
    assert len(homs) == 28
    assert (qgens[0], qgens[1]) in homs
    bijective = [h for h in homs if len(_closure(qt, h)) == 8]
    assert len(bijective) == 24
    assert tuple(G.generators) in table_homs(qt, list(qgens), ours)


def _closure(t, gens):
    seen, todo = {0}, [0]
    while todo:
        x = todo.pop()
        for g in gens:
            y = t[x][g]
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


@pytest.mark.parametrize(
    "text, order",
    [
        ("gens: a b\nrel: a^3 = b^2 = (a b)^2 = 1", 6),
        ("gens: a b\nrel: a^2 = b^3 = (a b)^3 = 1", 12),
        ("gens: a b\nrel: a^2 = b^3 = (a b)^4 = 1", 24),
        ("gens: a b\nrel: a^2 = b^3 = (a b)^5 = 1", 60),
        ("gens: a\nrel: a^7 = 1", 7),
        ("gens: a b\nrel: a = 1\nrel: b = 1", 1),
    ],
)
def test_known_orders(text, order):
    G = todd_coxeter(parse_presentation(text))
    assert G.order == order
    assert G.is_latin_square()


def test_builtin_catalog_orders():
    assert todd_coxeter(builtin_presentation("q8xc2n", n=0)).order == 8
    assert todd_coxeter(builtin_presentation("thm2e_i")).order == 16
    G2 = todd_coxeter(builtin_presentation("thm2e_ii"))
    G3 = todd_coxeter(builtin_presentation("thm2e_iii"))
    assert G2.order == 32 and G3.order == 32
    # minimal generation is computed, not assumed
    assert G2.generator_rank() == 3 and G3.generator_rank() == 3
    with pytest.raises(KeyError):
        builtin_presentation("nope")
    with pytest.raises(ValueError):
        builtin_presentation("coord")
    assert set(KEYS) >= {"coord", "thm2e_ii", "thm2e_iii", "q8xc2n"}


def test_coord_presentation_311():
    pres = builtin_presentation("coord", params=GroupParams.of(3, 1, 1))
    G = todd_coxeter(pres)
    assert G.order == 729


def test_coord_presentation_211(g211_pres):
    G, pres = g211_pres
    assert G.order == 64
    assert "x^4" in pres.to_text()


def test_coset_limit_is_explicit():
    pres = parse_presentation("gens: a b\nrel: a^2 = b^3 = (a b)^5 = 1")
    with pytest.raises(CosetLimitExceeded):
        todd_coxeter(pres, max_cosets=20)
    # a free group never closes
    with pytest.raises(CosetLimitExceeded):
        todd_coxeter(parse_presentation("gens: a b\nrel: [a,b] = 1"), max_cosets=500)
    with pytest.raises(ValueError):
        todd_coxeter(pres, max_cosets=0)


def test_enumeration_is_deterministic():
    pres = builtin_presentation("thm2e_iii")
    a, b = todd_coxeter(pres), todd_coxeter(pres)
    assert np.array_equal(a.build_table(), b.build_table())
    assert a.generators == b.generators
    assert a.enumeration_stats == b.enumeration_stats


def test_table_group_invariants(g211_pres):
    G, _ = g211_pres
    t = G.build_table()
    n = G.order
    assert G.is_latin_square()
    assert np.array_equal(t[0], np.arange(n)) and np.array_equal(t[:, 0], np.arange(n))
    inv = G.inv(np.arange(n))
    assert np.all(t[np.arange(n), inv] == 0)
    assert G.closure(list(G.generators)).order == n
    assert G.validation["associativity"] == "exhaustive"


# -- relator evaluation and cross-engine checks ------------------------------------------------


def test_satisfies_relators_trivial(g211_pres):
    G, pres = g211_pres
    assert satisfies_relators(G, G.generators, pres)
    assert satisfies_relators(G, (0, 0, 0), pres)
    with pytest.raises(ValueError):
        satisfies_relators(G, (0, 0), pres)


@pytest.mark.parametrize(
    "p, r, t, T",
    [
        (3, 1, 1, None),
        (3, 1, 1, "0 1 0|0 0 1|1 0 0"),
        (3, 1, 1, "1 2 0|0 1 1|2 0 1"),
        (2, 2, 1, None),
        (2, 2, 1, "1 1 0|0 1 0|1 0 1"),
    ],
)
def test_cross_engine(p, r, t, T):
    params = GroupParams.of(p, r, t, T)
    C = make_group(params)
    pres = builtin_presentation("coord", params=params)
    assert satisfies_relators(C, C.generators, pres)
    assert todd_coxeter(pres).order == C.order
    # a wrong T is rejected by the relators
    other = builtin_presentation("coord", params=GroupParams.of(p, r, t, "1 0 0|0 1 0|0 0 %d" % (p**t - 1)))
    if other.relators != pres.relators:
        assert not satisfies_relators(C, C.generators, other)


def test_subgroup_table_and_products(g311):
    Z = g311.center()
    H = subgroup_table(g311, Z)
    assert H.order == 27 and H.is_abelian()
    C = direct_product(cyclic_group(4), cyclic_group(2))
    assert C.order == 8 and C.exponent() == 4 and C.generator_rank() == 2
    assert cyclic_group(1).order == 1
