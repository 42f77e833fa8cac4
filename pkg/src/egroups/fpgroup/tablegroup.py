"""Groups given by an explicit multiplication table."""

from __future__ import annotations

import numpy as np

from ..errors import ConstructionError
from ..groupbase import FiniteGroup, SubgroupHandle

FULL_ASSOC_MAX = 1024


class TableGroup(FiniteGroup):
    """Element 0 is the identity; ``table[x, y]`` is the product xy."""

    def __init__(self, table, generators, generator_names=None, name: str = "", validate: bool = True, seed: int = 0):
        table = np.ascontiguousarray(table, dtype=np.int64)
        n = table.shape[0]
        if table.shape != (n, n):
            raise ValueError("multiplication table must be square")
        self.order = n
        self.name = name
        self.generators = tuple(int(g) for g in generators)
        self.generator_names = tuple(generator_names or (f"g{i}" for i in range(len(self.generators))))
        self._table = table
        inv = np.full(n, -1, dtype=np.int64)
        rows, cols = np.nonzero(table == 0)
        inv[rows] = cols
        self._inv_table = inv
        if validate:
            self.validation = self.validate(seed=seed)

    def validate(self, *, seed: int = 0, samples: int = 10**5) -> dict:
        n = self.order
        if not self.is_latin_square():
            raise ConstructionError("multiplication table is not a Latin square")
        e = np.arange(n)
        if not (np.array_equal(self._table[0], e) and np.array_equal(self._table[:, 0], e)):
            raise ConstructionError("element 0 is not a two-sided identity")
        if np.any(self._inv_table < 0) or np.any(self._table[self._inv_table, e] != 0):
            raise ConstructionError("inverse table inconsistent")
        if n <= FULL_ASSOC_MAX:
            self.check_associativity_exhaustive()
            assoc = "exhaustive"
        else:
            rng = np.random.default_rng(seed)
            x, y, z = (rng.integers(0, n, samples) for _ in range(3))
            t = self._table
            bad = np.nonzero(t[t[x, y], z] != t[x, t[y, z]])[0]
            if bad.size:
                i = bad[0]
                raise ConstructionError("associativity fails", (int(x[i]), int(y[i]), int(z[i])))
            assoc = f"sampled:{samples}:seed={seed}"
        # generation is checked by building the word tree
        self._word_tree
        return {"latin_square": True, "identity_inverse": "exhaustive", "associativity": assoc}

    def _mul(self, x, y):
        return self._table[x, y]

    def _inv(self, x):
        return self._inv_table[x]

    def format_element(self, x: int) -> str:
        from .words import format_letters

        return format_letters([2 * g for g in self.word_of(int(x))], self.generator_names)

    def parse_element(self, text: str) -> int:
        from .words import parse_word

        letters = parse_word(text, self.generator_names).letters({n: i for i, n in enumerate(self.generator_names)})
        acc = self.identity
        for x in letters:
            g = self.generators[x >> 1]
            acc = self.mul(acc, self.inv(g) if x & 1 else g)
        return int(acc)

    def __repr__(self):
        return f"TableGroup({self.name or 'unnamed'}, order={self.order})"


def subgroup_table(G: FiniteGroup, H: SubgroupHandle, name: str = "") -> TableGroup:
    """Re-index the subgroup H as a standalone table group (identity first)."""
    els = H.elements  # sorted, identity 0 first
    if els[0] != G.identity:
        raise ValueError("subgroup must contain the identity")
    prod = np.asarray(G.mul(els[:, None], els[None, :]))
    table = np.searchsorted(els, prod)
    gens = [int(np.searchsorted(els, g)) for g in H.witness_generators()]
    t = TableGroup(table, gens, name=name, validate=False)
    t.parent_elements = els
    return t


def cyclic_group(n: int, name: str | None = None) -> TableGroup:
    e = np.arange(n)
    return TableGroup((e[:, None] + e[None, :]) % n, [1 % n] if n > 1 else [], ["x"] if n > 1 else [], name or f"C{n}")


def direct_product(G: TableGroup, H: TableGroup, name: str = "") -> TableGroup:
    """G x H with element (g, h) at index g * |H| + h."""
    m = H.order
    idx = np.arange(G.order * m)
    g, h = idx // m, idx % m
    table = G._table[g[:, None], g[None, :]] * m + H._table[h[:, None], h[None, :]]
    gens = [x * m for x in G.generators] + list(H.generators)
    names = [f"{n}" for n in G.generator_names] + [f"{n}'" for n in H.generator_names]
    return TableGroup(table, gens, names, name or f"{G.name}x{H.name}")
