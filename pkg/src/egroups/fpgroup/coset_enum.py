"""HLT coset enumeration over the trivial subgroup.

Strategy (fixed, for bit-reproducible tables): cosets are processed in
definition order; at each live coset every relator is scanned and filled,
then any still-undefined columns are defined.  No lookahead.  Coincidences
are merged immediately with a union-find (smaller label survives).  The
final table is standardized by breadth-first renumbering from coset 0.
"""

from __future__ import annotations

import numpy as np

from ..errors import RefusedError
from .tablegroup import TableGroup
from .words import Presentation

DEFAULT_MAX_COSETS = 10**6


class CosetLimitExceeded(RefusedError):
    """The enumeration did not close within ``max_cosets``; the group may be larger or infinite."""


class _Enumerator:
    def __init__(self, pres: Presentation, max_cosets: int):
        self.ncols = 2 * pres.ngens
        self.relators = [list(r) for r in pres.relators]
        self.max_cosets = max_cosets
        self.table: list[list[int]] = [[-1] * self.ncols]
        self.parent = [0]
        self.defined = 1

    def rep(self, c: int) -> int:
        p = self.parent
        root = c
        while p[root] != root:
            root = p[root]
        while p[c] != root:
            p[c], c = root, p[c]
        return root

    def define(self, c: int, x: int) -> None:
        if len(self.table) >= self.max_cosets:
            raise CosetLimitExceeded(
                f"coset enumeration did not close within {self.max_cosets} cosets", estimate=self.max_cosets
            )
        d = len(self.table)
        self.table.append([-1] * self.ncols)
        self.parent.append(d)
        self.table[c][x] = d
        self.table[d][x ^ 1] = c
        self.defined += 1

    def merge(self, k: int, l: int, queue: list[int]) -> None:
        a, b = self.rep(k), self.rep(l)
        if a != b:
            lo, hi = min(a, b), max(a, b)
            self.parent[hi] = lo
            queue.append(hi)

    def coincidence(self, a: int, b: int) -> None:
        queue: list[int] = []
        self.merge(a, b, queue)
        table = self.table
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            row = table[g]
            for x in range(self.ncols):
                d = row[x]
                if d < 0:
                    continue
                table[d][x ^ 1] = -1
                mu, nu = self.rep(g), self.rep(d)
                if table[mu][x] >= 0:
                    self.merge(nu, table[mu][x], queue)
                elif table[nu][x ^ 1] >= 0:
                    self.merge(mu, table[nu][x ^ 1], queue)
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu

    def scan_and_fill(self, a: int, w: list[int]) -> None:
        table = self.table
        n = len(w)
        f, b = a, a
        i, j = 0, n - 1
        while True:
            while i <= j and table[f][w[i]] >= 0:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != a:
                    self.coincidence(f, a)
                return
            while j >= i and table[b][w[j] ^ 1] >= 0:
                b = table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return
            self.define(f, w[i])

    def run(self) -> None:
        a = 0
        while a < len(self.table):
            if self.parent[a] == a:
                for w in self.relators:
                    self.scan_and_fill(a, w)
                    if self.parent[a] != a:
                        break
                if self.parent[a] == a:
                    for x in range(self.ncols):
                        if self.table[a][x] < 0:
                            self.define(a, x)
            a += 1

    def standardized_actions(self) -> np.ndarray:
        """Generator actions (ngens x n) on live cosets renumbered breadth-first."""
        table, parent = self.table, self.parent
        live = [c for c in range(len(table)) if parent[c] == c]
        new = {0: 0}
        order = [0]
        k = 0
        while k < len(order):
            c = order[k]
            k += 1
            for x in range(self.ncols):
                d = table[c][x]
                if d < 0 or parent[d] != d:
                    raise AssertionError("incomplete coset table after enumeration")
                if d not in new:
                    new[d] = len(order)
                    order.append(d)
        if len(order) != len(live):
            raise AssertionError("coset table not connected")
        n = len(order)
        acts = np.empty((self.ncols // 2, n), dtype=np.int64)
        for c in order:
            for g in range(self.ncols // 2):
                acts[g, new[c]] = new[table[c][2 * g]]
        return acts


def coset_actions(pres: Presentation, max_cosets: int = DEFAULT_MAX_COSETS) -> tuple[np.ndarray, dict]:
    en = _Enumerator(pres, max_cosets)
    en.run()
    acts = en.standardized_actions()
    return acts, {"cosets_defined": en.defined, "order": acts.shape[1]}


def table_from_actions(acts: np.ndarray) -> np.ndarray:
    """Regular-representation multiplication table from right actions of the generators."""
    ngens, n = acts.shape
    table = np.full((n, n), -1, dtype=np.int64)
    table[:, 0] = np.arange(n)
    # BFS from coset 0 along generator columns: element b = parent * g
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    frontier = [0]
    while frontier:
        nxt = []
        for c in frontier:
            for g in range(ngens):
                d = int(acts[g, c])
                if not seen[d]:
                    seen[d] = True
                    table[:, d] = acts[g][table[:, c]]
                    nxt.append(d)
        frontier = nxt
    if not seen.all():
        raise AssertionError("generators do not reach every coset")
    return table


def todd_coxeter(
    pres: Presentation,
    max_cosets: int = DEFAULT_MAX_COSETS,
    *,
    validate: bool = True,
    seed: int = 0,
) -> TableGroup:
    if max_cosets < 1:
        raise ValueError("max_cosets must be positive")
    acts, stats = coset_actions(pres, max_cosets)
    n = acts.shape[1]
    table = table_from_actions(acts)
    gens = [int(acts[g, 0]) for g in range(pres.ngens)]
    G = TableGroup(table, gens, pres.generators, name=pres.name, validate=validate, seed=seed)
    G.presentation = pres
    G.enumeration_stats = stats
    assert G.order == n
    return G
