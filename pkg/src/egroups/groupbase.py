"""Structural queries shared by every group backend.

A backend numbers its elements 0..n-1 with 0 the identity and supplies
vectorized ``mul``/``inv`` on integer arrays.  Everything else here
(center, derived subgroup, Omega and agemo subgroups, exponent, rank,
centralizers, closures) is computed by exhaustive scans over those arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import ConstructionError, NotASubgroupError, RefusedError

# Full-group scans (center, Omega, element orders) refuse above this order.
SCAN_CAP = 3**12
# A Cayley table is cached for groups up to this order.
TABLE_MAX = 2048
# Exhaustive pair scans (2-Engel) up to this many pairs; sampling above.
PAIR_SCAN_CAP = 2**22


def prime_factors(n: int) -> list[int]:
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def prime_power_base(n: int) -> int | None:
    """p if n = p^k with k >= 1, else None."""
    fs = prime_factors(n)
    return fs[0] if len(fs) == 1 else None


@dataclass(eq=False)
class SubgroupHandle:
    """Explicit subgroup: sorted element indices plus witness generators."""

    group: "FiniteGroup" = field(repr=False)
    elements: np.ndarray
    generators: tuple[int, ...] | None = None

    def __post_init__(self):
        self.elements = np.unique(np.asarray(self.elements, dtype=np.int64))

    @property
    def order(self) -> int:
        return int(self.elements.size)

    def __len__(self) -> int:
        return self.order

    def __contains__(self, x) -> bool:
        i = np.searchsorted(self.elements, x)
        return bool(i < self.elements.size and self.elements[i] == x)

    def contains(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        i = np.searchsorted(self.elements, xs)
        i = np.minimum(i, self.elements.size - 1)
        return self.elements[i] == xs

    def __eq__(self, other) -> bool:
        if not isinstance(other, SubgroupHandle):
            return NotImplemented
        return self.group is other.group and np.array_equal(self.elements, other.elements)

    def __hash__(self):
        return hash((id(self.group), self.elements.tobytes()))

    def issubset(self, other: "SubgroupHandle") -> bool:
        return bool(np.all(other.contains(self.elements)))

    def witness_generators(self) -> tuple[int, ...]:
        if self.generators is None:
            self.generators = self.group.minimal_generating_subset(self.elements)
        return self.generators

    def is_closed(self) -> bool:
        x = self.elements
        if x.size * x.size <= PAIR_SCAN_CAP:
            prod = self.group.mul(x[:, None], x[None, :])
        else:
            gens = np.array(self.witness_generators(), dtype=np.int64)
            prod = self.group.mul(x[:, None], gens[None, :]) if gens.size else x
        return bool(np.all(self.contains(prod.ravel())))

    def __repr__(self):
        return f"SubgroupHandle(order={self.order})"


class FiniteGroup:
    """Base class; subclasses set ``order``, ``generators`` and implement ``_mul``/``_inv``."""

    order: int
    generators: tuple[int, ...]
    generator_names: tuple[str, ...]
    identity: int = 0

    _table: np.ndarray | None = None
    _inv_table: np.ndarray | None = None

    # -- element arithmetic -------------------------------------------------

    def _mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _inv(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def mul(self, x, y):
        if self._table is not None:
            if np.ndim(x) or np.ndim(y):
                # flat take is markedly faster than 2-d fancy indexing
                out = np.take(self._table.ravel(), np.asarray(x) * self.order + np.asarray(y))
            else:
                out = self._table[x, y]
        else:
            out = self._mul(np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64))
        return out if np.ndim(out) else int(out)

    def inv(self, x):
        if self._inv_table is not None:
            out = self._inv_table[x]
        else:
            out = self._inv(np.asarray(x, dtype=np.int64))
        return out if np.ndim(out) else int(out)

    def mul_many(self, *xs):
        acc = xs[0]
        for x in xs[1:]:
            acc = self.mul(acc, x)
        return acc

    def power(self, x, n):
        """x^n by square-and-multiply; both arguments may be arrays."""
        x = np.asarray(x, dtype=np.int64)
        n = np.asarray(n, dtype=np.int64)
        x, n = np.broadcast_arrays(x, n)
        base = np.where(n < 0, self.inv(x), x)
        e = np.abs(n)
        result = np.zeros_like(x)
        while np.any(e):
            odd = (e & 1).astype(bool)
            if np.any(odd):
                result = np.where(odd, self.mul(result, base), result)
            e = e >> 1
            if np.any(e):
                base = self.mul(base, base)
        return result if result.ndim else int(result)

    def commutator(self, x, y):
        """[x, y] = x^-1 y^-1 x y."""
        return self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))

    def conjugate(self, x, g):
        """x^g = g^-1 x g."""
        return self.mul(self.mul(self.inv(g), x), g)

    def format_element(self, x: int) -> str:
        return f"#{int(x)}"

    # -- tables -------------------------------------------------------------

    def build_table(self) -> np.ndarray:
        if self._table is None:
            if self.order > TABLE_MAX:
                raise RefusedError(f"Cayley table for order {self.order} exceeds cap {TABLE_MAX}", self.order**2)
            e = np.arange(self.order, dtype=np.int64)
            table = np.ascontiguousarray(self._mul(e[:, None], e[None, :]))
            self._inv_table = self._inv(e)
            self._table = table
        return self._table

    def elements(self) -> np.ndarray:
        self._require_scan()
        return np.arange(self.order, dtype=np.int64)

    def _require_scan(self) -> None:
        if self.order > SCAN_CAP:
            raise RefusedError(
                f"exhaustive scan over {self.order} elements exceeds cap {SCAN_CAP}", estimate=self.order
            )

    # -- closures -----------------------------------------------------------

    def _bfs(self, seeds: Sequence[int]):
        """Right-multiplication BFS from the identity.

        Returns (order_visited, parent, gen_pos); ``gen_pos[x]`` indexes ``seeds``.
        """
        seeds = np.array(list(dict.fromkeys(int(s) for s in seeds)), dtype=np.int64)
        seen = np.zeros(self.order, dtype=bool)
        seen[self.identity] = True
        visited = [np.array([self.identity], dtype=np.int64)]
        parents = [np.array([-1], dtype=np.int64)]
        gpos = [np.array([-1], dtype=np.int64)]
        frontier = visited[0]
        while frontier.size and seeds.size:
            prod = self.mul(frontier[:, None], seeds[None, :])
            prod = np.asarray(prod, dtype=np.int64).ravel()
            par = np.repeat(frontier, seeds.size)
            gp = np.tile(np.arange(seeds.size), frontier.size)
            new_mask = ~seen[prod]
            prod, par, gp = prod[new_mask], par[new_mask], gp[new_mask]
            prod, first = np.unique(prod, return_index=True)
            par, gp = par[first], gp[first]
            seen[prod] = True
            visited.append(prod)
            parents.append(par)
            gpos.append(gp)
            frontier = prod
        return np.concatenate(visited), np.concatenate(parents), np.concatenate(gpos), seeds

    def closure(self, seeds: Iterable[int]) -> SubgroupHandle:
        seeds = [int(s) for s in np.asarray(list(seeds), dtype=np.int64).ravel()]
        elems, _, _, uniq = self._bfs(seeds)
        return SubgroupHandle(self, elems, tuple(int(s) for s in uniq))

    subgroup_closure = closure

    def minimal_generating_subset(self, elements) -> tuple[int, ...]:
        """Greedy generating set drawn from ``elements`` (smallest index first)."""
        elements = np.unique(np.asarray(elements, dtype=np.int64))
        gens: list[int] = []
        current = SubgroupHandle(self, np.array([self.identity]), ())
        while current.order < elements.size:
            missing = elements[~current.contains(elements)]
            gens.append(int(missing[0]))
            current = self.closure(gens)
        return tuple(gens)

    def normal_closure(self, seeds: Iterable[int]) -> SubgroupHandle:
        H = self.closure(seeds)
        gens = np.array(self.generators, dtype=np.int64)
        while True:
            hg = np.array(H.witness_generators(), dtype=np.int64)
            if hg.size == 0:
                return H
            conj = np.asarray(self.conjugate(hg[:, None], gens[None, :])).ravel()
            outside = conj[~H.contains(conj)]
            if outside.size == 0:
                return H
            H = self.closure(list(hg) + list(outside))

    @cached_property
    def _word_tree(self):
        elems, parent, gpos, seeds = self._bfs(self.generators)
        if elems.size != self.order:
            raise ConstructionError(
                f"designated generators span {elems.size} of {self.order} elements"
            )
        par = np.full(self.order, -1, dtype=np.int64)
        gen = np.full(self.order, -1, dtype=np.int64)
        par[elems] = parent
        # map seed position back to the generator position (duplicates collapse)
        gen_of_seed = np.array([self.generators.index(int(s)) for s in seeds], dtype=np.int64)
        gen[elems[1:]] = gen_of_seed[gpos[1:]]
        return elems, par, gen

    def evaluate_images(self, images: np.ndarray, target: "FiniteGroup | None" = None) -> np.ndarray:
        """Extend generator images to every element along the BFS word tree.

        ``images`` has shape (batch, ngens) of elements of ``target`` (default self);
        returns (batch, order).  Only meaningful when the images define a homomorphism.
        """
        target = target or self
        images = np.atleast_2d(np.asarray(images, dtype=np.int64))
        order, par, gen = self._word_tree
        out = np.empty((images.shape[0], self.order), dtype=np.int64)
        out[:, order[0]] = target.identity
        # process layer by layer: parents precede children in BFS order
        for x in order[1:]:
            out[:, x] = target.mul(out[:, par[x]], images[:, gen[x]])
        return out

    def word_of(self, x: int) -> list[int]:
        """Positive word in generator positions reaching x from the identity."""
        _, par, gen = self._word_tree
        word = []
        while x != self.identity:
            word.append(int(gen[x]))
            x = int(par[x])
        return word[::-1]

    # -- p-group data -------------------------------------------------------

    @cached_property
    def prime(self) -> int:
        p = prime_power_base(self.order)
        if p is None:
            raise ValueError(f"group of order {self.order} is not a p-group")
        return p

    def exponent_bound(self) -> int:
        return self.order

    def element_orders(self, xs=None) -> np.ndarray:
        xs = self.elements() if xs is None else np.asarray(xs, dtype=np.int64)
        bound = self.exponent_bound()
        orders = np.full(xs.shape, bound, dtype=np.int64)
        for q in prime_factors(bound):
            while True:
                can = orders % q == 0
                if not np.any(can):
                    break
                trial = np.where(can, orders // q, orders)
                drop = can & (np.asarray(self.power(xs, trial)) == self.identity)
                if not np.any(drop):
                    break
                orders = np.where(drop, trial, orders)
        return orders

    def element_order(self, x: int) -> int:
        return int(self.element_orders(np.array([x]))[0])

    def exponent(self) -> int:
        return int(np.lcm.reduce(self.element_orders()))

    def order_histogram(self) -> dict[int, int]:
        vals, counts = np.unique(self.element_orders(), return_counts=True)
        return {int(v): int(c) for v, c in zip(vals, counts)}

    def quotient_exponent(self, N: SubgroupHandle) -> int:
        """Exponent of G/N (N normal), as the lcm of coset orders."""
        xs = self.elements()
        bound = self.exponent_bound()
        orders = np.full(xs.shape, bound, dtype=np.int64)
        for q in prime_factors(bound):
            while True:
                can = orders % q == 0
                trial = np.where(can, orders // q, orders)
                drop = can & N.contains(np.asarray(self.power(xs, trial)))
                if not np.any(drop):
                    break
                orders = np.where(drop, trial, orders)
        return int(np.lcm.reduce(orders))

    # -- structural contract ------------------------------------------------

    def commutes_with(self, xs, g) -> np.ndarray:
        return np.asarray(self.mul(xs, g)) == np.asarray(self.mul(g, xs))

    def center(self) -> SubgroupHandle:
        xs = self.elements()
        mask = np.ones(xs.size, dtype=bool)
        for g in self.generators:
            mask &= self.commutes_with(xs, g)
        return SubgroupHandle(self, xs[mask])

    def centralizer(self, g: int) -> SubgroupHandle:
        xs = self.elements()
        return SubgroupHandle(self, xs[self.commutes_with(xs, g)])

    def derived_subgroup(self) -> SubgroupHandle:
        gens = self.generators
        comms = [self.commutator(gens[i], gens[j]) for i in range(len(gens)) for j in range(i + 1, len(gens))]
        return self.normal_closure(comms)

    def power_set(self, n: int) -> np.ndarray:
        """Distinct p^n-th powers."""
        return np.unique(np.asarray(self.power(self.elements(), self.prime**n)))

    def power_subgroup(self, n: int) -> SubgroupHandle:
        if n < 0:
            raise ValueError("n must be non-negative")
        return self.closure(self.power_set(n))

    def omega_set(self, n: int) -> np.ndarray:
        xs = self.elements()
        return xs[np.asarray(self.power(xs, self.prime**n)) == self.identity]

    def omega_subgroup(self, n: int) -> SubgroupHandle:
        if n < 0:
            raise ValueError("n must be non-negative")
        H = SubgroupHandle(self, self.omega_set(n))
        if not H.is_closed():
            raise NotASubgroupError(f"Omega_{n} is not closed under multiplication")
        return H

    def frattini_subgroup(self) -> SubgroupHandle:
        return self.closure(np.concatenate([self.power_set(1), self.derived_subgroup().elements]))

    def generator_rank(self) -> int:
        idx = self.order // self.frattini_subgroup().order
        d = 0
        while idx > 1:
            idx //= self.prime
            d += 1
        return d

    def is_abelian(self) -> bool:
        g = self.generators
        return all(self.commutator(g[i], g[j]) == self.identity for i in range(len(g)) for j in range(i + 1, len(g)))

    def is_class_le2(self) -> bool:
        Z = self.center()
        g = self.generators
        return all(self.commutator(g[i], g[j]) in Z for i in range(len(g)) for j in range(i + 1, len(g)))

    def is_2engel(self, *, seed: int | None = None, samples: int = 10**5) -> bool:
        """[[x, y], y] = 1 for all pairs; sampled (seed required) above the pair cap."""
        n = self.order
        if n * n <= PAIR_SCAN_CAP and self._table is not None:
            t, inv = self._table, self._inv_table
            # comm[x, y] = (x^-1 y^-1)(x y), then [[x, y], y] = comm[comm[x, y], y]
            comm = np.take(t.ravel(), np.take(t[inv], inv, axis=1) * n + t)
            y = np.arange(n, dtype=np.int64)[None, :]
            return bool(np.all(np.take(comm.ravel(), comm * n + y) == self.identity))
        if n * n <= PAIR_SCAN_CAP:
            x = np.arange(n, dtype=np.int64)[:, None]
            y = np.arange(n, dtype=np.int64)[None, :]
        else:
            if seed is None:
                raise ValueError("sampled 2-Engel check needs a seed")
            rng = np.random.default_rng(seed)
            x = rng.integers(0, n, samples)
            y = rng.integers(0, n, samples)
        c = self.commutator(x, y)
        return bool(np.all(np.asarray(self.commutator(c, y)) == self.identity))

    # -- axiom checks -------------------------------------------------------

    def check_axioms(self, *, seed: int = 0, samples: int = 10**6, exhaustive_assoc: bool = False) -> dict:
        """Identity and inverse laws exhaustively, associativity per size.

        Associativity is certified exhaustively by Light's test on the
        generators when a Cayley table is available (middle-associativity of
        a generating set implies it for every triple), optionally by a full
        triple scan, and otherwise by seeded random triples.  Raises
        ConstructionError with a counterexample on failure.
        """
        stats: dict = {}
        n = self.order
        if n <= SCAN_CAP:
            xs = np.arange(n, dtype=np.int64)
            bad = np.nonzero((np.asarray(self.mul(xs, 0)) != xs) | (np.asarray(self.mul(0, xs)) != xs))[0]
            if bad.size:
                raise ConstructionError("identity law fails", (int(bad[0]),))
            ixs = np.asarray(self.inv(xs))
            bad = np.nonzero((np.asarray(self.mul(xs, ixs)) != 0) | (np.asarray(self.mul(ixs, xs)) != 0))[0]
            if bad.size:
                raise ConstructionError("inverse law fails", (int(bad[0]),))
            stats["identity_inverse"] = "exhaustive"
        if self._table is not None:
            t = self._table
            for g in self.generators:
                lhs = t[t[:, g]]  # (x g) y
                rhs = np.take(t, t[g, :], axis=1)  # x (g y)
                if not np.array_equal(lhs, rhs):
                    bad = np.argwhere(lhs != rhs)
                    x, y = bad[0]
                    raise ConstructionError("associativity fails", (int(x), int(g), int(y)))
            stats["associativity"] = "light-test"
            if exhaustive_assoc:
                self.check_associativity_exhaustive()
                stats["associativity"] = "exhaustive"
        else:
            rng = np.random.default_rng(seed)
            done = 0
            while done < samples:
                k = min(2**18, samples - done)
                x, y, z = (rng.integers(0, n, k) for _ in range(3))
                lhs = np.asarray(self.mul(self.mul(x, y), z))
                rhs = np.asarray(self.mul(x, self.mul(y, z)))
                bad = np.nonzero(lhs != rhs)[0]
                if bad.size:
                    i = bad[0]
                    raise ConstructionError("associativity fails", (int(x[i]), int(y[i]), int(z[i])))
                done += k
            stats["associativity"] = f"sampled:{samples}:seed={seed}"
        return stats

    def check_associativity_exhaustive(self) -> int:
        """Literal scan over all |G|^3 triples; returns the number of triples checked."""
        t = self.build_table()
        n = self.order
        for x in range(n):
            lhs = t[t[x]][:, :]  # (x y) z for all y, z
            rhs = t[x][t]  # x (y z)
            if not np.array_equal(lhs, rhs):
                y, z = np.argwhere(lhs != rhs)[0]
                raise ConstructionError("associativity fails", (x, int(y), int(z)))
        return n**3

    def is_latin_square(self) -> bool:
        t = self.build_table()
        n = self.order
        ref = np.arange(n)
        return bool(np.all(np.sort(t, axis=1) == ref) and np.all(np.sort(t, axis=0) == ref[:, None]))
