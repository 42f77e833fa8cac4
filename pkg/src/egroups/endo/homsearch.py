"""Definitional homomorphism search: candidate generator images checked against relators."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from ..errors import RefusedError
from ..fpgroup.coset_enum import todd_coxeter
from ..fpgroup.words import Presentation, letters_to_runs
from ..groupbase import FiniteGroup

DEFAULT_BUDGET = 2**28


def relators_hold(G: FiniteGroup, images: np.ndarray, pres: Presentation, which: Sequence[int] | None = None) -> np.ndarray:
    """Mask over a batch of image tuples (shape (B, ngens)) of those killing every relator."""
    images = np.atleast_2d(np.asarray(images, dtype=np.int64))
    ok = np.ones(images.shape[0], dtype=bool)
    powers: dict[tuple[int, int], np.ndarray] = {}
    rels = pres.relators if which is None else [pres.relators[i] for i in which]
    for rel in rels:
        acc = np.zeros(images.shape[0], dtype=np.int64)
        for g, e in letters_to_runs(rel):
            key = (g, e)
            if key not in powers:
                powers[key] = np.asarray(G.power(images[:, g], e))
            acc = np.asarray(G.mul(acc, powers[key]))
        ok &= acc == G.identity
    return ok


def satisfies_relators(G: FiniteGroup, images: Sequence[int], pres: Presentation) -> bool:
    if len(images) != pres.ngens:
        raise ValueError(f"need {pres.ngens} images, got {len(images)}")
    return bool(relators_hold(G, np.array([images]), pres)[0])


def _assignment_order(pres: Presentation) -> tuple[int, ...]:
    """Generator order that lets relators be checked as early as possible."""
    k = pres.ngens
    supports = [frozenset(x >> 1 for x in r) for r in pres.relators]
    if k > 6:
        return tuple(range(k))
    best, best_key = tuple(range(k)), None
    for perm in itertools.permutations(range(k)):
        key = tuple(sum(1 for s in supports if s <= set(perm[: i + 1])) for i in range(k))
        if best_key is None or key > best_key:
            best, best_key = perm, key
    return best


@dataclass
class SearchStats:
    candidates: int = 0
    found: int = 0


def search_homs(
    pres: Presentation,
    target: FiniteGroup,
    *,
    source_orders: Sequence[int] | None = None,
    exact_orders: bool = False,
    budget: int = DEFAULT_BUDGET,
    stats: SearchStats | None = None,
) -> Iterator[np.ndarray]:
    """Blocks of generator-image tuples (declared generator order) satisfying every relator.

    Generators are assigned in a fixed order chosen so relators are tested as
    soon as their generators are assigned; the first generator is looped in
    Python (one block per candidate image, increasing index), the rest are
    expanded as vectorized Cartesian products.  Candidate images must have
    order dividing (or, with ``exact_orders``, equal to) ``source_orders``.
    Raises RefusedError once the number of candidate tuples examined would
    exceed ``budget``.
    """
    stats = stats if stats is not None else SearchStats()
    k = pres.ngens
    elems = target.elements()
    torders = target.element_orders()
    allowed = []
    for g in range(k):
        if source_orders is None:
            allowed.append(elems)
        elif exact_orders:
            allowed.append(elems[torders == source_orders[g]])
        else:
            allowed.append(elems[source_orders[g] % torders == 0])
    if k == 0:
        yield np.zeros((1, 0), dtype=np.int64)
        return
    perm = _assignment_order(pres)
    supports = [frozenset(x >> 1 for x in r) for r in pres.relators]
    new_at = []
    for i in range(k):
        assigned = set(perm[: i + 1])
        before = set(perm[:i])
        new_at.append([j for j, s in enumerate(supports) if s <= assigned and not s <= before])
    inverse_perm = np.argsort(perm)

    def check(partial: np.ndarray, level: int) -> np.ndarray:
        if not new_at[level]:
            return partial
        full = np.zeros((partial.shape[0], k), dtype=np.int64)
        full[:, list(perm[: level + 1])] = partial
        return partial[relators_hold(target, full, pres, new_at[level])]

    for x0 in allowed[perm[0]]:
        stats.candidates += 1
        partial = check(np.array([[x0]], dtype=np.int64), 0)
        for level in range(1, k):
            if partial.shape[0] == 0:
                break
            opts = allowed[perm[level]]
            size = partial.shape[0] * opts.size
            if stats.candidates + size > budget:
                raise RefusedError(
                    f"homomorphism search exceeded budget {budget} candidate tuples",
                    estimate=stats.candidates + size,
                )
            stats.candidates += size
            partial = np.concatenate(
                [np.repeat(partial, opts.size, axis=0), np.tile(opts, partial.shape[0])[:, None]], axis=1
            )
            partial = check(partial, level)
        if partial.shape[0]:
            block = partial[:, inverse_perm]
            stats.found += block.shape[0]
            yield block


def brute_force_endo_blocks(G: FiniteGroup, pres: Presentation | None = None, *, budget: int = DEFAULT_BUDGET, stats=None):
    pres = pres or getattr(G, "presentation", None)
    if pres is None:
        raise ValueError("brute-force search needs a presentation of the group")
    gen_orders = [G.element_order(g) for g in G.generators]
    return search_homs(pres, G, source_orders=gen_orders, budget=budget, stats=stats)


def brute_force_endo_array(G: FiniteGroup, pres: Presentation | None = None, *, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    blocks = list(brute_force_endo_blocks(G, pres, budget=budget))
    if not blocks:
        return np.zeros((0, len(G.generators)), dtype=np.int64)
    return np.concatenate(blocks)


@dataclass
class IsoResult:
    images: tuple[int, ...] | None
    reason: str

    def __bool__(self):
        return self.images is not None


def find_isomorphism(
    pres: Presentation,
    G2: FiniteGroup,
    *,
    G1: FiniteGroup | None = None,
    budget: int = DEFAULT_BUDGET,
) -> IsoResult:
    """Generating tuple of G2 satisfying ``pres`` (the presentation of G1), or a reason for none."""
    if G1 is None:
        G1 = todd_coxeter(pres)
    if G1.order != G2.order:
        return IsoResult(None, f"order mismatch: {G1.order} vs {G2.order}")
    if G1.order_histogram() != G2.order_histogram():
        return IsoResult(None, "element-order histograms differ")
    gen_orders = [G1.element_order(g) for g in G1.generators]
    for block in search_homs(pres, G2, source_orders=gen_orders, exact_orders=True, budget=budget):
        for row in block:
            if G2.closure(row).order == G2.order:
                return IsoResult(tuple(int(v) for v in row), "isomorphism found")
    return IsoResult(None, "no generating tuple satisfies the relators")
