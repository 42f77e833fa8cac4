"""Nine-generator exponent-27 relation data and its pair-coverage check.

Each relation reads x_i^3 = [x_a, x_b][x_c, x_d][x_e, x_f][x_g, x_h].
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

Pair = tuple[int, int]


@dataclass(frozen=True)
class EngelPresentationData:
    relations: tuple[tuple[int, tuple[Pair, ...]], ...]  # (lhs index, commutator pairs)

    def to_text(self) -> str:
        lines = []
        for lhs, pairs in self.relations:
            rhs = "".join(f"[x{a},x{b}]" for a, b in pairs)
            lines.append(f"x{lhs}^3 = {rhs}")
        return "\n".join(lines)

    def replace_pair(self, rel: int, pos: int, pair: Pair) -> "EngelPresentationData":
        """Copy with one commutator factor swapped out (used for mutation tests)."""
        rels = [list(p) for _, p in self.relations]
        rels[rel][pos] = pair
        return EngelPresentationData(
            tuple((lhs, tuple(r)) for (lhs, _), r in zip(self.relations, rels))
        )


ENGEL_DATA = EngelPresentationData(
    (
        (1, ((2, 3), (4, 5), (6, 7), (8, 9))),
        (2, ((1, 3), (4, 6), (5, 8), (7, 9))),
        (3, ((1, 2), (4, 7), (5, 9), (6, 8))),
        (4, ((1, 5), (2, 6), (3, 9), (7, 8))),
        (5, ((1, 4), (2, 8), (3, 7), (6, 9))),
        (6, ((1, 7), (2, 9), (3, 5), (4, 8))),
        (7, ((1, 8), (4, 9), (3, 6), (2, 5))),
        (8, ((1, 9), (3, 4), (2, 7), (5, 6))),
        (9, ((1, 6), (3, 8), (2, 4), (5, 7))),
    )
)


@dataclass
class EngelCheck:
    ok: bool
    distinct_pairs: int
    missing: list[Pair]
    duplicated: list[Pair]
    self_referencing: list[tuple[int, Pair]]
    malformed: list[str]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "distinct_pairs": self.distinct_pairs,
            "missing": [list(p) for p in self.missing],
            "duplicated": [list(p) for p in self.duplicated],
            "self_referencing": [[i, list(p)] for i, p in self.self_referencing],
            "malformed": self.malformed,
        }


def validate_engel_relations(data: EngelPresentationData = ENGEL_DATA, n: int = 9) -> EngelCheck:
    """Every unordered pair {i, j} of 1..n occurs in exactly one factor, and never next to its own lhs."""
    malformed = []
    lhs_seen = [lhs for lhs, _ in data.relations]
    if sorted(lhs_seen) != list(range(1, n + 1)):
        malformed.append(f"left-hand indices {lhs_seen} are not 1..{n}")
    counts: Counter = Counter()
    self_ref = []
    for lhs, pairs in data.relations:
        if len(pairs) != 4:
            malformed.append(f"x{lhs}^3 has {len(pairs)} factors, expected 4")
        for a, b in pairs:
            if a == b or not (1 <= a <= n and 1 <= b <= n):
                malformed.append(f"bad commutator [x{a},x{b}] in relation for x{lhs}")
                continue
            key = (min(a, b), max(a, b))
            counts[key] += 1
            if lhs in key:
                self_ref.append((lhs, key))
    full = set(itertools.combinations(range(1, n + 1), 2))
    missing = sorted(full - set(counts))
    duplicated = sorted(p for p, c in counts.items() if c > 1)
    ok = not (missing or duplicated or self_ref or malformed) and sum(counts.values()) == len(full)
    return EngelCheck(ok, len(counts), missing, duplicated, self_ref, malformed)
