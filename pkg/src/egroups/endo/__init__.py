from .egroup import EGroupResult, EWitness, check_e_group, script_e_predicate
from .endos import (
    EndoClass,
    EndoSpec,
    apply,
    classify_endo,
    compose,
    count_endos,
    enumerate_endos,
    extract_A,
    identity_endo,
    is_automorphism,
    trivial_endo,
)
from .homsearch import IsoResult, brute_force_endo_array, find_isomorphism, satisfies_relators, search_homs


def brute_force_endos(G, pres=None, *, budget=None):
    """Stream of image-form EndoSpecs found by definitional search."""
    from .endos import from_images
    from .homsearch import DEFAULT_BUDGET, brute_force_endo_blocks

    for block in brute_force_endo_blocks(G, pres, budget=budget or DEFAULT_BUDGET):
        for row in block:
            yield from_images(G, row)


__all__ = [
    "EGroupResult",
    "EWitness",
    "EndoClass",
    "EndoSpec",
    "IsoResult",
    "apply",
    "brute_force_endo_array",
    "brute_force_endos",
    "check_e_group",
    "classify_endo",
    "compose",
    "count_endos",
    "enumerate_endos",
    "extract_A",
    "find_isomorphism",
    "identity_endo",
    "is_automorphism",
    "satisfies_relators",
    "script_e_predicate",
    "search_homs",
    "trivial_endo",
]
