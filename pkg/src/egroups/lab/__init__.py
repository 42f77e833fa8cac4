from .campaigns import (
    CampaignConfig,
    check_cyclic_family,
    check_lemma22,
    count_isomorphism_classes,
    reverify_witness,
    sweep_classification,
    sweep_egroup_falsification,
)
from .engel import ENGEL_DATA, EngelPresentationData, validate_engel_relations
from .report import SCHEMA, exit_code

__all__ = [
    "CampaignConfig",
    "ENGEL_DATA",
    "EngelPresentationData",
    "SCHEMA",
    "check_cyclic_family",
    "check_lemma22",
    "count_isomorphism_classes",
    "exit_code",
    "reverify_witness",
    "sweep_classification",
    "sweep_egroup_falsification",
    "validate_engel_relations",
]
