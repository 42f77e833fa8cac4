from .catalog import builtin_presentation
from .coset_enum import CosetLimitExceeded, todd_coxeter
from .tablegroup import TableGroup, cyclic_group, direct_product, subgroup_table
from .words import Presentation, PresentationSyntaxError, Word, parse_presentation, parse_word

__all__ = [
    "CosetLimitExceeded",
    "Presentation",
    "PresentationSyntaxError",
    "TableGroup",
    "Word",
    "builtin_presentation",
    "cyclic_group",
    "direct_product",
    "parse_presentation",
    "parse_word",
    "subgroup_table",
    "todd_coxeter",
]
