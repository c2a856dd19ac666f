"""Conceptual-density word sense disambiguation for noun hierarchies."""

__version__ = "0.1.0"

from .density import DensityFormula, FormulaKind, conceptual_density
from .disambiguator import (
    Fallback,
    SenseDistribution,
    Token,
    Weighting,
    Window,
    WsdConfig,
    build_window,
    collect_marks,
    disambiguate_document,
    score_senses,
)
from .lexicon import (
    ConceptStats,
    RelationType,
    SemanticNetwork,
    Synset,
    load_lexicon,
    parse_compact_lexicon,
    parse_wndb,
)

__all__ = [
    "ConceptStats",
    "DensityFormula",
    "Fallback",
    "FormulaKind",
    "RelationType",
    "SemanticNetwork",
    "SenseDistribution",
    "Synset",
    "Token",
    "Weighting",
    "Window",
    "WsdConfig",
    "build_window",
    "collect_marks",
    "conceptual_density",
    "disambiguate_document",
    "load_lexicon",
    "parse_compact_lexicon",
    "parse_wndb",
    "score_senses",
    "__version__",
]
