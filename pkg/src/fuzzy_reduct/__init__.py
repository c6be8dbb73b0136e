"""Crisp and fuzzy-rough discernibility-matrix feature selection."""

from .dataset import CsvSchema, DecisionSystem, FeatureKind, load_csv, save_csv
from .discernibility import (
    ClauseSet,
    ClauseStats,
    CrispClause,
    FuzzyClause,
    Mode,
    crisp_dm,
    crisp_simplify,
    fuzzy_clause,
    generate_clause_set,
    max_sat,
    simplify_clause_set,
    subsumption_degree,
)
from .errors import (
    DatasetError,
    FuzzyReductError,
    InvariantError,
    UnsatisfiableError,
)
from .fuzzy import Connectives, Kernel, SimilarityMatrix, TConorm, TNorm, similarity, similarity_matrix
from .reducer import Reduct, Step, brute_force_reducts, fjra, is_satisfied, jra_crisp, select_literal

__version__ = "0.1.0"

__all__ = [
    "ClauseSet",
    "ClauseStats",
    "Connectives",
    "CrispClause",
    "CsvSchema",
    "DatasetError",
    "DecisionSystem",
    "FeatureKind",
    "FuzzyClause",
    "FuzzyReductError",
    "InvariantError",
    "Kernel",
    "Mode",
    "Reduct",
    "SimilarityMatrix",
    "Step",
    "TConorm",
    "TNorm",
    "UnsatisfiableError",
    "brute_force_reducts",
    "crisp_dm",
    "crisp_simplify",
    "fjra",
    "fuzzy_clause",
    "generate_clause_set",
    "is_satisfied",
    "jra_crisp",
    "load_csv",
    "max_sat",
    "save_csv",
    "select_literal",
    "similarity",
    "similarity_matrix",
    "simplify_clause_set",
    "subsumption_degree",
]
