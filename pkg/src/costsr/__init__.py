"""Checker and generators for cost-aware redundancy proofs in MaxSAT."""

from .model import (
    BOTTOM,
    FALSE,
    IDENTITY,
    SATISFIED,
    TRUE,
    Clause,
    Const,
    Formula,
    Instance,
    Substitution,
    compose,
    cost_of,
    negation_of,
    restrict_clause,
    restrict_formula,
)
from .proof import Bound, Conclude, Inferred, Proof, Redundant, Verdict, check_proof
from .msr import ConcludeBot, CopyToSoft, HardInfer, HardRedundant, Merge, MsrProof, Split, check_msr_proof
from .rules import RuleClass, check_cost_condition, check_redundancy_condition, check_redundant_step

__version__ = "0.1.0"
