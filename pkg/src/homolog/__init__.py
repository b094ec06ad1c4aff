"""Exact homological invariants of modules over Artinian local algebras."""

from __future__ import annotations

__version__ = "0.1.0"

from .algebra import ArtinAlgebra, build_algebra, ring_invariants
from .asymptotics import AsymptoticsReport, InvariantSequence, analyze, check_sequence_lemma
from .checks import CATALOG, CheckResult, run_catalog, run_check, select_checks
from .corpus import CorpusInstance, builtin_corpus, load_corpus, parse_corpus
from .errors import (
    BudgetExceededError,
    CorpusError,
    HomologError,
    NotMPrimaryError,
    UnknownCheckError,
)
from .homalg import ext_homology, ext_module, ext_tor_duality_check, pair_sequences, tor_homology, tor_module
from .linalg import field_for
from .modules import (
    ModulePresentation,
    ModuleRealization,
    free_module,
    matlis_dual,
    module_invariants,
    realize,
    residue_field,
    syzygy,
)
from .report import emit_report
from .resolution import bass_sequence, betti_sequence, resolve

__all__ = [
    "ArtinAlgebra",
    "AsymptoticsReport",
    "BudgetExceededError",
    "CATALOG",
    "CheckResult",
    "CorpusError",
    "CorpusInstance",
    "HomologError",
    "InvariantSequence",
    "ModulePresentation",
    "ModuleRealization",
    "NotMPrimaryError",
    "UnknownCheckError",
    "analyze",
    "bass_sequence",
    "betti_sequence",
    "build_algebra",
    "builtin_corpus",
    "check_sequence_lemma",
    "emit_report",
    "ext_homology",
    "ext_module",
    "ext_tor_duality_check",
    "field_for",
    "free_module",
    "load_corpus",
    "matlis_dual",
    "module_invariants",
    "pair_sequences",
    "parse_corpus",
    "realize",
    "residue_field",
    "resolve",
    "ring_invariants",
    "run_catalog",
    "run_check",
    "select_checks",
    "syzygy",
    "tor_homology",
    "tor_module",
]
