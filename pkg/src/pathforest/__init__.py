"""Online construction of dense monochromatic path-forests on restricted
2-edge-colourings, with exact oracles, invariant checkers, and a numeric
certificate for the achieved density constant (9 + sqrt(17))/16."""

from .assembly import AssembledPath, assemble, join_avoiding, shift_suffix
from .colouring import (Colour, ExplicitColouring, RestrictedColouring,
                        generate, restrict_to_prefix)
from .engine import (EngineState, RoundTrace, init, read_trace_jsonl, run,
                     trace_to_jsonl, write_trace_csv, write_trace_jsonl)
from .errors import (AbsorptionError, ConsistencyError, CycleError,
                     DegreeError, FormatError, HorizonError,
                     InvariantViolation, ParameterError, SpareDegreeError)
from .forest import ColouredForestConstraints, PathForest, select_sigma
from .invariants import (ALPHA, DENSITY_THRESHOLD, CertificateReport,
                         CheckReport, FrozenRho, MonitorReport, RunChecker,
                         audit_state, check_pair_facts, check_rho_accounting,
                         check_round, check_row_facts, check_row_shape,
                         hypothesis_window_bound, monitor_escape_lemmas,
                         recurrence_check, sample_round_pairs,
                         structural_check, verify_certificate)
from .oracle import (OracleResult, enumerate_small, longest_mono_path,
                     longest_mono_path_naive, max_pathforest_coverage)

__version__ = "0.1.0"

__all__ = [
    "ALPHA", "DENSITY_THRESHOLD", "__version__",
    "AbsorptionError", "AssembledPath", "CertificateReport", "CheckReport",
    "Colour", "ColouredForestConstraints", "ConsistencyError", "CycleError",
    "DegreeError", "EngineState", "ExplicitColouring", "FormatError",
    "FrozenRho", "HorizonError", "InvariantViolation", "MonitorReport",
    "OracleResult", "ParameterError", "PathForest", "RestrictedColouring",
    "RoundTrace", "RunChecker", "SpareDegreeError",
    "assemble", "audit_state", "check_pair_facts", "check_rho_accounting",
    "check_round", "check_row_facts", "check_row_shape", "enumerate_small",
    "generate", "hypothesis_window_bound", "init", "join_avoiding",
    "longest_mono_path", "longest_mono_path_naive",
    "max_pathforest_coverage", "monitor_escape_lemmas", "read_trace_jsonl",
    "recurrence_check", "restrict_to_prefix", "run", "sample_round_pairs",
    "select_sigma", "shift_suffix", "structural_check", "trace_to_jsonl",
    "verify_certificate", "write_trace_csv", "write_trace_jsonl",
]
