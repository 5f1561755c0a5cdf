"""Continuous-time quantum-walk search on graphs with equitable partitions."""

from __future__ import annotations

from .errors import (
    ConvergenceError,
    DisconnectedGraphError,
    GraphFormatError,
    InequitablePartitionError,
    InputDataError,
    InvalidGraphError,
    NumericError,
    PartitionError,
    ProbabilityRangeError,
    SymmetryError,
)
from .graph import (
    Graph,
    adjacency_matrix,
    complete_graph,
    cycle_graph,
    example2_graph,
    load_graph,
    store_graph,
)
from .hermitian import HermitianMatrix
from .partition import (
    EquitablePartition,
    QuotientHamiltonian,
    coarsest_equitable_partition,
    lift,
    project,
    project_uniform,
    quotient_hamiltonian,
    validate_partition,
)
from .pst import (
    Parity,
    PstCertificate,
    PstSchedule,
    check_pst_at,
    classify_parities,
    corollary_congruence,
    pst_times,
)
from .search import (
    SearchInstance,
    SearchReport,
    run_search_full,
    run_search_quotient,
    theorem_probability,
    verify_example,
)
from .spectral import Spectrum, decompose, evolve, unitary_at

__version__ = "0.1.0"
