"""Quantum-walk search: full and quotient evolutions, and the two example families."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
import math

import numpy as np

from .errors import ProbabilityRangeError
from .graph import Graph, adjacency_matrix, complete_graph, cyclepair_size, example2_graph
from .hermitian import HermitianMatrix
from .partition import (
    EquitablePartition,
    QuotientHamiltonian,
    coarsest_equitable_partition,
    quotient_hamiltonian,
)
from .pst import PST_TOL, PstCertificate, PstSchedule, pst_times
from .spectral import Spectrum, decompose, evolve_many

PROBABILITY_SLACK = 1e-12
FULL_SIMULATION_CAP = 2048
GRAPH_EDGE_CAP = 2_000_000
FAMILIES = ("complete", "cyclepair")


def uniform_state(N: int) -> np.ndarray:
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    return np.full(N, 1.0 / math.sqrt(N))


def clamp_probability(p):
    """Clamp rounding excursions of at most ``PROBABILITY_SLACK`` into [0, 1]."""
    arr = np.asarray(p, dtype=float)
    if np.any(arr < -PROBABILITY_SLACK) or np.any(arr > 1.0 + PROBABILITY_SLACK):
        raise ProbabilityRangeError(f"probability outside [0, 1]: {arr.min()!r}..{arr.max()!r}")
    out = np.clip(arr, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def finding_probability(state, s: int) -> float:
    state = np.asarray(state)
    if not 0 <= s < state.shape[0]:
        raise IndexError(f"vertex {s} outside [0, {state.shape[0]})")
    return clamp_probability(abs(state[s]) ** 2)


def search_hamiltonian(g: Graph, marked: int, gamma: float) -> HermitianMatrix:
    """``|w><w| + gamma * A``."""
    h = gamma * np.array(adjacency_matrix(g))
    h[marked, marked] += 1.0
    return HermitianMatrix(h)


@dataclass(frozen=True, eq=False)
class SearchInstance:
    graph: Graph
    marked: int = 0
    gamma: float = 1.0

    def __post_init__(self):
        if not 0 <= self.marked < self.graph.n:
            raise IndexError(f"marked vertex {self.marked} outside [0, {self.graph.n})")
        if not math.isfinite(self.gamma):
            raise ValueError(f"gamma must be finite, got {self.gamma}")

    @property
    def N(self) -> int:
        return self.graph.n

    @cached_property
    def hamiltonian(self) -> HermitianMatrix:
        return search_hamiltonian(self.graph, self.marked, self.gamma)

    @cached_property
    def spectrum(self) -> Spectrum:
        return decompose(self.hamiltonian)

    def states(self, times) -> np.ndarray:
        return evolve_many(self.spectrum, times, uniform_state(self.N))


def search_curve_full(inst: SearchInstance, times) -> np.ndarray:
    amps = inst.states(np.atleast_1d(times))[:, inst.marked]
    return clamp_probability(np.abs(amps) ** 2)


def run_search_full(inst: SearchInstance, t: float) -> float:
    """Probability at the marked vertex after evolving the uniform state on the whole graph."""
    return float(search_curve_full(inst, [t])[0])


def search_curve_quotient(q: QuotientHamiltonian, times) -> np.ndarray:
    amps = evolve_many(q.spectrum, np.atleast_1d(times), q.initial_state)[:, 0]
    return clamp_probability(np.abs(amps) ** 2)


def run_search_quotient(q: QuotientHamiltonian, t: float) -> float:
    """Same probability computed in the cell basis."""
    return float(search_curve_quotient(q, [t])[0])


def theorem_probability(q: QuotientHamiltonian, cert: PstCertificate) -> float:
    """``n_j / N`` for a transfer certificate from cell j into the marked cell."""
    if cert.target != 0:
        raise ValueError(f"certificate must target cell 0, got {cert.target}")
    return q.sizes[cert.source] / q.N


# -- example families ---------------------------------------------------------


def family_gamma(family: str, parameter: int) -> float:
    if family == "complete":
        if parameter < 3:
            raise ValueError(f"complete family needs N >= 3 (gamma = 1/(N-2)), got {parameter}")
        return 1.0 / (parameter - 2)
    if family == "cyclepair":
        if parameter < 1:
            raise ValueError(f"cyclepair family needs k >= 1, got {parameter}")
        return 0.5
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def family_size(family: str, parameter: int) -> int:
    family_gamma(family, parameter)
    if family == "complete":
        return parameter
    m = cyclepair_size(parameter)
    return 1 + m + m * m


def family_edge_count(family: str, parameter: int) -> int:
    if family == "complete":
        return parameter * (parameter - 1) // 2
    m = cyclepair_size(parameter)
    return 2 * m + 2 * m * m


def family_graph(family: str, parameter: int) -> Graph:
    family_gamma(family, parameter)
    return complete_graph(parameter) if family == "complete" else example2_graph(parameter)


def family_partition(family: str, parameter: int) -> EquitablePartition:
    """Closed-form partition of a family member, without building the graph."""
    family_gamma(family, parameter)
    if family == "complete":
        N = parameter
        return EquitablePartition(((0,), range(1, N)), np.array([[0, N - 1], [1, N - 2]]))
    m = cyclepair_size(parameter)
    cells = ((0,), range(1, m + 1), range(m + 1, m + 1 + m * m))
    return EquitablePartition(cells, np.array([[0, m, 0], [1, 2, m], [0, 1, 2]]))


def family_quotient(family: str, parameter: int) -> QuotientHamiltonian:
    return quotient_hamiltonian(family_partition(family, parameter), family_gamma(family, parameter))


def nominal_time(family: str, parameter: int) -> float:
    """Transfer time quoted for the family: (N-2) pi / (2 sqrt(N-1)) or pi."""
    family_gamma(family, parameter)
    if family == "complete":
        N = parameter
        return (N - 2) * math.pi / (2 * math.sqrt(N - 1))
    return math.pi


def closed_form_probability(family: str, parameter: int) -> float:
    family_gamma(family, parameter)
    if family == "complete":
        return 1.0 - 1.0 / parameter
    m = cyclepair_size(parameter)
    return m * m / (m * m + m + 1)


def best_transfer_into_marked(q: QuotientHamiltonian, tol: float = PST_TOL) -> PstSchedule | None:
    """Schedule j -> 0 with the smallest minimal time over all cells j != 0."""
    best = None
    for j in range(1, q.num_cells):
        sched = pst_times(q.spectrum, j, 0, tol)
        if sched and (best is None or sched.tau < best.tau):
            best = sched
    return best


@dataclass(frozen=True)
class SearchReport:
    family: str
    parameter: int
    N: int
    gamma: float
    tau: float | None
    tau_step: float | None
    probability: float | None
    theorem_probability: float | None
    certificate: PstCertificate | None
    nominal_tau: float
    nominal_probability: float
    full_probability: float | None
    quotient_only: bool
    asymptotic_gap: float
    times: tuple[float, ...]
    probabilities: tuple[float, ...]
    residuals: dict = field(default_factory=dict)
    tol: float = 1e-9
    notes: tuple[str, ...] = ()

    @property
    def oracle_residual(self) -> float | None:
        return self.residuals.get("full_vs_quotient")

    @property
    def ok(self) -> bool:
        return self.certificate is not None and all(r <= self.tol for r in self.residuals.values())

    def to_document(self) -> dict:
        return {
            "family": self.family,
            "parameter": self.parameter,
            "N": self.N,
            "gamma": self.gamma,
            "tau": self.tau,
            "tau_step": self.tau_step,
            "probability": self.probability,
            "theorem_probability": self.theorem_probability,
            "certificate": self.certificate.to_document() if self.certificate else None,
            "nominal_tau": self.nominal_tau,
            "nominal_probability": self.nominal_probability,
            "full_probability": self.full_probability,
            "quotient_only": self.quotient_only,
            "asymptotic_gap": self.asymptotic_gap,
            "residuals": dict(self.residuals),
            "tolerance": self.tol,
            "ok": self.ok,
            "notes": list(self.notes),
            "curve": [[t, p] for t, p in zip(self.times, self.probabilities)],
        }


def verify_example(
    family: str,
    parameter: int,
    full_cap: int = FULL_SIMULATION_CAP,
    tol: float = 1e-9,
    curve_points: int = 50,
    edge_cap: int = GRAPH_EDGE_CAP,
) -> SearchReport:
    """Rebuild a family member, certify transfer into the marked cell and cross-check.

    The graph is built and partitioned when it has at most ``edge_cap`` edges,
    otherwise the closed-form partition is used. The full N-dimensional
    simulation runs only when ``N <= full_cap``.
    """
    gamma = family_gamma(family, parameter)
    N = family_size(family, parameter)
    notes = []
    residuals: dict[str, float] = {}
    closed = family_partition(family, parameter)
    graph = None
    if family_edge_count(family, parameter) <= edge_cap:
        graph = family_graph(family, parameter)
        part = coarsest_equitable_partition(graph, 0)
        same = part.sizes == closed.sizes and np.array_equal(part.dtable, closed.dtable)
        residuals["dtable"] = 0.0 if same else 1.0
    else:
        part = closed
        notes.append("graph too large to build; closed-form partition used")
    q = quotient_hamiltonian(part, gamma)

    sched = best_transfer_into_marked(q, tol)
    nominal = nominal_time(family, parameter)
    nominal_p = run_search_quotient(q, nominal)
    tau = prob = theo = None
    cert = None
    if sched:
        cert = sched.certificate
        tau = sched.tau
        prob = run_search_quotient(q, tau)
        theo = theorem_probability(q, cert)
        residuals["transfer"] = cert.residuals["transfer"]
        residuals["theorem"] = abs(prob - theo)
        residuals["closed_form"] = abs(prob - closed_form_probability(family, parameter))
        residuals["nominal_probability"] = abs(nominal_p - theo)
        m = round((nominal - tau) / sched.step)
        residuals["nominal_tau_in_schedule"] = abs(tau + max(m, 0) * sched.step - nominal) / nominal
    else:
        notes.append("no transfer into the marked cell found")

    times = np.linspace(0.0, 2.0 * nominal, curve_points)
    curve = search_curve_quotient(q, times)
    full_p = None
    quotient_only = graph is None or N > full_cap
    if quotient_only:
        if N > full_cap:
            notes.append(f"full simulation skipped: N = {N} exceeds cap {full_cap}")
        else:
            notes.append("full simulation skipped: graph not built")
    else:
        inst = SearchInstance(graph, 0, gamma)
        check_times = np.append(times, tau if tau is not None else nominal)
        full = search_curve_full(inst, check_times)
        quot = search_curve_quotient(q, check_times)
        residuals["full_vs_quotient"] = float(np.max(np.abs(full - quot)))
        full_p = float(full[-1])

    p_for_gap = prob if prob is not None else nominal_p
    return SearchReport(
        family=family,
        parameter=parameter,
        N=N,
        gamma=gamma,
        tau=tau,
        tau_step=sched.step if sched else None,
        probability=prob,
        theorem_probability=theo,
        certificate=cert,
        nominal_tau=nominal,
        nominal_probability=nominal_p,
        full_probability=full_p,
        quotient_only=quotient_only,
        asymptotic_gap=abs((1.0 - p_for_gap) - 1.0 / math.sqrt(N)),
        times=tuple(map(float, times)),
        probabilities=tuple(map(float, curve)),
        residuals=residuals,
        tol=tol,
        notes=tuple(notes),
    )
