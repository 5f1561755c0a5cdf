"""Hermitian eigendecomposition and the spectral matrix exponential.

``U(t) = exp(itM) = sum_l exp(it theta_l) |v_l><v_l|`` with eigenvalues in
descending order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConvergenceError
from .hermitian import HermitianMatrix

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
# eigenvalues closer than this times the spectral radius form one cluster
CLUSTER_TOL = 1e-9
# above this dimension ``method="auto"`` hands off to LAPACK
JACOBI_MAX_DIM = 64


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Rounds of disjoint index pairs covering every pair once (circle method)."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(a, b), max(a, b)) for a, b in pairs if a < n and b < n]
        p = np.array([a for a, _ in pairs], dtype=np.int64)
        q = np.array([b for _, b in pairs], dtype=np.int64)
        rounds.append((p, q))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def jacobi_eigh(a: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Eigenvalues and eigenvectors of a real symmetric matrix by cyclic Jacobi.

    Each sweep visits every off-diagonal pair once, grouped into rounds of
    disjoint pairs whose rotations commute and are applied together. Stops
    when the off-diagonal Frobenius norm drops below ``tol * ||a||_F``;
    raises :class:`ConvergenceError` after ``max_sweeps``.
    Returns unsorted ``(w, v)`` with ``a = v @ diag(w) @ v.T``.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    norm = np.linalg.norm(a)
    if n < 2 or norm == 0.0:
        return np.diag(a).copy(), v
    rounds = _round_robin(n)
    offmask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        if np.linalg.norm(a[offmask]) <= tol * norm:
            return np.diag(a).copy(), v
        for p, q in rounds:
            apq = a[p, q]
            active = apq != 0.0
            if not active.any():
                continue
            p, q, apq = p[active], q[active], apq[active]
            with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
            t[theta == 0.0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            rp, rq = a[p, :], a[q, :]
            a[p, :] = c[:, None] * rp - s[:, None] * rq
            a[q, :] = s[:, None] * rp + c[:, None] * rq
            cp, cq = a[:, p], a[:, q]
            a[:, p] = cp * c - cq * s
            a[:, q] = cp * s + cq * c
            a[p, q] = 0.0
            a[q, p] = 0.0
            vp, vq = v[:, p], v[:, q]
            v[:, p] = vp * c - vq * s
            v[:, q] = vp * s + vq * c
    if np.linalg.norm(a[offmask]) <= tol * norm:
        return np.diag(a).copy(), v
    raise ConvergenceError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")


def _hermitian_via_embedding(h: np.ndarray, tol: float, max_sweeps: int):
    """Complex Hermitian ``h = A + iB`` through the real symmetric [[A, -B], [B, A]].

    Every eigenvalue of ``h`` appears twice; for each cluster the complex
    vectors ``x + iy`` span the eigenspace and an SVD extracts an
    orthonormal basis of the right size.
    """
    n = h.shape[0]
    A, B = h.real, h.imag
    big = np.block([[A, -B], [B, A]])
    w, vecs = jacobi_eigh(big, tol, max_sweeps)
    order = np.argsort(-w, kind="stable")
    w, vecs = w[order], vecs[:, order]
    z = vecs[:n] + 1j * vecs[n:]
    radius = max(np.max(np.abs(w)), 1.0)
    out_w, out_v = [], []
    start = 0
    while start < 2 * n:
        stop = start + 1
        while stop < 2 * n and w[stop - 1] - w[stop] <= CLUSTER_TOL * radius:
            stop += 1
        size = stop - start
        if size % 2:
            raise ConvergenceError("unpaired eigenvalue in Hermitian embedding")
        u, _, _ = np.linalg.svd(z[:, start:stop], full_matrices=False)
        basis = u[:, : size // 2]
        # Rayleigh quotients recover eigenvalues per basis vector
        vals = np.real(np.einsum("ij,ik,kj->j", basis.conj(), h, basis))
        out_w.extend(vals)
        out_v.append(basis)
        start = stop
    return np.array(out_w), np.hstack(out_v)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues (descending) with orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.eigenvectors)

    @cached_property
    def radius(self) -> float:
        return float(np.max(np.abs(self.eigenvalues))) if self.dim else 0.0

    @cached_property
    def clusters(self) -> tuple[range, ...]:
        """Index ranges of eigenvalues separated by less than ``CLUSTER_TOL * radius``."""
        w = self.eigenvalues
        gap = CLUSTER_TOL * max(self.radius, 1e-300)
        out = []
        start = 0
        for i in range(1, self.dim + 1):
            if i == self.dim or w[i - 1] - w[i] > gap:
                out.append(range(start, i))
                start = i
        return tuple(out)

    def component(self, j: int) -> np.ndarray:
        """``v_l(j)`` for every eigenvector l."""
        return self.eigenvectors[j, :]

    def magnitudes(self, j: int) -> np.ndarray:
        return np.abs(self.eigenvectors[j, :])

    def phases(self, j: int) -> np.ndarray:
        """Argument of ``v_l(j)``; 0 or pi for real eigenvectors."""
        return np.angle(self.eigenvectors[j, :].astype(complex))

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _canonicalize(w: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Descending order, deterministic ties and phases.

    Inside a cluster vectors are ordered by the index of their first
    significant component; each vector is rotated so that component is
    real and positive.
    """
    order = np.argsort(-w, kind="stable")
    w, v = w[order], v[:, order].copy()
    n = len(w)
    thresh = 1e-10
    lead = np.empty(n, dtype=np.int64)
    for l in range(n):
        col = v[:, l]
        big = np.flatnonzero(np.abs(col) > thresh * np.max(np.abs(col)))
        lead[l] = big[0]
        z = col[lead[l]]
        v[:, l] = col * (np.conj(z) / abs(z)) if np.iscomplexobj(col) else col * np.sign(z)
    radius = max(np.max(np.abs(w)), 1e-300) if n else 1.0
    perm = np.arange(n)
    start = 0
    for i in range(1, n + 1):
        if i == n or w[i - 1] - w[i] > CLUSTER_TOL * radius:
            idx = np.arange(start, i)
            perm[start:i] = idx[np.argsort(lead[idx], kind="stable")]
            start = i
    return w[perm], v[:, perm]


def decompose(m, method: str = "auto") -> Spectrum:
    """Spectrum of a Hermitian matrix.

    ``method`` is ``"jacobi"``, ``"lapack"`` (numpy ``eigh``) or ``"auto"``,
    which uses Jacobi up to ``JACOBI_MAX_DIM`` and LAPACK beyond.
    Real symmetric input yields real eigenvectors.
    """
    h = HermitianMatrix(m).entries
    n = h.shape[0]
    if method == "auto":
        method = "jacobi" if n <= JACOBI_MAX_DIM else "lapack"
    if method == "jacobi":
        if np.iscomplexobj(h):
            w, v = _hermitian_via_embedding(h, JACOBI_TOL, JACOBI_MAX_SWEEPS)
        else:
            w, v = jacobi_eigh(h)
    elif method == "lapack":
        w, v = np.linalg.eigh(h)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    w, v = _canonicalize(np.asarray(w, dtype=float), v)
    w.setflags(write=False)
    v.setflags(write=False)
    return Spectrum(w, v)


def unitary_at(s: Spectrum, t: float) -> np.ndarray:
    v = s.eigenvectors
    return (v * np.exp(1j * t * s.eigenvalues)) @ v.conj().T


def evolve(s: Spectrum, t: float, state) -> np.ndarray:
    """``exp(itM) @ state`` without forming the unitary."""
    psi = np.asarray(state)
    if psi.shape != (s.dim,):
        raise ValueError(f"state has shape {psi.shape}, expected ({s.dim},)")
    v = s.eigenvectors
    return v @ (np.exp(1j * t * s.eigenvalues) * (v.conj().T @ psi))


def evolve_many(s: Spectrum, times, state) -> np.ndarray:
    """Rows are ``exp(i t M) @ state`` for each t."""
    psi = np.asarray(state)
    if psi.shape != (s.dim,):
        raise ValueError(f"state has shape {psi.shape}, expected ({s.dim},)")
    times = np.asarray(times, dtype=float)
    v = s.eigenvectors
    coeffs = v.conj().T @ psi
    phases = np.exp(1j * np.outer(times, s.eigenvalues))
    return (phases * coeffs) @ v.T
