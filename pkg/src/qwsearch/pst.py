"""Perfect state transfer: detection, eigen-criteria and transfer times.

PST from j to k at time tau means ``|U(tau)[k, j]| = 1``; the unit-modulus
entry is the phase lambda. Equivalently every eigenprojector E satisfies
``E e_j = sigma E e_k`` with ``|sigma| = 1`` (the parity, +1 or -1 for real
spectra) and the eigenvalue gaps times tau match the parity phases mod 2 pi.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
import math

import numpy as np

from .spectral import Spectrum

PST_TOL = 1e-9
ZERO_TOL = 1e-10
PARITY_TOL = 1e-8
CONGRUENCE_TOL = 1e-8
MAX_DENOMINATOR = 10**6
COMMENSURABILITY_TOL = 1e-9

TWO_PI = 2.0 * math.pi


class Parity(str, Enum):
    PLUS = "plus"
    MINUS = "minus"
    NULL = "null"
    # unit-modulus relation other than +-1 (complex eigenvectors only)
    PHASE = "phase"
    VIOLATION = "violation"


def _check_index(s: Spectrum, *idx: int) -> None:
    for i in idx:
        if not 0 <= i < s.dim:
            raise IndexError(f"index {i} outside [0, {s.dim})")


def _wrap(angle):
    """Map to (-pi, pi]."""
    return np.pi - np.mod(np.pi - angle, TWO_PI)


@dataclass(frozen=True)
class ClusterRelation:
    """Relation ``E e_j = sigma E e_k`` on one eigenvalue cluster."""

    indices: range
    eigenvalue: float
    sigma: complex | None  # None when both projections vanish
    weight: float  # |E e_j|^2
    violation: str | None = None


@dataclass(frozen=True)
class ParityReport:
    parities: tuple[Parity, ...]
    clusters: tuple[ClusterRelation, ...]
    violation: str | None

    @property
    def ok(self) -> bool:
        return self.violation is None


def _label(sigma: complex, tol: float) -> Parity:
    if abs(sigma - 1) <= tol:
        return Parity.PLUS
    if abs(sigma + 1) <= tol:
        return Parity.MINUS
    return Parity.PHASE


def classify_parities(
    s: Spectrum, j: int, k: int, zero_tol: float = ZERO_TOL, tol: float = PARITY_TOL
) -> ParityReport:
    """Per-eigenvector relation between components j and k.

    Degenerate clusters are handled through the 2 x c block of cluster
    components at ``(j, k)``: it must have rank at most one with rows of
    equal norm, and its dominant left singular vector gives the relation.
    """
    _check_index(s, j, k)
    v = s.eigenvectors
    parities: list[Parity] = [Parity.NULL] * s.dim
    relations = []
    first_violation = None
    for idx in s.clusters:
        cols = v[[j, k], idx.start:idx.stop]
        q = cols @ cols.conj().T
        ajj, akk = float(q[0, 0].real), float(q[1, 1].real)
        theta = float(np.mean(s.eigenvalues[idx.start:idx.stop]))
        violation = None
        sigma = None
        if math.sqrt(max(ajj, 0.0)) < zero_tol and math.sqrt(max(akk, 0.0)) < zero_tol:
            relations.append(ClusterRelation(idx, theta, None, ajj))
            continue
        # singular values carry absolute error ~eps, unlike sqrt of Gram eigenvalues
        left, sv, _ = np.linalg.svd(cols)
        second = sv[1] if sv.size > 1 else 0.0
        if abs(math.sqrt(max(ajj, 0.0)) - math.sqrt(max(akk, 0.0))) > tol:
            violation = (
                f"|v(j)| != |v(k)| on eigenvalue {theta:.12g}: "
                f"{math.sqrt(max(ajj, 0)):.6g} vs {math.sqrt(max(akk, 0)):.6g}"
            )
        elif second > tol:
            violation = f"mixed parity inside degenerate eigenvalue {theta:.12g}"
        else:
            x = left[:, 0]
            sigma = complex(x[0] / x[1])
            sigma /= abs(sigma)
        relations.append(ClusterRelation(idx, theta, sigma, ajj, violation))
        if violation and first_violation is None:
            first_violation = violation
        for l in idx:
            if abs(v[j, l]) < zero_tol and abs(v[k, l]) < zero_tol:
                parities[l] = Parity.NULL
            elif violation:
                parities[l] = Parity.VIOLATION
            else:
                parities[l] = _label(sigma, tol)
    return ParityReport(tuple(parities), tuple(relations), first_violation)


@dataclass(frozen=True)
class CongruenceReport:
    """Residuals of the phase congruence and the magnitude condition per eigenvector.

    Phase residuals are ``None`` for eigenvectors that vanish at j or k.
    """

    tau: float
    reference: int | None
    phase_residuals: tuple[float | None, ...]
    magnitude_residuals: tuple[float, ...]
    tol: float

    @property
    def max_phase(self) -> float:
        vals = [r for r in self.phase_residuals if r is not None]
        return max(vals, default=0.0)

    @property
    def max_magnitude(self) -> float:
        return max(self.magnitude_residuals, default=0.0)

    @property
    def max_residual(self) -> float:
        return max(self.max_phase, self.max_magnitude)

    @property
    def ok(self) -> bool:
        return self.max_residual <= self.tol


def corollary_congruence(
    s: Spectrum,
    j: int,
    k: int,
    tau: float,
    tol: float = CONGRUENCE_TOL,
    zero_tol: float = ZERO_TOL,
) -> CongruenceReport:
    """Check ``(theta_0 - theta_l) tau == [phi_l(k) - phi_l(j)] - [phi_0(k) - phi_0(j)]`` mod 2 pi.

    ``phi_l(x)`` is the argument of ``v_l(x)`` and index 0 is the first
    eigenvector not vanishing at j and k. Also reports ``||v_l(j)| - |v_l(k)||``.
    """
    _check_index(s, j, k)
    mj, mk = s.magnitudes(j), s.magnitudes(k)
    pj, pk = s.phases(j), s.phases(k)
    live = (mj >= zero_tol) & (mk >= zero_tol)
    magnitude = np.abs(mj - mk)
    magnitude[(mj < zero_tol) & (mk < zero_tol)] = 0.0
    ref = int(np.flatnonzero(live)[0]) if live.any() else None
    phase: list[float | None] = [None] * s.dim
    if ref is not None:
        theta = s.eigenvalues
        lhs = (theta[ref] - theta) * tau
        rhs = (pk - pj) - (pk[ref] - pj[ref])
        res = np.abs(_wrap(lhs - rhs))
        for l in np.flatnonzero(live):
            phase[l] = float(res[l])
    return CongruenceReport(float(tau), ref, tuple(phase), tuple(map(float, magnitude)), tol)


def transfer_amplitude(s: Spectrum, j: int, k: int, t) -> np.ndarray | complex:
    """``U(t)[k, j]`` for scalar or array t."""
    _check_index(s, j, k)
    w = s.eigenvectors[k, :] * np.conj(s.eigenvectors[j, :])
    t_arr = np.asarray(t, dtype=float)
    out = np.exp(1j * np.multiply.outer(t_arr, s.eigenvalues)) @ w
    return complex(out) if t_arr.ndim == 0 else out


@dataclass(frozen=True)
class PstCertificate:
    source: int
    target: int
    tau: float
    phase: complex
    parities: tuple[Parity, ...]
    residuals: dict = field(default_factory=dict)
    tol: float = PST_TOL

    def to_document(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "tau": self.tau,
            "phase": [self.phase.real, self.phase.imag],
            "parities": [p.value for p in self.parities],
            "residuals": dict(self.residuals),
        }


def check_pst_at(
    s: Spectrum, j: int, k: int, tau: float, tol: float = PST_TOL, zero_tol: float = ZERO_TOL
) -> PstCertificate | None:
    """Certificate if ``|U(tau)[k, j]| >= 1 - tol``, otherwise ``None``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    _check_index(s, j, k)
    amp = transfer_amplitude(s, j, k, tau)
    size = abs(amp)
    if size < 1.0 - tol:
        return None
    parity = classify_parities(s, j, k, zero_tol)
    cong = corollary_congruence(s, j, k, tau, zero_tol=zero_tol)
    residuals = {
        "transfer": max(0.0, 1.0 - size),
        "congruence": cong.max_phase,
        "magnitude": cong.max_magnitude,
    }
    return PstCertificate(j, k, float(tau), amp / size, parity.parities, residuals, tol)


@dataclass(frozen=True)
class PstSchedule:
    """PST times ``tau, tau + step, tau + 2 step, ...`` or the reason there are none."""

    source: int
    target: int
    tau: float | None = None
    step: float | None = None
    phase: complex | None = None
    reason: str | None = None
    detail: str = ""
    certificate: PstCertificate | None = None
    _ref_eigenvalue: float = 0.0
    _ref_sigma: complex = 1.0

    def __bool__(self) -> bool:
        return self.tau is not None

    def phase_at(self, t: float) -> complex:
        return complex(np.exp(1j * t * self._ref_eigenvalue) * np.conj(self._ref_sigma))

    def times(self, horizon: float | None = None) -> list[tuple[float, complex]]:
        """``(tau, lambda)`` for every PST time up to ``horizon`` (default: the first only)."""
        if self.tau is None:
            return []
        if horizon is None:
            return [(self.tau, self.phase)]
        out = []
        count = math.floor((horizon - self.tau) / self.step * (1 + 1e-12) + 1e-9) + 1
        for m in range(max(count, 0)):
            t = self.tau + m * self.step
            out.append((t, self.phase if m == 0 else self.phase_at(t)))
        return out

    def contains(self, t: float, atol: float = 1e-10) -> bool:
        if self.tau is None:
            return False
        m = round((t - self.tau) / self.step)
        return m >= 0 and abs(self.tau + m * self.step - t) <= atol

    def to_document(self) -> dict:
        doc = {"source": self.source, "target": self.target}
        if self.tau is None:
            doc.update({"tau": None, "reason": self.reason, "detail": self.detail})
            return doc
        doc.update(self.certificate.to_document())
        doc["step"] = self.step
        return doc


def _solve_phases(n: list[int], s: list[float]) -> float | None:
    """Smallest x > 0 with ``n_r x == s_r (mod 2)`` for all r, gcd(n) = 1."""
    star = int(np.argmin(n))
    ns = n[star]
    xs = (s[star] + 2.0 * np.arange(ns + 1)) / ns
    xs = xs[xs > 1e-12]
    nn = np.asarray(n, dtype=float)[:, None]
    ss = np.asarray(s, dtype=float)[:, None]
    dev = np.abs(np.mod(nn * xs - ss + 1.0, 2.0) - 1.0)
    good = np.all(dev <= 1e-9 * np.maximum(nn, 1.0), axis=0)
    if not good.any():
        return None
    return float(xs[np.argmax(good)])


def pst_times(
    s: Spectrum,
    j: int,
    k: int,
    tol: float = PST_TOL,
    max_denominator: int = MAX_DENOMINATOR,
) -> PstSchedule:
    """Minimal PST time from j to k and the spacing of later ones.

    With ``sigma_r`` the parity relation of cluster r and ``g_r`` its gap below
    the top non-vanishing cluster, PST at tau needs
    ``g_r tau == arg(sigma_0) - arg(sigma_r) (mod 2 pi)`` for all r. Gaps are
    rationalized against the smallest one by continued fractions; any
    candidate is confirmed with :func:`check_pst_at` before it is returned.
    """
    _check_index(s, j, k)
    absent = lambda reason, detail: PstSchedule(j, k, reason=reason, detail=detail)  # noqa: E731
    parity = classify_parities(s, j, k)
    if not parity.ok:
        return absent("parity-violation", parity.violation)
    live = [c for c in parity.clusters if c.sigma is not None]
    ref, rest = live[0], live[1:]
    if not rest:
        return absent("no-gaps", "a single eigenvalue contributes; transfer is stationary")
    gaps = [ref.eigenvalue - c.eigenvalue for c in rest]
    targets = [
        float(np.mod(np.angle(ref.sigma * np.conj(c.sigma)), TWO_PI) / math.pi) for c in rest
    ]
    base = min(gaps)
    fracs = []
    for g in gaps:
        f = Fraction(g / base).limit_denominator(max_denominator)
        if abs(g - float(f) * base) > COMMENSURABILITY_TOL * base:
            return absent("incommensurable", f"eigenvalue gap ratio {g / base:.15g} is not rational")
        fracs.append(f)
    lcm = math.lcm(*(f.denominator for f in fracs))
    ints = [f.numerator * (lcm // f.denominator) for f in fracs]
    g = math.gcd(*ints)
    ints = [i // g for i in ints]
    if min(ints) > max_denominator:
        return absent("incommensurable", "gap ratios need denominators above the limit")
    unit = base * g / lcm
    x = _solve_phases(ints, targets)
    if x is None:
        return absent("unsatisfiable", "parity phases cannot be matched by any time")
    tau = x * math.pi / unit
    cert = check_pst_at(s, j, k, tau, tol)
    if cert is None:
        return absent("incommensurable", "rational approximation of the gaps failed verification")
    return PstSchedule(
        j,
        k,
        tau=tau,
        step=TWO_PI / unit,
        phase=cert.phase,
        certificate=cert,
        _ref_eigenvalue=ref.eigenvalue,
        _ref_sigma=ref.sigma,
    )
