"""Radial measures realizing the resolution of the identity.

Everything happens in the variable t = r^2 on [0, R_w^2], where the
measure must reproduce the moment targets

    m_j = |q|^{-j(j+1)} w_j / pi,         j = 0, 1, 2, ...

A closed form is known for factorial weights with |q| = 1 (the radial
Gaussian, t-density e^{-t}/pi); every other case goes through a
Hankel-to-Jacobi Gauss rule built from the moments.  The recurrence
coefficients are computed in arbitrary precision because raw moment
sequences at factorial scale annihilate double precision long before the
orders used here; only the final nodes and masses are cast to float64,
which perturbs the matched moments by a few ulps at most.

Atomic rules are accepted on purpose: only moment identities enter the
downstream computations, so absolute continuity of the underlying measure
is not required of the quadrature surrogate.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import mpmath
import numpy as np
from scipy import integrate
from scipy.special import roots_laguerre

from .errors import ConfigError, IndefiniteMomentsError, OrderTooHighError
from .kernels import log_power_sums, power_matrix, weighted_gram
from .weights import QParam, WeightSequence

MAX_ORDER = 20


@dataclass(frozen=True)
class MomentSequence:
    """Targets m_j with parallel log storage for huge entries.

    ``mp_logs`` carries the same logs at extended precision when the
    sequence was produced from a weight rule; the solver prefers them so
    its nodes are accurate to float64 and not merely moment-consistent.
    """

    values: tuple
    log_values: tuple
    scale: float
    mp_logs: tuple = ()

    @classmethod
    def from_weights(cls, w: WeightSequence, q, jmax: int) -> "MomentSequence":
        q = QParam.of(q)
        with mpmath.workdps(120):
            log_q = mpmath.log(abs(mpmath.mpc(q.value)))
            log_pi = mpmath.log(mpmath.pi)
            mp_logs = tuple(-j * (j + 1) * log_q + w.mp_log_weight(j) - log_pi
                            for j in range(jmax + 1))
        logs = tuple(float(x) for x in mp_logs)
        vals = tuple(math.exp(x) if x < 709 else math.inf for x in logs)
        scale = math.exp(logs[1] - logs[0]) if jmax >= 1 else 1.0
        return cls(tuple(vals), logs, scale, mp_logs)

    @property
    def jmax(self) -> int:
        return len(self.log_values) - 1

    def is_positive_definite(self, order: int) -> bool:
        """Hankel positive definiteness up to ``order`` via the recurrence."""
        try:
            _chebyshev_recurrence(self, order)
            return True
        except IndefiniteMomentsError:
            return False


@dataclass(frozen=True)
class RadialQuadrature:
    """Nodes/masses in t = r^2 realizing the moment targets.

    ``order`` records the requested Gauss order M (moments 0..2M-1
    matched); an atomic solution may carry fewer nodes than M.
    """

    nodes: np.ndarray
    masses: np.ndarray
    order: int
    provenance: str

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        masses = np.asarray(self.masses, dtype=float)
        if nodes.shape != masses.shape or nodes.ndim != 1:
            raise ConfigError("nodes and masses must be parallel 1-d arrays")
        if np.any(masses <= 0):
            raise ConfigError("quadrature masses must be positive")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "masses", masses)

    def log_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        with np.errstate(divide="ignore"):
            return np.log(self.nodes), np.log(self.masses)

    def to_json(self) -> dict:
        return {"nodes": [float(x) for x in self.nodes],
                "masses": [float(x) for x in self.masses],
                "order": self.order, "provenance": self.provenance}

    @classmethod
    def from_json(cls, doc: dict) -> "RadialQuadrature":
        return cls(np.array(doc["nodes"], dtype=float),
                   np.array(doc["masses"], dtype=float),
                   int(doc["order"]), str(doc["provenance"]))


@dataclass(frozen=True)
class ClosedFormDensity:
    """A known t-density solving the moment conditions."""

    name: str
    description: str
    density: Callable[[float], float]
    support: tuple

    def quadrature(self, order: int) -> RadialQuadrature:
        raise NotImplementedError


@dataclass(frozen=True)
class _RadialGaussian(ClosedFormDensity):
    amplitude: float = 1.0

    def quadrature(self, order: int) -> RadialQuadrature:
        """Gauss-Laguerre nodes with masses scaled by amplitude/pi."""
        nodes, weights = roots_laguerre(order)
        return RadialQuadrature(nodes, weights * (self.amplitude / math.pi),
                                order, provenance="closed-form")


def closed_form_density(w: WeightSequence, q) -> Optional[ClosedFormDensity]:
    """The known density table; currently factorial weights at |q| = 1."""
    q = QParam.of(q)
    factorial_like = (w.kind == "factorial"
                      or (w.kind == "power-factorial" and w.s == 1.0))
    if factorial_like and abs(q.abs - 1.0) <= 1e-12:
        amp = w.scale * (w.c if w.kind == "constant" else 1.0)
        return _RadialGaussian(
            name="radial-gaussian",
            description="t-density amplitude * exp(-t)/pi on [0, inf)",
            density=lambda t, _a=amp: _a * math.exp(-t) / math.pi,
            support=(0.0, math.inf),
            amplitude=amp,
        )
    return None


# ---------------------------------------------------------------------------
# moments -> Gauss rule
# ---------------------------------------------------------------------------

def _chebyshev_recurrence(m: MomentSequence, order: int):
    """Three-term recurrence coefficients from the (scaled) moments.

    Runs in mpmath arbitrary precision; returns (alpha, beta, atoms) where
    ``atoms`` is set when a vanishing beta reveals an exactly atomic
    measure of fewer than ``order`` points.
    """
    if 2 * order - 1 > m.jmax:
        raise ConfigError(f"order {order} needs moments up to {2 * order - 1}, "
                          f"have {m.jmax}")
    span = max(abs(x) for x in m.log_values[: 2 * order]) / math.log(10.0)
    dps = int(50 + 6 * order + span)
    raw = m.mp_logs if len(m.mp_logs) > m.jmax else [mpmath.mpf(x) for x in m.log_values]
    with mpmath.workdps(dps):
        log_m0 = mpmath.mpf(raw[0])
        log_s = mpmath.mpf(raw[1]) - log_m0 if m.jmax >= 1 else mpmath.mpf(0)
        # scaled moments nu_j = m_j / (m_0 * s^j); nu_0 = nu_1 = 1
        nu = [mpmath.e ** (mpmath.mpf(raw[j]) - log_m0 - j * log_s)
              for j in range(2 * order)]
        alpha = [nu[1] / nu[0]]
        beta = [nu[0]]
        eps = mpmath.mpf(10) ** (-(dps // 2))
        sig_prev = [mpmath.mpf(0)] * (2 * order)
        sig_cur = list(nu)
        atoms = None
        for k in range(1, order):
            sig_next = [mpmath.mpf(0)] * (2 * order)
            for l in range(k, 2 * order - k):
                sig_next[l] = (sig_cur[l + 1]
                               - alpha[k - 1] * sig_cur[l]
                               - beta[k - 1] * sig_prev[l])
            b = sig_next[k] / sig_cur[k - 1]
            if b <= eps * max(1, abs(beta[-1])):
                if b < -eps * max(1, abs(beta[-1])):
                    raise IndefiniteMomentsError(
                        f"Hankel matrix indefinite at order {k + 1}: no positive "
                        f"measure matches these moments", order=k + 1)
                atoms = k          # exactly k atoms carry all the mass
                break
            alpha.append(sig_next[k + 1] / sig_next[k] - sig_cur[k] / sig_cur[k - 1])
            beta.append(b)
            sig_prev, sig_cur = sig_cur, sig_next
        return alpha, beta, atoms, log_s, log_m0, dps


def gauss_quadrature_from_moments(m: MomentSequence, order: int) -> RadialQuadrature:
    """Gauss rule with ``order`` points matching moments 0..2*order-1.

    Raises IndefiniteMomentsError when no positive measure exists at this
    order and OrderTooHighError when precision escalation still cannot
    stabilize the recurrence (the error carries the achievable order).
    """
    if order < 1:
        raise ConfigError("quadrature order must be >= 1")
    if order > MAX_ORDER:
        warnings.warn(f"order {order} exceeds the supported cap {MAX_ORDER}; "
                      f"falling back to {MAX_ORDER}", stacklevel=2)
        order = MAX_ORDER
    try:
        alpha, beta, atoms, log_s, log_m0, dps = _chebyshev_recurrence(m, order)
    except IndefiniteMomentsError:
        raise
    except (mpmath.libmp.NoConvergence, ZeroDivisionError, OverflowError) as exc:
        achievable = _probe_achievable(m, order)
        raise OrderTooHighError(
            f"moment conditioning failed at order {order}; largest achievable "
            f"order is {achievable}", achievable=achievable) from exc

    npts = atoms if atoms is not None else order
    with mpmath.workdps(dps):
        J = mpmath.zeros(npts, npts)
        for k in range(npts):
            J[k, k] = alpha[k]
        for k in range(1, npts):
            off = mpmath.sqrt(beta[k])
            J[k, k - 1] = off
            J[k - 1, k] = off
        try:
            E, Q = mpmath.eigsy(J)
        except mpmath.libmp.NoConvergence as exc:
            achievable = _probe_achievable(m, order)
            raise OrderTooHighError(
                f"Jacobi eigen solve failed at order {order}", achievable=achievable
            ) from exc
        scale = mpmath.e ** log_s
        total = mpmath.e ** log_m0
        nodes = np.array([float(E[i] * scale) for i in range(npts)])
        masses = np.array([float(Q[0, i] ** 2 * total) for i in range(npts)])
    idx = np.argsort(nodes)
    return RadialQuadrature(nodes[idx], masses[idx], order,
                            provenance="moment-solved")


def _probe_achievable(m: MomentSequence, order: int) -> int:
    for k in range(order - 1, 0, -1):
        try:
            _chebyshev_recurrence(m, k)
            return k
        except Exception:
            continue
    return 0


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MomentCheckReport:
    """Deviations of pi * S_n * |q|^{n(n+1)} / w_n from 1 (the resolution
    normalization transported to t coordinates)."""

    deviations: tuple
    max_deviation: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.max_deviation <= self.tol

    def to_json(self) -> dict:
        return {"deviations": list(self.deviations),
                "max_deviation": self.max_deviation,
                "tol": self.tol, "ok": self.ok}


def verify_moments(quad: RadialQuadrature, w: WeightSequence, q,
                   nmax: int, tol: float = 1e-8) -> MomentCheckReport:
    """Check the normalization integrals for n = 0..nmax on the rule."""
    q = QParam.of(q)
    log_t, log_mu = quad.log_arrays()
    log_s = log_power_sums(log_t, log_mu, nmax)
    devs = []
    for n in range(nmax + 1):
        log_val = (math.log(math.pi) + log_s[n]
                   + n * (n + 1) * q.log_abs - w.log_weight(n))
        devs.append(abs(math.exp(log_val) - 1.0))
    return MomentCheckReport(tuple(devs), max(devs), tol)


def verify_density_moments(density: ClosedFormDensity, w: WeightSequence, q,
                           jmax: int, tol: float = 1e-9) -> MomentCheckReport:
    """Adaptive-integration check of the t-moment targets for a density."""
    q = QParam.of(q)
    lo, hi = density.support
    devs = []
    for j in range(jmax + 1):
        target_log = -j * (j + 1) * q.log_abs + w.log_weight(j) - math.log(math.pi)
        target = math.exp(target_log)
        val, _err = integrate.quad(lambda t: density.density(t) * t**j,
                                   lo, hi, epsabs=0.0, epsrel=1e-12, limit=400)
        devs.append(abs(val - target) / abs(target))
    return MomentCheckReport(tuple(devs), max(devs), tol)


def polar_grid(quad: RadialQuadrature, angles: int,
               offset: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Node-major complex sample points lambda = sqrt(t) e^{i alpha} and
    real weights pi * mass / angles approximating integration against rho."""
    if angles < 1:
        raise ConfigError("need at least one angular point")
    alpha = offset + 2.0 * math.pi * np.arange(angles) / angles
    r = np.sqrt(quad.nodes)
    z = (r[:, None] * np.exp(1j * alpha)[None, :]).ravel()
    wts = np.repeat(quad.masses * (math.pi / angles), angles)
    return z, wts


@dataclass(frozen=True)
class GramReport:
    """Reconstruction of <phi_j, phi_k> from the quadrature resolution."""

    matrix: np.ndarray
    max_deviation: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.max_deviation <= self.tol

    def to_json(self) -> dict:
        dev = np.abs(self.matrix - np.eye(self.matrix.shape[0]))
        return {"max_deviation": self.max_deviation, "tol": self.tol,
                "ok": self.ok, "dim": self.matrix.shape[0],
                "row_deviations": [float(x) for x in dev.max(axis=1)]}


def verify_resolution_identity(quad: RadialQuadrature, w: WeightSequence, q,
                               basis_size: int, angular_points: int,
                               tol: float = 1e-8,
                               angle_offset: float = 0.0) -> GramReport:
    """Rebuild the basis Gram matrix through the coherent-state frame.

    G[j][k] = sum over the polar grid of weight * a_j(lambda) conj(a_k(lambda))
    must reproduce the identity for j, k <= basis_size.
    """
    q = QParam.of(q)
    if angular_points < 2 * basis_size + 1:
        raise ConfigError(f"angular exactness needs >= {2 * basis_size + 1} "
                          f"points, got {angular_points}")
    z, wts = polar_grid(quad, angular_points, angle_offset)
    V = power_matrix(z, basis_size)
    j = np.arange(basis_size + 1, dtype=float)
    pref_log = 0.5 * j * (j + 1) * q.log_abs - 0.5 * w.log_weights(0, basis_size + 1)
    pref = np.exp(pref_log) * np.exp(1j * (0.5 * j * (j + 1) * q.arg))
    G = weighted_gram(V * pref[None, :], wts.astype(complex))
    dev = float(np.max(np.abs(G - np.eye(basis_size + 1))))
    return GramReport(G, dev, tol)


@dataclass(frozen=True)
class DivergenceWitness:
    """Partial sums of the coherent-norm integral: they grow like N + 1."""

    terms: tuple
    partial_sums: tuple
    slope: float

    def to_json(self) -> dict:
        return {"terms": list(self.terms),
                "partial_sums": list(self.partial_sums),
                "slope": self.slope}


def norm_divergence_witness(quad: RadialQuadrature, w: WeightSequence, q,
                            n_terms: int) -> DivergenceWitness:
    """Evaluate the term-by-term divergence of the squared-norm integral."""
    q = QParam.of(q)
    log_t, log_mu = quad.log_arrays()
    log_s = log_power_sums(log_t, log_mu, n_terms)
    terms = [math.exp(math.log(math.pi) + log_s[n]
                      + n * (n + 1) * q.log_abs - w.log_weight(n))
             for n in range(n_terms + 1)]
    sums = np.cumsum(terms)
    slope = float(np.polyfit(np.arange(n_terms + 1), sums, 1)[0])
    return DivergenceWitness(tuple(terms), tuple(float(x) for x in sums), slope)
