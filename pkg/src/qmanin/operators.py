"""Truncated matrices of Toeplitz operators on the graded basis phi_n.

Column n of T_{theta^i tb^j} holds a single entry

    q^{-jn} * w_{n+i} / (w_n * w_{n+i-j})^{1/2}       at row n + i - j,

extended linearly over the symbol's terms.  Degree-raising terms push
entries past the cutoff window; those are dropped and the operator's
exactness flag is cleared so truncation loss is never silent.

Also here: the boundedness/compactness classifier for the annihilation
operator and the domain membership test, both driven by the ratio
sequence |q|^{-2n} w_n / w_{n-1}.
"""

from __future__ import annotations

import csv as _csv
import io
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence, Union

import numpy as np

from .algebra import ManinElement
from .errors import ConfigError
from .weights import QParam, WeightSequence


@dataclass(frozen=True)
class OperatorMeta:
    symbol: str
    weights: str
    q: complex
    exact: bool
    basis: str = "phi"

    def to_json(self) -> dict:
        return {"symbol": self.symbol, "weights": self.weights,
                "q": [self.q.real, self.q.imag], "exact": self.exact,
                "basis": self.basis}


@dataclass(frozen=True)
class TruncatedOperator:
    """A dense (N+1) x (N+1) complex matrix plus cutoff metadata."""

    matrix: np.ndarray
    meta: OperatorMeta
    _skip_checks: bool = field(default=False, repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise ConfigError(f"operator matrix must be square, got {m.shape}")
        if not self._skip_checks and not np.all(np.isfinite(m)):
            raise ConfigError("operator entries must be finite")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def cutoff(self) -> int:
        return self.dim - 1

    def adjoint(self) -> "TruncatedOperator":
        return TruncatedOperator(self.matrix.conj().T,
                                 replace(self.meta, symbol=f"({self.meta.symbol})*"))

    def __matmul__(self, other):
        if isinstance(other, TruncatedOperator):
            return TruncatedOperator(
                self.matrix @ other.matrix,
                replace(self.meta, symbol=f"{self.meta.symbol}@{other.meta.symbol}",
                        exact=self.meta.exact and other.meta.exact))
        return self.matrix @ other

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "entries": [[[z.real, z.imag] for z in row] for row in self.matrix],
            "meta": self.meta.to_json(),
        }

    def to_csv(self) -> str:
        """Row-major CSV with quoted "re,im" cells."""
        buf = io.StringIO()
        writer = _csv.writer(buf, lineterminator="\n")
        for row in self.matrix:
            writer.writerow([f"{float(z.real)!r},{float(z.imag)!r}" for z in row])
        return buf.getvalue()


def _band_coeff(w: WeightSequence, n: int, i: int, j: int) -> float:
    """w_{n+i} / (w_n w_{n+i-j})^{1/2} in overflow-safe split form."""
    hi, lo1, lo2 = w.weight(n + i), w.weight(n), w.weight(n + i - j)
    if math.isfinite(hi) and math.isfinite(lo1) and math.isfinite(lo2):
        return math.sqrt(hi / lo1) * math.sqrt(hi / lo2)
    return math.exp(w.log_weight(n + i)
                    - 0.5 * (w.log_weight(n) + w.log_weight(n + i - j)))


def toeplitz_matrix(g: ManinElement, w: WeightSequence, q, N: int) -> TruncatedOperator:
    """Truncated matrix of T_g on the basis phi_0..phi_N."""
    q = QParam.of(q)
    if g.q.value != q.value:
        raise ConfigError("symbol was built over a different q")
    if N < 0:
        raise ConfigError("cutoff must be non-negative")
    mat = np.zeros((N + 1, N + 1), dtype=complex)
    exact = True
    for mon, coeff in g:
        i, j = mon.i, mon.j
        for n in range(N + 1):
            row = n + i - j
            if row < 0:
                continue
            if row > N:
                exact = False
                continue
            z = coeff.evaluate(g.q) * q.power(-j * n) * _band_coeff(w, n, i, j)
            mat[row, n] += z
    return TruncatedOperator(mat, OperatorMeta(
        symbol=_symbol_string(g), weights=w.describe(), q=q.value, exact=exact))


def _symbol_string(g: ManinElement) -> str:
    if not g.terms:
        return "0"
    bits = []
    for mon, _ in g:
        c = g.coefficient(mon.i, mon.j)
        prefix = "" if c == 1 else f"({c:g})*" if c.imag == 0 else f"({c})*"
        th = f"th^{mon.i}" if mon.i else ""
        tb = f"tb^{mon.j}" if mon.j else ""
        core = " ".join(x for x in (th, tb) if x) or "1"
        bits.append(f"{prefix}{core}")
    return " + ".join(bits)


def annihilation_matrix(w: WeightSequence, q, N: int) -> TruncatedOperator:
    """T_tb: entry (n-1, n) = q^{-n} (w_n / w_{n-1})^{1/2}."""
    q = QParam.of(q)
    mat = np.zeros((N + 1, N + 1), dtype=complex)
    for n in range(1, N + 1):
        mat[n - 1, n] = q.power(-n) * w.sqrt_ratio(n)
    return TruncatedOperator(mat, OperatorMeta("tb", w.describe(), q.value, exact=True))


def creation_matrix(w: WeightSequence, q, N: int) -> TruncatedOperator:
    """T_th: entry (n+1, n) = (w_{n+1} / w_n)^{1/2}, q-free."""
    q = QParam.of(q)
    mat = np.zeros((N + 1, N + 1), dtype=complex)
    for n in range(N):
        mat[n + 1, n] = w.sqrt_ratio(n + 1)
    # column N's image phi_{N+1} falls outside the window
    return TruncatedOperator(mat, OperatorMeta("th", w.describe(), q.value, exact=False))


def adjoint_annihilation_matrix(w: WeightSequence, q, N: int) -> TruncatedOperator:
    """(T_tb)*: the conjugate transpose band, entry (n+1, n) =
    conj(q)^{-(n+1)} (w_{n+1} / w_n)^{1/2}."""
    q = QParam.of(q)
    qc = QParam(q.value.conjugate())
    mat = np.zeros((N + 1, N + 1), dtype=complex)
    for n in range(N):
        mat[n + 1, n] = qc.power(-(n + 1)) * w.sqrt_ratio(n + 1)
    return TruncatedOperator(mat, OperatorMeta("tb*", w.describe(), q.value, exact=False))


def number_matrix(N: int) -> TruncatedOperator:
    """Degree operator: diag(0, 1, ..., N)."""
    return TruncatedOperator(np.diag(np.arange(N + 1, dtype=complex)),
                             OperatorMeta("N", "any", 1.0 + 0j, exact=False))


def identity_matrix(w: WeightSequence, q, N: int) -> TruncatedOperator:
    return TruncatedOperator(np.eye(N + 1, dtype=complex),
                             OperatorMeta("1", w.describe(), QParam.of(q).value,
                                          exact=True))


# ---------------------------------------------------------------------------
# boundedness / compactness classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundednessReport:
    """Verdicts from the ratio sequence |q|^{-2n} w_n / w_{n-1}, n = 1..H."""

    ratio_sequence: tuple
    bounded: str          # yes | no | inconclusive
    compact: str
    sup_estimate: float

    def __post_init__(self):
        if self.bounded == "yes" and not math.isfinite(self.sup_estimate):
            raise ConfigError("bounded=yes requires a finite sup estimate")
        if self.compact == "yes" and self.bounded != "yes":
            raise ConfigError("compact=yes implies bounded=yes")

    def to_json(self) -> dict:
        return {"ratio_sequence": list(self.ratio_sequence),
                "bounded": self.bounded, "compact": self.compact,
                "sup_estimate": ("inf" if math.isinf(self.sup_estimate)
                                 else self.sup_estimate)}


def _increment_slope(ratios: np.ndarray, idx: np.ndarray) -> float | None:
    """log-log slope of the positive increments over the tail window."""
    d = np.diff(ratios)
    n = idx[1:].astype(float)
    pos = d > 0
    if pos.sum() < 6:
        return None
    x, y = np.log(n[pos]), np.log(d[pos])
    k = max(6, x.size // 2)
    x, y = x[-k:], y[-k:]
    slope = np.polyfit(x, y, 1)[0]
    return float(slope)


def boundedness_report(w: WeightSequence, q, horizon: int = 200) -> BoundednessReport:
    """Classify T_tb from the first ``horizon`` ratio samples.

    A decaying tail certifies compactness, a flat positive tail certifies
    boundedness, and steadily growing ratios (increment log-log slope
    above -1, the p-series threshold) indicate an unbounded operator.
    Anything ambiguous is reported as inconclusive.
    """
    q = QParam.of(q)
    horizon = w.max_index(int(horizon))
    if horizon < 10:
        raise ConfigError("boundedness classification needs horizon >= 10")
    n = np.arange(1, horizon + 1, dtype=np.int64)
    log_ratios = np.array([-2.0 * k * q.log_abs
                           + w.log_weight(int(k)) - w.log_weight(int(k) - 1)
                           for k in n])
    ratios = np.exp(log_ratios)
    window = ratios[-max(8, ratios.size // 4):]
    sup = float(np.max(ratios))
    zero_tol = 1e-12 * max(1.0, sup)

    bounded, compact = "inconclusive", "inconclusive"
    if np.all(np.diff(window) <= 1e-12 * np.maximum(window[:-1], 1e-300)):
        # non-increasing tail
        if window[-1] <= zero_tol:
            bounded, compact = "yes", "yes"
        else:
            bounded = "yes"
            if window[-1] > 1e-8 * max(1.0, sup):
                compact = "no"
    elif np.all(np.diff(window) >= -1e-12 * np.maximum(window[:-1], 1e-300)):
        # non-decreasing tail: unbounded iff the increments do not decay
        # summably; slope > -1 in log-log means the growth never stops
        if sup > 1e9:
            bounded, compact = "no", "no"
        else:
            slope = _increment_slope(ratios, n)
            if slope is not None and slope > -0.9:
                bounded, compact = "no", "no"
            elif slope is not None and slope < -1.1:
                bounded = "yes"
                if window[-1] > zero_tol:
                    compact = "no"

    if bounded == "no":
        sup = math.inf
    return BoundednessReport(tuple(ratios), bounded, compact, sup)


CoefficientSource = Union[Sequence[complex], Callable[[int], complex]]


def domain_membership(coeff_source: CoefficientSource, w: WeightSequence, q,
                      horizon: int = 400) -> str:
    """Does sum a_n phi_n lie in the domain of the annihilation operator?

    Decides convergence of sum |a_n|^2 |q|^{-2n} w_n / w_{n-1} by a ratio
    test, a harmonic-comparison test and the p-series slope of the terms;
    finite vectors are always members.  Returns 'in_domain',
    'not_in_domain' or 'inconclusive'.
    """
    q = QParam.of(q)
    if not callable(coeff_source):
        return "in_domain"
    horizon = w.max_index(int(horizon))
    n = np.arange(1, horizon + 1, dtype=np.int64)
    log_t = np.empty(n.size)
    for k in n:
        a = complex(coeff_source(int(k)))
        la = math.log(abs(a)) if a != 0 else -math.inf
        log_t[k - 1] = (2.0 * la - 2.0 * k * q.log_abs
                        + w.log_weight(int(k)) - w.log_weight(int(k) - 1))
    if np.all(np.isneginf(log_t[-(n.size // 4):])):
        return "in_domain"          # effectively finite support

    win = slice(-max(16, n.size // 4), None)
    dratio = np.diff(log_t)
    dwin = dratio[np.isfinite(dratio)][win]
    if dwin.size >= 8:
        # geometric decay only counts when the ratio is not drifting upward,
        # otherwise 1 - 1/n style ratios masquerade as geometric
        if np.max(dwin) < math.log(0.999) and np.max(np.diff(dwin)) <= 1e-12:
            return "in_domain"
        if np.min(dwin) > math.log(1.001):
            return "not_in_domain"  # terms grow geometrically

    # harmonic comparison: liminf n * t_n > 0 forces divergence
    log_nt = log_t + np.log(n)
    tail = log_nt[win]
    if np.min(tail) > math.log(1e-3) and tail[-1] >= tail[0] - 0.5:
        return "not_in_domain"

    # p-series slope of log t against log n
    x, y = np.log(n[win]), log_t[win]
    finite = np.isfinite(y)
    if finite.sum() >= 8:
        slope = float(np.polyfit(x[finite], y[finite], 1)[0])
        if slope < -1.1:
            return "in_domain"
        if slope > -0.9:
            return "not_in_domain"
    return "inconclusive"
