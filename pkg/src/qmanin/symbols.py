"""Symbol calculus: lower symbols, coherent state quantization, and the
secondary Toeplitz operators on the generalized Segal-Bargmann basis.

Upper symbols are restricted to the polynomial class spanned by
lambda^a conj(lambda)^b: every identity proved for them is exact under a
moment-matched quadrature with enough angular points, so the operators
built here are quadrature-exact rather than approximate.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from .coherent import coherent_coefficients, coherent_norm_sq
from .errors import ConfigError, InsufficientQuadratureError, WindowTooSmallError
from .kernels import power_matrix, weighted_gram
from .measure import RadialQuadrature, polar_grid
from .operators import OperatorMeta, TruncatedOperator
from .weights import QParam, WeightSequence


def split_terms(text: str) -> list[str]:
    """Split on '+' at paren depth zero, so complex coefficients survive."""
    out, depth, cur = [], 0, []
    for ch in str(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth = max(0, depth - 1)
        if ch == "+" and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


class PolynomialSymbol:
    """A finite sum  f(lambda) = sum c_{a,b} lambda^a conj(lambda)^b."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Dict[Tuple[int, int], complex]):
        clean = {}
        for (a, b), c in coeffs.items():
            a, b, c = int(a), int(b), complex(c)
            if a < 0 or b < 0:
                raise ConfigError("symbol powers must be non-negative")
            if c != 0:
                clean[(a, b)] = c
        self.coeffs = dict(sorted(clean.items()))

    @classmethod
    def one(cls) -> "PolynomialSymbol":
        return cls({(0, 0): 1.0})

    @classmethod
    def lam(cls) -> "PolynomialSymbol":
        return cls({(1, 0): 1.0})

    @classmethod
    def lam_conj(cls) -> "PolynomialSymbol":
        return cls({(0, 1): 1.0})

    @classmethod
    def abs_sq(cls) -> "PolynomialSymbol":
        return cls({(1, 1): 1.0})

    @property
    def degree(self) -> int:
        return max((a + b for a, b in self.coeffs), default=0)

    def conjugate(self) -> "PolynomialSymbol":
        return PolynomialSymbol({(b, a): c.conjugate()
                                 for (a, b), c in self.coeffs.items()})

    def scaled(self, z: complex) -> "PolynomialSymbol":
        return PolynomialSymbol({k: z * c for k, c in self.coeffs.items()})

    def __add__(self, other: "PolynomialSymbol") -> "PolynomialSymbol":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0j) + c
        return PolynomialSymbol(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, PolynomialSymbol) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs.items()))

    def evaluate(self, lam):
        lam = np.asarray(lam, dtype=complex)
        out = np.zeros_like(lam)
        for (a, b), c in self.coeffs.items():
            out = out + c * lam**a * np.conj(lam) ** b
        return out if out.ndim else complex(out)

    def describe(self) -> str:
        if not self.coeffs:
            return "0"
        bits = []
        for (a, b), c in self.coeffs.items():
            la = f"L^{a}" if a else ""
            lc = f"Lc^{b}" if b else ""
            core = " ".join(x for x in (la, lc) if x) or "1"
            prefix = "" if c == 1 else f"({c:g})*" if c.imag == 0 else f"({c})*"
            bits.append(f"{prefix}{core}")
        return " + ".join(bits)

    _TERM_RE = re.compile(
        r"^\s*(?:\(\s*(?P<coeff>[^)]+)\s*\)\s*\*?\s*)?"
        r"(?:L\^(?P<a>\d+))?\s*(?:Lc\^(?P<b>\d+))?\s*(?P<unit>1)?\s*$")

    @classmethod
    def parse(cls, text: str) -> "PolynomialSymbol":
        """Tiny grammar: terms `(coeff) L^a Lc^b` joined by '+'."""
        coeffs: Dict[Tuple[int, int], complex] = {}
        for raw in split_terms(text):
            m = cls._TERM_RE.match(raw)
            if not m or (m.group("a") is None and m.group("b") is None
                         and m.group("unit") is None and m.group("coeff") is None):
                raise ConfigError(f"cannot parse symbol term {raw!r}")
            c = complex(m.group("coeff").replace(" ", "")) if m.group("coeff") else 1.0
            a = int(m.group("a") or 0)
            b = int(m.group("b") or 0)
            key = (a, b)
            coeffs[key] = coeffs.get(key, 0j) + c
        return cls(coeffs)


@dataclass(frozen=True)
class SymbolValueGrid:
    """Lower-symbol samples over a lambda grid."""

    points: np.ndarray
    values: np.ndarray
    label: str

    def to_csv(self) -> str:
        lines = ["re_lambda,im_lambda,re_value,im_value"]
        for z, v in zip(self.points, self.values):
            lines.append(f"{float(z.real)!r},{float(z.imag)!r},"
                         f"{float(v.real)!r},{float(v.imag)!r}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# lower (covariant) symbols
# ---------------------------------------------------------------------------

def lower_symbol(A: TruncatedOperator, lam: complex, w: WeightSequence, q,
                 normalized: bool = True, tol: float = 1e-14,
                 return_error: bool = False):
    """<phi_lambda, A phi_lambda> on the truncation (Berezin when normalized).

    The coherent state is truncated at the certified tolerance; its cutoff
    must fit inside the operator window, otherwise the quadratic form
    would silently ignore certified mass (WindowTooSmallError).  The
    certified truncation error of the quadratic form is available via
    ``return_error``.
    """
    q = QParam.of(q)
    state = coherent_coefficients(lam, w, q, tol=tol)
    n = state.n_cutoff
    if n > A.cutoff:
        raise WindowTooSmallError(
            f"operator window N={A.cutoff} cannot hold the coherent state "
            f"(needs n <= {n} at tol={tol:g})")
    b, m = state.scaled_coefficients()
    vec = np.zeros(A.dim, dtype=complex)
    vec[: n + 1] = b
    quad_form = complex(vec.conj() @ (A.matrix @ vec)) * math.exp(2.0 * m)
    # certified error: tail mass times the operator's column reach
    op_norm = float(np.linalg.norm(A.matrix, 2))
    err = 2.0 * math.sqrt(max(state.tail_bound, 0.0) * state.norm_sq) * op_norm
    if normalized:
        value = quad_form / state.norm_sq
        err = err / state.norm_sq
    else:
        value = quad_form
    return (value, err) if return_error else value


def lower_symbol_grid(A: TruncatedOperator, points, w: WeightSequence, q,
                      normalized: bool = True, tol: float = 1e-14) -> SymbolValueGrid:
    pts = np.asarray(points, dtype=complex).ravel()
    vals = np.array([lower_symbol(A, z, w, q, normalized=normalized, tol=tol)
                     for z in pts])
    tag = "normalized" if normalized else "unnormalized"
    return SymbolValueGrid(pts, vals, f"{tag} lower symbol of {A.meta.symbol}")


# ---------------------------------------------------------------------------
# coherent state quantization and the secondary Toeplitz operators
# ---------------------------------------------------------------------------

def _entry_integrals(f: PolynomialSymbol, quad: RadialQuadrature,
                     N: int, angular_points: int) -> np.ndarray:
    """I[k, n] = integral of f(lambda) lambda^k conj(lambda)^n d rho,
    evaluated on the node x angle grid."""
    z, wts = polar_grid(quad, angular_points)
    V = power_matrix(z, N)
    fw = (f.evaluate(z) * wts).astype(complex)
    return weighted_gram(V, fw)


def _check_reach(f: PolynomialSymbol, quad: RadialQuadrature, N: int) -> int:
    """Validate quadrature order and return the angular point count."""
    reach = N + f.degree
    if 2 * quad.order - 1 < reach:
        raise InsufficientQuadratureError(
            f"radial order {quad.order} matches moments up to "
            f"{2 * quad.order - 1} but the integrands reach degree {reach}")
    return 2 * reach + 1


def _prefactors(w: WeightSequence, q: QParam, N: int) -> np.ndarray:
    """pref_k = q^{k(k+1)/2} w_k^{-1/2}."""
    k = np.arange(N + 1, dtype=float)
    tri = 0.5 * k * (k + 1.0)
    logmag = tri * q.log_abs - 0.5 * w.log_weights(0, N + 1)
    return np.exp(logmag) * np.exp(1j * tri * q.arg)


def quantize_cs(f: PolynomialSymbol, quad: RadialQuadrature,
                w: WeightSequence, q, N: int,
                angular_points: int | None = None) -> TruncatedOperator:
    """Matrix of the coherent state quantization of f on phi_0..phi_N.

    Entry (k, n) = pref_k conj(pref_n) * I[k, n]; exact for polynomial f
    whenever the radial order covers the reach and the angular grid has at
    least 2*(N + deg f) + 1 points (the default).
    """
    q = QParam.of(q)
    auto_a = _check_reach(f, quad, N)
    A = auto_a if angular_points is None else int(angular_points)
    if A < auto_a:
        raise InsufficientQuadratureError(
            f"need >= {auto_a} angular points for exactness, got {A}")
    I = _entry_integrals(f, quad, N, A)
    pref = _prefactors(w, q, N)
    mat = pref[:, None] * pref.conj()[None, :] * I
    return TruncatedOperator(mat, OperatorMeta(
        symbol=f"Qcs[{f.describe()}]", weights=w.describe(), q=q.value, exact=True))


def secondary_toeplitz(f: PolynomialSymbol, quad: RadialQuadrature,
                       w: WeightSequence, q, N: int,
                       angular_points: int | None = None) -> TruncatedOperator:
    """Matrix of S_f = P_K(f .) on the orthonormal basis e_j of the
    generalized Segal-Bargmann space.

    The basis images satisfy e_j = conj(a_j), so the matrix elements
    <e_j, f e_k> coincide formula-for-formula with the quantization
    entries; only the basis tag differs.
    """
    q = QParam.of(q)
    auto_a = _check_reach(f, quad, N)
    A = auto_a if angular_points is None else int(angular_points)
    if A < auto_a:
        raise InsufficientQuadratureError(
            f"need >= {auto_a} angular points for exactness, got {A}")
    I = _entry_integrals(f, quad, N, A)
    pref = _prefactors(w, q, N)
    mat = pref[:, None] * pref.conj()[None, :] * I
    return TruncatedOperator(mat, OperatorMeta(
        symbol=f"S[{f.describe()}]", weights=w.describe(), q=q.value, exact=True,
        basis="B_AH"))


def quantize_cs_norm_bound(f: PolynomialSymbol, quad: RadialQuadrature,
                           w: WeightSequence, q,
                           angular_points: int | None = None,
                           norm_tol: float = 1e-12) -> float:
    """Quadrature estimate of ||f||_1 in L^1(||phi_lambda||^2 d rho).

    Dominates the operator norm of the quantization of f; |f| is not a
    polynomial, so this is an estimate, not an exact integral.
    """
    q = QParam.of(q)
    A = int(angular_points) if angular_points else max(64, 4 * f.degree + 1)
    alpha = 2.0 * math.pi * np.arange(A) / A
    total = 0.0
    for t, mu in zip(quad.nodes, quad.masses):
        r = math.sqrt(t)
        nsq = coherent_norm_sq(r, w, q, tol=norm_tol)
        pts = r * np.exp(1j * alpha)
        mean_abs = float(np.mean(np.abs(f.evaluate(pts))))
        total += math.pi * mu * nsq * mean_abs
    return total
