"""Exact arithmetic in the Manin plane.

Elements are finite complex combinations of normal-ordered monomials
theta^i thetabar^j subject to theta*thetabar = q*thetabar*theta.  Products
only ever multiply coefficients and shift integer powers of q, so each
coefficient is kept as a pair (value, q-exponent) and the numeric power of
q is applied as late as possible; large exponents therefore never saturate
a double during normal ordering.

The sesquilinear form <theta^i thetabar^j, theta^k thetabar^l>
= w_{i+l} delta_{i-j,k-l} (antilinear in the first slot) and the induced
projection P onto the holomorphic subalgebra live here too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, NamedTuple, Tuple

from .errors import ConfigError, InputTooLargeError
from .weights import QParam, WeightSequence

# exponents past this point are a configuration mistake, not a computation
_MAX_EXPONENT = 2**31


class ManinMonomial(NamedTuple):
    """Normal-ordered basis monomial theta^i thetabar^j."""

    i: int
    j: int

    def degree(self) -> int:
        return self.i - self.j


@dataclass(frozen=True)
class QCoeff:
    """A coefficient value * q**qexp with the q power kept symbolic."""

    value: complex
    qexp: int = 0

    def evaluate(self, q: QParam) -> complex:
        if self.qexp == 0:
            return self.value
        return self.value * q.power(self.qexp)

    def scaled(self, z: complex) -> "QCoeff":
        return QCoeff(self.value * z, self.qexp)


def _merge(a: QCoeff, b: QCoeff, q: QParam) -> QCoeff:
    """Sum of two lazy coefficients on the same monomial.

    The common base exponent is chosen so the applied factor |q|**delta
    never exceeds 1, keeping the fold overflow-free.
    """
    if a.qexp == b.qexp:
        return QCoeff(a.value + b.value, a.qexp)
    base = max(a.qexp, b.qexp) if q.abs >= 1.0 else min(a.qexp, b.qexp)
    return QCoeff(a.value * q.power(a.qexp - base) + b.value * q.power(b.qexp - base),
                  base)


class ManinElement:
    """A finite combination of normal-ordered monomials for a fixed q."""

    __slots__ = ("q", "terms")

    def __init__(self, q, terms: Dict[ManinMonomial, QCoeff] | None = None):
        self.q = QParam.of(q)
        pruned = {}
        for mon, coeff in (terms or {}).items():
            mon = ManinMonomial(int(mon[0]), int(mon[1]))
            if mon.i < 0 or mon.j < 0:
                raise ConfigError(f"monomial exponents must be non-negative, got {mon}")
            if not isinstance(coeff, QCoeff):
                coeff = QCoeff(complex(coeff))
            if coeff.value != 0:
                pruned[mon] = coeff
        # deterministic lexicographic (i, j) ordering for iteration/serialization
        self.terms = dict(sorted(pruned.items()))

    # -- constructors ------------------------------------------------------

    @classmethod
    def monomial(cls, q, i: int, j: int, coeff: complex = 1.0) -> "ManinElement":
        return cls(q, {ManinMonomial(i, j): QCoeff(complex(coeff))})

    @classmethod
    def one(cls, q) -> "ManinElement":
        return cls.monomial(q, 0, 0)

    @classmethod
    def theta(cls, q, power: int = 1) -> "ManinElement":
        return cls.monomial(q, power, 0)

    @classmethod
    def theta_bar(cls, q, power: int = 1) -> "ManinElement":
        return cls.monomial(q, 0, power)

    # -- inspection --------------------------------------------------------

    def coefficient(self, i: int, j: int) -> complex:
        """Numeric coefficient of theta^i thetabar^j (q power applied)."""
        c = self.terms.get(ManinMonomial(i, j))
        return 0j if c is None else c.evaluate(self.q)

    def lazy_coefficient(self, i: int, j: int) -> QCoeff | None:
        return self.terms.get(ManinMonomial(i, j))

    def is_holomorphic(self) -> bool:
        return all(m.j == 0 for m in self.terms)

    def __iter__(self) -> Iterable[Tuple[ManinMonomial, QCoeff]]:
        return iter(self.terms.items())

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ManinElement):
            return NotImplemented
        if self.q.value != other.q.value or self.terms.keys() != other.terms.keys():
            return False
        return all(self.coefficient(*m) == other.coefficient(*m) for m in self.terms)

    def __hash__(self):
        return hash((self.q.value, tuple(self.terms)))

    def allclose(self, other: "ManinElement", rtol: float = 1e-12) -> bool:
        if self.q.value != other.q.value:
            return False
        monomials = set(self.terms) | set(other.terms)
        for m in monomials:
            a, b = self.coefficient(*m), other.coefficient(*m)
            if abs(a - b) > rtol * max(abs(a), abs(b), 1e-300):
                return False
        return True

    def __repr__(self):
        if not self.terms:
            return f"ManinElement(q={self.q.value}, 0)"
        bits = []
        for mon, c in self.terms.items():
            qtag = "" if c.qexp == 0 else f"*q^{c.qexp}"
            bits.append(f"({c.value}{qtag})*th^{mon.i}tb^{mon.j}")
        return f"ManinElement(q={self.q.value}, {' + '.join(bits)})"

    # -- arithmetic --------------------------------------------------------

    def _same_q(self, other: "ManinElement") -> None:
        if self.q.value != other.q.value:
            raise ConfigError("cannot combine elements over different q")

    def __add__(self, other: "ManinElement") -> "ManinElement":
        self._same_q(other)
        out = dict(self.terms)
        for mon, c in other.terms.items():
            out[mon] = _merge(out[mon], c, self.q) if mon in out else c
        return ManinElement(self.q, out)

    def __sub__(self, other: "ManinElement") -> "ManinElement":
        return self + other.scalar_mul(-1.0)

    def scalar_mul(self, z: complex) -> "ManinElement":
        return ManinElement(self.q, {m: c.scaled(z) for m, c in self.terms.items()})

    def __rmul__(self, z):
        if isinstance(z, (int, float, complex)):
            return self.scalar_mul(z)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self.scalar_mul(other)
        if isinstance(other, ManinElement):
            return normal_order_product(self, other)
        return NotImplemented

    # -- serialization -----------------------------------------------------

    def to_json(self) -> list:
        return [{"i": m.i, "j": m.j,
                 "re": self.coefficient(m.i, m.j).real,
                 "im": self.coefficient(m.i, m.j).imag}
                for m in self.terms]

    @classmethod
    def from_json(cls, q, records: list) -> "ManinElement":
        terms: Dict[ManinMonomial, QCoeff] = {}
        for r in records:
            mon = ManinMonomial(int(r["i"]), int(r["j"]))
            c = QCoeff(complex(float(r["re"]), float(r["im"])))
            terms[mon] = _merge(terms[mon], c, QParam.of(q)) if mon in terms else c
        return cls(q, terms)


def normal_order_product(a: ManinElement, b: ManinElement) -> ManinElement:
    """The algebra product, returned in normal order.

    On monomials: theta^i tb^j * theta^k tb^l = q^{-jk} theta^{i+k} tb^{j+l},
    since each of the j*k adjacent swaps tb*theta -> q^{-1} theta*tb
    contributes one inverse power of q.  Extended bilinearly.
    """
    a._same_q(b)
    q = a.q
    out: Dict[ManinMonomial, QCoeff] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            i, j = ma.i + mb.i, ma.j + mb.j
            if i > _MAX_EXPONENT or j > _MAX_EXPONENT:
                raise InputTooLargeError(f"monomial exponent overflow at ({i}, {j})")
            e = ca.qexp + cb.qexp - ma.j * mb.i
            if abs(e) > _MAX_EXPONENT:
                raise InputTooLargeError(f"q exponent overflow at {e}")
            term = QCoeff(ca.value * cb.value, e)
            mon = ManinMonomial(i, j)
            out[mon] = _merge(out[mon], term, q) if mon in out else term
    return ManinElement(q, out)


def sesquilinear_form(a: ManinElement, b: ManinElement, w: WeightSequence) -> complex:
    """<a, b> per the defining rule, antilinear in the first slot."""
    a._same_q(b)
    total = 0j
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            if ma.degree() != mb.degree():
                continue
            total += (ca.evaluate(a.q).conjugate()
                      * cb.evaluate(b.q)
                      * w.weight(ma.i + mb.j))
    return total


def project_P(a: ManinElement, w: WeightSequence) -> ManinElement:
    """Projection onto the holomorphic subalgebra.

    P(theta^i tb^j) = (w_i / w_{i-j}) theta^{i-j} for i >= j and 0 otherwise;
    at most one term of the defining sum survives, so this is exact.
    """
    out: Dict[ManinMonomial, QCoeff] = {}
    for mon, c in a.terms.items():
        k = mon.i - mon.j
        if k < 0:
            continue
        wi, wk = w.weight(mon.i), w.weight(k)
        if math.isfinite(wi) and math.isfinite(wk):
            factor = wi / wk
        else:
            factor = math.exp(w.log_weight(mon.i) - w.log_weight(k))
        term = c.scaled(factor)
        tgt = ManinMonomial(k, 0)
        out[tgt] = _merge(out[tgt], term, a.q) if tgt in out else term
    return ManinElement(a.q, out)
