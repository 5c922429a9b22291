"""Command-line front end.

One JSON config document (file or stdin) drives every subcommand, with
``--q/--weights/--cutoff/--tol`` overrides; artifacts are deterministic
JSON/CSV files under ``--out`` that embed the fully resolved config.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 out-of-phase-space input, 4 solver conditioning failure.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import acceptance, jsonio
from .algebra import ManinElement
from .coherent import (coherent_coefficients, coherent_norm_sq, eigen_residual,
                       kernel, radius_of_convergence)
from .errors import ConfigError, QmaninError
from .measure import (MomentSequence, closed_form_density,
                      gauss_quadrature_from_moments, norm_divergence_witness,
                      verify_moments, verify_resolution_identity)
from .operators import (adjoint_annihilation_matrix, annihilation_matrix,
                        creation_matrix, number_matrix, toeplitz_matrix)
from .paragrassmann import ParagrassmannConfig, pg_annihilation, pg_structure_report
from .symbols import (PolynomialSymbol, lower_symbol_grid, quantize_cs,
                      secondary_toeplitz, split_terms)
from .weights import QParam, WeightSequence


def _parse_complex(text) -> complex:
    if isinstance(text, (int, float, complex)):
        return complex(text)
    if isinstance(text, (list, tuple)) and len(text) == 2:
        return complex(float(text[0]), float(text[1]))
    s = str(text).strip()
    if "," in s:
        re_, im_ = s.split(",", 1)
        return complex(float(re_), float(im_))
    try:
        return complex(s.replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(f"cannot parse complex number {text!r}") from exc


def _parse_weights(spec) -> WeightSequence:
    if isinstance(spec, WeightSequence):
        return spec
    if isinstance(spec, dict):
        return WeightSequence.from_json(spec)
    s = str(spec).strip()
    if ":" in s:
        kind, arg = s.split(":", 1)
        kind = kind.strip()
        if kind == "constant":
            return WeightSequence.constant(float(arg))
        if kind == "power-factorial":
            return WeightSequence.power_factorial(float(arg))
        if kind == "explicit":
            return WeightSequence.explicit([float(x) for x in arg.split(",")])
        raise ConfigError(f"unknown weight shorthand {s!r}")
    if s == "factorial":
        return WeightSequence.factorial()
    if s == "constant":
        return WeightSequence.constant()
    raise ConfigError(f"unknown weight spec {s!r}")


_MANIN_TERM = re.compile(
    r"^\s*(?:\(\s*(?P<coeff>[^)]+)\s*\)\s*\*?\s*)?"
    r"(?:th\^(?P<i>\d+))?\s*(?:tb\^(?P<j>\d+))?\s*(?P<unit>1)?\s*$")


def parse_manin_symbol(text: str, q) -> ManinElement:
    """Symbol grammar: terms `(coeff) th^i tb^j` joined by '+'.

    Bare `th`/`tb` mean power one, e.g. "th^2 tb^1 + (0.5) 1"."""
    out = ManinElement(q, {})
    for raw in split_terms(str(text)):
        piece = raw.strip()
        piece = re.sub(r"\bth\b(?!\^)", "th^1", piece)
        piece = re.sub(r"\btb\b(?!\^)", "tb^1", piece)
        m = _MANIN_TERM.match(piece)
        if not m or (m.group("i") is None and m.group("j") is None
                     and m.group("unit") is None and m.group("coeff") is None):
            raise ConfigError(f"cannot parse symbol term {raw!r}")
        coeff = _parse_complex(m.group("coeff")) if m.group("coeff") else 1.0
        out = out + ManinElement.monomial(q, int(m.group("i") or 0),
                                          int(m.group("j") or 0), coeff)
    return out


@dataclass
class RunConfig:
    """Resolved run configuration; every artifact embeds ``resolved()``."""

    weights: WeightSequence = field(default_factory=WeightSequence.factorial)
    q: complex = 1.0 + 0j
    cutoff: int = 16
    tol: float = 1e-12
    order: int = 12
    angular: int = 25
    grid: dict = field(default_factory=lambda: {"rmax": 1.5, "nr": 10, "ntheta": 8})
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.tol <= 0:
            raise ConfigError("tolerance must be positive")
        if self.cutoff < 0 or self.order < 1 or self.angular < 1:
            raise ConfigError("cutoff, order and angular points must be positive")
        QParam.of(self.q)

    @classmethod
    def load(cls, args) -> "RunConfig":
        doc = {}
        if args.config:
            raw = (sys.stdin.read() if args.config == "-"
                   else Path(args.config).read_text())
            try:
                doc = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config is not valid JSON: {exc}") from exc
            if not isinstance(doc, dict):
                raise ConfigError("config document must be a JSON object")
        if args.weights is not None:
            doc["weights"] = args.weights
        if args.q is not None:
            doc["q"] = args.q
        if args.cutoff is not None:
            doc["cutoff"] = args.cutoff
        if args.tol is not None:
            doc["tol"] = args.tol
        known = {"weights", "q", "cutoff", "tol", "order", "angular", "grid"}
        try:
            return cls(
                weights=_parse_weights(doc.get("weights", "factorial")),
                q=_parse_complex(doc.get("q", 1.0)),
                cutoff=int(doc.get("cutoff", 16)),
                tol=float(doc.get("tol", 1e-12)),
                order=int(doc.get("order", 12)),
                angular=int(doc.get("angular", 25)),
                grid=dict(doc.get("grid", {"rmax": 1.5, "nr": 10, "ntheta": 8})),
                extra={k: v for k, v in doc.items() if k not in known},
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid config value: {exc}") from exc

    def resolved(self) -> dict:
        return {
            "weights": self.weights.to_json(),
            "q": [self.q.real, self.q.imag],
            "cutoff": self.cutoff,
            "tol": self.tol,
            "order": self.order,
            "angular": self.angular,
            "grid": self.grid,
            **{k: v for k, v in sorted(self.extra.items())},
        }


def _grid_points(grid: dict) -> np.ndarray:
    rmax = float(grid.get("rmax", 1.5))
    rmin = float(grid.get("rmin", rmax / float(grid.get("nr", 10))))
    nr = int(grid.get("nr", 10))
    ntheta = int(grid.get("ntheta", 8))
    if nr < 1 or ntheta < 1 or rmax <= 0:
        raise ConfigError("grid needs nr, ntheta >= 1 and rmax > 0")
    radii = np.linspace(rmin, rmax, nr)
    angles = 2.0 * math.pi * np.arange(ntheta) / ntheta
    return (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()


def _write(outdir: Path, name: str, payload) -> Path:
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / name
    if isinstance(payload, str):
        path.write_text(payload)
    else:
        jsonio.write(path, payload)
    print(f"wrote {path}", file=sys.stderr)
    return path


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_radius(cfg: RunConfig, outdir: Path) -> int:
    horizon = int(cfg.extra.get("horizon", 10**15))
    cap = float(cfg.extra.get("cap", 1e6))
    est = radius_of_convergence(cfg.weights, cfg.q, horizon=horizon, cap=cap)
    _write(outdir, "radius.json", {"config": cfg.resolved(), "result": est.to_json()})
    return 0


def _cmd_operator(cfg: RunConfig, outdir: Path) -> int:
    text = str(cfg.extra.get("symbol", "tb^1"))
    g = parse_manin_symbol(text, cfg.q)
    op = toeplitz_matrix(g, cfg.weights, cfg.q, cfg.cutoff)
    _write(outdir, "operator.json", {"config": cfg.resolved(), "result": op.to_json()})
    _write(outdir, "operator.csv", op.to_csv())
    return 0


def _cmd_coherent(cfg: RunConfig, outdir: Path) -> int:
    lam = _parse_complex(cfg.extra.get("lambda", 1.0))
    state = coherent_coefficients(lam, cfg.weights, cfg.q, tol=cfg.tol)
    window = max(cfg.cutoff, state.n_cutoff)
    res = eigen_residual(state, cfg.weights, cfg.q)
    _write(outdir, "coherent.json", {
        "config": cfg.resolved(),
        "result": {"state": state.to_json(),
                   "residual": res.residual,
                   "leakage": res.leakage,
                   "window": window},
    })
    return 0


def _cmd_kernel(cfg: RunConfig, outdir: Path) -> int:
    pts = _grid_points(cfg.grid)
    mu = cfg.extra.get("mu")
    lines = ["re_lambda,im_lambda,re_value,im_value"]
    if mu is None:
        for z in pts:
            v = coherent_norm_sq(z, cfg.weights, cfg.q, tol=cfg.tol)
            lines.append(f"{float(z.real)!r},{float(z.imag)!r},{float(v)!r},0.0")
    else:
        mu = _parse_complex(mu)
        for z in pts:
            v = kernel(mu, z, cfg.weights, cfg.q, tol=cfg.tol)
            lines.append(f"{float(z.real)!r},{float(z.imag)!r},"
                         f"{float(v.real)!r},{float(v.imag)!r}")
    _write(outdir, "kernel.csv", "\n".join(lines) + "\n")
    _write(outdir, "kernel.json", {"config": cfg.resolved(),
                                   "result": {"points": len(pts),
                                              "csv": "kernel.csv"}})
    return 0


def _cmd_measure(cfg: RunConfig, outdir: Path) -> int:
    basis = int(cfg.extra.get("basis", 10))
    angular = max(cfg.angular, 2 * basis + 1)
    moments = MomentSequence.from_weights(cfg.weights, cfg.q, 2 * cfg.order - 1)
    quad = gauss_quadrature_from_moments(moments, cfg.order)
    nmax = min(2 * cfg.order - 1, 20)
    mom_rep = verify_moments(quad, cfg.weights, cfg.q, nmax, tol=cfg.tol)
    gram_rep = verify_resolution_identity(quad, cfg.weights, cfg.q, basis,
                                          angular, tol=cfg.tol)
    witness = norm_divergence_witness(quad, cfg.weights, cfg.q, nmax)
    density = closed_form_density(cfg.weights, cfg.q)
    _write(outdir, "measure.json", {
        "config": cfg.resolved(),
        "result": {
            "quadrature": quad.to_json(),
            "closed_form": None if density is None else density.description,
            "moment_check": mom_rep.to_json(),
            "gram_check": gram_rep.to_json(),
            "divergence_witness": witness.to_json(),
        },
    })
    return 0


_NAMED_OPERATORS = {
    "annihilation": annihilation_matrix,
    "creation": creation_matrix,
    "adjoint": adjoint_annihilation_matrix,
}


def _cmd_symbols(cfg: RunConfig, outdir: Path) -> int:
    f = PolynomialSymbol.parse(str(cfg.extra.get("phase_symbol", "L^1")))
    moments = MomentSequence.from_weights(cfg.weights, cfg.q, 2 * cfg.order - 1)
    quad = gauss_quadrature_from_moments(moments, cfg.order)
    qcs = quantize_cs(f, quad, cfg.weights, cfg.q, cfg.cutoff)
    sec = secondary_toeplitz(f, quad, cfg.weights, cfg.q, cfg.cutoff)

    name = str(cfg.extra.get("operator", "annihilation"))
    window = cfg.weights.max_index(int(cfg.extra.get("window", max(96, cfg.cutoff))))
    if name == "number":
        op = number_matrix(window)
    elif name in _NAMED_OPERATORS:
        op = _NAMED_OPERATORS[name](cfg.weights, cfg.q, window)
    else:
        raise ConfigError(f"unknown operator {name!r}; expected one of "
                          f"{sorted(_NAMED_OPERATORS) + ['number']}")
    pts = _grid_points(cfg.grid)
    grid = lower_symbol_grid(op, pts, cfg.weights, cfg.q,
                             normalized=bool(cfg.extra.get("normalized", True)))

    _write(outdir, "quantize_cs.json", {"config": cfg.resolved(),
                                        "result": qcs.to_json()})
    _write(outdir, "quantize_cs.csv", qcs.to_csv())
    _write(outdir, "secondary.json", {"config": cfg.resolved(),
                                      "result": sec.to_json()})
    _write(outdir, "secondary.csv", sec.to_csv())
    _write(outdir, "lower_symbol.csv", grid.to_csv())
    return 0


def _cmd_paragrassmann(cfg: RunConfig, outdir: Path) -> int:
    l = int(cfg.extra.get("l", 3))
    if "pg_weights" in cfg.extra:
        weights = tuple(float(x) for x in cfg.extra["pg_weights"])
    elif cfg.weights.kind == "explicit":
        weights = cfg.weights.table[:l]
    else:
        weights = tuple(cfg.weights.weight(n) for n in range(l))
    pg = ParagrassmannConfig(l, weights, q=cfg.q)
    op = pg_annihilation(pg)
    rep = pg_structure_report(pg)
    _write(outdir, "paragrassmann.json", {
        "config": cfg.resolved(),
        "result": {"l": l, "weights": list(weights),
                   "matrix": op.to_json(), "report": rep.to_json()},
    })
    return 0


def _cmd_verify(cfg: RunConfig, outdir: Path) -> int:
    results = acceptance.run_all()
    for r in results:
        print(r.line())
    _write(outdir, "verify.json", {
        "config": cfg.resolved(),
        "result": [{"number": r.number, "name": r.name, "passed": r.passed,
                    "detail": r.detail} for r in results],
    })
    return 0 if all(r.passed for r in results) else 1


_DISPATCH = {
    "radius": _cmd_radius,
    "operator": _cmd_operator,
    "coherent": _cmd_coherent,
    "kernel": _cmd_kernel,
    "measure": _cmd_measure,
    "symbols": _cmd_symbols,
    "paragrassmann": _cmd_paragrassmann,
    "verify": _cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    # shared flags accepted before or after the subcommand; SUPPRESS keeps a
    # subparser from clobbering a value parsed by the main parser
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS,
                        help="JSON config file, or '-' for stdin")
    common.add_argument("--q", default=argparse.SUPPRESS,
                        help="override q, e.g. '0.5+0.5j' or 're,im'")
    common.add_argument("--weights", default=argparse.SUPPRESS,
                        help="override weights: factorial | constant:C | "
                             "power-factorial:S | explicit:w0,w1,...")
    common.add_argument("--cutoff", type=int, default=argparse.SUPPRESS,
                        help="override the matrix cutoff N")
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                        help="override the tolerance")
    common.add_argument("--out", default=argparse.SUPPRESS,
                        help="artifact output directory (default '.')")

    parser = argparse.ArgumentParser(
        prog="qmanin",
        description="Toeplitz quantization of the Manin plane: operators, "
                    "coherent states, measures and symbol calculus.",
        parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("radius", "estimate the phase-space radius"),
        ("operator", "Toeplitz matrix of a Manin symbol (config key 'symbol')"),
        ("coherent", "coherent state vector and eigen residual (key 'lambda')"),
        ("kernel", "kernel / squared-norm grid as CSV (optional key 'mu')"),
        ("measure", "moment-solved quadrature plus certifications"),
        ("symbols", "quantization, secondary Toeplitz and lower-symbol grids"),
        ("paragrassmann", "nilpotent degenerate case structure report (key 'l')"),
        ("verify", "run the full acceptance suite"),
    ]:
        sub.add_parser(name, help=help_text, parents=[common])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for name in ("config", "q", "weights", "cutoff", "tol"):
        if not hasattr(args, name):
            setattr(args, name, None)
    try:
        cfg = RunConfig.load(args)
        return _DISPATCH[args.command](cfg, Path(getattr(args, "out", ".") or "."))
    except QmaninError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return getattr(exc, "exit_code", 2)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
