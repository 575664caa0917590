"""Command-line front end.

Examples
--------
::

    csquant well spectrum --which commutator --size 48 --theta 10 --out ev.csv
    csquant well symbol --which q --theta 0.1 --grid 0.05:3.09:50,-10:10:41
    csquant circle op --which shift --size 8 --epsilon 0.5
    csquant verify --level full
"""
from __future__ import annotations

import argparse
import io
import math
import os
import sys
import tempfile
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _core, circle, kernels, spectra, symbols, verify, well
from .errors import CSQuantError, TruncationWarning
from .params import Parameters, default_tol

SYSTEMS = ("circle", "well")
COMMANDS = ("op", "spectrum", "symbol", "dispersion", "verify", "norm")

WELL_OPS = {
    "q": well.op_position,
    "q2": well.op_position_squared,
    "p": well.op_momentum,
    "p2": well.op_p_squared,
    "H": well.op_hamiltonian,
    "commutator": well.commutator_qp,
}
WELL_TIME_OPS = ("U", "q(t)")
CIRCLE_OPS = ("q", "p", "shift", "commutator")
WELL_SYMBOLS = ("q", "p", "q(t)", "commutator", "norm")
CIRCLE_SYMBOLS = ("q", "p", "shift", "commutator")
DISPERSIONS = ("dQ", "dP", "dQdP")

DEFAULT_WHICH = {"op": "q", "spectrum": "q", "symbol": "q", "dispersion": "dQdP", "norm": "norm"}
DEFAULT_SIZE = {"op": 16, "spectrum": 64, "symbol": 32, "dispersion": 32, "norm": 32}
CIRCLE_GRID_POINTS = 101


class ConfigError(CSQuantError):
    pass


@dataclass
class RunConfig:
    system: str | None
    command: str
    which: str | None = None
    N: int | None = None
    theta: float | None = None
    epsilon: float | None = None
    hbar: float | None = None
    length: float | None = None
    mass: float | None = None
    grid: tuple | None = None
    t: float | None = None
    out: str | None = None
    tol: float | None = None
    level: str = "fast"
    params: Parameters = field(init=False, repr=False, default=None)

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}; expected one of {COMMANDS}")
        if self.command == "verify":
            if self.level not in ("fast", "full"):
                raise ConfigError(f"--level must be fast or full, got {self.level!r}")
            return self
        if self.system not in SYSTEMS:
            raise ConfigError(f"command {self.command!r} needs a system: circle or well")
        if self.which is None:
            self.which = DEFAULT_WHICH[self.command]
        allowed = self._allowed_tags()
        if self.which not in allowed:
            raise ConfigError(f"invalid tag {self.which!r} for {self.system} {self.command}; expected one of {allowed}")
        if self.N is None:
            self.N = DEFAULT_SIZE[self.command]
        if self.N < 1:
            raise ConfigError(f"--size must be a positive integer, got {self.N}")
        if self.tol is not None and not (math.isfinite(self.tol) and self.tol > 0):
            raise ConfigError(f"--tol must be a finite positive number, got {self.tol}")
        if self.t is not None and not math.isfinite(self.t):
            raise ConfigError(f"--time must be finite, got {self.t}")
        if self.system == "circle":
            if self.theta is not None:
                raise ConfigError("--theta applies to the well; the circle uses --epsilon")
            if self.epsilon is None:
                self.epsilon = 1.0
            if not (math.isfinite(self.epsilon) and self.epsilon > 0):
                raise ConfigError(f"--epsilon must be a finite positive number, got {self.epsilon}")
            self.params = Parameters(epsilon=self.epsilon)
        else:
            if self.epsilon is not None:
                raise ConfigError("--epsilon applies to the circle; the well uses --theta")
            overrides = {k: v for k, v in (("hbar", self.hbar), ("length", self.length), ("mass", self.mass), ("theta", self.theta)) if v is not None}
            try:
                self.params = Parameters(**overrides)
            except (ValueError, TypeError) as exc:
                raise ConfigError(str(exc)) from None
        if self.grid is not None:
            (q0, q1, nq), (p0, p1, npts) = self.grid
            if nq < 1 or npts < 1:
                raise ConfigError("grid point counts must be positive")
            if self.system == "well" and self.command != "op" and not (0 < q0 <= q1 < self.params.length):
                raise ConfigError(f"grid q range must lie strictly inside (0, {self.params.length:.17g})")
        return self

    def _allowed_tags(self):
        if self.command == "op":
            return tuple(WELL_OPS) + WELL_TIME_OPS if self.system == "well" else CIRCLE_OPS
        if self.command == "spectrum":
            return tuple(WELL_OPS) if self.system == "well" else CIRCLE_OPS
        if self.command == "symbol":
            return WELL_SYMBOLS if self.system == "well" else CIRCLE_SYMBOLS
        if self.command == "dispersion":
            if self.system == "circle":
                return ()
            return DISPERSIONS
        return ("norm",)


# --- output ----------------------------------------------------------------------

def _fmt(x) -> str:
    return "%.17g" % x


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(c if isinstance(c, str) else _fmt(c) if isinstance(c, float) else str(c) for c in row) + "\n")
    return buf.getvalue()


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".csquant-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _meta_text(cfg: RunConfig, extra: dict) -> str:
    P = cfg.params
    meta = {
        "system": cfg.system,
        "command": cfg.command,
        "which": cfg.which,
        "N": cfg.N,
    }
    if cfg.system == "circle":
        meta["epsilon"] = _fmt(cfg.epsilon)
    else:
        meta.update(
            hbar=_fmt(P.hbar),
            mass=_fmt(P.mass),
            length=_fmt(P.length),
            theta=_fmt(P.theta),
            rho=_fmt(P.rho),
            revival_time=_fmt(P.revival_time),
            mass_convention="default m=1/2" if P.mass == 0.5 else "override",
        )
    meta["time"] = "none" if cfg.t is None else _fmt(cfg.t)
    meta["tol"] = _fmt(cfg.tol if cfg.tol is not None else default_tol())
    if cfg.grid is not None:
        (q0, q1, nq), (p0, p1, npts) = cfg.grid
        meta["grid"] = f"{_fmt(q0)}:{_fmt(q1)}:{nq},{_fmt(p0)}:{_fmt(p1)}:{npts}"
    meta["backend"] = _core.BACKEND
    meta.update(extra)
    return "".join(f"{k}={v}\n" for k, v in meta.items())


# --- commands --------------------------------------------------------------------

def _well_operator(cfg):
    P, N = cfg.params, cfg.N
    if cfg.which == "U":
        return well.evolution_operator(cfg.t or 0.0, P, N)
    if cfg.which == "q(t)":
        return well.heisenberg_position(cfg.t or 0.0, P, N)
    return WELL_OPS[cfg.which](P, N)


def _circle_operator(cfg):
    N, eps = cfg.N, cfg.epsilon
    if cfg.which == "q":
        return circle.op_angle(eps, N)
    if cfg.which == "p":
        return circle.op_momentum_circle(N)
    if cfg.which == "shift":
        return circle.op_shift(eps, N)
    return circle.commutator(circle.op_momentum_circle(N), circle.op_angle(eps, N))


def _cmd_op(cfg):
    if cfg.system == "well":
        A = _well_operator(cfg)
        rows = []
        for kappa, block in ((1, A.block_plus), (-1, A.block_minus)):
            for i in range(A.size):
                for j in range(A.size):
                    z = complex(block[i, j])
                    rows.append((i + 1, j + 1, "+" if kappa > 0 else "-", z.real, z.imag))
        return ("n", "n_prime", "kappa", "re", "im"), rows, {"spin_structure": A.spin_structure}
    A = _circle_operator(cfg)
    rows = [(int(n), int(k), complex(A.element(n, k)).real, complex(A.element(n, k)).imag) for n in A.levels for k in A.levels]
    return ("n", "n_prime", "re", "im"), rows, {}


def _circle_spectrum(A):
    M = np.asarray(A.entries)
    if np.allclose(M, M.conj().T, rtol=0, atol=1e-12):
        return "real", np.sort(np.linalg.eigvalsh(M))
    if np.allclose(M, -M.conj().T, rtol=0, atol=1e-12):
        return "imag", np.sort(np.linalg.eigvalsh(-1j * M))
    raise ConfigError(f"circle operator {A.tag!r} is neither Hermitian nor anti-Hermitian")


def _cmd_spectrum(cfg):
    if cfg.system == "well":
        A = _well_operator(cfg)
        report = spectra.eigvals_skew(A) if cfg.which == "commutator" else spectra.eigvals_symmetric(A)
        kind, ev = report.kind, report.eigenvalues
        extra = {f"summary_{k}": (_fmt(v) if isinstance(v, float) else v) for k, v in report.summary.items()}
        if kind == "imag":
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                frac = spectra.accumulation_fraction(report, cfg.params.hbar)
            extra["summary_accumulation_fraction"] = _fmt(frac)
            if caught:
                extra["summary_warning"] = str(caught[0].message)
    else:
        kind, ev = _circle_spectrum(_circle_operator(cfg))
        extra = {"summary_count": ev.size, "summary_min": _fmt(float(ev.min())), "summary_max": _fmt(float(ev.max()))}
    extra["summary_kind"] = kind
    col = "lambda_imag" if kind == "imag" else "eigenvalue"
    rows = [(i, float(v)) for i, v in enumerate(ev)]
    return ("index", col), rows, extra


def _grid_axes(cfg):
    if cfg.grid is not None:
        (q0, q1, nq), (p0, p1, npts) = cfg.grid
        return np.linspace(q0, q1, nq), np.linspace(p0, p1, npts)
    if cfg.system == "well":
        return symbols.default_grid(cfg.params, cfg.N)
    half = cfg.N / 2.0
    return np.linspace(0.0, 2.0 * math.pi, CIRCLE_GRID_POINTS), np.linspace(-half, half, CIRCLE_GRID_POINTS)


def _grid_rows(qv, pv, values):
    rows = []
    complex_valued = np.iscomplexobj(values)
    for i, q in enumerate(qv):
        for j, p in enumerate(pv):
            v = values[i, j]
            rows.append((float(q), float(p), float(v.real), float(v.imag)) if complex_valued else (float(q), float(p), float(v)))
    header = ("q", "p", "re", "im") if complex_valued else ("q", "p", "value")
    return header, rows


def _well_truncation(cfg, pv):
    tol = cfg.tol if cfg.tol is not None else default_tol()
    return {"levels_used": symbols.levels_needed(pv, cfg.params, tol), "truncation_bound": _fmt(tol)}


def _cmd_symbol(cfg):
    qv, pv = _grid_axes(cfg)
    if cfg.system == "well":
        grid = symbols.symbol_grid(cfg.which, cfg.params, qv, pv, t=cfg.t, tol=cfg.tol)
        header, rows = _grid_rows(qv, pv, grid.values)
        return header, rows, _well_truncation(cfg, pv)
    A = _circle_operator(cfg)
    values = np.empty((qv.size, pv.size), dtype=complex)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", TruncationWarning)
        for i, q in enumerate(qv):
            for j, p in enumerate(pv):
                values[i, j] = circle.lower_symbol_circle(A, q, p, cfg.epsilon)
    tails = [w.message.tail_bound for w in caught if isinstance(w.message, TruncationWarning)]
    if cfg.which != "commutator":
        values = values.real
    header, rows = _grid_rows(qv, pv, values)
    return header, rows, {"truncation_bound": _fmt(max(tails) if tails else 0.0), "truncated_points": len(tails)}


def _cmd_dispersion(cfg):
    qv, pv = _grid_axes(cfg)
    grid = symbols.symbol_grid(cfg.which, cfg.params, qv, pv, tol=cfg.tol)
    header, rows = _grid_rows(qv, pv, grid.values)
    extra = _well_truncation(cfg, pv)
    extra["grid_min"] = _fmt(float(np.min(grid.values)))
    return header, rows, extra


def _cmd_norm(cfg):
    qv, pv = _grid_axes(cfg)
    tol = cfg.tol if cfg.tol is not None else default_tol()
    values = np.empty((qv.size, pv.size))
    worst = 0.0
    for i, q in enumerate(qv):
        for j, p in enumerate(pv):
            kv = kernels.norm_well((q, p), cfg.params, tol) if cfg.system == "well" else kernels.norm_circle_direct(p, cfg.epsilon, tol)
            values[i, j] = kv.value
            worst = max(worst, kv.truncation_bound)
    header, rows = _grid_rows(qv, pv, values)
    return header, rows, {"truncation_bound": _fmt(worst)}


def _cmd_verify(cfg, stdout):
    results = verify.run_checks(cfg.level)
    for r in results:
        print(r.line(), file=stdout)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed", file=stdout)
    return 1 if failed else 0


HANDLERS = {
    "op": _cmd_op,
    "spectrum": _cmd_spectrum,
    "symbol": _cmd_symbol,
    "dispersion": _cmd_dispersion,
    "norm": _cmd_norm,
}


def run(cfg: RunConfig, stdout=None) -> int:
    """Execute a validated configuration; returns the process exit status."""
    stdout = sys.stdout if stdout is None else stdout
    if cfg.command == "verify":
        return _cmd_verify(cfg, stdout)
    header, rows, extra = HANDLERS[cfg.command](cfg)
    text = _csv_text(header, rows)
    if cfg.out is None:
        stdout.write(text)
        return 0
    write_atomic(cfg.out, text)
    write_atomic(cfg.out + ".meta", _meta_text(cfg, extra))
    for k, v in extra.items():
        if k.startswith("summary_"):
            print(f"{k[len('summary_'):]}={v}", file=stdout)
    return 0


# --- argument parsing ----------------------------------------------------------------

def parse_grid(text: str):
    """'qmin:qmax:nq,pmin:pmax:np' -> ((qmin, qmax, nq), (pmin, pmax, np))."""
    try:
        axes = text.split(",")
        if len(axes) != 2:
            raise ValueError
        out = []
        for axis in axes:
            lo, hi, n = axis.split(":")
            lo, hi, n = float(lo), float(hi), int(n)
            if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
                raise ValueError
            out.append((lo, hi, n))
        return tuple(out)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed grid {text!r}; expected qmin:qmax:nq,pmin:pmax:np") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="csquant", description="Coherent-state quantization of the circle and the infinite well.")
    ap.add_argument("words", nargs="+", metavar="[system] command", help=f"system in {SYSTEMS}; command in {COMMANDS}")
    ap.add_argument("--system", choices=SYSTEMS)
    ap.add_argument("--which")
    ap.add_argument("--size", "-N", type=int, dest="N")
    ap.add_argument("--theta", type=float)
    ap.add_argument("--epsilon", type=float)
    ap.add_argument("--hbar", type=float)
    ap.add_argument("--length", type=float)
    ap.add_argument("--mass", type=float)
    ap.add_argument("--grid", type=parse_grid)
    ap.add_argument("--time", type=float, dest="t")
    ap.add_argument("--tol", type=float)
    ap.add_argument("--out")
    ap.add_argument("--level", default="fast", choices=("fast", "full"))
    return ap


def parse_config(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    words = list(ns.words)
    system = ns.system
    if words[0] in SYSTEMS:
        if system is not None and system != words[0]:
            raise ConfigError(f"conflicting systems {words[0]!r} and --system {system!r}")
        system = words.pop(0)
    if len(words) != 1:
        raise ConfigError(f"expected exactly one command from {COMMANDS}")
    cfg = RunConfig(
        system=system,
        command=words[0],
        which=ns.which,
        N=ns.N,
        theta=ns.theta,
        epsilon=ns.epsilon,
        hbar=ns.hbar,
        length=ns.length,
        mass=ns.mass,
        grid=ns.grid,
        t=ns.t,
        out=ns.out,
        tol=ns.tol,
        level=ns.level,
    )
    if cfg.out is not None:
        directory = os.path.dirname(os.path.abspath(cfg.out))
        if not os.path.isdir(directory) or not os.access(directory, os.W_OK):
            raise ConfigError(f"output directory {directory!r} is not writable")
    return cfg.validate()


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except (ConfigError, CSQuantError, ValueError) as exc:
        print(f"csquant: error: {exc}", file=sys.stderr)
        return 2
    try:
        return run(cfg)
    except (CSQuantError, ValueError, ArithmeticError, OSError) as exc:
        print(f"csquant: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
