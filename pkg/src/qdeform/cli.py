"""``qdeform`` command-line driver.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 I/O error.  CSV output starts with ``# config:`` and ``# units:`` comment
lines followed by a header row; identical configurations give identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import fockspace as fk
from . import qfourier as qf
from . import verify as vf
from . import wavefun as wf
from .qcore import QParam, bracket_asym, bracket_sym, qfactorial_sym
from .qlattice import GeoLattice, LatticeFn, TruncationWarning, d_asym

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    q: float | None = None
    mode: str = "float"
    N: int = fk.N_DEFAULT
    lam: float = 1.0
    x0: float = 1.0
    kmin: int | None = None
    kmax: int | None = None
    realization: str = "sym"
    P_exponent: int = 8
    Lscale: float = 1.0
    n_min: int = 0
    n_max: int = 10
    selector: str = "all"
    input: str | None = None
    format: str = "csv"
    out: str | None = None

    @property
    def exact(self) -> bool:
        return self.mode == "exact"

    @property
    def qvalue(self) -> float:
        return vf.DEFAULT_Q if self.q is None else self.q

    def validate(self) -> "RunConfig":
        if self.q is not None:
            try:
                QParam(self.q)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        if self.mode not in ("float", "exact"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.N < 2:
            raise ConfigError("N must be at least 2")
        if self.lam < 0:
            raise ConfigError("lambda must be non-negative")
        if self.x0 <= 0:
            raise ConfigError("x0 must be positive")
        if self.kmin is not None and self.kmax is not None and self.kmin > self.kmax:
            raise ConfigError("kmin must not exceed kmax")
        if self.n_min < 0 or self.n_max < self.n_min:
            raise ConfigError("bad n range")
        if self.exact and self.command in ("ground", "transform", "delta", "uncertainty"):
            raise ConfigError(f"{self.command} is evaluated in float mode only")
        return self

    def echo(self) -> dict:
        d = {k: v for k, v in asdict(self).items() if k not in ("out", "format")}
        d["q"] = self.q if self.exact else self.qvalue
        return d


def threads() -> int:
    try:
        return max(1, int(os.environ.get("QDEFORM_THREADS", "1")))
    except ValueError:
        return 1


# tables

@dataclass
class Table:
    columns: list[str]
    rows: list[list]
    units: str


def _num(v):
    if isinstance(v, (bool, np.bool_)):
        return int(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def render(table: Table, cfg: RunConfig) -> str:
    if cfg.format == "json":
        rows = [[v if isinstance(v, (int, float, str, bool)) or v is None else str(v) for v in _py(r)]
                for r in table.rows]
        return json.dumps({"config": cfg.echo(), "units": table.units, "columns": table.columns, "rows": rows},
                          indent=1, sort_keys=True) + "\n"
    buf = io.StringIO()
    buf.write(f"# config: {json.dumps(cfg.echo(), sort_keys=True)}\n")
    buf.write(f"# units: {table.units}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for r in table.rows:
        w.writerow([_num(v) for v in r])
    return buf.getvalue()


def _py(row):
    out = []
    for v in row:
        if isinstance(v, (np.bool_, bool)):
            out.append(bool(v))
        elif isinstance(v, (np.integer,)):
            out.append(int(v))
        elif isinstance(v, (np.floating,)):
            out.append(float(v))
        else:
            out.append(v)
    return out


# subcommands

def cmd_qnum(cfg: RunConfig) -> Table:
    q = QParam.exact() if cfg.exact else QParam(cfg.qvalue)
    rows = [[n, bracket_asym(n, q), bracket_sym(n, q), qfactorial_sym(n, q)] for n in range(cfg.n_min, cfg.n_max + 1)]
    return Table(["n", "asym", "sym", "sym_factorial"], rows, "dimensionless q-numbers <n>, [n], [n]!")


def _warn_overflow(cfg: RunConfig) -> None:
    if not cfg.exact and cfg.N > fk.overflow_dimension(cfg.qvalue):
        print(f"warning: [N] overflows float for N={cfg.N} at q={cfg.qvalue}", file=sys.stderr)


def cmd_spectrum(cfg: RunConfig) -> Table:
    _warn_overflow(cfg)
    q = QParam.exact() if cfg.exact else QParam(cfg.qvalue)
    rows = [[n, fk.spectrum(cfg.realization, q, n)] for n in range(cfg.N)]
    return Table(["n", "eigenvalue"], rows, "energy (amp2(n) + amp2(n+1))/2 in units of hbar omega")


def _config_lattice(cfg: RunConfig) -> GeoLattice:
    """Window from --x0/--kmin/--kmax; missing bounds cover 0.01 <= |x| <= 3."""
    base = GeoLattice.spanning(cfg.qvalue, 1e-2, 3.0, cfg.x0)
    return GeoLattice(cfg.x0, cfg.qvalue, base.kmin if cfg.kmin is None else cfg.kmin,
                      base.kmax if cfg.kmax is None else cfg.kmax)


def cmd_ground(cfg: RunConfig) -> Table:
    lat = _config_lattice(cfg)
    params = wf.GroundStateParams(cfg.lam, cfg.qvalue, cfg.realization)
    state = wf.ProductState(params)
    psi = state.sample(lat)
    q = cfg.qvalue
    if params.kind is wf.GroundKind.ASYM:
        # |lam x psi + D^q psi|; undefined on the innermost shell
        d = d_asym(psi)
        res = np.full((2, lat.nk), np.nan)
        res[:, :-1] = np.abs(cfg.lam * d.lattice.points() * psi.values[:, :-1] + d.values)
        what = "|lam x psi + D^q psi|"
    else:
        r = lat.points()
        factor = 1 - params.k_prime * q**4 * r**2 / (1 - q**4)
        res = np.abs(state(q * r) - factor * psi.values.real)
        what = "|psi(qx) - (1 - K' q^4 x^2/(1 - q^4)) psi(x)|"
    rows = _by_x(lat, lambda row, i: [psi.values[row, i].real, res[row, i]])
    return Table(["x", "psi", "residual"], rows, f"x in units of the lattice scale x0; psi(0)=1; residual {what}")


def _by_x(lat: GeoLattice, cols) -> list[list]:
    """Rows for both branches ordered by increasing x."""
    pts = lat.points()
    order = [(1, i) for i in range(lat.nk)] + [(0, i) for i in reversed(range(lat.nk))]
    return [[pts[row, i], *cols(row, i)] for row, i in order]


def cmd_transform(cfg: RunConfig) -> Table:
    q = cfg.qvalue
    if cfg.input is not None:
        with open(cfg.input, encoding="utf-8") as fh:
            phi = LatticeFn.from_csv(fh.read(), q)
        plan = qf.TransformPlan(_config_lattice(cfg), phi.lattice)
    else:
        if cfg.lam <= 0:
            raise ConfigError("the default input (momentum ground state) needs lambda > 0")
        p_lat = qf.momentum_lattice(q, cfg.lam)
        plan = qf.TransformPlan(_config_lattice(cfg), p_lat)
        phi = wf.ground_sym_decaying(1 / cfg.lam, p_lat)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", TruncationWarning)
        psi = qf.fourier_forward(phi, plan)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    rows = _by_x(psi.lattice, lambda row, i: [psi.values[row, i].real, psi.values[row, i].imag])
    return Table(["x", "re", "im"], rows, "x in units of the lattice scale; psi = int E(ipx) phi(p) d_q p")


def cmd_delta(cfg: RunConfig) -> Table:
    spec = qf.DeltaSpec(cfg.qvalue, cfg.P_exponent)
    x = np.round(np.linspace(0.0, 5.0, 501), 12)
    prof = qf.localization_profile(spec, x)
    cl = qf.classical_delta(x, 0.0, spec.P)
    rows = [[xi, abs(v), spec.q.value, spec.P, c] for xi, v, c in zip(x, prof.values, cl)]
    units = (f"x in units of 1/P scale; |delta_q(x,0)| with P=q^-{cfg.P_exponent}; "
             f"peak={prof.peak!r} hwhm={prof.hwhm!r} first_zero={prof.first_zero!r}")
    return Table(["x", "abs_delta_q", "q", "P", "classical_sinc"], rows, units)


def cmd_uncertainty(cfg: RunConfig) -> Table:
    _warn_overflow(cfg)
    ops = fk.build_fock(cfg.realization, cfg.qvalue, cfg.N)
    xp = fk.build_xp(ops, cfg.Lscale)
    hi = min(cfg.n_max, cfg.N - 2)
    rows = []
    for n in range(cfg.n_min, hi + 1):
        r = fk.uncertainty_product(xp, n)
        rows.append([n, r.product, r.literal_bound, r.robertson_bound, r.holds,
                     r.holds_literal_sqrt, r.holds_literal_product])
    return Table(["n", "product", "literal_bound", "robertson_bound", "holds",
                  "holds_literal_sqrt", "holds_literal_product"], rows,
                 "hbar=1, L=Lscale, K=(q+1)/(4L); product = var(x) var(p); holds = Robertson bound")


def cmd_verify(cfg: RunConfig) -> tuple[str, int]:
    with ThreadPoolExecutor(max_workers=threads()) as pool:
        results = vf.run(cfg.selector, q=cfg.q, exact=cfg.exact, N=cfg.N, lam=cfg.lam if cfg.lam > 0 else 1.0,
                         Lscale=cfg.Lscale, pool=pool)
    ok = all(r.passed for r in results)
    if cfg.format == "json":
        text = json.dumps({"config": cfg.echo(), "passed": ok, "checks": [r.as_dict() for r in results]},
                          indent=1, sort_keys=True, default=float) + "\n"
    else:
        lines = [r.line() for r in results]
        n_fail = sum(not r.passed for r in results)
        lines.append(f"{'OK' if ok else 'FAILED'}: {len(results)} checks, {n_fail} failed")
        text = "\n".join(lines) + "\n"
    return text, EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "qnum": cmd_qnum,
    "spectrum": cmd_spectrum,
    "ground": cmd_ground,
    "transform": cmd_transform,
    "delta": cmd_delta,
    "uncertainty": cmd_uncertainty,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=float, default=None, help="deformation parameter in (0,1) (default 0.9)")
    common.add_argument("--mode", choices=["float", "exact"], default="float")
    common.add_argument("--N", type=int, default=fk.N_DEFAULT, help="Fock dimension")
    common.add_argument("--lambda", dest="lam", type=float, default=1.0, help="coupling ratio beta/alpha")
    common.add_argument("--x0", type=float, default=1.0)
    common.add_argument("--kmin", type=int, default=None)
    common.add_argument("--kmax", type=int, default=None)
    common.add_argument("--realization", choices=["asym", "sym"], default="sym")
    common.add_argument("--P-exponent", dest="P_exponent", type=int, default=8, help="cutoff P = q^-m")
    common.add_argument("--L", dest="Lscale", type=float, default=1.0, help="length scale L")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--out", default=None, help="output path (default stdout)")

    p = argparse.ArgumentParser(prog="qdeform", description="q-deformed oscillator toolkit")
    sub = p.add_subparsers(dest="command", required=True)
    q = sub.add_parser("qnum", parents=[common], help="tabulate <n>, [n], [n]!")
    q.add_argument("--n-min", dest="n_min", type=int, default=0)
    q.add_argument("--n-max", dest="n_max", type=int, default=10)
    v = sub.add_parser("verify", parents=[common], help="run identity suites")
    v.add_argument("selector", nargs="?", default="all", choices=["all", *vf.SUITES])
    sub.add_parser("spectrum", parents=[common], help="Fock energies")
    sub.add_parser("ground", parents=[common], help="ground-state product on a lattice")
    t = sub.add_parser("transform", parents=[common], help="forward q-Fourier transform")
    t.add_argument("--input", default=None, help="p-space LatticeFn CSV (sign,k,x,re,im)")
    sub.add_parser("delta", parents=[common], help="q-delta localization profile")
    u = sub.add_parser("uncertainty", parents=[common], help="variance products and bounds")
    u.add_argument("--n-min", dest="n_min", type=int, default=0)
    u.add_argument("--n-max", dest="n_max", type=int, default=10)
    return p


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    try:
        cfg = RunConfig(**fields).validate()
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if cfg.command == "verify":
            text, code = cmd_verify(cfg)
        else:
            text, code = render(COMMANDS[cfg.command](cfg), cfg), EXIT_OK
        _emit(text, cfg)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, wf.PoleError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return code


if __name__ == "__main__":
    sys.exit(main())
