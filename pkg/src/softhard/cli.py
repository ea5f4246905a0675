"""Command-line laboratory.

    softhard <command> [--config PATH] [--alpha A] [--c C] [--L L]
                       [--nlist 20,40] [--window 0.5,4] [--grid 25]
                       [--tol 1e-7] [--out DIR]

Commands: eqdensity, recurrence, kernel, hm, limitkernel, fredholm,
converge, selftest.  Exit codes: 0 success, 1 numerical failure,
2 configuration error.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from . import equilibrium as eq
from . import fredholm as fr
from . import limitkernel as lk
from . import orthopoly as op
from . import painleve as pv
from .errors import ConvergenceError, DomainError, NumericalError, PrecisionError
from .report import CsvArtifact, Panel, ReportError, Series, SvgArtifact, TextArtifact, emit_report, fmt_number


class ConfigError(ValueError):
    pass


# ------------------------------------------------------------ configuration


@dataclass(frozen=True)
class ExperimentConfig:
    alpha: float = 0.0
    c: float = 1.0
    L: float = 0.0
    n_list: tuple = (20, 40)
    window: tuple = (0.5, 4.0)
    grid: int = 25
    tol: float = 1e-7
    out: str = "out"

    def __post_init__(self):
        if not self.alpha > -1:
            raise ConfigError("alpha must exceed -1")
        if not self.c > 0:
            raise ConfigError("c must be positive")
        lo, hi = self.window
        if not 0 < lo < hi:
            raise ConfigError("window must satisfy 0 < x_lo < x_hi")
        n = list(self.n_list)
        if not n or any(k < 1 for k in n) or any(b <= a for a, b in zip(n, n[1:])):
            raise ConfigError("nlist must be increasing positive integers")
        if self.grid < 2:
            raise ConfigError("grid must be at least 2")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")

    def N_of(self, n: int) -> float:
        """N(n) = n / (1 + L n^{-2/3})."""
        return n / (1.0 + self.L * n ** (-2.0 / 3.0))

    def measure(self) -> eq.EquilibriumMeasure:
        return eq.equilibrium_vc(self.c)

    def s(self) -> float:
        """s = c2 L (needs the soft_meets_hard regime)."""
        m = self.measure()
        if m.c2 is None:
            raise ConfigError(f"c={self.c} is not a soft_meets_hard field; s = c2 L is undefined")
        return m.c2 * self.L

    def scale(self, n: int) -> float:
        """(c1 n)^{2/3}."""
        m = self.measure()
        if m.c1 is None:
            raise ConfigError(f"c={self.c} is not a soft_meets_hard field; c1 is undefined")
        return (m.c1 * n) ** (2.0 / 3.0)

    def xs(self):
        return np.linspace(self.window[0], self.window[1], self.grid)

    def resolved(self) -> list:
        """(key, value) lines: inputs plus derived quantities."""
        out = [
            ("alpha", self.alpha), ("c", self.c), ("L", self.L),
            ("nlist", ",".join(str(n) for n in self.n_list)),
            ("window", f"{fmt_number(float(self.window[0]))},{fmt_number(float(self.window[1]))}"),
            ("grid", self.grid), ("tol", self.tol), ("out", self.out),
        ]
        m = self.measure()
        out.append(("edge_type_at_zero", m.edge_type_at_zero))
        if m.c1 is not None:
            out += [("c1", m.c1), ("c2", m.c2), ("s", self.s())]
            for n in self.n_list:
                out += [(f"N({n})", self.N_of(n)), (f"scale({n})", self.scale(n))]
        return out


_KEYS = {"alpha": float, "c": float, "L": float, "nlist": str, "window": str, "grid": int, "tol": float, "out": str}


def _parse_value(key, raw):
    try:
        if key == "nlist":
            return tuple(int(v) for v in raw.split(",") if v.strip())
        if key == "window":
            lo, hi = (float(v) for v in raw.split(","))
            return (lo, hi)
        return _KEYS[key](raw)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad value for {key}: {raw!r}") from exc


def parse_config_text(text: str) -> dict:
    """Flat key=value lines with # comments."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value")
        key, raw = (p.strip() for p in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        out[key] = _parse_value(key, raw)
    return out


def build_config(file_values: dict, overrides: dict) -> ExperimentConfig:
    merged = dict(file_values)
    merged.update({k: v for k, v in overrides.items() if v is not None})
    kwargs = {}
    for k, v in merged.items():
        kwargs["n_list" if k == "nlist" else k] = v
    return ExperimentConfig(**kwargs)


def config_text(cfg: ExperimentConfig) -> str:
    return "".join(f"{k} = {fmt_number(v)}\n" for k, v in cfg.resolved())


# ------------------------------------------------------------ experiments


@dataclass(frozen=True)
class ConvergeRow:
    n: int
    N: float
    s: float
    scale: float
    error: float
    available: bool
    note: str = ""


def run_converge(cfg: ExperimentConfig, limit_ctx: lk.LimitKernelContext | None = None) -> list:
    """E(n) = max over the window grid of the rescaled finite-n kernel's
    distance to the soft/hard limit kernel."""
    m = cfg.measure()
    if m.edge_type_at_zero != eq.SOFT_MEETS_HARD:
        raise ConfigError(f"converge needs a soft_meets_hard field; c={cfg.c} is {m.edge_type_at_zero}")
    s = cfg.s()
    limit_ctx = limit_ctx or lk.fg_context(cfg.alpha, s)
    xs = cfg.xs()
    X, Y = np.meshgrid(xs, xs)
    K_lim = lk.eval_soft_hard(limit_ctx, X, Y)
    rows = []
    for n in cfg.n_list:
        N = cfg.N_of(n)
        sc = cfg.scale(n)
        try:
            ctx = op.make_cd_context(op.WeightSpec.hard_edge(cfg.alpha, m.potential, N), n)
            K = op.cd_kernel(ctx, X / sc, Y / sc) / sc
            rows.append(ConvergeRow(n, N, s, sc, float(np.max(np.abs(K - K_lim))), True))
        except (PrecisionError, ConvergenceError) as exc:
            rows.append(ConvergeRow(n, N, s, sc, math.nan, False, str(exc)))
    return rows


def empirical_rate(rows) -> float | None:
    """Least-squares slope of log E against log n."""
    pts = [(math.log(r.n), math.log(r.error)) for r in rows if r.available and r.error > 0]
    if len(pts) < 2:
        return None
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    return float(np.polyfit(x, y, 1)[0])


# ------------------------------------------------------------ commands


def cmd_eqdensity(cfg):
    arts, panels = [], []
    for c in (0.7, 1.0, 1.2):
        m = eq.equilibrium_vc(c)
        (A, B), = m.support
        xs = A + (B - A) * np.linspace(0.0, 1.0, 401)[1:-1]
        psi = m.psi(xs)
        arts.append(CsvArtifact(f"eqdensity_c{c:g}.csv", ["x", "psi"], list(zip(xs, psi))))
        panels.append(Panel(f"c = {c:g}", "x", "psi", [Series(f"mass {m.integrate():.12f}", list(xs), list(psi))]))
    arts.append(SvgArtifact("eqdensity.svg", panels))
    return arts, []


def cmd_recurrence(cfg):
    m = cfg.measure()
    n = max(cfg.n_list)
    N = cfg.N_of(n)
    t = op.stieltjes_table(op.WeightSpec.hard_edge(cfg.alpha, m.potential, N), n)
    name = f"recurrence_n{n}.csv"
    notes = [f"precision_mode = {t.precision_mode}", f"refinement_change = {fmt_number(t.refinement_change)}", f"N = {fmt_number(N)}"]
    return [CsvArtifact(name, ["k", "a_k", "b_k"], t.rows())], notes


def cmd_kernel(cfg):
    m = cfg.measure()
    xs = cfg.xs()
    cols = [xs]
    header = ["x"]
    series = []
    for n in cfg.n_list:
        N = cfg.N_of(n)
        ctx = op.make_cd_context(op.WeightSpec.hard_edge(cfg.alpha, m.potential, N), n)
        if m.c1 is not None:
            sc = cfg.scale(n)
            d = ctx.diagonal(xs / sc) / sc
        else:
            d = ctx.diagonal(xs)
        cols.append(d)
        header.append(f"Kxx_n{n}")
        series.append(Series(f"n = {n}", list(xs), list(d)))
    art = CsvArtifact("kernel_diagonal.csv", header, [tuple(r) for r in np.array(cols).T])
    svg = SvgArtifact("kernel_diagonal.svg", [Panel("finite-n diagonal", "x", "K(x,x)", series)])
    return [art, svg], []


def cmd_hm(cfg):
    nu = cfg.alpha + 0.5
    hm = pv.hastings_mcleod(nu)
    s = np.linspace(hm.s_min, hm.s_max, 441)
    diag = pv.hm_diagnostics(hm)
    notes = [
        f"nu = {fmt_number(nu)}",
        f"ode_residual = {fmt_number(diag.ode_residual)}",
        f"pxxxiv_p1 = {fmt_number(diag.pxxxiv_p1)}",
        f"pxxxiv_p2 = {fmt_number(diag.pxxxiv_p2)}",
        f"doubling_drift = {fmt_number(diag.doubling_drift)}",
    ]
    art = CsvArtifact("hm.csv", ["s", "q", "qprime"], list(zip(s, hm.q(s), hm.r(s))))
    svg = SvgArtifact("hm.svg", [Panel(f"Hastings-McLeod, nu = {nu:g}", "s", "q", [Series("q", list(s), list(hm.q(s)))])])
    return [art, svg], notes


def _limit_s(cfg):
    try:
        return cfg.s()
    except ConfigError:
        return 0.0


def cmd_limitkernel(cfg):
    s = _limit_s(cfg)
    ctx = lk.fg_context(cfg.alpha, s)
    xs = cfg.xs()
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    K = lk.eval_soft_hard(ctx, X, Y)
    rows = [(X[i, j], Y[i, j], K[i, j]) for i in range(len(xs)) for j in range(len(xs))]
    dx = np.linspace(cfg.window[0], cfg.window[1], 201)
    dk = ctx.diagonal(dx)
    arts = [
        CsvArtifact("limitkernel.csv", ["x", "y", "K"], rows),
        CsvArtifact("limitkernel_diagonal.csv", ["x", "Kxx"], list(zip(dx, dk))),
        SvgArtifact("limitkernel_diagonal.svg", [Panel(f"soft/hard diagonal, alpha={cfg.alpha:g}, s={s:.6g}", "x", "K(x,x)", [Series("K(x,x)", list(dx), list(dk))])]),
    ]
    return arts, [f"s = {fmt_number(s)}", f"xmax_drift_K11 = {fmt_number(lk.xmax_drift(cfg.alpha, s))}"]


def cmd_fredholm(cfg):
    s = _limit_s(cfg)
    if cfg.alpha != 0:
        raise ConfigError("fredholm compares the alpha = 0 kernel with the Tracy-Widom law")
    ctx = lk.fg_context(0.0, s)
    xs = cfg.xs()
    rows, rows2 = [], []
    for x in xs:
        g, r = fr.smallest_eig_cdf(float(x), s, ctx)
        _, r2 = fr.smallest_eig_cdf(float(x), s, ctx, 2 ** (2 / 3))
        rows.append((x, g, r, abs(g - r)))
        rows2.append((x, g, r2, abs(g - r2)))
    airy = fr.airy_det(0.0)
    notes = [
        f"airy_det_0 = {fmt_number(airy)}",
        f"tw_cdf_0 = {fmt_number(pv.tw_cdf(0.0))}",
        "fredholm_scaled.csv uses F(-2^(2/3) x)/F(0)",
    ]
    arts = [
        CsvArtifact("fredholm.csv", ["x", "gap", "tw_ratio", "abs_diff"], rows),
        CsvArtifact("fredholm_scaled.csv", ["x", "gap", "tw_ratio", "abs_diff"], rows2),
        SvgArtifact("fredholm.svg", [Panel("gap probability", "x", "P", [
            Series("gap", list(xs), [r[1] for r in rows]),
            Series("F(-x)/F(0)", list(xs), [r[2] for r in rows]),
            Series("F(-2^(2/3)x)/F(0)", list(xs), [r[2] for r in rows2]),
        ])]),
    ]
    return arts, notes


def cmd_converge(cfg):
    rows = run_converge(cfg)
    table = CsvArtifact(
        "converge.csv", ["n", "N", "s", "scale", "E", "status"],
        [(r.n, r.N, r.s, r.scale, r.error, "ok" if r.available else "unavailable") for r in rows],
    )
    ok = [r for r in rows if r.available]
    svg = SvgArtifact("converge.svg", [Panel("universality error", "n", "E(n)", [Series("E(n)", [r.n for r in ok], [r.error for r in ok])], logx=True, logy=True)])
    rate = empirical_rate(rows)
    notes = [f"empirical_rate = {fmt_number(rate)}"] + [f"unavailable n={r.n}: {r.note}" for r in rows if not r.available]
    return [table, svg], notes


COMMANDS = {
    "eqdensity": cmd_eqdensity,
    "recurrence": cmd_recurrence,
    "kernel": cmd_kernel,
    "hm": cmd_hm,
    "limitkernel": cmd_limitkernel,
    "fredholm": cmd_fredholm,
    "converge": cmd_converge,
}


def run_command(name: str, cfg: ExperimentConfig) -> list:
    """Run one command and write its artifacts plus report.txt; returns the manifest."""
    arts, notes = COMMANDS[name](cfg)
    names = sorted(a.name for a in arts) + ["report.txt"]
    report = [f"command = {name}", "", "[config]", config_text(cfg).rstrip("\n"), "", "[results]"]
    report += notes or ["(none)"]
    report += ["", "[manifest]"] + names
    arts.append(TextArtifact("report.txt", "\n".join(report)))
    return emit_report(arts, cfg.out)


# ------------------------------------------------------------ entry point


def _parser():
    p = argparse.ArgumentParser(prog="softhard", description="Soft/hard edge kernel laboratory")
    p.add_argument("command", choices=sorted(list(COMMANDS) + ["selftest"]))
    p.add_argument("--config")
    p.add_argument("--alpha")
    p.add_argument("--c")
    p.add_argument("--L")
    p.add_argument("--nlist")
    p.add_argument("--window")
    p.add_argument("--grid")
    p.add_argument("--tol")
    p.add_argument("--out")
    p.add_argument("--only", help="selftest: comma-separated criterion ids")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        file_values = {}
        if args.config:
            try:
                with open(args.config, encoding="utf-8") as fh:
                    file_values = parse_config_text(fh.read())
            except OSError as exc:
                raise ConfigError(f"cannot read config: {exc}") from exc
        overrides = {
            k: _parse_value(k, getattr(args, k)) for k in _KEYS if getattr(args, k) is not None
        }
        cfg = build_config(file_values, overrides)
        if args.command == "selftest":
            from .acceptance import run_all

            which = args.only.split(",") if args.only else None
            results = run_all(which)
            return 0 if all(r.passed for r in results) else 1
        manifest = run_command(args.command, cfg)
    except (ConfigError, DomainError, ReportError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    for name in manifest:
        print(name)
    return 0


if __name__ == "__main__":
    sys.exit(main())
