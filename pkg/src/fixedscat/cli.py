"""Command-line front end: ``fixedscat <subcommand> [--config FILE] [overrides]``.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure,
3 a certification check failed.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import json
import logging
import sys
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ScatteringError
from .grid import fibonacci_sphere, make_grid, unit

log = logging.getLogger("fixedscat")

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_CHECK = 0, 1, 2, 3
FAMILIES = ("bump", "poly", "zero")
ETA_RULES = ("log", "fixed")
SUBCOMMANDS = (
    "forward", "amplitude", "dataset", "radon", "verify-identities", "estimates",
    "eta-curve", "nu-sweep", "t2-norm", "j-integral", "invert", "all-checks",
)


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    family: str = "bump"
    amplitude: float = 0.1
    support_r: float = 0.8
    order: int = 4
    center: tuple = (0.0, 0.0, 0.0)
    a: float = 1.0
    n: int = 33
    m: int = 64
    alpha: tuple = (0.0, 0.0, 1.0)
    k_list: tuple = (5.0,)
    kappas: tuple = (8.0, 16.0, 32.0, 64.0)
    eta_rule: str = "log"
    eta: float = 1.0
    ell: int = 4
    tol: float = 1e-8
    max_iter: int = 200
    probes: int = 8
    padding: int = 2
    seed: int = 0
    out: str = "out"

    def validate(self) -> "ExperimentConfig":
        problems = []
        if self.family not in FAMILIES:
            problems.append(f"family must be one of {FAMILIES}")
        if self.eta_rule not in ETA_RULES:
            problems.append(f"eta_rule must be one of {ETA_RULES}")
        if not self.a > 0:
            problems.append("a must be positive")
        if self.n < 8:
            problems.append("n must be >= 8")
        if self.family != "zero" and not 0 < self.support_r + float(np.linalg.norm(self.center)) < self.a:
            problems.append("support_r + |center| must lie in (0, a)")
        if self.family == "poly" and self.order < 4:
            problems.append("order must be >= 4")
        if self.m < 6:
            problems.append("m must be >= 6")
        if not self.k_list or any(k <= 0 for k in self.k_list):
            problems.append("k_list must hold positive wavenumbers")
        if not self.kappas or any(k <= 1 for k in self.kappas):
            problems.append("kappas must exceed 1")
        if self.ell <= 3:
            problems.append("ell must exceed 3")
        if self.eta < 0:
            problems.append("eta must be >= 0")
        if not self.tol > 0 or self.max_iter < 1:
            problems.append("tol must be positive and max_iter >= 1")
        if self.probes < 8:
            problems.append("probes must be >= 8")
        if self.padding < 2:
            problems.append("padding must be >= 2")
        if len(self.alpha) != 3 or np.linalg.norm(self.alpha) == 0:
            problems.append("alpha must be a nonzero 3-vector")
        if problems:
            raise UsageError("; ".join(problems))
        return self

    def config_hash(self) -> str:
        payload = {k: v for k, v in asdict(self).items() if k != "out"}
        blob = json.dumps(payload, sort_keys=True, default=list).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def header(self) -> str:
        return f"config_hash={self.config_hash()} seed={self.seed} version={__version__}"

    def etas_for(self, kappas) -> np.ndarray:
        ks = np.asarray(kappas, dtype=float)
        if self.eta_rule == "log":
            return np.log(ks) / self.a
        return np.full(ks.shape, self.eta)

    def domain(self):
        return make_grid(self.a, self.n)

    def potential(self, amplitude: float | None = None):
        from .potential import bump_potential, piecewise_smooth_potential, zero_potential

        dom = self.domain()
        amp = self.amplitude if amplitude is None else amplitude
        center = None if not np.any(self.center) else self.center
        if self.family == "zero" or amp == 0:
            return zero_potential(dom)
        if self.family == "poly":
            return piecewise_smooth_potential(dom, amp, self.support_r, self.order, center=center)
        return bump_potential(dom, amp, self.support_r, center=center)

    def directions(self):
        return fibonacci_sphere(self.m)


# (section, key, type) for the config file; flags share the key names
_FIELDS = {
    "potential": {"family": str, "amplitude": float, "support_r": float, "order": int, "center": "vec"},
    "grid": {"a": float, "n": int},
    "directions": {"m": int, "alpha": "vec"},
    "sweep": {"k_list": "list", "kappas": "list", "eta_rule": str, "eta": float, "ell": int, "probes": int},
    "solver": {"tol": float, "max_iter": int, "padding": int},
    "run": {"seed": int, "out": str},
}


def _convert(kind, text):
    if kind == "vec" or kind == "list":
        vals = tuple(float(v) for v in str(text).replace(",", " ").split())
        if kind == "vec" and len(vals) != 3:
            raise UsageError(f"expected three numbers, got {text!r}")
        return vals
    return kind(text)


def load_config(path) -> dict:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    if not parser.read(path):
        raise UsageError(f"cannot read config file {path}")
    values = {}
    for section in parser.sections():
        if section not in _FIELDS:
            raise UsageError(f"unknown config section [{section}]")
        for key, text in parser[section].items():
            if key not in _FIELDS[section]:
                raise UsageError(f"unknown key {key!r} in [{section}]")
            try:
                values[key] = _convert(_FIELDS[section][key], text)
            except ValueError as exc:
                raise UsageError(f"bad value for {key}: {exc}") from None
    return values


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fixedscat", description="Fixed-incidence potential scattering toolkit.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--config", help="INI file with [potential] [grid] [directions] [sweep] [solver] [run]")
    for section, keys in _FIELDS.items():
        for key, kind in keys.items():
            flag = "--" + key.replace("_", "-")
            if kind in ("vec", "list"):
                p.add_argument(flag, dest=key, help=f"[{section}] {key}; comma separated")
            else:
                p.add_argument(flag, dest=key, type=kind, help=f"[{section}] {key}")
    p.add_argument("--only", help="all-checks: comma separated criterion numbers")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def resolve_config(args) -> ExperimentConfig:
    values = load_config(args.config) if args.config else {}
    for keys in _FIELDS.values():
        for key, kind in keys.items():
            flag_val = getattr(args, key, None)
            if flag_val is not None:
                values[key] = _convert(kind, flag_val) if kind in ("vec", "list") else flag_val
    try:
        cfg = replace(ExperimentConfig(), **values)
    except TypeError as exc:
        raise UsageError(str(exc)) from None
    return cfg.validate()


# ---------------------------------------------------------------- writers


def write_rows(path: Path, columns, rows, cfg: ExperimentConfig) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        fh.write(f"# {cfg.header()}\n")
        w = csv.writer(fh)
        w.writerow(columns)
        for row in rows:
            w.writerow([_cell(x) for x in row])
    return path


def _cell(x):
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_json(path: Path, payload: dict, cfg: ExperimentConfig) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    body = {"config_hash": cfg.config_hash(), "seed": cfg.seed, **payload}
    path.write_text(json.dumps(body, indent=2, sort_keys=True, default=_json_default) + "\n")
    return path


def _json_default(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    raise TypeError(type(x))


# ---------------------------------------------------------------- subcommands


def cmd_forward(cfg, out):
    from .solver import lippmann_schwinger_residual, solve_eps

    q = cfg.potential()
    rows = []
    summary = {}
    for k in cfg.k_list:
        sol = solve_eps(q, unit(cfg.alpha), k, cfg.tol, cfg.max_iter)
        ls = lippmann_schwinger_residual(q, sol)
        summary[f"k={k:g}"] = {"iterations": sol.iterations, "residual": sol.residual, "ls_residual": ls}
        dom = q.domain
        mid = dom.grid_n // 2
        for i in range(dom.grid_n):
            for j in range(dom.grid_n):
                x, y = dom.axis[i], dom.axis[j]
                u = sol.u[i, j, mid]
                rows.append((k, x, y, u.real, u.imag))
    write_rows(out / "forward_u_slice.csv", ("k", "x", "y", "re_u", "im_u"), rows, cfg)
    write_json(out / "forward.json", summary, cfg)
    return EXIT_OK


def cmd_amplitude(cfg, out):
    from .solver import fixed_direction_dataset

    table = fixed_direction_dataset(cfg.potential(), unit(cfg.alpha), cfg.directions(), cfg.k_list, cfg.tol, cfg.max_iter)
    write_rows(out / "amplitude.csv", table.COLUMNS, table.rows(), cfg)
    return EXIT_OK


def cmd_dataset(cfg, out):
    from .solver import fixed_direction_dataset

    table = fixed_direction_dataset(cfg.potential(), unit(cfg.alpha), cfg.directions(), cfg.k_list, cfg.tol, cfg.max_iter)
    write_rows(out / "dataset.csv", table.COLUMNS, table.rows(), cfg)
    return EXIT_OK


def cmd_radon(cfg, out):
    from .radon import antipodal_identity_check, moment_identity_check, radon_transform, slice_identity_check

    q = cfg.potential()
    dirs = fibonacci_sphere(max(6, min(cfg.m, 16)))
    rows = []
    for b in dirs.directions:
        prof = radon_transform(q, b)
        rows.extend((*b, lam, val) for lam, val in zip(prof.lambdas, prof.values))
    write_rows(out / "radon.csv", ("beta_x", "beta_y", "beta_z", "lambda", "value"), rows, cfg)
    b0 = dirs.directions[0]
    checks = {
        "mass_rel_err": moment_identity_check(q, b0),
        "slice_rel_err": slice_identity_check(q, b0, cfg.k_list[0]),
        "antipodal_max_err": antipodal_identity_check(q, dirs),
    }
    write_json(out / "radon_identities.json", checks, cfg)
    return EXIT_OK


def cmd_verify_identities(cfg, out):
    from .identities import amplitude_difference_check, orthogonality_relation_check, reciprocity_check
    from .potential import bump_potential

    q1 = cfg.potential()
    q2 = bump_potential(q1.domain, 0.8 * cfg.amplitude, 0.6 * cfg.support_r, center=(0.1 * cfg.a, 0.0, 0.0)) if cfg.family != "zero" else q1
    rng = np.random.default_rng(cfg.seed)
    alpha = unit(cfg.alpha)
    rows = []
    worst = 0.0
    for k in cfg.k_list:
        beta = unit(rng.normal(size=3))
        for name, rep in (
            ("amplitude_difference", amplitude_difference_check(q1, q2, beta, alpha, k)),
            ("reciprocity", reciprocity_check(q1, beta, alpha, k)),
            ("orthogonality", orthogonality_relation_check(q1, q2, alpha, beta, k)),
        ):
            rows.append((name, k, rep.lhs.real, rep.lhs.imag, rep.rhs.real, rep.rhs.imag, rep.abs_err, rep.rel_err))
            worst = max(worst, rep.rel_err)
    write_rows(out / "identities.csv", ("identity", "k", "re_lhs", "im_lhs", "re_rhs", "im_rhs", "abs_err", "rel_err"), rows, cfg)
    if worst >= 1e-2:
        raise CheckFailed(f"identity relative error {worst:.3e} >= 1e-2")
    return EXIT_OK


def _report_out(rep, path, cfg):
    rep.to_csv(path, cfg.header())
    return rep.summary()


def cmd_eta_curve(cfg, out):
    from .asymptotics import eta_curve

    rep = eta_curve(cfg.potential(), cfg.kappas, cfg.directions().symmetrized())
    print(_report_out(rep, out / "eta_curve.csv", cfg))
    return EXIT_OK


def cmd_nu_sweep(cfg, out):
    from .asymptotics import nu_sweep

    rep = nu_sweep(cfg.potential(), cfg.kappas, cfg.etas_for(cfg.kappas), cfg.directions(), padding=cfg.padding)
    print(_report_out(rep, out / "nu_sweep.csv", cfg))
    return EXIT_OK


def cmd_t2_norm(cfg, out):
    from .asymptotics import t2_sweep

    rep = t2_sweep(cfg.potential(), cfg.kappas, cfg.etas_for(cfg.kappas), cfg.probes, seed=cfg.seed)
    print(_report_out(rep, out / "t2_norm.csv", cfg))
    return EXIT_OK


def cmd_j_integral(cfg, out):
    from .asymptotics import j_sweep

    rep = j_sweep(cfg.kappas, cfg.etas_for(cfg.kappas), cfg.ell)
    print(_report_out(rep, out / "j_integral.csv", cfg))
    return EXIT_OK


def cmd_estimates(cfg, out):
    from .asymptotics import decay_bound_check, i1_sweep, j_sweep, nu_sweep, t2_sweep

    q = cfg.potential()
    ks, es = cfg.kappas, cfg.etas_for(cfg.kappas)
    reports = {
        "decay_bound": decay_bound_check(q, cfg.directions().symmetrized(), ks, sorted({0.0, *es})),
        "nu_sweep": nu_sweep(q, ks, es, cfg.directions(), padding=cfg.padding),
        "j_integral": j_sweep(ks, es, cfg.ell),
        "t2_norm": t2_sweep(q, ks, es, cfg.probes, seed=cfg.seed),
    }
    if not q.is_zero:
        x = cfg.a * np.array([0.1, 0.2, -0.1])
        y = cfg.a * np.array([-0.2, 0.0, 0.25])
        reports["spheroidal_I1"] = i1_sweep(q, x, y, ks, es)
    texts = [_report_out(rep, out / f"{name}.csv", cfg) for name, rep in reports.items()]
    (out / "estimates_summary.txt").write_text(f"# {cfg.header()}\n" + "\n\n".join(texts) + "\n")
    print("\n\n".join(texts))
    return EXIT_OK


def cmd_invert(cfg, out):
    from .inversion import data_to_fourier_samples, reconstruct
    from .potential import save_potential
    from .solver import fixed_direction_dataset

    q = cfg.potential()
    alpha = unit(cfg.alpha)
    table = fixed_direction_dataset(q, alpha, cfg.directions(), cfg.k_list, cfg.tol, cfg.max_iter)
    res = reconstruct(data_to_fourier_samples(table, alpha), q.domain, truth=q)
    save_potential(res.q_rec, out / "q_rec")
    write_rows(
        out / "invert_summary.csv",
        ("samples", "rel_l2_error", "coverage", "grid_fraction", "imag_max"),
        [(len(table), res.rel_l2_error, res.coverage_map, res.grid_fraction, res.imag_max)],
        cfg,
    )
    print(f"rel_l2_error={res.rel_l2_error:.4g} coverage={res.coverage_map:.3f}")
    return EXIT_OK


def cmd_all_checks(cfg, out, only=None):
    from .checks import Settings, run_all

    s = Settings(a=cfg.a, n=cfg.n, m=cfg.m, amplitude=cfg.amplitude, support_r=cfg.support_r / cfg.a, seed=cfg.seed)
    rows, lines, failed = [], [], 0
    for res in run_all(s, only):
        line = res.line()
        print(line, flush=True)
        lines.append(line)
        failed += not res.passed
        for key, val in res.values.items():
            rows.append((res.criterion, res.name, res.passed, key, json.dumps(val, default=_json_default)))
    write_rows(out / "all_checks.csv", ("criterion", "name", "passed", "quantity", "value"), rows, cfg)
    total = len(lines)
    (out / "all_checks.txt").write_text(f"# {cfg.header()}\n" + "\n".join(lines) + f"\n{total - failed}/{total} passed\n")
    print(f"{total - failed}/{total} passed")
    if failed:
        raise CheckFailed(f"{failed} of {total} checks failed")
    return EXIT_OK


COMMANDS = {
    "forward": cmd_forward,
    "amplitude": cmd_amplitude,
    "dataset": cmd_dataset,
    "radon": cmd_radon,
    "verify-identities": cmd_verify_identities,
    "estimates": cmd_estimates,
    "eta-curve": cmd_eta_curve,
    "nu-sweep": cmd_nu_sweep,
    "t2-norm": cmd_t2_norm,
    "j-integral": cmd_j_integral,
    "invert": cmd_invert,
    "all-checks": cmd_all_checks,
}


def run_subcommand(name: str, cfg: ExperimentConfig, only=None) -> int:
    if name not in COMMANDS:
        raise UsageError(f"unknown subcommand {name!r}")
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    if name == "all-checks":
        return cmd_all_checks(cfg, out, only)
    return COMMANDS[name](cfg, out)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        only = None
        if args.only:
            only = {int(v) for v in args.only.split(",")}
        return run_subcommand(args.subcommand, cfg, only)
    except UsageError as exc:
        print(f"fixedscat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"fixedscat: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ScatteringError, OverflowError, FloatingPointError) as exc:
        print(f"fixedscat: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except CheckFailed as exc:
        print(f"fixedscat: check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
