"""Command-line front end.

Exit codes: 0 success, 2 precondition or argument violation, 3 solver or
filter-construction failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np

from . import cost, filters, pipeline, qsp, spectral
from .errors import DomainError, FilterConstructionError, InvalidArgumentError, PreconditionError, SolverError
from .tables import write_csv

EXIT_OK, EXIT_PRECONDITION, EXIT_SOLVER = 0, 2, 3
METHODS = ("multilevel", "multilevel_coherent", "standard_qsp", "lcu")


@dataclass
class ExperimentConfig:
    hamiltonian: dict = field(default_factory=lambda: {"equally_spaced": {"n": 21, "spectral_radius": 20.0}})
    initial_state: object = "uniform"
    method: str = "multilevel"
    regime: str = "tau_cutoff"
    eps: float = 1e-2
    tau: float = math.inf
    alpha: float = 0.0
    delta: float = 0.0
    seed: int = 0
    output_dir: str = "out"

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise InvalidArgumentError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**d)
        cfg.validate()
        return cfg

    def validate(self):
        if self.method not in METHODS:
            raise InvalidArgumentError(f"method must be one of {METHODS}")
        spectral.Regime(self.regime)
        if not 0 < self.eps < 1:
            raise InvalidArgumentError("eps must lie in (0, 1)")
        self.model()

    def model(self) -> spectral.FastForwardModel:
        return spectral.FastForwardModel(float(self.tau), float(self.alpha), float(self.delta), self.regime)

    def build(self):
        h = spectral.parse_hamiltonian(self.hamiltonian)
        return h, spectral.parse_initial_state(self.initial_state, h)


def _load_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _dump_json(obj, path: Path):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _config_from_args(args) -> ExperimentConfig:
    d = _load_json(args.config) if getattr(args, "config", None) else {}
    for key in ("method", "regime", "eps", "tau", "alpha", "delta", "seed", "output_dir"):
        v = getattr(args, key, None)
        if v is not None:
            d[key] = v
    return ExperimentConfig.from_dict(d)


# subcommands --------------------------------------------------------------


def _target_polynomial(spec: dict) -> filters.FilterPolynomial:
    kind = spec.get("kind")
    if kind == "golden":
        return qsp.induced_polynomial(qsp.golden_phase_table())
    if kind == "level":
        return filters.build_level_filter(float(spec["eps_prime"]))
    if kind == "cleanup":
        return filters.build_cleanup_filter(float(spec["mu"]), float(spec["gap"]), float(spec["eps"]))
    if kind == "constant":
        return filters.FilterPolynomial([float(spec["value"])])
    if kind == "chebyshev-even":
        return filters.FilterPolynomial.from_json(spec)
    raise InvalidArgumentError(f"unknown target kind {kind!r}")


def cmd_solve_phases(args) -> int:
    spec = _load_json(args.target) if args.target else {"kind": args.kind or "golden"}
    if args.eps_prime is not None:
        spec = {"kind": "level", "eps_prime": args.eps_prime}
    target = _target_polynomial(spec)
    out = Path(args.output_dir)
    try:
        phases = qsp.solve_symmetric_phase_factors(target, tol=args.tol)
    except SolverError as exc:
        _dump_json({"status": "failed", "message": str(exc), "best_residual": exc.best_residual,
                    "degree": target.degree}, out / "residual.json")
        raise
    induced = qsp.induced_polynomial(phases)
    nodes = qsp.chebyshev_nodes(target.degree // 2)
    node_err = float(np.max(np.abs(filters.eval_filter(induced, nodes) - filters.eval_filter(target, nodes))))
    _dump_json(phases.to_json(), out / "phases.json")
    _dump_json({"status": "ok", "degree": phases.degree, "residual": phases.residual,
                "node_error": node_err, "tol": args.tol}, out / "residual.json")
    print(f"degree {phases.degree}, max node residual {phases.residual:.3e}")
    return EXIT_OK


def cmd_build_filter(args) -> int:
    out = Path(args.output_dir)
    if args.kind == "level":
        f = filters.build_level_filter(args.eps)
        err, sup = filters.validate_even_filter(f, *f.bands)
    elif args.kind == "cleanup":
        f = filters.build_cleanup_filter(args.mu, args.gap, args.eps)
        err, sup = filters.validate_even_filter(f, *f.bands)
    elif args.kind == "standard":
        f = filters.build_standard_filter(args.h_norm, args.mu, args.gap, args.eps)
        err, sup = filters.validate_even_filter(f, *f.bands)
    else:
        f = filters.build_heaviside_fourier(args.h_norm, args.mu, args.gap, args.eps)
        err, sup = filters.validate_fourier_filter(f)
    doc = f.to_json()
    doc["validation"] = {"band_error": err, "sup_norm": sup}
    _dump_json(doc, out / "filter.json")
    print(f"{args.kind} filter: degree {doc['degree']}, band error {err:.3e}")
    return EXIT_OK


def _run_pipeline(cfg: ExperimentConfig):
    h, init = cfg.build()
    run = pipeline.PipelineRun(cfg.method, h, init, cfg.model(), cfg.eps)
    return run, run.execute()


def cmd_run(args) -> int:
    cfg = _config_from_args(args)
    _, report = _run_pipeline(cfg)
    out = Path(cfg.output_dir)
    doc = report.to_json()
    doc["config"] = _config_json(cfg)
    _dump_json(doc, out / "report.json")
    write_csv(out / "trace.csv", pipeline.TRACE_COLUMNS, [r.values() for r in report.level_trace])
    print(f"{report.method}: fidelity {report.fidelity:.12f}, oracle queries {report.ledger.oracle_queries}")
    return EXIT_OK


def _config_json(cfg: ExperimentConfig) -> dict:
    d = {f.name: getattr(cfg, f.name) for f in fields(cfg)}
    for k in ("tau", "alpha", "eps", "delta"):
        v = float(d[k])
        d[k] = "inf" if math.isinf(v) else v
    return d


def gapped_spectrum(h_norm: float, gap: float, n_excited: int = 32) -> spectral.SpectralHamiltonian:
    """Ground state at 0, excited levels spread over ``[gap, h_norm]``."""
    lam = np.concatenate([[0.0], np.linspace(gap, h_norm, n_excited)])
    return spectral.SpectralHamiltonian(lam, gap / 2, gap)


def simulate_queries(method: str, params: dict, lcu_limit: float = 64.0) -> Optional[int]:
    """Oracle queries of a simulated run on :func:`gapped_spectrum`."""
    h = gapped_spectrum(params["H_norm"], params["gap"])
    init = spectral.InitialState.with_overlap(h.dim, params["gamma"])
    model = spectral.FastForwardModel(params["tau"], params["alpha"], 0.0, params["regime"])
    if method == "lcu" and params["H_norm"] / params["gap"] > lcu_limit:
        return None
    name = "multilevel" if method == "multilevel" else method
    report = pipeline.PipelineRun(name, h, init, model, params["eps"]).execute()
    return report.ledger.oracle_queries


def filter_curve(h_norm=20.0, gap=1.0, gamma=0.2, eps=1e-2, points=1000):
    """Multi-level product filter (with clean-up) and the single sharp filter on [0, ||H||]."""
    h = gapped_spectrum(h_norm, gap)
    ml = pipeline.build_multilevel_filters(h, gamma, eps)
    std = filters.build_standard_filter(h_norm, h.mu, h.gap, gamma * eps)
    lam = np.linspace(0.0, h_norm, points)
    prod = np.ones_like(lam)
    for stage in ml.stages:
        prod = prod * qsp.qetu_filter_values(stage.phases, stage.t, lam)
    single = filters.eval_filter(std, np.cos(lam / (2 * h_norm)))
    return [(float(a), float(b), float(c)) for a, b, c in zip(lam, prod, single)]


def cmd_compare(args) -> int:
    grid = _load_json(args.grid) if args.grid else {
        "H_norm": [8.0, 16.0, 32.0, 64.0, 128.0, 256.0, 512.0, 1024.0],
        "gap": 1.0, "gamma": 0.2, "eps": 1e-2, "tau": 1e6, "alpha": 0.0, "regime": "tau_cutoff",
    }
    methods = args.methods.split(",")
    simulated = None if args.no_simulate else simulate_queries
    rows = cost.scaling_table(methods, grid, simulated)
    out = Path(args.output_dir)
    cost.write_table(out / "scaling.csv", rows)
    write_csv(out / "filter_curve.csv", ("lambda", "multilevel", "standard"),
              filter_curve(points=args.curve_points))
    print(f"wrote {len(rows)} rows to {out / 'scaling.csv'}")
    return EXIT_OK


def cmd_inject_error(args) -> int:
    cfg = _config_from_args(args)
    h, init = cfg.build()
    run = pipeline.PipelineRun(cfg.method, h, init, cfg.model(), cfg.eps)
    rows = []
    for i in range(args.runs):
        seed = cfg.seed + i
        report, dev = pipeline.inject_oracle_error(run, args.delta_inject, seed)
        bound = report.ledger.oracle_queries * args.delta_inject
        rows.append((i, seed, report.ledger.oracle_queries, dev, bound, dev <= bound))
    out = Path(cfg.output_dir)
    write_csv(out / "deviation.csv", ("run", "seed", "oracle_queries", "deviation", "bound", "within_bound"), rows)
    worst = max(r[3] / r[4] if r[4] else 0.0 for r in rows)
    print(f"{args.runs} runs, worst deviation/bound = {worst:.3e}")
    return EXIT_OK


# parser -------------------------------------------------------------------


def _add_run_flags(p):
    p.add_argument("--config", help="JSON experiment config")
    p.add_argument("--method", choices=METHODS)
    p.add_argument("--regime", choices=[r.value for r in spectral.Regime])
    p.add_argument("--eps", type=float)
    p.add_argument("--tau", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--output-dir", dest="output_dir")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mlqsp", description="Multi-level QSP ground-state preparation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve-phases", help="solve symmetric phase factors for a target filter")
    p.add_argument("--target", help="JSON target spec (kind: golden|level|cleanup|constant|chebyshev-even)")
    p.add_argument("--kind", choices=["golden"], help="shortcut for a built-in target")
    p.add_argument("--eps-prime", type=float, help="solve for a freshly built level filter")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--output-dir", default="out")
    p.set_defaults(func=cmd_solve_phases)

    p = sub.add_parser("build-filter", help="construct and validate a filter")
    p.add_argument("--kind", choices=["level", "cleanup", "standard", "fourier"], required=True)
    p.add_argument("--eps", type=float, default=1e-2)
    p.add_argument("--mu", type=float, default=0.5)
    p.add_argument("--gap", type=float, default=1.0)
    p.add_argument("--h-norm", type=float, default=20.0)
    p.add_argument("--output-dir", default="out")
    p.set_defaults(func=cmd_build_filter)

    p = sub.add_parser("run", help="run one pipeline and write report.json + trace.csv")
    _add_run_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="write scaling.csv and filter_curve.csv")
    p.add_argument("--grid", help="JSON parameter grid (dict of lists or list of dicts)")
    p.add_argument("--methods", default="multilevel,standard_qsp,lcu")
    p.add_argument("--no-simulate", action="store_true")
    p.add_argument("--curve-points", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", help="unused; accepted for symmetry with other subcommands")
    p.add_argument("--output-dir", default="out")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("inject-error", help="seeded per-query perturbation runs")
    _add_run_flags(p)
    p.add_argument("--delta-inject", type=float, default=1e-6)
    p.add_argument("--runs", type=int, default=10)
    p.set_defaults(func=cmd_inject_error)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PreconditionError, InvalidArgumentError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (SolverError, FilterConstructionError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
