"""Closed-form cost estimates for the three preparation methods.

These are scaling references, not gate counts: every implied constant is set
to 1, logarithms are base 2, and every estimate includes the ``1/γ`` factor of
amplitude amplification.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import asdict, dataclass
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .errors import InvalidArgumentError
from .spectral import FastForwardModel, Regime, query_cost
from .tables import write_csv

TABLE_COLUMNS = ("method", "regime", "H_norm", "gap", "gamma", "eps", "tau", "alpha",
                 "oracle_queries", "gate_units", "t_gates", "ancilla", "oi_queries")


class Method(str, enum.Enum):
    MULTILEVEL = "multilevel"
    LCU = "lcu"
    STANDARD_QSP = "standard_qsp"


@dataclass(frozen=True)
class CostEstimate:
    method: Method
    regime: Regime
    oracle_queries: float
    gate_units: float
    t_gates: float
    ancilla: int
    oi_queries: float

    def __post_init__(self):
        for name in ("oracle_queries", "gate_units", "t_gates", "oi_queries"):
            if getattr(self, name) < 0:
                raise InvalidArgumentError(f"{name} must be nonnegative")
        if self.ancilla < 0 or int(self.ancilla) != self.ancilla:
            raise InvalidArgumentError("ancilla must be a nonnegative integer")


def _ceil_log2(v: float) -> int:
    m, e = math.frexp(v)
    return e - 1 if m == 0.5 else e


def _check_common(h_norm, gap, gamma, eps, tau, alpha):
    if not (h_norm > 0 and gap > 0):
        raise InvalidArgumentError("H_norm and gap must be positive")
    if not 0 < gamma <= 1:
        raise InvalidArgumentError("gamma must lie in (0, 1]")
    if not 0 < eps < 1:
        raise InvalidArgumentError("eps must lie in (0, 1)")
    if not tau > 0:
        raise InvalidArgumentError("tau must be positive")
    if not 0 <= alpha <= 1:
        raise InvalidArgumentError("alpha must lie in [0, 1]")


def _cost(t, tau, alpha, h_norm):
    return query_cost(t, FastForwardModel(tau=tau, alpha=alpha), h_norm)


def _multilevel(regime, h_norm, gap, gamma, eps, tau, alpha):
    log_term = math.log2(1 / (gamma * eps))
    if regime is Regime.TAU_CUTOFF:
        if h_norm < math.pi:
            raise InvalidArgumentError("multi-level estimate (τ-cutoff) requires ||H|| >= π")
        levels = _ceil_log2(h_norm / 2)
        q = units = 0.0
        for ell in range(1, levels + 1):
            dq, du = _cost(2.0**ell / h_norm, tau, alpha, h_norm)
            q += dq
            units += du
        # clean-up filter of degree ~ 1/Δ at t = 1
        dq, du = _cost(1.0, tau, alpha, h_norm)
        q += dq / gap
        units += du / gap
    else:
        levels = max(1, _ceil_log2(math.pi * h_norm / (4 * gap)))
        q = float(levels)
        units = sum((2.0**ell) ** alpha for ell in range(1, levels + 1))
    return CostEstimate(Method.MULTILEVEL, regime, log_term * q / gamma, log_term * units / gamma,
                        0.0, _ceil_log2(levels + 2) + 1, 1 / gamma)


def _lcu(regime, h_norm, gap, gamma, eps, tau, alpha):
    if not gap / h_norm < math.pi / 2:
        raise InvalidArgumentError("LCU estimate requires Δ/||H|| < π/2")
    ratio = h_norm / gap
    d0 = ratio * math.log2(1 / (gamma * eps))
    one_norm = max(1.0, math.log2(d0))
    eps_tilde = gamma * eps / one_norm
    log_inv = math.log2(1 / eps_tilde)
    degree = ratio * log_inv
    top = _ceil_log2(2 * degree + 1)
    q = units = 0.0
    for ell in range(top + 1):
        if regime is Regime.TAU_CUTOFF:
            dq, du = _cost(2.0**ell / h_norm, tau, alpha, h_norm)
        else:
            dq, du = 1, (2.0**ell) ** alpha
        q += dq
        units += du
    # SELECT depth carries the 1-norm factor of amplification; the
    # coefficient-loading T count is repeated only 1/γ times
    scale = one_norm / gamma
    return CostEstimate(Method.LCU, regime, 2 * q * scale, 2 * units * scale,
                        (degree + log_inv) / gamma,
                        max(1, math.ceil(math.log2(h_norm / (gap * gamma * eps)))), scale)


def _standard(regime, h_norm, gap, gamma, eps, tau, alpha):
    degree = h_norm / gap * math.log2(1 / (gamma * eps))
    dq, du = _cost(1 / h_norm, tau if regime is Regime.TAU_CUTOFF else math.inf, alpha, h_norm)
    return CostEstimate(Method.STANDARD_QSP, regime, degree * dq / gamma, degree * du / gamma,
                        0.0, 2, 1 / gamma)


def estimate(method, regime, H_norm, gap, gamma, eps, tau=math.inf, alpha=0.0) -> CostEstimate:
    """Evaluate the complexity expression of ``method`` with unit constants.

    Args:
        method: "multilevel", "lcu" or "standard_qsp".
        regime: "tau_cutoff" or "alpha_soft". In α-soft mode ``tau`` is
            ignored (every evolution is a single query).
    """
    method, regime = Method(method), Regime(regime)
    _check_common(H_norm, gap, gamma, eps, tau, alpha)
    fn = {Method.MULTILEVEL: _multilevel, Method.LCU: _lcu, Method.STANDARD_QSP: _standard}[method]
    return fn(regime, float(H_norm), float(gap), float(gamma), float(eps), float(tau), float(alpha))


def expand_grid(grid: Union[Mapping, Sequence[Mapping]]) -> list:
    """A dict of lists becomes its cartesian product; a list of dicts passes through."""
    if isinstance(grid, Mapping):
        keys = list(grid)
        vals = [v if isinstance(v, (list, tuple)) else [v] for v in grid.values()]
        return [dict(zip(keys, combo)) for combo in itertools.product(*vals)]
    return [dict(g) for g in grid]


_DEFAULTS = {"regime": "tau_cutoff", "gamma": 1.0, "eps": 1e-2, "tau": math.inf, "alpha": 0.0, "gap": 1.0}


def scaling_table(methods: Iterable, grid, simulated: Optional[Callable] = None) -> list:
    """One row per (method, grid point).

    Args:
        simulated: optional ``simulated(method, params) -> oracle queries``;
            adds ``simulated_queries`` and ``ratio`` (simulated / estimate).
    """
    points = expand_grid(grid)
    if not points:
        raise InvalidArgumentError("parameter grid is empty")
    rows = []
    for method in methods:
        for p in points:
            params = {**_DEFAULTS, **p}
            est = estimate(method, params["regime"], params["H_norm"], params["gap"], params["gamma"],
                           params["eps"], params["tau"], params["alpha"])
            row = {
                "method": Method(method).value, "regime": Regime(params["regime"]).value,
                "H_norm": float(params["H_norm"]), "gap": float(params["gap"]),
                "gamma": float(params["gamma"]), "eps": float(params["eps"]),
                "tau": float(params["tau"]), "alpha": float(params["alpha"]),
                "oracle_queries": est.oracle_queries, "gate_units": est.gate_units,
                "t_gates": est.t_gates, "ancilla": int(est.ancilla), "oi_queries": est.oi_queries,
            }
            if simulated is not None:
                sim = simulated(Method(method).value, params)
                row["simulated_queries"] = sim
                row["ratio"] = None if sim is None else sim / est.oracle_queries
            rows.append(row)
    return rows


def write_table(path, rows: list):
    header = list(TABLE_COLUMNS)
    for extra in ("simulated_queries", "ratio"):
        if rows and extra in rows[0]:
            header.append(extra)
    return write_csv(path, header, [[r.get(c) for c in header] for r in rows])


def trotter_steps(queries: int, eps: float, c_t: float, order: int) -> int:
    """Trotter steps r with ``queries · C_T r^{-p} <= eps``."""
    if queries <= 0 or not 0 < eps or c_t <= 0 or order <= 0:
        raise InvalidArgumentError("queries, eps, c_t and order must be positive")
    return max(1, math.ceil((c_t * queries / eps) ** (1 / order)))


def estimate_dict(est: CostEstimate) -> dict:
    d = asdict(est)
    d["method"] = est.method.value
    d["regime"] = est.regime.value
    return d
