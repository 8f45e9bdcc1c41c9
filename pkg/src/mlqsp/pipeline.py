"""End-to-end ground-state preparation pipelines simulated in the eigenbasis.

Every circuit here acts eigenvalue-wise, so a pipeline is a sequence of
per-eigenvalue scalar (or 2x2) factors applied to the amplitude vector.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidArgumentError, PreconditionError
from .filters import (
    FilterPolynomial,
    FourierFilter,
    build_cleanup_filter,
    build_heaviside_fourier,
    build_level_filter,
    build_standard_filter,
    eval_filter,
)
from .qsp import (
    PhaseFactorSet,
    induced_polynomial,
    qetu_filter_values,
    qetu_global_sign,
    solve_symmetric_phase_factors,
)
from .spectral import (
    FastForwardModel,
    InitialState,
    QueryLedger,
    Regime,
    SpectralHamiltonian,
    query_cost,
    shift_spectrum,
)
from .tables import csv_text

TRACE_COLUMNS = ("level", "t", "norm_sq", "ground_amp", "oracle_queries_cum")


@dataclass
class LevelState:
    """Unnormalized system amplitudes after ``level`` filtering stages."""

    amplitudes: np.ndarray
    eigenvalues: np.ndarray
    level: int = 0
    norm_sq: float = field(init=False)

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        self.eigenvalues = np.asarray(self.eigenvalues, dtype=float)
        if self.amplitudes.shape != self.eigenvalues.shape:
            raise InvalidArgumentError("amplitudes and eigenvalues must have the same length")
        self.norm_sq = float(np.vdot(self.amplitudes, self.amplitudes).real)
        if self.norm_sq > 1 + 1e-10:
            raise InvalidArgumentError(f"state norm^2 {self.norm_sq!r} exceeds 1")

    @classmethod
    def initial(cls, h: SpectralHamiltonian, init: InitialState) -> "LevelState":
        if init.amplitudes.size != h.dim:
            raise InvalidArgumentError("initial state dimension does not match the Hamiltonian")
        return cls(np.array(init.amplitudes), h.eigenvalues, 0)

    def scaled(self, factors, level=None) -> "LevelState":
        return LevelState(self.amplitudes * factors, self.eigenvalues,
                          self.level + 1 if level is None else level)


@dataclass(frozen=True)
class TraceRow:
    level: int
    t: float
    norm_sq: float
    ground_amp: float
    oracle_queries_cum: int
    stage: str = "level"

    def values(self):
        return (self.level, self.t, self.norm_sq, self.ground_amp, self.oracle_queries_cum)


@dataclass
class CounterRegister:
    """Counter register of the compression gadget.

    ``amplitudes`` has shape ``(2, 2**width, K)``: QETU ancilla, counter
    value, eigenvalue index.
    """

    width: int
    amplitudes: np.ndarray

    @property
    def probabilities(self) -> np.ndarray:
        """Squared norm carried by each counter value."""
        return np.sum(np.abs(self.amplitudes) ** 2, axis=(0, 2))

    def branch(self, ancilla: int, value: int) -> np.ndarray:
        return self.amplitudes[ancilla, value]


@dataclass
class RunReport:
    """Outcome of one pipeline run."""

    method: str
    final_state: LevelState
    ledger: QueryLedger
    level_trace: list
    shift: float = 0.0
    warnings: list = field(default_factory=list)
    repetitions: Optional[int] = None
    aa_rounds: Optional[int] = None
    degrees: dict = field(default_factory=dict)
    counter: Optional[CounterRegister] = None

    @property
    def ground_overlap(self) -> float:
        return float(abs(self.final_state.amplitudes[0]))

    @property
    def success_probability(self) -> float:
        return self.final_state.norm_sq

    @property
    def fidelity(self) -> float:
        n = math.sqrt(self.final_state.norm_sq)
        return 0.0 if n == 0 else min(1.0, self.ground_overlap / n)

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "fidelity": self.fidelity,
            "ground_overlap": self.ground_overlap,
            "success_probability": self.success_probability,
            "shift": self.shift,
            "repetitions": self.repetitions,
            "aa_rounds": self.aa_rounds,
            "degrees": dict(self.degrees),
            "counter_width": None if self.counter is None else self.counter.width,
            "warnings": list(self.warnings),
            "ledger": self.ledger.to_dict(),
            "level_trace": [
                {"level": r.level, "t": r.t, "norm_sq": r.norm_sq, "ground_amp": r.ground_amp,
                 "oracle_queries_cum": r.oracle_queries_cum, "stage": r.stage}
                for r in self.level_trace
            ],
            "final_state": {
                "level": self.final_state.level,
                "eigenvalues": [float(v) for v in self.final_state.eigenvalues],
                "amplitudes": [[float(a.real), float(a.imag)] for a in self.final_state.amplitudes],
            },
        }

    @classmethod
    def from_json(cls, d: dict) -> "RunReport":
        fs = d["final_state"]
        state = LevelState(np.array([complex(re, im) for re, im in fs["amplitudes"]]),
                           np.asarray(fs["eigenvalues"], dtype=float), fs["level"])
        trace = [TraceRow(r["level"], r["t"], r["norm_sq"], r["ground_amp"], r["oracle_queries_cum"],
                          r.get("stage", "level")) for r in d["level_trace"]]
        return cls(d["method"], state, QueryLedger.from_dict(d["ledger"]), trace, d.get("shift", 0.0),
                   list(d.get("warnings", [])), d.get("repetitions"), d.get("aa_rounds"),
                   dict(d.get("degrees", {})))

    def trace_csv(self) -> str:
        return csv_text(TRACE_COLUMNS, [r.values() for r in self.level_trace])


# schedules and preparation ----------------------------------------------


def level_schedule(h_norm: float, mode=Regime.TAU_CUTOFF, gap: Optional[float] = None):
    """Number of levels and times ``t_l = 2^l/||H||``, ``l = 1..L``.

    τ-cutoff: ``L = ceil(log2(||H||/2))``, requires ``||H|| >= π``.
    α-soft: ``L = ceil(log2(π||H||/(4Δ)))``, requires ``gap``.
    """
    mode = Regime(mode)
    if not h_norm > 0:
        raise InvalidArgumentError("spectral radius must be positive")
    if mode is Regime.TAU_CUTOFF:
        if h_norm < math.pi:
            raise PreconditionError(f"multi-level schedule (τ-cutoff) requires ||H|| >= π, got {h_norm:.6g}")
        levels = _ceil_log2(h_norm / 2)
    else:
        if gap is None or not gap > 0:
            raise InvalidArgumentError("α-soft schedule needs a positive gap")
        levels = max(1, _ceil_log2(math.pi * h_norm / (4 * gap)))
    return levels, np.array([2.0**ell / h_norm for ell in range(1, levels + 1)])


def _ceil_log2(v: float) -> int:
    """Smallest integer L with 2**L >= v (exact for powers of two)."""
    m, e = math.frexp(v)
    return e - 1 if m == 0.5 else e


def prepare_hamiltonian(h: SpectralHamiltonian, mode=Regime.TAU_CUTOFF):
    """Shift the spectrum so the ground energy sits in the level filters' pass band.

    Returns ``(hamiltonian, applied_offset)``.
    """
    mode = Regime(mode)
    limit = math.pi / 4 if mode is Regime.TAU_CUTOFF else h.gap / 2
    lam0 = float(h.eigenvalues[0])
    if lam0 <= limit:
        return h, 0.0
    return shift_spectrum(h, -lam0), -lam0


@dataclass(frozen=True)
class Stage:
    phases: PhaseFactorSet
    t: float
    kind: str  # "level" or "cleanup"


@dataclass(frozen=True)
class MultilevelFilters:
    """Phase factors and times for every stage of a multi-level run."""

    times: tuple
    level: FilterPolynomial
    level_phases: PhaseFactorSet
    eps_prime: float
    cleanup: Optional[FilterPolynomial] = None
    cleanup_phases: Optional[PhaseFactorSet] = None
    cleanup_time: Optional[float] = None
    mode: Regime = Regime.TAU_CUTOFF

    @property
    def levels(self) -> int:
        return len(self.times)

    @property
    def stages(self) -> list:
        out = [Stage(self.level_phases, float(t), "level") for t in self.times]
        if self.cleanup_phases is not None:
            out.append(Stage(self.cleanup_phases, float(self.cleanup_time), "cleanup"))
        return out


def build_multilevel_filters(h: SpectralHamiltonian, gamma: float, eps: float, mode=Regime.TAU_CUTOFF,
                             cleanup: bool = True, level_phases: Optional[PhaseFactorSet] = None,
                             solver_tol: float = 1e-10) -> MultilevelFilters:
    """Level filter (ε' = γ·eps), optional clean-up filter, and their phases.

    In τ-cutoff mode the clean-up stage runs at t = 1; in α-soft mode it runs
    at the last level time.
    """
    mode = Regime(mode)
    if not 0 < gamma <= 1 or not 0 < eps < 1:
        raise InvalidArgumentError("need 0 < gamma <= 1 and 0 < eps < 1")
    _, times = level_schedule(h.spectral_radius, mode, h.gap)
    eps_prime = gamma * eps
    if level_phases is None:
        level = build_level_filter(eps_prime)
        level_phases = _cached_phases(level, solver_tol)
    else:
        level = induced_polynomial(level_phases)
    cl = cl_phases = cl_time = None
    if cleanup:
        cl_time = 1.0 if mode is Regime.TAU_CUTOFF else float(times[-1])
        cl = build_cleanup_filter(h.mu * cl_time, h.gap * cl_time, eps_prime)
        cl_phases = _cached_phases(cl, solver_tol)
    return MultilevelFilters(tuple(float(t) for t in times), level, level_phases, eps_prime,
                             cl, cl_phases, cl_time, mode)


_PHASE_CACHE: dict = {}


def _cached_phases(poly: FilterPolynomial, tol: float) -> PhaseFactorSet:
    key = (poly.chebyshev_coeffs.tobytes(), tol)
    if key not in _PHASE_CACHE:
        _PHASE_CACHE[key] = solve_symmetric_phase_factors(poly, tol)
    return _PHASE_CACHE[key]


# single stage -------------------------------------------------------------


def _debit_segments(ledger: QueryLedger, degree: int, t: float, model: FastForwardModel, h_norm: float):
    if degree == 0:
        return
    q, units = query_cost(t, model, h_norm)
    ledger.debit(degree * q, degree * units)


def apply_qetu_level(state: LevelState, phases: PhaseFactorSet, t: float, model: FastForwardModel,
                     ledger: QueryLedger, h_norm: Optional[float] = None) -> LevelState:
    """Multiply each amplitude by ``g(cos(λ_k t/2))`` and debit ``d`` controlled evolutions."""
    if not t > 0:
        raise InvalidArgumentError("evolution time must be positive")
    h_norm = float(np.max(state.eigenvalues)) if h_norm is None else h_norm
    factors = qetu_filter_values(phases, t, state.eigenvalues)
    _debit_segments(ledger, phases.degree, t, model, h_norm)
    return state.scaled(factors)


def _qetu_matrices(qetu_phases, t: float, eigenvalues, perturb=None) -> np.ndarray:
    """Per-eigenvalue 2x2 QETU matrices by direct circuit multiplication.

    Args:
        perturb: optional ``(d, K)`` array of phase errors added to each
            controlled evolution.
    """
    ph = np.asarray(qetu_phases, dtype=float)
    lam = np.asarray(eigenvalues, dtype=float)
    k = lam.size

    def xrot(p):
        c, s = math.cos(p), math.sin(p)
        return np.array([[c, 1j * s], [1j * s, c]])

    m = np.broadcast_to(xrot(ph[0]), (k, 2, 2)).copy()
    for j in range(1, ph.size):
        sign = 1.0 if j % 2 else -1.0
        ang = sign * t * lam
        if perturb is not None:
            ang = ang + perturb[j - 1]
        # right-multiply by diag(1, e^{i ang}) then by the X-rotation
        m[:, :, 1] *= np.exp(1j * ang)[:, None]
        m = m @ xrot(ph[j])
    return m


# multilevel pipelines -----------------------------------------------------


def _eps_warning(gamma, eps, h_norm, mode, gap):
    mode = Regime(mode)
    arg = h_norm / 2 if mode is Regime.TAU_CUTOFF else math.pi * h_norm / (4 * gap)
    if arg <= 1:
        return None
    bound = math.log(1.5) / (gamma * math.log2(arg))
    if eps > bound:
        return (f"eps={eps:g} exceeds the sufficient bound {bound:.4g} "
                f"(γ·eps·L <= ln(3/2)); the γ/2 overlap guarantee may not hold")
    return None


def _setup_multilevel(h, init, filters, model, eps):
    model = model or FastForwardModel()
    mode = model.regime
    hs, shift = prepare_hamiltonian(h, mode)
    if filters is None:
        filters = build_multilevel_filters(hs, init.overlap, eps, mode)
    notes = []
    w = _eps_warning(init.overlap, eps, hs.spectral_radius, mode, hs.gap)
    if w:
        warnings.warn(w, RuntimeWarning, stacklevel=3)
        notes.append(w)
    if shift:
        notes.append(f"spectrum shifted by {shift:.17g} to place the ground energy in the pass band")
    return hs, shift, filters, model, notes


def _trace_row(state: LevelState, t, ledger, stage):
    return TraceRow(state.level, float(t), state.norm_sq, float(abs(state.amplitudes[0])),
                    ledger.oracle_queries, stage)


def _degrees(filters: MultilevelFilters):
    out = {"level": filters.level_phases.degree}
    if filters.cleanup_phases is not None:
        out["cleanup"] = filters.cleanup_phases.degree
    return out


def run_multilevel_measured(h: SpectralHamiltonian, init: InitialState,
                            filters: Optional[MultilevelFilters] = None,
                            model: Optional[FastForwardModel] = None, eps: float = 1e-2) -> RunReport:
    """Level filters with intermediate measurements, then the clean-up filter.

    The reported state is the unnormalized all-success branch.
    """
    hs, shift, filters, model, notes = _setup_multilevel(h, init, filters, model, eps)
    ledger = QueryLedger(delta=model.delta)
    ledger.note_ancilla(1)
    state = LevelState.initial(hs, init)
    trace = []
    for stage in filters.stages:
        state = apply_qetu_level(state, stage.phases, stage.t, model, ledger, hs.spectral_radius)
        trace.append(_trace_row(state, stage.t, ledger, stage.kind))
    p = state.norm_sq
    reps = math.ceil(math.log(3) / p) if p > 0 else None
    ledger.debit_initial_state(reps or 0)
    return RunReport("multilevel", state, ledger, trace, shift, notes, repetitions=reps,
                     degrees=_degrees(filters))


def counter_width(stages: int) -> int:
    """``ceil(log2(stages + 1))`` qubits, i.e. ``ceil(log2(L + 2))`` with clean-up."""
    return max(1, _ceil_log2(stages + 1))


def _coherent_evolve(hs, init, filters, forced: Optional[Sequence[bool]] = None):
    stages = filters.stages
    n_stage = len(stages)
    width = counter_width(n_stage)
    dim = 2**width
    k = hs.dim
    psi = np.zeros((2, dim, k), dtype=complex)
    psi[0, n_stage % dim] = init.amplitudes
    for s, stage in enumerate(stages):
        m = _qetu_matrices(stage.phases.qetu_phases, stage.t, hs.eigenvalues)
        m = m * qetu_global_sign(stage.phases.degree)
        # ancilla update per eigenvalue: new[a', c, k] = Σ_a m[k, a', a] psi[a, c, k]
        psi = np.einsum("kab,bck->ack", m, psi)
        if forced is not None:
            keep = 0 if forced[s] else 1
            psi[1 - keep] = 0.0
        # conjugated adder: decrement the counter on the success flag
        psi[0] = np.roll(psi[0], -1, axis=0)
    return CounterRegister(width, psi)


def run_multilevel_coherent(h: SpectralHamiltonian, init: InitialState,
                            filters: Optional[MultilevelFilters] = None,
                            model: Optional[FastForwardModel] = None, eps: float = 1e-2) -> RunReport:
    """Compression-gadget version: all stages coherent, success iff the counter reads 0."""
    hs, shift, filters, model, notes = _setup_multilevel(h, init, filters, model, eps)
    ledger = QueryLedger(delta=model.delta)
    counter = _coherent_evolve(hs, init, filters)
    ledger.note_ancilla(counter.width + 1)
    # replay the stages for the trace and the query count
    trace = []
    for stage in filters.stages:
        _debit_segments(ledger, stage.phases.degree, stage.t, model, hs.spectral_radius)
    state = LevelState(counter.branch(0, 0), hs.eigenvalues, len(filters.stages))
    trace.append(_trace_row(state, filters.stages[-1].t, ledger, "coherent"))
    amp = math.sqrt(state.norm_sq)
    rounds = math.ceil(math.pi / (4 * math.asin(min(1.0, amp)))) if amp > 0 else None
    ledger.debit_initial_state(2 * (rounds or 0) + 1)
    return RunReport("multilevel_coherent", state, ledger, trace, shift, notes, aa_rounds=rounds,
                     degrees=_degrees(filters), counter=counter)


def enumerate_counter_patterns(h: SpectralHamiltonian, init: InitialState, filters: MultilevelFilters):
    """Force every success/failure pattern and record where the counter lands.

    Returns a list of ``(pattern, occupied_counter_values)`` where the
    pattern is a tuple of booleans (True = success) per stage.
    """
    n_stage = len(filters.stages)
    out = []
    for pattern in itertools.product((True, False), repeat=n_stage):
        reg = _coherent_evolve(h, init, filters, forced=pattern)
        probs = reg.probabilities
        occupied = tuple(int(v) for v in np.nonzero(probs > 1e-300)[0])
        out.append((pattern, occupied))
    return out


# baselines ----------------------------------------------------------------


def run_standard_qsp(h: SpectralHamiltonian, init: InitialState, eps: float = 1e-2,
                     model: Optional[FastForwardModel] = None,
                     filt: Optional[FilterPolynomial] = None) -> RunReport:
    """One sharp even filter driven by ``exp(-iH/||H||)``, applied as a polynomial."""
    model = model or FastForwardModel()
    h_norm = h.spectral_radius
    if filt is None:
        filt = build_standard_filter(h_norm, h.mu, h.gap, init.overlap * eps)
    t = 1.0 / h_norm
    ledger = QueryLedger(delta=model.delta)
    ledger.note_ancilla(2)
    state = LevelState.initial(h, init)
    state = state.scaled(eval_filter(filt, np.cos(h.eigenvalues * t / 2)))
    _debit_segments(ledger, filt.degree, t, model, h_norm)
    p = state.norm_sq
    amp = math.sqrt(p)
    rounds = math.ceil(math.pi / (4 * math.asin(min(1.0, amp)))) if amp > 0 else None
    ledger.debit_initial_state(2 * (rounds or 0) + 1)
    trace = [_trace_row(state, t, ledger, "standard")]
    return RunReport("standard_qsp", state, ledger, trace, 0.0, [], aa_rounds=rounds,
                     degrees={"standard": filt.degree})


def select_cost(degree: int, model: FastForwardModel, h_norm: float) -> tuple[int, float]:
    """Queries and gate units for controlled ``exp(±i 2^l H/||H||)``, ``l = 0..ceil(log2(2d+1))``."""
    top = _ceil_log2(2 * degree + 1)
    q = units = 0
    for ell in range(top + 1):
        dq, du = query_cost(2.0**ell / h_norm, model, h_norm)
        q += dq
        units += du
    return 2 * q, 2 * units


def lcu_resources(filt: FourierFilter, gamma: float, eps: float) -> dict:
    """T-gate and ancilla estimates for the coefficient-loading oracle."""
    eps_tilde = gamma * eps / filt.one_norm
    log_inv = math.log2(1 / eps_tilde)
    return {
        "eps_tilde": eps_tilde,
        "t_gates": filt.degree + log_inv,
        "ancilla": _ceil_log2(2 * filt.degree + 2) + math.ceil(log_inv),
    }


def run_lcu(h: SpectralHamiltonian, init: InitialState, eps: float = 1e-2,
            model: Optional[FastForwardModel] = None, filt: Optional[FourierFilter] = None) -> RunReport:
    """Apply ``f(H)/||c||_1`` with the odd-harmonic Fourier step filter."""
    model = model or FastForwardModel()
    h_norm = h.spectral_radius
    if not h.gap / h_norm < math.pi / 2:
        raise PreconditionError(f"LCU filter requires Δ/||H|| < π/2, got {h.gap / h_norm:.6g}")
    if filt is None:
        filt = build_heaviside_fourier(h_norm, h.mu, h.gap, init.overlap * eps)
    ledger = QueryLedger(delta=model.delta)
    state = LevelState.initial(h, init)
    vals = eval_filter(filt, h.eigenvalues)
    state = state.scaled(vals / filt.one_norm)
    q, units = select_cost(filt.degree, model, h_norm)
    ledger.debit(q, units)
    res = lcu_resources(filt, init.overlap, eps)
    ledger.add_t_gates(res["t_gates"])
    ledger.note_ancilla(res["ancilla"])
    p = state.norm_sq
    reps = math.ceil(math.log(3) / p) if p > 0 else None
    ledger.debit_initial_state(reps or 0)
    trace = [_trace_row(state, float(filt.times[1]), ledger, "lcu")]
    return RunReport("lcu", state, ledger, trace, 0.0, [], repetitions=reps,
                     degrees={"fourier": filt.degree, "one_norm": filt.one_norm})


# error injection ----------------------------------------------------------


@dataclass
class PipelineRun:
    """Everything needed to rerun a pipeline deterministically."""

    method: str
    hamiltonian: SpectralHamiltonian
    initial_state: InitialState
    model: FastForwardModel = field(default_factory=FastForwardModel)
    eps: float = 1e-2
    filters: Optional[object] = None

    def execute(self) -> RunReport:
        if self.method == "multilevel":
            return run_multilevel_measured(self.hamiltonian, self.initial_state, self.filters, self.model, self.eps)
        if self.method == "multilevel_coherent":
            return run_multilevel_coherent(self.hamiltonian, self.initial_state, self.filters, self.model, self.eps)
        if self.method == "standard_qsp":
            return run_standard_qsp(self.hamiltonian, self.initial_state, self.eps, self.model, self.filters)
        if self.method == "lcu":
            return run_lcu(self.hamiltonian, self.initial_state, self.eps, self.model, self.filters)
        raise InvalidArgumentError(f"unknown method {self.method!r}")


def _perturbed_multilevel(run: PipelineRun, delta: float, rng: np.random.Generator):
    hs, _, filters, model, _ = _setup_multilevel(run.hamiltonian, run.initial_state, run.filters,
                                                 run.model, run.eps)
    amp_exact = np.array(run.initial_state.amplitudes)
    amp_pert = amp_exact.copy()
    for stage in filters.stages:
        d = stage.phases.degree
        r, _ = query_cost(stage.t, model, hs.spectral_radius) if d else (0, 0)
        # each controlled evolution is r queries, each with its own phase error
        eta = rng.uniform(-delta, delta, size=(d, r, hs.dim)).sum(axis=1)
        sign = qetu_global_sign(d)
        m0 = _qetu_matrices(stage.phases.qetu_phases, stage.t, hs.eigenvalues)
        m1 = _qetu_matrices(stage.phases.qetu_phases, stage.t, hs.eigenvalues, eta)
        amp_exact = sign * m0[:, 0, 0] * amp_exact
        amp_pert = sign * m1[:, 0, 0] * amp_pert
    return amp_exact, amp_pert


def _perturbed_lcu(run: PipelineRun, report: RunReport, delta: float, rng: np.random.Generator):
    h = run.hamiltonian
    filt = run.filters or build_heaviside_fourier(h.spectral_radius, h.mu, h.gap, run.initial_state.overlap * run.eps)
    model = run.model
    amp0 = np.array(run.initial_state.amplitudes)
    exact = np.zeros_like(amp0)
    pert = np.zeros_like(amp0)
    for ck, idx, tk in zip(filt.coefficients, filt.indices, filt.times):
        evo = np.exp(-1j * h.eigenvalues * tk)
        n_queries = 0
        bits = abs(int(idx))
        ell = 0
        while bits:
            if bits & 1:
                n_queries += query_cost(2.0**ell / h.spectral_radius, model, h.spectral_radius)[0]
            bits >>= 1
            ell += 1
        eta = rng.uniform(-delta, delta, size=(n_queries, h.dim)).sum(axis=0)
        exact += ck * evo * amp0
        pert += ck * evo * np.exp(1j * eta) * amp0
    return exact / filt.one_norm, pert / filt.one_norm


def inject_oracle_error(run: PipelineRun, delta: float, seed=None):
    """Rerun with every oracle query replaced by a perturbed unitary.

    Each query multiplies eigencomponent ``k`` by ``exp(i η_k)`` with
    ``|η_k| <= delta`` drawn from a seeded generator, so the perturbed query
    is within operator distance ``delta`` of the exact one.

    Returns:
        (report, deviation) where deviation is the 2-norm distance between
        the perturbed and exact final unnormalized states.
    """
    if not delta >= 0:
        raise InvalidArgumentError("delta must be nonnegative")
    rng = np.random.default_rng(seed)
    model = FastForwardModel(run.model.tau, run.model.alpha, delta, run.model.regime)
    run = PipelineRun(run.method, run.hamiltonian, run.initial_state, model, run.eps, run.filters)
    report = run.execute()
    if run.method in ("multilevel", "multilevel_coherent"):
        exact, pert = _perturbed_multilevel(run, delta, rng)
    elif run.method == "lcu":
        exact, pert = _perturbed_lcu(run, report, delta, rng)
    else:
        raise InvalidArgumentError(f"error injection is not supported for method {run.method!r}")
    return report, float(np.linalg.norm(pert - exact))
