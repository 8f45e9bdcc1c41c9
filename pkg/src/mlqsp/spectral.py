"""Spectral Hamiltonian model, fast-forwarding oracle model and query bookkeeping.

Hamiltonians are held in their eigenbasis. Every circuit in this package acts
eigenvalue-wise, so a list of eigenvalues plus the gap window (mu, gap) is an
exact representation for simulation purposes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, InvalidArgumentError

# slack for float comparisons on user-supplied spectra
_SPEC_TOL = 1e-12


class Regime(str, enum.Enum):
    """How oracle queries are charged.

    TAU_CUTOFF: evolution up to time tau costs one query; longer evolutions are
    stitched from ceil(t/tau) queries.  ALPHA_SOFT: tau exceeds every evolution
    time, each query costs (|t| * ||H||)**alpha gate units.
    """

    TAU_CUTOFF = "tau_cutoff"
    ALPHA_SOFT = "alpha_soft"


@dataclass(frozen=True)
class SpectralHamiltonian:
    """Hamiltonian given by its spectrum and a gap window around ``mu``.

    Attributes:
        eigenvalues: sorted eigenvalues, ground state first.
        mu: centre of the gap window.
        gap: width of the gap window; ``lambda_0 <= mu - gap/2`` and
            ``mu + gap/2 <= lambda_1``.
        shift: cumulative offset applied through :func:`shift_spectrum`.
        basis: optional eigenvector matrix (columns) when ingested from a
            dense matrix; ``None`` for purely spectral input.
    """

    eigenvalues: np.ndarray
    mu: float
    gap: float
    shift: float = 0.0
    basis: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=float).copy()
        lam.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "gap", float(self.gap))
        self._validate()

    def _validate(self):
        lam = self.eigenvalues
        if lam.ndim != 1 or lam.size < 2:
            raise InvalidArgumentError("need at least two eigenvalues (ground + one excited)")
        if not np.all(np.isfinite(lam)):
            raise InvalidArgumentError("eigenvalues must be finite")
        if np.any(np.diff(lam) < 0):
            raise InvalidArgumentError("eigenvalues must be sorted in ascending order")
        if lam[0] < -_SPEC_TOL:
            raise DomainError(f"eigenvalues must be nonnegative, got lambda_0={lam[0]!r}")
        if not lam[0] < lam[1]:
            raise InvalidArgumentError("degenerate ground state: lambda_0 == lambda_1")
        if not self.gap > 0:
            raise InvalidArgumentError(f"gap must be positive, got {self.gap!r}")
        lo, hi = self.mu - self.gap / 2, self.mu + self.gap / 2
        if lam[0] > lo + _SPEC_TOL or hi > lam[1] + _SPEC_TOL:
            raise InvalidArgumentError(
                f"gap window ({lo:.6g}, {hi:.6g}) must separate lambda_0={lam[0]:.6g} "
                f"from lambda_1={lam[1]:.6g}"
            )

    @property
    def spectral_radius(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.size)

    @classmethod
    def from_dense(cls, matrix, mu=None, gap=None) -> "SpectralHamiltonian":
        """Diagonalize a dense Hermitian matrix and keep the eigenbasis.

        When ``mu``/``gap`` are omitted the window is the full interval between
        the two lowest eigenvalues.
        """
        m = np.asarray(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidArgumentError("dense Hamiltonian must be a square matrix")
        if not np.allclose(m, m.conj().T, atol=1e-10):
            raise InvalidArgumentError("dense Hamiltonian is not Hermitian")
        lam, vecs = np.linalg.eigh(m)
        lam = np.where(np.abs(lam) < _SPEC_TOL, 0.0, lam)
        if gap is None:
            gap = lam[1] - lam[0]
        if mu is None:
            mu = (lam[0] + lam[1]) / 2
        return cls(lam, mu, gap, basis=vecs)

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "mu": self.mu,
            "gap": self.gap,
            "shift": self.shift,
        }


def equally_spaced(n: int, spectral_radius: float, gap: Optional[float] = None) -> SpectralHamiltonian:
    """``n`` equally spaced eigenvalues on ``[0, spectral_radius]``.

    The gap window defaults to the full spacing, centred between the two
    lowest levels.
    """
    lam = np.linspace(0.0, spectral_radius, n)
    spacing = lam[1] - lam[0]
    gap = spacing if gap is None else gap
    return SpectralHamiltonian(lam, lam[0] + spacing / 2, gap)


@dataclass(frozen=True)
class InitialState:
    """Initial guess expanded in the eigenbasis."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex).copy()
        if a.ndim != 1 or a.size == 0:
            raise InvalidArgumentError("amplitudes must be a nonempty vector")
        norm = float(np.vdot(a, a).real)
        if abs(norm - 1.0) > 1e-12:
            raise InvalidArgumentError(f"initial state must be normalized, got norm^2={norm!r}")
        if abs(a[0]) == 0:
            raise InvalidArgumentError("initial state has zero overlap with the ground state")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def overlap(self) -> float:
        return float(abs(self.amplitudes[0]))

    @classmethod
    def uniform(cls, dim: int) -> "InitialState":
        return cls(np.full(dim, 1 / math.sqrt(dim), dtype=complex))

    @classmethod
    def with_overlap(cls, dim: int, gamma: float) -> "InitialState":
        """Ground amplitude ``gamma``; the rest spread evenly over excited states."""
        if not 0 < gamma <= 1:
            raise InvalidArgumentError("gamma must lie in (0, 1]")
        a = np.empty(dim, dtype=complex)
        a[0] = gamma
        a[1:] = math.sqrt((1 - gamma**2) / (dim - 1)) if dim > 1 else 0.0
        a /= np.linalg.norm(a)
        return cls(a)

    @classmethod
    def from_computational(cls, vector, hamiltonian: SpectralHamiltonian) -> "InitialState":
        """Rotate a computational-basis vector into the Hamiltonian eigenbasis."""
        if hamiltonian.basis is None:
            raise InvalidArgumentError("Hamiltonian carries no eigenbasis to rotate into")
        v = np.asarray(vector, dtype=complex)
        return cls(hamiltonian.basis.conj().T @ v)


@dataclass(frozen=True)
class FastForwardModel:
    """Oracle model ``O_H(t)``: cutoff ``tau``, softness ``alpha``, accuracy ``delta``.

    ``tau`` is a user input; nothing in the package derives it from ``||H||``.
    """

    tau: float = math.inf
    alpha: float = 0.0
    delta: float = 0.0
    regime: Regime = Regime.TAU_CUTOFF

    def __post_init__(self):
        object.__setattr__(self, "regime", Regime(self.regime))
        if not self.tau > 0:
            raise InvalidArgumentError(f"tau must be positive, got {self.tau!r}")
        if not 0 <= self.alpha <= 1:
            raise InvalidArgumentError(f"alpha must lie in [0, 1], got {self.alpha!r}")
        if not self.delta >= 0:
            raise InvalidArgumentError(f"delta must be nonnegative, got {self.delta!r}")


@dataclass
class QueryLedger:
    """Running tallies for one pipeline run. Counters only ever increase."""

    delta: float = 0.0
    oracle_queries: int = 0
    gate_units: float = 0.0
    initial_state_queries: int = 0
    ancilla_qubits: int = 0
    t_gates: float = 0.0

    @property
    def accumulated_error(self) -> float:
        return self.oracle_queries * self.delta

    def debit(self, queries: int, gate_units: float) -> None:
        if queries < 0 or gate_units < 0:
            raise InvalidArgumentError("ledger debits must be nonnegative")
        self.oracle_queries += int(queries)
        self.gate_units += float(gate_units)

    def debit_initial_state(self, count: int = 1) -> None:
        self.initial_state_queries += int(count)

    def note_ancilla(self, count: int) -> None:
        self.ancilla_qubits = max(self.ancilla_qubits, int(count))

    def add_t_gates(self, count: float) -> None:
        self.t_gates += float(count)

    def to_dict(self) -> dict:
        return {
            "oracle_queries": self.oracle_queries,
            "gate_units": self.gate_units,
            "initial_state_queries": self.initial_state_queries,
            "ancilla_qubits": self.ancilla_qubits,
            "t_gates": self.t_gates,
            "delta": self.delta,
            "accumulated_error": self.accumulated_error,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "QueryLedger":
        return cls(
            delta=d["delta"],
            oracle_queries=d["oracle_queries"],
            gate_units=d["gate_units"],
            initial_state_queries=d["initial_state_queries"],
            ancilla_qubits=d["ancilla_qubits"],
            t_gates=d.get("t_gates", 0.0),
        )


CEIL_SNAP = 1e-12


def ceil_ratio(t: float, tau: float) -> int:
    """``ceil(t / tau)``, treating quotients within ``CEIL_SNAP`` (relative) of an
    integer as that integer, so decimal inputs like 0.05/0.01 give 5 not 6."""
    if math.isinf(tau):
        return 1
    q = Fraction(t) / Fraction(tau)
    n = round(q)
    if n >= 1 and abs(q - n) <= CEIL_SNAP * n:
        return int(n)
    return math.ceil(q)


def query_cost(t: float, model: FastForwardModel, h_norm: float) -> tuple[int, float]:
    """Oracle queries and gate units needed to synthesize ``exp(-iHt)``.

    The evolution is split into ``r = ceil(t/tau)`` equal slices; each slice
    is one query costing ``(slice * ||H||)**alpha`` gate units.

    Returns:
        (queries, gate_units)
    """
    if not t > 0:
        raise InvalidArgumentError(f"evolution time must be positive, got {t!r}")
    r = ceil_ratio(t, model.tau)
    return r, r * (t / r * h_norm) ** model.alpha


def shift_spectrum(h: SpectralHamiltonian, offset: float) -> SpectralHamiltonian:
    """Add ``offset`` to every eigenvalue and to ``mu``."""
    lam = h.eigenvalues + offset
    if lam[0] < -_SPEC_TOL:
        raise DomainError(f"offset {offset!r} makes lambda_0 negative ({lam[0]!r})")
    lam = np.maximum(lam, 0.0)
    return replace(h, eigenvalues=lam, mu=h.mu + offset, shift=h.shift + offset)


def evolution_phases(h: SpectralHamiltonian, t: float) -> np.ndarray:
    """Diagonal of ``exp(-iHt)`` in the eigenbasis."""
    return np.exp(-1j * h.eigenvalues * t)


def parse_hamiltonian(spec: dict) -> SpectralHamiltonian:
    """Build a Hamiltonian from its JSON form.

    Accepted keys: ``eigenvalues`` or ``dense_hermitian`` (rows of ``[re, im]``
    pairs) or ``equally_spaced`` (``{"n": .., "spectral_radius": ..}``), plus
    optional ``mu`` and ``gap``.
    """
    mu, gap = spec.get("mu"), spec.get("gap")
    if "eigenvalues" in spec:
        lam = np.asarray(spec["eigenvalues"], dtype=float)
        if gap is None:
            gap = lam[1] - lam[0]
        if mu is None:
            mu = (lam[0] + lam[1]) / 2
        return SpectralHamiltonian(lam, mu, gap)
    if "dense_hermitian" in spec:
        rows = spec["dense_hermitian"]
        m = np.array([[complex(re, im) for re, im in row] for row in rows])
        return SpectralHamiltonian.from_dense(m, mu, gap)
    if "equally_spaced" in spec:
        es = spec["equally_spaced"]
        h = equally_spaced(int(es["n"]), float(es["spectral_radius"]), gap)
        return h if mu is None else SpectralHamiltonian(h.eigenvalues, mu, h.gap)
    raise InvalidArgumentError(
        "hamiltonian needs one of 'eigenvalues', 'dense_hermitian', 'equally_spaced'"
    )


def parse_initial_state(spec, hamiltonian: SpectralHamiltonian) -> InitialState:
    """``"uniform"``, ``{"overlap": g}``, ``{"amplitudes": [[re, im], ...]}`` or
    ``{"computational": [[re, im], ...]}`` (dense Hamiltonians only)."""
    if spec is None or spec == "uniform":
        return InitialState.uniform(hamiltonian.dim)
    if isinstance(spec, dict):
        if "overlap" in spec:
            return InitialState.with_overlap(hamiltonian.dim, float(spec["overlap"]))
        if "amplitudes" in spec:
            return InitialState(_complex_vector(spec["amplitudes"]))
        if "computational" in spec:
            return InitialState.from_computational(_complex_vector(spec["computational"]), hamiltonian)
    raise InvalidArgumentError(f"unrecognized initial_state spec: {spec!r}")


def _complex_vector(pairs: Sequence) -> np.ndarray:
    return np.array([complex(p[0], p[1]) if isinstance(p, (list, tuple)) else complex(p) for p in pairs])
