"""Exact SU(2) evaluation of QETU/QSP circuits and a symmetric phase-factor solver.

Two phase conventions are used:

* ``"qetu"``: angles of the X-rotations interleaved with controlled
  evolutions, ``M = e^{iφ_0 X} Π_j [D_j e^{iφ_j X}]`` where ``D_j`` is
  ``diag(1, e^{itλ})`` for odd ``j`` and ``diag(1, e^{-itλ})`` for even ``j``.
* ``"qsp"``: Z-phases of the standard product
  ``W(x) = e^{iϕ_0 Z} Π_j [e^{iθX} e^{iϕ_j Z}]`` with ``θ = arccos x``.

For even ``d >= 2`` and symmetric phases, ``M_00 = (-1)^{d/2} Re W_00(x)`` at
``x = cos(tλ/2)``, with ``ϕ_j = φ_j - π/2`` in the interior and ``ϕ_j = φ_j - π/4``
at both ends.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import Optional

import numpy as np

from .errors import InvalidArgumentError, PreconditionError, SolverError
from .filters import BOUND_SLACK, FilterPolynomial, even_chebyshev_fit, eval_filter

CONVENTIONS = ("qetu", "qsp")

# degree-20 QETU phases (first half; the table is symmetric)
_GOLDEN_HALF = (
    1.5641113, 1.5804045, 1.5942229, 1.5741280, 1.5233379, 1.5189284,
    1.6198455, 1.7237235, 1.5881872, 1.1064466, 0.7862644,
)
GOLDEN_LINF_ERROR = 0.01333


def _is_symmetric(v, atol=1e-12):
    return bool(np.allclose(v, v[::-1], rtol=0, atol=atol))


def _end_shifts(degree):
    """Offsets such that qsp = qetu - shift."""
    shift = np.full(degree + 1, math.pi / 2)
    if degree == 0:
        # no controlled evolutions, the two conventions coincide
        shift[0] = 0.0
    else:
        shift[0] = shift[-1] = math.pi / 4
    return shift


@dataclass(frozen=True)
class PhaseFactorSet:
    """Symmetric phase factors of an even-degree circuit.

    Attributes:
        phases: the ``d+1`` angles in radians, in ``convention``.
        convention: ``"qetu"`` or ``"qsp"``.
        residual: max node residual reported by the solver, if any.
    """

    phases: np.ndarray
    convention: str = "qetu"
    residual: Optional[float] = None

    def __post_init__(self):
        v = np.atleast_1d(np.asarray(self.phases, dtype=float)).copy()
        if v.ndim != 1 or v.size == 0:
            raise InvalidArgumentError("phases must be a nonempty vector")
        if self.convention not in CONVENTIONS:
            raise InvalidArgumentError(f"convention must be one of {CONVENTIONS}")
        if (v.size - 1) % 2:
            raise InvalidArgumentError(f"degree must be even, got {v.size - 1}")
        if not _is_symmetric(v):
            raise InvalidArgumentError("phase factors must be symmetric")
        v.setflags(write=False)
        object.__setattr__(self, "phases", v)

    @property
    def degree(self) -> int:
        return self.phases.size - 1

    @property
    def qetu_phases(self) -> np.ndarray:
        return self.phases if self.convention == "qetu" else self.phases + _end_shifts(self.degree)

    @property
    def qsp_phases(self) -> np.ndarray:
        return self.phases if self.convention == "qsp" else self.phases - _end_shifts(self.degree)

    def to_json(self) -> dict:
        out = {"convention": self.convention, "degree": self.degree,
               "phases": [float(v) for v in self.phases]}
        if self.residual is not None:
            out["residual"] = float(self.residual)
        return out

    @classmethod
    def from_json(cls, d: dict) -> "PhaseFactorSet":
        ps = cls(np.asarray(d["phases"], dtype=float), d.get("convention", "qetu"), d.get("residual"))
        if "degree" in d and d["degree"] != ps.degree:
            raise InvalidArgumentError("degree does not match number of phases")
        return ps


@dataclass(frozen=True)
class Su2Response:
    """First row of the QSP unitary at ``x``: ``(g + ih, i q sqrt(1-x²))``."""

    g_val: float
    h_val: float
    q_val: float
    x: float

    def row_norm(self) -> float:
        return self.g_val**2 + self.h_val**2 + self.q_val**2 * (1 - self.x**2)


def convert_phases(phases: PhaseFactorSet, direction: Optional[str] = None) -> PhaseFactorSet:
    """Switch a phase set to the other convention.

    Args:
        direction: ``"to_qsp"``, ``"to_qetu"`` or None to flip whatever the
            set currently uses.
    """
    if direction is None:
        direction = "to_qsp" if phases.convention == "qetu" else "to_qetu"
    if direction == "to_qsp":
        return PhaseFactorSet(phases.qsp_phases, "qsp", phases.residual)
    if direction == "to_qetu":
        return PhaseFactorSet(phases.qetu_phases, "qetu", phases.residual)
    raise InvalidArgumentError(f"unknown direction {direction!r}")


def _check_x(x):
    if not np.all(np.abs(np.asarray(x)) <= 1 + 1e-14):
        raise InvalidArgumentError("QSP signal x must satisfy |x| <= 1")


def qsp_unitary(phases_qsp, x) -> np.ndarray:
    """``e^{iϕ_0 Z} Π_j [e^{iθX} e^{iϕ_j Z}]`` with ``θ = arccos x``, as a 2x2 matrix."""
    _check_x(x)
    x = float(np.clip(x, -1.0, 1.0))
    s = math.sqrt(1 - x * x)
    rot = np.array([[x, 1j * s], [1j * s, x]])
    ph = np.asarray(phases_qsp, dtype=float)
    u = np.diag([np.exp(1j * ph[0]), np.exp(-1j * ph[0])])
    for p in ph[1:]:
        u = u @ rot @ np.diag([np.exp(1j * p), np.exp(-1j * p)])
    return u


def qsp_first_row(phases_qsp, xs):
    """First row ``(W_00, W_01)`` of the QSP unitary for many ``x`` at once.

    ``phases_qsp`` may be 1-D or a stack of phase vectors (rows); the result
    broadcasts to ``(..., len(xs))``.
    """
    ph = np.asarray(phases_qsp, dtype=float)
    xs = np.clip(np.asarray(xs, dtype=float), -1.0, 1.0)
    c = xs
    s = np.sqrt(1 - xs * xs)
    e0 = np.exp(1j * ph[..., 0])[..., None]
    a = e0 * np.ones_like(xs)
    b = np.zeros_like(a)
    for j in range(1, ph.shape[-1]):
        a, b = a * c + 1j * b * s, 1j * a * s + b * c
        e = np.exp(1j * ph[..., j])[..., None]
        a = a * e
        b = b / e
    return a, b


def qsp_poly_values(phases_qsp, xs) -> np.ndarray:
    """``g(x) = Re W_00(x)`` for the given QSP phases."""
    return qsp_first_row(phases_qsp, xs)[0].real


def qetu_matrix(qetu_phases, t: float, lam: float) -> np.ndarray:
    """Direct product of the QETU circuit factors for one eigenvalue."""
    ph = np.asarray(qetu_phases, dtype=float)

    def xrot(p):
        return np.array([[math.cos(p), 1j * math.sin(p)], [1j * math.sin(p), math.cos(p)]])

    fwd = np.diag([1.0, np.exp(1j * t * lam)])
    bwd = np.diag([1.0, np.exp(-1j * t * lam)])
    m = xrot(ph[0])
    for j in range(1, ph.size):
        m = m @ (fwd if j % 2 else bwd) @ xrot(ph[j])
    return m


def qetu_global_sign(degree: int) -> int:
    return -1 if (degree // 2) % 2 else 1


def qetu_response(phases: PhaseFactorSet, t: float, lam: float) -> Su2Response:
    """QETU response at ``x = cos(tλ/2)``, evaluated through the QSP form."""
    x = math.cos(t * lam / 2)
    w = qsp_unitary(phases.qsp_phases, x)
    s = math.sqrt(max(0.0, 1 - x * x))
    q = float(w[0, 1].imag / s) if s > 1e-300 else 0.0
    return Su2Response(float(w[0, 0].real), float(w[0, 0].imag), q, x)


def qetu_filter_values(phases: PhaseFactorSet, t: float, eigenvalues) -> np.ndarray:
    """``g(cos(tλ_k/2))`` for every eigenvalue, vectorized."""
    xs = np.cos(t * np.asarray(eigenvalues, dtype=float) / 2)
    return qsp_poly_values(phases.qsp_phases, xs)


def golden_phase_table() -> PhaseFactorSet:
    """The tabulated degree-20 QETU phase factors (L∞ band error ≈ 0.01333)."""
    half = np.array(_GOLDEN_HALF)
    return PhaseFactorSet(np.concatenate([half, half[-2::-1]]), "qetu")


def load_golden_fixture() -> PhaseFactorSet:
    """Same table, read from the JSON fixture shipped with the package."""
    text = resources.files("mlqsp").joinpath("data/golden_phases.json").read_text()
    return PhaseFactorSet.from_json(json.loads(text))


def induced_polynomial(phases: PhaseFactorSet) -> FilterPolynomial:
    """Chebyshev coefficients of ``g`` realized by the phases (exact interpolation)."""
    n = phases.degree // 2
    if n == 0:
        return FilterPolynomial(np.array([math.cos(phases.qsp_phases[0])]))
    theta = np.pi * np.arange(n + 1) / (2 * n)
    return FilterPolynomial(even_chebyshev_fit(qsp_poly_values(phases.qsp_phases, np.cos(theta))))


def chebyshev_nodes(n: int) -> np.ndarray:
    """The ``n+1`` positive roots of ``T_{2n+2}``."""
    j = np.arange(1, n + 2)
    return np.cos((2 * j - 1) * np.pi / (4 * (n + 1)))


def _expand(reduced):
    return np.concatenate([reduced, reduced[..., -2::-1]], axis=-1)


def solve_symmetric_phase_factors(target: FilterPolynomial, tol: float = 1e-10,
                                  max_iter: int = 500, fd_step: float = 1e-7) -> PhaseFactorSet:
    """Symmetric QSP phases whose induced polynomial matches ``target`` at nodes.

    Damped Gauss-Newton (Levenberg-Marquardt) on ``ϕ_0 .. ϕ_{d/2}`` with a
    central-difference Jacobian.

    Raises:
        PreconditionError: ``|target| > 1`` somewhere on ``[-1, 1]``.
        SolverError: no convergence within ``max_iter``; carries the best
            residual and phases found.
    """
    grid = np.cos(np.pi * (np.arange(4001) + 0.5) / 4001)
    sup = float(np.max(np.abs(eval_filter(target, grid))))
    if sup > 1 + BOUND_SLACK:
        raise PreconditionError(f"target exceeds 1 in magnitude (max |g| = {sup:.6g})")
    d = target.degree
    n = d // 2
    nodes = chebyshev_nodes(n)
    y = eval_filter(target, nodes)

    if n == 0:
        phi0 = math.acos(float(np.clip(y[0], -1, 1)))
        res = abs(math.cos(phi0) - y[0])
        return convert_phases(PhaseFactorSet([phi0], "qsp", res), "to_qetu")

    def resid(red):
        return qsp_poly_values(_expand(red), nodes) - y

    def jacobian(red):
        k = red.size
        pert = np.repeat(red[None, :], 2 * k, axis=0)
        pert[np.arange(k), np.arange(k)] += fd_step
        pert[k + np.arange(k), np.arange(k)] -= fd_step
        vals = qsp_poly_values(_expand(pert), nodes)
        return ((vals[:k] - vals[k:]) / (2 * fd_step)).T

    red = np.zeros(n + 1)
    red[0] = math.pi / 4
    r = resid(red)
    obj = float(r @ r)
    damping = 1e-3
    for _ in range(max_iter):
        if obj < tol**2:
            break
        jac = jacobian(red)
        a = jac.T @ jac
        grad = jac.T @ r
        diag = np.maximum(np.diag(a), 1e-12)
        while True:
            step = np.linalg.solve(a + damping * np.diag(diag), -grad)
            cand = red + step
            rc = resid(cand)
            oc = float(rc @ rc)
            if oc < obj:
                red, r, obj = cand, rc, oc
                damping = max(damping / 3, 1e-12)
                break
            damping *= 4
            if damping > 1e12:
                break
        if damping > 1e12:
            break
    best = float(np.max(np.abs(r)))
    result = PhaseFactorSet(_expand(red), "qsp", best)
    if obj >= tol**2:
        raise SolverError(
            f"phase solver stalled at max node residual {best:.3e} (tol {tol:g}, degree {d})",
            best_residual=best,
            phases=convert_phases(result, "to_qetu"),
        )
    return convert_phases(result, "to_qetu")
