"""Filter functions: even Chebyshev polynomials and odd-harmonic Fourier series.

Even polynomials are stored as coefficients ``a_k`` of ``T_{2k}``, so that
``g(cos θ) = Σ_k a_k cos(2kθ)``. Every band condition is therefore a
condition on a cosine series in ``θ ∈ [0, π/2]``, which is how the builders
below phrase them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np
from numpy.polynomial import chebyshev as C
from scipy.fft import dct
from scipy.optimize import linprog
from scipy.special import erf, erfcinv

from .errors import FilterConstructionError, InvalidArgumentError

# level-filter band edges in the angle θ = arccos(x)
LEVEL_PASS_ANGLE = math.pi / 8
LEVEL_STOP_ANGLE = math.pi / 4

BOUND_SLACK = 1e-10
DEFAULT_MAX_DEGREE = 512
# above this seed degree the LP refinement is skipped (too slow, and the seed
# is already within a small factor of optimal)
LP_DEGREE_LIMIT = 200
VALIDATION_POINTS = 10_000


@dataclass(frozen=True)
class FilterPolynomial:
    """Real even polynomial ``g(x) = Σ_k a_k T_{2k}(x)``.

    Attributes:
        chebyshev_coeffs: ``a_0 .. a_{d/2}``.
        eps_prime: uniform error achieved on the constrained bands.
        bands: ``(pass_angle, stop_angle, stop_end)`` in θ, or None when the
            polynomial did not come from a band specification.
    """

    chebyshev_coeffs: np.ndarray
    eps_prime: float = float("nan")
    bands: Optional[tuple] = None

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.chebyshev_coeffs, dtype=float)).copy()
        if a.ndim != 1 or a.size == 0:
            raise InvalidArgumentError("chebyshev_coeffs must be a nonempty vector")
        a.setflags(write=False)
        object.__setattr__(self, "chebyshev_coeffs", a)

    @property
    def degree(self) -> int:
        return 2 * (self.chebyshev_coeffs.size - 1)

    def full_coeffs(self) -> np.ndarray:
        """Coefficients over ``T_0 .. T_d`` with the odd slots zero."""
        out = np.zeros(self.degree + 1)
        out[::2] = self.chebyshev_coeffs
        return out

    def __call__(self, x):
        return eval_filter(self, x)

    def to_json(self) -> dict:
        return {
            "kind": "chebyshev-even",
            "degree": self.degree,
            "coeffs": [float(v) for v in self.chebyshev_coeffs],
            "eps": None if math.isnan(self.eps_prime) else float(self.eps_prime),
            "bands": None if self.bands is None else [float(v) for v in self.bands],
        }

    @classmethod
    def from_json(cls, d: dict) -> "FilterPolynomial":
        if d.get("kind") != "chebyshev-even":
            raise InvalidArgumentError(f"not a chebyshev-even filter: kind={d.get('kind')!r}")
        coeffs = np.asarray(d["coeffs"], dtype=float)
        if 2 * (coeffs.size - 1) != d["degree"]:
            raise InvalidArgumentError("degree does not match coefficient count")
        eps = d.get("eps")
        bands = d.get("bands")
        return cls(coeffs, float("nan") if eps is None else eps, None if bands is None else tuple(bands))


@dataclass(frozen=True)
class FourierFilter:
    """``f(x) = Σ_k c_k exp(-i t_k x)`` over ``k ∈ {0} ∪ {±(2j+1) : j = 0..d}``."""

    coefficients: np.ndarray
    h_norm: float
    degree: int
    eps: float = float("nan")
    mu: float = float("nan")
    gap: float = float("nan")
    indices: np.ndarray = field(init=False)
    times: np.ndarray = field(init=False)
    one_norm: float = field(init=False)

    def __post_init__(self):
        idx = fourier_index_set(self.degree)
        c = np.asarray(self.coefficients, dtype=complex).copy()
        if c.shape != idx.shape:
            raise InvalidArgumentError(f"expected {idx.size} coefficients for degree {self.degree}, got {c.size}")
        if not self.h_norm > 0:
            raise InvalidArgumentError("h_norm must be positive")
        times = idx / self.h_norm
        for arr in (c, idx, times):
            arr.setflags(write=False)
        object.__setattr__(self, "coefficients", c)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "one_norm", float(np.sum(np.abs(c))))

    def __call__(self, x):
        return eval_filter(self, x)

    def to_json(self) -> dict:
        return {
            "kind": "fourier-odd",
            "degree": self.degree,
            "coeffs": [[float(v.real), float(v.imag)] for v in self.coefficients],
            "eps": None if math.isnan(self.eps) else float(self.eps),
            "h_norm": float(self.h_norm),
            "mu": None if math.isnan(self.mu) else float(self.mu),
            "gap": None if math.isnan(self.gap) else float(self.gap),
        }

    @classmethod
    def from_json(cls, d: dict) -> "FourierFilter":
        if d.get("kind") != "fourier-odd":
            raise InvalidArgumentError(f"not a fourier-odd filter: kind={d.get('kind')!r}")
        nan = float("nan")
        coeffs = np.array([complex(re, im) for re, im in d["coeffs"]])
        opt = lambda k: nan if d.get(k) is None else float(d[k])
        return cls(coeffs, float(d["h_norm"]), int(d["degree"]), opt("eps"), opt("mu"), opt("gap"))


def fourier_index_set(degree: int) -> np.ndarray:
    """``[0, 1, -1, 3, -3, ..., 2d+1, -(2d+1)]``."""
    if degree < 0:
        raise InvalidArgumentError("degree must be nonnegative")
    odd = 2 * np.arange(degree + 1) + 1
    out = np.zeros(2 * degree + 3, dtype=int)
    out[1::2] = odd
    out[2::2] = -odd
    return out


def eval_filter(filt, x):
    """Evaluate a filter at ``x`` (scalar or array).

    Polynomials use Clenshaw recursion on ``T_k(2x²-1)``; Fourier filters sum
    the complex exponentials directly.
    """
    xa = np.asarray(x, dtype=float)
    if isinstance(filt, FilterPolynomial):
        if np.any(np.abs(xa) > 1 + 1e-12):
            raise InvalidArgumentError("polynomial filters are defined on [-1, 1]")
        xa = np.clip(xa, -1.0, 1.0)
        out = C.chebval(2 * xa * xa - 1, filt.chebyshev_coeffs)
        return float(out) if np.ndim(out) == 0 else out
    if isinstance(filt, FourierFilter):
        if np.any(xa < -1e-12) or np.any(xa > filt.h_norm * (1 + 1e-12)):
            raise InvalidArgumentError(f"Fourier filters are defined on [0, {filt.h_norm}]")
        flat = xa.reshape(-1)
        out = np.empty(flat.size, dtype=complex)
        block = max(1, 2_000_000 // filt.times.size)
        for i in range(0, flat.size, block):
            out[i:i + block] = np.exp(-1j * np.multiply.outer(flat[i:i + block], filt.times)) @ filt.coefficients
        return complex(out[0]) if xa.ndim == 0 else out.reshape(xa.shape)
    raise InvalidArgumentError(f"cannot evaluate object of type {type(filt).__name__}")


def fourier_state_sum(filt: FourierFilter, eigenvalues, amplitudes) -> np.ndarray:
    """Apply ``Σ_k c_k exp(-iH t_k)`` to a state term by term.

    This is the linear-combination route: each term is a full evolution of
    the state, accumulated with its weight.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    amp = np.asarray(amplitudes, dtype=complex)
    out = np.zeros_like(amp)
    for ck, tk in zip(filt.coefficients, filt.times):
        out += ck * np.exp(-1j * lam * tk) * amp
    return out


def cosine_grid_values(coeffs, n_intervals: int) -> np.ndarray:
    """Values of ``Σ a_k cos(2kθ)`` at ``θ_j = πj/(2N)``, ``j = 0..N``, via DCT-I."""
    a = np.asarray(coeffs, dtype=float)
    if a.size > n_intervals + 1:
        raise InvalidArgumentError("grid too coarse for the number of coefficients")
    y = np.zeros(n_intervals + 1)
    y[: a.size] = a
    y[0] *= 2
    y[-1] *= 2
    return dct(y, type=1) / 2


def even_chebyshev_fit(values_at_nodes) -> np.ndarray:
    """Inverse of :func:`cosine_grid_values` for exactly ``N+1`` samples."""
    v = np.asarray(values_at_nodes, dtype=float)
    n = v.size - 1
    if n == 0:
        return v.copy()
    a = dct(v, type=1) / n
    a[0] /= 2
    a[-1] /= 2
    return a


def polynomial_from_function(func, degree: int) -> FilterPolynomial:
    """Interpolate an even function ``func(x)`` by an even polynomial of ``degree``.

    Exact (to rounding) when ``func`` is itself an even polynomial of at most
    that degree.
    """
    if degree < 0 or degree % 2:
        raise InvalidArgumentError("degree must be a nonnegative even integer")
    n = degree // 2
    if n == 0:
        return FilterPolynomial(np.array([float(func(1.0))]))
    theta = np.pi * np.arange(n + 1) / (2 * n)
    vals = np.array([float(func(x)) for x in np.cos(theta)])
    return FilterPolynomial(even_chebyshev_fit(vals))


# band-specification machinery --------------------------------------------


def _band_error(coeffs, pass_end, stop_start, stop_end, n_intervals):
    """(band error, max |g|) on a uniform θ grid."""
    v = cosine_grid_values(coeffs, n_intervals)
    theta = np.pi * np.arange(n_intervals + 1) / (2 * n_intervals)
    pmask = theta <= pass_end
    smask = (theta >= stop_start) & (theta <= stop_end)
    e_pass = float(np.max(np.abs(v[pmask] - 1))) if pmask.any() else 0.0
    e_stop = float(np.max(np.abs(v[smask]))) if smask.any() else 0.0
    return max(e_pass, e_stop), float(np.max(np.abs(v)))


def _validation_intervals(n_coeffs):
    return max(4 * VALIDATION_POINTS, 16 * n_coeffs)


def validate_even_filter(poly: FilterPolynomial, pass_end, stop_start, stop_end=math.pi / 2):
    """Achieved band error and sup-norm, checked two ways.

    Uses a uniform θ grid (DCT) and 10⁴-point uniform grids in ``x`` on each
    band (Clenshaw). Returns ``(band_error, sup_norm)``.
    """
    a = poly.chebyshev_coeffs
    err_theta, sup_theta = _band_error(a, pass_end, stop_start, stop_end, _validation_intervals(a.size))
    xs_pass = np.linspace(math.cos(pass_end), 1.0, VALIDATION_POINTS)
    xs_stop = np.linspace(math.cos(stop_end), math.cos(stop_start), VALIDATION_POINTS)
    xs_all = np.cos(np.pi * (np.arange(VALIDATION_POINTS) + 0.5) / VALIDATION_POINTS)
    err_x = max(
        float(np.max(np.abs(eval_filter(poly, xs_pass) - 1))),
        float(np.max(np.abs(eval_filter(poly, xs_stop)))),
    )
    sup_x = float(np.max(np.abs(eval_filter(poly, xs_all))))
    return max(err_theta, err_x), max(sup_theta, sup_x)


def _erf_seed(n, pass_end, stop_start, eps):
    """Cosine coefficients of a smoothed step between the two band edges."""
    k = 2 * erfcinv(eps / 4) / (stop_start - pass_end)
    mid = (pass_end + stop_start) / 2
    m = max(4 * n, 256)
    theta = np.pi * np.arange(m + 1) / (2 * m)
    # symmetrized in θ so the result is even in x and periodic
    step = 0.5 * (erf(k * (mid + theta)) + erf(k * (mid - theta)))
    return even_chebyshev_fit(step)[: n + 1]


def _seed_error(n, pass_end, stop_start, stop_end, eps):
    a = _erf_seed(n, pass_end, stop_start, eps)
    err, sup = _band_error(a, pass_end, stop_start, stop_end, max(4096, 8 * n))
    scale = max(1.0, sup)
    a = a / scale
    # rescaling shifts the pass band by at most (scale - 1)
    return a, err + (scale - 1)


def _lp_minimax(n, pass_end, stop_start, stop_end, cap):
    """Minimax cosine series of n+1 terms: min e s.t. band errors ≤ e, |g| ≤ cap."""
    m = max(400, 12 * n)
    per = lambda lo, hi, floor: max(floor, int(m * (hi - lo) / (np.pi / 2)) + 2)
    tp = np.linspace(0, pass_end, per(0, pass_end, 2)) if pass_end > 0 else np.array([0.0])
    ts = np.linspace(stop_start, stop_end, per(stop_start, stop_end, 50))
    tf = np.concatenate([
        np.linspace(pass_end, stop_start, per(pass_end, stop_start, 20)),
        np.linspace(stop_end, np.pi / 2, per(stop_end, np.pi / 2, 2)),
    ])
    k = np.arange(n + 1)
    basis = lambda t: np.cos(2 * np.outer(t, k))
    ap, as_, af = basis(tp), basis(ts), basis(tf)
    ones = lambda a: np.ones((a.shape[0], 1))
    zeros = lambda a: np.zeros((a.shape[0], 1))
    a_ub = np.vstack([
        np.hstack([-ap, -ones(ap)]), np.hstack([ap, zeros(ap)]),
        np.hstack([as_, -ones(as_)]), np.hstack([-as_, -ones(as_)]),
        np.hstack([af, zeros(af)]), np.hstack([-af, zeros(af)]),
    ])
    b_ub = np.concatenate([
        -np.ones(len(tp)), cap * np.ones(len(tp)),
        np.zeros(2 * len(ts)), cap * np.ones(2 * len(tf)),
    ])
    cost = np.zeros(n + 2)
    cost[-1] = 1.0
    res = linprog(cost, A_ub=a_ub, b_ub=b_ub, bounds=[(None, None)] * (n + 1) + [(0, None)], method="highs")
    if res.status != 0:
        return None, math.inf
    return res.x[:-1], float(res.x[-1])


def _smallest(pred, lo, hi):
    """Smallest integer n in [lo, hi] with pred(n) truthy, assuming monotonicity."""
    if not pred(hi):
        return None
    while lo < hi:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


@lru_cache(maxsize=256)
def _build_even_cached(pass_end, stop_start, stop_end, eps, max_degree, refine):
    n_max = max_degree // 2
    seeds = {}

    def seed_ok(n):
        seeds[n] = _seed_error(n, pass_end, stop_start, stop_end, eps)
        return seeds[n][1] <= eps

    # exponential search for a feasible seed degree, then bisect
    hi = 4
    while hi < n_max and not seed_ok(hi):
        hi = min(2 * hi, n_max)
    n_seed = _smallest(seed_ok, max(1, hi // 2), hi)

    use_lp = refine == "lp" or (refine == "auto" and (n_seed is None or 2 * n_seed <= LP_DEGREE_LIMIT))
    best = None
    if use_lp:
        cap = 1 - eps / 2
        lp = {}

        def lp_ok(n):
            if n not in lp:
                lp[n] = _lp_minimax(n, pass_end, stop_start, stop_end, cap)
            return lp[n][1] <= eps * (1 - 1e-3)

        top = n_seed if n_seed is not None else min(n_max, LP_DEGREE_LIMIT // 2)
        n_lp = _smallest(lp_ok, 1, top)
        # walk up if the dense validation disagrees with the LP grid
        while n_lp is not None and n_lp <= n_max:
            poly = FilterPolynomial(lp[n_lp][0], bands=(pass_end, stop_start, stop_end))
            err, sup = validate_even_filter(poly, pass_end, stop_start, stop_end)
            if err <= eps and sup <= 1 + BOUND_SLACK:
                best = FilterPolynomial(poly.chebyshev_coeffs, err, poly.bands)
                break
            n_lp += 1
            if n_lp > n_max or not lp_ok(n_lp):
                n_lp = None
    if best is None and n_seed is not None:
        for n in range(n_seed, n_max + 1):
            a = seeds[n][0] if n in seeds else _seed_error(n, pass_end, stop_start, stop_end, eps)[0]
            poly = FilterPolynomial(a, bands=(pass_end, stop_start, stop_end))
            err, sup = validate_even_filter(poly, pass_end, stop_start, stop_end)
            if err <= eps and sup <= 1 + BOUND_SLACK:
                best = FilterPolynomial(a, err, poly.bands)
                break
    if best is None:
        err = seeds[n_max][1] if n_max in seeds else None
        raise FilterConstructionError(
            f"could not reach eps={eps:g} with degree <= {max_degree} "
            f"(bands θ: pass [0, {pass_end:.6g}], stop [{stop_start:.6g}, {stop_end:.6g}])",
            best_error=err,
            degree=max_degree,
        )
    return best


def build_even_filter(pass_end, stop_start, stop_end=math.pi / 2, eps=1e-2,
                      max_degree=DEFAULT_MAX_DEGREE, refine="auto") -> FilterPolynomial:
    """Lowest-degree even polynomial meeting a two-band spec in θ = arccos(x).

    Requires ``|g(cos θ) - 1| <= eps`` for ``θ <= pass_end``,
    ``|g(cos θ)| <= eps`` on ``[stop_start, stop_end]`` and ``|g| <= 1``
    everywhere.

    Args:
        refine: "lp" solves the discretized minimax problem by linear
            programming, "seed" keeps the analytic error-function seed, and
            "auto" picks LP when the seed degree is small enough for it.
    """
    if not 0 < eps < 1:
        raise InvalidArgumentError(f"eps must lie in (0, 1), got {eps!r}")
    if not 0 <= pass_end < stop_start <= stop_end <= math.pi / 2 + 1e-15:
        raise InvalidArgumentError("band edges must satisfy 0 <= pass < stop_start <= stop_end <= π/2")
    if refine not in ("auto", "lp", "seed"):
        raise InvalidArgumentError(f"unknown refine mode {refine!r}")
    return _build_even_cached(float(pass_end), float(stop_start), float(stop_end),
                              float(eps), int(max_degree), refine)


def build_level_filter(eps_prime, seed: Optional[FilterPolynomial] = None,
                       max_degree=DEFAULT_MAX_DEGREE, refine="auto") -> FilterPolynomial:
    """Even filter with pass band ``x > cos(π/8)`` and stop band ``0 < x < cos(π/4)``.

    If ``seed`` already meets the target it is returned, annotated with its
    achieved error.
    """
    if not 0 < eps_prime < 0.5:
        raise InvalidArgumentError(f"eps_prime must lie in (0, 1/2), got {eps_prime!r}")
    bands = (LEVEL_PASS_ANGLE, LEVEL_STOP_ANGLE, math.pi / 2)
    if seed is not None:
        err, sup = validate_even_filter(seed, *bands)
        if err <= eps_prime and sup <= 1 + BOUND_SLACK:
            return FilterPolynomial(seed.chebyshev_coeffs, err, bands)
    return build_even_filter(*bands, eps=eps_prime, max_degree=max_degree, refine=refine)


def cleanup_bands(mu, gap):
    """θ band edges of the clean-up filter for evolution time 1."""
    lo, hi = mu - gap / 2, mu + gap / 2
    return max(lo, 0.0) / 2, min(hi, math.pi) / 2, math.pi / 2


def build_cleanup_filter(mu, gap, eps, max_degree=DEFAULT_MAX_DEGREE, refine="auto") -> FilterPolynomial:
    """Even filter separating ``λ <= μ-Δ/2`` from ``μ+Δ/2 <= λ <= π`` at ``x = cos(λ/2)``."""
    if not 0 < gap < math.pi:
        raise InvalidArgumentError(f"clean-up gap must lie in (0, π), got {gap!r}")
    if max(mu - gap / 2, 0.0) >= math.pi:
        raise InvalidArgumentError("clean-up pass band must start below π")
    return build_even_filter(*cleanup_bands(mu, gap), eps=eps, max_degree=max_degree, refine=refine)


def standard_bands(h_norm, mu, gap):
    """θ band edges for a single filter driven by ``exp(-iH/||H||)``."""
    return max(mu - gap / 2, 0.0) / (2 * h_norm), (mu + gap / 2) / (2 * h_norm), 0.5


def build_standard_filter(h_norm, mu, gap, eps, max_degree=None, refine="auto") -> FilterPolynomial:
    """Single sharp filter on the normalized Hamiltonian ``H/||H||``.

    The degree grows like ``(||H||/Δ) log(1/eps)``; ``max_degree`` defaults to a
    generous multiple of that.
    """
    if not gap > 0 or not h_norm > 0:
        raise InvalidArgumentError("gap and h_norm must be positive")
    if max_degree is None:
        max_degree = max(DEFAULT_MAX_DEGREE, int(16 * h_norm / gap * math.log2(1 / eps)) + 64)
    return build_even_filter(*standard_bands(h_norm, mu, gap), eps=eps, max_degree=max_degree, refine=refine)


# Fourier Heaviside filter -------------------------------------------------


def _fourier_coefficients(degree, h_norm, mu, width):
    idx = fourier_index_set(degree)
    odd = idx[1::2].astype(float)
    damp = np.exp(-odd**2 * width**2 / 2)
    theta_c = mu / h_norm
    base = (2 / np.pi) * damp / odd / 2j
    c = np.empty(idx.size, dtype=complex)
    c[0] = 0.5
    c[1::2] = base * np.exp(1j * odd * theta_c)
    c[2::2] = -base * np.exp(-1j * odd * theta_c)
    return c


def _fourier_grids(h_norm, mu, gap, points=VALIDATION_POINTS):
    lo, hi = mu - gap / 2, mu + gap / 2
    xp = np.linspace(0.0, lo, points) if lo > 0 else np.array([0.0])
    xs = np.linspace(hi, h_norm, points) if hi < h_norm else np.array([h_norm])
    xa = np.linspace(0.0, h_norm, points)
    return xp, xs, xa


def validate_fourier_filter(filt: FourierFilter, mu=None, gap=None, points=VALIDATION_POINTS):
    """(band error, sup |f|) on 10⁴-point grids over [0, ||H||]."""
    mu = filt.mu if mu is None else mu
    gap = filt.gap if gap is None else gap
    xp, xs, xa = _fourier_grids(filt.h_norm, mu, gap, points)
    fp, fs, fa = (eval_filter(filt, g) for g in (xp, xs, xa))
    err = max(float(np.max(np.abs(fp - 1))), float(np.max(np.abs(fs))))
    return err, float(np.max(np.abs(np.concatenate([fa, fp, fs]))))


def build_heaviside_fourier(h_norm, mu, gap, eps, max_degree=20_000) -> FourierFilter:
    """Odd-harmonic Fourier series approximating the step ``1[x < μ]`` on ``[0, ||H||]``.

    The step is a smoothed square wave in ``θ = x/||H||``; its Gaussian width
    is chosen so the smoothing error at the band edges is below ``eps/2``,
    and the truncation order is the smallest that passes grid validation.
    """
    if not (h_norm > 0 and gap > 0 and 0 < eps < 1):
        raise InvalidArgumentError("h_norm, gap must be positive and eps in (0, 1)")
    if not gap / h_norm < math.pi / 2:
        raise InvalidArgumentError(f"requires gap/||H|| < π/2, got {gap / h_norm:.6g}")
    if not 0 <= mu <= h_norm:
        raise InvalidArgumentError("mu must lie in [0, ||H||]")
    width = gap / (2 * h_norm) / (math.sqrt(2) * erfcinv(eps))

    def attempt(d, points):
        c = _fourier_coefficients(d, h_norm, mu, width)
        filt = FourierFilter(c, h_norm, d, eps, mu, gap)
        err, sup = validate_fourier_filter(filt, points=points)
        if sup > 1:
            filt = FourierFilter(c / sup, h_norm, d, eps, mu, gap)
            err, sup = validate_fourier_filter(filt, points=points)
        return filt, err, sup

    def ok(d, points=1000):
        _, err, sup = attempt(d, points)
        return err <= eps and sup <= 1 + BOUND_SLACK

    # coarse search, then walk up until the full grids agree
    hi = 4
    while hi < max_degree and not ok(hi):
        hi = min(2 * hi, max_degree)
    d = _smallest(ok, max(0, hi // 2), hi)
    last = None
    while d is not None and d <= max_degree:
        last = attempt(d, VALIDATION_POINTS)
        if last[1] <= eps and last[2] <= 1 + BOUND_SLACK:
            return last[0]
        d += 1
    raise FilterConstructionError(
        f"Fourier filter did not reach eps={eps:g} with degree <= {max_degree}",
        best_error=None if last is None else last[1],
        degree=max_degree,
    )


def product_filter_values(level: FilterPolynomial, x, levels: int):
    """``G(x) = g(x) g(T_2(x)) g(T_4(x)) ... g(T_{2^{L-1}}(x))``."""
    xa = np.asarray(x, dtype=float)
    out = np.ones_like(xa)
    for j in range(levels):
        out = out * eval_filter(level, C.chebval(xa, [0] * (2**j) + [1]))
    return out
