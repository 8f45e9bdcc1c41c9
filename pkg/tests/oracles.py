"""Independent reference computations used by the tests.

Nothing here imports the package's evaluation code; each oracle recomputes
its quantity from first principles.
"""

import cmath
import math

import numpy as np


def xrot(p):
    return np.array([[math.cos(p), 1j * math.sin(p)], [1j * math.sin(p), math.cos(p)]])


def zphase(p):
    return np.array([[cmath.exp(1j * p), 0], [0, cmath.exp(-1j * p)]])


def qetu_product(qetu_phases, t, lam):
    """Explicit 2x2 product of the QETU circuit for one eigenvalue."""
    m = xrot(qetu_phases[0])
    for j, p in enumerate(qetu_phases[1:], start=1):
        sgn = 1 if j % 2 else -1
        m = m @ np.diag([1, cmath.exp(sgn * 1j * t * lam)]) @ xrot(p)
    return m


def qetu_g(qetu_phases, t, lam):
    d = len(qetu_phases) - 1
    return ((-1) ** (d // 2) * qetu_product(qetu_phases, t, lam)[0, 0]).real


def qsp_product(qsp_phases, x):
    theta = math.acos(x)
    w = zphase(qsp_phases[0])
    for p in qsp_phases[1:]:
        w = w @ xrot(theta) @ zphase(p)
    return w


def monomial_even(coeffs_even, x):
    """Σ a_k T_{2k}(x) through the explicit power-basis expansion of T_n."""
    total = 0.0
    for k, a in enumerate(coeffs_even):
        n = 2 * k
        # T_n(x) = n/2 Σ_m (-1)^m (n-m-1)! / (m! (n-2m)!) (2x)^{n-2m}
        if n == 0:
            t = 1.0
        else:
            t = 0.0
            for m in range(n // 2 + 1):
                t += (-1) ** m * math.factorial(n - m - 1) / (math.factorial(m) * math.factorial(n - 2 * m)) * (2 * x) ** (n - 2 * m)
            t *= n / 2
        total += a * t
    return total


def fourier_real_form(coeffs, times, x):
    """Real-part pairing: c_0 + Σ_{k>0} 2 Re(c_k e^{-i t_k x})."""
    out = coeffs[0].real
    for c, t in zip(coeffs[1::2], times[1::2]):
        out += 2 * (c * cmath.exp(-1j * t * x)).real
    return out


def band_errors_grid(func, n=10_000):
    """max|g-1| on [cos(π/8), 1] and max|g| on [0, cos(π/4)], uniform grids."""
    xp = np.linspace(math.cos(math.pi / 8), 1.0, n)
    xs = np.linspace(0.0, math.cos(math.pi / 4), n)
    return max(abs(func(x) - 1) for x in xp), max(abs(func(x)) for x in xs)
