"""Reference values for the unit tests.

Run once; the printed numbers are pasted into tests/oracle_values.hpp.
Uses mpmath and scipy only, none of the library code.
"""
import math

import mpmath as mp
from scipy import integrate

mp.mp.dps = 40


def c1(s):
    return s * 2 ** (2 * s) * mp.gamma(0.5 + s) / (mp.sqrt(mp.pi) * mp.gamma(1 - s))


def cn(n, s):
    return s * 2 ** (2 * s) * mp.gamma((n + 2 * s) / 2) / (mp.pi ** (n / 2) * mp.gamma(1 - s))


def truncated_arctan(X):
    def u(y):
        if y > X:
            return mp.mpf(1)
        if y < -X:
            return mp.mpf(-1)
        return 2 / mp.pi * mp.atan(y)
    return u


def special_values():
    print("// gamma")
    for x in [0.05, 0.3, 1.7, 2.9]:
        print(f"gamma {x}: {mp.nstr(mp.gamma(x), 17)}")
    print("// dirichlet beta")
    for s in [0.5, 1.5, 2.0, 3.0]:
        v = mp.nsum(lambda k: (-1) ** k / (2 * k + 1) ** s, [0, mp.inf], method="alternating")
        print(f"beta {s}: {mp.nstr(v, 17)}")
    print("// square lattice epstein zeta 4 zeta(a) beta(a), a = sigma/2")
    for sigma in [0.6, 1.4, 2.6, 3.0, 3.8]:
        a = sigma / 2
        beta = mp.nsum(lambda k: (-1) ** k / (2 * k + 1) ** a, [0, mp.inf], method="alternating") if a > 0 else None
        print(f"zeta2 {sigma}: {mp.nstr(4 * mp.zeta(a) * beta, 17)}")
    print("// c_n(s)")
    for n, s in [(1, 0.25), (1, 0.75), (2, 0.3), (2, 0.5)]:
        print(f"c {n} {s}: {mp.nstr(cn(n, s), 17)}")


def gaussian_laplacian():
    print("// (-Delta)^s exp(-x^2) via 1F1, cross-checked by the Fourier integral")
    for s in [0.25, 0.5, 0.75]:
        for x in [0.0, 0.5, 1.0, 2.0]:
            closed = 2 ** (2 * s) * mp.gamma(0.5 + s) / mp.gamma(0.5) * mp.hyp1f1(0.5 + s, 0.5, -x * x)
            fourier = mp.quad(lambda k: k ** (2 * s) * mp.exp(-k * k / 4) * mp.cos(k * x), [0, mp.inf]) / mp.sqrt(mp.pi)
            assert abs(closed - fourier) < 1e-12
            print(f"gauss s={s} x={x}: {mp.nstr(closed, 17)}")


def arctan_laplacian():
    print("// (-Delta)^s of the arctan layer cut to +-1 beyond X = 50")
    X = 50.0
    u = truncated_arctan(X)
    for s in [0.25, 0.75]:
        for x in [0.0, 0.5, 2.0]:
            f = lambda t: (2 * u(x) - u(x + t) - u(x - t)) / t ** (1 + 2 * s)
            # [0, d] from the Taylor term -u''(x) t^2
            d = mp.mpf("1e-4")
            u2 = -4 / mp.pi * x / (1 + x * x) ** 2
            head = -u2 * d ** (2 - 2 * s) / (2 - 2 * s)
            pts = sorted({d, abs(X - x), abs(X + x), 1, 10, 100})
            v = c1(s) * (head + mp.quad(f, pts + [mp.inf]))
            print(f"arctan s={s} x={x}: {mp.nstr(v, 17)}")


def poisson_sheet():
    print("// Poisson extension of the cut arctan layer, X = 50")
    X = 50.0
    u = truncated_arctan(X)
    for s in [0.25, 0.75]:
        ps = mp.gamma(0.5 + s) / (mp.sqrt(mp.pi) * mp.gamma(s))
        for x, lam in [(0.5, 0.5), (1.0, 2.0), (-2.0, 1.0)]:
            f = lambda y: u(y) / ((x - y) ** 2 + lam ** 2) ** (0.5 + s)
            v = ps * lam ** (2 * s) * mp.quad(f, [-mp.inf, -X, x - 1, x, x + 1, X, mp.inf])
            print(f"sheet s={s} x={x} lambda={lam}: {mp.nstr(v, 17)}")


def kinetic_arctan():
    print("// K^s of the arctan layer on B_R, layer cut at X")
    for s, R, X in [(0.5, 4.0, 60.0), (0.3, 4.0, 60.0)]:
        u = lambda y: 1.0 if y > X else (-1.0 if y < -X else 2 / math.pi * math.atan(y))
        a = 2 ** (2 * s) * math.gamma(0.5 + s) * s / (math.sqrt(math.pi) * math.gamma(1 - s))

        def inner(x):
            def g(t):
                y = x + t
                w = 1.0 if abs(y) < R else 2.0
                return w * (u(x) - u(y)) ** 2 / abs(t) ** (1 + 2 * s)
            tot = 0.0
            brk = sorted({R - x, -R - x, X - x, -X - x})
            pos = [0.0] + [b for b in brk if b > 0] + [math.inf]
            neg = [-math.inf] + [b for b in brk if b < 0] + [0.0]
            for lo, hi in zip(pos[:-1], pos[1:]):
                tot += integrate.quad(g, lo, hi, limit=400, epsabs=1e-13, epsrel=1e-12)[0]
            for lo, hi in zip(neg[:-1], neg[1:]):
                tot += integrate.quad(g, lo, hi, limit=400, epsabs=1e-13, epsrel=1e-12)[0]
            return tot

        v = a / 4 * integrate.quad(inner, -R, R, limit=200, epsabs=1e-11, epsrel=1e-11)[0]
        print(f"kinetic s={s} R={R} X={X}: {v:.15g}")
        if s == 0.5:
            W = integrate.quad(lambda x: (1 + math.cos(math.pi * u(x))) / math.pi ** 2, -R, R, epsabs=1e-13)[0]
            print(f"pn potential R={R}: {W:.15g}")


def kinetic_monte_carlo():
    print("// Monte-Carlo check of the s = 1/2 kinetic value, 1e7 samples")
    import numpy as np
    rng = np.random.default_rng(20240601)
    s, R, X = 0.5, 4.0, 60.0
    N = 10_000_000

    def u(y):
        return np.where(y > X, 1.0, np.where(y < -X, -1.0, 2 / np.pi * np.arctan(y)))

    x = rng.uniform(-R, R, N)
    # t with density 1/(2 T) on |t| < T plus a Cauchy-like tail sampled by inversion
    T = 1.0
    pick = rng.uniform(size=N) < 0.5
    t_in = rng.uniform(-T, T, N)
    v = rng.uniform(size=N)
    t_out = np.sign(rng.uniform(-1, 1, N)) * T / v
    t = np.where(pick, t_in, t_out)
    dens = np.where(np.abs(t) < T, 0.5 / (2 * T), 0.5 * 0.5 * T / t ** 2)
    y = x + t
    w = np.where(np.abs(y) < R, 1.0, 2.0)
    f = w * (u(x) - u(y)) ** 2 / np.abs(t) ** (1 + 2 * s)
    vals = 2 * R * f / dens
    c = 1 / math.pi
    print(f"mc kinetic: {c / 4 * vals.mean():.6g} +- {c / 4 * vals.std() / math.sqrt(N):.2g}")


def claim41():
    print("// claim 4.1 integral, n = 1")
    for s, R in [(0.5, 4.0), (0.25, 8.0), (0.75, 16.0)]:
        def side(d):
            if d < 1:
                head = -mp.log(d) if s == 0.5 else (1 - d ** (1 - 2 * s)) / (1 - 2 * s)
                return head + 1 / (2 * s)
            return d ** (-2 * s) / (2 * s)
        v = c1(s) * mp.quad(lambda x: side(R - x) + side(R + x), [-R, -R + 1, R - 1, R])
        print(f"claim41 s={s} R={R}: {mp.nstr(v, 17)}")


def nonlocal_flux_bumps():
    print("// nonlocal flux, u = exp(-x^2), v = exp(-(x-1)^2), R = 2")
    for s in [0.5, 0.3]:
        R = 2.0
        u = lambda x: math.exp(-x * x)
        v = lambda x: math.exp(-(x - 1) ** 2)
        a = 2 ** (2 * s) * math.gamma(0.5 + s) * s / (math.sqrt(math.pi) * math.gamma(1 - s))
        f = lambda y, x: (u(x) - u(y)) * v(x) / abs(x - y) ** (1 + 2 * s)
        tot = 0.0
        for lo, hi in [(R, 40.0), (-40.0, -R)]:
            tot += integrate.dblquad(f, lo, hi, -R, R, epsabs=1e-12, epsrel=1e-10)[0]
        print(f"flux s={s}: {a * tot:.15g}")


def extension_constant():
    print("// flux normalization 2^{2s-1} Gamma(s) / Gamma(1-s)")
    for s in [0.1, 0.25, 0.5, 0.75, 0.9]:
        print(f"d {s}: {mp.nstr(2 ** (2 * s - 1) * mp.gamma(s) / mp.gamma(1 - s), 17)}")


if __name__ == "__main__":
    special_values()
    gaussian_laplacian()
    arctan_laplacian()
    poisson_sheet()
    claim41()
    extension_constant()
    nonlocal_flux_bumps()
    kinetic_arctan()
    kinetic_monte_carlo()
