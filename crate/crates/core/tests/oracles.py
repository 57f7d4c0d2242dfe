"""Independent oracle values frozen into the Rust tests.

Run with `python3 oracles.py`. Every value is obtained by direct numerical
quadrature (scipy / mpmath) of the defining integral, not by the code paths
under test.
"""
import numpy as np
from scipy import integrate
import mpmath as mp

mp.mp.dps = 30


def psi(n, x, x0=0.0, p0=0.0, sigma=1.0, hbar=1.0):
    u = (x - x0) / sigma
    h = [mp.pi ** -0.25 * mp.e ** (-u * u / 2)]
    if n >= 1:
        h.append(mp.sqrt(2) * u * h[0])
    for k in range(1, n):
        h.append(mp.sqrt(mp.mpf(2) / (k + 1)) * u * h[k] - mp.sqrt(mp.mpf(k) / (k + 1)) * h[k - 1])
    return h[n] / mp.sqrt(sigma) * mp.e ** (1j * p0 * x / hbar)


def wigner_direct(n, x, p, **kw):
    hbar = kw.get("hbar", 1.0)
    f = lambda b: (mp.conj(psi(n, x + b * hbar / 2, **kw)) * psi(n, x - b * hbar / 2, **kw) * mp.e ** (1j * b * p))
    return mp.quad(f, [-mp.inf, 0, mp.inf]) / (2 * mp.pi)


print("W1(0,0) =", mp.nstr(wigner_direct(1, 0, 0).real, 20), " -1/pi =", mp.nstr(-1 / mp.pi, 20))
print("W0(0.5,-0.3) =", mp.nstr(wigner_direct(0, 0.5, -0.3).real, 20))
print("Wcoh(2,3)@(2.4,2.5) =", mp.nstr(wigner_direct(0, 2.4, 2.5, x0=2, p0=3).real, 20))

# negative volume of W1 by 2-D quadrature of max(-W1, 0)
w1 = lambda r: (2 * r * r - 1) * mp.e ** (-r * r) / mp.pi
negvol = mp.quad(lambda r: max(-w1(r), 0) * 2 * mp.pi * r, [0, 1 / mp.sqrt(2)])
print("negvol(W1) =", mp.nstr(negvol, 20))


# characteristic function <psi| exp(-i(aX+bP)) |psi> via 2-D quadrature of the
# closed-form Wigner function (independent of the split-exponential formula).
def wig_coh(x, p, x0, p0):
    return np.exp(-(x - x0) ** 2 - (p - p0) ** 2) / np.pi


def charfn_quad(a, b, x0, p0):
    re = integrate.dblquad(lambda p, x: wig_coh(x, p, x0, p0) * np.cos(a * x + b * p), x0 - 12, x0 + 12, p0 - 12, p0 + 12, epsabs=1e-13, epsrel=1e-13)[0]
    im = integrate.dblquad(lambda p, x: -wig_coh(x, p, x0, p0) * np.sin(a * x + b * p), x0 - 12, x0 + 12, p0 - 12, p0 + 12, epsabs=1e-13, epsrel=1e-13)[0]
    return complex(re, im)


for (a, b, x0, p0) in [(0.7, -1.3, 2.0, 3.0), (1.0, 1.0, -1.5, 0.5), (-0.4, 2.1, 0.8, -2.2)]:
    print(f"charfn coh({x0},{p0}) at ({a},{b}) =", repr(charfn_quad(a, b, x0, p0)))

# Moyal right-hand sides: integral of g * W over the plane.
def moyal_rhs(g, wig):
    return integrate.dblquad(lambda p, x: g(x, p) * wig(x, p), -12, 12, -12, 12, epsabs=1e-13, epsrel=1e-13)[0]

gauss = lambda x, p: np.exp(-x * x - p * p)
W0 = lambda x, p: np.exp(-x * x - p * p) / np.pi
W1 = lambda x, p: (2 * (x * x + p * p) - 1) * np.exp(-x * x - p * p) / np.pi
Wc = lambda x, p: wig_coh(x, p, 1.0, -0.5)
print("moyal gauss psi0 =", moyal_rhs(gauss, W0))
print("moyal gauss psi1 =", moyal_rhs(gauss, W1))
print("moyal gauss coh(1,-0.5) =", moyal_rhs(gauss, Wc))
print("moyal x2 coh(1,-0.5) =", moyal_rhs(lambda x, p: x * x, Wc))
print("moyal xp coh(1,-0.5) =", moyal_rhs(lambda x, p: x * p, Wc))

# smooth tamper: diagonal marginal change at z = 0 for c=0.1, a=b=1
dg0 = integrate.quad(lambda w: 0.1 * (0 - w * w) / 2 * np.exp(-w * w), -20, 20)[0]
print("smooth tamper delta g(0) diag =", dg0, " closed form", -0.1 * np.sqrt(np.pi) / 4)

# delta kernel: int f(x) 2 sin(Tx)/x dx for f = exp(-(x-3)^2/2), T = 40
k = integrate.quad(lambda x: np.exp(-(x - 3) ** 2 / 2) * 2 * np.sin(40 * x) / x if x != 0 else 80 * np.exp(-4.5), -20, 20, limit=2000)[0]
print("delta kernel shifted =", k, " 2pi f(0) =", 2 * np.pi * np.exp(-4.5))
