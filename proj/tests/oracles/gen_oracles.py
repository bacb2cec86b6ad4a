"""Independent reference values for the unit and acceptance tests.

Closed forms are evaluated with mpmath at 40 digits; the non-round sphere
areas use scipy quadrature on the explicit angular integrand. Nothing here
imports or mirrors the C++ implementation.
"""
import mpmath as mp
from scipy import integrate
import numpy as np

mp.mp.dps = 40


def show(name, v):
    print(f"{name:45s} {mp.nstr(v, 17) if isinstance(v, mp.mpf) else repr(v)}")


r = mp.mpf("0.1")
show("4pi sin^2(0.1)", 4 * mp.pi * mp.sin(r) ** 2)
show("2pi(r - sin r cos r) r=0.1", 2 * mp.pi * (r - mp.sin(r) * mp.cos(r)))
show("v_series(3,6,0.1)", 4 * mp.pi / 3 * r**3 * (1 - 6 * r**2 / 30))
show("a_series(3,6,0.1)", 4 * mp.pi * r**2 * (1 - 6 * r**2 / 18))
beta5 = mp.pi ** 2.5 / mp.gamma(3.5)
show("beta_5", beta5)
show("v_series(5,20,0.1)", beta5 * r**5 * (1 - 20 * r**2 / 42))
show("S3 cap r=0.1 lam=2 (sin 0.2)", mp.sin(2 * r))
show("H3 cap r=0.1 lam=2 (sinh 0.2)", mp.sinh(2 * r))
show("kappa(5,2,20)", mp.mpf(3 * 20) / (6 * 5 * 1) * (1 - mp.mpf(2) ** -1) / (1 - mp.mpf(2) ** -3))
show("unified n4 lam2 r.1 S12", mp.mpf(2 * 12) / 24 * (r**2 / (1 - mp.mpf(1) / 4)) * mp.log(2))
c4 = r**2 / (1 - mp.mpf(2) ** -2)
k4 = mp.mpf(12) / 12 * mp.log(2) / (1 - mp.mpf(2) ** -2)
show("predicted n4 lam2 r.1 S12", c4 * (1 - k4 * r**2))


def s2r_area(t):
    # |y|=t sphere under g = delta - (1/3) R y y with only R_1212 = 1:
    # area element t^2 sqrt(1 - (t^2/3) sin^2 theta), theta from the x3 axis.
    f = lambda x: np.sqrt(1 - t * t / 3 * (1 - x * x))
    val, _ = integrate.quad(f, -1, 1, epsabs=0, epsrel=1e-13)
    return 2 * np.pi * t * t * val


def zero_trace_area(t):
    # generators R_1212 = 1, R_1313 = -1; induced area element on the sphere
    def integrand(phi, x):
        st = np.sqrt(1 - x * x)
        w = np.array([st * np.cos(phi), st * np.sin(phi), x])
        Q = np.zeros((3, 3))
        # Q_ij = R_ikjl w^k w^l for the two sectional pieces
        for (a, b, K) in ((0, 1, 1.0), (0, 2, -1.0)):
            P = np.zeros((3, 3))
            wa, wb = w[a], w[b]
            P[a, a] = wb * wb
            P[b, b] = wa * wa
            P[a, b] = P[b, a] = -wa * wb
            Q += K * P
        g = np.eye(3) - t * t / 3 * Q
        e_th = np.array([x * np.cos(phi), x * np.sin(phi), -st])
        e_ph = np.array([-np.sin(phi), np.cos(phi), 0.0])
        T = np.stack([e_th, e_ph], axis=1)
        return np.sqrt(np.linalg.det(T.T @ g @ T))

    val, _ = integrate.dblquad(integrand, -1, 1, 0, 2 * np.pi, epsabs=0, epsrel=1e-13)
    return t * t * val


show("S2xR area t=0.3", s2r_area(0.3))
show("S2xR area t=0.5", s2r_area(0.5))
inv, _ = integrate.quad(lambda t: 1 / s2r_area(t), 0.2, 0.4, epsabs=0, epsrel=1e-13)
show("S2xR szego cap r=.2 lam=2", 1 / (4 * np.pi * inv))
vol, _ = integrate.quad(s2r_area, 0, 0.3, epsabs=0, epsrel=1e-13)
show("S2xR volume r=0.3", vol)
show("zero-trace area t=0.3", zero_trace_area(0.3))


def s3_probe(r, lam=2.0, samples=400001):
    # exact radial harmonic function on the S^3 annulus versus the Euclidean
    # profile, maximized on a dense grid
    rho = np.linspace(r, lam * r, samples)
    d = 1 / np.tan(r) - 1 / np.tan(lam * r)
    u = (1 / np.tan(r) - 1 / np.tan(rho)) / d
    phi0 = (1 - r / rho) / (1 - 1 / lam)
    du = 1 / np.sin(rho) ** 2 / d
    c3 = 1 / (1 / r - 1 / (lam * r))
    return np.max(np.abs(u - phi0)), np.max(np.abs(du - c3 / rho**2))


for rr in (0.1, 0.05):
    sup, grad = s3_probe(rr)
    show(f"S3 probe sup r={rr}", sup)
    show(f"S3 probe grad r={rr}", grad)
show("S3 deficit r=0.1 lam=2", 1 - mp.sin(2 * r) / (2 * r))
show("H3 deficit r=0.1 lam=2", 1 - mp.sinh(2 * r) / (2 * r))
