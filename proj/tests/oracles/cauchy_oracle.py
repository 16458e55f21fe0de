"""High-precision reference values for the Cauchy exit approximation.

Everything here is computed with mpmath quadrature and a fresh transcription
of the bounds; the C++ tests freeze the printed numbers.

    python3 tests/oracles/cauchy_oracle.py
"""
from mpmath import mp, mpf, quad, inf, pi, e, exp, sqrt, gammainc

mp.dps = 40
C_INT = mpf(1)


def s(x, c=C_INT):
    return c / x**2


def density(t, x, c=C_INT):
    g = pi * c * t
    return g / (pi * (g**2 + x**2))


def convolution(b, y, c=C_INT):
    # integral over v > b of s(v) s(y - v), split at a few scales
    w = b - max(y, 0)
    pts = [b, b + w, b + 10 * w, b + 1000 * w, inf]
    return quad(lambda v: s(v, c) * s(y - v, c), pts)


def p_breve(b, y, t, c=C_INT):
    return t**2 / 2 * convolution(b, y, c) / density(t, y, c)


def K(eta, eps, t, c=C_INT):
    # C(eta, eps) t^(eta/eps) with C = (2 c e / eta)^(eta/eps)
    return (2 * c * e / eta) ** (eta / eps) * t ** (eta / eps)


def cauchy_terms(b, y, t, eps, eps0, c=C_INT):
    lam = 2 * c / eps
    a = c / eps**2
    sigma = sqrt(2 * c * eps)
    d = b - y
    el = exp(-lam * t)
    e0 = 4 * el / d * K(d / 2, eps, t)
    e11 = el * a * t * K(b, eps, t)
    e12 = 2 * el * a * t * K(d / 2, eps, t)
    e21 = el * a * lam * t**2 * K(b, eps, t) / 2
    e23 = el * a * lam * t**2 * K(d / 2, eps, t)
    e22 = 2 * el * a * lam * t**2 * K(eps0, eps, t) + 2 * el * t ** mpf(2.5) * sigma * s(b - eps0) * s(d - 2 * eps0)
    e3 = a * lam**2 * t**3 / 6 * (K(b, eps, t) + 2 * K(d / 2, eps, t) + 2 * K(eps0, eps, t)) + \
        16 * pi * c**3 * t**3 / (3 * eps * (b - eps0) ** 2 * (d - 2 * eps0)) * exp(2 * pi * c * t / eps - lam * t)
    kill = (1 - el) * t**2 / 2 * convolution(b, y, c)
    return [e0, e11, e12, e21, e22, e23, e3, kill]


def default_cutoffs(b, y):
    d = b - y
    eps = min(d / 8, b / 2)
    eps0 = min(d / 4, b / 2)
    lim = min((d - eps) / 2, b - eps)
    if not eps0 < lim:
        eps0 = mpf("0.99") * lim
    return eps, eps0


def bound_default(b, y, t, c=C_INT):
    eps, eps0 = default_cutoffs(b, y)
    return sum(cauchy_terms(b, y, t, eps, eps0, c)) / density(t, y, c)


def bound_ladder(b, y, t, rungs=4, c=C_INT):
    eps, eps0 = default_cutoffs(b, y)
    best = inf
    for k in range(rungs):
        v = sum(cauchy_terms(b, y, t, eps, eps0, c)) / density(t, y, c)
        if not v < best:
            break
        best = v
        eps /= 4
        if k > 0:
            eps0 /= 4
    return best


def general_bound(a, b, y, t, eps, c_int=C_INT):
    c = min(b, -a)
    delta = min(b - y, y - a)
    lam = 2 * c_int / eps
    am = c_int / eps**2
    ap = 2 * c_int / eps**3
    sigma = sqrt(2 * c_int * eps)
    el = exp(-lam * t)
    first = el * K(delta / 4, eps, t, c_int) * (8 / delta + 2 * am * t + am * lam * t**2)
    second = 2 * el * am * K(c / 2, eps, t, c_int) * t * (1 + t * lam)
    third = lam**2 * am / 2 * t**3
    fourth = am / lam * (1 - el * (1 + lam * t + (lam * t) ** 2 / 2))
    fifth = el * t**2 * (2 * am**2 + lam * ap) * sigma * sqrt(t)
    return (first + second + third + fourth + fifth) / density(t, y, c_int)


if __name__ == "__main__":
    one = mpf(1)
    print("convolution(1, 0.5)      =", mp.nstr(convolution(one, mpf("0.5")), 20))
    print("convolution(1, -2)       =", mp.nstr(convolution(one, mpf(-2)), 20))
    print("convolution(0.01, 0.0099)=", mp.nstr(convolution(mpf("0.01"), mpf("0.0099")), 20))
    print("convolution c=2 (1, 0.3) =", mp.nstr(convolution(one, mpf("0.3"), mpf(2)), 20))
    print("p_breve(1, 0.5, 0.01)    =", mp.nstr(p_breve(one, mpf("0.5"), mpf("0.01")), 20))
    print("p_breve(1, 0.25, 0.02)   =", mp.nstr(p_breve(one, mpf("0.25"), mpf("0.02")), 20))
    print("p_breve(1, 0.25, 0.01)   =", mp.nstr(p_breve(one, mpf("0.25"), mpf("0.01")), 20))
    print("bound_default(1,.5,.01)  =", mp.nstr(bound_default(one, mpf("0.5"), mpf("0.01")), 20))
    print("bound_ladder(1,.5,.01)   =", mp.nstr(bound_ladder(one, mpf("0.5"), mpf("0.01")), 20))
    print("bound_ladder(1,.25,.02)  =", mp.nstr(bound_ladder(one, mpf("0.25"), mpf("0.02")), 20))
    print("bound_ladder(1,.25,.01)  =", mp.nstr(bound_ladder(one, mpf("0.25"), mpf("0.01")), 20))
    print("bound_ladder(.005,-.6,1e-9)=", mp.nstr(bound_ladder(mpf("0.005"), mpf("-0.6"), mpf("1e-9")), 20))
    print("bound_default(.005,-.6,1e-9)=", mp.nstr(bound_default(mpf("0.005"), mpf("-0.6"), mpf("1e-9")), 20))
    print("general(-1,1,0,0.01,1/16)=", mp.nstr(general_bound(-one, one, mpf(0), mpf("0.01"), one / 16), 20))
