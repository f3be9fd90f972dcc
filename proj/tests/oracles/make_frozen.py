"""Regenerates frozen.json with mpmath/sympy; the C++ tests only read the JSON."""
import json
import pathlib

import mpmath as mp
import sympy as sp

mp.mp.dps = 40


def f(x):
    return float(x)


def bessel_values():
    out = []
    for twice in (-1, 0, 1, 2, 5, 14, 31, 50):
        nu = mp.mpf(twice) / 2
        for t in ("1e-3", "0.5", "3", "5.9", "6.1", "11.9", "12.1", "24", "30", "80", "300"):
            out.append({"twice": twice, "t": f(mp.mpf(t)), "j": f(mp.besselj(nu, mp.mpf(t)))})
    return out


def bessel_zeros():
    out = []
    for twice in (-1, 0, 1, 2, 7, 20):
        nu = mp.mpf(twice) / 2
        for k in (1, 2, 3, 10, 40):
            z = mp.pi * (k - mp.mpf(1) / 2) if twice == -1 else mp.besseljzero(nu, k)
            out.append({"twice": twice, "k": k, "zero": f(z)})
    return out


def jt(nu, t):
    return mp.besselj(nu, t) / t**nu if t != 0 else 1 / (2**nu * mp.gamma(nu + 1))


def bump(s):
    return mp.e ** (1 - 1 / ((1 - s) * (1 + s))) if s < 1 else mp.mpf(0)


def bump_transforms():
    out = []
    for n in (1, 2, 3, 5):
        nu = mp.mpf(n) / 2 - 1
        for r in ("0.25", "1", "2.5"):
            r = mp.mpf(r)
            v = (2 * mp.pi) ** (mp.mpf(n) / 2) * mp.quad(
                lambda s: bump(s) * jt(nu, 2 * mp.pi * r * s) * s ** (n - 1), mp.linspace(0, 1, 9))
            out.append({"n": n, "r": f(r), "value": f(v)})
    return out


def bump_hat_phi(t):
    return 6 * mp.sqrt(mp.pi) * 2 ** mp.mpf(3.5) * jt(mp.mpf(3.5), 2 * mp.pi * t)


def bump_hat_transforms():
    out = []
    for n in (2, 3):
        nu = mp.mpf(n) / 2 - 1
        for r in ("0.3", "0.6"):
            r = mp.mpf(r)
            g = lambda s: bump_hat_phi(s) * jt(nu, 2 * mp.pi * r * s) * s ** (n - 1)
            v = (2 * mp.pi) ** (mp.mpf(n) / 2) * mp.quadosc(g, [0, mp.inf], omega=mp.pi * (1 + r))
            out.append({"n": n, "r": f(r), "value": f(v)})
    return out


def raising_coefficients(kmax):
    r = sp.symbols("r", positive=True)
    phi = sp.Function("phi")
    expr = phi(r)
    out = []
    for k in range(1, kmax + 1):
        expr = sp.expand(-sp.diff(expr, r) / r)
        for l in range(1, k + 1):
            c = sp.expand(expr).coeff(sp.Derivative(phi(r), (r, l))) * r ** (2 * k - l)
            out.append({"k": k, "l": l, "c": str(sp.nsimplify(sp.simplify(c)))})
    return out


doc = {
    "bessel": bessel_values(),
    "bessel_zeros": bessel_zeros(),
    "bump_direct": bump_transforms(),
    "bump_hat_direct": bump_hat_transforms(),
    "raising": raising_coefficients(6),
}
path = pathlib.Path(__file__).with_name("frozen.json")
path.write_text(json.dumps(doc, indent=1) + "\n")
