#!/usr/bin/env python3
"""Regenerate the golden-value CSV tables in tests/fixtures with mpmath.

Every row is: function,ell,x_or_z,mantissa,log_scale
with value = mantissa * exp(log_scale), log_scale = e*ln(10) for an integer e
and 0.1 <= |mantissa| < 1 (the library's ScaledValue normalization).
"""
import argparse
import pathlib

import mpmath as mp

mp.mp.dps = 60


def scaled(v):
    v = mp.mpf(v)
    if v == 0:
        return "0", "0"
    e = int(mp.floor(mp.log10(abs(v)))) + 1
    m = v / mp.power(10, e)
    if abs(m) >= 1:
        m /= 10
        e += 1
    if abs(m) < mp.mpf("0.1"):
        m *= 10
        e -= 1
    return mp.nstr(m, 20, strip_zeros=False), mp.nstr(e * mp.log(10), 25, strip_zeros=False)


def bessel_i(ell, x):
    return mp.besseli(ell + mp.mpf(1) / 2, x)


def bessel_k(ell, x):
    return mp.besselk(ell + mp.mpf(1) / 2, x)


def mie_a(ell, x):
    num = ell * bessel_i(ell, x) - x * bessel_i(ell - 1, x)
    den = ell * bessel_k(ell, x) + x * bessel_k(ell - 1, x)
    return (-1) ** (ell + 1) * mp.pi / 2 * num / den


def mie_b(ell, x):
    return (-1) ** (ell + 1) * mp.pi / 2 * bessel_i(ell, x) / bessel_k(ell, x)


def legendre_pi(n, z):
    # pi_n = P_n'(z) from the closed derivative formula (valid for |z| != 1)
    return n * (z * mp.legendre(n, z) - mp.legendre(n - 1, z)) / (z * z - 1)


def legendre_tau(n, z):
    return n * (n + 1) * mp.legendre(n, z) - z * legendre_pi(n, z)


def amplitudes(x, z):
    s_perp = mp.mpf(0)
    s_par = mp.mpf(0)
    peak = mp.mpf(0)
    ell = 1
    while True:
        a, b = mie_a(ell, x), mie_b(ell, x)
        p, t = legendre_pi(ell, z), legendre_tau(ell, z)
        c = mp.mpf(2 * ell + 1) / (ell * (ell + 1))
        tp, tq = c * (a * p + b * t), c * (a * t + b * p)
        s_perp += tp
        s_par += tq
        peak = max(peak, abs(tp), abs(tq))
        if ell > x and max(abs(tp), abs(tq)) < mp.mpf(10) ** -40 * peak:
            return s_perp, s_par
        ell += 1


def rows():
    out = []
    for ell, x in [(0, 1), (1, 1), (3, 0.5), (10, 0.5), (50, 30), (5, 5), (20, 100), (100, 400), (400, 100), (1000, 800)]:
        x = mp.mpf(x)
        out.append(("bessel_i_half", ell, x, bessel_i(ell, x)))
        out.append(("bessel_k_half", ell, x, bessel_k(ell, x)))
    for z in [mp.mpf(-3), mp.mpf("-1.5")]:
        top = 10 if z == -3 else 200
        for ell in range(1, top + 1):
            if z == -3 or ell in (1, 2, 17, 64, 100, 150, 199, 200):
                out.append(("pi", ell, z, legendre_pi(ell, z)))
                out.append(("tau", ell, z, legendre_tau(ell, z)))
    for ell, x in [(1, 1), (2, 1), (5, 10), (40, 20), (3, 0.1)]:
        x = mp.mpf(x)
        out.append(("mie_a", ell, x, mie_a(ell, x)))
        out.append(("mie_b", ell, x, mie_b(ell, x)))
    for x, z in [(5, -2), (1, -1.25), (50, "-1.3"), (20, -7)]:
        x, z = mp.mpf(x), mp.mpf(z)
        sp, sq = amplitudes(x, z)
        out.append(("s_perp@" + mp.nstr(z, 6), 0, x, sp))
        out.append(("s_par@" + mp.nstr(z, 6), 0, x, sq))
    for u in ["1e-8", "0.01", "0.5", "1", "2", "10", "50"]:
        u = mp.mpf(u)
        out.append(("e1", 0, u, mp.e1(u)))
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "special_values.csv"))
    args = parser.parse_args()
    with open(args.out, "w") as f:
        f.write("function,ell,x_or_z,mantissa,log_scale\n")
        for name, ell, arg, value in rows():
            m, ls = scaled(value)
            f.write(f"{name},{ell},{mp.nstr(arg, 17)},{m},{ls}\n")


if __name__ == "__main__":
    main()
