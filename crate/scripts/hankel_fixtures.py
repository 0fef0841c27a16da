"""Golden values for H_nu^(1)(z), nu = 0..3, on a quasi-random sample of the
right half-plane |z| <= 100, evaluated with mpmath through H_nu^(1)(z) = (2/(pi i)) i^(-nu) K_nu(-i z)
at 50 significant digits, and cross-checked against mpmath.hankel1 at 150
digits (the direct J + iY route cancels catastrophically for Im z >> 1).

Writes crates/core/tests/fixtures/hankel_golden.csv with columns
z_re,z_im,order,h_re,h_im.
"""
import math
import pathlib

import mpmath

mpmath.mp.dps = 50


def halton(i, base):
    f, r = 1.0, 0.0
    while i > 0:
        f /= base
        r += f * (i % base)
        i //= base
    return r


def main():
    out = pathlib.Path(__file__).resolve().parent.parent / "crates/core/tests/fixtures/hankel_golden.csv"
    lines = ["z_re,z_im,order,h_re,h_im"]
    n = 1000
    for i in range(1, n + 1):
        # log-uniform modulus on [1e-3, 100], argument strictly inside (-pi/2, pi/2)
        modulus = 10.0 ** (-3.0 + 5.0 * halton(i, 2))
        arg = (halton(i, 3) - 0.5) * (math.pi - 2e-3)
        z_re = modulus * math.cos(arg)
        z_im = modulus * math.sin(arg)
        order = i % 4
        z = mpmath.mpc(z_re, z_im)
        h = 2 / (mpmath.pi * 1j) * mpmath.mpc(0, 1) ** (-order) * mpmath.besselk(order, -1j * z)
        with mpmath.workdps(150):
            check = mpmath.hankel1(order, z)
        assert abs(h - check) <= mpmath.mpf(10) ** -30 * abs(check), (z, order)
        lines.append(f"{z_re!r},{z_im!r},{order},{float(h.real)!r},{float(h.imag)!r}")
    out.write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
