#!/usr/bin/env python3
"""Generate Taylor coefficients of the Riemann-Siegel correction terms C0..C4.

The coefficients are expansions in u = p - 1/2 of the classical combinations
of derivatives of Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p), computed
with exact power-series arithmetic at high precision.  Output is a C++ header.
"""
import sys
import mpmath as mp

mp.mp.dps = 120
DEG = 140


def series_mul(a, b):
    out = [mp.mpf(0)] * DEG
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j in range(DEG - i):
            out[i + j] += ai * b[j]
    return out


def series_inv(a):
    out = [mp.mpf(0)] * DEG
    out[0] = 1 / a[0]
    for n in range(1, DEG):
        s = mp.mpf(0)
        for k in range(1, n + 1):
            s += a[k] * out[n - k]
        out[n] = -s / a[0]
    return out


def cos_sin_of_scaled_square(a):
    """Series of cos(a u^2) and sin(a u^2)."""
    c = [mp.mpf(0)] * DEG
    s = [mp.mpf(0)] * DEG
    m = 0
    while 2 * m < DEG:
        term = a ** m / mp.factorial(m)
        if m % 2 == 0:
            c[2 * m] = term * (1 if (m // 2) % 2 == 0 else -1)
        else:
            s[2 * m] = term * (1 if ((m - 1) // 2) % 2 == 0 else -1)
        m += 1
    return c, s


def psi_series():
    pi = mp.pi
    cos_q, sin_q = cos_sin_of_scaled_square(2 * pi)
    b = -5 * pi / 8
    num = [-(mp.cos(b) * cq - mp.sin(b) * sq) for cq, sq in zip(cos_q, sin_q)]
    den = [mp.mpf(0)] * DEG
    for n in range(0, DEG, 2):
        den[n] = (2 * pi) ** n / mp.factorial(n) * (1 if (n // 2) % 2 == 0 else -1)
    return series_mul(num, series_inv(den))


def derivative(a, j):
    return [a[n + j] * mp.factorial(n + j) / mp.factorial(n) if n + j < DEG else mp.mpf(0)
            for n in range(DEG)]


def combine(terms):
    out = [mp.mpf(0)] * DEG
    for coef, ser in terms:
        for n in range(DEG):
            out[n] += coef * ser[n]
    return out


def main():
    pi = mp.pi
    psi = psi_series()
    d = {j: derivative(psi, j) for j in range(0, 13)}
    c = [
        psi,
        combine([(-1 / (96 * pi ** 2), d[3])]),
        combine([(1 / (18432 * pi ** 4), d[6]), (1 / (64 * pi ** 2), d[2])]),
        combine([(-1 / (5308416 * pi ** 6), d[9]), (-1 / (3840 * pi ** 4), d[5]),
                 (-1 / (64 * pi ** 2), d[1])]),
        combine([(1 / (2038431744 * pi ** 8), d[12]), (11 / (5898240 * pi ** 6), d[8]),
                 (19 / (24576 * pi ** 4), d[4]), (1 / (128 * pi ** 2), d[0])]),
    ]
    # Truncate where |coef| * (1/2)^n stays below 1e-22 for the rest of the series.
    lines = []
    lines.append("// Generated by tools/oracles/gen_rs_coefficients.py; do not edit.")
    lines.append("// Taylor coefficients in u = p - 1/2 of the Riemann-Siegel corrections C0..C4.")
    lines.append("#pragma once")
    lines.append("")
    lines.append("#include <array>")
    lines.append("#include <span>")
    lines.append("")
    lines.append("namespace metazeta::detail {")
    lines.append("")
    names = []
    for k, ser in enumerate(c):
        last = 0
        for n in range(DEG):
            if abs(ser[n]) * mp.mpf(0.5) ** n > mp.mpf("1e-22"):
                last = n
        coeffs = ser[: last + 1]
        name = f"kRsC{k}"
        names.append(name)
        lines.append(f"inline constexpr std::array<double, {len(coeffs)}> {name} = {{")
        for v in coeffs:
            lines.append(f"    {mp.nstr(v, 20, min_fixed=0, max_fixed=0)},")
        lines.append("};")
        lines.append("")
    lines.append("inline constexpr std::array<std::span<const double>, 5> kRsCorrections = {")
    for name in names:
        lines.append(f"    std::span<const double>({name}),")
    lines.append("};")
    lines.append("")
    lines.append("}  // namespace metazeta::detail")
    sys.stdout.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
