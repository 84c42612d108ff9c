#!/usr/bin/env python3
"""Independent arbitrary-precision oracle for the zeta test values.

Implements Euler-Maclaurin summation directly in mpmath arithmetic (40
digits) and cross-checks every value against mpmath.zeta. Prints the frozen
values used by tests/test_zeta.cpp.
"""
import mpmath as mp

mp.mp.dps = 40


def zeta_em(s):
    s = mp.mpc(s)
    n_terms = int(60 + abs(s))
    total = mp.fsum(mp.power(n, -s) for n in range(1, n_terms))
    big_n = mp.mpf(n_terms)
    total += mp.power(big_n, 1 - s) / (s - 1) + mp.power(big_n, -s) / 2
    rising = s
    for k in range(1, 60):
        term = mp.bernoulli(2 * k) / mp.factorial(2 * k) * rising * mp.power(big_n, -s - 2 * k + 1)
        total += term
        if abs(term) < mp.mpf(10) ** (-45):
            break
        rising *= (s + 2 * k - 1) * (s + 2 * k)
    return total


def hardy_z(t):
    t = mp.mpf(t)
    theta = mp.im(mp.loggamma(mp.mpf(1) / 4 + 1j * t / 2)) - t / 2 * mp.log(mp.pi)
    return mp.re(mp.expj(theta) * zeta_em(mp.mpf(1) / 2 + 1j * t))


def check(a, b):
    assert abs(a - b) <= mp.mpf(10) ** (-30) * max(1, abs(b)), (a, b)


def main():
    s = mp.mpc(0.75, 100)
    v = zeta_em(s)
    check(v, mp.zeta(s))
    print(f"zeta(0.75+100i) = {mp.nstr(v.real, 20)} {mp.nstr(v.imag, 20)}")
    for sig, t in [(0.6, 1234.5), (0.9, 25.0), (1.5, 3.0), (0.5, 14.134725141734693), (0.55, 20000.0)]:
        v = zeta_em(mp.mpc(sig, t))
        check(v, mp.zeta(mp.mpc(sig, t)))
        print(f"zeta({sig}+{t}i) = {mp.nstr(v.real, 20)} {mp.nstr(v.imag, 20)}")
    for t in [14.0, 14.2, 50.0, 100.0, 150.0, 999.5, 1000.0, 2500.0, 7777.0, 12000.0, 99999.0]:
        z = hardy_z(t)
        check(z, mp.siegelz(t))
        print(f"Z({t}) = {mp.nstr(z, 20)}  Ztilde2 = {mp.nstr(z * z / mp.log(t), 20)}")
    for t in [20.0, 99.0, 100.0, 5000.0]:
        print(f"theta({t}) = {mp.nstr(mp.siegeltheta(t), 22)}")


if __name__ == "__main__":
    main()
