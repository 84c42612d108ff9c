"""Count crossings of |zeta(0.75 + it)| = 1/2 on (10, 500).

Uses mpmath's own double-precision zeta on a 0.002 grid, fine enough to
separate the closest crossing pairs (~0.02 apart) in this range.
"""

import mpmath as mp


def main():
    zeta = mp.fp.zeta
    count = 0
    close = []
    prev = None
    last = None
    i = 0
    while True:
        t = 10 + 0.002 * i
        if t > 500:
            break
        v = abs(zeta(complex(0.75, t))) - 0.5
        if prev is not None and (v < 0) != (prev < 0):
            count += 1
            if last is not None and t - last < 0.06:
                close.append((round(last, 3), round(t, 3)))
            last = t
        prev = v
        i += 1
    print(f"crossings: {count}")
    print(f"pairs closer than 0.06: {close}")


if __name__ == "__main__":
    main()
