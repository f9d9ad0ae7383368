"""Regenerate the bundled table of Riemann zeta zero ordinates with mpmath."""
import argparse

import mpmath


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("count", type=int)
    ap.add_argument("out")
    args = ap.parse_args()
    mpmath.mp.dps = 20
    with open(args.out, "w") as fh:
        for k in range(1, args.count + 1):
            fh.write(mpmath.nstr(mpmath.zetazero(k).imag, 15, strip_zeros=False) + "\n")


if __name__ == "__main__":
    main()
