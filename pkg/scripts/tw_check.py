"""Tracy-Widom cross-checks and the constant in the smallest-eigenvalue law.

Compares the Painleve integral with the Airy Fredholm determinant, then
the soft/hard gap probability on (0, x) with F(-k x)/F(0) for k = 1 and
k = 2^(2/3).
"""
import numpy as np

from softhard import fredholm as fr
from softhard import limitkernel as lk
from softhard import painleve as pv


def main():
    for a in (-3.0, -1.0, 0.0, 1.0):
        print(f"F({a:+.0f}): painleve={pv.tw_cdf(a):.15f}  fredholm={fr.airy_det(a):.15f}")
    ctx = lk.fg_context(0.0, 0.0)
    print(f"{'x':>5} {'gap':>12} {'F(-x)/F(0)':>12} {'F(-2^(2/3)x)/F(0)':>18}")
    for x in np.array([0.25, 0.5, 1.0, 2.0, 4.0]):
        g, r1 = fr.smallest_eig_cdf(float(x), 0.0, ctx)
        _, r2 = fr.smallest_eig_cdf(float(x), 0.0, ctx, 2 ** (2 / 3))
        print(f"{x:5.2f} {g:12.9f} {r1:12.9f} {r2:18.9f}")


if __name__ == "__main__":
    main()
