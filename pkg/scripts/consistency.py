"""Internal identities of the limiting kernel for a few (alpha, s)."""
import numpy as np

from softhard import limitkernel as lk


def main():
    grid = np.random.default_rng(7).uniform(0.3, 6.0, (30, 2))
    for alpha in (0.0, 0.5, 1.0):
        for s in (-1.0, 0.0, 1.0):
            rep = lk.consistency_residual(alpha, s, grid)
            drift = lk.xmax_drift(alpha, s)
            minus = "n/a" if rep.res_minus_route is None else f"{rep.res_minus_route:.1e}"
            print(f"alpha={alpha:3.1f} s={s:+.1f}  plus={rep.res_plus_route:.1e}  minus={minus:>7}  "
                  f"lax={rep.res_lax:.1e}  xmax_drift={drift:.1e}")


if __name__ == "__main__":
    main()
