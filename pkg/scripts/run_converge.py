"""Universality error E(n) for the c = 1 field and its empirical rate.

    python3 scripts/run_converge.py --nlist 20,40,60,80 --L 0 --out out/converge
"""
import argparse

from softhard.cli import ExperimentConfig, empirical_rate, run_command, run_converge


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--L", type=float, default=0.0)
    p.add_argument("--nlist", default="20,40,60")
    p.add_argument("--grid", type=int, default=25)
    p.add_argument("--out", default="out/converge")
    a = p.parse_args()
    cfg = ExperimentConfig(alpha=a.alpha, L=a.L, n_list=tuple(int(v) for v in a.nlist.split(",")), grid=a.grid, out=a.out)
    rows = run_converge(cfg)
    print(f"{'n':>4} {'N':>10} {'E(n)':>12}")
    for r in rows:
        print(f"{r.n:>4} {r.N:>10.4f} {r.error:>12.4e}" + ("" if r.available else f"  unavailable: {r.note}"))
    rate = empirical_rate(rows)
    if rate is not None:
        print(f"empirical rate: E ~ n^{rate:.3f}")
    for name in run_command("converge", cfg):
        print("wrote", name)


if __name__ == "__main__":
    main()
