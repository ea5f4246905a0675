"""Equilibrium densities of V_c for c = 0.7, 1, 1.2 with mass and edge checks."""
import math
import sys

import numpy as np

from softhard import equilibrium as eq
from softhard.cli import ExperimentConfig, run_command


def main(out="out/figure1"):
    for c in (0.7, 1.0, 1.2):
        m = eq.equilibrium_vc(c)
        (A, B), = m.support
        rep = eq.check_variational(m, grid=list(A + (B - A) * np.linspace(0.05, 0.95, 10)) + [B + 1.0])
        print(f"c={c:<4} support=[{A:.7f}, {B:.7f}] edge={m.edge_type_at_zero:<16} "
              f"mass-1={m.integrate() - 1:+.1e} |U|max={rep.max_equality_residual:.1e} slack={rep.min_slack:.3f}")
    c1, c2 = eq.numerical_constants(eq.equilibrium_vc(1.0))
    print(f"c=1 constants: c1={c1:.12f} (1/2), c2={c2:.12f} (2^(1/3)={2 ** (1 / 3):.12f})")
    w = eq.symmetrize(eq.equilibrium_vc(1.0))
    print(f"symmetrized: c1_W={w.c1}, c2_W={w.c2:.12f}, 8 c1_W / pi = psi_W''(0) = {8 * w.c1 / math.pi:.12f}")
    for name in run_command("eqdensity", ExperimentConfig(out=out)):
        print("wrote", name)


if __name__ == "__main__":
    main(*sys.argv[1:])
