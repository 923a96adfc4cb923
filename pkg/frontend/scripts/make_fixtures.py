#!/usr/bin/env python3
"""Regenerate the frontend test fixtures with the phasesim CLI.

Produces three small trajectory directories (quantum / classical / two-node
kernels, shared grid and initial state) under test/fixtures/.  The initial
state is the first excited oscillator eigenstate, whose Wigner function is
negative at the origin, so heatmap rendering of negativity is exercised.
"""

import pathlib
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "test" / "fixtures"

CFG = """\
[grid]
nq = 32
np = 32
q_min = -8
q_max = 8
p_min = -8
p_max = 8

[model]
hbar = 1.0

[kernel]
type = {kernel}
{nodes}

[hamiltonian]
type = ho

[initial]
type = file
path = {initial}

[evolve]
t_final = 0.2
dt = 0.01
integrator = rk4
snapshot_stride = 5

[output]
dir = {outdir}
"""


def write_initial(path):
    sys.path.insert(0, str(ROOT.parent / "src"))
    from phasesim import ho_wigner_closed_form, integrate, make_grid, PhaseField
    from phasesim.io import write_psfield

    grid = make_grid(32, 32, -8, 8, -8, 8)
    w1 = ho_wigner_closed_form(1, grid, 1.0)
    w1 = PhaseField(grid, w1.values / integrate(w1), role="density")
    write_psfield(path, w1)


def main():
    FIXTURES.mkdir(parents=True, exist_ok=True)
    initial = FIXTURES / "w1.psf"
    write_initial(initial)
    runs = [
        ("quantum", "quantum", ""),
        ("classical", "classical", ""),
        ("twonode", "nodes", "nodes = 1.0:1.0,0.5:2.0"),
    ]
    for name, kernel, nodes in runs:
        outdir = FIXTURES / f"traj_{name}"
        cfg = FIXTURES / f"{name}.cfg"
        cfg.write_text(CFG.format(kernel=kernel, nodes=nodes,
                                  initial=initial.name, outdir=outdir.name))
        subprocess.run(["phasesim", "evolve", "--config", str(cfg)],
                       check=True, cwd=FIXTURES)
        print(f"wrote {outdir}")


if __name__ == "__main__":
    main()
