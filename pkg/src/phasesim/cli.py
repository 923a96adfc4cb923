"""Command-line frontend.

Subcommands: transform, evolve, measure, volume, hamiltonian, check.
Exit codes: 0 ok, 1 invariant violation (check), 2 config/validation error,
3 I/O error, 4 numerical instability.  All outputs are deterministic:
identical inputs produce byte-identical files.
"""

from __future__ import annotations

import argparse
import shutil
import sys
from pathlib import Path

import numpy as np

from . import io as psio
from .duality import (Effect, born_probability, inner_product, state_volume,
                      symmetry_invariance_suite)
from .dynamics import (DynamicsKernel, EigenstateEntry, EigenstateSet,
                       SeparableHamiltonian, assemble_liouvillian, evolve,
                       j_condition_checks, stationarity_residual)
from .energy import assemble_hamiltonian, energy_expectation, ho_eigenstate_set
from .errors import FormatError, InstabilityError, PhasesimError, ValidationError
from .grid import PhaseField, PhaseGrid, integrate, make_grid
from .states import (Wavefunction, gaussian_state, ho_wavefunction,
                     ring_state, wigner_of_wavefunction)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_INSTABILITY = 4


def _build_grid(cfg: psio.SimulationConfig) -> PhaseGrid:
    return make_grid(cfg.nq, cfg.np_, cfg.q_min, cfg.q_max, cfg.p_min, cfg.p_max)


def _build_kernel(cfg: psio.SimulationConfig) -> DynamicsKernel:
    if cfg.kernel_type == "quantum":
        return DynamicsKernel.quantum(cfg.hbar)
    if cfg.kernel_type == "classical":
        return DynamicsKernel.classical()
    return DynamicsKernel.from_nodes(cfg.kernel_nodes)


def _load_eigenstate_dir(path: Path) -> EigenstateSet:
    manifest = psio.read_manifest_csv(path / "manifest.csv")
    entries = []
    for _, energy, volume, filename in manifest:
        g = psio.read_psfield(path / filename)
        entries.append(EigenstateEntry(g, energy, volume))
    return EigenstateSet(entries)


def _build_source(cfg: psio.SimulationConfig, grid: PhaseGrid):
    if cfg.hamiltonian_type == "ho":
        return SeparableHamiltonian.harmonic(grid, cfg.mass, cfg.omega)
    if cfg.hamiltonian_type == "quartic":
        return SeparableHamiltonian.quartic(grid, cfg.quartic_lambda, cfg.mass)
    if cfg.hamiltonian_type == "file":
        f = psio.read_psfield(cfg.resolve(cfg.hamiltonian_path))
        if not f.grid.same_as(grid):
            raise ValidationError("hamiltonian field grid mismatches [grid]")
        return f
    return _load_eigenstate_dir(cfg.resolve(cfg.hamiltonian_path))


def _source_h_field(source) -> PhaseField:
    if isinstance(source, SeparableHamiltonian):
        return source.as_field()
    if isinstance(source, EigenstateSet):
        return source.combined_field()
    return source


def _build_initial(cfg: psio.SimulationConfig, grid: PhaseGrid,
                   source) -> PhaseField:
    if cfg.initial_type == "gaussian":
        return gaussian_state(grid, cfg.q0, cfg.p0, cfg.sigma_q, cfg.sigma_p)
    if cfg.initial_type == "coherent":
        sq = np.sqrt(cfg.hbar / (2.0 * cfg.mass * cfg.omega))
        sp = np.sqrt(cfg.hbar * cfg.mass * cfg.omega / 2.0)
        return gaussian_state(grid, cfg.q0, cfg.p0, sq, sp)
    if cfg.initial_type == "eigenstate":
        return wigner_of_wavefunction(
            ho_wavefunction(cfg.n, grid, cfg.hbar, cfg.mass, cfg.omega))
    if cfg.initial_type == "ring":
        return ring_state(grid, cfg.e0, cfg.width, _source_h_field(source))
    f = psio.read_psfield(cfg.resolve(cfg.initial_path))
    if not f.grid.same_as(grid):
        raise ValidationError("initial field grid mismatches [grid]")
    return f


def _read_wavefunction_file(path: Path, grid: PhaseGrid,
                            hbar: float) -> Wavefunction:
    try:
        raw = np.loadtxt(path, delimiter=",", dtype=float, ndmin=2)
    except OSError as exc:
        raise FormatError(f"cannot read wavefunction {path}: {exc}") from exc
    except ValueError as exc:
        raise FormatError(f"malformed wavefunction {path}: {exc}") from exc
    if raw.shape != (grid.nq, 2):
        raise ValidationError(
            f"wavefunction file needs {grid.nq} 're,im' rows, got {raw.shape}")
    return Wavefunction(grid, raw[:, 0] + 1j * raw[:, 1], hbar)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_transform(args) -> int:
    cfg = psio.load_config(args.config)
    grid = _build_grid(cfg)
    if args.wavefunction:
        psi = _read_wavefunction_file(Path(args.wavefunction), grid, cfg.hbar)
    else:
        psi = ho_wavefunction(args.ho_n, grid, cfg.hbar, cfg.mass, cfg.omega)
    w = wigner_of_wavefunction(psi)
    psio.write_psfield(args.out, w)
    print(f"integral={integrate(w):.12g}")
    print(f"V={state_volume(w):.12g}")
    return EXIT_OK


def cmd_volume(args) -> int:
    f = psio.read_psfield(args.state)
    print(f"V={state_volume(f):.12g}")
    return EXIT_OK


def cmd_evolve(args) -> int:
    cfg = psio.load_config(args.config)
    grid = _build_grid(cfg)
    kernel = _build_kernel(cfg)
    source = _build_source(cfg, grid)
    f0 = _build_initial(cfg, grid, source)
    h_field = _source_h_field(source)

    out_dir = Path(args.out) if args.out else cfg.resolve(cfg.output_dir)
    traj = evolve(f0, source, kernel, cfg.t_final, cfg.dt,
                  integrator=cfg.integrator,
                  snapshot_stride=cfg.snapshot_stride)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        rows = []
        for idx, (t, snap) in enumerate(zip(traj.times, traj.fields)):
            name = f"snap_{idx:05d}_t={t:.9f}.psf"
            psio.write_psfield(out_dir / name, snap)
            rows.append((t, integrate(snap), inner_product(snap, snap),
                         energy_expectation(h_field, snap)))
        psio.write_diagnostics_csv(out_dir / "diagnostics.csv", rows)
    except OSError:
        shutil.rmtree(out_dir, ignore_errors=True)
        raise
    print(f"snapshots={len(traj)}")
    print(f"dir={out_dir}")
    return EXIT_OK


def cmd_measure(args) -> int:
    f = psio.read_psfield(args.state)
    eig = _load_eigenstate_dir(Path(args.effects))
    rows = []
    total = 0.0
    for idx, entry in enumerate(eig.entries):
        effect = Effect(entry.g, entry.volume)
        prob = born_probability(effect, f)
        total += prob
        rows.append((idx, entry.energy, entry.volume, prob))
    psio.write_measurement_csv(args.out, rows, total)
    print(f"rows={len(rows)}")
    print(f"total={total:.9f}")
    return EXIT_OK


def cmd_hamiltonian(args) -> int:
    cfg = psio.load_config(args.config)
    grid = _build_grid(cfg)
    if cfg.hamiltonian_type == "ho":
        eig = ho_eigenstate_set(grid, cfg.n_max, cfg.hbar, cfg.mass, cfg.omega)
        h = assemble_hamiltonian(eig)
    elif cfg.hamiltonian_type == "eigenstates":
        eig = _load_eigenstate_dir(cfg.resolve(cfg.hamiltonian_path))
        h = assemble_hamiltonian(eig)
    else:
        eig = None
        h = _source_h_field(_build_source(cfg, grid))
    psio.write_psfield(args.out, h)
    if args.eigenstate_dir:
        if eig is None:
            raise ValidationError(
                "eigenstate export needs hamiltonian type ho or eigenstates")
        out = Path(args.eigenstate_dir)
        out.mkdir(parents=True, exist_ok=True)
        rows = []
        for idx, entry in enumerate(eig.entries):
            name = f"eig_{idx:05d}.psf"
            psio.write_psfield(out / name, entry.g)
            rows.append((idx, entry.energy, entry.volume, name))
        psio.write_manifest_csv(out / "manifest.csv", rows)
    print(f"out={args.out}")
    return EXIT_OK


def cmd_check(args) -> int:
    cfg = psio.load_config(args.config)
    grid = _build_grid(cfg)
    kernel = _build_kernel(cfg)
    source = _build_source(cfg, grid)

    tol_antisym = cfg.tolerances.get("antisymmetry_tol", 1e-10)
    tol_station = cfg.tolerances.get("stationarity_tol", 1e-6)
    tol_symmetry = cfg.tolerances.get("symmetry_tol", 1e-10)

    failures = []
    if args.negative_control:
        if kernel.variant == "classical":
            raise ValidationError("negative control needs a quadrature kernel")
        # the control multiplier is defined on the field-rule path
        op = assemble_liouvillian(_source_h_field(source), kernel, grid,
                                  bracket="cosine-control", probe_check=False)
    else:
        op = assemble_liouvillian(source, kernel, grid)
    defect, scale = op.antisymmetry_defect()
    ratio = defect / scale if scale else 0.0
    print(f"antisymmetry_ratio={ratio:.6e}")
    if ratio > tol_antisym:
        failures.append("antisymmetry")

    checks = j_condition_checks(op)
    rel = checks["antisymmetry"] / checks["max_j"] if checks["max_j"] else 0.0
    print(f"j_antisymmetry_ratio={rel:.6e}")
    print(f"j_oddness={checks['oddness']:.6e}")
    print(f"j_translation_periodicity={checks['translation_periodicity']:.6e}")
    if rel > tol_antisym:
        failures.append("j_antisymmetry")

    if not args.negative_control:
        stationary = _stationary_probes(cfg, grid, source)
        for label, state in stationary:
            res = stationarity_residual(state, source, kernel)
            print(f"stationarity[{label}]={res:.6e}")
            if res > tol_station:
                failures.append(f"stationarity[{label}]")

    qc = 0.5 * (grid.q_min + grid.q_max)
    pc = 0.5 * (grid.p_min + grid.p_max)
    sq, sp = grid.q_extent / 16, grid.p_extent / 16
    f1 = gaussian_state(grid, qc + sq, pc, sq, sp)
    f2 = gaussian_state(grid, qc, pc + sp, sq, sp)
    suite = symmetry_invariance_suite(f1, f2, 0.3 * grid.dq, -0.7 * grid.dp, 1.0)
    base = abs(inner_product(f1, f2)) or 1.0
    for name, dev in suite.items():
        if dev != dev:          # switch not applicable on this grid
            print(f"symmetry[{name}]=skipped")
            continue
        rel_dev = dev / base
        print(f"symmetry[{name}]={rel_dev:.6e}")
        if rel_dev > tol_symmetry:
            failures.append(f"symmetry[{name}]")

    if failures:
        print("status=FAIL " + ",".join(failures))
        return EXIT_VIOLATION
    print("status=OK")
    return EXIT_OK


def _stationary_probes(cfg, grid, source):
    """States expected stationary for the configured source."""
    probes = []
    if isinstance(source, EigenstateSet):
        for idx, entry in enumerate(source.entries[:4]):
            probes.append((f"eig{idx}", entry.g))
    elif cfg.hamiltonian_type == "ho":
        # a thermal-like function of H is stationary under both kernels and
        # stays resolvable on coarse grids
        sq = grid.q_extent / 16.0
        probes.append(("thermal", gaussian_state(
            grid, 0.5 * (grid.q_min + grid.q_max),
            0.5 * (grid.p_min + grid.p_max), sq,
            cfg.mass * cfg.omega * sq)))
        # eigenstates themselves, where the grid resolves them
        try:
            for n in range(min(cfg.n_max, 3) + 1):
                w = wigner_of_wavefunction(
                    ho_wavefunction(n, grid, cfg.hbar, cfg.mass, cfg.omega))
                probes.append((f"W{n}", w))
        except ValidationError:
            pass
    return probes


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="phasesim",
                                description="Phase-space mechanics simulator")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("transform", help="Wigner-transform a wavefunction")
    t.add_argument("--config", required=True)
    t.add_argument("--ho-n", type=int, default=0,
                   help="oscillator quantum number preset")
    t.add_argument("--wavefunction", default="",
                   help="CSV file of complex amplitudes (re,im per row)")
    t.add_argument("--out", required=True)
    t.set_defaults(fn=cmd_transform)

    e = sub.add_parser("evolve", help="integrate the equation of motion")
    e.add_argument("--config", required=True)
    e.add_argument("--out", default="", help="override [output] dir")
    e.set_defaults(fn=cmd_evolve)

    m = sub.add_parser("measure", help="Born probabilities of a state")
    m.add_argument("--state", required=True)
    m.add_argument("--effects", required=True,
                   help="eigenstate directory with manifest.csv")
    m.add_argument("--out", required=True)
    m.set_defaults(fn=cmd_measure)

    v = sub.add_parser("volume", help="state volume of a field file")
    v.add_argument("--state", required=True)
    v.set_defaults(fn=cmd_volume)

    h = sub.add_parser("hamiltonian", help="assemble the energy observable")
    h.add_argument("--config", required=True)
    h.add_argument("--out", required=True)
    h.add_argument("--eigenstate-dir", default="",
                   help="also export the eigenstate set for `measure`")
    h.set_defaults(fn=cmd_hamiltonian)

    c = sub.add_parser("check", help="structural invariant checks")
    c.add_argument("--config", required=True)
    c.add_argument("--negative-control", action="store_true",
                   help="replace sine by cosine to prove the checks bite")
    c.set_defaults(fn=cmd_check)
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.fn(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (FormatError, OSError) as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except InstabilityError as exc:
        print(f"instability: {exc}", file=sys.stderr)
        return EXIT_INSTABILITY
    except PhasesimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
