"""File formats: PSFIELD fields, INI configs, and the CSV reports.

PSFIELD is a lossless ASCII container for one sampled field:

    PSFIELD 1
    nq=<int> np=<int>
    q_min=<v> q_max=<v> p_min=<v> p_max=<v>
    role=<density|effect|observable>
    <nq rows, each np comma-separated values, 17 significant digits>

Rows are in q-major order.  17 significant digits round-trip IEEE doubles
bit-exactly, so read(write(f)) == f.
"""

from __future__ import annotations

import configparser
import csv
import io as _io
from dataclasses import dataclass, field as dataclass_field
from pathlib import Path

import numpy as np

from .errors import FormatError, ValidationError
from .grid import PhaseField, make_grid

_VAL = "%.16e"          # 17 significant digits
_GRID_VAL = "%.17g"


def write_psfield(path: str | Path, f: PhaseField) -> None:
    g = f.grid
    lines = [
        "PSFIELD 1",
        f"nq={g.nq} np={g.np_}",
        "q_min=%s q_max=%s p_min=%s p_max=%s" % tuple(
            _GRID_VAL % v for v in (g.q_min, g.q_max, g.p_min, g.p_max)),
        f"role={f.role}",
    ]
    for row in f.values:
        lines.append(",".join(_VAL % v for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _kv_line(line: str, expected_keys: tuple[str, ...], lineno: int) -> list[str]:
    parts = line.split()
    if len(parts) != len(expected_keys):
        raise FormatError(f"line {lineno}: expected {expected_keys}, got {line!r}")
    out = []
    for part, key in zip(parts, expected_keys):
        if not part.startswith(key + "="):
            raise FormatError(f"line {lineno}: expected key {key}, got {part!r}")
        out.append(part[len(key) + 1:])
    return out


def read_psfield(path: str | Path) -> PhaseField:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    lines = text.splitlines()
    if len(lines) < 5 or lines[0] != "PSFIELD 1":
        raise FormatError(f"{path}: not a PSFIELD 1 file")
    try:
        nq, np_ = (int(v) for v in _kv_line(lines[1], ("nq", "np"), 2))
        extents = [float(v) for v in _kv_line(
            lines[2], ("q_min", "q_max", "p_min", "p_max"), 3)]
        role = _kv_line(lines[3], ("role",), 4)[0]
    except ValueError as exc:
        raise FormatError(f"{path}: malformed header: {exc}") from exc
    if len(lines) < 4 + nq:
        raise FormatError(f"{path}: expected {nq} data rows")
    try:
        values = np.array([[float(v) for v in lines[4 + i].split(",")]
                           for i in range(nq)])
    except ValueError as exc:
        raise FormatError(f"{path}: malformed data row: {exc}") from exc
    if values.shape != (nq, np_):
        raise FormatError(f"{path}: data shape {values.shape} != ({nq}, {np_})")
    try:
        grid = make_grid(nq, np_, *extents)
        return PhaseField(grid, values, role)
    except ValidationError as exc:
        raise FormatError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# simulation config
# ---------------------------------------------------------------------------

@dataclass
class SimulationConfig:
    """Validated contents of an INI simulation config."""

    nq: int = 128
    np_: int = 128
    q_min: float = -8.0
    q_max: float = 8.0
    p_min: float = -8.0
    p_max: float = 8.0

    hbar: float = 1.0
    mass: float = 1.0
    omega: float = 1.0

    kernel_type: str = "quantum"
    kernel_nodes: tuple[tuple[float, float], ...] = ()

    hamiltonian_type: str = "ho"
    hamiltonian_path: str = ""
    quartic_lambda: float = 1.0
    n_max: int = 40

    initial_type: str = "gaussian"
    q0: float = 0.0
    p0: float = 0.0
    sigma_q: float = 2.0 ** -0.5
    sigma_p: float = 2.0 ** -0.5
    n: int = 0
    e0: float = 2.0
    width: float = 0.5
    initial_path: str = ""

    t_final: float = 1.0
    dt: float = 1e-3
    integrator: str = "rk4"
    snapshot_stride: int = 100

    output_dir: str = "out"

    tolerances: dict = dataclass_field(default_factory=dict)
    config_dir: Path = dataclass_field(default_factory=Path)

    def resolve(self, relpath: str) -> Path:
        p = Path(relpath)
        return p if p.is_absolute() else self.config_dir / p


def _parse_nodes(spec: str) -> tuple[tuple[float, float], ...]:
    nodes = []
    for chunk in spec.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            k, w = chunk.split(":")
            nodes.append((float(k), float(w)))
        except ValueError as exc:
            raise ValidationError(f"bad kernel node {chunk!r}; use k:w") from exc
    if not nodes:
        raise ValidationError("kernel type 'nodes' needs a nonempty node list")
    return tuple(nodes)


def load_config(path: str | Path) -> SimulationConfig:
    path = Path(path)
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise FormatError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise FormatError(f"malformed config {path}: {exc}") from exc

    cfg = SimulationConfig(config_dir=path.resolve().parent)

    def get(section, key, cast, default):
        if parser.has_option(section, key):
            raw = parser.get(section, key)
            try:
                return cast(raw)
            except ValueError as exc:
                raise ValidationError(
                    f"[{section}] {key} = {raw!r}: {exc}") from exc
        return default

    cfg.nq = get("grid", "nq", int, cfg.nq)
    cfg.np_ = get("grid", "np", int, cfg.np_)
    cfg.q_min = get("grid", "q_min", float, cfg.q_min)
    cfg.q_max = get("grid", "q_max", float, cfg.q_max)
    cfg.p_min = get("grid", "p_min", float, cfg.p_min)
    cfg.p_max = get("grid", "p_max", float, cfg.p_max)

    cfg.hbar = get("model", "hbar", float, cfg.hbar)
    cfg.mass = get("model", "mass", float, cfg.mass)
    cfg.omega = get("model", "omega", float, cfg.omega)
    if cfg.hbar <= 0 or cfg.mass <= 0 or cfg.omega <= 0:
        raise ValidationError("hbar, mass, omega must be positive")

    cfg.kernel_type = get("kernel", "type", str, cfg.kernel_type).strip()
    if cfg.kernel_type not in ("quantum", "classical", "nodes"):
        raise ValidationError(f"unknown kernel type {cfg.kernel_type!r}")
    if cfg.kernel_type == "nodes":
        cfg.kernel_nodes = _parse_nodes(get("kernel", "nodes", str, ""))

    cfg.hamiltonian_type = get("hamiltonian", "type", str,
                               cfg.hamiltonian_type).strip()
    if cfg.hamiltonian_type not in ("ho", "quartic", "file", "eigenstates"):
        raise ValidationError(
            f"unknown hamiltonian type {cfg.hamiltonian_type!r}")
    cfg.hamiltonian_path = get("hamiltonian", "path", str, "").strip()
    cfg.quartic_lambda = get("hamiltonian", "lambda", float, cfg.quartic_lambda)
    cfg.n_max = get("hamiltonian", "n_max", int, cfg.n_max)
    if cfg.hamiltonian_type in ("file", "eigenstates"):
        if not cfg.hamiltonian_path:
            raise ValidationError(
                f"hamiltonian type {cfg.hamiltonian_type} needs a path")
        if not cfg.resolve(cfg.hamiltonian_path).exists():
            raise ValidationError(
                f"hamiltonian path {cfg.hamiltonian_path!r} does not exist")

    cfg.initial_type = get("initial", "type", str, cfg.initial_type).strip()
    if cfg.initial_type not in ("gaussian", "coherent", "eigenstate", "ring",
                                "file"):
        raise ValidationError(f"unknown initial type {cfg.initial_type!r}")
    cfg.q0 = get("initial", "q0", float, cfg.q0)
    cfg.p0 = get("initial", "p0", float, cfg.p0)
    cfg.sigma_q = get("initial", "sigma_q", float, cfg.sigma_q)
    cfg.sigma_p = get("initial", "sigma_p", float, cfg.sigma_p)
    cfg.n = get("initial", "n", int, cfg.n)
    cfg.e0 = get("initial", "E0", float, cfg.e0)
    cfg.width = get("initial", "width", float, cfg.width)
    cfg.initial_path = get("initial", "path", str, "").strip()
    if cfg.initial_type == "file":
        if not cfg.initial_path:
            raise ValidationError("initial type 'file' needs a path")
        if not cfg.resolve(cfg.initial_path).exists():
            raise ValidationError(
                f"initial path {cfg.initial_path!r} does not exist")

    cfg.t_final = get("evolve", "t_final", float, cfg.t_final)
    cfg.dt = get("evolve", "dt", float, cfg.dt)
    cfg.integrator = get("evolve", "integrator", str, cfg.integrator).strip()
    cfg.snapshot_stride = get("evolve", "snapshot_stride", int,
                              cfg.snapshot_stride)
    if cfg.integrator not in ("rk4", "exact"):
        raise ValidationError(f"unknown integrator {cfg.integrator!r}")
    if cfg.dt <= 0 or cfg.t_final < 0 or cfg.snapshot_stride < 1:
        raise ValidationError("evolve parameters out of range")

    cfg.output_dir = get("output", "dir", str, cfg.output_dir).strip()

    if parser.has_section("check"):
        for key in parser.options("check"):
            cfg.tolerances[key] = parser.getfloat("check", key)
    return cfg


# ---------------------------------------------------------------------------
# CSV reports
# ---------------------------------------------------------------------------

def write_diagnostics_csv(path: str | Path, rows) -> None:
    """rows: iterable of (t, norm, inner_self, energy)."""
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "norm", "inner_self", "energy"])
    for t, norm, inner_self, energy in rows:
        writer.writerow(["%.9f" % t, "%.15e" % norm, "%.15e" % inner_self,
                         "%.15e" % energy])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def write_measurement_csv(path: str | Path, rows, total: float) -> None:
    """rows: iterable of (index, energy, volume, probability)."""
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "energy", "volume", "probability"])
    for index, energy, volume, prob in rows:
        writer.writerow([str(index), "%.9g" % energy, "%.9g" % volume,
                         "%.9f" % prob])
    writer.writerow(["TOTAL", "", "", "%.9f" % total])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def write_manifest_csv(path: str | Path, rows) -> None:
    """rows: iterable of (index, energy, volume, filename)."""
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "energy", "volume", "file"])
    for index, energy, volume, filename in rows:
        writer.writerow([str(index), _GRID_VAL % energy, _GRID_VAL % volume,
                         filename])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def read_manifest_csv(path: str | Path) -> list[tuple[int, float, float, str]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read manifest {path}: {exc}") from exc
    reader = csv.reader(_io.StringIO(text))
    header = next(reader, None)
    if header != ["index", "energy", "volume", "file"]:
        raise FormatError(f"{path}: unexpected manifest header {header}")
    out = []
    for row in reader:
        if not row:
            continue
        try:
            out.append((int(row[0]), float(row[1]), float(row[2]), row[3]))
        except (ValueError, IndexError) as exc:
            raise FormatError(f"{path}: malformed manifest row {row}") from exc
    if not out:
        raise FormatError(f"{path}: empty manifest")
    return out
