"""Command-line pipeline: simulate, reconstruct, evaluate, export, audit.

Owns the on-disk formats:

* scene JSON: {"dipoles": [{"kind", "location", "strength_re", "strength_im"}]}
* measurement CSV with header dir_index,sign,k,re1,im1,re2,im2,re3,im3 and a
  sidecar <name>.directions.json holding directions, grid and noise metadata
  (floats printed with 17 significant digits for lossless round trips)
* indicator-field CSV with header x,y,z,Imag_base,Imag_rho,Ielec_base,Ielec_rho
* report JSON listing recovered dipoles plus run metadata

Thread count of the underlying array library is controlled by the usual
OMP_NUM_THREADS / OPENBLAS_NUM_THREADS environment variables; no other
environment variables are read.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from .forward import (
    SIGN_NEGATIVE,
    SIGN_POSITIVE,
    FrequencyGrid,
    MeasurementSet,
    simulate_measurements,
)
from .geometry import DirectionSet, fibonacci_directions, no_three_coplanar, planar_directions
from .imaging import ImagingParams
from .localization import IndicatorField, SamplingGrid, evaluate_field, extract_peaks
from .noise import NoiseSpec, add_noise
from .oracle import required_directions_full_space, required_directions_in_plane
from .scene import ELECTRIC, KINDS, MAGNETIC, Dipole, Scene, match_report
from .strengths import (
    NoAdmissiblePair,
    ReconstructionReport,
    RecoveredDipole,
    recover_strength_electric,
    recover_strength_magnetic,
    select_pair,
)


class SceneFormatError(ValueError):
    pass


class MeasurementFormatError(ValueError):
    pass


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# scene files


def save_scene(scene: Scene, path) -> None:
    payload = {
        "dipoles": [
            {
                "kind": d.kind,
                "location": [float(v) for v in d.location],
                "strength_re": [float(v) for v in d.strength.real],
                "strength_im": [float(v) for v in d.strength.imag],
            }
            for d in scene.dipoles
        ]
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _require_vec3(entry, index: int, name: str, path):
    value = entry[name]
    if not (isinstance(value, list) and len(value) == 3) or not all(
        isinstance(v, (int, float)) for v in value
    ):
        raise SceneFormatError(
            f"{path}: dipole {index}: field '{name}' must be a list of 3 numbers"
        )
    return [float(v) for v in value]


def load_scene(path) -> Scene:
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SceneFormatError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(raw, dict) or "dipoles" not in raw:
        raise SceneFormatError(f"{path}: missing field 'dipoles'")
    if not isinstance(raw["dipoles"], list):
        raise SceneFormatError(f"{path}: field 'dipoles' must be a list")
    dipoles = []
    for i, entry in enumerate(raw["dipoles"]):
        if not isinstance(entry, dict):
            raise SceneFormatError(f"{path}: dipole {i}: must be an object")
        for name in ("kind", "location", "strength_re", "strength_im"):
            if name not in entry:
                raise SceneFormatError(f"{path}: dipole {i}: missing field '{name}'")
        if entry["kind"] not in KINDS:
            raise SceneFormatError(
                f"{path}: dipole {i}: field 'kind' must be one of {list(KINDS)}"
            )
        location = _require_vec3(entry, i, "location", path)
        strength_re = _require_vec3(entry, i, "strength_re", path)
        strength_im = _require_vec3(entry, i, "strength_im", path)
        strength = np.array(strength_re) + 1j * np.array(strength_im)
        try:
            dipoles.append(Dipole(entry["kind"], location, strength))
        except ValueError as exc:
            raise SceneFormatError(f"{path}: dipole {i}: {exc}") from exc
    try:
        return Scene(dipoles)
    except ValueError as exc:
        raise SceneFormatError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# direction specs and measurement files


def parse_direction_spec(spec: str) -> DirectionSet:
    """'fib:L' | 'plane:L' | path to a directions JSON file."""
    if spec.startswith("fib:"):
        return fibonacci_directions(int(spec.split(":", 1)[1]))
    if spec.startswith("plane:"):
        return planar_directions(int(spec.split(":", 1)[1]))
    return load_directions(spec)


def save_directions(ds: DirectionSet, path, extra: dict | None = None) -> None:
    payload = {
        "provenance": ds.provenance,
        "directions": [[float(v) for v in d] for d in ds.directions],
    }
    payload.update(extra or {})
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def load_directions(path) -> DirectionSet:
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MeasurementFormatError(f"{path}: invalid JSON: {exc}") from exc
    for name in ("provenance", "directions"):
        if name not in raw:
            raise MeasurementFormatError(f"{path}: missing field '{name}'")
    return DirectionSet(np.asarray(raw["directions"], dtype=float), raw["provenance"])


def _sidecar_path(measurement_path) -> Path:
    p = Path(measurement_path)
    return p.with_name(p.stem + ".directions.json")


def save_measurements(ms: MeasurementSet, path, noise: dict | None = None) -> None:
    """Write the CSV payload and the directions sidecar."""
    path = Path(path)
    nodes = ms.grid.nodes
    lines = ["dir_index,sign,k,re1,im1,re2,im2,re3,im3"]
    for l in range(len(ms.directions)):
        for sign_symbol, sign_index in (("+", SIGN_POSITIVE), ("-", SIGN_NEGATIVE)):
            for j in range(ms.grid.count):
                v = ms.samples[sign_index, l, j]
                lines.append(
                    f"{l},{sign_symbol},{_fmt(nodes[j])},"
                    f"{_fmt(v[0].real)},{_fmt(v[0].imag)},"
                    f"{_fmt(v[1].real)},{_fmt(v[1].imag)},"
                    f"{_fmt(v[2].real)},{_fmt(v[2].imag)}"
                )
    path.write_text("\n".join(lines) + "\n")
    save_directions(
        ms.directions,
        _sidecar_path(path),
        extra={
            "k_max": float(ms.grid.k_max),
            "node_count": int(ms.grid.count),
            "noise": noise,
        },
    )


def load_measurements(path) -> tuple[MeasurementSet, dict]:
    """Parse CSV + sidecar back into a MeasurementSet; returns (ms, sidecar)."""
    path = Path(path)
    sidecar_file = _sidecar_path(path)
    if not sidecar_file.exists():
        raise MeasurementFormatError(f"{path}: missing sidecar {sidecar_file}")
    sidecar = json.loads(sidecar_file.read_text())
    for name in ("k_max", "node_count", "provenance", "directions"):
        if name not in sidecar:
            raise MeasurementFormatError(f"{sidecar_file}: missing field '{name}'")
    ds = DirectionSet(np.asarray(sidecar["directions"], dtype=float), sidecar["provenance"])
    grid = FrequencyGrid(float(sidecar["k_max"]), int(sidecar["node_count"]))
    nodes = grid.nodes
    delta_k = grid.delta_k
    samples = np.full((2, len(ds), grid.count, 3), np.nan, dtype=complex)
    sign_map = {"+": SIGN_POSITIVE, "-": SIGN_NEGATIVE}
    with path.open() as handle:
        header = handle.readline().strip()
        if header != "dir_index,sign,k,re1,im1,re2,im2,re3,im3":
            raise MeasurementFormatError(f"{path}: unexpected header {header!r}")
        for line_no, line in enumerate(handle, start=2):
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            if len(fields) != 9:
                raise MeasurementFormatError(f"{path}: line {line_no}: expected 9 fields")
            try:
                l = int(fields[0])
                sign_index = sign_map[fields[1]]
                k = float(fields[2])
                values = [float(f) for f in fields[3:]]
            except (ValueError, KeyError) as exc:
                raise MeasurementFormatError(f"{path}: line {line_no}: {exc}") from exc
            j = int(round(k / delta_k)) - 1
            if not (0 <= j < grid.count) or nodes[j] != k:
                raise MeasurementFormatError(
                    f"{path}: line {line_no}: k={k!r} is not a grid node"
                )
            if not 0 <= l < len(ds):
                raise MeasurementFormatError(
                    f"{path}: line {line_no}: dir_index {l} out of range"
                )
            samples[sign_index, l, j] = [
                complex(values[0], values[1]),
                complex(values[2], values[3]),
                complex(values[4], values[5]),
            ]
    if not np.all(np.isfinite(samples)):
        raise MeasurementFormatError(f"{path}: incomplete sample table")
    return MeasurementSet(ds, grid, samples), sidecar


# ---------------------------------------------------------------------------
# indicator-field CSV and report JSON


def save_field_csv(field: IndicatorField, path) -> None:
    nodes = field.grid.nodes()
    base_mag = field.values_mag.ravel() ** (1.0 / field.rho)
    base_elec = field.values_elec.ravel() ** (1.0 / field.rho)
    lines = ["x,y,z,Imag_base,Imag_rho,Ielec_base,Ielec_rho"]
    for p, bm, vm, be, ve in zip(
        nodes, base_mag, field.values_mag.ravel(), base_elec, field.values_elec.ravel()
    ):
        lines.append(
            f"{_fmt(p[0])},{_fmt(p[1])},{_fmt(p[2])},"
            f"{_fmt(bm)},{_fmt(vm)},{_fmt(be)},{_fmt(ve)}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def save_report(report: ReconstructionReport, path) -> None:
    payload = {
        "dipoles": [
            {
                "kind": d.kind,
                "location": [float(v) for v in d.location],
                "strength_re": [float(v) for v in d.strength.real],
                "strength_im": [float(v) for v in d.strength.imag],
                "direction_pair": list(d.direction_pair),
                "k_max": float(d.k_max),
            }
            for d in report.dipoles
        ],
        "failures": report.failures,
        "metadata": report.metadata,
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def load_report(path) -> ReconstructionReport:
    raw = json.loads(Path(path).read_text())
    dipoles = [
        RecoveredDipole(
            kind=entry["kind"],
            location=entry["location"],
            strength=np.array(entry["strength_re"]) + 1j * np.array(entry["strength_im"]),
            direction_pair=tuple(entry["direction_pair"]),
            k_max=entry["k_max"],
        )
        for entry in raw.get("dipoles", [])
    ]
    return ReconstructionReport(
        dipoles=dipoles,
        failures=raw.get("failures", []),
        metadata=raw.get("metadata", {}),
    )


# ---------------------------------------------------------------------------
# grid specs and the reconstruction pipeline


def parse_grid_spec(spec: str) -> SamplingGrid:
    """'x0:x1:nx,y0:y1:ny,z0:z1:nz'; a frozen axis uses n=1 with x0=x1."""
    parts = spec.split(",")
    if len(parts) != 3:
        raise ValueError(f"grid spec must have 3 comma-separated axes, got {spec!r}")
    lower, upper, counts = [], [], []
    for part in parts:
        pieces = part.split(":")
        if len(pieces) != 3:
            raise ValueError(f"grid axis must be 'lo:hi:n', got {part!r}")
        lower.append(float(pieces[0]))
        upper.append(float(pieces[1]))
        counts.append(int(pieces[2]))
    return SamplingGrid(lower, upper, tuple(counts))


def _config_hash(config: dict) -> str:
    return hashlib.sha256(json.dumps(config, sort_keys=True).encode()).hexdigest()[:16]


def run_reconstruction(
    ms: MeasurementSet,
    grid: SamplingGrid,
    params: ImagingParams,
    k_strength: float,
    peak_threshold: float = 0.5,
) -> tuple[ReconstructionReport, IndicatorField]:
    """Locate both dipole kinds, then recover a strength per located dipole.

    Strength recovery failures (no admissible direction pair) are recorded
    per dipole without aborting the run.
    """
    field = evaluate_field(ms, grid, params)
    report = ReconstructionReport()
    recover = {MAGNETIC: recover_strength_magnetic, ELECTRIC: recover_strength_electric}
    located = {
        kind: extract_peaks(field, kind, peak_threshold) for kind in (MAGNETIC, ELECTRIC)
    }
    all_peaks = [p for peaks in located.values() for p in peaks]
    for kind in (MAGNETIC, ELECTRIC):
        for location in located[kind]:
            # the recovery error grows with 1/|xhat.(z_other - z)| for every
            # other dipole of either kind, so separate them all
            others = [
                p for p in all_peaks if np.linalg.norm(p - location) > 1e-9
            ]
            try:
                pair = select_pair(location, others, ms.directions)
            except NoAdmissiblePair as exc:
                report.failures.append(
                    {
                        "kind": kind,
                        "location": [float(v) for v in location],
                        "error": "NoAdmissiblePair",
                        "message": str(exc),
                    }
                )
                continue
            strength = recover[kind](location, pair, ms, k_strength)
            report.dipoles.append(
                RecoveredDipole(
                    kind=kind,
                    location=location,
                    strength=strength,
                    direction_pair=pair,
                    k_max=k_strength,
                )
            )
    return report, field


# ---------------------------------------------------------------------------
# subcommands


def cmd_simulate(args) -> int:
    scene = load_scene(args.scene)
    ds = parse_direction_spec(args.directions)
    grid = FrequencyGrid(args.k_max, args.nodes)
    ms = simulate_measurements(scene, ds, grid)
    if args.delta > 0:
        ms = add_noise(ms, NoiseSpec(args.delta, args.seed))
    save_measurements(ms, args.out, noise={"delta": args.delta, "seed": args.seed})
    print(
        f"simulated L={len(ds)} directions, N={grid.count} nodes, "
        f"k_max={grid.k_max}, delta={args.delta}, seed={args.seed} -> {args.out}"
    )
    return 0


def _load_for_imaging(args):
    ms, sidecar = load_measurements(args.measurements)
    k_loc = args.k_loc if args.k_loc is not None else min(100.0, ms.grid.k_max)
    if k_loc > ms.grid.k_max * (1 + 1e-12):
        raise MeasurementFormatError(
            f"localization band K={k_loc} exceeds simulated k_max={ms.grid.k_max}"
        )
    params = ImagingParams(k_max=k_loc, epsilon=args.epsilon, rho=args.rho)
    grid = parse_grid_spec(args.grid)
    return ms, sidecar, params, grid


def cmd_reconstruct(args) -> int:
    ms, sidecar, params, grid = _load_for_imaging(args)
    k_strength = args.k_strength if args.k_strength is not None else ms.grid.k_max
    if k_strength > ms.grid.k_max * (1 + 1e-12):
        raise MeasurementFormatError(
            f"strength band K={k_strength} exceeds simulated k_max={ms.grid.k_max}"
        )
    report, field = run_reconstruction(ms, grid, params, k_strength, args.threshold)
    config = {
        "measurements": str(args.measurements),
        "grid": args.grid,
        "k_loc": params.k_max,
        "epsilon": params.epsilon,
        "rho": params.rho,
        "threshold": args.threshold,
        "k_strength": k_strength,
    }
    report.metadata = {
        "config": config,
        "config_hash": _config_hash(config),
        "noise": sidecar.get("noise"),
        "cell_diagonal": grid.cell_diagonal,
    }
    save_report(report, args.out)
    if args.field_csv:
        save_field_csv(field, args.field_csv)
    print(
        f"reconstructed {len(report.dipoles)} dipoles "
        f"({len(report.failures)} strength failures) -> {args.out}"
    )
    return 0


def cmd_field(args) -> int:
    ms, _, params, grid = _load_for_imaging(args)
    field = evaluate_field(ms, grid, params)
    save_field_csv(field, args.out)
    print(f"indicator field on {grid.num_nodes} nodes -> {args.out}")
    return 0


def cmd_evaluate(args) -> int:
    report = load_report(args.report)
    truth = load_scene(args.truth)
    radius = args.radius
    if radius is None:
        radius = report.metadata.get("cell_diagonal")
    if radius is None:
        raise ValueError("no --radius given and the report metadata has no cell_diagonal")
    result = match_report(truth, report, radius)
    lines = ["truth_index,rec_index,kind_true,kind_ok,location_error,strength_re_error"]
    print(f"{'truth':>5} {'rec':>4} {'kind':>9} {'kind_ok':>7} {'loc_err':>10} {'RE':>8}")
    for m in result.matches:
        kind = truth.dipoles[m.truth_index].kind
        print(
            f"{m.truth_index:>5} {m.recovered_index:>4} {kind:>9} "
            f"{str(m.kind_correct):>7} {m.location_error:>10.3e} "
            f"{m.strength_relative_error:>8.2%}"
        )
        lines.append(
            f"{m.truth_index},{m.recovered_index},{kind},{m.kind_correct},"
            f"{_fmt(m.location_error)},{_fmt(m.strength_relative_error)}"
        )
    summary = (
        f"matched {len(result.matches)}/{len(truth.dipoles)}, "
        f"missed {len(result.missed)}, spurious {len(result.spurious)}"
    )
    if result.matches:
        summary += (
            f", max RE {max(m.strength_relative_error for m in result.matches):.2%}"
        )
    print(summary)
    for i in result.missed:
        print(f"missed: truth dipole {i} at {truth.dipoles[i].location.tolist()}")
    for j in result.spurious:
        print(f"spurious: recovered dipole {j}")
    if args.out:
        Path(args.out).write_text("\n".join(lines) + "\n")
    return 0 if result.all_matched else 1


def cmd_check_directions(args) -> int:
    ds = parse_direction_spec(args.directions)
    count = len(ds)
    coplanar_free = no_three_coplanar(ds)
    print(f"directions: {count} ({ds.provenance})")
    print("pairwise non-collinear: yes")  # construction would have failed otherwise
    print(f"no three coplanar: {'yes' if coplanar_free else 'no'}")
    need_full = required_directions_full_space(args.magnetic, args.electric)
    need_plane = required_directions_in_plane(args.magnetic, args.electric)
    full_ok = count >= need_full
    print(
        f"general-position guarantee (L >= {need_full}): "
        f"{'met' if full_ok else 'NOT met'}"
    )
    if not full_ok:
        print(
            "warning: fewer directions than the general-position guarantee requires; "
            "reconstruction may still succeed but is not guaranteed unique"
        )
    if args.planar:
        plane_ok = count >= need_plane
        print(
            f"common-plane guarantee (L >= {need_plane}): "
            f"{'met' if plane_ok else 'NOT met'}"
        )
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dipole-imaging",
        description="Simulate and reconstruct mixed dipole arrays from "
        "multi-frequency sparse far-field data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="synthesize a measurement file from a scene")
    p.add_argument("--scene", required=True, help="scene JSON path")
    p.add_argument("--directions", required=True, help="fib:L | plane:L | JSON path")
    p.add_argument("--k-max", type=float, default=200.0, help="top of the wavenumber band")
    p.add_argument("--nodes", type=int, default=2038, help="number of wavenumber nodes")
    p.add_argument("--delta", type=float, default=0.0, help="relative noise level")
    p.add_argument("--seed", type=int, default=0, help="noise RNG seed")
    p.add_argument("--out", required=True, help="measurement CSV path")
    p.set_defaults(func=cmd_simulate)

    common_imaging = argparse.ArgumentParser(add_help=False)
    common_imaging.add_argument("--measurements", required=True, help="measurement CSV path")
    common_imaging.add_argument(
        "--grid", required=True, help="sampling grid 'x0:x1:nx,y0:y1:ny,z0:z1:nz'"
    )
    common_imaging.add_argument(
        "--k-loc", type=float, default=None, help="localization band (default min(100, k_max))"
    )
    common_imaging.add_argument("--epsilon", type=float, default=0.2, help="vote cut-off")
    common_imaging.add_argument("--rho", type=float, default=4.0, help="sharpening exponent")

    p = sub.add_parser(
        "reconstruct", parents=[common_imaging], help="locate dipoles and recover strengths"
    )
    p.add_argument("--threshold", type=float, default=0.5, help="peak vote threshold")
    p.add_argument(
        "--k-strength", type=float, default=None, help="strength band (default full k_max)"
    )
    p.add_argument("--out", required=True, help="report JSON path")
    p.add_argument("--field-csv", default=None, help="also export the indicator field CSV")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser(
        "field", parents=[common_imaging], help="export the indicator field CSV only"
    )
    p.add_argument("--out", required=True, help="field CSV path")
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("evaluate", help="compare a report against a truth scene")
    p.add_argument("--report", required=True, help="report JSON path")
    p.add_argument("--truth", required=True, help="truth scene JSON path")
    p.add_argument(
        "--radius",
        type=float,
        default=None,
        help="matching radius (default: one grid cell diagonal from the report)",
    )
    p.add_argument("--out", default=None, help="optional CSV output")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser(
        "check-directions", help="audit a direction set against the uniqueness bounds"
    )
    p.add_argument("--directions", required=True, help="fib:L | plane:L | JSON path")
    p.add_argument("--magnetic", type=int, required=True, help="magnetic dipole count bound")
    p.add_argument("--electric", type=int, required=True, help="electric dipole count bound")
    p.add_argument("--planar", action="store_true", help="also check the common-plane bound")
    p.set_defaults(func=cmd_check_directions)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SceneFormatError, MeasurementFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
