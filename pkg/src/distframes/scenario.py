"""Scenario files: load, validate, execute, report.

A scenario is a JSON object::

    {
      "name": "fourier_gelfand",
      "space": {"basis": "hermite", "n": 16},
      "grid": "auto" | {"kind": "trapezoid", "m": 400, "a": -12, "b": 12},
      "tolerances": {"parseval_tol": 1e-6, ...},            (optional)
      "maps": [{"label": "F", "source": {...}, "grid": {...}}],
      "tasks": [{"type": "classify", "map": "F"}, ...]
    }

Map sources: ``{"builtin": kind}``, ``{"csv": path}``,
``{"transform": label, "operator": opspec}`` (or ``"operator_csv": path``),
``{"dual": label}``, ``{"zero_rows": label, "rows": [..]}``.

Operator specs: ``{"csv": path}``, ``{"identity": true}``, ``{"diag": [..]}``,
``{"index_diag": true}`` (diag(1..N)), ``{"random": "unitary" | "gaussian" |
"invertible", "seed": s, "cond": c}``; any spec may add ``"adjoint": true``.

Relative paths resolve against the scenario file's directory.
"""
from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.stats import unitary_group

from . import __version__, numerics
from .distmap import (
    Builtin,
    DistributionMap,
    auto_grid,
    builtin_map,
    import_map,
    read_matrix_csv,
    synthesis,
    analysis,
    transform_map,
    zero_rows,
    map_from_samples,
)
from .errors import DistFrameError, ParseError, TaskFailure, UnknownMapLabel
from .frameops import (
    DEFAULT_TOLERANCES,
    Tolerances,
    canonical_dual,
    classify,
    frame_bounds,
    frame_operator,
    frame_operator_oracle,
    reconstruction_residual,
    unboundedness_sweep,
)
from .opcalc import (
    SymbolSamples,
    atomic_map,
    diagonal_operator,
    eigen_residual,
    riesz_multiplier,
    spectrum_distance,
)
from .pairs import coefficient_space_report, compatibility_report
from .quadrature import GridKind, QuadratureGrid, make_grid
from .symbols import evaluate_symbol, parse_symbol
from .testspace import TestSpace, hermite_space

TASK_TYPES = (
    "classify", "dual", "reconstruct", "multiplier", "atomic",
    "pair", "sweep", "oracle_check", "coefficients",
)
# map-label fields each task type may reference
_TASK_LABELS = {
    "classify": ("map",),
    "dual": ("map",),
    "reconstruct": ("omega", "theta"),
    "multiplier": ("zeta", "omega", "theta"),
    "atomic": ("zeta",),
    "pair": ("omega", "theta"),
    "sweep": (),
    "oracle_check": (),
    "coefficients": ("map",),
}
_REQUIRED = {
    "classify": ("map",),
    "dual": ("map",),
    "reconstruct": ("omega", "theta"),
    "multiplier": ("zeta", "symbol"),
    "atomic": ("zeta", "operator"),
    "pair": ("omega", "theta"),
    "sweep": ("builtin", "sizes"),
    "oracle_check": (),
    "coefficients": ("map",),
}


@dataclass
class Scenario:
    name: str
    space: TestSpace
    grid: QuadratureGrid
    tolerances: Tolerances
    maps: list
    tasks: list
    base_dir: Path = field(default_factory=Path.cwd)


@dataclass
class RunReport:
    scenario: str
    version: str
    tasks: list  # dicts with index, type, result, timing_ms, side_files

    def to_json(self) -> dict:
        return {"scenario": self.scenario, "version": self.version, "tasks": self.tasks}


# -- parsing ------------------------------------------------------------------

def _need(obj: dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"{where}: missing field {key!r}")
    return obj[key]


def _parse_grid(spec, space: TestSpace, where: str) -> QuadratureGrid:
    if spec is None or spec == "auto":
        return auto_grid(space)
    if not isinstance(spec, dict):
        raise ParseError(f"{where}: grid must be 'auto' or an object")
    try:
        kind = GridKind(_need(spec, "kind", where))
    except ValueError:
        raise ParseError(f"{where}.kind: unknown grid kind {spec['kind']!r}") from None
    m = _need(spec, "m", where)
    if not isinstance(m, int):
        raise ParseError(f"{where}.m: expected an integer")
    try:
        return make_grid(kind, m, spec.get("a", -1.0), spec.get("b", 1.0))
    except DistFrameError as exc:
        raise ParseError(f"{where}: {exc}") from None


def parse_grid_arg(text: str, space: TestSpace) -> QuadratureGrid:
    """``kind,m[,a,b]`` or ``auto`` as used on the command line."""
    if text == "auto":
        return auto_grid(space)
    parts = text.split(",")
    spec = {"kind": parts[0], "m": int(parts[1])}
    if len(parts) == 4:
        spec["a"], spec["b"] = float(parts[2]), float(parts[3])
    elif len(parts) != 2:
        raise ParseError(f"--grid: expected kind,m[,a,b], got {text!r}")
    return _parse_grid(spec, space, "--grid")


def _check_opspec(spec, where: str) -> None:
    if not isinstance(spec, dict):
        raise ParseError(f"{where}: operator spec must be an object")
    kinds = [k for k in ("csv", "identity", "diag", "index_diag", "random") if k in spec]
    if len(kinds) != 1:
        raise ParseError(f"{where}: operator spec needs exactly one of csv/identity/diag/index_diag/random")
    if "random" in spec and spec["random"] not in ("unitary", "gaussian", "invertible"):
        raise ParseError(f"{where}.random: unknown kind {spec['random']!r}")


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return parse_scenario(raw, path.parent)


def parse_scenario(raw: dict, base_dir: Path | None = None) -> Scenario:
    if not isinstance(raw, dict):
        raise ParseError("scenario must be a JSON object")
    name = _need(raw, "name", "scenario")
    space_spec = _need(raw, "space", "scenario")
    if _need(space_spec, "basis", "space") != "hermite":
        raise ParseError(f"space.basis: only 'hermite' is supported, got {space_spec['basis']!r}")
    n = _need(space_spec, "n", "space")
    if not isinstance(n, int) or n < 1:
        raise ParseError("space.n: expected a positive integer")
    space = hermite_space(n)
    grid = _parse_grid(raw.get("grid"), space, "grid")
    try:
        tol = DEFAULT_TOLERANCES.with_overrides(raw.get("tolerances"))
    except (ValueError, TypeError) as exc:
        raise ParseError(f"tolerances: {exc}") from None

    known: set[str] = set()
    maps = []
    for i, m in enumerate(_need(raw, "maps", "scenario")):
        where = f"maps[{i}]"
        label = _need(m, "label", where)
        src = _need(m, "source", where)
        if not isinstance(src, dict):
            raise ParseError(f"{where}.source: expected an object")
        if "builtin" in src:
            if src["builtin"] not in {b.value for b in Builtin}:
                raise ParseError(f"{where}.source.builtin: unknown kind {src['builtin']!r}")
        elif "transform" in src:
            if "operator" in src:
                _check_opspec(src["operator"], f"{where}.source.operator")
            elif "operator_csv" not in src:
                raise ParseError(f"{where}.source: transform needs 'operator' or 'operator_csv'")
        elif not any(k in src for k in ("csv", "dual", "zero_rows")):
            raise ParseError(f"{where}.source: unknown source {sorted(src)}")
        for ref in ("transform", "dual", "zero_rows"):
            if ref in src and src[ref] not in known:
                raise UnknownMapLabel(src[ref])
        if "grid" in m:
            if not ("builtin" in src or "csv" in src):
                raise ParseError(f"{where}.grid: only builtin and csv maps may override the grid")
            _parse_grid(m["grid"], space, f"{where}.grid")
        known.add(label)
        maps.append(m)

    tasks = []
    for i, t in enumerate(_need(raw, "tasks", "scenario")):
        where = f"tasks[{i}]"
        ttype = _need(t, "type", where)
        if ttype not in TASK_TYPES:
            raise ParseError(f"{where}.type: unknown task {ttype!r}")
        for key in _REQUIRED[ttype]:
            _need(t, key, where)
        for key in _TASK_LABELS[ttype]:
            if key in t and t[key] not in known:
                raise UnknownMapLabel(t[key])
        if ttype == "multiplier":
            parse_symbol(t["symbol"])
            if ("omega" in t) != ("theta" in t):
                raise ParseError(f"{where}: multiplier needs both omega and theta, or neither")
        if ttype == "atomic":
            _check_opspec(t["operator"], f"{where}.operator")
        if ttype == "sweep" and t["builtin"] not in {b.value for b in Builtin}:
            raise ParseError(f"{where}.builtin: unknown kind {t['builtin']!r}")
        if "tolerances" in t:
            try:
                tol.with_overrides(t["tolerances"])
            except (ValueError, TypeError) as exc:
                raise ParseError(f"{where}.tolerances: {exc}") from None
        if ttype in ("dual", "atomic") and "as" in t:
            known.add(t["as"])
        elif ttype == "dual":
            known.add(f"dual({t['map']})")
        tasks.append(t)

    return Scenario(name, space, grid, tol, maps, tasks, Path(base_dir or Path.cwd()))


# -- execution ------------------------------------------------------------------

def build_operator(spec: dict, space: TestSpace, base_dir: Path) -> np.ndarray:
    n = space.dim
    if "csv" in spec:
        _, m = read_matrix_csv(base_dir / spec["csv"])
    elif "identity" in spec:
        m = np.eye(n, dtype=np.complex128)
    elif "diag" in spec:
        d = np.asarray(spec["diag"], dtype=float)
        if d.size != n:
            raise ParseError(f"operator diag has {d.size} entries, space dim is {n}")
        m = np.diag(d).astype(np.complex128)
    elif "index_diag" in spec:
        m = np.diag(np.arange(1, n + 1)).astype(np.complex128)
    else:
        seed = int(spec.get("seed", 0))
        rng = np.random.default_rng(seed)
        kind = spec["random"]
        if kind == "unitary":
            m = unitary_group.rvs(n, random_state=rng) if n > 1 else np.array([[1.0 + 0j]])
        elif kind == "gaussian":
            m = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
        else:
            cond = float(spec.get("cond", 100.0))
            u = unitary_group.rvs(n, random_state=rng)
            v = unitary_group.rvs(n, random_state=rng)
            s = np.linspace(1.0, cond, n)
            m = (u * s) @ v.conj().T
    if spec.get("adjoint"):
        m = m.conj().T
    return np.asarray(m, dtype=np.complex128)


def _build_map(spec: dict, sc: Scenario, registry: dict) -> DistributionMap:
    src = spec["source"]
    label = spec["label"]
    grid = _parse_grid(spec["grid"], sc.space, "grid") if "grid" in spec else sc.grid
    if "builtin" in src:
        return builtin_map(src["builtin"], sc.space, grid, sc.tolerances.gram_gate).relabel(label)
    if "csv" in src:
        return import_map(sc.base_dir / src["csv"], sc.space, grid).relabel(label)
    if "transform" in src:
        base = registry[src["transform"]]
        if "operator" in src:
            m = build_operator(src["operator"], sc.space, sc.base_dir)
        else:
            m = build_operator({"csv": src["operator_csv"]}, sc.space, sc.base_dir)
        return transform_map(base, m, label)
    if "dual" in src:
        return canonical_dual(registry[src["dual"]], sc.tolerances, label)
    return zero_rows(registry[src["zero_rows"]], src.get("rows", [0]), label)


def _write_column_csv(path: Path, header: list[str], rows) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, (int, str)) else f"{v:.17g}" for v in row])


def _spectrum_rows(values) -> list:
    ev = np.asarray(values, dtype=np.complex128)
    ev = ev[np.lexsort((ev.imag, ev.real))]
    return [(float(z.real), float(z.imag)) for z in ev]


class _Side:
    def __init__(self, out_dir: Path | None, stem: str):
        self.out_dir = out_dir
        self.stem = stem
        self.files: list[str] = []

    def write(self, what: str, header: list[str], rows) -> None:
        if self.out_dir is None:
            return
        name = f"{self.stem}.{what}.csv"
        _write_column_csv(self.out_dir / name, header, rows)
        self.files.append(name)


def oracle_check(count: int = 20, seed: int = 0, max_n: int = 32, max_m: int = 32,
                 n: int | None = None) -> dict:
    """Random maps: frame_operator vs the loop oracle, and the synthesis/analysis adjoint identity."""
    rng = np.random.default_rng(seed)
    fo_gap = 0.0
    adj_gap = 0.0
    for _ in range(count):
        nn = n if n is not None else int(rng.integers(1, max_n + 1))
        mm = int(rng.integers(2, max_m + 1))
        space = hermite_space(nn)
        grid = make_grid("gauss_legendre", mm, -space.truncation, space.truncation)
        p = rng.standard_normal((mm, nn)) + 1j * rng.standard_normal((mm, nn))
        dmap = map_from_samples("random", space, grid, p)
        fo_gap = max(fo_gap, numerics.max_abs(frame_operator(dmap) - frame_operator_oracle(dmap)))
        xi = rng.standard_normal(mm) + 1j * rng.standard_normal(mm)
        f = rng.standard_normal(nn) + 1j * rng.standard_normal(nn)
        lhs = np.vdot(f, synthesis(dmap, xi).coords)  # <T xi | f>
        af = analysis(dmap, f).values
        rhs = np.sum(grid.weights * xi * af.conj())
        scale = float(np.sum(grid.weights * np.abs(xi) * np.abs(af))) or 1.0
        adj_gap = max(adj_gap, abs(lhs - rhs) / scale)
    return {"maps": count, "seed": seed, "max_frame_operator_gap": fo_gap, "max_adjoint_gap": adj_gap}


def _run_task(t: dict, sc: Scenario, registry: dict, side: _Side) -> dict:
    ttype = t["type"]
    tol = sc.tolerances.with_overrides(t.get("tolerances"))
    if ttype == "classify":
        rep = classify(registry[t["map"]], tol)
        side.write("singulars", ["index", "singular"], enumerate(rep.singulars.tolist()))
        return rep.to_json()
    if ttype == "coefficients":
        rep = coefficient_space_report(registry[t["map"]], tol.rank_tol)
        return {"label": t["map"], "kernel_dim": rep.kernel_dim, "range_dim": rep.range_dim,
                "mu_independent": rep.mu_independent}
    if ttype == "dual":
        omega = registry[t["map"]]
        label = t.get("as", f"dual({t['map']})")
        theta = canonical_dual(omega, tol, label)
        registry[label] = theta
        fb, fbd = frame_bounds(omega), frame_bounds(theta)
        ev = numerics.hermitian_eigvals(frame_operator(theta))
        eps = 1e-8 / fb.lower
        side.write("dual_spectrum", ["index", "eigenvalue"], enumerate(ev.tolist()))
        return {
            "label": label,
            "bounds": {"A": fb.lower, "B": fb.upper},
            "dual_bounds": {"A": fbd.lower, "B": fbd.upper},
            "reconstruction_residual": reconstruction_residual(omega, theta),
            "reciprocal_bounds_hold": bool(
                ev[0] >= 1 / fb.upper - eps and ev[-1] <= 1 / fb.lower + eps
            ),
        }
    if ttype == "reconstruct":
        return {"omega": t["omega"], "theta": t["theta"],
                "residual": reconstruction_residual(registry[t["omega"]], registry[t["theta"]])}
    if ttype == "multiplier":
        zeta = registry[t["zeta"]]
        alpha = SymbolSamples(zeta.grid, evaluate_symbol(t["symbol"], zeta.grid.nodes))
        a = diagonal_operator(zeta, alpha)
        out = {
            "zeta": t["zeta"],
            "symbol": t["symbol"],
            "max_abs_symbol": float(np.abs(alpha.values).max()),
            "eigen_residual": eigen_residual(zeta, a, alpha),
            "hermitian_defect": numerics.hermitian_defect(a.entries),
        }
        side.write("spectrum_A", ["re", "im"], _spectrum_rows(np.linalg.eigvals(a.entries)))
        if "omega" in t:
            h = riesz_multiplier(registry[t["omega"]], registry[t["theta"]], alpha)
            out["omega"], out["theta"] = t["omega"], t["theta"]
            out["spectrum_distance"] = spectrum_distance(h, a)
            side.write("spectrum_H", ["re", "im"], _spectrum_rows(np.linalg.eigvals(h.entries)))
        return out
    if ttype == "atomic":
        zeta = registry[t["zeta"]]
        m = build_operator(t["operator"], sc.space, sc.base_dir)
        res = atomic_map(zeta, m, int(t.get("probes", 10)), int(t.get("seed", 0)), tol)
        label = t.get("as", res.dmap.label)
        registry[label] = res.dmap.relabel(label)
        fb = frame_bounds(res.dmap)
        sv = numerics.singular_values(m)
        return {
            "label": label,
            "bessel_defect": res.bessel_defect,
            "decomposition_defect": res.decomposition_defect,
            "bounds": {"A": fb.lower, "B": fb.upper},
            "operator_singular_extremes_squared": {"min": float(sv[-1] ** 2), "max": float(sv[0] ** 2)},
        }
    if ttype == "pair":
        return compatibility_report(registry[t["theta"]], registry[t["omega"]], tol).to_json()
    if ttype == "sweep":
        rep = unboundedness_sweep(t["builtin"], t["sizes"])
        side.write("sweep", ["N", "A", "B"], rep.rows)
        return rep.to_json()
    if ttype == "oracle_check":
        return oracle_check(int(t.get("count", 20)), int(t.get("seed", 0)),
                            int(t.get("max_n", 32)), int(t.get("max_m", 32)))
    raise ParseError(f"unknown task {ttype!r}")  # unreachable after validation


def execute(sc: Scenario, out_dir=None) -> RunReport:
    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    registry: dict[str, DistributionMap] = {}
    for i, spec in enumerate(sc.maps):
        try:
            registry[spec["label"]] = _build_map(spec, sc, registry)
        except DistFrameError as exc:
            raise TaskFailure(i, exc, "map") from exc
    results = []
    for i, t in enumerate(sc.tasks):
        side = _Side(out, f"{sc.name}.task{i}")
        start = time.perf_counter()
        try:
            result = _run_task(t, sc, registry, side)
        except (DistFrameError, ValueError, ArithmeticError) as exc:
            raise TaskFailure(i, exc) from exc
        elapsed = (time.perf_counter() - start) * 1e3
        results.append({"index": i, "type": t["type"], "result": result,
                        "timing_ms": elapsed, "side_files": side.files})
    report = RunReport(sc.name, __version__, results)
    if out is not None:
        (out / f"{sc.name}.report.json").write_text(dump_json(report.to_json()))
    return report


def run_scenario(path, out_dir=None) -> RunReport:
    return execute(load_scenario(path), out_dir)


def _sanitize(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, (np.floating,)):
        return _sanitize(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    return obj


def dump_json(obj) -> str:
    # float repr is the shortest string that round-trips exactly
    return json.dumps(_sanitize(obj), indent=2, allow_nan=False) + "\n"


def strip_timing(report: dict) -> dict:
    out = dict(report)
    out["tasks"] = [{k: v for k, v in t.items() if k != "timing_ms"} for t in report["tasks"]]
    return out


def bundled_dir() -> Path:
    return Path(__file__).parent / "scenarios"
