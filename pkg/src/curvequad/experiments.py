"""Benchmark experiments: the four convergence tables and their golden checks.

Each experiment builds its cell and function pairs once per quadrature size,
computes both inner products per pair, and emits rows with reference values
(exact, series, or none for self-convergence).  Golden error budgets live in
a plain-text manifest shipped with the package; `check_golden` compares a
run against it.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .cellgeom import BUILTIN_CELLS, build_pacman, build_puzzle, build_square, cell_from_file
from .kressquad import build_grid
from .nystrom import NystromSolver
from .polyalg import Poly2, mi_to_index
from .references import (
    ReferenceValue,
    ref_pacman,
    ref_square_bubble_pair,
    square_basis_references,
)
from .vmspace import (
    VmFunction,
    Workspace,
    constant_one,
    make_arc_linear_fn,
    make_bubble,
    make_edge_fn_product,
    make_vertex_fn,
)

__all__ = [
    "ExperimentSpec",
    "ExperimentRow",
    "run_experiment",
    "load_golden_manifest",
    "check_golden",
    "EXPERIMENTS",
]

DEFAULT_NS = (4, 8, 16, 32, 64)


@dataclass
class ExperimentSpec:
    experiment: str
    n_values: tuple = DEFAULT_NS
    sigma: int = 7
    gmres_tol: float = 1e-13
    gmres_maxiter: int = 300
    cell_file: str | None = None

    def __post_init__(self):
        ns = tuple(int(n) for n in self.n_values)
        if not ns or any(n <= 0 for n in ns) or list(ns) != sorted(set(ns)):
            raise ValueError("n values must be positive and strictly increasing")
        self.n_values = ns


@dataclass
class ExperimentRow:
    experiment: str
    pair: str
    metric: str  # "L2" | "H1" | "area"
    n: int
    sigma: int
    computed: float | None
    reference: float | None
    ref_provenance: str
    abs_error: float | None  # successive |I(2n)-I(n)| when reference is None
    runtime_ms: float
    gmres_max_iterations: int
    gmres_max_residual: float
    diagnostic: str = ""


def _mono(alpha):
    return Poly2((0.0, 0.0), [(alpha, 1.0)])


def _pacman_power_fn(cell, mu, exponent, name):
    """Harmonic power function on the sector, described per edge with exact
    tangential derivatives."""
    s = exponent
    scale = math.sin(s * math.pi / mu)  # trace factor on the closing radius

    def arc_val(pts):
        th = np.arctan2(pts[:, 1], pts[:, 0])
        th = np.where(th < -1e-12, th + 2.0 * math.pi, np.maximum(th, 0.0))
        return np.sin(s * th)

    def arc_dt(pts, tan):
        th = np.arctan2(pts[:, 1], pts[:, 0])
        th = np.where(th < -1e-12, th + 2.0 * math.pi, np.maximum(th, 0.0))
        return s * np.cos(s * th)

    def ray_val(pts):
        r = np.hypot(pts[:, 0], pts[:, 1])
        return scale * np.where(r > 0.0, r**s, 0.0)

    def ray_dt(pts, tan):
        r = np.hypot(pts[:, 0], pts[:, 1])
        rk = np.where(r > 0.0, r ** (s - 2.0), 0.0)
        return scale * s * rk * (pts[:, 0] * tan[:, 0] + pts[:, 1] * tan[:, 1])

    traces = [
        None,
        (arc_val, arc_dt),
        None if abs(scale) < 1e-14 else (ray_val, ray_dt),
    ]
    return VmFunction(cell, traces=traces, name=name)


def _pacman_quartic(cell, mu):
    """The zero-trace member with the quartic's polynomial Laplacian."""
    c, s = math.cos(math.pi / mu), math.sin(math.pi / mu)
    lap = Poly2(
        (0.0, 0.0),
        [((0, 0), 2 * c), ((2, 0), -2 * c), ((0, 2), -14 * c), ((1, 1), 12 * s)],
    )
    return VmFunction(cell, lap=lap, traces=None, name="v3")


def _build_functions(experiment, cell):
    """Function pairs per experiment, as (pair_name, v, w) triples."""
    if experiment == "area":
        one = constant_one(cell)
        return [("1,1", one, one)]
    if experiment == "square-basis":
        v = [make_vertex_fn(cell, i) for i in range(4)]
        w1 = make_edge_fn_product(cell, 1)
        wb = make_bubble(cell)
        return [
            ("v0,v0", v[0], v[0]),
            ("v0,v1", v[0], v[1]),
            ("v0,v2", v[0], v[2]),
            ("v0,w1", v[0], w1),
            ("v1,w1", v[1], w1),
            ("w1,w1", w1, w1),
            ("wb,wb", wb, wb),
            ("v0,wb", v[0], wb),
            ("w1,wb", w1, wb),
        ]
    if experiment == "square-bubble":
        pairs = []
        for alpha, beta in BUBBLE_PAIRS:
            va = VmFunction(cell, lap=_mono(alpha).scale(-1.0), name=f"b{alpha}")
            vb = (
                va
                if beta == alpha
                else VmFunction(cell, lap=_mono(beta).scale(-1.0), name=f"b{beta}")
            )
            pairs.append((_bubble_pair_name(alpha, beta), va, vb))
        return pairs
    if experiment == "pacman":
        mu, nu = 4.0 / 7.0, 2.0 / 7.0
        v1 = _pacman_power_fn(cell, mu, mu, "v1")
        v2 = _pacman_power_fn(cell, mu, nu, "v2")
        v3 = _pacman_quartic(cell, mu)
        return [
            ("v1,v1", v1, v1),
            ("v1,v2", v1, v2),
            ("v1,v3", v1, v3),
            ("v2,v3", v2, v3),
        ]
    if experiment == "puzzle":
        v0 = make_vertex_fn(cell, 0)
        v1 = make_vertex_fn(cell, 1)
        w0 = make_edge_fn_product(cell, 0)
        u0 = make_arc_linear_fn(cell, 1)
        u1 = make_arc_linear_fn(cell, 4)
        u3 = make_arc_linear_fn(cell, 10)
        wb = make_bubble(cell)
        return [
            ("v0,v0", v0, v0),
            ("v0,v1", v0, v1),
            ("v0,w0", v0, w0),
            ("v1,u0", v1, u0),
            ("u0,u0", u0, u0),
            ("u0,u1", u0, u1),
            ("wb,wb", wb, wb),
            ("v0,wb", v0, wb),
            ("u3,wb", u3, wb),
        ]
    raise ValueError(f"unknown experiment {experiment!r}")


BUBBLE_PAIRS = [
    ((0, 0), (0, 0)),
    ((1, 0), (0, 0)),
    ((1, 1), (1, 0)),
    ((2, 1), (0, 2)),
    ((4, 1), (3, 2)),
    ((5, 1), (3, 3)),
    ((4, 2), (4, 2)),
]


def _bubble_pair_name(alpha, beta):
    return f"b{alpha[0]}{alpha[1]},b{beta[0]}{beta[1]}"


def _references(experiment, cell):
    """pair -> {metric: ReferenceValue} for experiments with references."""
    if experiment == "area":
        exact = {"square": 1.0, "circle": math.pi, "puzzle": 1.0}
        area = exact.get(cell.name)
        if area is None:
            return {"1,1": {"area": ReferenceValue(float("nan"), "none")}}
        return {"1,1": {"area": ReferenceValue(area)}}
    if experiment == "square-basis":
        refs = square_basis_references()
        remap = {
            "v0,v0": ("v", "v"),
            "v0,v1": ("v", "v+1"),
            "v0,v2": ("v", "v+2"),
            "v0,w1": ("v0", "w1"),
            "v1,w1": ("v1", "w1"),
            "w1,w1": ("w", "w"),
            "wb,wb": ("wb", "wb"),
            "v0,wb": ("v", "wb"),
            "w1,wb": ("w", "wb"),
        }
        return {
            pair: {"L2": refs[key][0], "H1": refs[key][1]} for pair, key in remap.items()
        }
    if experiment == "square-bubble":
        out = {}
        for alpha, beta in BUBBLE_PAIRS:
            l2, h1 = ref_square_bubble_pair(alpha, beta)
            out[_bubble_pair_name(alpha, beta)] = {"L2": l2, "H1": h1}
        return out
    if experiment == "pacman":
        mu, nu = 4.0 / 7.0, 2.0 / 7.0
        out = {}
        for pair, idx in [("v1,v1", (1, 1)), ("v1,v2", (1, 2)), ("v1,v3", (1, 3)),
                          ("v2,v3", (2, 3))]:
            l2, h1 = ref_pacman(mu, nu, idx)
            out[pair] = {"L2": l2, "H1": h1}
        return out
    return {}  # puzzle: self-convergence only


def _build_cell(experiment, cell_file=None):
    if cell_file is not None:
        if experiment != "area":
            raise ValueError("--cell-file applies to the area experiment only")
        return [cell_from_file(cell_file)]
    if experiment == "area":
        return [BUILTIN_CELLS[name]() for name in ("square", "circle", "puzzle")]
    if experiment in ("square-basis", "square-bubble"):
        return [build_square()]
    if experiment == "pacman":
        return [build_pacman()]
    if experiment == "puzzle":
        return [build_puzzle()]
    raise ValueError(f"unknown experiment {experiment!r}")


def run_experiment(spec: ExperimentSpec):
    """All rows of one experiment, deterministic order: cells, pairs, n."""
    rows = []
    for cell in _build_cell(spec.experiment, spec.cell_file):
        pairs = _build_functions(spec.experiment, cell)
        refs = _references(spec.experiment, cell)
        metrics = ("area",) if spec.experiment == "area" else ("L2", "H1")
        prev = {}
        for n in spec.n_values:
            grid = build_grid(cell, n, spec.sigma)
            solver = NystromSolver(
                grid, gmres_tol=spec.gmres_tol, gmres_maxiter=spec.gmres_maxiter
            )
            ws = Workspace(grid, solver)
            for pair_name, v, w in pairs:
                label = pair_name if cell.name is None else pair_name
                if spec.experiment == "area":
                    label = f"{cell.name}"
                for metric in metrics:
                    t0 = time.perf_counter()
                    diagnostic = ""
                    computed = None
                    hist_start = len(solver.history)
                    try:
                        if metric == "H1":
                            computed = ws.h1(v, w)
                        else:
                            computed = ws.l2(v, w)
                    except Exception as exc:  # solver failures abort the row only
                        diagnostic = f"{type(exc).__name__}: {exc}"
                    ms = (time.perf_counter() - t0) * 1000.0
                    ref = refs.get(pair_name, {}).get(metric)
                    if ref is not None and math.isnan(ref.value):
                        ref = None
                    if computed is None:
                        err = None
                    elif ref is not None:
                        err = abs(computed - ref.value)
                    else:
                        last = prev.get((label, metric))
                        err = None if last is None else abs(computed - last)
                        prev[(label, metric)] = computed
                    solves = solver.history[hist_start:]
                    rows.append(
                        ExperimentRow(
                            spec.experiment,
                            label,
                            metric,
                            n,
                            spec.sigma,
                            computed,
                            None if ref is None else ref.value,
                            "none" if ref is None else ref.provenance,
                            err,
                            ms,
                            max((r.iterations for r in solves), default=0),
                            max((r.relative_residual for r in solves), default=0.0),
                            diagnostic,
                        )
                    )
    return rows


# -- golden manifest ----------------------------------------------------------


@dataclass
class GoldenManifest:
    """Error budgets (E records) and expected values (V records)."""

    budgets: dict = field(default_factory=dict)  # (exp, pair, metric, n) -> budget
    values: dict = field(default_factory=dict)  # (exp, pair, metric, n) -> (val, atol)


def load_golden_manifest(path=None) -> GoldenManifest:
    if path is None:
        text = (
            resources.files("curvequad").joinpath("data/golden_manifest.txt").read_text()
        )
    else:
        with open(path) as fh:
            text = fh.read()
    manifest = GoldenManifest()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            kind, exp, pair, metric, n = parts[:5]
            key = (exp, pair, metric, int(n))
            if kind == "E":
                manifest.budgets[key] = float(parts[5])
            elif kind == "V":
                manifest.values[key] = (float(parts[5]), float(parts[6]))
            else:
                raise ValueError(f"unknown record kind {kind!r}")
        except (ValueError, IndexError) as exc:
            raise ValueError(f"golden manifest line {lineno}: {raw!r}: {exc}") from None
    return manifest


def check_golden(rows, manifest: GoldenManifest | None = None):
    """Regressions of a run against the golden manifest.

    Returns a list of human-readable failure strings (empty = all good).
    """
    manifest = manifest or load_golden_manifest()
    failures = []
    by_key = {}
    for row in rows:
        by_key[(row.experiment, row.pair, row.metric, row.n)] = row
    for key, budget in manifest.budgets.items():
        row = by_key.get(key)
        if row is None:
            continue
        if row.computed is None:
            failures.append(f"{key}: no computed value ({row.diagnostic})")
        elif row.abs_error is None:
            failures.append(f"{key}: no error/successive difference available")
        elif row.abs_error > budget:
            failures.append(
                f"{key}: error {row.abs_error:.3e} exceeds budget {budget:.3e}"
            )
    for key, (expected, atol) in manifest.values.items():
        row = by_key.get(key)
        if row is None:
            continue
        if row.computed is None:
            failures.append(f"{key}: no computed value ({row.diagnostic})")
        elif abs(row.computed - expected) > atol:
            failures.append(
                f"{key}: computed {row.computed!r} differs from golden "
                f"{expected!r} by {abs(row.computed - expected):.3e} (atol {atol:.1e})"
            )
    return failures
