"""Figure reproduction and free-form parameter sweeps.

Each run produces a :class:`ResultTable` that is written as a CSV file, a
JSON metadata sidecar and a small stand-alone plotting script.  Every grid
point draws its random numbers from a seed derived from the run seed and
the point's coordinates, so a table does not depend on worker count or on
how the grid was sharded.
"""

from __future__ import annotations

import csv
import hashlib
import io
import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np
from scipy import integrate

from . import asymptotics as asy
from .channel import compose_channel
from .geometry import (PolarPoint, neighbor_cell_distance_pdf, own_cell_distance_pdf,
                       sample_disk, sample_layout, sample_user_position)
from .interference import intercell_power_ca, sample_intercell_power_da
from .params import LayoutKind, SystemParams, db_to_linear
from .precoding import bd_precoder, null_space_basis, svd_precoder, waterfill
from .rate_sim import average_rate, bd_rate_samples, single_user_rate_samples

__all__ = [
    "FIGURES", "DESK_MAX_ANTENNAS", "ExperimentConfig", "ResultTable", "run_figure",
    "run_sweep", "point_seed", "validate_invariants", "SWEEP_OPERATIONS",
]

FIGURES = ("fig2", "fig3", "fig4", "fig5a", "fig5b", "fig6", "fig8", "fig9")
DESK_MAX_ANTENNAS = 256

try:
    from importlib.metadata import version as _pkg_version
    VERSION = _pkg_version("dasmimo")
except Exception:  # not installed
    VERSION = "0+unknown"


# ----------------------------------------------------------------- config

@dataclass
class ExperimentConfig:
    """Everything needed to reproduce a run.

    List-valued fields form the sweep grid.  ``None`` in a figure run means
    "use that figure's defaults".
    """

    figure_id: str | None = None
    operation: str | None = None
    alpha: list[float] | None = None
    snr_db: list[float] | None = None
    N: list[int] | None = None
    K: list[int] | None = None
    L: list[int] | None = None
    layout: list[str] | None = None
    positions: int = 100
    layouts: int = 100
    channels: int = 200
    seed: int = 0
    out: str = "results"
    full: bool = False
    workers: int = 1

    def __post_init__(self):
        for name in ("alpha", "snr_db", "N", "K", "L", "layout"):
            v = getattr(self, name)
            if v is not None and not isinstance(v, list):
                setattr(self, name, list(v) if isinstance(v, (tuple, range)) else [v])

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        data = json.loads(text)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))

    def merged(self, **overrides) -> "ExperimentConfig":
        """Copy with every non-``None`` override applied."""
        data = asdict(self)
        data.update({k: v for k, v in overrides.items() if v is not None})
        return ExperimentConfig(**data)

    def validate(self) -> None:
        if self.figure_id is not None and self.figure_id not in FIGURES:
            raise ValueError(f"unknown figure id {self.figure_id!r}; expected one of {FIGURES}")
        for name in ("positions", "layouts", "channels", "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        for a in self.alpha or []:
            if not a > 2:
                raise ValueError(f"path-loss factor must exceed 2, got {a}")
        for name in ("N", "K", "L"):
            for v in getattr(self, name) or []:
                if int(v) != v or v < 1:
                    raise ValueError(f"{name} values must be positive integers, got {v}")
        for kind in self.layout or []:
            LayoutKind(kind)


# ------------------------------------------------------------------ tables

def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".9g")
    return str(v)


@dataclass
class ResultTable:
    """Rows of sweep coordinates and results with a fixed column schema."""

    name: str
    columns: list[str]
    rows: list[tuple] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)
    order: list[int] = field(default_factory=list, repr=False)

    def add(self, *row, index: int | None = None):
        if len(row) != len(self.columns):
            raise ValueError(f"row has {len(row)} values, schema has {len(self.columns)}")
        self.rows.append(tuple(row))
        self.order.append(len(self.order) if index is None else index)

    def column(self, name: str) -> np.ndarray:
        j = self.columns.index(name)
        return np.array([r[j] for r in self.rows])

    def where(self, **match) -> "ResultTable":
        idx = [self.columns.index(k) for k in match]
        keep = [r for r in self.rows if all(r[j] == v for j, v in zip(idx, match.values()))]
        return ResultTable(self.name, list(self.columns), keep, dict(self.metadata))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_fmt(v) for v in r])
        return buf.getvalue()

    @classmethod
    def merge(cls, tables: list["ResultTable"]) -> "ResultTable":
        """Combine shards of one run, restoring grid order."""
        if not tables:
            raise ValueError("nothing to merge")
        first = tables[0]
        pairs = sorted((o, r) for t in tables for o, r in zip(t.order, t.rows))
        return cls(first.name, list(first.columns), [r for _, r in pairs],
                   dict(first.metadata), [o for o, _ in pairs])

    def write(self, out_dir) -> dict[str, Path]:
        """Write ``<name>.csv``, ``<name>.meta.json`` and ``<name>_plot.py``."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = {"csv": out / f"{self.name}.csv", "meta": out / f"{self.name}.meta.json",
                 "plot": out / f"{self.name}_plot.py"}
        paths["csv"].write_text(self.to_csv(), encoding="utf-8")
        paths["meta"].write_text(json.dumps(self.metadata, sort_keys=True, indent=2, default=str),
                                 encoding="utf-8")
        paths["plot"].write_text(_PLOT_SCRIPT.format(csv=paths["csv"].name), encoding="utf-8")
        return paths


_PLOT_SCRIPT = '''"""Plot {csv}: first column on x, one line per numeric column.

Rows are grouped by any text-valued column (for instance the layout).
Run directly with Python; needs matplotlib.
"""
import csv
import sys
from collections import defaultdict
from pathlib import Path

import matplotlib.pyplot as plt

path = Path(__file__).with_name("{csv}")
with path.open(encoding="utf-8") as fh:
    rows = list(csv.DictReader(fh))
if not rows:
    sys.exit("empty table")


def is_number(v):
    try:
        float(v)
        return True
    except ValueError:
        return False


cols = list(rows[0])
x = cols[0]
text = [c for c in cols if not all(is_number(r[c]) for r in rows)]
numeric = [c for c in cols[1:] if c not in text and c != "half_width"]
groups = defaultdict(list)
for r in rows:
    groups[tuple(r[c] for c in text)].append(r)
fig, ax = plt.subplots()
for key, rs in groups.items():
    xs = [float(r[x]) for r in rs]
    for c in numeric:
        ys = [float(r[c]) for r in rs]
        ax.plot(xs, ys, marker="o", linestyle="-", label=" ".join(key + (c,)))
ax.set_xlabel(x)
ax.legend(fontsize="small")
fig.savefig(path.with_suffix(".png"), dpi=150)
'''


# ---------------------------------------------------------------- seeding

def point_seed(seed: int, coords) -> int:
    """64-bit seed for one grid point, a hash of the run seed and the
    point's coordinates."""
    text = json.dumps([int(seed), [_fmt(c) for c in coords]])
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "little")


def _params(alpha=4.0, snr_db=10.0, K=1, L=1, N=2) -> SystemParams:
    return SystemParams(alpha=float(alpha), snr=db_to_linear(float(snr_db)), K=int(K),
                        L=int(L), N=int(N))


def _first(values, default):
    return values[0] if values else default


def _check_cap(params: SystemParams, cfg: ExperimentConfig):
    if not cfg.full and params.M > DESK_MAX_ANTENNAS:
        raise ValueError(f"M = {params.M} exceeds the desk-scale cap {DESK_MAX_ANTENNAS}; "
                         "pass full=True (--full) for full-scale runs")


def _map(fn, tasks, workers: int):
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(fn, tasks))
    return [fn(t) for t in tasks]


# ---------------------------------------------------------------- figures

def _fig2(cfg: ExperimentConfig) -> ResultTable:
    # Single-user rate against the minimum access distance, one row per
    # (position, layout) draw.
    p = _params(_first(cfg.alpha, 4.0), _first(cfg.snr_db, 10.0), 1,
                _first(cfg.L, 50), _first(cfg.N, 2))
    _check_cap(p, cfg)
    t = ResultTable("fig2", ["d_min", "rho", "rate", "half_width", "lower_bound",
                             "lower_bound_approx", "formula_id"])
    rng = np.random.default_rng(point_seed(cfg.seed, ("fig2", p.L, p.N, p.alpha, p.snr)))
    rows = []
    for _ in range(cfg.positions):
        user = sample_user_position(rng)
        layout = sample_layout(LayoutKind.DA, p, rng)
        x = single_user_rate_samples(user, layout, p, cfg.channels, rng)
        d = float(np.linalg.norm(layout.clusters[0] - user.xy, axis=-1).min())
        hw = 1.96 * x.std(ddof=1) / np.sqrt(x.size) if x.size > 1 else 0.0
        lb = asy.da_su_lb(d, p)
        rows.append((d, user.rho, float(x.mean()), hw, lb.value,
                     asy.da_su_lb_approx(d, p).value, lb.formula_id))
    for r in sorted(rows):
        t.add(*r)
    return t


def _avg_point(args):
    kind, p, cfg, coords, user = args
    r = average_rate(kind, p, cfg.positions, cfg.layouts, cfg.channels,
                     seed=point_seed(cfg.seed, coords), user=user)
    return r.mean, r.half_width


def _rate_vs_L(name, cfg, grid, companions, kinds=("ca", "da"), user=None) -> ResultTable:
    """Simulated averages for each ``(L, K)`` and layout with asymptotic companions."""
    t = ResultTable(name, ["L", "K", "layout", "estimate", "half_width", "asymptotic",
                           "formula_id"])
    alpha, snr_db, N = _first(cfg.alpha, 4.0), _first(cfg.snr_db, 10.0), _first(cfg.N, 2)
    tasks = []
    for L, K in grid:
        p = _params(alpha, snr_db, K, L, N)
        _check_cap(p, cfg)
        for kind in kinds:
            tasks.append((LayoutKind(kind), p, cfg, (name, kind, L, K, N, alpha, snr_db), user))
    results = _map(_avg_point, tasks, cfg.workers)
    for (kind, p, *_), (mean, hw) in zip(tasks, results):
        a = companions[kind.value](p)
        t.add(p.L, p.K, kind.value, mean, hw, a.value, a.formula_id)
    return t


def _desk_grid(cfg, desk, full):
    if cfg.L:
        return [int(v) for v in cfg.L]
    return full if cfg.full else desk


def _fig3(cfg):
    Ls = _desk_grid(cfg, [2, 4, 8, 16, 32, 64, 128], [2, 4, 8, 16, 32, 64, 128, 256, 512])
    return _rate_vs_L("fig3", cfg, [(L, 1) for L in Ls], {
        "ca": lambda p: asy.ca_su_avg(p.L, p),
        "da": lambda p: asy.da_su_avg_lb(p.L, p),
    })


def _fig5a(cfg):
    Ls = _desk_grid(cfg, [8, 16, 32, 64, 128], [8, 16, 32, 64, 128, 256, 400])
    return _rate_vs_L("fig5a", cfg, [(L, max(1, L // 2)) for L in Ls], {
        "ca": lambda p: asy.ca_mu_avg(p.L, p.K, p),
        "da": lambda p: asy.da_mu_avg_lb(p.L, p.K, p),
    })


def _fig5b(cfg):
    K = int(_first(cfg.K, 20))
    Ls = [L for L in _desk_grid(cfg, [20, 32, 64, 128], [20, 32, 64, 128, 256, 400]) if L >= K]
    return _rate_vs_L("fig5b", cfg, [(L, K) for L in Ls], {
        "ca": lambda p: asy.ca_mu_avg(p.L, p.K, p),
        "da": lambda p: asy.da_mu_avg_lb(p.L, p.K, p),
    })


def _fig9(cfg):
    # The small-cell user sits at the cell centre; the DA comparison averages
    # over positions as usual.
    Ls = _desk_grid(cfg, [10, 20, 40, 80, 120], [25, 50, 100, 200, 400])
    grid = [(L, max(1, L // 5)) for L in Ls]
    sc = _rate_vs_L("fig9", cfg, grid, {"smallcell": lambda p: asy.sc_avg_lb(p.L, p.K, p)},
                    kinds=("smallcell",), user=PolarPoint(0.0, 0.0))
    da = _rate_vs_L("fig9", cfg, grid, {"da": lambda p: asy.da_mu_avg_lb(p.L, p.K, p)},
                    kinds=("da",))
    for r in da.rows:
        sc.add(*r)
    return sc


def _fig4(cfg):
    # Normalized inter-cell power along theta = pi/6.
    alpha = _first(cfg.alpha, 4.0)
    L = int(_first(cfg.L, 200))
    t = ResultTable("fig4", ["rho", "p_int_ca", "p_int_da_mean", "p_int_da_std",
                             "half_width", "layouts"])
    theta = np.pi / 6
    for rho in np.round(np.linspace(0.0, 1.0, 11), 10):
        user = PolarPoint(float(rho), theta)
        rng = np.random.default_rng(point_seed(cfg.seed, ("fig4", rho, L, alpha)))
        x = sample_intercell_power_da(user, alpha, L, cfg.layouts, rng)
        hw = 1.96 * x.std(ddof=1) / np.sqrt(x.size) if x.size > 1 else 0.0
        t.add(float(rho), intercell_power_ca(user, alpha), float(x.mean()),
              float(x.std(ddof=1)) if x.size > 1 else 0.0, hw, x.size)
    return t


def _fig6_point(args):
    kind, p, rho, seed, cfg = args
    rng = np.random.default_rng(seed)
    theta = 2 * np.pi * rng.random()
    users = np.vstack([PolarPoint(rho, theta).xy[None], sample_disk(rng, p.K - 1)])
    layout = sample_layout(kind, p, rng)
    x = bd_rate_samples(0, users, layout, p, cfg.channels, rng)
    hw = 1.96 * x.std(ddof=1) / np.sqrt(x.size) if x.size > 1 else 0.0
    return theta, float(x.mean()), hw


def _fig6(cfg):
    # Per-realization BD rate against the target's radial coordinate.
    if cfg.full:
        L, K = int(_first(cfg.L, 400)), int(_first(cfg.K, 200))
    else:
        L, K = int(_first(cfg.L, 128)), int(_first(cfg.K, 64))
    p = _params(_first(cfg.alpha, 4.0), _first(cfg.snr_db, 10.0), K, L, _first(cfg.N, 2))
    _check_cap(p, cfg)
    t = ResultTable("fig6", ["rho", "layout", "draw", "theta", "rate", "half_width"])
    keys, tasks = [], []
    for rho in np.round(np.linspace(0.1, 1.0, 10), 10):
        for kind in (LayoutKind.CA, LayoutKind.DA):
            for j in range(cfg.positions):
                s = point_seed(cfg.seed, ("fig6", kind.value, rho, j, L, K))
                keys.append((float(rho), kind.value, j))
                tasks.append((kind, p, float(rho), s, cfg))
    for key, (theta, rate, hw) in zip(keys, _map(_fig6_point, tasks, cfg.workers)):
        t.add(*key, theta, rate, hw)
    return t


def _fig8(cfg):
    # Asymptotic curves only.
    alpha = _first(cfg.alpha, 4.0)
    Ks = [int(k) for k in (cfg.K or [10, 50])]
    t = ResultTable("fig8", ["L_over_K", "K", "L", "ca_mu_avg", "da_mu_avg_lb"])
    for K in Ks:
        for ratio in (2, 4, 8, 16):
            L = ratio * K
            p = _params(alpha, _first(cfg.snr_db, 10.0), K, L, _first(cfg.N, 2))
            t.add(ratio, K, L, asy.ca_mu_avg_approx(L, K, p).value,
                  asy.da_mu_avg_lb(L, K, p).value)
    return t


_FIGURE_RUNNERS = {"fig2": _fig2, "fig3": _fig3, "fig4": _fig4, "fig5a": _fig5a,
                   "fig5b": _fig5b, "fig6": _fig6, "fig8": _fig8, "fig9": _fig9}


def _metadata(cfg: ExperimentConfig, wall: float) -> dict:
    return {"seed": cfg.seed, "version": VERSION, "wall_time_s": round(wall, 3),
            "config": asdict(cfg)}


def run_figure(figure_id: str, config: ExperimentConfig | None = None) -> ResultTable:
    """Reproduce one figure's data.

    Unspecified grid values fall back to that figure's defaults.  Runs are
    capped at ``M <= 256`` antennas per cell unless ``config.full`` is set.
    """
    if figure_id not in _FIGURE_RUNNERS:
        raise ValueError(f"unknown figure id {figure_id!r}; expected one of {FIGURES}")
    cfg = (config or ExperimentConfig()).merged(figure_id=figure_id)
    cfg.validate()
    start = time.perf_counter()
    table = _FIGURE_RUNNERS[figure_id](cfg)
    table.metadata = _metadata(cfg, time.perf_counter() - start)
    return table


# ------------------------------------------------------------------ sweeps

def _sweep_rate(kind):
    def run(p, cfg, seed):
        r = average_rate(kind, p, cfg.positions, cfg.layouts, cfg.channels, seed=seed)
        return r.mean, r.half_width
    return run


def _asym(fn, *names):
    def run(p, cfg, seed):
        return float(fn(*[getattr(p, n) for n in names], p)), None
    return run


def _const(fn):
    def run(p, cfg, seed):
        return float(fn(p.alpha)), None
    return run


# operation -> (grid axes used, evaluator returning (value, half_width or None))
SWEEP_OPERATIONS = {
    "average_rate": (("layout", "alpha", "snr_db", "N", "K", "L"), None),
    "psi_c": (("alpha",), _const(asy.psi_c)),
    "psi_d": (("alpha",), _const(asy.psi_d)),
    "upsilon": (("alpha",), _const(asy.upsilon)),
    "ca_su_avg": (("alpha", "snr_db", "N", "L"), _asym(asy.ca_su_avg, "L")),
    "ca_su_avg_approx": (("alpha", "snr_db", "N", "L"), _asym(asy.ca_su_avg_approx, "L")),
    "da_su_avg_lb": (("alpha", "snr_db", "N", "L"), _asym(asy.da_su_avg_lb, "L")),
    "ca_mu_avg": (("alpha", "snr_db", "N", "K", "L"), _asym(asy.ca_mu_avg, "L", "K")),
    "ca_mu_avg_approx": (("alpha", "snr_db", "N", "K", "L"),
                         _asym(asy.ca_mu_avg_approx, "L", "K")),
    "da_mu_avg_lb": (("alpha", "snr_db", "N", "K", "L"), _asym(asy.da_mu_avg_lb, "L", "K")),
    "sc_avg_lb": (("alpha", "snr_db", "N", "K", "L"), _asym(asy.sc_avg_lb, "L", "K")),
}

_AXIS_DEFAULTS = {"layout": ["da"], "alpha": [4.0], "snr_db": [10.0], "N": [2], "K": [1],
                  "L": None}


def sweep_grid(cfg: ExperimentConfig) -> list[dict]:
    """Grid points of a sweep in row-major order over its axes."""
    if cfg.operation not in SWEEP_OPERATIONS:
        raise ValueError(f"unknown sweep operation {cfg.operation!r}; "
                         f"expected one of {sorted(SWEEP_OPERATIONS)}")
    axes, _ = SWEEP_OPERATIONS[cfg.operation]
    values = []
    for a in axes:
        v = getattr(cfg, a)
        if v is None:
            v = _AXIS_DEFAULTS[a]
        if not v:
            raise ValueError("empty sweep")
        values.append(v)
    return [dict(zip(axes, combo)) for combo in itertools.product(*values)]


def _sweep_point(args):
    cfg, point = args
    axes, fn = SWEEP_OPERATIONS[cfg.operation]
    p = _params(**{k: v for k, v in point.items() if k != "layout"})
    seed = point_seed(cfg.seed, [cfg.operation] + [point[a] for a in axes])
    if cfg.operation == "average_rate":
        _check_cap(p, cfg)
        fn = _sweep_rate(LayoutKind(point["layout"]))
    return fn(p, cfg, seed)


def run_sweep(config: ExperimentConfig, shard: tuple[int, int] | None = None) -> ResultTable:
    """Evaluate ``config.operation`` on every point of the grid.

    ``shard = (i, n)`` evaluates only points ``i, i + n, ...``; shards
    combine with :meth:`ResultTable.merge` into the unsharded table.
    """
    config.validate()
    grid = sweep_grid(config)
    axes, _ = SWEEP_OPERATIONS[config.operation]
    for point in grid:
        if "K" in point and "L" in point and point["L"] < point["K"]:
            raise ValueError(f"infeasible grid point L={point['L']} < K={point['K']}")
    idx = list(range(len(grid)))
    if shard is not None:
        i, n = shard
        if not 0 <= i < n:
            raise ValueError(f"bad shard {shard}")
        idx = idx[i::n]
    start = time.perf_counter()
    results = _map(_sweep_point, [(config, grid[j]) for j in idx], config.workers)
    table = ResultTable(config.operation, list(axes) + ["value", "half_width", "formula_id"])
    for j, (value, hw) in zip(idx, results):
        table.add(*[grid[j][a] for a in axes], value, "" if hw is None else hw,
                  config.operation, index=j)
    table.metadata = _metadata(config, time.perf_counter() - start)
    return table


# -------------------------------------------------------------- validation

def validate_invariants(seed: int = 0) -> list[tuple[str, bool, str]]:
    """Quick invariant checks; returns ``(name, passed, detail)`` per check."""
    rng = np.random.default_rng(seed)
    out = []

    def check(name, ok, detail=""):
        out.append((name, bool(ok), detail))

    eigs = rng.exponential(size=6)
    powers, level = waterfill(eigs, 3.0)
    active = powers > 0
    kkt = (np.all(level - 1 / eigs[active] > 0) and np.all(level <= 1 / eigs[~active])
           and abs(powers.sum() - 3.0) < 1e-9)
    check("waterfilling KKT and budget", kkt)

    worst = 0.0
    for _ in range(20):
        K, N = int(rng.integers(1, 5)), 2
        L = int(rng.integers(K, 16))
        p = SystemParams(K=K, L=L, N=N)
        layout = sample_layout(LayoutKind.DA, p, rng)
        users = [sample_user_position(rng) for _ in range(K)]
        chans = [compose_channel(layout, u, p, rng) for u in users]
        res = bd_precoder(chans, p.per_user_power)
        for k in range(K):
            for j in range(K):
                if j != k:
                    r = np.linalg.norm(chans[k].G_tilde @ res[j].W) / np.linalg.norm(chans[k].G_tilde)
                    worst = max(worst, r)
    check("BD nulling residual < 1e-8", worst < 1e-8, f"max {worst:.2e}")

    X = rng.standard_normal((4, 8)) + 1j * rng.standard_normal((4, 8))
    B = null_space_basis(X)
    check("null space orthonormal", np.allclose(B.conj().T @ B, np.eye(4), atol=1e-10)
          and np.linalg.norm(X @ B) < 1e-9 * np.linalg.norm(X))

    p = SystemParams(L=4, N=2)
    layout = sample_layout(LayoutKind.DA, p, rng)
    ch = compose_channel(layout, sample_user_position(rng), p, rng)
    s = svd_precoder(ch, p.snr)
    check("precoder unit trace", abs(s.radiated_fraction - 1) < 1e-9)

    y = 0.6
    norm0 = integrate.quad(lambda x: own_cell_distance_pdf(x, y), 0, 1 + y, points=[1 - y])[0]
    norm1 = integrate.quad(lambda x: neighbor_cell_distance_pdf(x, y, 0.4, 2), 0, 4, limit=200)[0]
    check("distance pdfs normalized", abs(norm0 - 1) < 1e-6 and abs(norm1 - 1) < 1e-6,
          f"{norm0:.8f} {norm1:.8f}")

    check("P_int CA at centre = 0.375", intercell_power_ca(PolarPoint(0.0), 4.0) == 0.375)
    check("Upsilon(4) = 1/9", abs(asy.upsilon(4.0) - 1 / 9) < 1e-6)
    check("Psi^C(4) near 3.54", 3.49 <= asy.psi_c(4.0) <= 3.59, f"{asy.psi_c(4.0):.4f}")
    return out
