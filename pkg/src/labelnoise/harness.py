"""Monte-Carlo experiment grid over (N, noise rates, k, delta).

Each cell runs the full pipeline many times: draw clean data, corrupt the
labels, fit logistic models to both copies, sample anchors on the true
boundary (relaxed by the cell's delta), and run the anchor z-test against
both fits.  Anchors are handed to the test *declared strict* even when
sampled relaxed: the tester does not know delta, which is exactly what
inflates the clean-fit Type I error at small k and is the effect the
delta columns of the grid exist to show.

Seeding is hierarchical (root_seed, cell index, run index), so any
execution order, resumption, or worker count reproduces identical
numbers.  Per-cell results are written as they complete; the final
runs.csv / cells.csv are assembled from them in index order, which makes
re-runs byte-identical and lets an interrupted grid resume from its
manifest.

CSV is the canonical output; SVG box-plot panels and power curves are
emitted only on request and are never parsed by tests.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from ._rng import child_seeds
from .anchors import z_test, power
from .errors import DataFormatError, ParameterError, SeparableDataError
from .logistic import fit
from .noise import NoiseSpec, corrupt_labels
from .synth import GaussianSetup, generate, sample_anchors

DEFAULT_N_GRID = (500, 1000, 2000, 5000)
# realizations of the target rate differences alpha - beta in
# {-0.05, 0.10, 0.20}: one rate pinned to zero, sign decides which
DEFAULT_NOISE_GAPS = ((0.0, 0.05), (0.10, 0.0), (0.20, 0.0))
DEFAULT_K_GRID = (1, 2, 4, 8, 16, 32)
DEFAULT_DELTA_GRID = (0.0, 0.05, 0.10)

MAX_FAILURE_FRACTION = 0.05


def gap_to_rates(gap: float) -> tuple[float, float]:
    """Realize a target alpha - beta as a rate pair with one rate zero."""
    return (gap, 0.0) if gap >= 0.0 else (0.0, -gap)


@dataclass(frozen=True)
class ExperimentConfig:
    n_grid: tuple = DEFAULT_N_GRID
    noise_gaps: tuple = DEFAULT_NOISE_GAPS          # (alpha, beta) pairs
    k_grid: tuple = DEFAULT_K_GRID
    delta_grid: tuple = DEFAULT_DELTA_GRID
    runs: int = 500
    significance: float = 0.05
    root_seed: int = 0
    anchor_half_width: float = 4.0
    power_from_clean_fit: bool = False
    setup: GaussianSetup = field(default_factory=GaussianSetup)

    def __post_init__(self) -> None:
        for name in ("n_grid", "noise_gaps", "k_grid", "delta_grid"):
            if len(getattr(self, name)) == 0:
                raise ParameterError(f"{name} must be non-empty")
        if self.runs < 1:
            raise ParameterError("runs must be positive")
        if not 0.0 < self.significance < 1.0:
            raise ParameterError("significance must lie in (0, 1)")
        # validate every rate pair up front
        for pair in self.noise_gaps:
            NoiseSpec.class_conditional(*pair)

    def cells(self) -> list["Cell"]:
        """Full product grid, in deterministic index order."""
        out = []
        idx = 0
        for n in self.n_grid:
            for alpha, beta in self.noise_gaps:
                for k in self.k_grid:
                    for delta in self.delta_grid:
                        out.append(Cell(idx, int(n), float(alpha), float(beta),
                                        int(k), float(delta)))
                        idx += 1
        return out

    def to_dict(self) -> dict:
        return {
            "n_grid": list(self.n_grid),
            "noise_gaps": [list(p) for p in self.noise_gaps],
            "k_grid": list(self.k_grid),
            "delta_grid": list(self.delta_grid),
            "runs": self.runs,
            "significance": self.significance,
            "root_seed": self.root_seed,
            "anchor_half_width": self.anchor_half_width,
            "power_from_clean_fit": self.power_from_clean_fit,
            "setup": {
                "mean_pos": list(self.setup.mean_pos),
                "mean_neg": list(self.setup.mean_neg),
                "prior": self.setup.prior,
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        kwargs = {}
        for name in ("runs", "significance", "root_seed",
                     "anchor_half_width", "power_from_clean_fit"):
            if name in d:
                kwargs[name] = d[name]
        for name in ("n_grid", "k_grid", "delta_grid"):
            if name in d:
                kwargs[name] = tuple(d[name])
        if "noise_gaps" in d:
            # entries are either [alpha, beta] pairs or NoiseSpec dicts
            # ({"kind": "uniform", "tau": t} / {"kind": "class_conditional", ...})
            pairs = []
            for entry in d["noise_gaps"]:
                if isinstance(entry, dict):
                    spec = NoiseSpec.from_dict(entry)
                    pairs.append((spec.alpha, spec.beta))
                else:
                    pairs.append(tuple(entry))
            kwargs["noise_gaps"] = tuple(pairs)
        if "setup" in d:
            s = d["setup"]
            kwargs["setup"] = GaussianSetup(
                np.asarray(s.get("mean_pos", (1.0, 1.0)), dtype=float),
                np.asarray(s.get("mean_neg", (-1.0, -1.0)), dtype=float),
                float(s.get("prior", 0.5)),
            )
        return cls(**kwargs)

    @classmethod
    def from_json_file(cls, path) -> "ExperimentConfig":
        try:
            d = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise DataFormatError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(d)


@dataclass(frozen=True)
class Cell:
    index: int
    n: int
    alpha: float
    beta: float
    k: int
    delta: float


@dataclass(frozen=True)
class RunRecord:
    run: int
    clean_p: float
    noisy_p: float
    clean_eta: float
    noisy_eta: float
    clean_v: float
    noisy_v: float
    clean_iters: int
    noisy_iters: int


@dataclass(frozen=True)
class CellSummary:
    cell: Cell
    runs_ok: int
    runs_failed: int
    status: str
    clean_quartiles: tuple          # (q1, q2, q3)
    clean_whiskers: tuple           # (q1 - 1.5 iqr, q3 + 1.5 iqr)
    noisy_quartiles: tuple
    noisy_whiskers: tuple
    clean_reject_rate: float
    noisy_reject_rate: float
    mean_clean_v: float
    mean_noisy_v: float
    analytic_power: float


def _quartiles_and_whiskers(values: np.ndarray) -> tuple[tuple, tuple]:
    q1, q2, q3 = np.percentile(values, [25.0, 50.0, 75.0])
    iqr = q3 - q1
    return (float(q1), float(q2), float(q3)), (float(q1 - 1.5 * iqr),
                                               float(q3 + 1.5 * iqr))


def run_cell(config: ExperimentConfig, cell: Cell) -> tuple[list[RunRecord], CellSummary]:
    """Execute every run of one grid cell; drop separable fits.

    Failed runs are excluded (not retried, so the seed stream stays
    aligned) and counted; the cell is marked failed when more than 5% of
    its runs are lost.
    """
    spec = NoiseSpec.class_conditional(cell.alpha, cell.beta)
    records: list[RunRecord] = []
    failed = 0
    for run in range(config.runs):
        data_seed, noise_seed, anchor_seed = child_seeds(
            config.root_seed, cell.index, run, n=3
        )
        clean = generate(config.setup, cell.n, data_seed)
        noisy = clean.with_labels(corrupt_labels(clean.labels, spec, noise_seed))
        anchors = sample_anchors(
            config.setup, cell.k, cell.delta, config.anchor_half_width, anchor_seed
        ).as_strict()
        try:
            clean_model = fit(clean)
            noisy_model = fit(noisy)
        except SeparableDataError:
            failed += 1
            continue
        clean_rep = z_test(clean_model, anchors, config.significance)
        noisy_rep = z_test(noisy_model, anchors, config.significance)
        records.append(RunRecord(
            run=run,
            clean_p=clean_rep.p_value,
            noisy_p=noisy_rep.p_value,
            clean_eta=clean_rep.eta_bar,
            noisy_eta=noisy_rep.eta_bar,
            clean_v=clean_rep.variance,
            noisy_v=noisy_rep.variance,
            clean_iters=clean_model.iterations,
            noisy_iters=noisy_model.iterations,
        ))
    return records, _summarise(config, cell, records, failed)


def _summarise(config: ExperimentConfig, cell: Cell,
               records: list[RunRecord], failed: int) -> CellSummary:
    status = "ok" if failed <= MAX_FAILURE_FRACTION * config.runs else "failed"
    if not records:
        nan3, nan2 = (float("nan"),) * 3, (float("nan"),) * 2
        return CellSummary(cell, 0, failed, "failed", nan3, nan2, nan3, nan2,
                           float("nan"), float("nan"), float("nan"),
                           float("nan"), float("nan"))
    clean_p = np.array([r.clean_p for r in records])
    noisy_p = np.array([r.noisy_p for r in records])
    cq, cw = _quartiles_and_whiskers(clean_p)
    nq, nw = _quartiles_and_whiskers(noisy_p)
    a = config.significance
    mean_clean_v = float(np.mean([r.clean_v for r in records]))
    mean_noisy_v = float(np.mean([r.noisy_v for r in records]))

    v_bar = mean_clean_v if config.power_from_clean_fit else mean_noisy_v
    eta1 = (1.0 - cell.alpha + cell.beta) / 2.0
    v_tilde = (eta1 * (1.0 - eta1)) ** 2 * 16.0 * v_bar
    analytic = power(cell.alpha, cell.beta, v_bar, v_tilde, a)

    return CellSummary(
        cell=cell,
        runs_ok=len(records),
        runs_failed=failed,
        status=status,
        clean_quartiles=cq,
        clean_whiskers=cw,
        noisy_quartiles=nq,
        noisy_whiskers=nw,
        clean_reject_rate=float(np.mean(clean_p < a)),
        noisy_reject_rate=float(np.mean(noisy_p < a)),
        mean_clean_v=mean_clean_v,
        mean_noisy_v=mean_noisy_v,
        analytic_power=analytic,
    )


# ---------------------------------------------------------------------------
# Grid orchestration with per-cell checkpoints and resume.
# ---------------------------------------------------------------------------

RUNS_HEADER = ("cell,n,alpha,beta,k,delta,run,clean_p,noisy_p,clean_eta,"
               "noisy_eta,clean_v,noisy_v,clean_iters,noisy_iters")
CELLS_HEADER = ("cell,n,alpha,beta,k,delta,runs_ok,runs_failed,status,"
                "clean_q1,clean_q2,clean_q3,clean_whisker_lo,clean_whisker_hi,"
                "noisy_q1,noisy_q2,noisy_q3,noisy_whisker_lo,noisy_whisker_hi,"
                "clean_reject_rate,noisy_reject_rate,mean_clean_v,mean_noisy_v,"
                "analytic_power")


def _g(x: float) -> str:
    return f"{x:.17g}"


def _cell_payload(cell: Cell, records: list[RunRecord], summary: CellSummary) -> dict:
    return {
        "cell": asdict(cell),
        "records": [asdict(r) for r in records],
        "summary": {
            "runs_ok": summary.runs_ok,
            "runs_failed": summary.runs_failed,
            "status": summary.status,
            "clean_quartiles": list(summary.clean_quartiles),
            "clean_whiskers": list(summary.clean_whiskers),
            "noisy_quartiles": list(summary.noisy_quartiles),
            "noisy_whiskers": list(summary.noisy_whiskers),
            "clean_reject_rate": summary.clean_reject_rate,
            "noisy_reject_rate": summary.noisy_reject_rate,
            "mean_clean_v": summary.mean_clean_v,
            "mean_noisy_v": summary.mean_noisy_v,
            "analytic_power": summary.analytic_power,
        },
    }


def _summary_from_payload(payload: dict) -> CellSummary:
    c = payload["cell"]
    s = payload["summary"]
    return CellSummary(
        cell=Cell(**c),
        runs_ok=s["runs_ok"],
        runs_failed=s["runs_failed"],
        status=s["status"],
        clean_quartiles=tuple(s["clean_quartiles"]),
        clean_whiskers=tuple(s["clean_whiskers"]),
        noisy_quartiles=tuple(s["noisy_quartiles"]),
        noisy_whiskers=tuple(s["noisy_whiskers"]),
        clean_reject_rate=s["clean_reject_rate"],
        noisy_reject_rate=s["noisy_reject_rate"],
        mean_clean_v=s["mean_clean_v"],
        mean_noisy_v=s["mean_noisy_v"],
        analytic_power=s["analytic_power"],
    )


@dataclass
class ExperimentSummary:
    cells: list[CellSummary]
    runs_csv: Path
    cells_csv: Path

    def cell_by_coords(self, n: int, alpha: float, beta: float,
                       k: int, delta: float) -> CellSummary:
        for s in self.cells:
            c = s.cell
            if (c.n, c.alpha, c.beta, c.k, c.delta) == (n, alpha, beta, k, delta):
                return s
        raise KeyError(f"no cell with coords {(n, alpha, beta, k, delta)}")


def run_grid(config: ExperimentConfig, outdir, *,
             plots: bool = False, progress: bool = False) -> ExperimentSummary:
    """Run (or resume) the full grid and write runs.csv / cells.csv.

    A manifest records which cells have completed; rerunning with the
    same outdir and config skips them.  Changing the config under an
    existing manifest is an error rather than a silent mix.
    """
    outdir = Path(outdir)
    cells_dir = outdir / "cells"
    cells_dir.mkdir(parents=True, exist_ok=True)
    manifest_path = outdir / "manifest.json"

    config_dict = config.to_dict()
    completed: set[int] = set()
    if manifest_path.exists():
        manifest = json.loads(manifest_path.read_text())
        if manifest["config"] != config_dict:
            raise ParameterError(
                f"outdir {outdir} holds results for a different config; "
                "use a fresh directory"
            )
        completed = set(manifest["completed"])

    cells = config.cells()
    for cell in cells:
        if cell.index in completed:
            continue
        records, summary = run_cell(config, cell)
        payload = _cell_payload(cell, records, summary)
        (cells_dir / f"cell_{cell.index:05d}.json").write_text(json.dumps(payload))
        completed.add(cell.index)
        manifest_path.write_text(json.dumps(
            {"config": config_dict, "completed": sorted(completed)}
        ))
        if progress:
            print(f"[{len(completed):4d}/{len(cells)}] cell {cell.index}: "
                  f"n={cell.n} a={cell.alpha:g} b={cell.beta:g} "
                  f"k={cell.k} delta={cell.delta:g} "
                  f"noisy_reject={summary.noisy_reject_rate:.3f}")

    payloads = [
        json.loads((cells_dir / f"cell_{cell.index:05d}.json").read_text())
        for cell in cells
    ]
    summaries = [_summary_from_payload(p) for p in payloads]

    runs_csv = outdir / "runs.csv"
    cells_csv = outdir / "cells.csv"
    _write_runs_csv(runs_csv, cells, payloads)
    _write_cells_csv(cells_csv, summaries)

    if plots:
        from .plots import plot_grid_boxes, plot_power_curves
        plot_grid_boxes(config, summaries, outdir)
        plot_power_curves(outdir / "power_curves.svg")
    return ExperimentSummary(summaries, runs_csv, cells_csv)


def _write_runs_csv(path: Path, cells: list[Cell], payloads: list[dict]) -> None:
    lines = [RUNS_HEADER]
    for cell, payload in zip(cells, payloads):
        prefix = (f"{cell.index},{cell.n},{_g(cell.alpha)},{_g(cell.beta)},"
                  f"{cell.k},{_g(cell.delta)}")
        for r in payload["records"]:
            lines.append(
                f"{prefix},{r['run']},{_g(r['clean_p'])},{_g(r['noisy_p'])},"
                f"{_g(r['clean_eta'])},{_g(r['noisy_eta'])},"
                f"{_g(r['clean_v'])},{_g(r['noisy_v'])},"
                f"{r['clean_iters']},{r['noisy_iters']}"
            )
    path.write_text("\n".join(lines) + "\n")


def _write_cells_csv(path: Path, summaries: list[CellSummary]) -> None:
    lines = [CELLS_HEADER]
    for s in summaries:
        c = s.cell
        lines.append(",".join([
            str(c.index), str(c.n), _g(c.alpha), _g(c.beta), str(c.k), _g(c.delta),
            str(s.runs_ok), str(s.runs_failed), s.status,
            *map(_g, s.clean_quartiles), *map(_g, s.clean_whiskers),
            *map(_g, s.noisy_quartiles), *map(_g, s.noisy_whiskers),
            _g(s.clean_reject_rate), _g(s.noisy_reject_rate),
            _g(s.mean_clean_v), _g(s.mean_noisy_v), _g(s.analytic_power),
        ]))
    path.write_text("\n".join(lines) + "\n")
