import csv
import itertools
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Optional

from cli.config import settings
from cli.models import RunConfig, RunManifest, SweepRow
from cli.services.manifest import file_sha256, read_json, write_manifest
from cli.services.training import training_service
from src.utils.errors import ConfigError

logger = logging.getLogger(__name__)

"""
Sweep Service - Train one run per grid point and collect a CSV matrix
Grid points are (label, {dotted config path: value}) pairs applied on top of a
base experiment config
"""

GridPoint = tuple[str, dict[str, Any]]

TAU_GRID = [0.1, 0.2, 0.5, 1.0]
L2_GRID = [1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1]
LAYER_GRID = [1, 2, 3, 4]
PROPAGATION_EXPONENTS = [(0.5, 0.0), (0.5, 0.5), (1.0, 0.0)]
CCL_MARGINS = [round(0.1 * i, 1) for i in range(1, 11)]
CCL_WEIGHTS = [1.0, 150.0, 300.0, 1000.0]

_SIMILARITY_CODES = {"IP": "inner_product", "COS": "cosine"}


def _tau_grid() -> list[GridPoint]:
    return [(f"tau={t}", {"loss.temperature": t}) for t in TAU_GRID]


"""
Train similarity x test similarity, labeled TRAIN-TEST
"""
def _similarity_grid() -> list[GridPoint]:
    points = []
    for train_code, test_code in itertools.product(_SIMILARITY_CODES, repeat=2):
        points.append((
            f"{train_code}-{test_code}",
            {
                "loss.similarity": _SIMILARITY_CODES[train_code],
                "eval_similarity": _SIMILARITY_CODES[test_code],
                "evaluation.similarity": _SIMILARITY_CODES[test_code],
            },
        ))
    return points


def _propagation_grid() -> list[GridPoint]:
    points = []
    for alpha0, alpha1 in PROPAGATION_EXPONENTS:
        for side in ("user", "item"):
            points.append((
                f"{side}:alpha0={alpha0},alpha1={alpha1}",
                {"model.kind": f"SVDpp_{side}", "model.alpha0": alpha0, "model.alpha1": alpha1},
            ))
    return points


def _l2_grid() -> list[GridPoint]:
    return [(f"l2={v:g}", {"l2_coeff": v, "loss.l2_coeff": None}) for v in L2_GRID]


def _layer_grid() -> list[GridPoint]:
    return [(f"K={k}", {"model.kind": "LightGCN", "model.layers": k}) for k in LAYER_GRID]


def _ccl_grid() -> list[GridPoint]:
    return [
        (f"margin={m},weight={w:g}", {"loss.kind": "CCL", "loss.ccl_margin": m, "loss.ccl_weight": w})
        for m, w in itertools.product(CCL_MARGINS, CCL_WEIGHTS)
    ]


PRESETS = {
    "tau": _tau_grid,
    "similarity": _similarity_grid,
    "propagation": _propagation_grid,
    "l2": _l2_grid,
    "layers": _layer_grid,
    "ccl": _ccl_grid,
}


"""
Cartesian product of a {dotted path: [values]} mapping
Raises:
    ConfigError: Empty mapping or a non-list / empty value list
"""
def expand_grid(grid: dict[str, list[Any]]) -> list[GridPoint]:
    if not grid:
        raise ConfigError("grid is empty")
    for key, values in grid.items():
        if not isinstance(values, list) or not values:
            raise ConfigError(f"grid entry {key!r} must be a non-empty list")
    keys = list(grid)
    points = []
    for combo in itertools.product(*(grid[k] for k in keys)):
        params = dict(zip(keys, combo))
        label = ",".join(f"{k}={v}" for k, v in params.items())
        points.append((label, params))
    return points


"""
Resolve --grid: a preset name or a JSON grid file
"""
def resolve_grid(grid: str) -> list[GridPoint]:
    if grid in PRESETS:
        return PRESETS[grid]()
    if Path(grid).is_file():
        return expand_grid(read_json(grid))
    raise ConfigError(f"unknown grid {grid!r} (presets: {sorted(PRESETS)} or a JSON file)")


"""
Set a dotted path inside a nested config document
Raises:
    ConfigError: A path segment names a non-section
"""
def apply_overrides(document: dict[str, Any], params: dict[str, Any]) -> dict[str, Any]:
    updated = json.loads(json.dumps(document))
    for path, value in params.items():
        *sections, leaf = path.split(".")
        node = updated
        for section in sections:
            child = node.setdefault(section, {})
            if not isinstance(child, dict):
                raise ConfigError(f"{path}: {section!r} is not a config section")
            node = child
        node[leaf] = value
    return updated


"""
Train and test-evaluate one grid point (top level so process pools can pickle it)
"""
def run_point(document: dict[str, Any], label: str, params: dict[str, Any], out_dir: str) -> dict[str, Any]:
    config = RunConfig.model_validate(apply_overrides(document, params))
    result, _, _ = training_service.train_seed(config, config.seed, Path(out_dir))
    row = SweepRow(label=label, params=params, recall=result.recall, ndcg=result.ndcg)
    return row.model_dump(mode="json")


class SweepService:

    """
    Run every grid point and write sweep.csv plus a manifest
    Args:
        config: Base experiment config
        grid: Preset name or path of a JSON grid file
        out_dir: Output directory (each point gets its own subdirectory)
        parallel: Worker processes (1 runs sequentially), capped by settings.threads
        config_path: Source file of the config, hashed into the manifest
    Returns:
        Rows in grid order
    Raises:
        ConfigError: Unknown grid, or more points than settings.max_grid_points
        pydantic.ValidationError: A grid point yields an invalid config
    """
    def run(
        self,
        config: RunConfig,
        grid: str,
        out_dir: Path,
        parallel: int = 1,
        config_path: Optional[str] = None
    ) -> list[SweepRow]:
        points = resolve_grid(grid)
        if len(points) > settings.max_grid_points:
            raise ConfigError(
                f"grid has {len(points)} points, above the cap of {settings.max_grid_points}"
            )

        document = config.model_dump(mode="json")
        """
        Validate every point before training anything
        """
        for _, params in points:
            RunConfig.model_validate(apply_overrides(document, params))

        out_dir = Path(out_dir)
        point_dirs = [str(out_dir / f"point_{i:03d}") for i in range(len(points))]
        workers = max(1, min(parallel, settings.threads))
        logger.info("sweeping %d points with %d worker(s)", len(points), workers)

        if workers == 1:
            rows = [
                run_point(document, label, params, point_dir)
                for (label, params), point_dir in zip(points, point_dirs)
            ]
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = [
                    pool.submit(run_point, document, label, params, point_dir)
                    for (label, params), point_dir in zip(points, point_dirs)
                ]
                rows = [f.result() for f in futures]

        results = [SweepRow.model_validate(r) for r in rows]
        csv_path = self.write_csv(results, out_dir / "sweep.csv")

        inputs = {config.data.path: file_sha256(config.data.path)} if config.data else {}
        if config_path is not None:
            inputs[str(config_path)] = file_sha256(config_path)
        write_manifest(
            RunManifest(
                command="sweep",
                config={"base": document, "grid": grid, "points": [p for _, p in points]},
                seeds=[config.seed],
                inputs=inputs,
                outputs=[str(csv_path)] + point_dirs,
            ),
            out_dir,
        )
        return results

    def write_csv(self, rows: list[SweepRow], path: Path) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(["label", "params", "recall", "ndcg"])
            for row in rows:
                writer.writerow([row.label, json.dumps(row.params, sort_keys=True), row.recall, row.ndcg])
        return path


sweep_service = SweepService()
