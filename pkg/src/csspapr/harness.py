"""
Seeded Monte Carlo estimation of PAPR CCDFs for CSS (and PTS) selection.

One experiment fixes the partition and the SV collection, then runs
``trials`` independent OFDM symbols. Trial ``t`` draws its 16-QAM symbols
from a stream derived from ``(master_seed, t)``; trials are processed in
fixed-size chunks whose boundaries do not depend on the worker count, so
the output is bit-for-bit identical for any number of workers.
"""
from __future__ import annotations

import dataclasses
import io
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .css import SvCollection, default_pts_rotations, make_candidate, make_candidates, pts_candidates
from .exceptions import ConfigurationError
from .modem import map_16qam_indices, trial_rng
from .partition import PARTITION_KINDS, PartitionPattern, make_pattern, split
from .spectral import is_power_of_two, mean_power, oversampled_idft, papr_db
from .svsets import PAPER_COLLECTIONS, parse_sv_file

__all__ = [
    "SCHEMES",
    "SimConfig",
    "CcdfTable",
    "threshold_grid",
    "run_trial",
    "run_trials",
    "run_experiment",
    "ccdf",
    "interpolate_papr_at",
    "analytic_ccdf",
    "analytic_threshold_db",
    "load_config",
    "parse_config",
    "format_ccdf_csv",
    "write_ccdf_csv",
    "read_ccdf_csv",
]

SCHEMES = ("css", "pts", "none")
ENERGY_TOL = 1e-9
ENERGY_CHECK_EVERY = 100  # 1% of trials
MIN_EXCEEDANCES = 100


@dataclass
class SimConfig:
    """
    Parameters of one CCDF experiment.

    ``sv_collection`` may be left as None when ``sv_preset`` names one of
    the reference collections ("solid" or "dotted" for the configured
    partition) or when ``u_count == 1`` (identity only).
    """

    n: int = 128
    v_count: int = 4
    u_count: int = 4
    partition_kind: str = "random"
    partition_seed: int = 0
    sv_collection: SvCollection | None = None
    sv_preset: str | None = None
    trials: int = 100_000
    master_seed: int = 0
    oversample: int = 1
    scheme: str = "css"
    pts_seed: int = 0
    threshold_start: float = 4.0
    threshold_stop: float = 13.0
    threshold_step: float = 0.1
    ccdf_depth: float = 1e-3
    chunk_size: int = 1000

    def __post_init__(self):
        if self.partition_kind not in PARTITION_KINDS + ("msequence",):
            raise ConfigurationError(f"unknown partition kind {self.partition_kind!r}")
        if self.scheme not in SCHEMES:
            raise ConfigurationError(f"unknown scheme {self.scheme!r}")
        if not (is_power_of_two(self.n) and is_power_of_two(self.v_count) and self.v_count <= self.n):
            raise ConfigurationError(f"n={self.n}, V={self.v_count} must be powers of two with V <= n")
        if self.trials < 1 or self.chunk_size < 1:
            raise ConfigurationError("trials and chunk_size must be positive")
        if self.u_count < 1:
            raise ConfigurationError("u_count must be positive")
        if not is_power_of_two(self.oversample):
            raise ConfigurationError("oversample must be a power of two")
        if self.threshold_step <= 0 or self.threshold_stop < self.threshold_start:
            raise ConfigurationError("threshold grid must be ascending with positive step")
        if self.sv_collection is None and self.sv_preset is not None:
            key = (self.partition_kind, self.sv_preset)
            if key not in PAPER_COLLECTIONS:
                raise ConfigurationError(f"no reference collection {key}")
            self.sv_collection = SvCollection.from_lists(PAPER_COLLECTIONS[key], self.n)
        if self.scheme == "css":
            if self.sv_collection is None:
                if self.u_count != 1:
                    raise ConfigurationError("css scheme needs sv_collection or sv_preset when U > 1")
                self.sv_collection = SvCollection(np.zeros((1, self.v_count)), self.n, self.v_count)
            c = self.sv_collection
            if (c.n, c.v_count, c.u_count) != (self.n, self.v_count, self.u_count):
                raise ConfigurationError(
                    f"SV collection is (n={c.n}, V={c.v_count}, U={c.u_count}), "
                    f"config is (n={self.n}, V={self.v_count}, U={self.u_count})"
                )

    def replace(self, **changes) -> "SimConfig":
        return dataclasses.replace(self, **changes)

    def pattern(self) -> PartitionPattern:
        return make_pattern(self.partition_kind, self.n, self.v_count, self.partition_seed)


@dataclass
class CcdfTable:
    thresholds_db: np.ndarray
    prob_original: np.ndarray
    prob_selected: np.ndarray
    trials: int
    metadata: dict[str, str] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    papr_original: np.ndarray | None = field(default=None, repr=False)
    papr_selected: np.ndarray | None = field(default=None, repr=False)

    def column(self, name: str) -> np.ndarray:
        if name == "original":
            return self.prob_original
        if name == "selected":
            return self.prob_selected
        raise ValueError(f"unknown column {name!r}; use 'original' or 'selected'")


def threshold_grid(start: float = 4.0, stop: float = 13.0, step: float = 0.1) -> np.ndarray:
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return np.round(start + step * np.arange(count), 10)


def ccdf(paprs_db, thresholds_db) -> np.ndarray:
    """Fraction of ``paprs_db`` strictly above each threshold."""
    p = np.sort(np.asarray(paprs_db, dtype=float))
    above = p.size - np.searchsorted(p, np.asarray(thresholds_db, dtype=float), side="right")
    return above / p.size


def analytic_ccdf(threshold_db, n: int) -> np.ndarray:
    """``1 - (1 - exp(-gamma))^N``, the i.i.d. Gaussian-sample approximation."""
    gamma = 10.0 ** (np.asarray(threshold_db, dtype=float) / 10.0)
    return -np.expm1(n * np.log1p(-np.exp(-gamma)))


def analytic_threshold_db(probability: float, n: int) -> float:
    """Threshold where :func:`analytic_ccdf` equals ``probability``."""
    gamma = -math.log(-math.expm1(math.log1p(-probability) / n))
    return 10.0 * math.log10(gamma)


class _Prepared:
    """Per-experiment state shared by all trials (picklable)."""

    def __init__(self, config: SimConfig):
        self.config = config
        self.pattern = config.pattern()
        L = config.oversample
        if config.scheme == "css":
            self.sets = (config.sv_collection.sets * L) % (config.n * L)
        elif config.scheme == "pts":
            self.rotations = default_pts_rotations(config.u_count, config.v_count, config.pts_seed)

    def symbols(self, start: int, stop: int) -> np.ndarray:
        n = self.config.n
        idx = np.empty((stop - start, n), dtype=np.uint8)
        for row, t in enumerate(range(start, stop)):
            idx[row] = trial_rng(self.config.master_seed, t).integers(0, 16, size=n, dtype=np.uint8)
        return map_16qam_indices(idx)

    def run(self, start: int, stop: int) -> tuple[np.ndarray, np.ndarray, float, int]:
        cfg = self.config
        X = self.symbols(start, stop)
        x_sub = oversampled_idft(split(X, self.pattern), cfg.oversample)
        if cfg.scheme == "pts":
            original = pts_candidates(x_sub, np.ones((1, cfg.v_count)))[..., 0, :]
        else:
            original = make_candidate(x_sub, np.zeros(cfg.v_count, dtype=np.int64))
        ref = mean_power(original)
        p_orig = papr_db(original, ref)
        if cfg.scheme == "none":
            return p_orig, p_orig.copy(), 0.0, 0
        if cfg.scheme == "css":
            cands = make_candidates(x_sub, self.sets)
        else:
            cands = pts_candidates(x_sub, self.rotations)
        paprs = papr_db(cands, ref[:, None])
        best = np.argmin(paprs, axis=1)
        p_sel = paprs[np.arange(len(best)), best]

        # energy spot check on every trial index divisible by ENERGY_CHECK_EVERY
        rows = np.flatnonzero((np.arange(start, stop) % ENERGY_CHECK_EVERY) == 0)
        dev = 0.0
        if rows.size:
            e_sel = np.sum(np.abs(cands[rows, best[rows]]) ** 2, axis=-1)
            e_orig = np.sum(np.abs(original[rows]) ** 2, axis=-1)
            dev = float(np.max(np.abs(e_sel - e_orig)))
        return p_orig, p_sel, dev, int(rows.size)


def _run_chunk(args):
    prepared, start, stop = args
    return prepared.run(start, stop)


def _chunks(trials: int, size: int) -> list[tuple[int, int]]:
    return [(s, min(s + size, trials)) for s in range(0, trials, size)]


def run_trials(config: SimConfig, indices: Iterable[int] | None = None, workers: int = 1):
    """
    PAPR of the original and the selected signal for every trial.

    Returns ``(papr_original, papr_selected, energy_deviation, energy_checks)``
    with the two PAPR arrays ordered by trial index.
    """
    prepared = _Prepared(config)
    if indices is not None:
        indices = list(indices)
        parts = [prepared.run(t, t + 1) for t in indices]
    else:
        jobs = [(prepared, s, e) for s, e in _chunks(config.trials, config.chunk_size)]
        if workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(_run_chunk, jobs))
        else:
            parts = [_run_chunk(job) for job in jobs]
    p_orig = np.concatenate([p[0] for p in parts])
    p_sel = np.concatenate([p[1] for p in parts])
    dev = max((p[2] for p in parts), default=0.0)
    checks = sum(p[3] for p in parts)
    return p_orig, p_sel, dev, checks


def run_trial(config: SimConfig, trial_index: int) -> tuple[float, float]:
    """``(papr_original, papr_selected)`` in dB for a single trial."""
    p_orig, p_sel, _, _ = run_trials(config, [trial_index])
    return float(p_orig[0]), float(p_sel[0])


def run_experiment(config: SimConfig, workers: int = 1, keep_paprs: bool = False) -> CcdfTable:
    """Run all trials of ``config`` and tabulate both CCDFs."""
    p_orig, p_sel, dev, checks = run_trials(config, workers=workers)
    if dev > ENERGY_TOL:
        raise RuntimeError(f"candidate energy deviates from original by {dev:.3e}")
    grid = threshold_grid(config.threshold_start, config.threshold_stop, config.threshold_step)
    table = CcdfTable(
        thresholds_db=grid,
        prob_original=ccdf(p_orig, grid),
        prob_selected=ccdf(p_sel, grid),
        trials=config.trials,
        metadata=_metadata(config, checks, dev),
    )
    if config.trials * config.ccdf_depth < MIN_EXCEEDANCES:
        msg = (
            f"{config.trials} trials give about {config.trials * config.ccdf_depth:g} exceedances "
            f"at CCDF {config.ccdf_depth:g}; estimates at that depth are unreliable"
        )
        table.warnings.append(msg)
        warnings.warn(msg, stacklevel=2)
    if keep_paprs:
        table.papr_original, table.papr_selected = p_orig, p_sel
    return table


def _metadata(config: SimConfig, checks: int, dev: float) -> dict[str, str]:
    from . import __version__
    from .css import side_info_bits

    meta = {"csspapr_version": __version__}
    for f in dataclasses.fields(config):
        if f.name == "sv_collection":
            continue
        meta[f.name] = str(getattr(config, f.name))
    if config.scheme == "css":
        meta["sv_sets"] = ";".join(",".join(map(str, s)) for s in config.sv_collection.tolist())
    meta["side_info_bits"] = str(side_info_bits(config.u_count))
    meta["energy_checks"] = str(checks)
    meta["energy_max_deviation"] = f"{dev:.3e}"
    return meta


def interpolate_papr_at(table: CcdfTable, probability: float, column: str = "selected") -> float:
    """
    Threshold (dB) at which the CCDF in ``column`` falls to ``probability``.

    Interpolates linearly in ``log10(probability)`` between the two grid
    points that bracket the crossing.
    """
    t = np.asarray(table.thresholds_db, dtype=float)
    p = np.asarray(table.column(column), dtype=float)
    positive = p[p > 0]
    if positive.size == 0 or not (positive.min() <= probability <= p.max()):
        lo = positive.min() if positive.size else 0.0
        raise ValueError(f"probability {probability:g} outside observed range [{lo:g}, {p.max():g}]")
    i = int(np.argmax(p <= probability))
    if p[i] == probability or i == 0:
        return float(t[i])
    lp0, lp1 = math.log10(p[i - 1]), math.log10(p[i])
    if lp0 == lp1:
        return float(t[i])
    frac = (math.log10(probability) - lp0) / (lp1 - lp0)
    return float(t[i - 1] + frac * (t[i] - t[i - 1]))


# -- persistence -------------------------------------------------------------

CSV_COLUMNS = ("threshold_db", "ccdf_original", "ccdf_selected", "trials")


def format_ccdf_csv(table: CcdfTable) -> str:
    buf = io.StringIO()
    for key, value in table.metadata.items():
        buf.write(f"# {key}={value}\n")
    for msg in table.warnings:
        buf.write(f"# warning={msg}\n")
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for t, po, ps in zip(table.thresholds_db, table.prob_original, table.prob_selected):
        buf.write(f"{t:.4f},{po:.10g},{ps:.10g},{table.trials}\n")
    return buf.getvalue()


def write_ccdf_csv(table: CcdfTable, path) -> None:
    Path(path).write_text(format_ccdf_csv(table))


def read_ccdf_csv(path) -> CcdfTable:
    meta: dict[str, str] = {}
    warns: list[str] = []
    rows = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            if key == "warning":
                warns.append(value)
            else:
                meta[key] = value
        elif line and not line.startswith(CSV_COLUMNS[0]):
            rows.append([float(f) for f in line.split(",")])
    arr = np.array(rows)
    return CcdfTable(arr[:, 0], arr[:, 1], arr[:, 2], int(arr[0, 3]), meta, warns)


# -- configuration files -----------------------------------------------------

_INT_FIELDS = {"n", "v_count", "u_count", "partition_seed", "trials", "master_seed",
               "oversample", "pts_seed", "chunk_size"}
_FLOAT_FIELDS = {"threshold_start", "threshold_stop", "threshold_step", "ccdf_depth"}
_ALIASES = {"v": "v_count", "u": "u_count", "partition": "partition_kind", "seed": "master_seed"}


def _coerce(values: dict[str, str], base_dir: Path | None = None) -> dict:
    out: dict = {}
    sv_text = None
    for raw_key, raw in values.items():
        key = _ALIASES.get(raw_key.replace("-", "_"), raw_key.replace("-", "_"))
        raw = str(raw).strip()
        if key in _INT_FIELDS:
            out[key] = int(raw)
        elif key in _FLOAT_FIELDS:
            out[key] = float(raw)
        elif key in ("partition_kind", "scheme", "sv_preset"):
            out[key] = raw
        elif key == "sv_sets":
            sv_text = raw
        elif key == "sv_file":
            path = Path(raw)
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            out["sv_collection"] = parse_sv_file(path.read_text())
        else:
            raise ConfigurationError(f"unknown configuration key {raw_key!r}")
    if sv_text is not None:
        sets = [[int(t) for t in s.split(",")] for s in sv_text.split(";") if s.strip()]
        out["sv_collection"] = SvCollection.from_lists(sets, out.get("n", SimConfig.n))
    return out


def parse_config(text: str, overrides: dict[str, str] | None = None, base_dir=None) -> SimConfig:
    """
    Build a :class:`SimConfig` from ``key = value`` lines.

    Keys are the SimConfig field names (``v``, ``u``, ``partition`` and
    ``seed`` are accepted as short forms). SV sets are given either as
    ``sv_sets = 0,0,0,0; 0,8,16,24; ...``, as ``sv_file = <path>`` or as
    ``sv_preset = solid|dotted``. ``overrides`` win over the file.
    """
    values: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigurationError(f"line {lineno}: expected key=value, got {line!r}")
        values[key.strip()] = value.strip()
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        return SimConfig(**_coerce(values, Path(base_dir) if base_dir else None))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(str(exc)) from exc


def load_config(path, overrides: dict[str, str] | None = None) -> SimConfig:
    path = Path(path)
    return parse_config(path.read_text(), overrides, base_dir=path.parent)
