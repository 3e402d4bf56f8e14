"""Loading and streaming adapters for the four benchmark datasets.

The column mappings, missing-value sentinels, and download locations live in
``data/datasets.json`` (the dataset manifest). Loaders only ever read local
files; ``fetch`` downloads and unpacks the upstream archives into the
expected layout.

Two cleaning modes exist for datasets with a missing-value sentinel:

* ``fidelity`` (default) keeps sentinel-valued cells as ordinary numbers, so
  record counts and stream positions match the raw file exactly;
* ``quality`` drops any row whose used columns contain the sentinel and
  reports how many rows were removed.
"""

from __future__ import annotations

import hashlib
import json
import shutil
import urllib.request
import zipfile
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np
import pandas as pd

from .exceptions import InsufficientData, ParseError, SchemaMismatch

DATASET_NAMES = ("air_quality", "concrete", "protein", "turbine")


def _manifest() -> dict:
    with resources.files("driftreg.data").joinpath("datasets.json").open("r") as fh:
        return json.load(fh)


MANIFEST = _manifest()


def normalize_dataset_name(name: str) -> str:
    token = str(name).strip().lower().replace("-", "_").replace(" ", "_")
    if token not in DATASET_NAMES:
        raise ValueError(f"unknown dataset {name!r}; expected one of {DATASET_NAMES}")
    return token


@dataclass(frozen=True)
class DatasetSpec:
    """Everything needed to load one dataset/target combination."""

    name: str
    files: tuple[str, ...]
    directory: str
    delimiter: str
    decimal: str
    feature_columns: tuple[str, ...]
    target_column: str
    missing_sentinel: float | None
    expected_instances: int | None


def spec_for(dataset: str, target: str) -> DatasetSpec:
    """Resolve a dataset name and target alias (or column name) to a spec."""
    name = normalize_dataset_name(dataset)
    entry = MANIFEST[name]
    targets = entry["targets"]
    target_column = None
    for alias, column in targets.items():
        if target == column or target.lower() == alias.lower():
            target_column = column
            break
    if target_column is None:
        raise ValueError(
            f"unknown target {target!r} for dataset {name!r}; "
            f"expected one of {sorted(set(targets) | set(targets.values()))}"
        )
    if name == "turbine":
        features = tuple(c for c in entry["all_columns"] if c != target_column)
    else:
        features = tuple(entry["features"])
    if target_column in features:
        raise SchemaMismatch(f"target column {target_column!r} overlaps the feature set")
    return DatasetSpec(
        name=name,
        files=tuple(entry["files"]),
        directory=entry["directory"],
        delimiter=entry["delimiter"],
        decimal=entry["decimal"],
        feature_columns=features,
        target_column=target_column,
        missing_sentinel=entry["missing_sentinel"],
        expected_instances=entry.get("expected_instances"),
    )


@dataclass
class LoadedDataset:
    """A cleaned dataset in file order, ready to be turned into a stream."""

    name: str
    target_name: str
    feature_names: tuple[str, ...]
    features: np.ndarray  # (n_records, n_features)
    targets: np.ndarray  # (n_records,)
    missing_sentinel: float | None
    dropped_rows: int = 0
    source_paths: tuple[str, ...] = ()

    def __len__(self) -> int:
        return self.features.shape[0]


class FeatureStream:
    """The unlabeled remainder of a stream: features only, in arrival order."""

    def __init__(self, features: np.ndarray):
        self.features = features

    def __len__(self) -> int:
        return self.features.shape[0]

    def __iter__(self):
        return iter(self.features)

    @property
    def feature_count(self) -> int:
        return self.features.shape[1]


@dataclass
class StreamSplit:
    """Labeled prefix for priming plus the label-free remainder.

    The held-back truths are deliberately kept outside the feature stream:
    the engine consumes ``stream``, and only the final evaluation reads
    ``held_back_truths``.
    """

    priming_features: np.ndarray
    priming_targets: np.ndarray
    stream: FeatureStream
    held_back_truths: np.ndarray


def _read_raw_table(path: Path, delimiter: str) -> pd.DataFrame:
    if not path.exists():
        raise FileNotFoundError(f"dataset file not found: {path}")
    if path.suffix.lower() in (".xls", ".xlsx"):
        try:
            df = pd.read_excel(path, dtype=str)
        except ImportError as exc:
            raise ParseError(
                f"{path.name} is a spreadsheet; install an Excel reader "
                f"(e.g. xlrd) or convert it to CSV first ({exc})"
            )
        return df.astype(str)
    return pd.read_csv(
        path, sep=delimiter, dtype=str, keep_default_na=False, skip_blank_lines=True
    )


def _to_numeric_column(raw: pd.Series, column: str, decimal: str, path: Path) -> np.ndarray:
    cells = raw.str.strip()
    if decimal != ".":
        cells = cells.str.replace(decimal, ".", regex=False)
    values = pd.to_numeric(cells, errors="coerce")
    bad = values.isna()
    if bad.any():
        pos = int(np.flatnonzero(bad.to_numpy())[0])
        raise ParseError(
            f"{path.name}: malformed numeric cell {raw.iloc[pos]!r} "
            f"at data row {pos}, column {column!r}",
            row=pos,
            column=column,
        )
    return values.to_numpy(dtype=np.float64)


def _normalize_concrete_columns(df: pd.DataFrame) -> pd.DataFrame:
    """Map the verbose spreadsheet headers onto short canonical names."""
    keywords = MANIFEST["concrete"]["column_keywords"]
    renames = {}
    for col in df.columns:
        low = col.strip().lower()
        for key, canonical in keywords.items():
            if key in low:
                renames[col] = canonical
                break
    return df.rename(columns=renames)


def load(spec: DatasetSpec, data_dir, mode: str = "fidelity") -> LoadedDataset:
    """Load, clean, and column-select one dataset in file order."""
    if mode not in ("fidelity", "quality"):
        raise ValueError(f"mode must be 'fidelity' or 'quality', got {mode!r}")
    root = Path(data_dir) / spec.directory
    used = list(spec.feature_columns) + [spec.target_column]
    feature_blocks = []
    target_blocks = []
    paths = []
    for fname in spec.files:
        path = root / fname
        if not path.exists() and fname.endswith(".csv"):
            # Accept a not-yet-converted spreadsheet alongside the CSV name.
            alt = path.with_suffix(".xls")
            if alt.exists():
                path = alt
        df = _read_raw_table(path, spec.delimiter)
        if spec.name == "concrete":
            df = _normalize_concrete_columns(df)
        missing_cols = [c for c in used if c not in df.columns]
        if missing_cols:
            raise SchemaMismatch(
                f"{spec.name} ({path.name}): missing expected columns {missing_cols}; "
                f"found {list(df.columns)}"
            )
        # Structurally invalid rows (e.g. trailing separator-only lines)
        # have every used cell empty; a real row with one empty cell is
        # malformed and surfaces below as a numeric parse error.
        table = df[used]
        all_empty = (table.apply(lambda s: s.str.strip()) == "").all(axis=1)
        table = table[~all_empty].reset_index(drop=True)
        columns = {c: _to_numeric_column(table[c], c, spec.decimal, path) for c in used}
        feature_blocks.append(np.column_stack([columns[c] for c in spec.feature_columns]))
        target_blocks.append(columns[spec.target_column])
        paths.append(str(path))

    features = np.vstack(feature_blocks)
    targets = np.concatenate(target_blocks)

    dropped = 0
    if mode == "quality" and spec.missing_sentinel is not None:
        sentinel = spec.missing_sentinel
        keep = np.ones(len(targets), dtype=bool)
        keep &= targets != sentinel
        for j in range(features.shape[1]):
            keep &= features[:, j] != sentinel
        dropped = int((~keep).sum())
        features = features[keep]
        targets = targets[keep]

    return LoadedDataset(
        name=spec.name,
        target_name=spec.target_column,
        feature_names=spec.feature_columns,
        features=features,
        targets=targets,
        missing_sentinel=spec.missing_sentinel,
        dropped_rows=dropped,
        source_paths=tuple(paths),
    )


def make_stream(dataset: LoadedDataset, working_points: int) -> StreamSplit:
    """Split into a labeled prefix and a label-free remainder, preserving order."""
    n = len(dataset)
    if working_points < 1:
        raise ValueError("working_points must be positive")
    if working_points >= n:
        raise InsufficientData(
            f"dataset has {n} records; cannot reserve {working_points} working points"
        )
    return StreamSplit(
        priming_features=dataset.features[:working_points],
        priming_targets=dataset.targets[:working_points],
        stream=FeatureStream(dataset.features[working_points:]),
        held_back_truths=dataset.targets[working_points:],
    )


# -- fetching -------------------------------------------------------------


def fetch(data_dir, datasets=None, record_checksums: bool = True) -> dict:
    """Download, verify, and unpack the upstream archives into ``data_dir``.

    Returns a mapping of dataset name to the sha256 of the downloaded
    archive. When the manifest pins a checksum it is enforced; otherwise the
    observed digest is recorded into ``<data_dir>/checksums.json`` so later
    fetches become reproducible.
    """
    names = [normalize_dataset_name(d) for d in (datasets or DATASET_NAMES)]
    root = Path(data_dir)
    root.mkdir(parents=True, exist_ok=True)
    digests = {}
    for name in names:
        entry = MANIFEST[name]
        target_dir = root / entry["directory"]
        target_dir.mkdir(parents=True, exist_ok=True)
        archive = root / f"{name}.zip"
        print(f"fetching {entry['url']} -> {archive}")
        with urllib.request.urlopen(entry["url"]) as resp, open(archive, "wb") as out:
            shutil.copyfileobj(resp, out)
        digest = hashlib.sha256(archive.read_bytes()).hexdigest()
        digests[name] = digest
        pinned = entry.get("sha256")
        if pinned and pinned != digest:
            raise RuntimeError(
                f"{name}: archive checksum mismatch (expected {pinned}, got {digest})"
            )
        _extract_members(archive, entry, target_dir)
        archive.unlink()
        print(f"  ok: {name} (sha256 {digest[:16]}...)")
    if record_checksums:
        lock = root / "checksums.json"
        existing = json.loads(lock.read_text()) if lock.exists() else {}
        existing.update(digests)
        lock.write_text(json.dumps(existing, indent=2, sort_keys=True) + "\n")
    return digests


def _extract_members(archive: Path, entry: dict, target_dir: Path) -> None:
    wanted = {Path(f).name for f in entry["files"]}
    # The concrete archive ships a spreadsheet; grab it and convert below.
    wanted_stems = {Path(f).stem for f in entry["files"]}
    with zipfile.ZipFile(archive) as zf:
        for member in zf.namelist():
            base = Path(member).name
            if base in wanted or Path(base).stem in wanted_stems:
                with zf.open(member) as src, open(target_dir / base, "wb") as dst:
                    shutil.copyfileobj(src, dst)
    for fname in entry["files"]:
        path = target_dir / fname
        if path.exists():
            continue
        spreadsheet = path.with_suffix(".xls")
        if spreadsheet.exists():
            try:
                pd.read_excel(spreadsheet).to_csv(path, index=False)
                print(f"  converted {spreadsheet.name} -> {path.name}")
            except ImportError:
                print(
                    f"  note: {spreadsheet.name} needs an Excel reader (pip install xlrd) "
                    f"or manual conversion to {path.name}"
                )
