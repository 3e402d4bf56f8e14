"""Shared fixtures: synthetic streams and schema-exact dataset files.

The dataset fixtures mimic the exact on-disk quirks of the real sources
(semicolon delimiters, decimal commas, trailing separator-only lines,
verbose quoted spreadsheet headers, one CSV per year) at a small size, so
loader and harness behavior is exercised without the real downloads. Tests
that need the real datasets look for them under ``$DRIFTREG_DATA`` (or
``./data``) and skip when absent.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

REAL_DATA_DIR = Path(os.environ.get("DRIFTREG_DATA", Path(__file__).resolve().parent.parent / "data"))


def real_data_available(*datasets: str) -> bool:
    from driftreg.datasets import MANIFEST

    for name in datasets or ("air_quality", "concrete", "protein", "turbine"):
        entry = MANIFEST[name]
        for f in entry["files"]:
            if not (REAL_DATA_DIR / entry["directory"] / f).exists():
                return False
    return True


def require_real_data(*datasets: str) -> Path:
    if not real_data_available(*datasets):
        pytest.skip(
            f"real dataset files not present under {REAL_DATA_DIR} "
            f"(run: driftreg fetch-data --dir {REAL_DATA_DIR})"
        )
    return REAL_DATA_DIR


def linear_stream(
    n_rows: int,
    coefs=(2.5, -1.2),
    intercept: float = 7.0,
    noise: float = 0.5,
    seed: int = 42,
    feature_loc=(10.0, -4.0),
    feature_scale=(3.0, 1.5),
):
    """A stationary linear stream: (X, y) with y = X @ coefs + intercept + noise."""
    rng = np.random.default_rng(seed)
    k = len(coefs)
    X = rng.normal(0, 1, size=(n_rows, k)) * np.asarray(feature_scale) + np.asarray(feature_loc)
    y = X @ np.asarray(coefs) + intercept + rng.normal(0, noise, size=n_rows)
    return X, y


def prefix_shift_stream(n_stream: int = 600, noise: float = 0.3, seed: int = 7):
    """Piecewise-linear stream whose regime change overlaps the labeled prefix.

    The working points start in regime A (y = -2x + 30 on x in [0, 5]) and
    switch to regime B (y = 2x + 5 on x in [10, 15]) at row 30, i.e. while
    labels are still available; the unlabeled remainder is all regime B. The
    two lines do not cross inside regime B's support, so the frozen
    compromise model stays measurably wrong there, while the 60 regime-B
    rows left in the fitting window anchor the first refits. Returns
    (priming_X, priming_y, stream_X, stream_truths).
    """
    rng = np.random.default_rng(seed)
    xa = rng.uniform(0, 5, 30)
    ya = -2.0 * xa + 30.0 + rng.normal(0, noise, 30)
    xb = rng.uniform(10, 15, 90)
    yb = 2.0 * xb + 5.0 + rng.normal(0, noise, 90)
    xs = rng.uniform(10, 15, n_stream)
    ys = 2.0 * xs + 5.0 + rng.normal(0, noise, n_stream)
    X_prime = np.concatenate([xa, xb]).reshape(-1, 1)
    y_prime = np.concatenate([ya, yb])
    return X_prime, y_prime, xs.reshape(-1, 1), ys


def late_shift_stream(n_stream: int = 900, shift_at: int = 500, noise: float = 0.3, seed: int = 11):
    """Stream primed on y = 2x whose x-values shift by +10 after step ``shift_at``.

    The underlying quantity keeps following y = 2x while the observed feature
    gains a +10 offset, so the held-back truth after the shift is
    2 * (x_observed - 10). Returns (priming_X, priming_y, stream_X,
    stream_truths, shift_at).
    """
    rng = np.random.default_rng(seed)
    xp = rng.uniform(0, 5, 120)
    yp = 2.0 * xp + rng.normal(0, noise, 120)
    x_before = rng.uniform(0, 5, shift_at)
    x_after = rng.uniform(0, 5, n_stream - shift_at) + 10.0
    xs = np.concatenate([x_before, x_after])
    truths = np.concatenate([2.0 * x_before, 2.0 * (x_after - 10.0)])
    truths = truths + rng.normal(0, noise, n_stream)
    return xp.reshape(-1, 1), yp, xs.reshape(-1, 1), truths, shift_at


@pytest.fixture(scope="session")
def fixture_data_dir(tmp_path_factory) -> Path:
    root = tmp_path_factory.mktemp("fixture-data")
    _write_air_quality(root / "air_quality")
    _write_concrete(root / "concrete")
    _write_protein(root / "protein")
    _write_turbine(root / "turbine")
    return root


def _comma(v: float) -> str:
    return f"{v:.4f}".replace(".", ",")


AQ_COLUMNS = [
    "Date", "Time", "CO(GT)", "PT08.S1(CO)", "NMHC(GT)", "C6H6(GT)",
    "PT08.S2(NMHC)", "NOx(GT)", "PT08.S3(NOx)", "NO2(GT)", "PT08.S4(NO2)",
    "PT08.S5(O3)", "T", "RH", "AH",
]


def _write_air_quality(directory: Path, n_rows: int = 400) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(360)
    latent = rng.normal(0, 1, size=(n_rows, 3))
    sensors = latent @ rng.normal(0, 1, size=(3, 5)) * 120 + 900 + rng.normal(0, 25, (n_rows, 5))
    temp = 15 + 8 * latent[:, 0] + rng.normal(0, 1, n_rows)
    rh = 45 + 12 * latent[:, 1] + rng.normal(0, 2, n_rows)
    ah = 1.0 + 0.2 * latent[:, 2] + rng.normal(0, 0.05, n_rows)
    co = 2.0 + 0.004 * (sensors[:, 0] - 900) + 0.05 * latent[:, 1] + rng.normal(0, 0.2, n_rows)
    nmhc = 150 + 30 * latent[:, 0] + rng.normal(0, 10, n_rows)
    no2 = 110 + 20 * latent[:, 2] + rng.normal(0, 8, n_rows)
    nox = 200 + 40 * latent[:, 1] + rng.normal(0, 10, n_rows)
    benzene = 9 + 2 * latent[:, 0] + rng.normal(0, 1, n_rows)

    # Sentinel pattern mirrors the real file: missing truths late in the
    # stream, never in the working prefix.
    co_missing = rng.random(n_rows) < 0.10
    co_missing[:150] = False

    lines = [";".join(AQ_COLUMNS) + ";;"]
    for i in range(n_rows):
        row = [
            f"{10 + i % 20:02d}/03/2004",
            f"{i % 24:02d}.00.00",
            "-200" if co_missing[i] else _comma(co[i]),
            _comma(sensors[i, 0]),
            _comma(nmhc[i]),
            _comma(benzene[i]),
            _comma(sensors[i, 1]),
            _comma(nox[i]),
            _comma(sensors[i, 2]),
            _comma(no2[i]),
            _comma(sensors[i, 3]),
            _comma(sensors[i, 4]),
            _comma(temp[i]),
            _comma(rh[i]),
            _comma(ah[i]),
        ]
        lines.append(";".join(row) + ";;")
    lines.extend(";" * (len(AQ_COLUMNS) + 1) for _ in range(3))  # trailing junk rows
    (directory / "AirQualityUCI.csv").write_text("\n".join(lines) + "\n")


CONCRETE_COLUMNS = [
    "Cement (component 1)(kg in a m^3 mixture)",
    "Blast Furnace Slag (component 2)(kg in a m^3 mixture)",
    "Fly Ash (component 3)(kg in a m^3 mixture)",
    "Water  (component 4)(kg in a m^3 mixture)",
    "Superplasticizer (component 5)(kg in a m^3 mixture)",
    "Coarse Aggregate  (component 6)(kg in a m^3 mixture)",
    "Fine Aggregate (component 7)(kg in a m^3 mixture)",
    "Age (day)",
    "Concrete compressive strength(MPa, megapascals) ",
]


def _write_concrete(directory: Path, n_rows: int = 300) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(165)
    cement = rng.uniform(100, 540, n_rows)
    slag = rng.uniform(0, 360, n_rows)
    ash = rng.uniform(0, 200, n_rows)
    water = rng.uniform(120, 250, n_rows)
    plast = rng.uniform(0, 32, n_rows)
    coarse = rng.uniform(800, 1150, n_rows)
    fine = rng.uniform(590, 995, n_rows)
    age = rng.choice([3, 7, 14, 28, 56, 90, 180, 365], n_rows).astype(float)
    strength = (
        0.08 * cement + 0.05 * slag + 0.03 * ash - 0.15 * water
        + 0.4 * plast + 6 * np.log(age) + rng.normal(0, 3, n_rows)
    )
    df = pd.DataFrame(
        dict(zip(CONCRETE_COLUMNS, [cement, slag, ash, water, plast, coarse, fine, age, strength]))
    )
    df.to_csv(directory / "Concrete_Data.csv", index=False)


def _write_protein(directory: Path, n_rows: int = 600) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(265)
    F = rng.normal(0, 1, size=(n_rows, 9)) * [8000, 3000, 0.3, 100, 900000, 150, 4000, 70, 40]
    F += [9000, 3000, 0.3, 100, 1000000, 145, 4000, 70, 35]
    w = np.array([2e-4, -1e-4, 3.0, 5e-3, 1e-6, 0.01, -2e-4, 0.02, 0.03])
    rmsd = np.abs(F @ w - 8 + rng.normal(0, 1.5, n_rows))
    df = pd.DataFrame(F, columns=[f"F{i}" for i in range(1, 10)])
    df.insert(0, "RMSD", rmsd)
    df.to_csv(directory / "CASP.csv", index=False)


TURBINE_COLUMNS = ["AT", "AP", "AH", "AFDP", "GTEP", "TIT", "TAT", "TEY", "CDP", "CO", "NOX"]


def _write_turbine(directory: Path, rows_per_year: int = 80) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    for k, year in enumerate(range(2011, 2016)):
        rng = np.random.default_rng(551 + year)
        at = rng.uniform(0, 35, rows_per_year) + 10 * k  # yearly shift keeps file order testable
        ap = rng.uniform(990, 1035, rows_per_year)
        ah = rng.uniform(25, 100, rows_per_year)
        afdp = rng.uniform(2.3, 7.6, rows_per_year)
        gtep = rng.uniform(17, 40, rows_per_year)
        tit = rng.uniform(1000, 1100, rows_per_year)
        tat = rng.uniform(512, 550, rows_per_year)
        cdp = rng.uniform(9.9, 15.2, rows_per_year)
        tey = 3.2 * gtep + 0.9 * cdp + 0.05 * tit - 0.4 * at + rng.normal(0, 1.5, rows_per_year)
        co = np.abs(12 - 0.009 * tit + 0.15 * afdp - 0.05 * gtep + rng.normal(0, 0.4, rows_per_year))
        nox = 80 - 0.5 * at + 0.1 * ah - 0.3 * gtep + rng.normal(0, 3, rows_per_year)
        df = pd.DataFrame(
            dict(zip(TURBINE_COLUMNS, [at, ap, ah, afdp, gtep, tit, tat, tey, cdp, co, nox]))
        )
        df.to_csv(directory / f"gt_{year}.csv", index=False)
