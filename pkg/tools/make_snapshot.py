"""Generate the bundled synthetic snapshot (2000-2021).

The observed series are not redistributable offline, so the bundled file is a
seeded synthetic stand-in with the same schema and descriptive moments:

* ECON, SOCI, POLI, GDP, OPEN, CONSMP: drifting random walks, affinely
  rescaled to the published mean and standard deviation;
* GLOB: the mean of ECON, SOCI and POLI;
* ACCOU: stationary AR(1) (it takes negative values, so it is never logged);
* SDI: generated in logs from an error-correction process whose long-run and
  short-run coefficients are those reported for the GLOB model, with the
  intercept chosen so the equilibrium path averages ln(68.55).

Run ``python tools/make_snapshot.py`` from the repository root to rewrite
``src/ardlkit/data/snapshot.csv`` and ``provenance.json``.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

SEED = 20002021
YEARS = np.arange(2000, 2022)
OUT = Path(__file__).resolve().parents[1] / "src" / "ardlkit" / "data"

# mean, standard deviation, drift sign
MOMENTS = {
    "ECON": (53.76, 2.18, 1.0),
    "SOCI": (60.09, 7.08, 1.0),
    "POLI": (90.27, 2.02, 1.0),
    "GDP": (9308.0, 2203.0, 1.0),
    "OPEN": (52.18, 6.74, 1.0),
    "CONSMP": (74.93, 2.52, -1.0),
}
ACCOU = (-3.50, 2.45, 0.5)

SHORT_RUN = {"GLOB": 0.339, "GDP": 0.201, "OPEN": 0.038, "ACCOU": -0.004, "CONSMP": 0.250}
LONG_RUN = {"GLOB": 0.196, "GDP": 0.047, "OPEN": 0.078, "ACCOU": -0.004, "CONSMP": 0.239}
ADJUSTMENT = -0.438
SDI_MEAN = 68.55
NOISE_SD = 0.003


def _rescale(x: np.ndarray, mean: float, sd: float) -> np.ndarray:
    return mean + sd * (x - x.mean()) / x.std(ddof=1)


def generate(seed: int = SEED) -> dict[str, np.ndarray]:
    rng = np.random.default_rng(seed)
    T = YEARS.size
    data: dict[str, np.ndarray] = {}
    for name, (mean, sd, sign) in MOMENTS.items():
        walk = np.cumsum(sign * 0.6 + rng.standard_normal(T))
        data[name] = _rescale(walk, mean, sd)
    data["GLOB"] = (data["ECON"] + data["SOCI"] + data["POLI"]) / 3.0
    mean, sd, rho = ACCOU
    a = np.empty(T)
    a[0] = rng.standard_normal() / np.sqrt(1 - rho**2)
    for t in range(1, T):
        a[t] = rho * a[t - 1] + rng.standard_normal()
    data["ACCOU"] = _rescale(a, mean, sd)

    levels = {n: (data[n] if n == "ACCOU" else np.log(data[n])) for n in LONG_RUN}
    equilibrium = sum(LONG_RUN[n] * levels[n] for n in LONG_RUN)
    intercept = np.log(SDI_MEAN) - equilibrium.mean()
    target = intercept + equilibrium
    y = np.empty(T)
    y[0] = target[0]
    for t in range(1, T):
        dy = sum(SHORT_RUN[n] * (levels[n][t] - levels[n][t - 1]) for n in SHORT_RUN)
        dy += ADJUSTMENT * (y[t - 1] - target[t - 1]) + NOISE_SD * rng.standard_normal()
        y[t] = y[t - 1] + dy
    data["SDI"] = np.exp(y)
    return data


COLUMNS = ("SDI", "ECON", "SOCI", "POLI", "GLOB", "GDP", "OPEN", "ACCOU", "CONSMP")
DECIMALS = {"GDP": 2}


def main() -> None:
    data = generate()
    OUT.mkdir(parents=True, exist_ok=True)
    with open(OUT / "snapshot.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("year",) + COLUMNS)
        for i, year in enumerate(YEARS):
            w.writerow([int(year)] + [f"{data[c][i]:.{DECIMALS.get(c, 4)}f}" for c in COLUMNS])
    provenance = {
        "vintage": "synthetic",
        "generator": "tools/make_snapshot.py",
        "seed": SEED,
        "years": [int(YEARS[0]), int(YEARS[-1])],
        "note": (
            "Seeded synthetic stand-in with the published descriptive moments. "
            "SDI, KOF and World Bank series are revised over time and were not "
            "retrievable offline; replication numbers from this file are not "
            "comparable to any published vintage."
        ),
        "variables": {
            "SDI": {"source": "Sustainable Development Report country profile (synthetic stand-in)"},
            "ECON": {"source": "KOF Globalisation Index, economic (synthetic stand-in)"},
            "SOCI": {"source": "KOF Globalisation Index, social (synthetic stand-in)"},
            "POLI": {"source": "KOF Globalisation Index, political (synthetic stand-in)"},
            "GLOB": {"source": "KOF Globalisation Index, overall (synthetic stand-in)"},
            "GDP": {"source": "World Bank WDI, GDP per capita constant 2015 USD (synthetic stand-in)"},
            "OPEN": {"source": "World Bank WDI, trade % of GDP (synthetic stand-in)"},
            "ACCOU": {"source": "World Bank WDI, current account balance % of GDP (synthetic stand-in)"},
            "CONSMP": {"source": "World Bank WDI, final consumption expenditure % of GDP (synthetic stand-in)"},
        },
        "retrieved": None,
    }
    with open(OUT / "provenance.json", "w", encoding="utf-8") as fh:
        json.dump(provenance, fh, indent=2, sort_keys=True)
        fh.write("\n")


if __name__ == "__main__":
    main()
