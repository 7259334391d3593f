"""Embedded critical-value tables.

* Pesaran, Shin & Smith (2001) Table CI(i)-(v): asymptotic F bounds for the
  levels-relationship test, k = 0..10 regressors, 10/5/2.5/1 percent.
* MacKinnon (1991) response surfaces for Dickey-Fuller t statistics
  (one variable), cv(T) = b_inf + b1/T + b2/T^2.
* CUSUM-of-squares band half-widths c0(m) at 5 percent, m = number of
  recursive residuals.  Produced by ``tools/cusumsq_table.py`` (200k draws
  per row of the exact statistic); beyond m = 400 the Brownian-bridge
  scaling c0 ~ 1/sqrt(m) is applied.
"""

from __future__ import annotations

import numpy as np

PSS_LEVELS = (0.10, 0.05, 0.025, 0.01)

# rows k = 0..10; columns I0 I1 at 10%, 5%, 2.5%, 1%
_PSS_RAW = {
    "I": """
3.00 3.00 4.20 4.20 5.47 5.47 7.17 7.17
2.44 3.28 3.15 4.11 3.88 4.92 4.81 6.02
2.17 3.19 2.72 3.83 3.22 4.50 3.88 5.30
2.01 3.10 2.45 3.63 2.87 4.16 3.42 4.84
1.90 3.01 2.26 3.48 2.62 3.90 3.07 4.44
1.81 2.93 2.14 3.34 2.44 3.71 2.82 4.21
1.75 2.87 2.04 3.24 2.32 3.59 2.66 4.05
1.70 2.83 1.97 3.18 2.22 3.49 2.54 3.91
1.66 2.79 1.91 3.11 2.15 3.40 2.45 3.79
1.63 2.75 1.86 3.05 2.08 3.33 2.34 3.68
1.60 2.72 1.82 2.99 2.02 3.27 2.26 3.60
""",
    "II": """
3.80 3.80 4.60 4.60 5.39 5.39 6.44 6.44
3.02 3.51 3.62 4.16 4.18 4.79 4.94 5.58
2.63 3.35 3.10 3.87 3.55 4.38 4.13 5.00
2.37 3.20 2.79 3.67 3.15 4.08 3.65 4.66
2.20 3.09 2.56 3.49 2.88 3.87 3.29 4.37
2.08 3.00 2.39 3.38 2.70 3.73 3.06 4.15
1.99 2.94 2.27 3.28 2.55 3.61 2.88 3.99
1.92 2.89 2.17 3.21 2.43 3.51 2.73 3.90
1.85 2.85 2.11 3.15 2.33 3.42 2.62 3.77
1.80 2.80 2.04 3.08 2.24 3.35 2.50 3.68
1.76 2.77 1.98 3.04 2.18 3.28 2.41 3.61
""",
    "III": """
6.58 6.58 8.21 8.21 9.80 9.80 11.79 11.79
4.04 4.78 4.94 5.73 5.77 6.68 6.84 7.84
3.17 4.14 3.79 4.85 4.41 5.52 5.15 6.36
2.72 3.77 3.23 4.35 3.69 4.89 4.29 5.61
2.45 3.52 2.86 4.01 3.25 4.49 3.74 5.06
2.26 3.35 2.62 3.79 2.96 4.18 3.41 4.68
2.12 3.23 2.45 3.61 2.75 3.99 3.15 4.43
2.03 3.13 2.32 3.50 2.60 3.84 2.96 4.26
1.95 3.06 2.22 3.39 2.48 3.70 2.79 4.10
1.88 2.99 2.14 3.30 2.37 3.60 2.65 3.97
1.83 2.94 2.06 3.24 2.28 3.50 2.54 3.86
""",
    "IV": """
5.37 5.37 6.29 6.29 7.14 7.14 8.26 8.26
4.05 4.49 4.68 5.15 5.30 5.83 6.10 6.73
3.38 4.02 3.88 4.61 4.37 5.16 4.99 5.85
2.97 3.74 3.38 4.23 3.80 4.68 4.30 5.23
2.68 3.53 3.05 3.97 3.40 4.36 3.81 4.92
2.49 3.38 2.81 3.76 3.11 4.13 3.50 4.63
2.33 3.25 2.63 3.62 2.90 3.94 3.27 4.39
2.22 3.17 2.50 3.50 2.76 3.81 3.07 4.23
2.13 3.09 2.38 3.41 2.62 3.70 2.93 4.06
2.05 3.02 2.30 3.33 2.52 3.60 2.79 3.93
1.98 2.97 2.21 3.25 2.42 3.52 2.68 3.84
""",
    "V": """
9.81 9.81 11.64 11.64 13.36 13.36 15.73 15.73
5.59 6.26 6.56 7.30 7.46 8.27 8.74 9.63
4.19 5.06 4.87 5.85 5.49 6.59 6.34 7.52
3.47 4.45 4.01 5.07 4.52 5.62 5.17 6.36
3.03 4.06 3.47 4.57 3.89 5.07 4.40 5.72
2.75 3.79 3.12 4.25 3.47 4.67 3.93 5.23
2.53 3.59 2.87 4.00 3.19 4.38 3.60 4.90
2.38 3.45 2.69 3.83 2.98 4.16 3.34 4.63
2.26 3.34 2.55 3.68 2.82 4.02 3.15 4.43
2.16 3.24 2.43 3.56 2.67 3.87 2.97 4.24
2.07 3.16 2.33 3.46 2.56 3.76 2.84 4.10
""",
}


def _parse_pss(raw: str) -> dict[int, dict[float, tuple[float, float]]]:
    out: dict[int, dict[float, tuple[float, float]]] = {}
    for k, line in enumerate(raw.strip().splitlines()):
        v = [float(x) for x in line.split()]
        out[k] = {lvl: (v[2 * i], v[2 * i + 1]) for i, lvl in enumerate(PSS_LEVELS)}
    return out


PSS_TABLE: dict[str, dict[int, dict[float, tuple[float, float]]]] = {
    case: _parse_pss(raw) for case, raw in _PSS_RAW.items()
}

DF_LEVELS = (0.01, 0.05, 0.10)

MACKINNON_1991: dict[str, dict[float, tuple[float, float, float]]] = {
    "constant": {
        0.01: (-3.4336, -5.999, -29.25),
        0.05: (-2.8621, -2.738, -8.36),
        0.10: (-2.5671, -1.438, -4.48),
    },
    "constant_trend": {
        0.01: (-3.9638, -8.353, -47.44),
        0.05: (-3.4126, -4.039, -17.83),
        0.10: (-3.1279, -2.418, -7.58),
    },
}

_CUSUMSQ_C0 = {
    2: 0.4985,
    3: 0.6172,
    4: 0.6019,
    5: 0.5709,
    6: 0.5527,
    7: 0.5282,
    8: 0.5081,
    9: 0.4913,
    10: 0.4730,
    11: 0.4590,
    12: 0.4455,
    13: 0.4329,
    14: 0.4219,
    15: 0.4105,
    16: 0.4005,
    17: 0.3911,
    18: 0.3824,
    19: 0.3744,
    20: 0.3673,
    21: 0.3590,
    22: 0.3525,
    23: 0.3474,
    24: 0.3410,
    25: 0.3355,
    26: 0.3291,
    27: 0.3240,
    28: 0.3196,
    29: 0.3146,
    30: 0.3101,
    31: 0.3056,
    32: 0.3016,
    33: 0.2987,
    34: 0.2947,
    35: 0.2903,
    36: 0.2868,
    37: 0.2839,
    38: 0.2808,
    39: 0.2768,
    40: 0.2738,
    41: 0.2711,
    42: 0.2682,
    43: 0.2652,
    44: 0.2626,
    45: 0.2603,
    46: 0.2571,
    47: 0.2549,
    48: 0.2528,
    49: 0.2509,
    50: 0.2476,
    51: 0.2459,
    52: 0.2437,
    53: 0.2418,
    54: 0.2399,
    55: 0.2370,
    56: 0.2354,
    57: 0.2340,
    58: 0.2323,
    59: 0.2300,
    60: 0.2282,
    70: 0.2119,
    80: 0.2003,
    90: 0.1898,
    100: 0.1806,
    120: 0.1658,
    150: 0.1491,
    200: 0.1305,
    300: 0.1073,
    400: 0.0936,
}
CUSUMSQ_M = np.array(sorted(_CUSUMSQ_C0), dtype=float)
CUSUMSQ_C0 = np.array([_CUSUMSQ_C0[m] for m in sorted(_CUSUMSQ_C0)])

CUSUM_A = {0.01: 1.143, 0.05: 0.948, 0.10: 0.850}


def cusumsq_c0(m: int) -> float:
    """5% half-width of the CUSUM-of-squares band for m recursive residuals."""
    if m < CUSUMSQ_M[0]:
        raise ValueError(f"need at least {int(CUSUMSQ_M[0])} recursive residuals")
    if m > CUSUMSQ_M[-1]:
        return float(CUSUMSQ_C0[-1] * np.sqrt(CUSUMSQ_M[-1] / m))
    return float(np.interp(m, CUSUMSQ_M, CUSUMSQ_C0))
