"""Published reference values for the two-phase interleaved boost converter.

The per-mode totals are given without units and the allocation rows were
produced with a coverage membership that was never published, so the rows
cannot be regenerated from the totals. They are carried for cross-checks.
"""

from .fuzzy import TFN

# per-mode fuzzy totals (mode 2 = both phases healthy)
TOTALS = {
    "parallel": {
        "lambda_mode2": TFN(1.0335, 1.8564, 3.2574),
        "lambda_mode1": TFN(1.6696, 2.9605, 5.1197),
    },
    "standby": {
        "lambda_mode2": TFN(1.1793, 1.4937, 1.8452),
        "lambda_mode1": TFN(2.3718, 3.0043, 3.7112),
    },
}

# MTTF allocation rows, years
ALLOCATION = {
    "parallel": {"lowest": 0.3144, "highest": 10.7, "defuzzified": 4.2871},
    "standby": {"lowest": 0.7954, "highest": 3.404, "defuzzified": 1.8536},
}

DISCREPANCY_NOTE = (
    "The reference MTTF allocation rows are not reproducible from the reference "
    "per-mode totals: the coverage membership and the rate units behind them are "
    "unpublished. Peak values below use crisp coverage 1 and read the totals as "
    "failures per year."
)


def inverted_peak(row) -> float:
    """Peak vertex b recovered from (lowest, highest, defuzzified) via Def = (a+b+c)/3."""
    return 3.0 * row["defuzzified"] - row["lowest"] - row["highest"]
