"""Reproduction harness for the published design-study numbers.

Recomputes the optimal-design table and the two error-rate tables for the
reference RC low-pass (R = 7.5 kOhm, C = 4.4 nF, f_samp = 12 kHz) and
compares against the printed values.

The published error-rate tables carry shape-factor labels flipped by
``alpha -> 1.5 - alpha`` relative to the transformation definition used
here (verified numerically: the relabeling reconciles all 24 entries within
print rounding).  The harness therefore checks the relabeled pairing, and
additionally emits a faithful-label comparison that is expected to fail,
documenting the erratum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .design import (
    Channel,
    DesignScenario,
    TypeA,
    TypeB,
    TypeC,
    optimize_alpha,
    tradeoff_alpha,
    mag_error,
    phase_error,
)
from .response import lpf_plant

# reference hardware values
R_OHM = 7.5e3
C_FARAD = 4.4e-9
W_C = 1.0 / (R_OHM * C_FARAD)          # rad/s
F_C = W_C / (2.0 * math.pi)            # Hz, ~4823
F_SAMP = 12_000.0
PERIOD = 1.0 / F_SAMP
T_DELAY = 470e-9                        # ADC + compute + DAC processing delay

# CEC efficiency weighting profile (fraction of f_c, weight)
TYPE_B_WEIGHTS = (
    (0.10, 0.04),
    (0.20, 0.05),
    (0.30, 0.12),
    (0.50, 0.21),
    (0.75, 0.53),
    (1.00, 0.05),
)

# published magnitude errors, keyed (printed alpha label, f as fraction of f_c)
TABLE_MAG_DB = {
    (0.5, 0.75): 3.30, (0.6, 0.75): 3.61, (0.7, 0.75): 3.88,
    (0.8, 0.75): 3.96, (0.9, 0.75): 3.71, (1.0, 0.75): 2.85,
    (0.5, 1.00): 4.22, (0.6, 1.00): 4.95, (0.7, 1.00): 5.89,
    (0.8, 1.00): 7.08, (0.9, 1.00): 8.30, (1.0, 1.00): 8.02,
}

# published phase errors, same keying
TABLE_PHASE_DEG = {
    (0.5, 0.75): 31.25, (0.6, 0.75): 35.04, (0.7, 0.75): 40.23,
    (0.8, 0.75): 47.20, (0.9, 0.75): 55.90, (1.0, 0.75): 65.13,
    (0.5, 1.00): 34.90, (0.6, 1.00): 37.70, (0.7, 1.00): 42.40,
    (0.8, 1.00): 50.90, (0.9, 1.00): 67.41, (1.0, 1.00): 95.45,
}

# published optimal-design results: (alpha, Q) per scenario type and channel
TABLE_DESIGN = {
    ("A", "mag"): (0.5, 0.718), ("A", "tradeoff"): (0.575, 0.895),
    ("A", "phase"): (1.0, 0.480),
    ("B", "mag"): (0.5, 0.698), ("B", "tradeoff"): (0.549, 0.791),
    ("B", "phase"): (1.0, 0.427),
    ("C", "mag"): (0.5, 0.504), ("C", "tradeoff"): (0.593, 0.625),
    ("C", "phase"): (1.0, 0.388),
}

MAG_TOL_DB = 0.02
PHASE_TOL_DEG = 0.05
DESIGN_TOL_A = {"alpha": 0.010, "q": 0.010}   # trade-off row tolerance
DESIGN_TOL_A_BOUNDARY = {"alpha": 1e-5, "q": 0.005}
DESIGN_TOL_BC = {"alpha": 0.02, "q": 0.03}

RELABEL_NOTE = (
    "printed alpha labels correspond to 1.5 - alpha under the faithful "
    "transformation convention"
)


@dataclass
class Entry:
    name: str
    computed: float
    expected: float
    tol: float
    passed: bool
    note: str = ""


@dataclass
class TableReport:
    title: str
    entries: list[Entry] = field(default_factory=list)
    expect_failure: bool = False
    note: str = ""

    @property
    def passed(self) -> bool:
        ok = all(e.passed for e in self.entries)
        return (not ok) if self.expect_failure else ok

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "expect_failure": self.expect_failure,
            "note": self.note,
            "entries": [vars(e) for e in self.entries],
        }


@dataclass
class VerifyReport:
    tables: list[TableReport]

    @property
    def passed(self) -> bool:
        return all(t.passed for t in self.tables)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "tables": [t.to_dict() for t in self.tables]}


def reference_plant():
    return lpf_plant(W_C)


def reference_scenario(kind_name: str) -> DesignScenario:
    """Design scenario for one of the published study types A, B, or C.

    All three share the normalization reference frequency 75% f_c used by
    the published study.
    """
    plant = reference_plant()
    f_ref = 0.75 * F_C
    if kind_name == "A":
        kind = TypeA(f_exp=f_ref)
    elif kind_name == "B":
        kind = TypeB(points=tuple((r * F_C, k, k) for r, k in TYPE_B_WEIGHTS))
    elif kind_name == "C":
        kind = TypeC(f_start=0.10 * F_C, f_end=F_C)
    else:
        raise ValueError(f"unknown scenario type {kind_name!r}")
    return DesignScenario(kind=kind, plant=plant, period=PERIOD, f_ref=f_ref)


def _error_table(table: dict, channel: Channel, relabel: bool) -> list[Entry]:
    plant = reference_plant()
    err = mag_error if channel is Channel.MAGNITUDE_FIRST else phase_error
    tol = MAG_TOL_DB if channel is Channel.MAGNITUDE_FIRST else PHASE_TOL_DEG
    entries = []
    for (label, frac), printed in sorted(table.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        alpha = round(1.5 - label, 6) if relabel else label
        computed = abs(err(plant, PERIOD, frac * F_C, alpha))
        entries.append(Entry(
            name=f"alpha_label={label}, f={int(frac * 100)}%fc (computed at alpha={alpha})",
            computed=round(computed, 4),
            expected=printed,
            tol=tol,
            passed=abs(computed - printed) <= tol,
        ))
    return entries


def magnitude_table_report(relabel: bool = True) -> TableReport:
    return TableReport(
        title="magnitude errors (%s labels)" % ("relabeled" if relabel else "faithful"),
        entries=_error_table(TABLE_MAG_DB, Channel.MAGNITUDE_FIRST, relabel),
        expect_failure=not relabel,
        note=RELABEL_NOTE if relabel else "faithful labels, expected to disagree",
    )


def phase_table_report(relabel: bool = True) -> TableReport:
    return TableReport(
        title="phase errors (%s labels)" % ("relabeled" if relabel else "faithful"),
        entries=_error_table(TABLE_PHASE_DEG, Channel.PHASE_FIRST, relabel),
        expect_failure=not relabel,
        note=RELABEL_NOTE if relabel else "faithful labels, expected to disagree",
    )


def design_table_report(seed: int = 0) -> TableReport:
    report = TableReport(title="optimal design results")
    for kind_name in ("A", "B", "C"):
        scenario = reference_scenario(kind_name)
        for chan_name, result in (
            ("mag", optimize_alpha(scenario, Channel.MAGNITUDE_FIRST, seed=seed)),
            ("tradeoff", tradeoff_alpha(scenario)),
            ("phase", optimize_alpha(scenario, Channel.PHASE_FIRST, seed=seed)),
        ):
            alpha_exp, q_exp = TABLE_DESIGN[(kind_name, chan_name)]
            if kind_name == "A":
                tol = DESIGN_TOL_A if chan_name == "tradeoff" else DESIGN_TOL_A_BOUNDARY
            else:
                tol = DESIGN_TOL_BC
            report.entries.append(Entry(
                name=f"type {kind_name} {chan_name} alpha",
                computed=round(result.alpha_opt, 6),
                expected=alpha_exp,
                tol=tol["alpha"],
                passed=abs(result.alpha_opt - alpha_exp) <= tol["alpha"],
            ))
            report.entries.append(Entry(
                name=f"type {kind_name} {chan_name} Q",
                computed=round(result.q_value, 6),
                expected=q_exp,
                tol=tol["q"],
                passed=abs(result.q_value - q_exp) <= tol["q"],
            ))
    return report


def sampling_study(alpha: float = 0.5, f_samps: tuple[float, ...] = (12e3, 24e3, 48e3)):
    """Magnitude and phase error at f_c as the sampling frequency rises."""
    plant = reference_plant()
    rows = []
    for fs in f_samps:
        period = 1.0 / fs
        rows.append({
            "f_samp": fs,
            "mag_err_db": abs(mag_error(plant, period, F_C, alpha)),
            "phase_err_deg": abs(phase_error(plant, period, F_C, alpha)),
        })
    return rows


def sampling_study_report() -> TableReport:
    rows = sampling_study()
    by_fs = {r["f_samp"]: r for r in rows}
    report = TableReport(title="sampling-frequency study (Tustin)")
    m12 = by_fs[12e3]["mag_err_db"]
    report.entries.append(Entry(
        name="magnitude error at f_c, 12 kHz", computed=round(m12, 4),
        expected=8.0, tol=0.1, passed=abs(m12 - 8.0) <= 0.1,
    ))
    m48 = by_fs[48e3]["mag_err_db"]
    report.entries.append(Entry(
        name="magnitude error at f_c, 48 kHz (< 0.25 dB target)",
        computed=round(m48, 4), expected=0.25, tol=0.0, passed=m48 < 0.25,
        note=(
            "the ZOH-inclusive theoretical value is 0.295 dB; the published "
            "0.19 dB is a hardware measurement, so the 0.25 dB target is not "
            "attainable by faithful desk-scale computation"
        ),
    ))
    p48 = by_fs[48e3]["phase_err_deg"]
    report.entries.append(Entry(
        name="phase error at f_c, 48 kHz (< 20 deg target)",
        computed=round(p48, 4), expected=20.0, tol=0.0, passed=p48 < 20.0,
    ))
    return report


def verify_tables(seed: int = 0) -> VerifyReport:
    """Full comparison against the published tables."""
    return VerifyReport(tables=[
        design_table_report(seed=seed),
        magnitude_table_report(relabel=True),
        magnitude_table_report(relabel=False),
        phase_table_report(relabel=True),
        phase_table_report(relabel=False),
        sampling_study_report(),
    ])
