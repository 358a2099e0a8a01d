"""Matplotlib figure rendering for the CLI report paths.

Figures are written straight to files; no interactive backend is required.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_bode_figure(rows: list[dict], path: str, title: str = "") -> None:
    """Magnitude/phase plot of analog vs discrete response rows."""
    freqs = [r["freq_hz"] for r in rows]
    fig, (ax_mag, ax_ph) = plt.subplots(2, 1, sharex=True, figsize=(8, 6))
    ax_mag.semilogx(freqs, [r["mag_db_analog"] for r in rows], label="analog")
    ax_mag.semilogx(freqs, [r["mag_db_discrete"] for r in rows], "--", label="discrete")
    ax_mag.set_ylabel("magnitude [dB]")
    ax_mag.legend()
    ax_mag.grid(True, which="both", alpha=0.3)
    ax_ph.semilogx(freqs, [r["phase_deg_analog"] for r in rows], label="analog")
    ax_ph.semilogx(freqs, [r["phase_deg_discrete"] for r in rows], "--", label="discrete")
    ax_ph.set_ylabel("phase [deg]")
    ax_ph.set_xlabel("frequency [Hz]")
    ax_ph.grid(True, which="both", alpha=0.3)
    if title:
        ax_mag.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_design_figure(alphas, q_mag, q_phase, result, path: str,
                         title: str = "") -> None:
    """Normalized objective curves with the selected optimum marked."""
    fig, ax = plt.subplots(figsize=(7, 5))
    ax.plot(alphas, q_mag, label="normalized magnitude error")
    ax.plot(alphas, q_phase, label="normalized phase error")
    ax.axvline(result.alpha_opt, color="k", ls=":", alpha=0.6)
    ax.plot([result.alpha_opt], [result.q_value], "ko",
            label=f"optimum ({result.alpha_opt:.3f}, {result.q_value:.3f})")
    ax.set_xlabel("shape factor")
    ax.set_ylabel("normalized error")
    ax.grid(True, alpha=0.3)
    ax.legend()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_simulation_figure(samples: list[dict], path: str, title: str = "") -> None:
    """Input/output waveforms of a time-domain run."""
    t = [s["t_s"] for s in samples]
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(t, [s["v_in"] for s in samples], label="input", alpha=0.7)
    ax.plot(t, [s["v_out"] for s in samples], label="output")
    ax.set_xlabel("time [s]")
    ax.set_ylabel("amplitude")
    ax.grid(True, alpha=0.3)
    ax.legend()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_verify_figure(report_dict: dict, path: str) -> None:
    """Bar chart of computed vs published values for each table entry."""
    tables = [t for t in report_dict["tables"] if not t["expect_failure"]]
    fig, axes = plt.subplots(len(tables), 1, figsize=(9, 3 * len(tables)))
    if len(tables) == 1:
        axes = [axes]
    for ax, table in zip(axes, tables):
        names = [e["name"] for e in table["entries"]]
        comp = [e["computed"] for e in table["entries"]]
        exp = [e["expected"] for e in table["entries"]]
        x = np.arange(len(names))
        ax.bar(x - 0.2, comp, width=0.4, label="computed")
        ax.bar(x + 0.2, exp, width=0.4, label="published")
        ax.set_xticks(x)
        ax.set_xticklabels(names, rotation=60, ha="right", fontsize=6)
        ax.set_title(table["title"], fontsize=9)
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
