"""Matplotlib figures for correlation sweeps.

Rendering uses the Agg/SVG backends only, so this works headless. SVG
output is made reproducible by fixing the hash salt and dropping the date.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .sweep import COLUMNS, MEASURES  # noqa: E402

LABELS = {
    "I": "mutual information $I$",
    "ERE": "entanglement $E_{RE}$",
    "Cp": "classical $C_p$",
    "C": "classical $C$ (POVM)",
    "CRE": "classical $C_{RE}$",
}
STYLES = {"I": "-", "ERE": "--", "Cp": "-.", "C": ":", "CRE": (0, (5, 1, 1, 1))}

RC = {
    "font.size": 11,
    "axes.labelsize": 12,
    "legend.fontsize": 9,
    "lines.linewidth": 1.6,
    "svg.hashsalt": "qcorr",
    "svg.fonttype": "none",
}


def plot_sweep(reports, path, title=None):
    """One line per measure against p; the format follows the file suffix."""
    ps = [r.p for r in reports]
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(5.5, 4.0))
        for m in MEASURES:
            ys = [r.values.get(m) for r in reports]
            if any(y is None for y in ys):
                continue
            ax.plot(ps, ys, linestyle=STYLES[m], marker="o", markersize=3, label=LABELS[m])
        ax.set_xlabel("$p$")
        ax.set_ylabel("correlation (bits)")
        ax.set_ylim(bottom=0)
        if title:
            ax.set_title(title)
        ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path, metadata={"Date": None} if str(path).endswith(".svg") else None)
        plt.close(fig)
    return path


def plot_report(report, path):
    """Bar chart of the measures in a single :class:`CorrelationReport`."""
    keys = [m for m in MEASURES if m in report.values]
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(4.5, 3.2))
        ax.bar([COLUMNS[k] for k in keys], [report.values[k] for k in keys], color="0.4")
        ax.set_ylabel("bits")
        fig.tight_layout()
        fig.savefig(path, metadata={"Date": None} if str(path).endswith(".svg") else None)
        plt.close(fig)
    return path
