"""Plot-script emission (text templating only; matplotlib is not imported here)."""
from __future__ import annotations

from pathlib import Path

__all__ = ["emit_plot_script", "render_plot_script"]

# filled triangle, filled square, then the usual suspects
MARKERS = ("^", "s", "o", "D", "v", "x")

_TEMPLATE = '''\
"""Pressure ratio versus separation. Generated by casimir-films."""
import csv

import matplotlib.pyplot as plt

CURVES = [
{curves}
]


def read(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    L = [float(r["L_nm"]) for r in rows]
    if "ratio" in rows[0]:
        return L, [float(r["ratio"]) for r in rows], "force ratio"
    return L, [abs(float(r["pressure_Pa"])) for r in rows], "|pressure| (Pa)"


fig, ax = plt.subplots(figsize=(5, 4))
ylabel = None
for path, label, marker in CURVES:
    L, values, ylabel = read(path)
    ax.plot(L, values, marker=marker, label=label)
ax.set_xscale("log")
if ylabel.startswith("|"):
    ax.set_yscale("log")
else:
    ax.axhline(1.0, color="0.6", lw=0.8, ls="--")
ax.set_xlabel("separation L (nm)")
ax.set_ylabel(ylabel)
ax.legend()
fig.tight_layout()
fig.savefig({output!r}, dpi=150)
plt.show()
'''


def render_plot_script(csv_paths, labels=None, output_image="ratio.png") -> str:
    csv_paths = [str(Path(p)) for p in csv_paths]
    if not csv_paths:
        raise ValueError("at least one result CSV is required")
    if labels is None:
        labels = [Path(p).stem for p in csv_paths]
    if len(labels) != len(csv_paths):
        raise ValueError("one label per CSV required")
    curves = "\n".join(
        f"    ({path!r}, {label!r}, {MARKERS[i % len(MARKERS)]!r}),"
        for i, (path, label) in enumerate(zip(csv_paths, labels))
    )
    return _TEMPLATE.format(curves=curves, output=output_image)


def emit_plot_script(csv_paths, script_path, labels=None) -> Path:
    """Write a standalone matplotlib script drawing each CSV on a log-x axis.

    CSVs with a ``ratio`` column are drawn as ratios, others as |pressure|.
    Returns the script path.
    """
    csv_paths = [Path(p) for p in csv_paths]
    if not csv_paths:
        raise ValueError("at least one result CSV is required")
    for p in csv_paths:
        if not p.is_file():
            raise FileNotFoundError(f"result CSV not found: {p}")
    script_path = Path(script_path)
    script_path.parent.mkdir(parents=True, exist_ok=True)
    image = str(script_path.with_suffix(".png"))
    script_path.write_text(
        render_plot_script([p.resolve() for p in csv_paths], labels, image), encoding="utf-8"
    )
    return script_path
