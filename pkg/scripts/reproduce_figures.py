"""Run the fig3 (tuned) and fig4 (detuned) presets and summarize the revivals.

    python scripts/reproduce_figures.py [OUT_DIR]
"""
import math
import sys
from pathlib import Path

from mrjc.cli import run
from mrjc.config import load_preset
from mrjc.observables import revival_peaks

out = Path(sys.argv[1] if len(sys.argv) > 1 else "out")
for name in ("fig3", "fig4"):
    res = run(load_preset(name), out / name)
    report = revival_peaks(res.series, 0.5)
    print(f"{name}: n_max={res.n_max}, ladder deviation={res.ladder_deviation:.4f}, max n_mean={res.series.n_mean.max():.3f}")
    for t, v in report.peaks:
        print(f"    revival {v:.4f} at t = {t:.4f} = {t / (2 * math.pi):.4f} x 2pi")
    if not report.peaks:
        print("    no revival above 0.5")
    print(f"    written to {out / name}")
