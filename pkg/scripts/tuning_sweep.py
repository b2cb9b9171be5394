"""Sweep the control coupling g2eff around the tuned value E3 - E1 = 10.

    python scripts/tuning_sweep.py [OUT_DIR]
"""
import sys

from mrjc.cli import main

out = sys.argv[1] if len(sys.argv) > 1 else "out/sweep"
code = main(["--preset", "fig3", "--out", out, "--emit", "", "--sweep", "g2eff=8,8.5,9,9.5,10,10.5,11,11.5,12", "--jobs", "4"])
print(open(f"{out}/sweep.csv").read(), end="")
sys.exit(code)
