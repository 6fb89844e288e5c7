"""
Regenerating the shipped synthetic dataset
==========================================

``data/synthetic_frames.csv`` is produced by this script. The rows come from
:func:`dtaikit.synthetic.make_dataset` with its default seed, so rerunning it
reproduces the file byte for byte.
"""

from pathlib import Path

from dtaikit import synthetic
from dtaikit.model import write_csv

out = Path(__file__).resolve().parent.parent / "data" / "synthetic_frames.csv"
dataset = synthetic.make_dataset()
write_csv(out, dataset)
print(f"wrote {len(dataset)} designs to {out}")
