"""Regenerate the synthetic widely-linear filter fixtures in src/quatsp/data."""

from pathlib import Path

import numpy as np

from quatsp import filters, io
from quatsp import qarray as qa
from quatsp.augmented import augment_array

DATA = Path(__file__).resolve().parents[1] / "src" / "quatsp" / "data"
TAPS = 2
SAMPLES = 2000


def main():
    rng = np.random.default_rng(20240601)
    # unit-power proper input; rounding keeps the files small and the targets exact
    x = np.round(rng.normal(scale=0.5, size=(SAMPLES, 4)), 6)
    w = np.round(rng.normal(scale=0.5, size=(4 * TAPS, 4)), 3)
    y = qa.qmul(w[None], augment_array(filters.tap_regressors(x, TAPS))).sum(axis=1)
    io.write_signal(DATA / "wl_input.csv", x)
    io.write_signal(DATA / "wl_target.csv", y)
    io.write_signal(DATA / "wl_weights.csv", w)


if __name__ == "__main__":
    main()
