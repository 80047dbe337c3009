"""Tabulate the glued-metric smoothing error against the mollifier width.

    python3 scripts/delta_sweep.py [scenario] [delta ...]

Prints the scaled divergence and the measured C1 constant for each width,
which shows how the smoothing error scales as delta shrinks.
"""

import sys

import numpy as np

from penrose_lab.pipeline import sweep
from penrose_lab.scenarios import load_scenario


def main(argv):
    name = argv[0] if argv else "pg_annulus"
    deltas = [float(v) for v in argv[1:]] or [1e-2, 1e-3, 1e-4]
    _, table = sweep(load_scenario(name), "delta", deltas,
                     ["div_scaled", "C1_measured", "m_adm_hat"])
    obs = table["observables"]
    print(f"{'delta':>10s} {'div_scaled':>14s} {'C1_measured':>14s} {'m_adm_hat':>14s}")
    for i, d in enumerate(table["values"]):
        row = [obs[k]["values"][i] for k in ("div_scaled", "C1_measured", "m_adm_hat")]
        print(f"{d:10.3g} " + " ".join(f"{v:14.6g}" for v in row))
    div = np.asarray(obs["div_scaled"]["values"])
    if div.size > 1 and np.all(np.isfinite(div)) and div[0] != 0:
        print(f"spread of div_scaled across widths: {div.max() / div.min():.3g}")


if __name__ == "__main__":
    main(sys.argv[1:])
