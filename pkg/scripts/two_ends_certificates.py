#!/usr/bin/env python3
"""Two-ends decomposition certificates on the adversarial tube corpus.

Usage: python scripts/two_ends_certificates.py [outdir]
"""

import sys
from pathlib import Path

import numpy as np

from heilbronn.tubes import Tube2D, two_ends_decompose


def corpus(delta):
    rng = np.random.default_rng(10)
    angles = np.linspace(0, np.pi, 400, endpoint=False)
    yield "pencil", [Tube2D([0.5, 0.5], [np.cos(a), np.sin(a)], delta, 1.0)
                     for a in angles]
    yield "random", [Tube2D(rng.uniform(0.1, 0.9, 2), rng.normal(size=2), delta, 1.0)
                     for _ in range(1000)]
    grid = []
    for i in range(300):
        off = 0.1 + 0.8 * i / 299
        grid.append(Tube2D([off, 0.5], [0, 1], delta, 1.0))
        grid.append(Tube2D([0.5, off], [1, 0], delta, 1.0))
    yield "grid", grid
    yield "bush-union", [Tube2D(c, [np.cos(a), np.sin(a)], delta, 1.0)
                         for c in ([0.3, 0.3], [0.7, 0.6], [0.4, 0.8])
                         for a in np.linspace(0, np.pi, 150, endpoint=False)]


def main():
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("results")
    outdir.mkdir(exist_ok=True)
    delta, span = 2.0**-8, 2.0**-3
    path = outdir / "two_ends_certificates.csv"
    with open(path, "w") as fh:
        fh.write("family,n,overlap_measured,overlap_upper,overlap_bound,"
                 "max_selection,selection_bound,rounds,exact_net\n")
        for name, tubes in corpus(delta):
            res = two_ends_decompose(tubes, delta, span)
            fh.write(f"{name},{res.n_tubes},{res.overlap_measured},"
                     f"{res.overlap_upper},{res.overlap_bound:.1f},"
                     f"{res.max_selection},{res.selection_bound:.2f},"
                     f"{res.rounds_run},{int(res.exact_net)}\n")
            print(f"{name}: overlap {res.overlap_upper} <= {res.overlap_bound:.0f}, "
                  f"selections {res.max_selection} <= {res.selection_bound:.1f}")
    print(f"-> {path}")


if __name__ == "__main__":
    main()
