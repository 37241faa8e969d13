#!/usr/bin/env python3
"""Scan the named families across a dyadic ladder: B(w), differences, and the
basic/refined right-hand sides, one CSV per family.

Usage: python scripts/highlow_corpus_scan.py [outdir]
"""

import sys
from pathlib import Path

from heilbronn.configurations import (
    generate_bush,
    generate_plane_example,
    generate_st_grid,
    generate_vertical,
)
from heilbronn.incidence import normalized_incidence_many, rhs_basic, rhs_refined


def family_rows(name, octaves):
    for k in octaves:
        d = 2.0**-k
        if name == "vertical":
            X = generate_vertical(d, 3)
            if len(X) < 2:
                continue
            yield d, X.points(), X.lines(), 3
        elif name == "bush" and d <= 0.1:
            pts, lines = generate_bush(d, 3, 2, seed=1)
            yield d, pts, lines, 3
        elif name == "plane" and d <= 0.25:
            pts, lines = generate_plane_example(d)
            yield d, pts, lines, 3
        elif name == "st-grid":
            pts, lines = generate_st_grid(512)
            yield d, pts, lines, 2


def main():
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("results")
    outdir.mkdir(exist_ok=True)
    for name in ("vertical", "bush", "plane", "st-grid"):
        path = outdir / f"highlow_{name}.csv"
        with open(path, "w") as fh:
            fh.write("# delta: evaluation scale\n")
            fh.write("# b_fine/b_coarse: normalized incidence at delta and 2*delta\n")
            fh.write("# rhs_basic: basic high-low right-hand side\n")
            fh.write("# rhs_refined: direction-aware right-hand side (3D only)\n")
            fh.write("delta,b_fine,b_coarse,diff_sq,rhs_basic,rhs_refined\n")
            for d, P, L, dim in family_rows(name, range(3, 8)):
                b1, b2 = normalized_incidence_many([d, 2 * d], P, L, dim)
                basic = rhs_basic(d, P, L, dim)
                refined = rhs_refined(d, P, L)[0] if dim == 3 else float("nan")
                fh.write(f"{d:.8g},{b1:.8g},{b2:.8g},{(b1 - b2)**2:.8g},"
                         f"{basic:.8g},{refined:.8g}\n")
        print(f"{name} -> {path}")


if __name__ == "__main__":
    main()
