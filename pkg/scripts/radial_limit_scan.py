#!/usr/bin/env python3
"""Scan the residual between the state sum and the block decomposition
over a range of levels, for a named graph.

    python3 scripts/radial_limit_scan.py --graph poincare --levels 3 4 5
"""

import argparse

from plumbq.catalog import NAMED_GRAPHS
from plumbq.gppv import gppv_verify


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--graph", default="poincare",
                    choices=sorted(NAMED_GRAPHS))
    ap.add_argument("--group", default="su2",
                    choices=["su2", "so3", "osp12"])
    ap.add_argument("--levels", type=int, nargs="+", default=[3, 4, 5])
    ap.add_argument("--order", type=int, default=8000)
    args = ap.parse_args()

    g = NAMED_GRAPHS[args.graph]()
    for k in args.levels:
        rep = gppv_verify(g, args.group, k, args.order)
        print(f"level {k:2d} root order {rep.root_order:3d}  "
              f"state sum {complex(rep.wrt_value):.10g}  "
              f"residual {rep.residual:.3e}")


if __name__ == "__main__":
    main()
