"""Exact q-series invariants of negative-definite plumbed 3-manifolds.

Subpackages cover exact Laurent-type series arithmetic (qlaurent), A_{N-1}
weight-lattice combinatorics (lie), plumbing graphs and Kirby moves
(plumbing), homological blocks (zhat), root-of-unity state sums (wrt),
decomposition verification (gppv), and quiver generating series for double
twist knots (kq).
"""

from plumbq.qlaurent import QSeries

__all__ = ["QSeries"]
__version__ = "0.1.0"
