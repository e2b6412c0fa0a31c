"""peg: inscribed-rectangle search on sampled Jordan curves plus exact
obstruction computations for Moebius bands bounding torus and 2-bridge knots.

Two wings:

* geometry (floating point): `peg.curves`, `peg.rectangles`, accelerated by
  an optional compiled kernel (`peg._kernels`, pure-Python fallback);
* exact arithmetic: `peg.exactmat`, `peg.numtheory`, `peg.linking`,
  `peg.dinvariants`, `peg.lattices`, `peg.seifert` - certificates only,
  no floating point.
"""

__version__ = "0.1.0"

from .report import ObstructionReport, Verdict  # noqa: F401
