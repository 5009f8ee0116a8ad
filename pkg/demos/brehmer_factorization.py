"""Factor the window on the cube {0,1}^n as R^* R, one block row per subset.

For scalar generators a, b the 4x4 factor has a closed form; this script
prints it next to the computed one, then factors a random three-variable
tensor representation and reports the residual.

    python demos/brehmer_factorization.py [a] [b]
"""

import sys

import numpy as np

from latreg import generate
from latreg.regularity import factorize_brehmer
from latreg.representation import Representation
from latreg.worked_examples import expected_r2_layout

np.set_printoptions(precision=4, suppress=True, linewidth=120)

a = complex(sys.argv[1]) if len(sys.argv) > 1 else 0.6
b = complex(sys.argv[2]) if len(sys.argv) > 2 else 0.8

rep = Representation((np.array([[a]]), np.array([[b]])))
fact = factorize_brehmer(rep)
print("subset order:", ["{" + ",".join(map(str, u)) + "}" for u in fact.labels])
print("R =\n", fact.dense_R())
print("closed form =\n", expected_r2_layout(a, b))
print(f"||R*R - X|| = {fact.residual:.2e}   shape: {fact.triangularity()} triangular")

rep3 = generate("doubly-commuting-tensor", 3, 2, seed=7)
fact3 = factorize_brehmer(rep3)
print(f"\nn=3 tensor (d={rep3.d}): residual {fact3.residual:.2e}, "
      f"telescoping defect {fact3.telescoping_defect:.2e}")
