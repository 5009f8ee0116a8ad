"""Unitary dilations of one contraction and Gram dilations of regular windows.

    python demos/dilation_tour.py
"""

import numpy as np

from latreg import generate
from latreg.dilation import (
    compression_defect,
    finite_unitary_dilation,
    unitarity_defect,
    window_dilation,
)
from latreg.regularity import build_tilde_gram, check_regular_sampled
from latreg.representation import spectral_norm

rng = np.random.default_rng(3)
A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
T = A / spectral_norm(A)  # norm exactly 1, the hardest case for the defect roots

print("N   ||U*U - I||   max_k ||(U^k)_00 - T^k||")
for N in range(1, 7):
    U = finite_unitary_dilation(T, N)
    print(f"{N}   {unitarity_defect(U):.1e}       {compression_defect(U, T, N):.1e}")

rep = generate("doubly-commuting-tensor", 3, 2, seed=11)
r = check_regular_sampled(rep)
print(f"\nsampled regularity of a doubly commuting tensor: {r.verdict} "
      f"({r.details['windows_checked']} windows, worst lambda {r.lambda_min:.2e})")

t = [(2, 0, 1), (0, 1, 0), (1, 1, 1), (0, 0, 0)]
wd = window_dilation(rep, t)
X = build_tilde_gram(rep, t).dense()
print(f"window dilation of {t}: rank {wd.r}, reproduction error {spectral_norm(wd.gram() - X):.1e}")
