"""Why two commuting nilpotent contractions fail to be regular.

Both generators equal the 2x2 Jordan block J.  Each is a contraction and they
commute, yet the alternating sum I - J*J - J*J + (J^2)*(J^2) has a negative
eigenvalue, and the windows built from the corners of the unit square stop
being positive.  The condition-star test pins the failure to a two-point
tuple shifted by a single generator.

    python demos/jordan_pair.py
"""

import numpy as np

from latreg import generate
from latreg.regularity import (
    brehmer_operator,
    build_tilde_gram,
    certify_regularity,
    check_brehmer,
    check_condition_star,
)
from latreg.positivity import is_psd

np.set_printoptions(precision=4, suppress=True)

rep = generate("jordan-counterexample")
J = rep.gens[0]
print("J =\n", J.real)
print("J J =\n", (J @ J).real)

for U in ([], [1], [2], [1, 2]):
    Z = brehmer_operator(rep, U)
    print(f"Z_{U} eigenvalues: {np.linalg.eigvalsh(Z)}")

r = check_brehmer(rep)
print(f"\ncheck_brehmer: verdict={r.verdict} witness={r.witness} lambda_min={r.lambda_min}")

corners = ((0, 0), (0, 1), (1, 0), (1, 1))
X = build_tilde_gram(rep, corners)
print(f"\nwindow on the unit square corners: lambda_min = {is_psd(X).lambda_min:.6f}")

# the smallest failing instance of condition star
v = check_condition_star(rep, ((1, 0), (0, 0)), (0, 1))
print(f"star condition at t=((1,0),(0,0)), g=(0,1): ok={v.ok} lambda_min={v.lambda_min:.6f}")
print("(that is (1 - sqrt 5)/2 =", (1 - np.sqrt(5)) / 2, ")")

cert = certify_regularity(rep, ((1, 0), (0, 1), (0, 0)))
print("\ncertificate for ((1,0),(0,1),(0,0)):")
for node in cert.walk():
    print(f"  {node.action:15s} {node.tuple.elems} verdict={node.verdict}")
