"""Walk through the Capelli identity for 2x2 matrices and its oscillator form.

Run with ``python3 demos/capelli_walkthrough.py``.
"""
from nccapelli.identities import (
    oscillator_rhs,
    realize_capelli,
    realize_weyl_example,
    verify_grassmann_rep,
    verify_oscillator_rep,
)
from nccapelli.ncdet import NCMatrix, cauchy_binet_lhs, nc_det

r = realize_capelli(2)
W = r.ring
lhs = cauchy_binet_lhs("col", r.X, r.Y)
print("det Z det D     =", lhs)

naive = nc_det("col", r.X @ r.Y)
print("col-det(Z^T D)  =", naive)
print("difference      =", lhs - naive)

fixed = nc_det("col", r.X @ r.Y + NCMatrix.diag([1, 0], W))
print("with diag(1, 0) :", "equal" if fixed == lhs else "different")
print("vacuum value    :", "equal" if oscillator_rhs(r, "col") == lhs else "different")

# a rank-one B: the oscillator and Grassmann forms still apply
w = realize_weyl_example(2, 3, 2)
print("\nB for the (2, 3, 2) example:")
for i in range(3):
    print("  ", [str(w.B[i, j]) for j in range(3)])
for res in (verify_oscillator_rep(w, "col"), verify_grassmann_rep(w, "col")):
    print(f"{res.identity:<11} {res.status}  lhs terms {res.lhs_terms}, rhs terms {res.rhs_terms}")
