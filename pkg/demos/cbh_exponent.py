"""The corrected exponent in exp(c a† + f(a)) = exp(c a†) exp(g(a)) for a few f."""
from nccapelli.identities import verify_cbh
from nccapelli.scalars import ParamRing
from nccapelli.series import TruncSeries, cbh_rhs

c = ParamRing(["c"]).var("c")
for coeffs in [(0, 1), (0, 0, 1), (1, 1, 0, 1)]:
    f = TruncSeries.from_polynomial(coeffs)
    g = cbh_rhs(f, c, 6)
    ok = verify_cbh(coeffs, K=5).status
    print(f"f coefficients {coeffs}: g = {g}   [order-5 check: {ok}]")
