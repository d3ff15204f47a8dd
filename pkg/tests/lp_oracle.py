"""Independent brute-force LP oracle used only by tests.

Builds the demand-maximization program directly from raw marginal/peak dicts
and hands it to HiGHS; shares no code with the flow-based production path.
"""

from scipy.optimize import linprog


def lp_max_demand(marginals, peaks, pairs, weights=None):
    """max sum w_p D_p  s.t.  0 <= D_p <= peak(p),  sum_{p: i in p} D_p <= U(i)."""
    pairs = sorted({tuple(sorted(p)) for p in pairs})
    if not pairs:
        return 0.0
    if weights is None:
        weights = {p: 1.0 for p in pairs}
    peak = {tuple(sorted(k)): v for k, v in peaks.items()}
    c = [-float(weights.get(p, 1.0)) for p in pairs]
    bounds = [(0.0, peak.get(p, 0.0)) for p in pairs]
    nodes = sorted({v for p in pairs for v in p})
    A_ub = [[1.0 if i in p else 0.0 for p in pairs] for i in nodes]
    b_ub = [marginals.get(i, 0.0) for i in nodes]
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    assert res.success, res.message
    return -res.fun


def lp_u_star(marginals, peaks, A, B):
    pairs = [(i, j) for i in A for j in B]
    return lp_max_demand(marginals, peaks, pairs)
