"""
Spearman and Kendall between the first and the K-th
===================================================

Rho has an exact series.  Tau comes from Monte Carlo.  Both fade slowly as K
grows.
"""

from kextremal import kendall_mc, spearman_exact

for K in [2, 3, 4, 8, 16, 64, 256]:
    rho = spearman_exact(K).value
    line = f"K={K:4d}  rho={rho:.6f}"
    if K <= 16:
        tau = kendall_mc(K, 100_000, seed=K)
        line += f"  tau={tau.value:.4f} +- {tau.std_error:.4f}"
    print(line)
