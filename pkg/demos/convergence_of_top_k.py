"""
Top order statistics approach the limit
=======================================

Take the two largest of n draws from an exponential parent, rank the
replicates and compare with the limit copula.  The gap shrinks like 1/n
and soon drops below the Monte Carlo floor set by the number of
replicates.
"""

from kextremal import convergence_report

for row in convergence_report("exponential", [2, 5, 10, 50, 500], K=2, N=20_000, seed=1):
    print(f"n={row.n:4d}  distance={row.distance:.4f}  floor={row.floor:.4f}")
