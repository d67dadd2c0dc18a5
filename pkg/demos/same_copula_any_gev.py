"""
One copula for every GEV
========================

Map a point of the cube through the margins of three different
MGEV laws and evaluate each joint CDF.  All three agree with the copula.
"""

import numpy as np

from kextremal import GevParams, copula_cdf, gev_quantile, mgev_cdf

u = np.array([0.8, 0.6, 0.3])
print("copula:", copula_cdf(u))
for params in [GevParams(0, 1, 0), GevParams(1, 2, 0.5), GevParams(0, 1, -0.5)]:
    z = [gev_quantile(params, m + 1, u[m]) for m in range(len(u))]
    print(params.kind, mgev_cdf(params, z))
