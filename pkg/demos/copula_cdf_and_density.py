"""
Distribution function and density
=================================

The copula is supported on the thin set where the psi chain decreases.
Off that set the density vanishes, while the CDF is defined everywhere.
"""

import math

from kextremal import copula_cdf, copula_density, support_check

point = [0.9, 2 * math.exp(-1)]
print("in support:", support_check(point).in_support)
print("density:", copula_density(point))
print("cdf:", copula_cdf(point))

# swap the coordinates and the point falls off the support
print("density off support:", copula_density([0.3, 0.9]))

# a unit coordinate drops out
print(copula_cdf([0.4, 1.0, 1.0]), "== 0.4")
