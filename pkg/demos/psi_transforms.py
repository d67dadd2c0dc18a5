"""
The psi transforms
==================

Each margin of the K-extremal copula is tied to the next through an
increasing map psi_m of the unit interval.  psi_1 is the identity and the
maps fall as m grows.
"""

import numpy as np

from kextremal import psi, psi_inv

u = np.linspace(0.05, 0.95, 7)
for m in range(1, 5):
    print(f"psi_{m}:", np.round(psi(m, u).v, 4))

# the inverse is explicit
v = psi(3, 0.5).v
print("psi_3(0.5) =", v, " back:", psi_inv(3, v))
