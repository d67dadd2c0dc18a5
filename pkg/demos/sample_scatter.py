"""
A sample of size 200
====================

Draw 200 rows from the 4-extremal copula and draw the pairwise scatter
matrix.  Without matplotlib the script only prints a summary.
"""

import numpy as np

from kextremal import sample_batch

batch = sample_batch(4, 200, seed=0)
print("column means:", np.round(batch.rows.mean(axis=0), 3))
print("psi chain decreases in every row:", bool(np.all(np.diff(batch.log_chain, axis=1) < 0)))

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, axes = plt.subplots(4, 4, figsize=(8, 8))
    for i in range(4):
        for j in range(4):
            ax = axes[i, j]
            if i == j:
                ax.hist(batch.rows[:, i], bins=15, color="0.6")
            else:
                ax.plot(batch.rows[:, j], batch.rows[:, i], ".", ms=2)
            ax.set_xticks([])
            ax.set_yticks([])
    fig.savefig("sample_scatter.png", dpi=100)
    print("wrote sample_scatter.png")
