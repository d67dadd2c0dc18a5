"""The polynomial family J_m behind the joint CDF of the K largest maxima.

``J_1 = 1`` and for ``m >= 2``

    J_m(x_1..x_m) = sum_{j<m} x_m^j / j!
                    - sum_{j=1}^{m-1} x_j^j / j! * J_{m-j}(x_{j+1}..x_m).

The recursion only ever calls J on contiguous suffixes of the argument
vector, so a single bottom-up pass over suffix lengths gives every value in
O(m^2) operations.
"""

import math

import numpy as np

__all__ = ["j_eval", "j_suffix_table"]


def _powers_over_factorial(x, n):
    """``[x^0/0!, x^1/1!, ..., x^(n-1)/(n-1)!]`` by repeated ratio."""
    out = [1.0] * n
    for j in range(1, n):
        out[j] = out[j - 1] * x / j
    return out


def j_suffix_table(xs):
    """Values of J on every suffix of ``xs``.

    Parameters
    ----------
    xs : sequence of float
        Nonnegative arguments ``(x_1, ..., x_m)``.

    Returns
    -------
    list of float
        ``[J_1(x_m), J_2(x_{m-1}, x_m), ..., J_m(x_1, ..., x_m)]``.
    """
    xs = [float(x) for x in np.asarray(xs, dtype=float).ravel()]
    m = len(xs)
    if m == 0:
        raise ValueError("J needs at least one argument")
    last = _powers_over_factorial(xs[-1], m)
    # diag[i][j] = x_i^j / j!; x_i only ever appears with power j <= i + 1
    diag = [_powers_over_factorial(xs[i], min(i + 2, m)) for i in range(m)]
    table = [1.0]
    for length in range(2, m + 1):
        start = m - length
        terms = last[:length]
        for j in range(1, length):
            terms.append(-diag[start + j - 1][j] * table[length - j - 1])
        table.append(math.fsum(terms))
    return table


def j_eval(xs):
    """Evaluate ``J_m(xs)`` with ``m = len(xs)``."""
    return j_suffix_table(xs)[-1]
