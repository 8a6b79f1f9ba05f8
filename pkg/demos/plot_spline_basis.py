"""
Cubic B-spline bases and the smoothness penalty
===============================================

Knots sit at data quantiles, so a skewed feature gets more basis
functions where the data are dense. The second-difference penalty leaves
straight lines unpenalized.
"""

import numpy as np

from gagam.splines import build_basis, evaluate_basis, greville_abscissae, penalty_matrix

rng = np.random.default_rng(0)
income = rng.lognormal(mean=1.0, sigma=0.5, size=2000)

basis = build_basis(income, 10)
print("interior knots:", np.round(basis.knots[4:-4], 3))

# every row of the design sums to one
x = np.linspace(*basis.domain, 7)
B = evaluate_basis(basis, x)
print("row sums:", B.sum(axis=1))

# coefficients that trace a line in x cost nothing, a bump does
P = penalty_matrix(basis)
line = 2.0 - 0.5 * greville_abscissae(basis)
bump = np.zeros(10)
bump[5] = 1.0
print(f"penalty of a line {line @ P @ line:.2e}, of a bump {bump @ P @ bump:.3f}")
