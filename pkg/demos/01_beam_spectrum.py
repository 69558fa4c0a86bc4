"""Eigenvalues of the free-clamped beam, checked against its frequency equation.

The zero-coefficient problem (p = q = 0, a = b = c = 0) is the
Euler-Bernoulli beam, free at x = 0 and clamped at x = 1.  Its eigenvalues
are rho^4 with 1 + cos(rho) cosh(rho) = 0, so the package's search can be
checked line by line against textbook numbers.
"""

import numpy as np
from scipy.optimize import brentq

from quartspec import beam_problem, find_first_zeros

problem = beam_problem()
zeros = find_first_zeros(problem, (2, 2), 6)

print("n   lambda_n          rho_n       frequency-equation rho")
for n, z in enumerate(zeros, 1):
    rho = z.lam.real ** 0.25
    # independent check: bisection on cos r + sech r = 0
    if n % 2 == 1:
        a, b = (n - 0.5) * np.pi, n * np.pi
    else:
        a, b = (n - 1) * np.pi, (n - 0.5) * np.pi
    ref = brentq(lambda r: np.cos(r) + 1.0 / np.cosh(r), a, b, xtol=1e-13)
    print(f"{n}  {z.lam.real:14.6f}   {rho:.8f}   {ref:.8f}")

print("\nDerivative of the characteristic function at each zero (all simple):")
for n, z in enumerate(zeros, 1):
    print(f"  dDelta_22(lambda_{n}) = {z.ddelta.real:.6e}")
