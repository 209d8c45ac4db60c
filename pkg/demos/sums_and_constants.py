# Partial sums behind the asymptotics
#
# Each sum comes back with its exact value (correctly rounded summation),
# the expansion, and an error bound on their difference.

from swgraph import binary_entropy_expansion, harmonic_sum, log_power_sum, power_sum
from swgraph.series import stieltjes_gamma1, zeta, zeta_prime

for n in (10, 1000, 10**6):
    e = harmonic_sum(n)
    print(n, e.exact_value, e.residual, e.error_bound)

print("zeta(0.5)", zeta(0.5), "zeta'(2)", zeta_prime(2.0), "gamma_1", stieltjes_gamma1())

for s in (0.3, 2.0):
    e = power_sum(s, 10**5)
    print("power", s, e.residual, "<=", e.error_bound)
    e = log_power_sum(s, 10**5)
    print("log power", s, e.residual, "<=", e.error_bound)

# The small-p entropy expansion undershoots by about p^3 / 6.
for p in (0.1, 0.01):
    e = binary_entropy_expansion(p)
    print(p, e.residual, -p**3 / 6)
