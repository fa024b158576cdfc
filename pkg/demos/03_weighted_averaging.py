"""Effect of the averaging exponent k on a synthetic Lasso benchmark.

One weighted average is tracked per exponent: k = 0 is the plain running
mean, k = -1 weights by step size, and larger k concentrates weight on
recent iterates (approaching the raw last iterate as k grows). All of them
carry the same 1/sqrt(t)-rate guarantee under the norm-adaptive rule, but
recency weighting usually wins in practice, and none of them require
evaluating the objective while running.
"""

import numpy as np

import psg

KS = (-1.0, 0.0, 1.0, 2.0, 4.0, 8.0)

problem = psg.make_lasso(seed=1, n=64, m=40, radius=50.0, lam=10.0)
f_hat = psg.reference_optimum_value(problem, 20_000)
problem = psg.with_reference_optimum(problem, f_hat)
print(f"{problem.name}: reference optimum estimate f^ = {f_hat:.4f}\n")

config = psg.SolverConfig(max_iterations=2000, initial_point=np.zeros(64),
                          policy=psg.FamilyPolicy(R=50.0, a=1.0), weight_ks=KS)
report, _ = psg.run(problem, config)

print(f"{'average':>10} {'objective':>12} {'gap to f^':>12} {'bound':>12} {'ok':>4}")
for k in KS:
    label = f"k{k:g}"
    value = report.averaged_values[label]
    bound = report.bounds[f"weak_{label}"]
    ok = report.certificates[f"weak_{label}"]
    print(f"{label:>10} {value:>12.4f} {value - f_hat:>12.4f} {bound:>12.2f} "
          f"{'yes' if ok else 'NO':>4}")
print(f"{'best':>10} {report.best_value:>12.4f} "
      f"{report.best_value - f_hat:>12.4f} {'-':>12} {'-':>4}")

print("\nLarger k tracks the best iterate more closely while keeping the")
print("one-shot guarantee; the best iterate itself needs one objective")
print("evaluation per iteration, the averages need none.")
