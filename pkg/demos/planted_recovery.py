"""Recovering planted structure, assortative and disassortative.

Samples two synthetic networks from the model's own generative process: one
with dense blocks on the diagonal, one bipartite-like with links running
between the two groups.  The same fit call recovers both because the auto
initialization probes all three block seeding schemes and keeps the one
whose short run looks best.

Run:  python3 demos/planted_recovery.py
"""

import numpy as np

from bcsbm import FitConfig, PlantedSpec, fit, nmi, pwf, sample_network


def recover(pattern, ratio):
    spec = PlantedSpec(n=100, c=2, pattern=pattern, ratio=ratio,
                       n_attrs=20, edge_scale=800.0, seed=7)
    sample = sample_network(spec)
    net = sample.network
    result = fit(net, FitConfig(c=2, restarts=4, seed=7, init_scheme="auto"))
    truth = net.label_partition()
    print(f"{pattern:>12}: n={net.n} m={net.m}  "
          f"chosen scheme = {result.chosen_scheme:<15} "
          f"NMI {nmi(result.partition, truth):.4f}  "
          f"PWF {pwf(result.partition, truth):.4f}")
    return result


print("pattern        network           scheme picked        agreement")
assort = recover("assortative", 10.0)
bipart = recover("bipartite", 20.0)

print()
print("Auto selection matters: a fit seeded with the wrong block shape can")
print("converge to a likelihood hill that splits the bipartite graph along")
print("its dense cut instead of across it.  The probe runs are short (the")
print("scheme is judged after a few dozen iterations) and the winning")
print("scheme then gets the full restart budget.")
print()

trace = np.asarray(assort.log_likelihood_trace)
print(f"assortative trace: {len(trace) - 1} iterations, "
      f"log-likelihood {trace[0]:.2f} -> {trace[-1]:.2f}, "
      f"monotone: {bool(np.all(np.diff(trace) > -1e-9))}")
print()
print("Per-restart finals (the best one is kept):")
for i, rec in enumerate(assort.per_restart):
    marker = " <- best" if i == assort.best_restart else ""
    print(f"  restart {i}: {rec.final_log_likelihood:.3f} "
          f"after {rec.iterations} iterations{marker}")
