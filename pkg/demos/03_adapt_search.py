"""ADAPT against No-DD, All-DD and the exhaustive Runtime-Best on one benchmark.

The search scores DD masks on a Clifford decoy of the program, whose ideal
output is cheap to get, and uses only the decoy runs to pick a mask. The
real program is then run under every policy for comparison.

Run: python3 demos/03_adapt_search.py [benchmark] [seed]
"""
# %%
import sys

from adaptdd import DDProtocol, NoisyExecutor, policy_compare
from adaptdd.benchmarks import benchmark
from adaptdd.decoy import ideal_distribution, make_cdc
from adaptdd.shipped import shipped_device, shipped_noise

name = sys.argv[1] if len(sys.argv) > 1 else "bv6"
seed = int(sys.argv[2]) if len(sys.argv) > 2 else 0
dev = shipped_device("chain6")
nm = shipped_noise("crosstalk_heavy")
circ = benchmark(name)

# %%
decoy = make_cdc(circ)
print("decoy ideal output:", dict(ideal_distribution(decoy).probs))

# %%
report = policy_compare(circ, dev, DDProtocol("xy4"), NoisyExecutor(dev, nm, 8000, seed))
for group, table in zip(report.neighborhoods, report.tables):
    top = sorted(table.items(), key=lambda kv: -kv[1])[:3]
    print(f"group {group}: best local masks {[(m, round(f, 3)) for m, f in top]}")
print(f"{report.evaluations} decoy runs, chosen mask {report.mask}")

# %%
for policy, fid in report.policies.items():
    print(f"{policy:13s} mask {report.policy_masks[policy]}  fidelity {fid:.3f}  x{report.relative[policy]:.2f} vs no DD")
