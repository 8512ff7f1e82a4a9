"""
Converter power/speed frontier
==============================

Synthetic survey data; load a real survey CSV with ``pareto.read_csv``.
"""

# %%
from optaccel import pareto

records = pareto.synthetic_records(400, "ADC", seed=1)
front = pareto.pareto_frontier(records)
print(len(front), "of", len(records), "designs on the frontier")
for r in front[:8]:
    print(f"{r.power_w:10.3e} W  {r.sample_rate_hz:10.3e} S/s  {r.energy_per_bit_j:9.3e} J/bit")

# %%
best = min(r.energy_per_bit_j for r in front)
for reduction in (1, 8, 32):
    g = pareto.feasibility_gap(records, "ADC", best / reduction)
    print(f"target best/{reduction}: gap {g.gap:g} ({g.best_record})")
