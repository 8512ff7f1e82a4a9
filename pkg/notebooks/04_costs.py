"""
Where the prototype's time goes
===============================
"""

# %%
from optaccel import costmodel

cfg = costmodel.load_config("prototype.cfg")
b = costmodel.pipeline_time(cfg.hardware)
for stage, frac in b.per_stage_fraction.items():
    print(f"{stage:24s} {100 * frac:9.5f} %")
print("moving data:", b.data_movement_fraction)
print("hardware / software:", costmodel.hardware_vs_software_ratio(cfg.hardware, cfg.software_total_s))

# %%
# Energy: converters dominate, so cheaper converters pay off almost one for one
e = costmodel.load_config("energy_scenario.cfg")
w = e.workload
for k in (1, 2, 8, 32):
    m = costmodel.EnergyModel(e.energy.e_dac_per_sample / k, e.energy.e_adc_per_sample / k)
    print(k, costmodel.energy_advantage(m, **w))
