"""
How much can an FFT accelerator buy end to end?
===============================================

Only the transform and convolution time shrinks, so the rest of each program
caps the speedup.
"""

# %%
from optaccel import amdahl

profiles = amdahl.load_table1()
reports = amdahl.analyze(profiles)
for r in sorted(reports, key=lambda r: -r.speedup)[:5]:
    print(f"{r.speedup:8.2f}x  {r.name}")

# %%
agg = amdahl.aggregate(reports)
print(f"mean {agg.mean:.3f}  median {agg.median:.4f}  over {agg.count} programs")

# %%
# Recompute each row and compare with the published speedup column
for c in amdahl.printed_checks(profiles):
    flag = "" if c.within() else "   <-- off by more than 3 %"
    print(f"{c.speedup:8.3f} vs {c.printed_speedup:7.2f}{flag}  {c.name[:50]}")

# %%
# A finite accelerator is worse still
for p in (2, 10, 100, float("inf")):
    print(p, amdahl.aggregate(amdahl.analyze(profiles, acceleration=p)).mean)
