"""
Is the problem big enough to offload?
=====================================

Every element crosses a converter twice. Work that only grows like N never
catches up; anything faster eventually does.
"""

# %%
from optaccel import complexity

cfg = complexity.CrossoverConfig(t_conv_s=1.0, t_digital_s=1.0, t_analog_s=0.0)
for key, cls in complexity.BUILTIN_CLASSES.items():
    pts = complexity.speedup_curve(cls, cfg, [10, 100, 1000, 10**4])
    print(f"{cls.label:9s}", "  ".join(f"{l10:9.3f}" for _, _, l10 in pts), "(log10 speedup)")

# %%
for key in ("n", "nlogn", "n2", "2n"):
    print(key, complexity.breakeven_size(complexity.BUILTIN_CLASSES[key], cfg, 10))

# %%
# Slow converters push the break-even point out
for t_conv in (1, 10, 100):
    slow = complexity.CrossoverConfig(t_conv_s=t_conv)
    print(t_conv, complexity.breakeven_size(complexity.QUADRATIC, slow, 10).size)

# %%
print(complexity.curve_csv(complexity.speedup_curve(complexity.QUADRATIC, cfg, [1, 10, 100])))
