"""Average throughput vs user velocity for conventional association and
handover skipping with interference cancellation.

Shows where skipping starts to pay off as speed grows: the handover cost
of the conventional scheme ((4v/pi)*sqrt(lam)*d of every hour) eventually
outweighs its better spectral efficiency. Prints the crossover speed per
(intensity, delay) pair and optionally saves a PNG.

Run:  python3 demos/throughput_crossover.py
"""
import numpy as np

from hoskip import (DEFAULT_OVERHEAD, HoScheme, NetworkParams,
                    average_throughput, crossover_velocity)

velocities = np.linspace(0.0, 160.0, 33)
schemes = (HoScheme.CONVENTIONAL, HoScheme.SKIPPING_IC)

print("Throughput in Mnats/s (W = 10 MHz, u_c = 0.3 conventional / "
      "0.15 skipping)\n")
series = {}
for lam in (30.0, 70.0):
    for d in (0.7, 2.0):
        params = NetworkParams(lam=lam, ho_delay_s=d)
        for scheme in schemes:
            vals = [average_throughput(params, scheme, v,
                                       overhead_fraction=DEFAULT_OVERHEAD[scheme]).value / 1e6
                    for v in velocities]
            series[(lam, d, scheme)] = vals
        vx = crossover_velocity(params, *schemes)
        where = f"{vx:.0f} km/h" if vx is not None else "none below 300 km/h"
        print(f"lam = {lam:4.0f} BS/km^2, d = {d:3.1f} s  ->  "
              f"skipping overtakes at {where}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    raise SystemExit(0)

fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
for ax, lam in zip(axes, (30.0, 70.0)):
    for d, style in ((0.7, "-"), (2.0, "--")):
        for scheme in schemes:
            ax.plot(velocities, series[(lam, d, scheme)], style,
                    label=f"{scheme.value}, d={d}s")
    ax.set_title(f"lam = {lam:.0f} BS/km$^2$")
    ax.set_xlabel("velocity (km/h)")
    ax.grid(alpha=0.3)
axes[0].set_ylabel("throughput (Mnats/s)")
axes[0].legend(fontsize=8)
fig.tight_layout()
fig.savefig("throughput_crossover.png", dpi=150)
print("\nwrote throughput_crossover.png")
