"""One user trajectory through a Voronoi tessellation under handover
skipping: cell crossings, executed handovers, and the connected/blackout
alternation along the path.

Also aggregates crossing counts over many seeds to check the crossing
rate against 4*v*sqrt(lam)/pi, and compares per-state SINR coverage
sampled along trajectories with the stationary analysis.

Run:  python3 demos/mobility_trace.py
"""
import math

from hoskip import (HoScheme, NetworkParams, coverage_blackout_eta4,
                    coverage_connected_eta4, mobile_coverage_along_trajectory,
                    simulate_trajectory)
from hoskip.simulation import STATE_BLACKOUT, STATE_CONNECTED

params = NetworkParams(lam=30.0, ho_delay_s=0.0)
velocity = 60.0  # km/h

trace = simulate_trajectory(params, velocity, 2.0, HoScheme.SKIPPING, seed=4)
print(f"2 km at {velocity:.0f} km/h through lam = {params.lam} BS/km^2: "
      f"{trace.crossing_count} cell crossings, "
      f"{trace.ho_count} handovers executed\n")
print("segment timeline (minutes):")
for seg in trace.segments:
    print(f"  {seg.t_start * 60:6.2f} - {seg.t_end * 60:6.2f}  "
          f"{seg.state:<12} serving BS {seg.serving}")

# crossing-rate law over aggregated seeds
crossings, length = 0, 0.0
for s in range(200):
    tr = simulate_trajectory(params, velocity, 4.0, HoScheme.SKIPPING, seed=s)
    crossings += tr.crossing_count
    length += tr.length_km
rate = crossings / length
theory = 4.0 * math.sqrt(params.lam) / math.pi
print(f"\ncrossings per km over {length:.0f} km: {rate:.3f} "
      f"(theory 4*sqrt(lam)/pi = {theory:.3f})")

# per-state coverage along skipping trajectories vs stationary analysis
succ = {STATE_CONNECTED: 0, STATE_BLACKOUT: 0}
tot = {STATE_CONNECTED: 0, STATE_BLACKOUT: 0}
for s in range(40):
    tr = simulate_trajectory(params, velocity, 4.0, HoScheme.SKIPPING, seed=s)
    cov = mobile_coverage_along_trajectory(tr, 1.0, 0.02, seed=1000 + s)
    for state in succ:
        est = cov[state]
        succ[state] += round(est.probability * est.trials)
        tot[state] += est.trials
print("\nmobile coverage at T = 0 dB (fresh fading per sample):")
print(f"  connected: {succ[STATE_CONNECTED] / tot[STATE_CONNECTED]:.4f} "
      f"(stationary analysis {coverage_connected_eta4(1.0):.4f})")
print(f"  blackout:  {succ[STATE_BLACKOUT] / tot[STATE_BLACKOUT]:.4f} "
      f"(stationary analysis {coverage_blackout_eta4(1.0):.4f}; the protocol "
      "retains the previous BS, which is not always the second nearest)")
