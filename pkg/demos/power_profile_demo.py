"""Walkthrough: from TMY weather to an hourly annual power profile.

Loads the bundled synthetic clear-sky TMY for a 47 N site and runs the
full model chain (solar position -> air mass -> Perez POA -> Faiman module
temperature -> ADR efficiency -> DC power). Run from the repo root:

    python demos/power_profile_demo.py [--plot]
"""

import sys
from collections import defaultdict
from datetime import datetime, timezone

import numpy as np

from solarscan import pvmodel
from solarscan.geotypes import GeoPoint

SITE = GeoPoint(47.37, 8.54)

tmy = pvmodel.load_tmy("fixtures/tmy.csv", year=2023)
print(f"TMY loaded: {len(tmy)} hourly records, "
      f"peak GHI {tmy.g_h.max():.0f} W/m^2")

# One intermediate hour, spelled out step by step
t = datetime(2023, 6, 21, 11, 0, tzinfo=timezone.utc)
i = tmy.times.index(t)
rec = tmy.records[i]
sp = pvmodel.solar_position(t, SITE)
m = pvmodel.air_mass(sp.zenith)
cfg = pvmodel.default_array_config(SITE)  # south-facing, tilt = latitude
poa = pvmodel.poa_irradiance(cfg, sp, rec, m)
t_pv = pvmodel.module_temperature(rec, poa.total, cfg)
eta = pvmodel.adr_efficiency(poa.total, t_pv, cfg)
print(f"\n{t:%Y-%m-%d %H:%M} UTC at ({SITE.lat}, {SITE.lon}):")
print(f"  sun altitude {sp.altitude:.2f} deg, zenith {sp.zenith:.2f} deg, air mass {m:.3f}")
print(f"  POA: direct {poa.direct:.0f} + sky {poa.sky_diffuse:.0f} + "
      f"ground {poa.ground_reflected:.0f} = {poa.total:.0f} W/m^2")
print(f"  module temperature {t_pv:.1f} C, efficiency derate {eta:.4f}")
print(f"  DC power (P_stc {cfg.p_stc:.0f} W): "
      f"{cfg.p_stc * eta * poa.total / cfg.g_stc:.1f} W")

# The whole year in one call
profile = pvmodel.power_profile(SITE, cfg, tmy)
annual = profile.annual_energy_wh()
cf = annual / (cfg.p_stc * len(profile.times))
print(f"\nannual: {annual / 1e3:.1f} kWh per array, capacity factor {cf * 100:.1f}%")

monthly = defaultdict(float)
for ts, w in zip(profile.times, profile.watts):
    monthly[ts.month] += w / 1e3
print("monthly energy (kWh): "
      + " ".join(f"{monthly[mo]:.0f}" for mo in range(1, 13)))

# One array at P_stc = 200 W stands for roughly 1 m^2 of panel, so a city
# profile is the per-m^2 profile times the detected panel area.
city = pvmodel.scale_profile(profile, 18947.17)
print(f"\nscaled to 18,947 m^2 of detected panels: peak {city.watts.max() / 1e6:.2f} MW")

csv_head = profile.to_csv().splitlines()[:4]
print("\nCSV head:")
for line in csv_head:
    print(" ", line)

if "--plot" in sys.argv:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(11, 3.2))
    ax.plot(np.arange(len(profile.watts)) / 24.0, profile.watts, lw=0.2)
    ax.set_xlabel("day of year")
    ax.set_ylabel("DC power (W)")
    ax.set_title("hourly annual profile, 1 array at 47 N (clear-sky TMY)")
    fig.tight_layout()
    fig.savefig("profile_demo.png", dpi=130)
    print("\nwrote profile_demo.png")
