"""Generate the bundled synthetic clear-sky TMY (fixtures/tmy.csv).

PVGIS-layout CSV for a 47.37N/8.54E site: a simple cloud-free atmosphere
(Laue/Meinel-style beam attenuation with a fixed haze factor, 10% diffuse
fraction), smooth seasonal/diurnal temperature, and gentle wind. Solar
geometry comes from the independent NOAA equations, with irradiance forced
to zero below 1 degree of altitude so "sun below horizon" is unambiguous
for any position algorithm.

Run with --report to print the resulting annual stats via the package.
"""

import math
import sys
from datetime import datetime, timedelta, timezone
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))
import noaa_solar

LAT, LON = 47.37, 8.54
YEAR = 2023
HAZE = 0.70  # cloud-free but not pristine; keeps yields realistic
DIFFUSE_FRACTION = 0.12
# TMY files stitch months from different source years
MONTH_YEARS = [2009, 2013, 2011, 2016, 2008, 2014, 2012, 2010, 2015, 2007, 2017, 2013]

HEADER = """Latitude (decimal degrees):\t47.370
Longitude (decimal degrees):\t8.540
Elevation (m):\t432.0
Irradiation time step (min):\t60

2007 - 2017

time(UTC),T2m,RH,G(h),Gb(n),Gd(h),IR(h),WS10m,WD10m,SP
"""

FOOTER = """
T2m: 2-m air temperature (degree Celsius)
RH: relative humidity (%)
G(h): Global irradiance on the horizontal plane (W/m2)
Gb(n): Beam/direct irradiance on a plane always normal to sun rays (W/m2)
Gd(h): Diffuse irradiance on the horizontal plane (W/m2)
IR(h): Surface infrared (thermal) irradiance on a horizontal plane (W/m2)
WS10m: 10-m total wind speed (m/s)
WD10m: 10-m wind direction (0 = N, 90 = E) (degree)
SP: Surface (air) pressure (Pa)
"""


def hourly_rows():
    rows = []
    day = datetime(YEAR, 1, 1, tzinfo=timezone.utc)
    end = datetime(YEAR + 1, 1, 1, tzinfo=timezone.utc)
    while day < end:
        if not (day.month == 2 and day.day == 29):
            for h in range(24):
                rows.append(day.replace(hour=h))
        day += timedelta(days=1)
    return rows


def main() -> None:
    lines = []
    for t in hourly_rows():
        alt, _az, zen = noaa_solar.solar_position(t, LAT, LON)
        doy = t.timetuple().tm_yday
        e0 = 1367.0 * (1.0 + 0.033 * math.cos(2.0 * math.pi * doy / 365.0))
        if alt > 1.0:
            cosz = math.cos(math.radians(zen))
            am = 1.0 / cosz
            g_bn = HAZE * e0 * (0.7 ** (am**0.678))
            g_bh = g_bn * cosz
            g_dh = g_bh * DIFFUSE_FRACTION / (1.0 - DIFFUSE_FRACTION)
            g_h = g_bh + g_dh
        else:
            g_bn = g_h = g_dh = 0.0

        t_amb = (
            10.0
            + 10.0 * math.sin(2.0 * math.pi * (doy - 110) / 365.0)
            + 4.0 * math.sin(2.0 * math.pi * (t.hour - 9) / 24.0)
        )
        v_w = 2.2 + 1.2 * math.sin(2.0 * math.pi * (t.hour - 13) / 24.0) ** 2
        rh = 65.0
        ir_h = 300.0
        wd = 225
        sp = 96500.0

        stamp = f"{MONTH_YEARS[t.month - 1]:04d}{t.month:02d}{t.day:02d}:{t.hour:02d}00"
        lines.append(
            f"{stamp},{t_amb:.2f},{rh:.2f},{g_h:.2f},{g_bn:.2f},{g_dh:.2f},"
            f"{ir_h:.2f},{v_w:.2f},{wd},{sp:.1f}"
        )

    dest = Path(__file__).parent.parent / "fixtures" / "tmy.csv"
    dest.parent.mkdir(parents=True, exist_ok=True)
    dest.write_text(HEADER + "\n".join(lines) + "\n" + FOOTER, encoding="utf-8")
    print(f"wrote {dest} ({len(lines)} rows)")

    if "--report" in sys.argv:
        from solarscan import pvmodel
        from solarscan.geotypes import GeoPoint

        tmy = pvmodel.load_tmy(dest, year=YEAR)
        cfg = pvmodel.default_array_config(GeoPoint(LAT, LON))
        prof = pvmodel.power_profile(GeoPoint(LAT, LON), cfg, tmy)
        annual = prof.annual_energy_wh()
        cf = annual / (cfg.p_stc * len(prof.times))
        print(f"annual energy {annual / 1e3:.1f} kWh, capacity factor {cf * 100:.2f}%")


if __name__ == "__main__":
    main()
