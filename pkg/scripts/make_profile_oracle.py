"""Freeze a coarse independent annual-energy estimate for the bundled TMY
(tests/fixtures/profile_oracle.json).

Independent model chain, sharing nothing with the package: NOAA solar
geometry, isotropic-sky (Liu-Jordan) transposition, NOCT cell temperature,
and a PVWatts-style linear temperature derate. Transposition-model and
thermal-model differences versus the package's Perez/Faiman/ADR chain stay
within a few percent annually, so this anchors the +/-15% acceptance band.
"""

import csv
import json
import math
import sys
from datetime import datetime, timedelta, timezone
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))
import noaa_solar

LAT, LON = 47.37, 8.54
YEAR = 2023
TILT = 47.37
AZIMUTH = 180.0
P_STC = 200.0
G_STC = 1000.0
ALBEDO = 0.2
NOCT = 45.0
GAMMA = -0.004  # 1/K


def read_tmy(path: Path):
    rows = []
    with open(path, encoding="utf-8") as fh:
        in_data = False
        for line in fh:
            line = line.strip()
            if line.startswith("time(UTC)"):
                in_data = True
                header = line.split(",")
                continue
            if not in_data or not line:
                in_data = in_data and bool(line)
                continue
            parts = line.split(",")
            if len(parts) < len(header):
                break
            try:
                rows.append(
                    {
                        "g_h": float(parts[header.index("G(h)")]),
                        "g_bn": float(parts[header.index("Gb(n)")]),
                        "g_dh": float(parts[header.index("Gd(h)")]),
                        "t_amb": float(parts[header.index("T2m")]),
                    }
                )
            except ValueError:
                break
    return rows


def hourly():
    out = []
    day = datetime(YEAR, 1, 1, tzinfo=timezone.utc)
    end = datetime(YEAR + 1, 1, 1, tzinfo=timezone.utc)
    while day < end:
        if not (day.month == 2 and day.day == 29):
            out.extend(day.replace(hour=h) for h in range(24))
        day += timedelta(days=1)
    return out


def main() -> None:
    tmy_path = Path(__file__).parent.parent / "fixtures" / "tmy.csv"
    rows = read_tmy(tmy_path)
    assert len(rows) == 8760, len(rows)
    beta = math.radians(TILT)

    annual_wh = 0.0
    for t, row in zip(hourly(), rows):
        alt, az, zen = noaa_solar.solar_position(t, LAT, LON)
        if zen >= 90.0 or row["g_h"] <= 0.0:
            continue
        zr = math.radians(zen)
        cos_inc = math.cos(beta) * math.cos(zr) + math.sin(beta) * math.sin(zr) * math.cos(
            math.radians(az - AZIMUTH)
        )
        poa = (
            row["g_bn"] * max(0.0, cos_inc)
            + row["g_dh"] * (1.0 + math.cos(beta)) / 2.0
            + row["g_h"] * ALBEDO * (1.0 - math.cos(beta)) / 2.0
        )
        t_cell = row["t_amb"] + (NOCT - 20.0) / 800.0 * poa
        p = P_STC * (poa / G_STC) * (1.0 + GAMMA * (t_cell - 25.0))
        annual_wh += max(0.0, p)

    doc = {
        "site": {"lat": LAT, "lon": LON},
        "tilt": TILT,
        "azimuth": AZIMUTH,
        "p_stc": P_STC,
        "g_stc": G_STC,
        "annual_energy_wh": annual_wh,
        "model": "isotropic transposition + NOCT cell temp + linear derate",
    }
    dest = Path(__file__).parent.parent / "tests" / "fixtures" / "profile_oracle.json"
    dest.parent.mkdir(parents=True, exist_ok=True)
    dest.write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
    print(f"independent annual estimate: {annual_wh / 1e3:.1f} kWh")
    print(f"wrote {dest}")


if __name__ == "__main__":
    main()
