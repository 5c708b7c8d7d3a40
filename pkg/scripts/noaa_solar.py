"""Independent solar position from NOAA's published General Solar Position
Calculations (ESRL spreadsheet equations). Used only to generate oracle
fixtures; deliberately not implemented via the package under test."""

import math
from datetime import datetime, timezone


def julian_day(t: datetime) -> float:
    if t.tzinfo is not None:
        t = t.astimezone(timezone.utc)
    frac = (t.hour + t.minute / 60.0 + (t.second + t.microsecond / 1e6) / 3600.0) / 24.0
    return t.toordinal() + 1721424.5 + frac


def solar_position(t: datetime, lat: float, lon: float) -> tuple[float, float, float]:
    """(altitude, azimuth_from_north_cw, zenith) in degrees, geometric."""
    jd = julian_day(t)
    jc = (jd - 2451545.0) / 36525.0

    l0 = math.fmod(280.46646 + jc * (36000.76983 + 0.0003032 * jc), 360.0)
    m = 357.52911 + jc * (35999.05029 - 0.0001537 * jc)
    ecc = 0.016708634 - jc * (0.000042037 + 0.0000001267 * jc)
    mrad = math.radians(m)
    c = (
        math.sin(mrad) * (1.914602 - jc * (0.004817 + 0.000014 * jc))
        + math.sin(2 * mrad) * (0.019993 - 0.000101 * jc)
        + math.sin(3 * mrad) * 0.000289
    )
    true_long = l0 + c
    app_long = true_long - 0.00569 - 0.00478 * math.sin(math.radians(125.04 - 1934.136 * jc))
    mean_obliq = 23.0 + (26.0 + (21.448 - jc * (46.815 + jc * (0.00059 - jc * 0.001813))) / 60.0) / 60.0
    obliq = mean_obliq + 0.00256 * math.cos(math.radians(125.04 - 1934.136 * jc))
    decl = math.degrees(
        math.asin(math.sin(math.radians(obliq)) * math.sin(math.radians(app_long)))
    )

    var_y = math.tan(math.radians(obliq / 2.0)) ** 2
    l0rad = math.radians(l0)
    eq_time = 4.0 * math.degrees(
        var_y * math.sin(2 * l0rad)
        - 2 * ecc * math.sin(mrad)
        + 4 * ecc * var_y * math.sin(mrad) * math.cos(2 * l0rad)
        - 0.5 * var_y**2 * math.sin(4 * l0rad)
        - 1.25 * ecc**2 * math.sin(2 * mrad)
    )

    tt = t.astimezone(timezone.utc) if t.tzinfo is not None else t
    minutes = tt.hour * 60.0 + tt.minute + (tt.second + tt.microsecond / 1e6) / 60.0
    tst = math.fmod(minutes + eq_time + 4.0 * lon, 1440.0)
    if tst < 0:
        tst += 1440.0
    ha = tst / 4.0 - 180.0 if tst / 4.0 >= 0 else tst / 4.0 + 180.0

    phi = math.radians(lat)
    drad = math.radians(decl)
    harad = math.radians(ha)
    cos_zen = math.sin(phi) * math.sin(drad) + math.cos(phi) * math.cos(drad) * math.cos(harad)
    cos_zen = max(-1.0, min(1.0, cos_zen))
    zen = math.degrees(math.acos(cos_zen))
    alt = 90.0 - zen

    sin_zen = math.sin(math.radians(zen))
    if abs(sin_zen) < 1e-12:
        az = 0.0
    else:
        num = (math.sin(phi) * cos_zen - math.sin(drad)) / (math.cos(phi) * sin_zen)
        num = max(-1.0, min(1.0, num))
        if ha > 0:
            az = math.fmod(math.degrees(math.acos(num)) + 180.0, 360.0)
        else:
            az = math.fmod(540.0 - math.degrees(math.acos(num)), 360.0)
    return alt, az, zen
