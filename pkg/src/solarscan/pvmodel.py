"""Hourly PV power modeling: solar position, transposition, temperature,
efficiency, and annual DC power profiles.

The chain, per hour of a typical meteorological year (TMY):

1. apparent solar position (Astronomical Almanac approximation,
   Michalsky 1988),
2. relative air mass (Kasten & Young 1989),
3. plane-of-array irradiance: beam projection + Perez et al. (1990)
   sky-diffuse transposition + isotropic ground reflection,
4. module temperature (Faiman 2008),
5. irradiance/temperature efficiency derate (ADR model,
   Driesse, Theristis & Stein 2021),
6. DC power scaled by nominal power at standard test conditions.

All model functions accept scalars or equally-shaped numpy arrays.
"""

import math
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import IO, Iterator, NamedTuple, Sequence, Union

import numpy as np

from .errors import TmyFormatError
from .geotypes import GeoPoint

HOURS_PER_YEAR = 365 * 24  # leap days are dropped
DEFAULT_PROFILE_YEAR = 2023

SOLAR_CONSTANT = 1367.0  # W/m^2, extraterrestrial normal at 1 AU
_MAX_ZENITH_FOR_PEREZ_B = math.cos(math.radians(85.0))

# Altitude/zenith are stored as multiples of 2^-40 degree (~1e-12 deg,
# far below the position algorithm's accuracy). With both values on that
# grid, zenith = 90 - altitude and zenith + altitude == 90 are exact in
# float64 instead of holding only to rounding error.
_ANGLE_QUANTUM_BITS = 40


class AdrParams(NamedTuple):
    """Fit parameters of the ADR efficiency model."""

    k_a: float
    k_d: float
    t_cd: float
    k_rs: float
    k_rsh: float


# Generic crystalline-silicon fit; k_a is the efficiency scale at
# reference conditions (kept at ~1 so the model acts as a relative derate).
DEFAULT_ADR_PARAMS = AdrParams(
    k_a=0.99924, k_d=-5.49097, t_cd=0.01918, k_rs=0.06999, k_rsh=0.26144
)

# Perez et al. (1990) "all sites composite" brightness coefficients,
# eight sky-clearness bins x (f11, f12, f13, f21, f22, f23). Values at the
# precision republished in the EnergyPlus engineering reference.
_PEREZ_COEFFS = np.array(
    [
        [-0.0083117, 0.5877285, -0.0620636, -0.0596012, 0.0721249, -0.0220216],
        [0.1299457, 0.6825954, -0.1513752, -0.0189325, 0.0659650, -0.0288748],
        [0.3296958, 0.4868735, -0.2210958, 0.0554140, -0.0639588, -0.0260542],
        [0.5682053, 0.1874525, -0.2951290, 0.1088631, -0.1519229, -0.0139754],
        [0.8730280, -0.3920403, -0.3616149, 0.2255647, -0.4620442, 0.0012448],
        [1.1326077, -1.2367284, -0.4118494, 0.2877813, -0.8230357, 0.0558651],
        [1.0601591, -1.5999137, -0.3589221, 0.2642124, -1.1272340, 0.1310694],
        [0.6777470, -0.3272588, -0.2504286, 0.1561313, -1.3765031, 0.2506212],
    ]
)
# Sky-clearness bin edges (epsilon), Perez et al. (1990) Table 1.
_PEREZ_BIN_EDGES = np.array([1.065, 1.23, 1.5, 1.95, 2.8, 4.5, 6.2])


@dataclass(frozen=True)
class SolarPosition:
    """Apparent solar position; azimuth measured clockwise from north."""

    altitude: float
    azimuth: float
    zenith: float

    def __post_init__(self):
        if not -90.0 <= self.altitude <= 90.0:
            raise ValueError(f"altitude {self.altitude} outside [-90, 90]")
        if not 0.0 <= self.azimuth < 360.0:
            raise ValueError(f"azimuth {self.azimuth} outside [0, 360)")
        if self.zenith + self.altitude != 90.0:
            raise ValueError("zenith must equal 90 - altitude exactly")


@dataclass(frozen=True)
class ArrayConfig:
    """PV array orientation, ratings, and thermal/efficiency parameters.

    ``u0``/``u1`` are the Faiman heat-loss coefficients (IEC 61853-2
    defaults); ``albedo`` is the isotropic ground reflectance.
    """

    tilt: float
    azimuth: float = 180.0
    p_stc: float = 200.0
    g_stc: float = 1000.0
    u0: float = 25.0
    u1: float = 6.84
    albedo: float = 0.2
    adr_params: AdrParams = DEFAULT_ADR_PARAMS

    def __post_init__(self):
        if not 0.0 <= self.tilt <= 90.0:
            raise ValueError(f"tilt {self.tilt} outside [0, 90]")
        if not 0.0 <= self.azimuth < 360.0:
            raise ValueError(f"azimuth {self.azimuth} outside [0, 360)")
        if not self.p_stc > 0:
            raise ValueError("p_stc must be positive")
        if not self.g_stc > 0:
            raise ValueError("g_stc must be positive")
        if not self.u0 > 0:
            raise ValueError("u0 must be positive")
        if self.u1 < 0:
            raise ValueError("u1 must be nonnegative")
        if not 0.0 <= self.albedo <= 1.0:
            raise ValueError(f"albedo {self.albedo} outside [0, 1]")


def default_array_config(site: GeoPoint, **overrides) -> ArrayConfig:
    """South-facing array tilted at the site latitude (north-facing below
    the equator), with standard ratings."""
    defaults = dict(tilt=min(abs(site.lat), 90.0), azimuth=180.0 if site.lat >= 0 else 0.0)
    defaults.update(overrides)
    return ArrayConfig(**defaults)


@dataclass(frozen=True)
class TmyRecord:
    """One hour of TMY weather.

    Irradiances in W/m²: ``g_bn`` beam normal, ``g_h`` global horizontal,
    ``g_dh`` diffuse horizontal. ``t_amb`` is air temperature at 2 m (°C),
    ``v_w`` wind speed at 10 m (m/s).
    """

    t: datetime
    g_bn: float
    g_h: float
    g_dh: float
    t_amb: float
    v_w: float

    def __post_init__(self):
        for name in ("g_bn", "g_h", "g_dh"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.g_h < self.g_dh - 1.0:  # 1 W/m^2 sensor-noise slack
            raise ValueError(f"g_h {self.g_h} below g_dh {self.g_dh} - 1")
        if not -60.0 <= self.t_amb <= 60.0:
            raise ValueError(f"t_amb {self.t_amb} outside [-60, 60]")
        if self.v_w < 0.0:
            raise ValueError(f"v_w must be >= 0, got {self.v_w}")


@dataclass(frozen=True)
class TmySeries:
    """Exactly 8760 hourly weather records on strictly increasing timestamps."""

    times: tuple[datetime, ...]
    g_bn: np.ndarray
    g_h: np.ndarray
    g_dh: np.ndarray
    t_amb: np.ndarray
    v_w: np.ndarray

    def __post_init__(self):
        n = len(self.times)
        if n != HOURS_PER_YEAR:
            raise ValueError(f"TMY series must have {HOURS_PER_YEAR} records, got {n}")
        for name in ("g_bn", "g_h", "g_dh", "t_amb", "v_w"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"column {name} length != {n}")
        for a, b in zip(self.times, self.times[1:]):
            if not b > a:
                raise ValueError("timestamps must be strictly increasing")

    def __len__(self) -> int:
        return len(self.times)

    def __iter__(self) -> Iterator[TmyRecord]:
        return iter(self.records)

    @property
    def records(self) -> list[TmyRecord]:
        return [
            TmyRecord(
                t=self.times[i],
                g_bn=float(self.g_bn[i]),
                g_h=float(self.g_h[i]),
                g_dh=float(self.g_dh[i]),
                t_amb=float(self.t_amb[i]),
                v_w=float(self.v_w[i]),
            )
            for i in range(len(self.times))
        ]


@dataclass(frozen=True)
class PowerProfile:
    """8760 hourly (timestamp, DC watts) pairs."""

    times: tuple[datetime, ...]
    watts: np.ndarray

    def __post_init__(self):
        if len(self.times) != HOURS_PER_YEAR or len(self.watts) != HOURS_PER_YEAR:
            raise ValueError(f"profile must have {HOURS_PER_YEAR} entries")
        if np.any(self.watts < 0):
            raise ValueError("profile power must be nonnegative")

    @property
    def entries(self) -> list[tuple[datetime, float]]:
        return [(t, float(w)) for t, w in zip(self.times, self.watts)]

    def annual_energy_wh(self) -> float:
        """Hour-step integral of the profile."""
        return float(np.sum(self.watts))

    def to_csv(self) -> str:
        """Render as ``timestamp,power_w`` CSV with RFC3339 UTC timestamps."""
        lines = ["timestamp,power_w"]
        for t, w in zip(self.times, self.watts):
            lines.append(f"{t.strftime('%Y-%m-%dT%H:%M:%SZ')},{w:.6f}")
        return "\n".join(lines) + "\n"


class PoaComponents(NamedTuple):
    """Plane-of-array irradiance split into its three terms plus total, W/m²."""

    direct: float
    sky_diffuse: float
    ground_reflected: float
    total: float


def hourly_timestamps(year: int) -> list[datetime]:
    """The 8760 hour-start UTC timestamps of ``year``, Feb 29 excluded.

    The fixed 365x24 grid keeps profiles the same length in leap years.
    """
    out = []
    day = datetime(year, 1, 1, tzinfo=timezone.utc)
    end = datetime(year + 1, 1, 1, tzinfo=timezone.utc)
    while day < end:
        if not (day.month == 2 and day.day == 29):
            for h in range(24):
                out.append(day.replace(hour=h))
        day += timedelta(days=1)
    return out


def _time_parts(t: datetime) -> tuple[int, float, float]:
    """(year, day-of-year, fractional UTC hours) for the almanac formulas."""
    if t.tzinfo is not None:
        t = t.astimezone(timezone.utc)
    doy = float(t.timetuple().tm_yday)
    hours = t.hour + t.minute / 60.0 + (t.second + t.microsecond / 1e6) / 3600.0
    return t.year, doy, hours


def _quantize_angle(deg):
    scale = float(1 << _ANGLE_QUANTUM_BITS)
    return np.round(np.asarray(deg) * scale) / scale


def _solar_position_arrays(
    times: Sequence[datetime], lat: float, lon: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized Michalsky positions: (altitude, azimuth, zenith) in degrees."""
    years = np.empty(len(times))
    doys = np.empty(len(times))
    hours = np.empty(len(times))
    for i, t in enumerate(times):
        years[i], doys[i], hours[i] = _time_parts(t)
    if np.any(years < 1950) or np.any(years > 2050):
        bad = int(years.min() if years.min() < 1950 else years.max())
        raise ValueError(f"year {bad} outside the algorithm's 1950-2050 validity range")

    # Julian day - 2400000, then offset from J2000.0 (Michalsky 1988)
    delta = years - 1949.0
    leap = np.floor(delta / 4.0)
    jd = 32916.5 + delta * 365.0 + leap + doys + hours / 24.0
    t = jd - 51545.0

    mnlong = np.mod(280.460 + 0.9856474 * t, 360.0)
    mnanom = np.radians(np.mod(357.528 + 0.9856003 * t, 360.0))
    eclong = np.radians(
        np.mod(mnlong + 1.915 * np.sin(mnanom) + 0.020 * np.sin(2.0 * mnanom), 360.0)
    )
    oblqec = np.radians(23.439 - 0.0000004 * t)

    ra = np.mod(np.arctan2(np.cos(oblqec) * np.sin(eclong), np.cos(eclong)), 2 * np.pi)
    dec = np.arcsin(np.sin(oblqec) * np.sin(eclong))

    gmst = np.mod(6.697375 + 0.0657098242 * t + hours, 24.0)
    lmst = np.radians(np.mod(gmst + lon / 15.0, 24.0) * 15.0)
    ha = np.mod(lmst - ra + np.pi, 2 * np.pi) - np.pi

    phi = math.radians(lat)
    sin_el = np.clip(
        np.sin(dec) * np.sin(phi) + np.cos(dec) * np.cos(phi) * np.cos(ha), -1.0, 1.0
    )
    el = np.arcsin(sin_el)
    az = np.mod(
        np.arctan2(
            -np.cos(dec) * np.sin(ha),
            np.sin(dec) * np.cos(phi) - np.cos(dec) * np.sin(phi) * np.cos(ha),
        ),
        2 * np.pi,
    )

    altitude = _quantize_angle(np.degrees(el))
    azimuth = np.mod(np.degrees(az), 360.0)
    zenith = 90.0 - altitude
    return altitude, azimuth, zenith


def solar_position(t: datetime, site: GeoPoint) -> SolarPosition:
    """Apparent geometric solar position at UTC time ``t``.

    Uses the Astronomical Almanac low-precision approximation
    (Michalsky 1988), accurate to ~0.01° within 1950-2050. No
    atmospheric refraction is applied.

    Parameters
    ----------
    t : datetime
        Timestamp; naive values are taken as UTC.
    site : GeoPoint
        Observer location.

    Returns
    -------
    SolarPosition
        Altitude, azimuth (clockwise from north) and zenith in degrees,
        with ``zenith + altitude == 90`` exact.
    """
    alt, az, zen = _solar_position_arrays([t], site.lat, site.lon)
    return SolarPosition(altitude=float(alt[0]), azimuth=float(az[0]), zenith=float(zen[0]))


def air_mass(theta_z):
    """Relative air mass after Kasten & Young (1989).

    ``m = 1 / (cos(z) + 0.50572 * (96.07995 - z)**-1.6364)`` with ``z`` in
    degrees, valid for ``0 <= z < 90``. At or beyond 90° there is no direct
    atmospheric path and NaN is returned (never an extrapolation).

    Parameters
    ----------
    theta_z : float or ndarray
        Solar zenith angle(s), degrees.

    Returns
    -------
    float or ndarray
        Dimensionless air mass; NaN where ``theta_z >= 90``.
    """
    z = np.asarray(theta_z, dtype=float)
    if np.any(z < 0.0):
        raise ValueError("zenith angle must be >= 0")
    with np.errstate(invalid="ignore"):
        m = np.where(
            z < 90.0,
            1.0
            / (
                np.cos(np.radians(z))
                + 0.50572 * np.maximum(96.07995 - z, 1e-9) ** -1.6364
            ),
            np.nan,
        )
    if np.isscalar(theta_z):
        return float(m)
    return m


def extraterrestrial_normal(doy) -> np.ndarray:
    """Extraterrestrial normal irradiance for a day of year, W/m²."""
    return SOLAR_CONSTANT * (1.0 + 0.033 * np.cos(2.0 * np.pi * np.asarray(doy) / 365.0))


def _poa_arrays(
    cfg: ArrayConfig,
    zenith: np.ndarray,
    azimuth: np.ndarray,
    g_bn: np.ndarray,
    g_h: np.ndarray,
    g_dh: np.ndarray,
    airmass: np.ndarray,
    doy: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    beta = math.radians(cfg.tilt)
    cos_beta = math.cos(beta)
    sin_beta = math.sin(beta)

    day = zenith < 90.0
    zen_rad = np.radians(zenith)
    cos_zen = np.cos(zen_rad)
    cos_inc = cos_beta * cos_zen + sin_beta * np.sin(zen_rad) * np.cos(
        np.radians(azimuth - cfg.azimuth)
    )

    direct = np.where(day, g_bn * np.maximum(0.0, cos_inc), 0.0)

    # Perez 1990 sky diffuse
    sky = np.zeros_like(direct)
    ok = day & (g_dh > 0.0) & np.isfinite(airmass)
    if np.any(ok):
        z3 = zen_rad[ok] ** 3
        eps = ((g_dh[ok] + g_bn[ok]) / g_dh[ok] + 1.041 * z3) / (1.0 + 1.041 * z3)
        delta = g_dh[ok] * airmass[ok] / extraterrestrial_normal(doy[ok])
        bins = np.searchsorted(_PEREZ_BIN_EDGES, eps, side="right")
        f = _PEREZ_COEFFS[bins]
        f1 = np.maximum(0.0, f[:, 0] + f[:, 1] * delta + f[:, 2] * zen_rad[ok])
        f2 = f[:, 3] + f[:, 4] * delta + f[:, 5] * zen_rad[ok]
        a = np.maximum(0.0, cos_inc[ok])
        b = np.maximum(_MAX_ZENITH_FOR_PEREZ_B, cos_zen[ok])
        sky[ok] = np.maximum(
            0.0,
            g_dh[ok]
            * ((1.0 - f1) * (1.0 + cos_beta) / 2.0 + f1 * a / b + f2 * sin_beta),
        )

    reflected = g_h * cfg.albedo * (1.0 - cos_beta) / 2.0
    total = direct + sky + reflected
    return direct, sky, reflected, total


def poa_irradiance(
    cfg: ArrayConfig, sp: SolarPosition, rec: TmyRecord, m: float
) -> PoaComponents:
    """Plane-of-array irradiance components for one hour.

    Beam is the geometric projection of ``g_bn`` onto the array; sky
    diffuse follows Perez et al. (1990) with the all-sites composite
    coefficients; ground reflection is isotropic with the configured
    albedo. At ``zenith >= 90°`` both beam and sky diffuse are zero.

    Parameters
    ----------
    cfg : ArrayConfig
    sp : SolarPosition
    rec : TmyRecord
    m : float
        Air mass for the hour (NaN at night).

    Returns
    -------
    PoaComponents
        ``(direct, sky_diffuse, ground_reflected, total)``, each >= 0,
        with ``total`` the exact sum of the three.
    """
    doy = float(rec.t.timetuple().tm_yday)
    d, s, r, tot = _poa_arrays(
        cfg,
        np.asarray([sp.zenith]),
        np.asarray([sp.azimuth]),
        np.asarray([rec.g_bn]),
        np.asarray([rec.g_h]),
        np.asarray([rec.g_dh]),
        np.asarray([m], dtype=float),
        np.asarray([doy]),
    )
    return PoaComponents(float(d[0]), float(s[0]), float(r[0]), float(tot[0]))


def module_temperature(rec: TmyRecord, g_poa: float, cfg: ArrayConfig) -> float:
    """Faiman (2008) module temperature, °C.

    ``T_pv = T_amb + G_poa / (u0 + u1 * v_w)``.
    """
    if g_poa < 0:
        raise ValueError("g_poa must be >= 0")
    return rec.t_amb + g_poa / (cfg.u0 + cfg.u1 * rec.v_w)


def adr_efficiency(g_poa, t_pv, cfg: ArrayConfig):
    """Relative array efficiency from the ADR model.

    Analytical form of Driesse, Theristis & Stein (2021): irradiance is
    normalized by ``g_stc`` and the five ``AdrParams`` shape the
    irradiance/temperature response. By construction the value at
    ``(g_stc, 25 °C)`` equals ``k_a`` and the value at zero irradiance
    is 0.

    Parameters
    ----------
    g_poa : float or ndarray
        Plane-of-array irradiance, W/m².
    t_pv : float or ndarray
        Module temperature, °C.
    cfg : ArrayConfig

    Returns
    -------
    float or ndarray
        Efficiency fraction (relative to the reference-condition scale).
    """
    k_a, k_d, t_cd, k_rs, k_rsh = cfg.adr_params
    s = np.asarray(g_poa, dtype=float) / cfg.g_stc
    if np.any(s < 0):
        raise ValueError("g_poa must be >= 0")
    dt = np.asarray(t_pv, dtype=float) - 25.0

    s_o = 10.0 ** (k_d + t_cd * dt)
    s_o_ref = 10.0 ** k_d
    v = np.log(s / s_o + 1.0) / np.log(1.0 / s_o_ref + 1.0)
    eta = k_a * ((1.0 + k_rs + k_rsh) * v - k_rs * s - k_rsh * v**2)
    if np.isscalar(g_poa) and np.isscalar(t_pv):
        return float(eta)
    return eta


def power_profile(site: GeoPoint, cfg: ArrayConfig, tmy: TmySeries) -> PowerProfile:
    """Annual hourly DC power of an array at ``site`` under ``tmy`` weather.

    For each hour: solar position -> air mass -> POA irradiance -> Faiman
    module temperature -> ADR efficiency -> ``P = p_stc * eta * G_poa /
    g_stc``, clipped at zero. Deterministic for fixed inputs.
    """
    alt, az, zen = _solar_position_arrays(tmy.times, site.lat, site.lon)
    m = air_mass(zen)
    doy = np.array([float(t.timetuple().tm_yday) for t in tmy.times])
    _, _, _, g_poa = _poa_arrays(cfg, zen, az, tmy.g_bn, tmy.g_h, tmy.g_dh, m, doy)
    t_pv = tmy.t_amb + g_poa / (cfg.u0 + cfg.u1 * tmy.v_w)
    eta = adr_efficiency(g_poa, t_pv, cfg)
    watts = np.maximum(0.0, cfg.p_stc * eta * g_poa / cfg.g_stc)
    return PowerProfile(times=tuple(tmy.times), watts=watts)


def scale_profile(p: PowerProfile, panel_area_m2: float) -> PowerProfile:
    """Scale a per-m² profile to a total detected panel area."""
    if panel_area_m2 < 0:
        raise ValueError("panel area must be >= 0")
    return PowerProfile(times=p.times, watts=p.watts * panel_area_m2)


class TmyFormat:
    """Supported TMY input encodings."""

    PVGIS_CSV = "pvgis-csv"


_PVGIS_TIME_COL = "time(UTC)"
_PVGIS_REQUIRED = [_PVGIS_TIME_COL, "T2m", "G(h)", "Gb(n)", "Gd(h)", "WS10m"]


def load_tmy(
    source: Union[str, Path, bytes, IO[bytes]],
    format: str = TmyFormat.PVGIS_CSV,
    year: int = DEFAULT_PROFILE_YEAR,
) -> TmySeries:
    """Parse TMY weather into a validated 8760-hour series.

    The PVGIS CSV layout is auto-detected: a free-form header block, then
    a column header line starting with ``time(UTC)``, then hourly rows.
    Rows are mapped positionally onto :func:`hourly_timestamps` of
    ``year``.

    Raises
    ------
    TmyFormatError
        On a missing header, a wrong row count, an unparsable row, or an
        invariant violation (e.g. negative irradiance); row-level errors
        carry the 1-based source line number.
    """
    if format != TmyFormat.PVGIS_CSV:
        raise ValueError(f"unsupported TMY format: {format}")
    text = _read_text(source)
    lines = text.splitlines()

    header_i = None
    for i, line in enumerate(lines):
        if line.strip().startswith(_PVGIS_TIME_COL):
            header_i = i
            break
    if header_i is None:
        raise TmyFormatError(f"no '{_PVGIS_TIME_COL}' column header line found")
    cols = [c.strip() for c in lines[header_i].split(",")]
    missing = [c for c in _PVGIS_REQUIRED if c not in cols]
    if missing:
        raise TmyFormatError(f"missing columns: {', '.join(missing)}", line=header_i + 1)
    idx = {c: cols.index(c) for c in _PVGIS_REQUIRED}

    rows = []
    for i in range(header_i + 1, len(lines)):
        line = lines[i].strip()
        if not line:
            break
        first = line.split(",", 1)[0]
        if not (len(first) == 13 and first[8] == ":" and first[:8].isdigit()):
            break  # footer commentary below the data block
        lineno = i + 1
        parts = line.split(",")
        if len(parts) < len(cols):
            raise TmyFormatError(f"expected {len(cols)} fields, got {len(parts)}", line=lineno)
        try:
            g_bn = float(parts[idx["Gb(n)"]])
            g_h = float(parts[idx["G(h)"]])
            g_dh = float(parts[idx["Gd(h)"]])
            t_amb = float(parts[idx["T2m"]])
            v_w = float(parts[idx["WS10m"]])
        except ValueError as exc:
            raise TmyFormatError(f"unparsable value ({exc})", line=lineno) from exc
        for name, val in (("Gb(n)", g_bn), ("G(h)", g_h), ("Gd(h)", g_dh)):
            if val < 0.0:
                raise TmyFormatError(f"negative irradiance {name}={val}", line=lineno)
        if g_h < g_dh - 1.0:
            raise TmyFormatError(f"G(h)={g_h} below Gd(h)={g_dh} - 1", line=lineno)
        if not -60.0 <= t_amb <= 60.0:
            raise TmyFormatError(f"T2m={t_amb} outside [-60, 60]", line=lineno)
        if v_w < 0.0:
            raise TmyFormatError(f"negative wind speed WS10m={v_w}", line=lineno)
        rows.append((g_bn, g_h, g_dh, t_amb, v_w))

    if len(rows) != HOURS_PER_YEAR:
        raise TmyFormatError(
            f"wrong row count: got {len(rows)} data rows, expected {HOURS_PER_YEAR}"
        )

    arr = np.array(rows)
    return TmySeries(
        times=tuple(hourly_timestamps(year)),
        g_bn=arr[:, 0],
        g_h=arr[:, 1],
        g_dh=arr[:, 2],
        t_amb=arr[:, 3],
        v_w=arr[:, 4],
    )


def _read_text(source) -> str:
    if isinstance(source, (str, Path)):
        return Path(source).read_text(encoding="utf-8-sig")
    if isinstance(source, bytes):
        return source.decode("utf-8-sig")
    data = source.read()
    if isinstance(data, bytes):
        return data.decode("utf-8-sig")
    return data
