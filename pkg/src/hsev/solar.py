"""Sun position and clear-sky irradiance.

Implements the standard declination / equation-of-time / hour-angle solar
geometry and the Bird & Hulstrom broadband clear-sky model: Rayleigh, ozone,
uniformly-mixed-gas, water-vapor, and aerosol transmittances compose a direct
beam; an aerosol-scattered diffuse term and a sky-ground reflection multiplier
complete the global horizontal irradiance. All operations are pure functions.
"""

from __future__ import annotations

import datetime as _dt
import math
from dataclasses import dataclass, field

from .errors import InputDomainError

SOLAR_CONSTANT = 1367.0  # W/m2, extraterrestrial normal irradiance at 1 AU
DEG_TO_RAD = math.pi / 180.0
RAD_TO_DEG = 180.0 / math.pi

# Reference surface pressure for airmass correction, millibars.
PRESSURE_REFERENCE_MB = 1013.0

YEAR_MIN = 1950
YEAR_MAX = 2100


@dataclass(frozen=True)
class GeoLocation:
    """An observer site: latitude/longitude in degrees, UTC offset in hours.

    utc_offset is local clock minus UTC, including daylight saving when the
    local clock observes it.
    """

    latitude: float
    longitude: float
    utc_offset: float

    def __post_init__(self):
        if not -90.0 <= self.latitude <= 90.0:
            raise InputDomainError(f"latitude {self.latitude} outside [-90, 90]")
        if not -180.0 <= self.longitude <= 180.0:
            raise InputDomainError(f"longitude {self.longitude} outside [-180, 180]")
        if not -12.0 <= self.utc_offset <= 14.0:
            raise InputDomainError(f"utc_offset {self.utc_offset} outside [-12, 14]")


@dataclass(frozen=True)
class AtmosphereParams:
    """Broadband atmospheric inputs to the clear-sky model.

    Defaults are the conventional clear-atmosphere values used with the
    published model worksheet. They describe a clean continental sky; see
    the package defaults module for the site-effective atmosphere used by
    the rooftop replay.
    """

    surface_pressure: float = 1013.0      # millibars
    ozone: float = 0.3                    # atm-cm
    precipitable_water: float = 1.5       # cm
    aerosol_optical_depth_500nm: float = 0.10
    aerosol_optical_depth_380nm: float = 0.15
    forward_scatter_fraction: float = 0.84
    ground_albedo: float = 0.2

    def __post_init__(self):
        for name in ("surface_pressure", "ozone", "precipitable_water",
                     "aerosol_optical_depth_500nm", "aerosol_optical_depth_380nm"):
            if getattr(self, name) < 0.0:
                raise InputDomainError(f"{name} must be nonnegative")
        if not 0.0 <= self.forward_scatter_fraction <= 1.0:
            raise InputDomainError("forward_scatter_fraction outside [0, 1]")
        if not 0.0 <= self.ground_albedo <= 1.0:
            raise InputDomainError("ground_albedo outside [0, 1]")


@dataclass(frozen=True)
class SolarInstant:
    """Sun geometry at one instant: zenith angle (degrees), earth-sun
    distance factor (ratio of actual to mean extraterrestrial irradiance),
    and local solar time in hours."""

    zenith_angle: float
    earth_sun_distance_factor: float
    local_solar_time: float

    def __post_init__(self):
        if not 0.0 <= self.zenith_angle <= 180.0:
            raise InputDomainError(f"zenith_angle {self.zenith_angle} outside [0, 180]")
        if not 0.96 <= self.earth_sun_distance_factor <= 1.04:
            raise InputDomainError("earth_sun_distance_factor outside [0.96, 1.04]")


@dataclass(frozen=True)
class IrradianceSample:
    """Direct-normal, diffuse-horizontal, and global-horizontal irradiance
    (W/m2) at an instant. All components are zero when the sun is below the
    horizon."""

    direct_normal: float
    diffuse_horizontal: float
    global_horizontal: float
    timestamp: _dt.datetime | None = None


@dataclass(frozen=True)
class DayStats:
    """Window statistics of a clear-sky day profile."""

    window_start: _dt.time
    window_end: _dt.time
    average_ghi: float
    max_ghi: float
    time_of_max: _dt.time


def _day_angle(day_of_year: int) -> float:
    return 2.0 * math.pi * (day_of_year - 1) / 365.0


def extraterrestrial_normal(day_of_year: int) -> float:
    """Extraterrestrial normal irradiance (W/m2) for a day of the year."""
    g = _day_angle(day_of_year)
    return SOLAR_CONSTANT * (1.00011 + 0.034221 * math.cos(g) + 0.00128 * math.sin(g)
                             + 0.000719 * math.cos(2 * g) + 0.000077 * math.sin(2 * g))


def _declination(day_of_year: int) -> float:
    """Solar declination in radians (trigonometric series)."""
    g = _day_angle(day_of_year)
    return (0.006918 - 0.399912 * math.cos(g) + 0.070257 * math.sin(g)
            - 0.006758 * math.cos(2 * g) + 0.000907 * math.sin(2 * g)
            - 0.002697 * math.cos(3 * g) + 0.00148 * math.sin(3 * g))


def _equation_of_time(day_of_year: int) -> float:
    """Equation of time in minutes (trigonometric series)."""
    g = _day_angle(day_of_year)
    return 229.18 * (0.000075 + 0.001868 * math.cos(g) - 0.032077 * math.sin(g)
                     - 0.014615 * math.cos(2 * g) - 0.040849 * math.sin(2 * g))


def solar_position(location: GeoLocation, timestamp: _dt.datetime) -> SolarInstant:
    """Compute sun geometry for a civil date-time at a site.

    Args:
        location: observer site.
        timestamp: naive local clock time; interpreted with the site's
            fixed utc_offset. Year must lie in [1950, 2100].

    Returns:
        SolarInstant with the zenith angle (degrees), the earth-sun
        distance factor, and the local solar time (hours).
    """
    if not YEAR_MIN <= timestamp.year <= YEAR_MAX:
        raise InputDomainError(f"timestamp year {timestamp.year} outside "
                               f"[{YEAR_MIN}, {YEAR_MAX}]")
    doy = timestamp.timetuple().tm_yday
    hour = timestamp.hour + timestamp.minute / 60.0 + timestamp.second / 3600.0
    eqt = _equation_of_time(doy)
    # Longitude correction relative to the time-zone meridian, in degrees of
    # hour angle; eqt contributes 1 degree per 4 minutes.
    hour_angle = (15.0 * (hour - 12.0)
                  + (location.longitude - 15.0 * location.utc_offset)
                  + eqt / 4.0)
    dec = _declination(doy)
    lat = location.latitude * DEG_TO_RAD
    cos_zen = (math.sin(lat) * math.sin(dec)
               + math.cos(lat) * math.cos(dec) * math.cos(hour_angle * DEG_TO_RAD))
    cos_zen = min(1.0, max(-1.0, cos_zen))
    zenith = math.acos(cos_zen) * RAD_TO_DEG
    solar_time = hour + ((location.longitude - 15.0 * location.utc_offset) * 4.0
                         + eqt) / 60.0
    factor = extraterrestrial_normal(doy) / SOLAR_CONSTANT
    return SolarInstant(zenith_angle=zenith,
                        earth_sun_distance_factor=factor,
                        local_solar_time=solar_time)


def bird_clear_sky(instant: SolarInstant, atmosphere: AtmosphereParams,
                   timestamp: _dt.datetime | None = None) -> IrradianceSample:
    """Broadband clear-sky irradiance for one sun position.

    Args:
        instant: sun geometry from solar_position.
        atmosphere: broadband atmospheric inputs.
        timestamp: optional clock time recorded on the sample.

    Returns:
        IrradianceSample; all components are zero for zenith >= 90 degrees.
    """
    z = instant.zenith_angle
    if z >= 90.0:
        return IrradianceSample(0.0, 0.0, 0.0, timestamp)
    cos_zen = math.cos(z * DEG_TO_RAD)
    etr = SOLAR_CONSTANT * instant.earth_sun_distance_factor

    airmass = 1.0 / (cos_zen + 0.15 * (93.885 - z) ** -1.25)
    am_press = airmass * atmosphere.surface_pressure / PRESSURE_REFERENCE_MB

    t_rayleigh = math.exp(-0.0903 * am_press ** 0.84
                          * (1.0 + am_press - am_press ** 1.01))

    ozone_path = atmosphere.ozone * airmass
    t_ozone = (1.0 - 0.1611 * ozone_path * (1.0 + 139.48 * ozone_path) ** -0.3034
               - 0.002715 * ozone_path
               / (1.0 + 0.044 * ozone_path + 0.0003 * ozone_path ** 2))

    t_gases = math.exp(-0.0127 * am_press ** 0.26)

    water_path = atmosphere.precipitable_water * airmass
    t_water = (1.0 - 2.4959 * water_path
               / ((1.0 + 79.034 * water_path) ** 0.6828 + 6.385 * water_path))

    # Broadband aerosol optical depth from the two wavelength samples.
    tau = (0.2758 * atmosphere.aerosol_optical_depth_380nm
           + 0.35 * atmosphere.aerosol_optical_depth_500nm)
    t_aerosol = math.exp(-(tau ** 0.873) * (1.0 + tau - tau ** 0.7088)
                         * airmass ** 0.9108)
    t_aerosol_abs = 1.0 - 0.1 * (1.0 - airmass + airmass ** 1.06) * (1.0 - t_aerosol)

    sky_reflectivity = (0.0685 + (1.0 - atmosphere.forward_scatter_fraction)
                        * (1.0 - t_aerosol / t_aerosol_abs))

    direct_normal = 0.9662 * etr * t_aerosol * t_water * t_gases * t_ozone * t_rayleigh

    scattered = (etr * cos_zen * 0.79 * t_ozone * t_gases * t_water * t_aerosol_abs
                 * (0.5 * (1.0 - t_rayleigh)
                    + atmosphere.forward_scatter_fraction
                    * (1.0 - t_aerosol / t_aerosol_abs))
                 / (1.0 - airmass + airmass ** 1.02))

    ghi = (direct_normal * cos_zen + scattered) / (1.0 - atmosphere.ground_albedo
                                                   * sky_reflectivity)
    ghi = max(ghi, 0.0)
    direct_normal = max(direct_normal, 0.0)
    diffuse = max(ghi - direct_normal * cos_zen, 0.0)
    return IrradianceSample(direct_normal=direct_normal,
                            diffuse_horizontal=diffuse,
                            global_horizontal=ghi,
                            timestamp=timestamp)


def day_profile(location: GeoLocation, date: _dt.date,
                atmosphere: AtmosphereParams,
                window: tuple[_dt.time, _dt.time],
                step: float = 60.0) -> tuple[list[IrradianceSample], DayStats]:
    """Sample clear-sky irradiance across a clock-time window of one day.

    Args:
        location: observer site.
        date: civil date.
        atmosphere: broadband atmospheric inputs.
        window: (start, end) local clock times, start strictly before end.
        step: sample spacing in seconds, within [1, 3600].

    Returns:
        (samples, stats): samples at the fixed step starting at the window
        start (the end point is included when the window length is an exact
        multiple of the step), and DayStats whose average is the arithmetic
        mean of the sampled global horizontal irradiance.
    """
    if not 1.0 <= step <= 3600.0:
        raise InputDomainError(f"step {step} outside [1, 3600] seconds")
    start, end = window
    t0 = _dt.datetime.combine(date, start)
    t1 = _dt.datetime.combine(date, end)
    if t1 <= t0:
        raise InputDomainError("empty window: end must be after start")

    samples: list[IrradianceSample] = []
    count = int((t1 - t0).total_seconds() // step)
    for k in range(count + 1):
        ts = t0 + _dt.timedelta(seconds=k * step)
        instant = solar_position(location, ts)
        samples.append(bird_clear_sky(instant, atmosphere, timestamp=ts))

    ghis = [s.global_horizontal for s in samples]
    best = max(range(len(ghis)), key=lambda i: (ghis[i], -i))
    stats = DayStats(window_start=start, window_end=end,
                     average_ghi=sum(ghis) / len(ghis),
                     max_ghi=ghis[best],
                     time_of_max=samples[best].timestamp.time())
    return samples, stats
