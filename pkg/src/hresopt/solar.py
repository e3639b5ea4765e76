"""Solar geometry and plane-of-array irradiance.

Angles are in degrees at the API boundary. Functions accept scalars or numpy
arrays unless stated otherwise.
"""
from dataclasses import dataclass

import numpy as np

SOLAR_CONSTANT = 1367.0  # W/m^2
MAX_DECLINATION = 23.45
BEAM_RATIO_CAP = 10.0

TRANSPOSITION_CONVENTIONS = ("paper", "standard")


class SunBelowHorizon(ValueError):
    """Raised by :func:`beam_ratio` when the horizontal cosine is not positive."""


@dataclass(frozen=True)
class SolarAngles:
    declination_deg: float
    hour_angle_deg: float
    latitude_deg: float
    tilt_deg: float

    def __post_init__(self):
        if not -MAX_DECLINATION - 1e-9 <= self.declination_deg <= MAX_DECLINATION + 1e-9:
            raise ValueError(f"declination {self.declination_deg} outside ±23.45°")
        if not 0.0 <= self.tilt_deg <= 90.0:
            raise ValueError(f"tilt {self.tilt_deg} outside [0, 90]°")


def declination(n):
    """Solar declination (degrees) for day of year ``n`` in 1..365."""
    n_arr = np.asarray(n)
    if np.any(n_arr < 1) or np.any(n_arr > 365):
        raise ValueError(f"day of year must be in 1..365, got {n}")
    return MAX_DECLINATION * np.sin(np.radians(360.0 * (284.0 + n_arr) / 365.0))


def hour_angle(solar_hour):
    """Hour angle (degrees), 15° per hour away from solar noon."""
    h = np.asarray(solar_hour, dtype=float)
    if np.any(h < 0) or np.any(h > 24):
        raise ValueError(f"solar hour must be in [0, 24], got {solar_hour}")
    return 15.0 * (h - 12.0)


def eccentricity_factor(n):
    return 1.0 + 0.033 * np.cos(np.radians(360.0 * np.asarray(n) / 365.0))


def cos_zenith(latitude_deg, declination_deg, hour_angle_deg):
    """cos φ cos δ cos ω + sin φ sin δ; negative when the sun is down."""
    phi = np.radians(latitude_deg)
    dec = np.radians(declination_deg)
    ome = np.radians(hour_angle_deg)
    return np.cos(phi) * np.cos(dec) * np.cos(ome) + np.sin(phi) * np.sin(dec)


def extraterrestrial_horizontal(n, latitude_deg, hour_angle_deg):
    """Extraterrestrial irradiance on a horizontal plane (W/m^2), zero at night."""
    cz = cos_zenith(latitude_deg, declination(n), hour_angle_deg)
    return SOLAR_CONSTANT * eccentricity_factor(n) * np.maximum(cz, 0.0)


def clearness_index(ghi, n, latitude_deg, hour_angle_deg):
    """GHI over extraterrestrial horizontal irradiance, clipped to [0, 1].

    Hours with no extraterrestrial irradiance get 0.
    """
    g0 = extraterrestrial_horizontal(n, latitude_deg, hour_angle_deg)
    ghi = np.asarray(ghi, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        kt = np.where(g0 > 0.0, ghi / np.where(g0 > 0.0, g0, 1.0), 0.0)
    return np.clip(kt, 0.0, 1.0)


def _tilted_angle(latitude_deg, tilt_deg, convention):
    if convention == "paper":
        return latitude_deg + tilt_deg
    if convention == "standard":
        return latitude_deg - tilt_deg
    raise ValueError(f"unknown transposition convention {convention!r}")


def beam_ratio(angles: SolarAngles, convention="paper"):
    """Ratio of beam irradiance on the tilted plane to that on the horizontal.

    With ``convention="paper"`` the numerator uses cos(φ+β), sin(φ+β);
    ``"standard"`` uses the equator-facing (φ-β) form. The result is clamped
    to [0, 10].

    Raises
    ------
    SunBelowHorizon
        If the denominator is not positive; the caller should treat the beam
        component as zero for that hour.
    """
    den = float(cos_zenith(angles.latitude_deg, angles.declination_deg, angles.hour_angle_deg))
    if den <= 0.0:
        raise SunBelowHorizon(f"sun below horizon (cos zenith = {den:.4g})")
    num = float(cos_zenith(_tilted_angle(angles.latitude_deg, angles.tilt_deg, convention),
                           angles.declination_deg, angles.hour_angle_deg))
    return min(max(num / den, 0.0), BEAM_RATIO_CAP)


def beam_ratio_array(latitude_deg, tilt_deg, declination_deg, hour_angle_deg, convention="paper"):
    """Vectorised :func:`beam_ratio` that returns 0 where the sun is down."""
    den = cos_zenith(latitude_deg, declination_deg, hour_angle_deg)
    num = cos_zenith(_tilted_angle(latitude_deg, tilt_deg, convention), declination_deg, hour_angle_deg)
    up = den > 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        rb = np.where(up, num / np.where(up, den, 1.0), 0.0)
    return np.clip(rb, 0.0, BEAM_RATIO_CAP)


def diffuse_fraction(k_t):
    """Diffuse share of global horizontal irradiance from the clearness index.

    Erbs-type correlation: linear below 0.22, quartic up to 0.80, constant
    0.165 above.
    """
    k = np.asarray(k_t, dtype=float)
    if np.any(k < 0.0) or np.any(k > 1.0):
        raise ValueError(f"clearness index must be in [0, 1], got {k_t}")
    poly = 0.9511 - 0.1604 * k + 4.388 * k**2 - 16.638 * k**3 + 12.336 * k**4
    out = np.where(k <= 0.22, 1.0 - 0.09 * k, np.where(k <= 0.80, poly, 0.165))
    out = np.clip(out, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def tilted_irradiance(g, d, r_b, tilt_deg, rho_g):
    """Total irradiance on the tilted plane (W/m^2): beam + isotropic diffuse + ground."""
    g = np.asarray(g, dtype=float)
    d = np.asarray(d, dtype=float)
    if np.any(d < 0.0) or np.any(d > g + 1e-9):
        raise ValueError("need g >= d >= 0")
    if not 0.0 <= tilt_deg <= 90.0:
        raise ValueError(f"tilt {tilt_deg} outside [0, 90]°")
    if not 0.0 <= rho_g <= 1.0:
        raise ValueError(f"ground reflectance {rho_g} outside [0, 1]")
    cb = np.cos(np.radians(tilt_deg))
    out = np.maximum((g - d) * r_b + d * (1.0 + cb) / 2.0 + g * rho_g * (1.0 - cb) / 2.0, 0.0)
    return float(out) if out.ndim == 0 else out
