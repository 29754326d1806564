"""Planar geometry for a two-node radio link and a nearby reflector.

All positions are 2-D coordinates in metres.  The reflecting body is
treated as a point on the constant-excess-path ellipse whose foci are
the transmitter and receiver, so every quantity the propagation model
needs (excess path length, its directional derivative, the incidence
angle and the Fresnel reflection magnitude) reduces to a function of
the reflector position.

Positions may be passed as length-2 sequences or as (..., 2) arrays;
operations broadcast over the leading axes.
"""

from dataclasses import dataclass, field

import numpy as np

C_LIGHT = 299792458.0
"""Vacuum speed of light in m/s, used to derive per-channel wavelengths."""

DEGENERATE_DISTANCE_M = 1e-9
"""Reflector positions closer than this to either node are rejected."""


class DegenerateGeometryError(ValueError):
    """Reflector position coincides with one of the link nodes."""


@dataclass(frozen=True)
class LinkGeometry:
    """Transmitter and receiver positions of a single radio link."""

    tx: tuple[float, float]
    rx: tuple[float, float]

    def __post_init__(self):
        if np.allclose(self.tx, self.rx):
            raise ValueError("transmitter and receiver must be distinct points")

    @property
    def node_distance(self) -> float:
        """Direct path length between the nodes in metres."""
        return float(np.hypot(self.rx[0] - self.tx[0], self.rx[1] - self.tx[1]))


@dataclass(frozen=True)
class ReflectorMotion:
    """Rest position and motion law of the breathing reflector.

    The instantaneous position is
    ``p(t) = rest + velocity * t + amplitude * sin(2*pi*breath_freq*t) * direction``.
    ``direction`` must be a unit vector; ``velocity`` is a 2-D vector in
    m/s and defaults to a stationary reflector.
    """

    rest: tuple[float, float]
    direction: tuple[float, float] = (0.0, -1.0)
    amplitude_m: float = 0.01
    breath_freq_hz: float = 0.2
    velocity_mps: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        norm = np.hypot(*self.direction)
        if not np.isclose(norm, 1.0, rtol=0, atol=1e-9):
            raise ValueError(f"direction must be a unit vector, got norm {norm}")
        if self.amplitude_m < 0:
            raise ValueError("amplitude_m must be non-negative")
        if self.breath_freq_hz < 0:
            raise ValueError("breath_freq_hz must be non-negative")

    def position(self, t):
        """Reflector position at time(s) ``t`` as an (..., 2) array."""
        t = np.asarray(t, dtype=float)
        disp = self.amplitude_m * np.sin(2 * np.pi * self.breath_freq_hz * t)
        return (np.asarray(self.rest)
                + np.multiply.outer(t, np.asarray(self.velocity_mps))
                + np.multiply.outer(disp, np.asarray(self.direction)))


@dataclass(frozen=True)
class MediumParams:
    """Electromagnetic parameters of the carrier and reflecting surface."""

    wavelength_m: float = 0.125
    rel_permittivity: float = 1.5
    path_gain_exponent: float = 2.0

    def __post_init__(self):
        if self.wavelength_m <= 0:
            raise ValueError("wavelength_m must be positive")
        if self.rel_permittivity < 1:
            raise ValueError("rel_permittivity must be >= 1")


def _node_offsets(link: LinkGeometry, p):
    """Offsets from both nodes to ``p`` and their norms, with degeneracy check."""
    p = np.asarray(p, dtype=float)
    to_tx = p - np.asarray(link.tx)
    to_rx = p - np.asarray(link.rx)
    d_tx = np.linalg.norm(to_tx, axis=-1)
    d_rx = np.linalg.norm(to_rx, axis=-1)
    if np.any(d_tx < DEGENERATE_DISTANCE_M) or np.any(d_rx < DEGENERATE_DISTANCE_M):
        raise DegenerateGeometryError(
            "reflector position coincides with a link node")
    return to_tx, to_rx, d_tx, d_rx


def excess_path(link: LinkGeometry, p):
    """Excess length of the reflected path over the direct path.

    Parameters
    ----------
    link : LinkGeometry
    p : array_like, shape (..., 2)
        Reflector position(s) in metres.

    Returns
    -------
    float or ndarray
        ``|p - tx| + |p - rx| - |rx - tx|``, non-negative by the
        triangle inequality.
    """
    _, _, d_tx, d_rx = _node_offsets(link, p)
    out = d_tx + d_rx - link.node_distance
    return float(out) if out.ndim == 0 else out


def gradient_projection(link: LinkGeometry, p, direction):
    """Directional derivative of the excess path length at ``p``.

    The gradient of the excess path is the sum of the unit vectors from
    each node to the reflector, so the projection onto a unit
    ``direction`` always lies in [-2, 2].  With ``direction`` set to a
    velocity vector the result is the excess-path rate of change in m/s.
    """
    to_tx, to_rx, d_tx, d_rx = _node_offsets(link, p)
    grad = to_tx / d_tx[..., None] + to_rx / d_rx[..., None]
    out = np.sum(grad * np.asarray(direction, dtype=float), axis=-1)
    return float(out) if out.ndim == 0 else out


def incidence_cosine(link: LinkGeometry, p):
    """Cosine of the node-to-node aperture at ``p`` and the incidence angle.

    Returns
    -------
    p_inner : float or ndarray
        Inner product of the unit vectors from the nodes to ``p``,
        in [-1, 1].  It approaches -1 on the link line between the
        nodes and +1 far away from the link.
    theta_i : float or ndarray
        Incidence angle ``pi/2 - arccos(p_inner)/2`` in radians,
        measured from the reflecting surface.
    """
    to_tx, to_rx, d_tx, d_rx = _node_offsets(link, p)
    inner = np.sum(to_tx * to_rx, axis=-1) / (d_tx * d_rx)
    inner = np.clip(inner, -1.0, 1.0)
    theta = np.pi / 2 - np.arccos(inner) / 2
    if inner.ndim == 0:
        return float(inner), float(theta)
    return inner, theta


def fresnel_coefficient(p_inner, medium: MediumParams):
    """Magnitude of the Fresnel reflection coefficient at the reflector.

    Uses the perpendicular-polarization form with the incidence angle
    measured from the surface, ``theta_i = pi/2 - arccos(p_inner)/2``:

        Gamma = |(sin(theta_i) - sqrt(er - cos^2(theta_i)))
                 / (sin(theta_i) + sqrt(er - cos^2(theta_i)))|

    equivalently, with s = sqrt((1 + p_inner)/2) and
    c2 = (1 - p_inner)/2, ``Gamma = (sqrt(er - c2) - s)/(sqrt(er - c2) + s)``
    for er > 1.  Its derivative with respect to ``p_inner`` is
    ``-Gamma / sqrt((p_inner^2 - 1) + 2*(p_inner + 1)*er)``, which pins
    the polarization convention.  Gamma -> 1 at grazing incidence
    (p_inner -> -1) and er = 1 gives no reflection at all.
    """
    p_inner = np.asarray(p_inner, dtype=float)
    if np.any(p_inner < -1 - 1e-12) or np.any(p_inner > 1 + 1e-12):
        raise ValueError("p_inner must lie in [-1, 1]")
    p_inner = np.clip(p_inner, -1.0, 1.0)
    er = medium.rel_permittivity
    sin_th = np.sqrt((1 + p_inner) / 2)
    root = np.sqrt(er - (1 - p_inner) / 2)
    denom = sin_th + root
    with np.errstate(invalid="ignore"):
        gamma = np.abs((root - sin_th) / denom)
    # er = 1 and p_inner = -1 makes both terms vanish; no contrast, no echo.
    gamma = np.where(denom == 0, 0.0, gamma)
    return float(gamma) if gamma.ndim == 0 else gamma


def effective_reflection(fresnel, excess_path_m, node_distance_m, path_gain_exponent):
    """Path-loss weighted reflection coefficient of the echo.

    Scales the Fresnel magnitude by the extra spreading loss of the
    longer reflected path: ``G = Gamma / (1 + delta/d)**(eta/2)``.
    Equal direct and reflected amplitudes would need delta = 0; any
    delta > 0 keeps G strictly below Gamma, so G < 1 whenever
    Gamma <= 1 and delta > 0.
    """
    excess_path_m = np.asarray(excess_path_m, dtype=float)
    if np.any(excess_path_m < 0):
        raise ValueError("excess path length must be non-negative")
    if node_distance_m <= 0:
        raise ValueError("node distance must be positive")
    out = fresnel / (1 + excess_path_m / node_distance_m) ** (path_gain_exponent / 2)
    return float(out) if out.ndim == 0 else out
