"""Single Fourier modes of the shell and their strains.

A mode with circumferential index n and axial index m (axial wave number
mhat = pi m / L) pairs the trigonometric factors as

    phi_r     = f_r(r)     cos(n theta) cos(mhat z)
    phi_theta = f_theta(r) sin(n theta) cos(mhat z)
    phi_z     = f_z(r)     cos(n theta) sin(mhat z)

which is the unique real pairing (up to the equivalent mirrored choice) for
which every strain entry carries a single trigonometric product.  For n = 0
the sin factor kills the theta component; torsional n = 0 content is out of
scope and f_theta is ignored there.

The linearization operator replaces the theta and z profiles by their
first-order Taylor expansion about the mid-surface r = 1, leaving phi_r
untouched.  Its image is parameterized by two amplitudes (a_theta, a_z) once
f_r(1) is normalized to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import Polynomial

from .material import IsotropicElasticity, SymStrain


@dataclass(frozen=True)
class ShellGeometry:
    """Slenderness h (thickness over radius) and axial length L, radius = 1."""

    h: float
    L: float

    def __post_init__(self):
        if not (0.0 < self.h < 1.0):
            raise ValueError(f"need 0 < h < 1, got h={self.h}")
        if not self.L > 0.0:
            raise ValueError(f"need L > 0, got L={self.L}")

    @property
    def r_inner(self) -> float:
        return 1.0 - 0.5 * self.h

    @property
    def r_outer(self) -> float:
        return 1.0 + 0.5 * self.h

    def contains_radius(self, r) -> bool:
        r = np.asarray(r)
        return bool(np.all((r >= self.r_inner - 1e-12) & (r <= self.r_outer + 1e-12)))


@dataclass(frozen=True)
class WaveNumbers:
    """Integer Fourier indices and the continuous axial wave number pi m / L."""

    m: int
    n: int
    L: float

    def __post_init__(self):
        if self.m < 1 or self.m != int(self.m):
            raise ValueError(f"axial index m must be an integer >= 1, got {self.m}")
        if self.n < 0 or self.n != int(self.n):
            raise ValueError(f"circumferential index n must be an integer >= 0, got {self.n}")

    @property
    def m_hat(self) -> float:
        return math.pi * self.m / self.L


@dataclass(frozen=True)
class RadialProfile:
    """Scalar radial profile with its derivative; both vectorize over r.

    ``poly`` is set when the profile is polynomial (the common case) so
    exact coefficient-level manipulations stay available.
    """

    value: Callable
    slope: Callable
    poly: Optional[Polynomial] = None

    @staticmethod
    def constant(c: float) -> "RadialProfile":
        return RadialProfile.from_polynomial(Polynomial([c]))

    @staticmethod
    def from_polynomial(poly: Polynomial) -> "RadialProfile":
        dpoly = poly.deriv()
        return RadialProfile(value=lambda r: poly(r), slope=lambda r: dpoly(r), poly=poly)


def affine_profile(value_at_1: float, slope: float) -> RadialProfile:
    """Profile value_at_1 + slope*(r-1)."""
    return RadialProfile.from_polynomial(
        Polynomial([value_at_1 - slope, slope])
    )


@dataclass(frozen=True)
class FourierMode:
    """Single Fourier mode with arbitrary C^1 radial profiles."""

    wn: WaveNumbers
    fr: RadialProfile
    ftheta: RadialProfile
    fz: RadialProfile


@dataclass(frozen=True)
class LinearizedMode:
    """Image of the linearization operator, normalized to f_r(1) = 1.

    theta profile: r a_theta + (r-1) n,   z profile: a_z + (r-1) mhat.
    ``fr`` defaults to the constant profile 1; use :func:`optimal_mode` for
    the energy-minimizing radial slope.
    """

    wn: WaveNumbers
    a_theta: float
    a_z: float
    fr: Optional[RadialProfile] = None

    def __post_init__(self):
        if self.fr is not None:
            v1 = float(self.fr.value(1.0))
            if abs(v1 - 1.0) > 1e-10:
                raise ValueError(f"f_r(1) must equal 1, got {v1}")

    def fr_value(self, r):
        if self.fr is None:
            return 1.0 + 0.0 * np.asarray(r, dtype=float)
        return self.fr.value(r)

    def fr_slope(self, r):
        if self.fr is None:
            return 0.0 * np.asarray(r, dtype=float)
        return self.fr.slope(r)


def _check_radius(geom: Optional[ShellGeometry], r):
    if geom is not None and not geom.contains_radius(r):
        raise ValueError("radius outside the shell wall")


def strain_components(mode: LinearizedMode, r, geom: Optional[ShellGeometry] = None) -> SymStrain:
    """Radial amplitude factors of the exact strain of a linearized mode.

    Each returned component multiplies its own trigonometric product; see the
    module docstring for the pairing.
    """
    _check_radius(geom, r)
    r = np.asarray(r, dtype=float)
    n = float(mode.wn.n)
    mh = mode.wn.m_hat
    at, az = mode.a_theta, mode.a_z
    f = mode.fr_value(r)
    fp = mode.fr_slope(r)
    return SymStrain(
        rr=fp,
        tt=(n * (r * at + (r - 1.0) * n) + f) / r,
        zz=mh * (az + (r - 1.0) * mh),
        rt=n * (1.0 - f) / (2.0 * r),
        rz=mh * (1.0 - f) / 2.0,
        tz=-(mh * r**2 * at + n * az + (r**2 - 1.0) * mh * n) / (2.0 * r),
    )


def simplified_strain(mode: LinearizedMode, r, geom: Optional[ShellGeometry] = None) -> SymStrain:
    """Pruned strain surrogate: radial shears dropped, sqrt(r) reweighting.

    Designed so the weighted radial integrands of the elastic form become
    polynomial; differs from the exact strain by O(sqrt(h)) in L2 for wave
    numbers within the slender-regime bounds.
    """
    _check_radius(geom, r)
    r = np.asarray(r, dtype=float)
    sq = np.sqrt(r)
    n = float(mode.wn.n)
    mh = mode.wn.m_hat
    at, az = mode.a_theta, mode.a_z
    fp = mode.fr_slope(r)
    zeros = 0.0 * r
    return SymStrain(
        rr=fp / sq,
        tt=(n * (r * at + (r - 1.0) * n) + 1.0) / sq,
        zz=mh * (az + (r - 1.0) * mh) / sq,
        rt=zeros,
        rz=zeros,
        tz=-(mh * r**2 * at + n * az + (r**2 - 1.0) * mh * n) / (2.0 * sq),
    )


def optimal_fr_slope(
    mode: LinearizedMode, r, elastic: IsotropicElasticity, geom: Optional[ShellGeometry] = None
):
    """Pointwise minimizer of the elastic integrand over the radial slope.

    f_r'(r) = -Lambda/(Lambda+2) * p(r) with
    p(r) = n r a_theta + (r-1) n^2 + 1 + mhat a_z + (r-1) mhat^2.
    """
    _check_radius(geom, r)
    r = np.asarray(r, dtype=float)
    n = float(mode.wn.n)
    mh = mode.wn.m_hat
    lam = elastic.Lambda
    p = n * r * mode.a_theta + (r - 1.0) * n**2 + 1.0 + mh * mode.a_z + (r - 1.0) * mh**2
    return -lam / (lam + 2.0) * p


def optimal_mode(
    wn: WaveNumbers, a_theta: float, a_z: float, elastic: IsotropicElasticity
) -> LinearizedMode:
    """Linearized mode carrying the energy-minimizing radial profile.

    Integrating the optimal slope from r = 1 gives the quadratic
    f_r(r) = 1 - k[(r-1) A + (r-1)^2 B / 2],  k = Lambda/(Lambda+2) = nu/(1-nu),
    with A = n a_theta + 1 + mhat a_z and B = n a_theta + n^2 + mhat^2.
    """
    n = float(wn.n)
    mh = wn.m_hat
    k = elastic.Lambda / (elastic.Lambda + 2.0)
    A = n * a_theta + 1.0 + mh * a_z
    B = n * a_theta + n**2 + mh**2
    rm1 = Polynomial([-1.0, 1.0])
    poly = 1.0 - k * (A * rm1 + 0.5 * B * rm1**2)
    return LinearizedMode(wn=wn, a_theta=a_theta, a_z=a_z, fr=RadialProfile.from_polynomial(poly))


def as_fourier(mode: LinearizedMode) -> FourierMode:
    """Expand a linearized mode into explicit radial profiles."""
    n = float(mode.wn.n)
    mh = mode.wn.m_hat
    fr = mode.fr if mode.fr is not None else RadialProfile.constant(1.0)
    ftheta = RadialProfile.from_polynomial(
        Polynomial([-n, mode.a_theta + n])
    )  # r a_theta + (r-1) n
    fz = affine_profile(mode.a_z, mh)
    return FourierMode(wn=mode.wn, fr=fr, ftheta=ftheta, fz=fz)


def strain_amplitudes(mode: FourierMode, r, geom: Optional[ShellGeometry] = None) -> SymStrain:
    """Strain amplitudes of a general mode from the cylindrical
    strain-displacement relations."""
    _check_radius(geom, r)
    r = np.asarray(r, dtype=float)
    n = float(mode.wn.n)
    mh = mode.wn.m_hat
    f_r = mode.fr.value(r)
    fp_r = mode.fr.slope(r)
    f_z = mode.fz.value(r)
    fp_z = mode.fz.slope(r)
    if mode.wn.n == 0:
        f_t = 0.0 * r
        fp_t = 0.0 * r
    else:
        f_t = mode.ftheta.value(r)
        fp_t = mode.ftheta.slope(r)
    return SymStrain(
        rr=fp_r,
        tt=(n * f_t + f_r) / r,
        zz=mh * f_z,
        rt=0.5 * (fp_t - (f_t + n * f_r) / r),
        rz=0.5 * (fp_z - mh * f_r),
        tz=-0.5 * (mh * f_t + n * f_z / r),
    )


def linearize(mode: FourierMode) -> FourierMode:
    """First-order Taylor expansion of the theta and z profiles about r = 1."""
    n = float(mode.wn.n)
    mh = mode.wn.m_hat
    fr1 = float(mode.fr.value(1.0))
    ft1 = float(mode.ftheta.value(1.0))
    fz1 = float(mode.fz.value(1.0))
    ftheta = RadialProfile.from_polynomial(Polynomial([-n * fr1, ft1 + n * fr1]))
    fz = affine_profile(fz1, mh * fr1)
    return FourierMode(wn=mode.wn, fr=mode.fr, ftheta=ftheta, fz=fz)


# ---------------------------------------------------------------------------
# quadrature over the shell for single modes
# ---------------------------------------------------------------------------

def radial_rule(geom: ShellGeometry, nodes: int = 16):
    """Gauss-Legendre nodes/weights on the wall [1-h/2, 1+h/2]."""
    t, w = np.polynomial.legendre.leggauss(nodes)
    half = 0.5 * geom.h
    return 1.0 + half * t, half * w


@dataclass(frozen=True)
class TrigFactors:
    """(theta, z)-integrals of the squared trig products over [0,2pi]x[0,L]."""

    cc: float
    sc: float
    cs: float
    ss: float


def trig_factors(wn: WaveNumbers) -> TrigFactors:
    theta_c = 2.0 * math.pi if wn.n == 0 else math.pi
    theta_s = 0.0 if wn.n == 0 else math.pi
    zhalf = 0.5 * wn.L
    return TrigFactors(cc=theta_c * zhalf, sc=theta_s * zhalf, cs=theta_c * zhalf, ss=theta_s * zhalf)


def mode_energy(
    geom: ShellGeometry, elastic: IsotropicElasticity, mode: FourierMode, nodes: int = 16
) -> float:
    """Elastic energy int <L0/E e, e> dx of the mode over the shell.

    The theta/z integrals are done analytically through trig_factors; the
    radial integral uses Gauss-Legendre with the r dr volume weight.
    """
    r, w = radial_rule(geom, nodes)
    e = strain_amplitudes(mode, r)
    f = trig_factors(mode.wn)
    nu = elastic.nu
    tr = e.trace()
    diag = e.rr**2 + e.tt**2 + e.zz**2
    dens = (
        (nu / (1.0 - 2.0 * nu) * tr * tr + diag) * f.cc
        + 2.0 * e.rt**2 * f.sc
        + 2.0 * e.rz**2 * f.cs
        + 2.0 * e.tz**2 * f.ss
    ) / (1.0 + nu)
    return float(np.sum(w * r * dens))


@dataclass(frozen=True)
class DenominatorValues:
    """Squared L2 norms of the z-gradient components of a mode."""

    phi_rz: float
    phi_zz: float
    phi_tz: float
    phi_rz_mid: float

    @property
    def full(self) -> float:
        """Compression measure magnitude |c_h|/E."""
        return self.phi_rz + self.phi_zz + self.phi_tz


def mode_denominators(geom: ShellGeometry, mode: FourierMode, nodes: int = 16) -> DenominatorValues:
    r, w = radial_rule(geom, nodes)
    f = trig_factors(mode.wn)
    mh2 = mode.wn.m_hat**2
    fr = mode.fr.value(r)
    fz = mode.fz.value(r)
    ft = 0.0 * r if mode.wn.n == 0 else mode.ftheta.value(r)
    rw = w * r
    fr1 = float(mode.fr.value(1.0))
    return DenominatorValues(
        phi_rz=f.cs * mh2 * float(np.sum(rw * fr**2)),
        phi_zz=f.cc * mh2 * float(np.sum(rw * fz**2)),
        phi_tz=f.ss * mh2 * float(np.sum(rw * ft**2)),
        phi_rz_mid=f.cs * mh2 * fr1**2 * geom.h,
    )


def rayleigh_r1(
    geom: ShellGeometry, elastic: IsotropicElasticity, mode: FourierMode, nodes: int = 16
) -> float:
    """Stiffness over the |phi_{r,z}|^2 destabilizing norm for one mode."""
    den = mode_denominators(geom, mode, nodes).phi_rz
    if den == 0.0:
        raise ZeroDivisionError("mode has no radial-axial gradient content")
    return mode_energy(geom, elastic, mode, nodes) / den


def displacement(mode: FourierMode, r, theta, z):
    """Evaluate the physical displacement components; broadcasts over inputs."""
    n = float(mode.wn.n)
    mh = mode.wn.m_hat
    r = np.asarray(r, dtype=float)
    ct, st = np.cos(n * theta), np.sin(n * theta)
    cz, sz = np.cos(mh * z), np.sin(mh * z)
    ftheta = 0.0 * r if mode.wn.n == 0 else mode.ftheta.value(r)
    return (
        mode.fr.value(r) * ct * cz,
        ftheta * st * cz,
        mode.fz.value(r) * ct * sz,
    )

