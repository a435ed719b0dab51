"""Husimi Q functions on the polarization (Poincare) sphere, sphere
quadrature, the degree of polarization, and the position-amplitude
distributions of product coherent states.

Sphere coordinates: theta = 0 points along the +S1 pole (all photons in
mode 1), the equator holds the diagonal (phi = 0, +S2) and circular
(phi = pi/2, +S3) polarizations.  Q samplers map (theta, phi) arrays to
non-negative values and integrate to one against sin(theta) d theta d phi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import fock
from .states import CatSuperposition, NamedKind, NamedState, TwoModeCoherent

__all__ = [
    "DegreeOfPolarization",
    "QSampler",
    "SphereGrid",
    "UNPOLARIZED_Q",
    "UnnormalizedSampler",
    "amplitude_density",
    "amplitude_means",
    "coherent_sampler",
    "constant_sampler",
    "degree_of_polarization",
    "dop_h_analytic",
    "fock_sampler",
    "named_sampler",
    "q_coherent",
    "q_named",
    "q_superposition",
    "su2_state",
    "superposition_sampler",
    "unpolarized_sampler",
]

UNPOLARIZED_Q = 1.0 / (4.0 * math.pi)

# Negative Q beyond this is an internal inconsistency, not rounding noise.
_NEGATIVE_Q_FLOOR = -1e-12


class UnnormalizedSampler(ValueError):
    """A Q sampler failed the unit-integral pre-check (bad cutoff or grid)."""


@dataclass(frozen=True)
class SphereGrid:
    """Gauss-Legendre nodes in cos(theta) crossed with a uniform phi grid.

    The combination is spectrally accurate for the smooth, phi-periodic
    integrands that arise here; the phi rule is a plain trapezoid on the
    periodic interval.
    """

    theta: np.ndarray
    theta_weight: np.ndarray
    n_phi: int

    @classmethod
    def build(cls, n_theta: int = 64, n_phi: int = 128) -> "SphereGrid":
        nodes, weights = np.polynomial.legendre.leggauss(n_theta)
        order = np.argsort(-nodes)  # ascending theta
        return cls(np.arccos(nodes[order]), weights[order], n_phi)

    @classmethod
    def for_power(cls, max_power: float, nodes_per_photon: float = 3.0) -> "SphereGrid":
        """Grid sized for the Q lobe width, which shrinks with optical power."""
        n_theta = max(64, math.ceil(nodes_per_photon * (1.0 + max_power)))
        return cls.build(n_theta, 2 * n_theta)

    @property
    def phi(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n_phi) / self.n_phi

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return self.theta[:, None], self.phi[None, :]

    def sample(self, sampler) -> np.ndarray:
        theta, phi = self.mesh()
        values = np.asarray(sampler(theta, phi), dtype=float)
        return np.broadcast_to(values, (self.theta.size, self.n_phi))

    def integrate(self, values) -> float:
        """Integral of values(theta, phi) against sin(theta) d theta d phi."""
        vals = np.asarray(values, dtype=float)
        return float(self.theta_weight @ vals.sum(axis=1)) * (2.0 * np.pi / self.n_phi)


@dataclass(frozen=True)
class DegreeOfPolarization:
    """Squared distance of Q from the unpolarized constant, and the degree
    distance / (1 + distance) in [0, 1]."""

    distance: float
    degree: float


@dataclass(frozen=True)
class QSampler:
    """Callable Q(theta, phi) with a tag naming its family or origin.

    The wrapped function must accept broadcastable numpy arrays.
    """

    fn: Callable
    tag: str

    def __call__(self, theta, phi):
        return self.fn(theta, phi)


def _finish(values):
    vals = np.asarray(values, dtype=float)
    lowest = float(vals.min())
    if lowest < _NEGATIVE_Q_FLOOR:
        raise ValueError(f"Q value {lowest:.3e} below the rounding floor")
    out = np.maximum(vals, 0.0)
    return float(out) if out.ndim == 0 else out


def q_coherent(state: TwoModeCoherent, theta, phi):
    """Closed-form Q of a product coherent state: (1 + z) e^(z - P) / 4 pi
    with z = |alpha e^{i phi} cos(theta/2) + beta sin(theta/2)|^2 and P the
    total mean photon number."""
    th = np.asarray(theta, dtype=float)
    ph = np.asarray(phi, dtype=float)
    w = state.alpha * np.exp(1j * ph) * np.cos(0.5 * th) + state.beta * np.sin(0.5 * th)
    z = np.abs(w) ** 2
    return _finish((1.0 + z) * np.exp(z - state.mean_photons) * UNPOLARIZED_Q)


def q_superposition(cat: CatSuperposition, theta, phi):
    """Closed-form Q of a two-term superposition.

    The two direct terms are coherent-state lobes; the interference term
    carries the complex cross product z12 = conj(w_a) w_b and enters as
    2 Re[(1 + z12) e^{z12}], which keeps the result real for arbitrary
    complex labels.
    """
    th = np.asarray(theta, dtype=float)
    ph = np.asarray(phi, dtype=float)
    cos_half = np.cos(0.5 * th)
    sin_half = np.sin(0.5 * th)
    spin = np.exp(1j * ph) * cos_half
    w_a = cat.term_a.alpha * spin + cat.term_a.beta * sin_half
    w_b = cat.term_b.alpha * spin + cat.term_b.beta * sin_half
    power_a = cat.term_a.mean_photons
    power_b = cat.term_b.mean_photons
    z1 = np.abs(w_a) ** 2
    z2 = np.abs(w_b) ** 2
    z12 = np.conj(w_a) * w_b
    direct = (1.0 + z1) * np.exp(z1 - power_a) + (1.0 + z2) * np.exp(z2 - power_b)
    cross = 2.0 * np.real((1.0 + z12) * np.exp(z12 - 0.5 * (power_a + power_b)))
    return _finish(cat.norm**2 * UNPOLARIZED_Q * (direct + cross))


def _q_psi1(a: float, b: float, theta, phi, variant: str):
    power = a * a + b * b
    d1 = math.exp(2.0 * a * b - power)
    n_sq = 0.5 / (1.0 + d1)
    cos_sq = np.cos(0.5 * theta) ** 2
    sin_sq = np.sin(0.5 * theta) ** 2
    ripple = np.sin(theta) * np.cos(phi)
    z1 = a * a * cos_sq + b * b * sin_sq + a * b * ripple
    z2 = b * b * cos_sq + a * a * sin_sq + a * b * ripple
    if variant == "corrected":
        z12 = a * b + 0.5 * np.sin(theta) * (
            a * a * np.exp(-1j * phi) + b * b * np.exp(1j * phi)
        )
        cross = 2.0 * np.real((1.0 + z12) * np.exp(z12 - power))
    else:
        # Tabulated interference entry; exact only at a == b.
        z12 = a * b * (1.0 + ripple)
        cross = 2.0 * (1.0 + z12) * np.exp(z12 - power)
    direct = (1.0 + z1) * np.exp(z1 - power) + (1.0 + z2) * np.exp(z2 - power)
    return n_sq * UNPOLARIZED_Q * (direct + cross)


def _q_psi2(a: float, theta, phi):
    power = 2.0 * a * a
    d2 = math.exp(-4.0 * a * a)
    n_sq = 0.5 / (1.0 + d2)
    z1 = a * a * (1.0 + np.sin(theta) * np.cos(phi))
    # The two branch lobes coincide and the interference term is real, so
    # both pairs merge into a single 1/(2 pi) prefactor.
    lobes = (1.0 + z1) * np.exp(z1 - power) + (1.0 - z1) * np.exp(-z1 - power)
    return n_sq * (2.0 * UNPOLARIZED_Q) * lobes


def _q_psi3(a: float, theta, phi):
    power = a * a
    d3 = math.exp(-power)
    n_sq = 0.5 / (1.0 + d3)
    z1 = power * np.cos(0.5 * theta) ** 2
    z2 = power * np.sin(0.5 * theta) ** 2
    z12 = 0.5 * power * np.exp(1j * phi) * np.sin(theta)
    direct = (1.0 + z1) * np.exp(z1 - power) + (1.0 + z2) * np.exp(z2 - power)
    cross = 2.0 * np.real((1.0 + z12) * np.exp(z12 - power))
    return n_sq * UNPOLARIZED_Q * (direct + cross)


def q_named(state: NamedState, theta, phi, variant: str = "corrected"):
    """Specialized Q of a named family member.

    Complex interference exponents are combined as 2 Re[(1 + z12) e^{z12}].
    For psi1 the tabulated interference entry (variant="tabulated") is valid
    only at alpha == beta; the corrected default agrees with the general
    superposition form everywhere.  psi2 and psi3 are identical in both
    variants.
    """
    if variant not in ("corrected", "tabulated"):
        raise ValueError(f"unknown variant {variant!r}")
    th = np.asarray(theta, dtype=float)
    ph = np.asarray(phi, dtype=float)
    if state.kind is NamedKind.PSI1:
        return _finish(_q_psi1(state.alpha, state.beta, th, ph, variant))
    if state.kind is NamedKind.PSI2:
        return _finish(_q_psi2(state.alpha, th, ph))
    return _finish(_q_psi3(state.alpha, th, ph))


def su2_state(n: int, theta: float, phi: float) -> fock.FockVector:
    """Spin-coherent two-mode number state with n photons pointing along
    (theta, phi); amplitude on |m>|n-m> is sqrt(C(n, m))
    sin^(n-m)(theta/2) cos^m(theta/2) e^{-i m phi}."""
    if n < 0 or n != int(n):
        raise ValueError(f"photon number must be a non-negative integer, got {n!r}")
    n = int(n)
    amplitudes = np.zeros((n + 1, n + 1), dtype=complex)
    m = np.arange(n + 1)
    amplitudes[m, n - m] = fock.su2_amplitude_row(n, theta) * np.exp(-1j * m * phi)
    return fock.FockVector(n, amplitudes)


def coherent_sampler(state: TwoModeCoherent) -> QSampler:
    return QSampler(lambda th, ph: q_coherent(state, th, ph), tag="coherent")


def superposition_sampler(cat: CatSuperposition) -> QSampler:
    return QSampler(lambda th, ph: q_superposition(cat, th, ph), tag="superposition")


def named_sampler(state: NamedState, variant: str = "corrected") -> QSampler:
    return QSampler(
        lambda th, ph: q_named(state, th, ph, variant=variant),
        tag=f"named-{state.kind.value}[{variant}]",
    )


def fock_sampler(vec: fock.FockVector) -> QSampler:
    return QSampler(lambda th, ph: fock.q_fock(vec, th, ph), tag="fock-oracle")


def unpolarized_sampler(dens: fock.UnpolarizedDensity) -> QSampler:
    return QSampler(lambda th, ph: fock.q_density(dens, th, ph), tag="unpolarized-fixture")


def constant_sampler() -> QSampler:
    def fn(theta, phi):
        shape = np.broadcast_shapes(np.shape(theta), np.shape(phi))
        return np.full(shape, UNPOLARIZED_Q)

    return QSampler(fn, tag="uniform")


def degree_of_polarization(sampler, grid: SphereGrid) -> DegreeOfPolarization:
    """Distance of Q from the unpolarized constant and the degree built
    from it.

    The sampler is required to integrate to one within 1e-6 on the grid;
    a failure signals an insufficient cutoff or grid, not a property of
    the state.
    """
    values = grid.sample(sampler)
    total = grid.integrate(values)
    if abs(total - 1.0) > 1e-6:
        raise UnnormalizedSampler(
            f"sampler {getattr(sampler, 'tag', '?')} integrates to {total:.9f}; "
            "raise the cutoff or refine the grid"
        )
    distance = 4.0 * np.pi * grid.integrate((values - UNPOLARIZED_Q) ** 2)
    return DegreeOfPolarization(distance=distance, degree=distance / (1.0 + distance))


def dop_h_analytic(nbar: float) -> float:
    """Degree of polarization of |alpha, 0> as a function of nbar = |alpha|^2.

    P = 1 - 4 nbar / (1 + 2 nbar (1 + nbar) - e^{-2 nbar}); the 0/0 limit at
    nbar -> 0 is resolved by its series, P ~ nbar^2 / 3.
    """
    if nbar < 0.0:
        raise ValueError(f"mean photon number must be non-negative, got {nbar}")
    if nbar < 1e-8:
        return nbar * nbar / 3.0
    # 1 - e^{-2 nbar} via expm1 keeps the denominator accurate down to the
    # series branch.
    denominator = 2.0 * nbar * (1.0 + nbar) - math.expm1(-2.0 * nbar)
    return max(0.0, 1.0 - 4.0 * nbar / denominator)


def amplitude_density(state: TwoModeCoherent, x, y):
    """Joint position-amplitude density |<x, y|alpha, beta>|^2 under the
    half-sum amplitude operators (a + a^dag)/2: a product of Gaussians with
    means (Re alpha, Re beta) and variance 1/4 in each coordinate."""
    dx = np.asarray(x, dtype=float) - state.alpha.real
    dy = np.asarray(y, dtype=float) - state.beta.real
    vals = (2.0 / np.pi) * np.exp(-2.0 * (dx**2 + dy**2))
    return float(vals) if vals.ndim == 0 else vals


def amplitude_means(state: TwoModeCoherent) -> tuple[float, float]:
    """Means (<x>, <y>) of the amplitude distribution: (Re alpha, Re beta)."""
    return (complex(state.alpha).real, complex(state.beta).real)
