"""Two-mode coherent states, their two-term superpositions, and the optical
transforms (phase compensator, polarization rotator) that act on them.

Amplitude labels are dimensionless complex field amplitudes; mode 1 is the
horizontal polarization mode, mode 2 the vertical one.  All types are frozen
values and every operation is a pure function, so everything here is safe to
share across worker threads or processes.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "CatSuperposition",
    "CrcParams",
    "DegenerateSuperposition",
    "NamedKind",
    "NamedState",
    "NonRealParameter",
    "TwoModeCoherent",
    "coherent_overlap",
    "crc_apply",
    "crc_transform",
    "make_named_state",
    "norm_constant",
    "phase_shift",
    "psi1",
    "psi2",
    "psi3",
    "rotate",
]

# Two equal-weight branches cancelling to this level cannot be normalized in
# double precision (roughly 100x machine epsilon accumulated over the
# exponential evaluations).
_DEGENERACY_FLOOR = 1e-12


class DegenerateSuperposition(ValueError):
    """The two branches of a superposition cancel almost exactly."""


class NonRealParameter(ValueError):
    """A named-state constructor received a non-real amplitude."""


@dataclass(frozen=True)
class TwoModeCoherent:
    """Product coherent state: amplitude ``alpha`` in mode 1, ``beta`` in mode 2."""

    alpha: complex
    beta: complex

    @property
    def mean_photons(self) -> float:
        """Total mean photon number |alpha|^2 + |beta|^2."""
        return abs(self.alpha) ** 2 + abs(self.beta) ** 2


def coherent_overlap(a: complex, b: complex) -> complex:
    """Overlap <a|b> of two single-mode coherent states.

    Satisfies |<a|b>| <= 1 with equality iff a == b, and
    <a|b> = conj(<b|a>).  The exponent is grouped as
    -|a - b|^2 / 2 + i Im(conj(a) b) so the modulus bound survives
    floating point even for large amplitudes.
    """
    a = complex(a)
    b = complex(b)
    diff = a - b
    exponent = complex(
        -0.5 * (diff.real * diff.real + diff.imag * diff.imag),
        (a.conjugate() * b).imag,
    )
    return cmath.exp(exponent)


def norm_constant(term_a: TwoModeCoherent, term_b: TwoModeCoherent) -> float:
    """Normalization constant N of the equal-weight sum |term_a> + |term_b>.

    Raises DegenerateSuperposition when the branches cancel so exactly that
    1/N^2 drops below the floating-point floor; this cannot happen for the
    plus-sign superpositions this package works with and is guarded purely
    defensively.
    """
    cross = coherent_overlap(term_a.alpha, term_b.alpha) * coherent_overlap(
        term_a.beta, term_b.beta
    )
    inv_norm_sq = 2.0 + 2.0 * cross.real
    if inv_norm_sq < _DEGENERACY_FLOOR:
        raise DegenerateSuperposition(
            f"branches cancel: 1/N^2 = {inv_norm_sq:.3e} < {_DEGENERACY_FLOOR:.0e}"
        )
    return 1.0 / math.sqrt(inv_norm_sq)


@dataclass(frozen=True)
class CatSuperposition:
    """Normalized equal-weight superposition norm * (|term_a> + |term_b>)."""

    term_a: TwoModeCoherent
    term_b: TwoModeCoherent
    norm: float

    @classmethod
    def from_terms(
        cls, term_a: TwoModeCoherent, term_b: TwoModeCoherent
    ) -> "CatSuperposition":
        return cls(term_a, term_b, norm_constant(term_a, term_b))

    def term_overlap(self) -> complex:
        """Full two-mode overlap <term_a|term_b> weighting all cross terms."""
        return coherent_overlap(self.term_a.alpha, self.term_b.alpha) * (
            coherent_overlap(self.term_a.beta, self.term_b.beta)
        )


class NamedKind(Enum):
    """Tags for the three single-parameter superposition families."""

    PSI1 = "psi1"
    PSI2 = "psi2"
    PSI3 = "psi3"


@dataclass(frozen=True)
class NamedState:
    """A named family member; ``beta`` is only meaningful for PSI1."""

    kind: NamedKind
    alpha: float
    beta: float = 0.0


def _require_real(value, name: str) -> float:
    if isinstance(value, complex):
        if value.imag != 0.0:
            raise NonRealParameter(f"{name} must be real, got {value!r}")
        value = value.real
    return float(value)


def psi1(alpha, beta) -> NamedState:
    """Swap family: (|alpha,beta> + |beta,alpha>), real parameters only."""
    return NamedState(NamedKind.PSI1, _require_real(alpha, "alpha"), _require_real(beta, "beta"))


def psi2(alpha) -> NamedState:
    """Diagonal even-cat family: (|-alpha,-alpha> + |alpha,alpha>)."""
    return NamedState(NamedKind.PSI2, _require_real(alpha, "alpha"))


def psi3(alpha) -> NamedState:
    """Single-photon-mode cat family: (|alpha,0> + |0,alpha>)."""
    return NamedState(NamedKind.PSI3, _require_real(alpha, "alpha"))


def make_named_state(state: NamedState) -> CatSuperposition:
    """Build the normalized superposition for a named family member."""
    a = state.alpha
    if state.kind is NamedKind.PSI1:
        b = state.beta
        term_a = TwoModeCoherent(complex(a), complex(b))
        term_b = TwoModeCoherent(complex(b), complex(a))
    elif state.kind is NamedKind.PSI2:
        term_a = TwoModeCoherent(complex(-a), complex(-a))
        term_b = TwoModeCoherent(complex(a), complex(a))
    else:
        term_a = TwoModeCoherent(complex(a), 0j)
        term_b = TwoModeCoherent(0j, complex(a))
    return CatSuperposition.from_terms(term_a, term_b)


def phase_shift(s: TwoModeCoherent, phi: float) -> TwoModeCoherent:
    """Compensator: phase shift phi between the modes.

    Maps (alpha, beta) to (alpha e^{+i phi/2}, beta e^{-i phi/2}).
    """
    factor = cmath.exp(0.5j * phi)
    return TwoModeCoherent(s.alpha * factor, s.beta / factor)


def rotate(s: TwoModeCoherent, theta: float) -> TwoModeCoherent:
    """Geometric polarization rotation by theta.

    Maps (alpha, beta) to (beta sin(theta) + alpha cos(theta),
    beta cos(theta) - alpha sin(theta)); preserves the total photon number.
    """
    c = math.cos(theta)
    sn = math.sin(theta)
    return TwoModeCoherent(s.beta * sn + s.alpha * c, s.beta * c - s.alpha * sn)


@dataclass(frozen=True)
class CrcParams:
    """Angles of a compensator-rotator-compensator device, applied as
    phase_shift(phi1), rotate(theta), phase_shift(phi2)."""

    phi1: float
    theta: float
    phi2: float


def crc_apply(s: TwoModeCoherent, params: CrcParams) -> TwoModeCoherent:
    """Send one coherent label pair through the compensator-rotator-compensator."""
    return phase_shift(rotate(phase_shift(s, params.phi1), params.theta), params.phi2)


def crc_transform(
    term_a: TwoModeCoherent, term_b: TwoModeCoherent, params: CrcParams
) -> CatSuperposition:
    """Apply the device to both branches and renormalize the superposition."""
    return CatSuperposition.from_terms(crc_apply(term_a, params), crc_apply(term_b, params))
