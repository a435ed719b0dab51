"""Closed-form means, second moments, and variances of the quantum Stokes
parameters.

Three evaluation paths are exposed: product coherent states, general
two-term superpositions, and specialized formulas for the named families.
The named-family formula table carries two entries whose fixed-form
transcription is internally inconsistent (they fail the coherent-state
reduction at alpha == beta); ``stokes_named`` therefore defaults to the
corrected forms and keeps the tabulated ones available for arbitration
against the brute-force reference (see ``catpol verify --only arbitration``).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from .states import CatSuperposition, NamedKind, NamedState, TwoModeCoherent

__all__ = [
    "StokesMoments",
    "VARIANTS",
    "stokes_coherent",
    "stokes_named",
    "stokes_superposition",
    "variance_from",
]

log = logging.getLogger(__name__)

# Most negative second - mean^2 residue attributable to floating-point
# cancellation at desk-scale amplitudes; anything below it is a real bug.
VAR_FLOOR = -1e-10

VARIANTS = ("corrected", "tabulated")


@dataclass(frozen=True)
class StokesMoments:
    """First and second moments of S0..S3 for one state (photon-number units)."""

    mean0: float
    mean1: float
    mean2: float
    mean3: float
    second1: float
    second2: float
    second3: float
    var1: float
    var2: float
    var3: float


def variance_from(second: float, mean: float) -> float:
    """second - mean^2, clipping tiny negative rounding residue to zero."""
    var = second - mean * mean
    if var < 0.0:
        if var < VAR_FLOOR:
            raise ValueError(f"variance {var:.3e} below the rounding floor {VAR_FLOOR:.0e}")
        log.warning("clipping variance %.3e to 0 (floating-point cancellation)", var)
        return 0.0
    return var


def stokes_coherent(s: TwoModeCoherent) -> StokesMoments:
    """Moments of a product coherent state; all three variances equal the
    total mean photon number."""
    pa = abs(s.alpha) ** 2
    pb = abs(s.beta) ** 2
    power = pa + pb
    z = complex(s.alpha).conjugate() * complex(s.beta)
    zsq2 = 2.0 * (z * z).real
    mean1 = pa - pb
    mean2 = 2.0 * z.real
    mean3 = 2.0 * z.imag
    return StokesMoments(
        mean0=power,
        mean1=mean1,
        mean2=mean2,
        mean3=mean3,
        second1=mean1 * mean1 + power,
        second2=zsq2 + power + 2.0 * pa * pb,
        second3=-zsq2 + power + 2.0 * pa * pb,
        var1=power,
        var2=power,
        var3=power,
    )


def _moment_ratios(bra: TwoModeCoherent, ket: TwoModeCoherent):
    """Matrix elements <bra|O|ket> / <bra|ket> for S0..S3 and their squares.

    Coherent states are eigenstates of the annihilators, so normal-ordered
    products evaluate to polynomials in the conjugated bra labels and the
    ket labels.
    """
    a = complex(bra.alpha).conjugate()
    b = complex(bra.beta).conjugate()
    c = complex(ket.alpha)
    d = complex(ket.beta)
    s0 = a * c + b * d
    s1 = a * c - b * d
    s2 = a * d + b * c
    s3 = 1j * (b * c - a * d)
    return (s0, s1, s2, s3, s1 * s1 + s0, s2 * s2 + s0, s3 * s3 + s0)


def stokes_superposition(cat: CatSuperposition) -> StokesMoments:
    """Moments of a normalized two-term superposition.

    Each expectation is |N|^2 times the two diagonal matrix elements plus
    twice the real part of the interference term, which carries the full
    complex branch overlap (so complex labels are handled exactly).
    """
    ratios_aa = _moment_ratios(cat.term_a, cat.term_a)
    ratios_bb = _moment_ratios(cat.term_b, cat.term_b)
    ratios_ab = _moment_ratios(cat.term_a, cat.term_b)
    delta = cat.term_overlap()
    n_sq = cat.norm * cat.norm
    vals = [
        n_sq * (ratios_aa[i].real + ratios_bb[i].real + 2.0 * (ratios_ab[i] * delta).real)
        for i in range(7)
    ]
    mean0, mean1, mean2, mean3, second1, second2, second3 = vals
    return StokesMoments(
        mean0=mean0,
        mean1=mean1,
        mean2=mean2,
        mean3=mean3,
        second1=second1,
        second2=second2,
        second3=second3,
        var1=variance_from(second1, mean1),
        var2=variance_from(second2, mean2),
        var3=variance_from(second3, mean3),
    )


def _named_psi1(a: float, b: float, variant: str) -> StokesMoments:
    d1 = math.exp(2.0 * a * b - a * a - b * b)
    two_nsq = 1.0 / (1.0 + d1)  # = 2 N1^2
    sum_sq = a * a + b * b
    diff_sq = a * a - b * b
    mean0 = two_nsq * (sum_sq + 2.0 * a * b * d1)
    mean2 = two_nsq * (2.0 * a * b + sum_sq * d1)
    var1 = two_nsq * (sum_sq + 2.0 * a * b * d1 + diff_sq * diff_sq)
    # Second moment of S2 and the variance it implies.
    second2 = two_nsq * (
        4.0 * a * a * b * b + sum_sq + (sum_sq * sum_sq + 2.0 * a * b) * d1
    )
    var2 = second2 - mean2 * mean2
    if variant == "corrected":
        var3 = two_nsq * (sum_sq + (2.0 * a * b - diff_sq * diff_sq) * d1)
    else:
        # Tabulated entry; fails the coherent reduction at a == b and goes
        # negative at small a, kept only for arbitration.
        var3 = two_nsq * (4.0 * a * b * (1.0 + a * b) - (a**4 + b**4) * d1)
    return StokesMoments(
        mean0=mean0,
        mean1=0.0,
        mean2=mean2,
        mean3=0.0,
        second1=var1,
        second2=second2,
        second3=var3,
        var1=var1,
        var2=var2,
        var3=var3,
    )


def _named_psi2(a: float, variant: str) -> StokesMoments:
    d2 = math.exp(-4.0 * a * a)
    four_nsq_asq = 2.0 * a * a / (1.0 + d2)  # = 4 N2^2 alpha^2
    var13 = four_nsq_asq * (1.0 - d2)
    mean0 = var13
    if variant == "corrected":
        mean2 = four_nsq_asq * (1.0 - d2)
        second2 = four_nsq_asq * (1.0 + 2.0 * a * a + (2.0 * a * a - 1.0) * d2)
        var2 = second2 - mean2 * mean2
    else:
        # Tabulated entry carries the opposite interference sign in <S2>,
        # which propagates into its variance expression.
        mean2 = four_nsq_asq * (1.0 + d2)
        second2 = four_nsq_asq * (1.0 + 2.0 * a * a - (1.0 - 2.0 * a * a) * d2)
        var2 = second2 - mean2 * mean2
    return StokesMoments(
        mean0=mean0,
        mean1=0.0,
        mean2=mean2,
        mean3=0.0,
        second1=var13,
        second2=second2,
        second3=var13,
        var1=var13,
        var2=var2,
        var3=var13,
    )


def _named_psi3(a: float) -> StokesMoments:
    d3 = math.exp(-a * a)
    two_nsq = 1.0 / (1.0 + d3)  # = 2 N3^2
    asq = a * a
    mean0 = two_nsq * asq
    mean2 = two_nsq * asq * d3
    var1 = two_nsq * asq * (1.0 + asq)
    var2 = two_nsq * asq * (1.0 + asq * (1.0 - two_nsq * d3) * d3)
    var3 = two_nsq * asq * (1.0 - asq * d3)
    return StokesMoments(
        mean0=mean0,
        mean1=0.0,
        mean2=mean2,
        mean3=0.0,
        second1=var1,
        second2=var2 + mean2 * mean2,
        second3=var3,
        var1=var1,
        var2=var2,
        var3=var3,
    )


def stokes_named(state: NamedState, variant: str = "corrected") -> StokesMoments:
    """Closed-form moments for the named families, evaluated from the
    specialized expressions rather than the general superposition path.

    ``variant="corrected"`` (default) returns forms that agree with
    ``stokes_superposition`` and with the brute-force reference everywhere.
    ``variant="tabulated"`` evaluates the eq=32..34 registry entries
    verbatim; the psi1 V3 and psi2 <S2>/V2 entries are known-inconsistent
    and are kept only so the arbitration report can document the defect.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    if state.kind is NamedKind.PSI1:
        return _named_psi1(state.alpha, state.beta, variant)
    if state.kind is NamedKind.PSI2:
        return _named_psi2(state.alpha, variant)
    return _named_psi3(state.alpha)
