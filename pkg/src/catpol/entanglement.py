"""Concurrence of two-term coherent superpositions.

For a pure two-branch state the closed form below is exactly the
I-concurrence sqrt(2 (1 - Tr rho_1^2)) of the mode-1 reduced density
matrix, which is what the brute-force reference computes.
"""

from __future__ import annotations

import math

from .states import CatSuperposition, NamedKind, NamedState, coherent_overlap

__all__ = [
    "NegativeRadicand",
    "concurrence_after_crc",
    "concurrence_general",
    "concurrence_named",
]


class NegativeRadicand(ValueError):
    """The post-rotation radicand fell below rounding tolerance; the inputs
    or a transcription are wrong."""


def concurrence_general(cat: CatSuperposition) -> float:
    """Concurrence of norm * (|a1, b1> + |a2, b2>) from the per-mode overlaps.

    The numerator uses the overlap moduli; the denominator carries
    Re[<a1|a2><b1|b2>], the real part of the full two-mode branch overlap.
    Zero for product states, one in the orthogonal-branch limit.
    """
    overlap_1 = coherent_overlap(cat.term_a.alpha, cat.term_b.alpha)
    overlap_2 = coherent_overlap(cat.term_a.beta, cat.term_b.beta)
    numerator = math.sqrt(
        max(0.0, (1.0 - abs(overlap_1) ** 2) * (1.0 - abs(overlap_2) ** 2))
    )
    denominator = 1.0 + (overlap_1 * overlap_2).real
    return min(max(numerator / denominator, 0.0), 1.0)


def _two_branch_concurrence(separation_sq: float) -> float:
    decay = math.exp(-separation_sq)
    return (1.0 - decay) / (1.0 + decay)


def concurrence_named(state: NamedState) -> float:
    """Closed-form concurrence of a named family member:
    psi1 uses |alpha - beta|^2, psi2 uses 4 |alpha|^2, psi3 uses |alpha|^2."""
    if state.kind is NamedKind.PSI1:
        return _two_branch_concurrence((state.alpha - state.beta) ** 2)
    if state.kind is NamedKind.PSI2:
        return _two_branch_concurrence(4.0 * state.alpha**2)
    return _two_branch_concurrence(state.alpha**2)


def concurrence_after_crc(alpha: float, beta: float, theta: float, phi1: float) -> float:
    """Concurrence of the swap state after a compensator-rotator-compensator.

    Independent of the output compensator angle.  The radicand is evaluated
    as 1 + e^{-2k} - e^{-k(1-s)} - e^{-k(1+s)} with k = (alpha - beta)^2 and
    s = sin(2 theta) cos(phi1); this expanded form stays finite for large
    separations and is exactly zero at the disentangling point
    (theta = pi/4, phi1 = 0).
    """
    k = (float(alpha) - float(beta)) ** 2
    s = math.sin(2.0 * theta) * math.cos(phi1)
    # Grouped so both differences cancel exactly (not to rounding) at s = 1.
    radicand = -math.expm1(-k * (1.0 - s)) + (
        math.exp(-2.0 * k) - math.exp(-k * (1.0 + s))
    )
    if radicand < 0.0:
        if radicand < -1e-9:
            raise NegativeRadicand(f"radicand {radicand:.3e} below rounding tolerance")
        radicand = 0.0
    return min(math.sqrt(radicand) / (1.0 + math.exp(-k)), 1.0)
