import logging
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from catpol import fock
from catpol.states import CatSuperposition, TwoModeCoherent, make_named_state, psi1, psi2, psi3
from catpol.stokes import (
    StokesMoments,
    stokes_coherent,
    stokes_named,
    stokes_superposition,
    variance_from,
)

MOMENT_FIELDS = ("mean0", "mean1", "mean2", "mean3", "second1", "second2", "second3")
finite = st.floats(min_value=-2.5, max_value=2.5, allow_nan=False)


def max_moment_delta(left: StokesMoments, right: StokesMoments) -> float:
    return max(abs(getattr(left, f) - getattr(right, f)) for f in MOMENT_FIELDS)


class TestCoherent:
    def test_horizontal_state(self):
        m = stokes_coherent(TwoModeCoherent(2, 0))
        assert m.mean1 == 4.0
        assert m.mean2 == m.mean3 == 0.0
        assert m.var1 == m.var2 == m.var3 == 4.0
        oracle = fock.oracle_stokes(fock.encode_coherent(TwoModeCoherent(2, 0)))
        assert max_moment_delta(m, oracle) < 1e-9

    def test_vacuum(self):
        m = stokes_coherent(TwoModeCoherent(0, 0))
        assert all(getattr(m, f) == 0.0 for f in MOMENT_FIELDS)
        assert m.var1 == m.var2 == m.var3 == 0.0

    def test_right_circular(self):
        m = stokes_coherent(TwoModeCoherent(2, 2j))
        assert m.mean3 == pytest.approx(8.0, abs=1e-12)
        assert m.mean1 == 0.0
        assert m.mean2 == pytest.approx(0.0, abs=1e-12)
        oracle = fock.oracle_stokes(fock.encode_coherent(TwoModeCoherent(2, 2j)))
        assert max_moment_delta(m, oracle) < 1e-9

    @given(ar=finite, ai=finite, br=finite, bi=finite)
    def test_variance_equality(self, ar, ai, br, bi):
        state = TwoModeCoherent(complex(ar, ai), complex(br, bi))
        m = stokes_coherent(state)
        assert m.var1 == m.var2 == m.var3 == pytest.approx(state.mean_photons, rel=1e-12)

    def test_variance_equality_random(self, rng):
        for _ in range(100):
            state = TwoModeCoherent(
                complex(rng.uniform(-2, 2), rng.uniform(-2, 2)),
                complex(rng.uniform(-2, 2), rng.uniform(-2, 2)),
            )
            m = stokes_coherent(state)
            assert m.var1 == m.var2 == m.var3 == pytest.approx(state.mean_photons, abs=1e-12)


class TestSuperposition:
    def test_coincident_terms_reduce_to_coherent(self):
        term = TwoModeCoherent(1.1 - 0.6j, 0.4 + 0.8j)
        cat = CatSuperposition.from_terms(term, term)
        assert cat.norm == 0.5
        reduced = stokes_superposition(cat)
        direct = stokes_coherent(term)
        assert max_moment_delta(reduced, direct) < 1e-12

    def test_psi3_mean2(self):
        # Frozen: e^{-1} / (1 + e^{-1}) at |alpha|^2 = 1.
        m = stokes_superposition(make_named_state(psi3(1.0)))
        assert m.mean2 == pytest.approx(0.2689414213699951, abs=1e-14)
        assert m.mean1 == m.mean3 == 0.0
        oracle = fock.oracle_stokes(fock.encode_superposition(make_named_state(psi3(1.0))))
        assert max_moment_delta(m, oracle) < 1e-9

    def test_psi2_transverse_variances(self):
        alpha = 1.0
        cat = make_named_state(psi2(alpha))
        m = stokes_superposition(cat)
        decay = math.exp(-4.0 * alpha**2)
        expected = 2.0 * alpha**2 * (1.0 - decay) / (1.0 + decay)
        assert m.var1 == pytest.approx(expected, abs=1e-12)
        assert m.var3 == pytest.approx(expected, abs=1e-12)
        oracle = fock.oracle_stokes(fock.encode_superposition(cat))
        assert abs(m.var1 - oracle.var1) < 1e-9
        assert abs(m.var3 - oracle.var3) < 1e-9

    def test_matches_oracle_on_random_states(self, make_random_cats):
        cutoff = fock.default_cutoff(2.5**2)
        for cat in make_random_cats(30, 2.5, seed=101):
            closed = stokes_superposition(cat)
            oracle = fock.oracle_stokes(fock.encode_superposition(cat, cutoff))
            assert max_moment_delta(closed, oracle) < 1e-9

    def test_variances_non_negative(self, make_random_cats):
        for cat in make_random_cats(50, 2.0, seed=5):
            m = stokes_superposition(cat)
            assert m.var1 >= 0.0 and m.var2 >= 0.0 and m.var3 >= 0.0


class TestNamed:
    @pytest.mark.parametrize("alpha2", [0.25, 1.0, 2.0, 4.0, 9.0])
    def test_matches_superposition_path(self, alpha2):
        alpha = math.sqrt(alpha2)
        for named in (psi1(alpha, 1.3), psi2(alpha), psi3(alpha)):
            direct = stokes_named(named)
            general = stokes_superposition(make_named_state(named))
            assert max_moment_delta(direct, general) < 1e-10
            for field in ("var1", "var2", "var3"):
                assert getattr(direct, field) == pytest.approx(
                    getattr(general, field), abs=1e-10
                )

    def test_psi1_coincident_reduction(self):
        alpha = 1.4
        m = stokes_named(psi1(alpha, alpha))
        assert m.mean2 == pytest.approx(2.0 * alpha**2, abs=1e-12)
        assert m.mean1 == m.mean3 == 0.0
        assert m.var1 == pytest.approx(2.0 * alpha**2, abs=1e-12)
        assert m.var3 == pytest.approx(2.0 * alpha**2, abs=1e-12)

    def test_zero_means_across_grid(self):
        for alpha2 in np.linspace(0.05, 9.0, 20):
            alpha = math.sqrt(alpha2)
            for named in (psi1(alpha, 0.8), psi2(alpha), psi3(alpha)):
                m = stokes_named(named)
                assert m.mean1 == 0.0 and m.mean3 == 0.0
                g = stokes_superposition(make_named_state(named))
                assert abs(g.mean1) < 1e-12 and abs(g.mean3) < 1e-12

    def test_psi1_v3_non_monotonic(self):
        values = [stokes_named(psi1(math.sqrt(a2), 2.0)).var3 for a2 in np.arange(0.0, 10.01, 0.5)]
        diffs = np.diff(values)
        assert np.any(diffs < -1e-9)
        assert np.any(diffs > 1e-9)

    def test_second_moments_reconstructed(self):
        m = stokes_named(psi1(1.0, 2.0))
        assert m.second2 == pytest.approx(m.var2 + m.mean2**2, abs=1e-12)
        assert m.second3 == pytest.approx(m.var3 + m.mean3**2, abs=1e-12)


class TestTabulatedVariant:
    """The fixed-form table entries that disagree with the reference are
    kept verbatim; these tests document the size of each defect."""

    def test_psi1_v3_defect(self):
        named = psi1(1.0, 2.0)
        oracle = fock.oracle_stokes(fock.encode_superposition(make_named_state(named)))
        assert abs(stokes_named(named).var3 - oracle.var3) < 1e-9
        assert abs(stokes_named(named, variant="tabulated").var3 - oracle.var3) > 1.0

    def test_psi2_mean2_defect(self):
        named = psi2(1.0)
        oracle = fock.oracle_stokes(fock.encode_superposition(make_named_state(named)))
        corrected = stokes_named(named)
        tabulated = stokes_named(named, variant="tabulated")
        assert abs(corrected.mean2 - oracle.mean2) < 1e-9
        # The tabulated entry collapses to exactly 2 |alpha|^2.
        assert tabulated.mean2 == pytest.approx(2.0, abs=1e-12)
        assert abs(tabulated.mean2 - oracle.mean2) > 1e-2

    def test_consistent_entries_agree(self):
        named = psi3(1.7)
        assert max_moment_delta(stokes_named(named), stokes_named(named, "tabulated")) == 0.0

    def test_unknown_variant_rejected(self):
        with pytest.raises(ValueError):
            stokes_named(psi3(1.0), variant="other")


class TestVarianceClip:
    def test_tiny_negative_clipped(self, caplog):
        with caplog.at_level(logging.WARNING, logger="catpol.stokes"):
            assert variance_from(1.0 - 1e-12, 1.0) == 0.0
        assert any("clipping" in record.message for record in caplog.records)

    def test_large_negative_raises(self):
        with pytest.raises(ValueError):
            variance_from(0.0, 1.0)
