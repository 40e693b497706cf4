import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from polyprimelab.numtheory import euler_phi, is_prime
from polyprimelab.polynomials import INTEGER_COLORING, IntPolynomial, rescale
from polyprimelab.spectral import (
    ArcDecomposition,
    CollisionError,
    DensityFunction,
    bohr_set,
    build_poly_prime_measure,
    build_prime_coloring_measure,
    complete_gauss_sum,
    convolve,
    dft_chirp,
    dft_direct,
    idft,
    large_spectrum,
    major_arc_main_term,
    restriction_norm,
    smooth,
    weighted_exp_sum,
)
from polyprimelab.wtrick import WTrickContext, build_context

GOLDEN = (math.sqrt(5) - 1) / 2


def toy_context(n_modulus: int = 13, cutoff: int = 3) -> WTrickContext:
    """Hand-assembled identity-rescaling context (W = 1, b = 0, K = 1)."""
    psi = IntPolynomial((1, 0, 0))
    return WTrickContext(
        variant=INTEGER_COLORING,
        psi=psi,
        b0=1,
        w0=1,
        num_colors=1,
        coeff_bound=3,
        bp={2: 3, 3: 2},
        cp=None,
        K=1,
        kappa=Fraction(1, 10**4),
        smooth_exponents={},
        W=1,
        b=0,
        n=(n_modulus - 1) // 2,
        N=n_modulus,
        rescaled=rescale(psi, 1, 0),
        M=cutoff,
    )


class TestDft:
    def test_delta(self):
        assert np.allclose(DensityFunction.delta(0, 5).spectrum, np.ones(5), atol=1e-12)

    def test_constant(self):
        spec = DensityFunction.constant(1, 5).spectrum
        assert spec[0] == pytest.approx(5)
        assert np.allclose(spec[1:], 0, atol=1e-9)

    def test_mass_is_zeroth_coefficient(self):
        f = DensityFunction.indicator([1, 2], 5)
        assert f.spectrum[0] == pytest.approx(f.mass) == pytest.approx(2)

    def test_direct_vs_chirp(self):
        for n in (3, 101, 2003, 8009):
            rng = np.random.default_rng(n)
            v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            d = dft_direct(v)
            c = dft_chirp(v)
            assert float(np.abs(d - c).max()) <= 1e-9 * float(np.abs(d).max())

    def test_matches_definition(self):
        rng = np.random.default_rng(1)
        v = rng.standard_normal(17)
        spec = dft_direct(v)
        for r in range(17):
            want = sum(v[x] * cmath.exp(-2j * cmath.pi * x * r / 17) for x in range(17))
            assert spec[r] == pytest.approx(want, abs=1e-10)

    def test_inversion_and_parseval(self):
        rng = np.random.default_rng(2)
        for n in (5, 101, 499):
            v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            f = DensityFunction(v)
            assert np.allclose(idft(f.spectrum), v, atol=1e-9 * np.abs(v).max())
            lhs = float((np.abs(v) ** 2).sum())
            rhs = float((np.abs(f.spectrum) ** 2).sum()) / n
            assert rhs == pytest.approx(lhs, rel=1e-9)


class TestConvolve:
    def test_delta_shift(self):
        c = convolve(DensityFunction.delta(1, 5), DensityFunction.delta(2, 5))
        assert np.allclose(c.values, DensityFunction.delta(3, 5).values, atol=1e-9)

    def test_identity(self):
        rng = np.random.default_rng(3)
        f = DensityFunction(rng.standard_normal(11))
        c = convolve(f, DensityFunction.delta(0, 11))
        assert np.allclose(c.values, f.values, atol=1e-9)

    def test_convolution_theorem(self):
        rng = np.random.default_rng(4)
        f = DensityFunction(rng.standard_normal(101))
        g = DensityFunction(rng.standard_normal(101))
        c = convolve(f, g)
        assert np.allclose(c.spectrum, f.spectrum * g.spectrum, atol=1e-9 * 101)

    def test_modulus_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            convolve(DensityFunction.delta(0, 5), DensityFunction.delta(0, 7))


class TestPolyPrimeMeasure:
    def test_toy_values(self):
        m = build_poly_prime_measure(toy_context())
        assert m.support == {1: 1, 2: 4}
        assert m.values[1].real == pytest.approx(math.log(2) / 9)
        assert m.values[4].real == pytest.approx(3 * math.log(3) / 9)
        assert m.values[9].real == 0.0  # z = 3 has 1*3+1 = 4 composite

    def test_collision_on_composite_modulus(self):
        with pytest.raises(CollisionError):
            build_poly_prime_measure(toy_context(n_modulus=8))

    def test_mass_in_band(self, ctx_w6):
        m = build_poly_prime_measure(ctx_w6)
        assert 0.7 <= m.mass.real <= 1.3

    def test_no_collisions_on_suite(self, context_suite):
        for name, ctx in context_suite:
            m = build_poly_prime_measure(ctx)
            assert len({x % ctx.N for x in (ctx.rescaled(z) for z in range(1, ctx.M + 1))}) == ctx.M, name
            assert m.mass.real >= 0


class TestPrimeColoringMeasure:
    def test_empty_set(self, ctx_prime):
        assert build_prime_coloring_measure([], ctx_prime).mass == 0

    def test_single_point(self, ctx_prime):
        # K = 1 here, so the weight reads (phi(KW)/KW) log(KW x + psi(b)/2) / N
        ctx = ctx_prime
        assert ctx.K == 1
        kw = ctx.K * ctx.W
        half = ctx.half_psi_b
        x0 = next(x for x in range(1, ctx.N) if is_prime(kw * x + half))
        f = build_prime_coloring_measure([x0], ctx)
        want = euler_phi(kw) / kw * math.log(kw * x0 + half) / ctx.N
        assert f.values[x0].real == pytest.approx(want, rel=1e-12)
        assert np.count_nonzero(f.values) == 1

    def test_composite_source_gets_zero(self, ctx_prime):
        ctx = ctx_prime
        x0 = next(
            x for x in range(1, ctx.N) if not is_prime(ctx.W * x + ctx.half_psi_b)
        )
        f = build_prime_coloring_measure([x0], ctx)
        assert f.mass == 0

    def test_noncoprime_offset_rejected(self):
        import dataclasses

        # psi(b)/2 = 2 shares the factor 2 with K*W once W is even
        psi = IntPolynomial((1, 0, 4))
        bad = dataclasses.replace(
            toy_context(),
            psi=psi,
            smooth_exponents={2: 1},
            W=2,
            rescaled=rescale(psi, 2, 0),
        )
        with pytest.raises(ValueError, match="gcd"):
            build_prime_coloring_measure([1], bad)


class TestLargeSpectrum:
    def test_delta_everything(self):
        assert large_spectrum(DensityFunction.delta(0, 7), 0.5).tolist() == list(range(7))

    def test_above_max_empty(self):
        assert len(large_spectrum(DensityFunction.delta(0, 7), 1.5)) == 0

    def test_zero_in_set_for_unit_mass(self):
        f = DensityFunction.constant(1 / 9, 9)
        assert 0 in large_spectrum(f, 0.9)


class TestBohrSet:
    def test_empty_frequencies(self):
        assert bohr_set([], Fraction(1, 3), 11).size == 11

    def test_explicit_count(self):
        b = bohr_set([1], Fraction(1, 10), 101)
        assert b.size == 21  # |x| <= 10 around 0 on the 101-cycle

    def test_bound_example(self):
        b = bohr_set([1, 2], Fraction(1, 4), 101)
        assert b.size * 4**2 >= 101

    def test_zero_always_member(self):
        b = bohr_set([3, 5, 7], Fraction(1, 5), 97)
        assert 0 in b.members

    def test_randomized_bound_exact(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            n = int(rng.choice([97, 199, 499]))
            r = rng.choice(n, size=int(rng.integers(0, 4)), replace=False)
            eps = Fraction(int(rng.integers(1, 50)), 100)
            if not 0 < eps < Fraction(1, 2):
                continue
            b = bohr_set(r, eps, n)
            p, q = eps.numerator, eps.denominator
            assert b.size * q ** len(b.frequencies) >= p ** len(b.frequencies) * n

    def test_eps_range_enforced(self):
        with pytest.raises(ValueError):
            bohr_set([1], Fraction(1, 2), 11)

    def test_float_eps_rejected(self):
        with pytest.raises(ValueError, match="rational"):
            bohr_set([1], 0.1, 11)


class TestSmooth:
    def test_full_bohr_averages(self):
        rng = np.random.default_rng(8)
        f = DensityFunction(rng.standard_normal(31))
        out = smooth(f, bohr_set([], Fraction(1, 3), 31))
        assert np.allclose(out.values, f.mass / 31, atol=1e-9)

    def test_mass_preserved(self, ctx_w6):
        m = build_poly_prime_measure(ctx_w6)
        b = bohr_set(large_spectrum(m, 0.5), Fraction(1, 8), ctx_w6.N)
        out = smooth(m, b)
        assert out.mass.real == pytest.approx(m.mass.real, rel=1e-9)

    def test_spectrum_identity(self):
        rng = np.random.default_rng(9)
        f = DensityFunction(rng.standard_normal(101))
        b = bohr_set([1, 5], Fraction(1, 5), 101)
        out = smooth(f, b)
        want = f.spectrum * b.normalized_indicator().spectrum ** 2
        assert np.allclose(out.spectrum, want, atol=1e-9 * 101)

    def test_pointwise_diagnostic_reported(self, ctx_w6):
        m = build_poly_prime_measure(ctx_w6)
        b = bohr_set(large_spectrum(m, 0.2), Fraction(1, 5), ctx_w6.N)
        out = smooth(m, b)
        peak = float(np.abs(out.values).max())
        mark = (1 + 2 * float(ctx_w6.kappa)) / ctx_w6.N
        assert peak > 0 and mark > 0  # diagnostic only; no hard threshold


class TestRestrictionNorm:
    def test_delta(self):
        assert restriction_norm(DensityFunction.delta(0, 5), 4) == pytest.approx(5)

    def test_uniform(self):
        assert restriction_norm(DensityFunction.constant(1 / 5, 5), 4) == pytest.approx(1)

    def test_monotone_in_rho_for_subunit_spectra(self):
        f = DensityFunction.constant(1 / 7, 7)
        assert restriction_norm(f, 8) <= restriction_norm(f, 4) + 1e-12


class TestCompleteGaussSum:
    def test_trivial_modulus(self, ctx_w6):
        assert complete_gauss_sum(ctx_w6, 1, 1) == pytest.approx(1)

    def test_dichotomy_even_k(self):
        ctx = build_context(IntPolynomial((1, 0, 0)), 1, 1, 1, INTEGER_COLORING, {2: 3, 3: 1}, 10**6)
        assert ctx.K == 4
        assert complete_gauss_sum(ctx, 1, 2) == pytest.approx(2, abs=1e-9)
        assert complete_gauss_sum(ctx, 1, 4) == pytest.approx(4, abs=1e-9)
        assert complete_gauss_sum(ctx, 1, 8) == pytest.approx(0, abs=1e-9)

    def test_dichotomy_zero_branch(self, ctx_w6):
        # 3 | W but 3 does not divide K = 1
        assert complete_gauss_sum(ctx_w6, 1, 3) == pytest.approx(0, abs=1e-9)

    def test_rejects_noncoprime(self, ctx_w6):
        with pytest.raises(ValueError):
            complete_gauss_sum(ctx_w6, 2, 4)


class TestArcs:
    def test_alpha_zero_wraps(self, ctx_w6):
        arc = ArcDecomposition.from_context(ctx_w6, 10.0)
        label = arc.classify(0.0)
        assert label.major and (label.a, label.q) == (1, 1)

    def test_one_half(self, ctx_w6):
        arc = ArcDecomposition.from_context(ctx_w6, 10.0)
        label = arc.classify(0.5)
        assert label.major and (label.a, label.q) == (1, 2)

    def test_golden_minor_under_tight_threshold(self, ctx_w6):
        tight = ArcDecomposition(
            cutoff=ctx_w6.M,
            arc_exponent=1.0,
            threshold=math.log(ctx_w6.M) / float(ctx_w6.rescaled(ctx_w6.M)),
            q_limit=10**6,
        )
        assert not tight.classify(GOLDEN).major
        assert tight.classify(0.5).major
        assert tight.classify(Fraction(2, 7)).major

    def test_rationals_classified_to_their_own_arc(self, ctx_w6):
        arc = ArcDecomposition.from_context(ctx_w6, 10.0)
        for a, q in [(1, 3), (2, 5), (3, 7)]:
            label = arc.classify(Fraction(a, q))
            assert label.major and label.q <= q
            if label.q == q:
                assert label.a == a


class TestWeightedExpSum:
    def test_measure_form_at_zero(self, ctx_w6):
        m = build_poly_prime_measure(ctx_w6)
        s = weighted_exp_sum(ctx_w6, 0.0, form="measure")
        assert s.real == pytest.approx(float(ctx_w6.rescaled(ctx_w6.M)) * m.mass.real, rel=1e-9)
        assert abs(s.imag) < 1e-9

    def test_ap_form_matches_chebyshev(self, ctx_w1):
        # sum of lambda_{1,2} up to N: frozen from the trial-division oracle
        s = weighted_exp_sum(ctx_w1, 0.0, form="ap")
        assert ctx_w1.N == 10007
        assert s.real == pytest.approx(9907.260257264306, rel=1e-9)
        assert abs(s.real / ctx_w1.N - 1) < 0.05

    def test_minor_arc_decay_reported(self, ctx_w1):
        s0 = abs(weighted_exp_sum(ctx_w1, 0.0, form="ap"))
        sg = abs(weighted_exp_sum(ctx_w1, GOLDEN, form="ap"))
        assert sg < s0  # decay diagnostic; no hard threshold

    def test_exact_rational_phase(self, ctx_w6):
        sf = weighted_exp_sum(ctx_w6, Fraction(1, 3), form="measure")
        sd = weighted_exp_sum(ctx_w6, 1 / 3, form="measure")
        assert sf == pytest.approx(sd, rel=1e-6)


class TestMajorArcMainTerm:
    def test_at_center_q1(self, ctx_w6):
        main = major_arc_main_term(ctx_w6, 1, 1, Fraction(0))
        want = (
            euler_phi(ctx_w6.W * ctx_w6.w0)
            / euler_phi(ctx_w6.W * ctx_w6.w0)
            * float(ctx_w6.rescaled(ctx_w6.M))
        )
        assert main.real == pytest.approx(want, rel=1e-12)

    def test_at_center_general(self, ctx_w6):
        q = 5
        gauss = complete_gauss_sum(ctx_w6, 2, q)
        main = major_arc_main_term(ctx_w6, 2, q, Fraction(2, 5))
        big_q = ctx_w6.W * ctx_w6.w0
        want = euler_phi(big_q) / euler_phi(big_q * q) * gauss * ctx_w6.rescaled(ctx_w6.M)
        assert main == pytest.approx(want, rel=1e-9)

    def test_outside_arc_rejected(self, ctx_w6):
        with pytest.raises(ValueError, match="outside"):
            major_arc_main_term(ctx_w6, 1, 2, Fraction(1, 3))

    def test_residual_small_at_zero(self, ctx_w6):
        s = weighted_exp_sum(ctx_w6, 0.0, form="measure")
        main = major_arc_main_term(ctx_w6, 1, 1, Fraction(0))
        assert abs(s - main) / float(ctx_w6.rescaled(ctx_w6.M)) < 0.5  # soft diagnostic
