"""Solution counting: additive triple counts by brute force and via the
spectrum, popularity profiles with their cube lower bound, monochromatic
solution search for x + y = psi(z) with z restricted to a progression's
primes, and the exact lift of Z_N solutions back to the integers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coloring import ColoringInstance, TransferredSet
from .numtheory import euler_phi, is_prime
from .polynomials import INTEGER_COLORING, IntPolynomial
from .spectral import (
    DensityFunction,
    PolyPrimeMeasure,
    bohr_set,
    build_poly_prime_measure,
    build_prime_coloring_measure,
    large_spectrum,
    smooth,
)
from .wtrick import WTrickContext

__all__ = [
    "LiftingError",
    "PopularityProfile",
    "SolutionTriple",
    "find_monochromatic",
    "find_zn_solutions",
    "lift_solution",
    "popularity",
    "transference_report",
    "triple_count",
    "triple_count_bruteforce",
    "triple_count_fourier",
]

_BRUTE_LIMIT = 2048


class LiftingError(ValueError):
    """A Z_N solution failed to lift to an exact integer identity."""


@dataclass(frozen=True)
class SolutionTriple:
    """x + y = psi(z) with x != y; modulus None means the identity holds in Z."""

    x: int
    y: int
    z: int
    color: int | None = None
    modulus: int | None = None


def triple_count_bruteforce(
    f: DensityFunction, g: DensityFunction, h: DensityFunction
) -> complex:
    """sum over x, y of f(x) g(y) h(x+y mod N) by explicit summation."""
    if not f.modulus == g.modulus == h.modulus:
        raise ValueError("modulus mismatch")
    n = f.modulus
    if n > _BRUTE_LIMIT:
        raise ValueError(f"N = {n} > {_BRUTE_LIMIT}; use the Fourier path")
    hv = h.values
    total = 0j
    for x in range(n):
        fx = f.values[x]
        if fx == 0:
            continue
        total += fx * complex(np.dot(g.values, np.roll(hv, -x)))
    return total


def triple_count_fourier(
    f: DensityFunction, g: DensityFunction, h: DensityFunction
) -> complex:
    """(1/N) sum_r fhat(r) ghat(r) hhat(-r).

    This is the orthogonality identity matching brute force under the
    transform convention fhat(r) = sum f(x) e(-x r / N), verified against
    exhaustive counting.
    """
    if not f.modulus == g.modulus == h.modulus:
        raise ValueError("modulus mismatch")
    hs = h.spectrum
    h_neg = np.concatenate((hs[:1], hs[1:][::-1]))
    return complex((f.spectrum * g.spectrum * h_neg).sum() / f.modulus)


def triple_count(f: DensityFunction, g: DensityFunction, h: DensityFunction) -> complex:
    """Brute force for small N, spectrum-based above."""
    if f.modulus <= _BRUTE_LIMIT:
        return triple_count_bruteforce(f, g, h)
    return triple_count_fourier(f, g, h)


@dataclass(frozen=True)
class PopularityProfile:
    """nu(x) = #{(x1, x2, x3): x1, x2 in A, x3 in B, x1 + x2 - x3 = x} with
    the cube lower bound (min{|A|, |B|, (2|A|+|B|-N)/4})^3 / N."""

    modulus: int
    set_a: frozenset
    set_b: frozenset
    nu: np.ndarray
    bound: Fraction
    bound_holds: bool | None  # None when the bound is vacuous

    def value(self, x: int) -> int:
        return int(self.nu[x % self.modulus])


def popularity(set_a, set_b, modulus: int) -> PopularityProfile:
    """Exact integer popularity profile with the bound checked at every x."""
    a = frozenset(int(x) % modulus for x in set_a)
    b = frozenset(int(x) % modulus for x in set_b)
    ind_a = np.zeros(modulus, dtype=np.int64)
    for x in a:
        ind_a[x] = 1
    lin = np.convolve(ind_a, ind_a)  # exact integer linear convolution
    pair_sums = np.zeros(modulus, dtype=np.int64)
    pair_sums[: min(modulus, len(lin))] += lin[:modulus]
    if len(lin) > modulus:
        tail = lin[modulus:]
        pair_sums[: len(tail)] += tail
    nu = np.zeros(modulus, dtype=np.int64)
    for x3 in b:
        nu += np.roll(pair_sums, -x3)
    m4 = min(4 * len(a), 4 * len(b), 2 * len(a) + len(b) - modulus)
    bound = Fraction(m4, 4) ** 3 / modulus
    if m4 <= 0:
        holds = None
    else:
        holds = bool(np.all(64 * modulus * nu.astype(object) >= m4**3))
    return PopularityProfile(modulus, a, b, nu, bound, holds)


def _monotone_tail(psi: IntPolynomial) -> int:
    """An integer beyond which psi is strictly increasing (Cauchy bound on psi')."""
    d = psi.derivative()
    if d.degree == 0:
        return 1
    lead = abs(d.leading)
    return 2 + max(abs(c) for c in d.coeffs) // lead


def find_monochromatic(
    coloring: ColoringInstance,
    psi: IntPolynomial,
    b0: int,
    w0: int,
    n: int,
    first_only: bool = False,
) -> list[SolutionTriple]:
    """All (or the first) monochromatic x != y with x + y = psi(z), w0*z + b0
    prime, and x, y in the coloring's domain below n.

    z is enumerated in the outer loop (few admissible values), x below
    psi(z)/2 inside.
    """
    if psi.degree < 1 or psi.leading <= 0:
        raise ValueError("psi must have degree >= 1 and positive leading coefficient")
    out: list[SolutionTriple] = []
    tail = _monotone_tail(psi)
    z = 0
    int_domain = coloring.domain == "integers"
    colors = coloring.colors if int_domain else None
    while True:
        z += 1
        s = psi(z)
        if s > 2 * n and z >= tail:
            break
        if s > 2 * n or s < 3:
            continue
        if not is_prime(w0 * z + b0):
            continue
        lo = max(1, s - n)
        hi = (s - 1) // 2  # x < y, both <= n
        if hi < lo:
            continue
        if int_domain:
            xs = np.arange(lo, hi + 1, dtype=np.int64)
            same = colors[xs - 1] == colors[s - xs - 1]
            hits = xs[same]
        else:
            prs = coloring.elements
            i0, i1 = np.searchsorted(prs, [lo, hi + 1])
            xs = prs[i0:i1]
            hits = [x for x in xs.tolist() if coloring.color_of(s - x) == coloring.color_of(x)]
        for x in [int(v) for v in hits]:
            y = s - x
            cx = coloring.color_of(x)
            if cx is None or coloring.color_of(y) != cx:
                continue
            # re-verify in exact integers before reporting
            assert x != y and x + y == psi(z) and is_prime(w0 * z + b0)
            out.append(SolutionTriple(x, y, z, cx))
            if first_only:
                return out
    return out


def lift_solution(xp: int, yp: int, zp: int, ctx: WTrickContext) -> SolutionTriple:
    """Lift x' + y' = psi_{b,W}(z') from Z_N to the integers.

    Replays the divisibility argument: the gap l*N between the integer sum
    and the polynomial value must satisfy 0 <= l < K and K | l, forcing l = 0;
    the lifted identity and primality are then re-verified exactly.
    """
    resc, n_mod, k = ctx.rescaled, ctx.N, ctx.K
    if not 1 <= zp <= ctx.M:
        raise ValueError(f"z' = {zp} outside [1, M]")
    c, q = ctx.progression
    if not is_prime(q * zp + c):
        raise ValueError(f"z' = {zp} is not in the admissible progression")
    val = resc(zp)
    gap = val - (xp + yp)
    if gap % n_mod:
        raise ValueError("x' + y' is not congruent to psi_{b,W}(z') mod N")
    l = gap // n_mod
    if not 0 <= l < k:
        raise LiftingError(f"gap multiplier l = {l} outside [0, K)")
    if (xp + yp) % k:
        raise LiftingError(f"K = {k} does not divide x' + y' = {xp + yp}")
    for i in range(1, resc.degree + 1):
        if resc.poly.coefficient(i) % k:
            raise LiftingError(f"K = {k} does not divide the coefficient of x^{i}")
    if l % k:
        raise LiftingError(f"K | l fails: l = {l}, K = {k}")
    if l != 0:
        raise LiftingError(f"nonzero gap multiplier l = {l}")
    half = ctx.half_psi_b
    x = ctx.W * xp + half
    y = ctx.W * yp + half
    z = ctx.W * zp + ctx.b
    if x + y != ctx.psi(z):
        raise LiftingError(f"lift failed: {x} + {y} != psi({z})")
    if not is_prime(ctx.w0 * z + ctx.b0):
        raise LiftingError(f"lifted z = {z} leaves the progression")
    return SolutionTriple(x, y, z)


def find_zn_solutions(
    members: np.ndarray, ctx: WTrickContext, limit: int = 100
) -> list[tuple[int, int, int]]:
    """(x', y', z') with x', y' in the set, z' admissible, x'+y' = psi_{b,W}(z')
    in Z_N, and x' != y'; at most `limit` triples."""
    n_mod = ctx.N
    in_set = np.zeros(n_mod, dtype=bool)
    in_set[members] = True
    out = []
    c, q = ctx.progression
    for zp in range(1, ctx.M + 1):
        if not is_prime(q * zp + c):
            continue
        t = ctx.rescaled(zp) % n_mod
        ys = (t - members) % n_mod
        ok = in_set[ys] & (members != ys)
        for xp, yp in zip(members[ok].tolist(), ys[ok].tolist()):
            if xp < yp:  # report each unordered pair once
                out.append((int(xp), int(yp), zp))
                if len(out) >= limit:
                    return out
    return out


def transference_report(
    a_set: TransferredSet,
    measure: PolyPrimeMeasure | None = None,
    eta=Fraction(1, 4),
    eps=Fraction(1, 8),
) -> dict:
    """End-to-end weighted-count comparison for one transferred set.

    Computes the raw and smoothed triple counts, both diagonal corrections
    (the exact diagonal and the full-mass bound actually subtracted in the
    inequality chain), the dense-model set sizes against their (1-3kappa)N
    and 2kappa*N marks, and the final lower-bound comparisons.  Asymptotic
    bounds are recorded, never enforced.
    """
    ctx = a_set.context
    n_mod = ctx.N
    kappa = float(ctx.kappa)
    if measure is None:
        measure = build_poly_prime_measure(ctx)
    mass_measure = measure.mass.real

    if ctx.variant == INTEGER_COLORING:
        f = DensityFunction(a_set.indicator_values())
    else:
        f = build_prime_coloring_measure(a_set.members, ctx)

    spec_r = large_spectrum(measure, float(eta))
    bohr = bohr_set(spec_r, eps, n_mod, eta=float(eta))
    smoothed_measure = smooth(measure, bohr)
    if ctx.variant == INTEGER_COLORING:
        f_smooth = f
    else:
        spec_r2 = large_spectrum(f, float(eta))
        bohr2 = bohr_set(spec_r2, eps, n_mod, eta=float(eta))
        f_smooth = smooth(f, bohr2)

    raw = triple_count(f, f, measure).real
    smoothed = triple_count(f_smooth, f_smooth, smoothed_measure).real

    # exact diagonal sum_x f(x)^2 measure(2x) versus the subtracted bound
    xs = np.arange(n_mod)
    diag_exact = float((f.values[xs] ** 2 * measure.values[(2 * xs) % n_mod]).sum().real)

    frak_a = np.flatnonzero(smoothed_measure.values.real >= kappa / n_mod)
    report = {
        "variant": ctx.variant,
        "N": n_mod,
        "kappa": f"{ctx.kappa.numerator}/{ctx.kappa.denominator}",
        "mass_measure": mass_measure,
        "mass_smoothed_measure": smoothed_measure.mass.real,
        "max_smoothed_measure": float(np.abs(smoothed_measure.values).max()),
        "smoothed_pointwise_mark": (1 + 2 * kappa) / n_mod,
        "large_spectrum_size": int(len(spec_r)),
        "bohr_size": bohr.size,
        "raw_count": raw,
        "smoothed_count": smoothed,
        "count_difference": raw - smoothed,
        "diagonal_exact": diag_exact,
        "diagonal_bound": mass_measure,
        "frak_A_size": int(len(frak_a)),
        "frak_A_mark": (1 - 3 * kappa) * n_mod,
        "frak_A_meets_mark": bool(len(frak_a) >= (1 - 3 * kappa) * n_mod),
    }
    max_smooth_ok = report["max_smoothed_measure"] <= report["smoothed_pointwise_mark"]
    lhs = (1 + 2 * kappa) * len(frak_a) / n_mod + kappa * (n_mod - len(frak_a)) / n_mod
    report["pointwise_bound_holds"] = bool(max_smooth_ok)
    report["frak_A_chain_consistent"] = bool(
        (not max_smooth_ok) or lhs >= report["mass_smoothed_measure"] - 1e-9
    )

    if ctx.variant == INTEGER_COLORING:
        report["set_size"] = int(len(a_set.members))
        report["raw_minus_diagonal_bound"] = raw - mass_measure
        report["raw_minus_diagonal_exact"] = raw - diag_exact
        report["final_mark"] = kappa**4 * n_mod / 3
        report["final_holds_diag_bound"] = bool(raw - mass_measure >= kappa**4 * n_mod / 3)
        report["final_holds_diag_exact"] = bool(raw - diag_exact >= kappa**4 * n_mod / 3)
    else:
        a_dash = np.flatnonzero(f_smooth.values.real >= kappa / n_mod)
        kw = ctx.K * ctx.W
        amax = euler_phi(kw) / kw * math.log(kw * n_mod + ctx.psi(ctx.b)) / n_mod
        unweighted = triple_count(
            DensityFunction(a_set.indicator_values()),
            DensityFunction(a_set.indicator_values()),
            measure,
        ).real
        diag_unweighted = float(
            (a_set.indicator_values()[xs] ** 2 * measure.values[(2 * xs) % n_mod]).sum().real
        )
        report["mass_prime_class"] = f.mass.real
        report["mass_prime_class_mark"] = 1 / (3 * ctx.num_colors * ctx.K)
        report["mass_prime_class_meets_mark"] = bool(
            f.mass.real >= 1 / (3 * ctx.num_colors * ctx.K)
        )
        report["A_dash_size"] = int(len(a_dash))
        report["A_dash_mark"] = 2 * kappa * n_mod
        report["A_dash_meets_mark"] = bool(len(a_dash) >= 2 * kappa * n_mod)
        report["max_smoothed_class"] = float(np.abs(f_smooth.values).max())
        report["smoothed_class_mark"] = 2 / n_mod
        report["pointwise_weight_cap"] = amax
        report["unweighted_count"] = unweighted
        report["unweighted_minus_diagonal"] = unweighted - diag_unweighted
        report["final_mark"] = kappa**6 / (3 * n_mod) / amax**2
        report["final_holds"] = bool(
            unweighted - diag_unweighted >= kappa**6 / (3 * n_mod) / amax**2
        )
    return report
