"""Fourier analysis over Z_N: transforms, cyclic convolution, the weighted
polynomial-prime measure and the prime-coloring measure, large spectra,
Bohr sets, smoothing, restriction norms, complete Gauss sums, arc
classification, and weighted exponential sums.

Transform convention: fhat(r) = sum_x f(x) e(-x r / N) with e(t) = exp(2 pi i t).
Phases are always reduced with exact integer arithmetic before trig.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .numtheory import ap_prime_mask, euler_phi, is_prime
from .wtrick import WTrickContext

__all__ = [
    "ArcDecomposition",
    "ArcLabel",
    "BohrStructure",
    "CollisionError",
    "DensityFunction",
    "PolyPrimeMeasure",
    "bohr_set",
    "build_poly_prime_measure",
    "build_prime_coloring_measure",
    "complete_gauss_sum",
    "convolve",
    "dft",
    "dft_chirp",
    "dft_direct",
    "idft",
    "large_spectrum",
    "major_arc_main_term",
    "restriction_norm",
    "smooth",
    "weighted_exp_sum",
]

_DIRECT_LIMIT = 2048
_DIRECT_BLOCK = 128


class CollisionError(ValueError):
    """Two support points of the polynomial-prime measure collide mod N."""


@lru_cache(maxsize=64)
def _phase_table(n: int) -> np.ndarray:
    """exp(-2 pi i t / n) for t = 0..n-1."""
    table = np.exp(-2j * np.pi * np.arange(n) / n)
    table.setflags(write=False)
    return table


def dft_direct(values: np.ndarray) -> np.ndarray:
    """O(N^2) transform by explicit summation, in row blocks."""
    v = np.asarray(values, dtype=np.complex128)
    n = len(v)
    table = _phase_table(n)
    x = np.arange(n, dtype=np.int64)
    out = np.empty(n, dtype=np.complex128)
    for lo in range(0, n, _DIRECT_BLOCK):
        rows = np.arange(lo, min(lo + _DIRECT_BLOCK, n), dtype=np.int64)
        idx = (rows[:, None] * x[None, :]) % n
        out[lo : lo + len(rows)] = table[idx] @ v
    return out


def _next_pow2(n: int) -> int:
    return 1 << (n - 1).bit_length()


def dft_chirp(values: np.ndarray) -> np.ndarray:
    """Bluestein chirp transform: reindex x*r via squares, then one
    power-of-two cyclic convolution.  Quadratic phases are reduced mod 2N in
    exact integers before trig."""
    v = np.asarray(values, dtype=np.complex128)
    n = len(v)
    if n == 1:
        return v.copy()
    k = np.arange(n, dtype=np.int64)
    sq = (k * k) % (2 * n)
    chirp = np.exp(-1j * np.pi * sq / n)
    size = _next_pow2(2 * n - 1)
    a = np.zeros(size, dtype=np.complex128)
    a[:n] = v * chirp
    b = np.zeros(size, dtype=np.complex128)
    b[:n] = chirp.conj()
    b[size - n + 1 :] = chirp[1:].conj()[::-1]
    conv = np.fft.ifft(np.fft.fft(a) * np.fft.fft(b))
    return conv[:n] * chirp


def dft(values: np.ndarray) -> np.ndarray:
    """Transform fhat(r) = sum_x f(x) e(-x r / N); direct for small N."""
    v = np.asarray(values, dtype=np.complex128)
    if len(v) <= _DIRECT_LIMIT:
        return dft_direct(v)
    return dft_chirp(v)


def idft(spectrum: np.ndarray) -> np.ndarray:
    """Inverse transform f(x) = (1/N) sum_r fhat(r) e(x r / N)."""
    s = np.asarray(spectrum, dtype=np.complex128)
    return dft(s.conj()).conj() / len(s)


class DensityFunction:
    """Complex-valued function on Z_N with a lazily cached spectrum."""

    __slots__ = ("modulus", "values", "_spectrum")

    def __init__(self, values: np.ndarray, modulus: int | None = None):
        v = np.array(values, dtype=np.complex128)
        if v.ndim != 1 or len(v) == 0:
            raise ValueError("values must be a nonempty 1-d array")
        if modulus is not None and modulus != len(v):
            raise ValueError("modulus disagrees with array length")
        v.setflags(write=False)
        self.modulus = len(v)
        self.values = v
        self._spectrum = None

    @property
    def spectrum(self) -> np.ndarray:
        if self._spectrum is None:
            s = dft(self.values)
            s.setflags(write=False)
            self._spectrum = s
        return self._spectrum

    @property
    def mass(self) -> complex:
        return complex(self.values.sum())

    @classmethod
    def zeros(cls, modulus: int) -> "DensityFunction":
        return cls(np.zeros(modulus, dtype=np.complex128))

    @classmethod
    def delta(cls, x: int, modulus: int) -> "DensityFunction":
        v = np.zeros(modulus, dtype=np.complex128)
        v[x % modulus] = 1.0
        return cls(v)

    @classmethod
    def constant(cls, c: complex, modulus: int) -> "DensityFunction":
        return cls(np.full(modulus, c, dtype=np.complex128))

    @classmethod
    def indicator(cls, members, modulus: int) -> "DensityFunction":
        v = np.zeros(modulus, dtype=np.complex128)
        for x in members:
            v[x % modulus] = 1.0
        return cls(v)


def convolve(f: DensityFunction, g: DensityFunction) -> DensityFunction:
    """Cyclic convolution (f*g)(x) = sum_y f(y) g(x-y), via spectra."""
    if f.modulus != g.modulus:
        raise ValueError(f"modulus mismatch: {f.modulus} vs {g.modulus}")
    return DensityFunction(idft(f.spectrum * g.spectrum))


class PolyPrimeMeasure(DensityFunction):
    """The normalized forward-difference-weighted prime measure on Z_N.

    Supported at x = psi_{b,W}(z) mod N for z in [1, M] with the progression
    value prime; the weight there is the forward difference at z-1 times the
    logarithmic prime weight, normalized by psi_{b,W}(M).
    """

    __slots__ = ("context", "support", "normalization")

    def __init__(self, values, context: WTrickContext, support: dict[int, int], normalization: int):
        super().__init__(values)
        self.context = context
        self.support = support  # z -> psi_{b,W}(z) mod N, prime z only
        self.normalization = normalization


def build_poly_prime_measure(ctx: WTrickContext) -> PolyPrimeMeasure:
    """Construct the measure, exhaustively checking well-definedness.

    Every z in [1, M] must land on a distinct residue mod N; a collision
    means the K-divisibility reasoning behind the context is violated.
    """
    n_mod = ctx.N
    resc = ctx.rescaled
    norm = resc(ctx.M)
    c, q = ctx.progression
    prime_mask = ap_prime_mask(c, q, ctx.M)
    seen: dict[int, int] = {}
    values = np.zeros(n_mod, dtype=np.complex128)
    support: dict[int, int] = {}
    phi_ratio = euler_phi(q) / q
    for z in range(1, ctx.M + 1):
        x = resc(z) % n_mod
        if x in seen:
            raise CollisionError(
                f"psi_{{b,W}} collides mod N at z = {seen[x]} and z = {z} (x = {x})"
            )
        seen[x] = z
        if prime_mask[z - 1]:
            weight = resc.forward_difference(z - 1) * phi_ratio * math.log(q * z + c) / norm
            values[x] = weight
            support[z] = x
    return PolyPrimeMeasure(values, ctx, support, norm)


def build_prime_coloring_measure(members, ctx: WTrickContext) -> DensityFunction:
    """Normalized log-weighted indicator of a transferred prime class.

    The weight at x is (phi(KW)/KW) * log(W*x + psi(b)/2) / N when the source
    value W*x + psi(b)/2 is prime and K | x (transferred points always sit in
    K Z); the offset psi(b)/2 must be coprime to KW.
    """
    c = ctx.half_psi_b
    kw = ctx.K * ctx.W
    if math.gcd(c, kw) != 1:
        raise ValueError(f"gcd(psi(b)/2, K*W) = {math.gcd(c, kw)} != 1")
    phi_ratio = euler_phi(kw) / kw
    values = np.zeros(ctx.N, dtype=np.complex128)
    for x in members:
        x = int(x)
        if not 0 <= x < ctx.N:
            raise ValueError(f"member {x} outside [0, N)")
        if x % ctx.K:
            continue
        v = ctx.W * x + c
        if is_prime(v):
            values[x] = phi_ratio * math.log(v) / ctx.N
    return DensityFunction(values)


def large_spectrum(f: DensityFunction, eta) -> np.ndarray:
    """Frequencies r with |fhat(r)| >= eta."""
    eta = float(eta)
    if eta <= 0:
        raise ValueError("requires eta > 0")
    return np.flatnonzero(np.abs(f.spectrum) >= eta).astype(np.int64)


@dataclass(frozen=True)
class BohrStructure:
    """Threshold, frequency set, radius, and the resulting Bohr set."""

    modulus: int
    eta: float | None
    frequencies: tuple[int, ...]
    radius: Fraction
    members: np.ndarray

    @property
    def size(self) -> int:
        return len(self.members)

    def normalized_indicator(self) -> DensityFunction:
        v = np.zeros(self.modulus, dtype=np.complex128)
        v[self.members] = 1.0 / len(self.members)
        return DensityFunction(v)


def _as_fraction(eps) -> Fraction:
    if isinstance(eps, Fraction):
        return eps
    if isinstance(eps, int):
        return Fraction(eps)
    if isinstance(eps, str):
        return Fraction(eps)
    if isinstance(eps, tuple):
        return Fraction(*eps)
    raise ValueError("radius must be an exact rational (Fraction, int, 'p/q', or tuple)")


def bohr_set(frequencies, eps, modulus: int, eta=None) -> BohrStructure:
    """B = {x : ||x r / N|| <= eps for all r}; membership and the pigeonhole
    bound |B| >= eps^{|R|} N are both exact integer comparisons."""
    eps = _as_fraction(eps)
    if not 0 < eps < Fraction(1, 2):
        raise ValueError("requires 0 < eps < 1/2")
    freqs = tuple(sorted(int(r) % modulus for r in frequencies))
    p, q = eps.numerator, eps.denominator
    # filter survivors one frequency at a time; the candidate set collapses
    # quickly, so the work is O(N) plus small tails
    members = np.arange(modulus, dtype=np.int64)
    for r in freqs:
        t = (members * r) % modulus
        dist = np.minimum(t, modulus - t)
        members = members[dist * q <= p * modulus]
    members.setflags(write=False)
    if len(members) * q ** len(freqs) < p ** len(freqs) * modulus:
        raise RuntimeError(
            f"Bohr bound violated: |B| = {len(members)} < eps^|R| * N"
        )
    return BohrStructure(modulus, None if eta is None else float(eta), freqs, eps, members)


def smooth(f: DensityFunction, bohr: BohrStructure) -> DensityFunction:
    """f * b * b with b the normalized Bohr indicator; mass is preserved."""
    b_spec = bohr.normalized_indicator().spectrum
    return DensityFunction(idft(f.spectrum * b_spec * b_spec))


def restriction_norm(f: DensityFunction, rho: float) -> float:
    """sum_r |fhat(r)|^rho."""
    if rho <= 0:
        raise ValueError("requires rho > 0")
    return float((np.abs(f.spectrum) ** rho).sum())


def complete_gauss_sum(ctx: WTrickContext, a: int, q: int) -> complex:
    """sum over 1 <= s <= q, with the progression value coprime to q, of
    e(psi_{b,W}(s) a / q); phases reduced mod q in exact integers."""
    if q < 1 or not 1 <= a <= q:
        raise ValueError("requires 1 <= a <= q")
    if math.gcd(a, q) != 1:
        raise ValueError(f"gcd({a}, {q}) != 1")
    c, big_q = ctx.progression
    total = 0j
    for s in range(1, q + 1):
        if math.gcd(big_q * s + c, q) != 1:
            continue
        t = (ctx.rescaled(s) * a) % q
        total += cmath.exp(2j * cmath.pi * t / q)
    return total


@dataclass(frozen=True)
class ArcLabel:
    major: bool
    a: int | None = None
    q: int | None = None


@dataclass(frozen=True)
class ArcDecomposition:
    """Major/minor arc classifier at cutoff M with exponent B.

    Major arcs are |alpha*q - a| <= (log M)^B / psi_{b,W}(M) over coprime
    1 <= a <= q <= (log M)^B, with the threshold capped strictly below
    1/(2 q^2) so arcs stay pairwise disjoint at desk scale; distances are
    measured on the circle (a = q covers alpha near 0).
    """

    cutoff: int
    arc_exponent: float
    threshold: float
    q_limit: int

    @classmethod
    def from_context(cls, ctx: WTrickContext, arc_exponent: float = 10.0) -> "ArcDecomposition":
        log_m = math.log(ctx.M) if ctx.M >= 2 else 1.0
        raw = log_m**arc_exponent
        threshold = raw / float(ctx.rescaled(ctx.M))
        q_limit = int(min(raw, 10**9))
        return cls(ctx.M, arc_exponent, threshold, max(1, q_limit))

    def classify(self, alpha) -> ArcLabel:
        frac = Fraction(alpha) % 1
        af = float(frac)
        cands = []
        for p, q in _convergents(frac, self.q_limit):
            cands.append((q, q if p == 0 else p, p))
        for q, a, p in sorted(set(cands)):
            d = abs(af - p / q)
            err = q * min(d, 1 - d)
            if err <= self.threshold and err < 1 / (2 * q * q):
                return ArcLabel(True, a, q)
        return ArcLabel(False)


def _convergents(frac: Fraction, q_limit: int) -> list[tuple[int, int]]:
    """Continued-fraction convergents (p, q) of frac in [0, 1) with q <= q_limit."""
    x, y = frac.numerator, frac.denominator
    hm2, km2 = 0, 1
    hm1, km1 = 1, 0
    out = []
    while y:
        a = x // y
        h = a * hm1 + hm2
        k = a * km1 + km2
        if k > q_limit:
            break
        out.append((h, k))
        hm2, km2, hm1, km1 = hm1, km1, h, k
        x, y = y, x - a * y
    return out


def _e_exact(numer: int, denom: int) -> complex:
    return cmath.exp(2j * cmath.pi * ((numer % denom) / denom))


def _phase_for(value: int, alpha) -> complex:
    """e(alpha * value) with exact reduction when alpha is rational."""
    if isinstance(alpha, Fraction):
        return _e_exact(value * alpha.numerator, alpha.denominator)
    return cmath.exp(2j * cmath.pi * math.fmod(value * alpha, 1.0))


def weighted_exp_sum(ctx: WTrickContext, alpha, form: str = "measure") -> complex:
    """Weighted exponential sums attached to the context.

    form="measure": sum over z in [1, M] of the forward-difference-weighted
    logarithmic prime weight times e(alpha * psi_{b,W}(z)) - the un-normalized
    measure transform.  form="ap": sum over x in [1, N] of the logarithmic
    prime weight of the progression times e(alpha * psi_{b,W}(x)).
    """
    c, q = ctx.progression
    phi_ratio = euler_phi(q) / q
    total = 0j
    if form == "measure":
        mask = ap_prime_mask(c, q, ctx.M)
        for z in range(1, ctx.M + 1):
            if not mask[z - 1]:
                continue
            w = ctx.rescaled.forward_difference(z - 1) * phi_ratio * math.log(q * z + c)
            total += w * _phase_for(ctx.rescaled(z), alpha)
        return total
    if form == "ap":
        mask = ap_prime_mask(c, q, ctx.N)
        for x in (np.flatnonzero(mask) + 1).tolist():
            w = phi_ratio * math.log(q * x + c)
            total += w * _phase_for(ctx.rescaled(x), alpha)
        return total
    raise ValueError(f"unknown form {form!r}")


def _geometric_phase_sum(beta, top: int) -> complex:
    """sum_{x=1}^{top} e(beta x) = e(beta (top+1)/2) sin(pi beta top)/sin(pi beta).

    Arguments are reduced mod 2 (the period of sin(pi .)) before trig, exactly
    when beta is rational.
    """

    def red2(v) -> float:
        if isinstance(v, Fraction):
            return float(v % 2)
        r = math.fmod(v, 2.0)
        return r + 2.0 if r < 0 else r

    if isinstance(beta, Fraction):
        beta = beta % 1
    else:
        beta = math.fmod(beta, 1.0)
        if beta < 0:
            beta += 1.0
    if beta == 0:
        return complex(top)
    den = math.sin(math.pi * float(beta))
    if den == 0.0:
        return complex(top)
    num = math.sin(math.pi * red2(beta * top))
    pref = cmath.exp(1j * math.pi * red2(beta * (top + 1)))
    return pref * (num / den)


def major_arc_main_term(
    ctx: WTrickContext,
    a: int,
    q: int,
    alpha,
    arc: ArcDecomposition | None = None,
    arc_exponent: float = 10.0,
) -> complex:
    """Main term (phi(WW0)/phi(WW0 q)) * GaussSum(a, q) * sum_{x<=psi(M)} e((alpha-a/q) x).

    alpha must lie in the (a, q) major arc of the decomposition.
    """
    if arc is None:
        arc = ArcDecomposition.from_context(ctx, arc_exponent)
    frac = Fraction(alpha) % 1
    d = abs(float(frac) - a / q)
    err = q * min(d, 1 - d)
    if err > arc.threshold or err >= 1 / (2 * q * q):
        raise ValueError(f"alpha = {alpha} is outside the ({a}, {q}) major arc")
    _, big_q = ctx.progression
    prefactor = euler_phi(big_q) / euler_phi(big_q * q)
    gauss = complete_gauss_sum(ctx, a, q)
    beta = frac - Fraction(a, q)
    top = ctx.rescaled(ctx.M)
    return prefactor * gauss * _geometric_phase_sum(beta, top)
