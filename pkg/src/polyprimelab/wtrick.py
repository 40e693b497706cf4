"""Parameter construction for the residue-restricted transference setup.

Builds the full bundle: per-prime residues b_p (non-root search for large
primes, positivity-constrained scan for small ones), the derivative's
small-prime part K, the smooth modulus W with its CRT residue b, the prime
modulus N near 2n/W, and the rescaled polynomial with its cutoff M.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .numtheory import crt, is_prime, p_adic_valuation, prime_in_interval, sieve_primes
from .polynomials import (
    INTEGER_COLORING,
    PRIME_COLORING,
    VARIANTS,
    IntPolynomial,
    RescaledPolynomial,
    compute_M,
    rescale,
    psi_bound,
)

__all__ = [
    "HypothesisError",
    "NecessityViolationError",
    "ParityCertificate",
    "ScaleError",
    "WTrickContext",
    "build_context",
    "check_cp",
    "compute_K",
    "find_nonroot",
    "select_bp",
    "suggest_smooth_exponents",
    "verify_gcd_identity",
]

_SCAN_CAP = 10**6  # defensive bound for residue scans


class HypothesisError(ValueError):
    """The parity hypothesis on psi fails for the given (b0, w0)."""


class NecessityViolationError(ValueError):
    """No admissible residue c_p exists for some prime(s); carries them."""

    def __init__(self, primes: list[int]):
        self.primes = list(primes)
        super().__init__(f"no admissible c_p for p in {self.primes}")


class ScaleError(ValueError):
    """The requested scale n is too small for the context's parameters."""


@dataclass(frozen=True)
class ParityCertificate:
    """Which branch of the parity hypothesis holds, with its witness."""

    w0_even: bool
    witness_arg: int
    witness_value: int

    @classmethod
    def check(cls, psi: IntPolynomial, b0: int, w0: int) -> "ParityCertificate":
        if w0 % 2 == 0:
            for arg in (1, 0):
                if psi(arg) % 2 == 0:
                    return cls(True, arg, psi(arg))
            raise HypothesisError("psi(1) and psi(0) both odd with w0 even")
        v = psi(b0 - 1)
        if v % 2:
            raise HypothesisError(f"psi(b0-1) = {v} odd with w0 odd")
        return cls(False, b0 - 1, v)


def find_nonroot(h: IntPolynomial, p: int, candidates) -> int:
    """Smallest candidate residue where h does not vanish mod p.

    Candidates must be distinct mod p and number at least deg(h mod p) + 1,
    which guarantees a non-root exists when h is nonzero mod p.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    cand = sorted(candidates)
    if len({c % p for c in cand}) != len(cand):
        raise ValueError("candidate residues not distinct mod p")
    reduced = [c % p for c in h.coeffs]
    if not any(reduced):
        raise ValueError("polynomial vanishes identically mod p")
    deg_mod = len(reduced) - 1 - next(i for i, c in enumerate(reduced) if c)
    if len(cand) <= deg_mod:
        raise ValueError(f"need at least {deg_mod + 1} candidates, got {len(cand)}")
    for c in cand:
        if h(c) % p:
            return c
    raise RuntimeError("unreachable: nonzero polynomial had only roots")


def check_cp(psi: IntPolynomial, b0: int, w0: int, p: int) -> int | None:
    """Smallest 1 <= c <= p with p dividing neither w0*c + b0 nor psi(c)/2."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    for c in range(1, p + 1):
        v = psi(c)
        if v % 2:
            raise ValueError(f"psi({c}) = {v} is odd; psi(c)/2 is not an integer")
        if (w0 * c + b0) % p and (v // 2) % p:
            return c
    return None


def select_bp(
    psi: IntPolynomial,
    b0: int,
    w0: int,
    coeff_bound: int,
    p: int,
    variant: str,
    cp: int | None = None,
) -> int:
    """Residue b_p = b0 (mod w0) admissible for the prime p.

    For p > coeff_bound the choice is a non-root search in [1, p-1] (of psi'
    alone, or of psi'*psi in the prime-coloring variant).  For small p the
    scan additionally demands psi'((b_p-b0)/w0) > 0, avoidance of p | b_p,
    and in the prime-coloring variant the congruence b_p = w0*c_p + b0
    (mod p*w0).
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    dpsi = psi.derivative()
    if p > coeff_bound:
        h = dpsi if variant == INTEGER_COLORING else dpsi * psi
        ts = [t for t in range((p - 1 - b0) // w0 + 1) if 1 <= b0 + t * w0 <= p - 1]
        t = find_nonroot(h, p, ts)
        return b0 + t * w0
    if variant == INTEGER_COLORING:
        if p == 2 and w0 % 2 == 0 and psi(0) % 2 and psi(1) % 2:
            raise HypothesisError("psi is odd on every integer; no admissible b_2")
        t = 0
        while t < _SCAN_CAP:
            bp = b0 + t * w0
            ok = bp % p != 0 and dpsi(t) > 0
            if ok and p == 2 and w0 % 2 == 0:
                ok = psi(t) % 2 == 0
            if ok:
                return bp
            t += 1
        raise RuntimeError("residue scan exhausted")
    if cp is None:
        raise NecessityViolationError([p])
    t = cp % p
    while t < _SCAN_CAP:
        ok = b0 + t * w0 >= 1 and dpsi(t) > 0
        if ok and p == 2:
            # keep psi(t)/2 odd, as at c_2; the class offset psi(b)/2 must
            # stay coprime to 2 for the prime-class measure to carry mass
            ok = psi(t) % 4 == 2
        if ok:
            return b0 + t * w0  # = w0*c_p + b0 (mod p*w0) since t = c_p (mod p)
        t += p
    raise RuntimeError("residue scan exhausted")


def compute_K(
    bp: dict[int, int],
    psi: IntPolynomial,
    b0: int,
    w0: int,
    coeff_bound: int,
) -> int:
    """Product over p <= coeff_bound of p^(v_p of psi'((b_p - b0)/w0))."""
    dpsi = psi.derivative()
    k_factor = 1
    for p in sieve_primes(max(2, coeff_bound)).primes.tolist():
        if p > coeff_bound:
            break
        if p not in bp:
            raise ValueError(f"b_p missing for p = {p}")
        t, rem = divmod(bp[p] - b0, w0)
        if rem:
            raise ValueError(f"b_{p} = {bp[p]} is not congruent to b0 mod w0")
        d = dpsi(t)
        if d == 0:
            raise ValueError(f"psi'((b_{p} - b0)/w0) = 0; valuation undefined")
        k_factor *= p ** p_adic_valuation(p, d)
    return k_factor


@dataclass
class WTrickContext:
    """The complete parameter bundle for one transference experiment.

    Fields mirror the construction order: the polynomial psi and progression
    (b0, w0); the color count; the coefficient bound gating small primes;
    per-prime residues bp (and cp for the prime-coloring variant); the
    derivative's small-prime part K and the density margin kappa = 1/(10^4*K*m);
    the smooth modulus W = prod p^e_p with CRT residue b; the ambient scale n
    and prime modulus N; and the rescaled polynomial with cutoff M.
    """

    variant: str
    psi: IntPolynomial
    b0: int
    w0: int
    num_colors: int
    coeff_bound: int
    bp: dict[int, int]
    cp: dict[int, int] | None
    K: int
    kappa: Fraction
    smooth_exponents: dict[int, int]
    W: int
    b: int
    n: int
    N: int
    rescaled: RescaledPolynomial
    M: int
    widen_steps: int = 0
    bertrand_fallback: bool = False

    @property
    def smoothing_level(self) -> int:
        """Largest prime in the smooth modulus (0 when W = 1)."""
        return max(self.smooth_exponents, default=0)

    @property
    def progression(self) -> tuple[int, int]:
        """(residue, modulus) of the progression carrying the measure."""
        return self.w0 * self.b + self.b0, self.W * self.w0

    @property
    def half_psi_b(self) -> int:
        v = self.psi(self.b)
        if v % 2:
            raise ValueError("psi(b) is odd")
        return v // 2

    def verify_invariants(self) -> list[tuple[str, bool, str]]:
        """Re-check every structural invariant exactly; returns (name, ok, info)."""
        out = []
        c, q = self.progression
        out.append(("coprime-progression", math.gcd(c, q) == 1, f"gcd({c},{q})"))
        out.append(("psi-b-even", self.psi(self.b) % 2 == 0, f"psi(b)={self.psi(self.b)}"))
        want = Fraction(1, 10**4 * self.K * self.num_colors)
        out.append(("kappa-exact", self.kappa == want, f"kappa={self.kappa}"))
        ok = True
        for p, e in self.smooth_exponents.items():
            mod = p ** (e + p_adic_valuation(p, self.w0) if self.w0 % p == 0 else e)
            if (self.w0 * self.b + self.b0 - self.bp[p]) % mod:
                ok = False
        out.append(("crt-residues", ok, "w0*b+b0 = b_p mod p^(e_p+v_p(w0))"))
        try:
            k_check = compute_K(self.bp, self.psi, self.b0, self.w0, self.coeff_bound)
            out.append(("k-product", k_check == self.K, f"K={self.K} vs {k_check}"))
        except ValueError as e:
            out.append(("k-product", False, str(e)))
        n_ok = is_prime(self.N) and self.N * self.W > 2 * self.n
        if self.widen_steps == 0 and not self.bertrand_fallback:
            n_ok = n_ok and Fraction(self.N) <= (2 + self.kappa) * Fraction(self.n, self.W)
        else:
            n_ok = n_ok and self.N * self.W <= 4 * self.n
        out.append(("n-in-interval", n_ok, f"N={self.N}, widen={self.widen_steps}"))
        return out

    def to_json_dict(self) -> dict:
        return {
            "format": "wtrick-context/1",
            "variant": self.variant,
            "psi": [str(x) for x in self.psi.coeffs],
            "b0": str(self.b0),
            "w0": str(self.w0),
            "num_colors": str(self.num_colors),
            "coeff_bound": str(self.coeff_bound),
            "bp": {str(p): str(v) for p, v in sorted(self.bp.items())},
            "cp": None if self.cp is None else {str(p): str(v) for p, v in sorted(self.cp.items())},
            "K": str(self.K),
            "kappa": f"{self.kappa.numerator}/{self.kappa.denominator}",
            "smooth_exponents": {str(p): str(e) for p, e in sorted(self.smooth_exponents.items())},
            "W": str(self.W),
            "b": str(self.b),
            "n": str(self.n),
            "N": str(self.N),
            "rescaled": [str(x) for x in self.rescaled.poly.coeffs],
            "M": str(self.M),
            "widen_steps": str(self.widen_steps),
            "bertrand_fallback": self.bertrand_fallback,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "WTrickContext":
        if d.get("format") != "wtrick-context/1":
            raise ValueError("unrecognized context format")
        psi = IntPolynomial(tuple(int(x) for x in d["psi"]))
        w = int(d["W"])
        b = int(d["b"])
        resc = rescale(psi, w, b)
        if tuple(str(x) for x in resc.poly.coeffs) != tuple(d["rescaled"]):
            raise ValueError("stored rescaled coefficients do not match")
        num, den = d["kappa"].split("/")
        return cls(
            variant=d["variant"],
            psi=psi,
            b0=int(d["b0"]),
            w0=int(d["w0"]),
            num_colors=int(d["num_colors"]),
            coeff_bound=int(d["coeff_bound"]),
            bp={int(p): int(v) for p, v in d["bp"].items()},
            cp=None if d["cp"] is None else {int(p): int(v) for p, v in d["cp"].items()},
            K=int(d["K"]),
            kappa=Fraction(int(num), int(den)),
            smooth_exponents={int(p): int(e) for p, e in d["smooth_exponents"].items()},
            W=w,
            b=b,
            n=int(d["n"]),
            N=int(d["N"]),
            rescaled=resc,
            M=int(d["M"]),
            widen_steps=int(d["widen_steps"]),
            bertrand_fallback=bool(d["bertrand_fallback"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, s: str) -> "WTrickContext":
        return cls.from_json_dict(json.loads(s))


def _primes_upto(limit: int) -> list[int]:
    if limit < 2:
        return []
    return [p for p in sieve_primes(limit).primes.tolist() if p <= limit]


def suggest_smooth_exponents(
    psi: IntPolynomial, b0: int, w0: int, variant: str, margin: int = 1
) -> dict[int, int]:
    """Exponents e_p = v_p + margin for every p <= coeff_bound.

    With margin >= 1 the resulting context satisfies the gcd-identity
    precondition and K divides W.
    """
    bound = psi_bound(psi, w0, variant)
    cp: dict[int, int] = {}
    if variant == PRIME_COLORING:
        missing = []
        for p in _primes_upto(bound):
            c = check_cp(psi, b0, w0, p)
            if c is None:
                missing.append(p)
            else:
                cp[p] = c
        if missing:
            raise NecessityViolationError(missing)
    dpsi = psi.derivative()
    out = {}
    for p in _primes_upto(bound):
        bp = select_bp(psi, b0, w0, bound, p, variant, cp.get(p))
        v = p_adic_valuation(p, dpsi((bp - b0) // w0))
        out[p] = v + margin
    if variant == PRIME_COLORING and 2 in out:
        # pin b mod 4 so psi(b) = psi(t_2) mod 4, keeping psi(b)/2 odd
        out[2] = max(out[2], 2)
    return out


def build_context(
    psi: IntPolynomial,
    b0: int,
    w0: int,
    num_colors: int,
    variant: str,
    smooth_exponents: dict[int, int],
    n: int,
) -> WTrickContext:
    """Assemble and validate the full parameter bundle at scale n.

    The prime modulus N is the smallest prime above 2n/W.  The target
    interval (2n/W, (2+kappa)n/W] is widened by factors of (1+kappa) up to
    eight times and, failing that, once more to the Bertrand-safe bound
    4n/W; the number of widening steps is recorded on the context.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if not 1 <= b0 <= w0:
        raise ValueError(f"requires 1 <= b0 <= w0, got b0={b0}, w0={w0}")
    if math.gcd(b0, w0) != 1:
        raise ValueError(f"gcd(b0, w0) = {math.gcd(b0, w0)} != 1")
    if psi.degree < 1 or psi.leading <= 0:
        raise ValueError("psi must have degree >= 1 and positive leading coefficient")
    if num_colors < 1:
        raise ValueError("requires num_colors >= 1")
    ParityCertificate.check(psi, b0, w0)

    exps = {int(p): int(e) for p, e in smooth_exponents.items() if e > 0}
    for p in exps:
        if not is_prime(p):
            raise ValueError(f"smooth modulus key {p} is not prime")

    bound = psi_bound(psi, w0, variant)
    cp: dict[int, int] | None = None
    if variant == PRIME_COLORING:
        cp = {}
        missing = []
        for p in _primes_upto(bound):
            c = check_cp(psi, b0, w0, p)
            if c is None:
                missing.append(p)
            else:
                cp[p] = c
        if missing:
            raise NecessityViolationError(missing)

    needed = sorted(set(_primes_upto(bound)) | set(exps))
    bp = {
        p: select_bp(psi, b0, w0, bound, p, variant, cp.get(p) if cp else None)
        for p in needed
    }
    k_factor = compute_K(bp, psi, b0, w0, bound)
    kappa = Fraction(1, 10**4 * k_factor * num_colors)

    w_modulus = 1
    congruences = []
    for p, e in sorted(exps.items()):
        w_modulus *= p**e
        congruences.append(((bp[p] - b0) // w0 % p**e, p**e))
    b = 0
    if congruences:
        b, _ = crt(congruences)

    if psi(b) % 2:
        raise HypothesisError(
            f"psi(b) = psi({b}) is odd; include p = 2 in the smooth modulus"
        )

    lo = (2 * n) // w_modulus  # N > 2n/W  <=>  N >= lo + 1
    bertrand_hi = (4 * n) // w_modulus
    if bertrand_hi <= lo:
        raise ScaleError(f"no room for a prime modulus: n={n}, W={w_modulus}")
    found = prime_in_interval(lo, bertrand_hi)
    if found is None:
        raise ScaleError(f"no prime in (2n/W, 4n/W] = ({lo}, {bertrand_hi}]")
    widen_steps = 0
    fallback = False
    base_upper = (2 + kappa) * Fraction(n, w_modulus)
    while widen_steps <= 8 and Fraction(found) > base_upper * (1 + kappa) ** widen_steps:
        widen_steps += 1
    if widen_steps > 8:
        widen_steps = 8
        fallback = True

    resc = rescale(psi, w_modulus, b)
    try:
        cutoff = compute_M(resc, k_factor, found)
    except ValueError as e:
        raise ScaleError(f"cutoff search failed at n={n}: {e}") from e

    ctx = WTrickContext(
        variant=variant,
        psi=psi,
        b0=b0,
        w0=w0,
        num_colors=num_colors,
        coeff_bound=bound,
        bp=bp,
        cp=cp,
        K=k_factor,
        kappa=kappa,
        smooth_exponents=exps,
        W=w_modulus,
        b=b,
        n=n,
        N=found,
        rescaled=resc,
        M=cutoff,
        widen_steps=widen_steps,
        bertrand_fallback=fallback,
    )
    bad = [name for name, ok, _ in ctx.verify_invariants() if not ok]
    if bad:
        raise RuntimeError(f"context invariants violated: {bad}")
    return ctx


def verify_gcd_identity(ctx: WTrickContext) -> bool | None:
    """Check gcd(psi'(b), W) = K and gcd(psi'(b), a1*W^(k-1)) = gcd(psi'(b), W).

    Returns None (inconclusive) unless every smooth exponent for p up to the
    coefficient bound strictly exceeds the corresponding valuation of
    psi'((b_p - b0)/w0); the identity is only a theorem beyond that point.
    """
    dpsi = ctx.psi.derivative()
    for p in _primes_upto(ctx.coeff_bound):
        v = p_adic_valuation(p, dpsi((ctx.bp[p] - ctx.b0) // ctx.w0))
        if ctx.smooth_exponents.get(p, 0) <= v:
            return None
    d_b = dpsi(ctx.b)
    g_w = math.gcd(d_b, ctx.W)
    g_lead = math.gcd(d_b, ctx.psi.leading * ctx.W ** (ctx.psi.degree - 1))
    return g_w == ctx.K and g_lead == g_w
