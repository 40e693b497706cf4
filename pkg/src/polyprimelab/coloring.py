"""Coloring generation and set constructions: random/rule colorings of an
integer range or of the primes, the blocking partition witnessing necessity
of the residue condition, and the pigeonhole-dense transferred classes."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .numtheory import euler_phi, sieve_primes
from .polynomials import INTEGER_COLORING, PRIME_COLORING, IntPolynomial
from .wtrick import ScaleError, WTrickContext, check_cp

__all__ = [
    "ColoringInstance",
    "ConstructionInapplicableError",
    "TransferredSet",
    "blocking_partition",
    "dense_class",
    "dense_prime_class",
    "load_coloring",
    "make_coloring",
    "save_coloring",
]

DOMAIN_INTEGERS = "integers"
DOMAIN_PRIMES = "primes"


class ConstructionInapplicableError(ValueError):
    """The blocking partition's guarantee fails (an admissible c_p exists)."""


@dataclass
class ColoringInstance:
    """Total assignment of colors 1..m to [1, n] or to the primes <= n."""

    domain: str
    n: int
    num_colors: int
    provenance: str
    elements: np.ndarray  # sorted domain elements
    colors: np.ndarray  # aligned with elements, values in 1..m
    _lookup: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.domain == DOMAIN_INTEGERS:
            self._lookup = {}
        else:
            self._lookup = {int(x): int(c) for x, c in zip(self.elements, self.colors)}

    def color_of(self, x: int) -> int | None:
        """Color of x, or None when x is outside the domain."""
        if self.domain == DOMAIN_INTEGERS:
            if 1 <= x <= self.n:
                return int(self.colors[x - 1])
            return None
        return self._lookup.get(x)

    def class_members(self, color: int) -> np.ndarray:
        return self.elements[self.colors == color]

    def class_counts(self) -> np.ndarray:
        """Counts per color, index 0 unused."""
        return np.bincount(self.colors, minlength=self.num_colors + 1)


def _domain_elements(domain: str, n: int) -> np.ndarray:
    if domain == DOMAIN_INTEGERS:
        if n < 1:
            raise ValueError("empty integer domain")
        return np.arange(1, n + 1, dtype=np.int64)
    if domain == DOMAIN_PRIMES:
        if n < 2:
            raise ValueError("empty prime domain")
        return sieve_primes(n).primes
    raise ValueError(f"unknown domain {domain!r}")


def make_coloring(domain: str, n: int, m: int, rule: str = "random", seed: int = 0) -> ColoringInstance:
    """Build a coloring from a rule spec.

    Rules: "random" (seeded), "residue:<q>" (color = ((x-1) mod q) mod m + 1),
    "interval:<c1,c2,...>" (blocks between cuts, cycled through the colors).
    """
    if m < 1:
        raise ValueError("requires at least one color")
    elements = _domain_elements(domain, n)
    if rule == "random":
        rng = np.random.default_rng(seed)
        colors = rng.integers(1, m + 1, size=len(elements), dtype=np.int64)
        provenance = f"random;seed={seed}"
    elif rule.startswith("residue:"):
        q = int(rule.split(":", 1)[1])
        if q < 1:
            raise ValueError("residue modulus must be >= 1")
        colors = ((elements - 1) % q) % m + 1
        provenance = rule
    elif rule.startswith("interval:"):
        cuts = sorted(int(c) for c in rule.split(":", 1)[1].split(",") if c)
        blocks = np.searchsorted(np.asarray(cuts, dtype=np.int64), elements, side="left")
        colors = blocks % m + 1
        provenance = rule
    else:
        raise ValueError(f"unknown coloring rule {rule!r}")
    return ColoringInstance(domain, n, m, provenance, elements, colors.astype(np.int64))


def blocking_partition(
    psi: IntPolynomial, b0: int, w0: int, p: int, n: int
) -> ColoringInstance:
    """The 3p-class coloring of the primes <= n that blocks all solutions.

    Requires that no admissible residue c_p exists.  With T = psi of the
    integer part of (p - b0)/w0, primes split by size range (<= T/2, > T,
    or between) and by residue class mod p.
    """
    if check_cp(psi, b0, w0, p) is not None:
        raise ConstructionInapplicableError(
            f"c_{p} exists; the blocking construction's guarantee fails"
        )
    arg, rem = divmod(p - b0, w0)
    note = "" if rem == 0 else f";T-arg-floored({p}-{b0})/{w0}"
    t_threshold = psi(arg)
    primes = sieve_primes(n).primes
    j = np.where(primes % p == 0, p, primes % p).astype(np.int64)
    colors = np.where(
        2 * primes <= t_threshold,
        j,
        np.where(primes > t_threshold, p + j, 2 * p + j),
    )
    return ColoringInstance(
        DOMAIN_PRIMES,
        n,
        3 * p,
        f"blocking:p={p};T={t_threshold}{note}",
        primes,
        colors.astype(np.int64),
    )


@dataclass
class TransferredSet:
    """A color class mapped into Z_N: x -> (x - psi(b)/2) / W."""

    context: WTrickContext
    color_index: int
    members: np.ndarray  # ascending, values in [0, N)
    meta: dict = field(default_factory=dict)

    def indicator_values(self) -> np.ndarray:
        v = np.zeros(self.context.N, dtype=np.complex128)
        v[self.members] = 1.0
        return v

    def verify_membership(self, coloring: ColoringInstance) -> bool:
        """Recheck the defining conditions element by element."""
        ctx = self.context
        half = ctx.half_psi_b
        kw = ctx.K * ctx.W
        lo = ctx.psi(ctx.W)
        for xp in self.members.tolist():
            x = ctx.W * int(xp) + half
            if not (lo <= x <= ctx.n and (x - half) % kw == 0):
                return False
            if coloring.color_of(x) != self.color_index:
                return False
        return True


def _candidates(ctx: WTrickContext) -> np.ndarray:
    """Integers x in [max(psi(W), psi(b)/2), n] with x = psi(b)/2 (mod KW)."""
    half = ctx.half_psi_b
    kw = ctx.K * ctx.W
    lo = max(ctx.psi(ctx.W), half)
    start = lo + (half - lo) % kw
    if start > ctx.n:
        return np.zeros(0, dtype=np.int64)
    return np.arange(start, ctx.n + 1, kw, dtype=np.int64)


def dense_class(coloring: ColoringInstance, ctx: WTrickContext) -> TransferredSet:
    """Pigeonhole-densest color class among admissible x, mapped into Z_N.

    The chosen class must hold at least N/(4mK) admissible points; smaller
    scales raise ScaleError.
    """
    if ctx.variant != INTEGER_COLORING:
        raise ValueError("dense_class requires an integer-coloring context")
    if coloring.domain != DOMAIN_INTEGERS or coloring.n < ctx.n:
        raise ValueError("coloring must cover the integers [1, n]")
    m, k, w = ctx.num_colors, ctx.K, ctx.W
    if m != coloring.num_colors:
        raise ValueError("coloring color count disagrees with the context")
    if Fraction(ctx.n, m * k * w) - ctx.psi(w) <= 0:
        raise ScaleError(f"n/(mKW) - psi(W) <= 0 at n = {ctx.n}")
    cand = _candidates(ctx)
    if len(cand) == 0:
        raise ScaleError("no admissible points below n")
    counts = np.bincount(coloring.colors[cand - 1], minlength=m + 1)
    best = int(np.argmax(counts[1:])) + 1  # smallest index attaining the max
    best_count = int(counts[best])
    if 4 * m * k * best_count < ctx.N:
        raise ScaleError(
            f"densest class holds {best_count} points < N/(4mK) = {ctx.N}/(4*{m}*{k})"
        )
    members = (cand[coloring.colors[cand - 1] == best] - ctx.half_psi_b) // w
    if len(members) and not (0 <= members[0] and members[-1] < ctx.N):
        raise RuntimeError("transferred member outside [0, N)")
    return TransferredSet(ctx, best, members.astype(np.int64), {"count": best_count})


def dense_prime_class(coloring: ColoringInstance, ctx: WTrickContext) -> TransferredSet:
    """Log-weighted densest prime class among admissible primes, mapped to Z_N.

    The prime-number-theorem margin (1-kappa) n / (m phi(KW)) is recorded but
    never enforced: theta(n)/n falls short of 1-kappa for every reachable n,
    so the comparison is diagnostic only.
    """
    if ctx.variant != PRIME_COLORING:
        raise ValueError("dense_prime_class requires a prime-coloring context")
    if coloring.domain != DOMAIN_PRIMES or coloring.n < ctx.n:
        raise ValueError("coloring must cover the primes up to n")
    m = ctx.num_colors
    if m != coloring.num_colors:
        raise ValueError("coloring color count disagrees with the context")
    half = ctx.half_psi_b
    kw = ctx.K * ctx.W
    lo = max(ctx.psi(ctx.W), half)
    primes = coloring.elements
    sel = (primes >= lo) & (primes <= ctx.n) & (primes % kw == half % kw)
    cand = primes[sel]
    if len(cand) == 0:
        raise ScaleError("no admissible primes below n")
    logs = np.log(cand.astype(np.float64))
    weights = np.zeros(m + 1)
    np.add.at(weights, coloring.colors[sel], logs)
    best = int(np.argmax(weights[1:])) + 1
    threshold = (1 - float(ctx.kappa)) * ctx.n / (m * euler_phi(kw))
    members = ((cand[coloring.colors[sel] == best] - half) // ctx.W).astype(np.int64)
    return TransferredSet(
        ctx,
        best,
        members,
        {
            "weighted_sum": float(weights[best]),
            "threshold": threshold,
            "threshold_met": bool(weights[best] >= threshold),
        },
    )


def save_coloring(inst: ColoringInstance, path) -> None:
    """Write the exchange format: header "domain n m rule", then element/color pairs."""
    with open(path, "w") as fh:
        fh.write(f"{inst.domain} {inst.n} {inst.num_colors} {inst.provenance}\n")
        for x, c in zip(inst.elements.tolist(), inst.colors.tolist()):
            fh.write(f"{x} {c}\n")


def load_coloring(path) -> ColoringInstance:
    """Parse the exchange format; malformed lines report their line number."""
    with open(path) as fh:
        header = fh.readline()
        parts = header.split()
        if len(parts) < 4:
            raise ValueError("line 1: header must be 'domain n m rule'")
        domain, n_s, m_s = parts[0], parts[1], parts[2]
        rule = " ".join(parts[3:])
        if domain not in (DOMAIN_INTEGERS, DOMAIN_PRIMES):
            raise ValueError(f"line 1: unknown domain {domain!r}")
        try:
            n, m = int(n_s), int(m_s)
        except ValueError as e:
            raise ValueError(f"line 1: {e}") from e
        elements = []
        colors = []
        for i, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            bits = line.split()
            if len(bits) != 2:
                raise ValueError(f"line {i}: expected 'element color', got {line.strip()!r}")
            try:
                x, c = int(bits[0]), int(bits[1])
            except ValueError as e:
                raise ValueError(f"line {i}: {e}") from e
            if not 1 <= c <= m:
                raise ValueError(f"line {i}: color {c} outside 1..{m}")
            elements.append(x)
            colors.append(c)
    el = np.asarray(elements, dtype=np.int64)
    co = np.asarray(colors, dtype=np.int64)
    order = np.argsort(el, kind="stable")
    el, co = el[order], co[order]
    expected = _domain_elements(domain, n)
    if len(el) != len(expected) or not np.array_equal(el, expected):
        raise ValueError("coloring is not total over its declared domain")
    return ColoringInstance(domain, n, m, rule, el, co)
