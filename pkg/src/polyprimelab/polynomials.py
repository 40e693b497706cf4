"""Exact integer polynomials and their derived objects: formal derivative,
forward difference, affine rescaling, coefficient bounds, and the cutoff
search used to size the ambient cyclic group."""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "INTEGER_COLORING",
    "PRIME_COLORING",
    "VARIANTS",
    "IntPolynomial",
    "RescaledPolynomial",
    "compute_M",
    "psi_bound",
    "rescale",
]

INTEGER_COLORING = "integer-coloring"
PRIME_COLORING = "prime-coloring"
VARIANTS = (INTEGER_COLORING, PRIME_COLORING)


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with exact integer coefficients, stored highest degree first."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("empty coefficient list")
        if not all(isinstance(c, int) for c in self.coeffs):
            raise ValueError("coefficients must be exact integers")
        trimmed = self.coeffs
        while len(trimmed) > 1 and trimmed[0] == 0:
            trimmed = trimmed[1:]
        object.__setattr__(self, "coeffs", tuple(trimmed))

    @classmethod
    def of(cls, *coeffs: int) -> IntPolynomial:
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[0]

    @property
    def constant(self) -> int:
        return self.coeffs[-1]

    def coefficient(self, i: int) -> int:
        """Coefficient of x^i (0 for i above the degree)."""
        if i < 0:
            raise ValueError("power must be >= 0")
        if i > self.degree:
            return 0
        return self.coeffs[len(self.coeffs) - 1 - i]

    def __call__(self, x: int) -> int:
        acc = 0
        for c in self.coeffs:
            acc = acc * x + c
        return acc

    def derivative(self) -> IntPolynomial:
        if self.degree == 0:
            return IntPolynomial((0,))
        k = self.degree
        return IntPolynomial(tuple(c * (k - i) for i, c in enumerate(self.coeffs[:-1])))

    def forward_difference(self, x: int) -> int:
        return self(x + 1) - self(x)

    def __mul__(self, other: IntPolynomial) -> IntPolynomial:
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(tuple(out))

    def __str__(self) -> str:
        parts = []
        k = self.degree
        for i, c in enumerate(self.coeffs):
            if c == 0 and self.degree > 0:
                continue
            e = k - i
            term = f"{c}" if e == 0 else (f"{c}*x" if e == 1 else f"{c}*x^{e}")
            parts.append(term)
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class RescaledPolynomial:
    """The integral polynomial (psi(w*x + b) - psi(b)) / w.

    Construction verifies: zero constant term, linear coefficient equal to
    psi'(b), and divisibility of every coefficient of x^i, i >= 2, by w.
    """

    base: IntPolynomial
    w: int
    b: int
    poly: IntPolynomial

    def __call__(self, x: int) -> int:
        return self.poly(x)

    def forward_difference(self, x: int) -> int:
        return self.poly.forward_difference(x)

    @property
    def linear_coeff(self) -> int:
        return self.poly.coefficient(1)

    @property
    def degree(self) -> int:
        return self.poly.degree

    @property
    def leading(self) -> int:
        return self.poly.leading


def rescale(psi: IntPolynomial, w: int, b: int) -> RescaledPolynomial:
    """Build (psi(w*x + b) - psi(b)) / w with exact divisibility checks."""
    if w < 1:
        raise ValueError("requires w >= 1")
    if b < 0:
        raise ValueError("requires b >= 0")
    # Coefficients of psi(w*x + b), lowest degree first.
    comp = [0]
    power = [1]  # (w*x + b)^j, lowest first
    for j in range(psi.degree + 1):
        if j > 0:
            nxt = [0] * (len(power) + 1)
            for i, c in enumerate(power):
                nxt[i] += c * b
                nxt[i + 1] += c * w
            power = nxt
        cj = psi.coefficient(j)
        if cj:
            while len(comp) < len(power):
                comp.append(0)
            for i, c in enumerate(power):
                comp[i] += cj * c
    comp[0] -= psi(b)
    if comp[0] != 0:
        raise ValueError("internal consistency failure: nonzero constant term")
    scaled = []
    for i, c in enumerate(comp):
        if i == 0:
            scaled.append(0)
            continue
        if c % w:
            raise ValueError(f"internal consistency failure: w does not divide coefficient of x^{i}")
        scaled.append(c // w)
    poly = IntPolynomial(tuple(reversed(scaled)))
    dpsi_b = psi.derivative()(b)
    if poly.coefficient(1) != dpsi_b:
        raise ValueError("internal consistency failure: linear coefficient != psi'(b)")
    for i in range(2, poly.degree + 1):
        if poly.coefficient(i) % w:
            raise ValueError(f"internal consistency failure: w does not divide coefficient of x^{i}")
    return RescaledPolynomial(psi, w, b, poly)


def psi_bound(psi: IntPolynomial, w0: int, variant: str) -> int:
    """Coefficient bound gating the per-prime residue selection.

    max{(k+1)*w0, |a_1|, ..., |a_k|} for the integer-coloring variant and
    max{(2k+1)*w0, |a_1|, ..., |a_k|} for the prime-coloring variant, where
    a_1 is the leading coefficient and the constant term is excluded.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    k = psi.degree
    if k < 1:
        raise ValueError("requires degree >= 1")
    factor = (k + 1) if variant == INTEGER_COLORING else (2 * k + 1)
    return max([factor * w0] + [abs(c) for c in psi.coeffs[:-1]])


def compute_M(poly, k_factor: int, n_modulus: int) -> int:
    """Largest x >= 1 with poly(x) < k_factor * n_modulus.

    Exponential bracketing then binary search; the caller guarantees poly is
    strictly increasing on [1, oo). The bracketing postcondition
    poly(M) < K*N <= poly(M+1) is re-verified exactly.
    """
    target = k_factor * n_modulus
    if poly(1) >= target:
        raise ValueError(f"empty range: poly(1) = {poly(1)} >= {target}")
    lo, hi = 1, 2
    while poly(hi) < target:
        lo = hi
        hi *= 2
        if hi > 1 << 200:
            raise RuntimeError("cutoff search diverged")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if poly(mid) < target:
            lo = mid
        else:
            hi = mid
    if not (poly(lo) < target <= poly(lo + 1)):
        raise ValueError("cutoff bracketing failed (input not increasing)")
    return lo
