"""Turning residue vectors back into integers.

Four routes are provided:

* classical inverse coefficients, one modular inverse per modulus;
* a sequential chain of Bezout identities over growing prefix products,
  one extended-gcd call per modulus after the first;
* a Garner mixed-radix converter over all pairwise inverses, the
  quadratic-count baseline;
* a randomized route that draws integer linear forms over the cofactors
  until the two sums are coprime, then reads all reconstruction weights
  off a single Bezout pair.

Each route threads an :class:`EgcdCounter`, so the extended-gcd usage of
the four can be compared directly: r, r - 1, r(r-1)/2, and one call per
random attempt respectively.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import AttemptsExhaustedError, BaseMismatchError
from .moduli import ModuliBase
from .vectors import CrrVector


def extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, u, v) with u*a + v*b == g == gcd(a, b) > 0."""
    if a == 0 and b == 0:
        raise ValueError("gcd(0, 0) is undefined")
    sign_a = -1 if a < 0 else 1
    sign_b = -1 if b < 0 else 1
    old_r, r = abs(a), abs(b)
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, sign_a * old_s, sign_b * old_t


class EgcdCounter:
    """Counts extended-gcd invocations for one computation."""

    __slots__ = ("calls",)

    def __init__(self):
        self.calls = 0

    def egcd(self, a, b):
        self.calls += 1
        return extended_gcd(a, b)


@dataclass(frozen=True)
class CrtCoefficients:
    """Reconstruction weights: weights[i] * (product / m_i) == 1 mod m_i."""

    base: ModuliBase
    weights: tuple[int, ...]
    method: str  # "classical" or "sequential"
    egcd_calls: int


@dataclass(frozen=True)
class BezoutChain:
    """Exact pairs (alpha_j, beta_j) with alpha_j*m_j + beta_j*prefix_{j-1} == 1,
    one pair per modulus after the first."""

    pairs: tuple[tuple[int, int], ...]


@lru_cache(maxsize=32)
def _cofactors(base: ModuliBase) -> tuple[int, ...]:
    return tuple(base.product // m for m in base.moduli)


def classical_coefficients(base: ModuliBase) -> CrtCoefficients:
    """One modular inverse per modulus: r extended-gcd calls."""
    counter = EgcdCounter()
    weights = []
    for m, cofactor in zip(base.moduli, _cofactors(base)):
        _, inverse, _ = counter.egcd(cofactor % m, m)
        weights.append(inverse % m)
    return CrtCoefficients(base, tuple(weights), "classical", counter.calls)


def sequential_coefficients(base: ModuliBase) -> tuple[CrtCoefficients, BezoutChain]:
    """Weights from a chain of Bezout identities: r - 1 extended-gcd calls.

    Step j relates modulus j to the product of all earlier moduli; the weight
    for position i is beta_i times the product of the later alphas, kept exact
    until the final reduction.
    """
    counter = EgcdCounter()
    moduli = base.moduli
    r = len(moduli)
    pairs = []
    for j in range(1, r):
        _, alpha, beta = counter.egcd(moduli[j], base.prefix_products[j])
        pairs.append((alpha, beta))
    weights = [0] * r
    suffix = 1
    for i in range(r - 1, 0, -1):
        alpha, beta = pairs[i - 1]
        weights[i] = beta * suffix % moduli[i]
        suffix *= alpha
    weights[0] = suffix % moduli[0]
    coefficients = CrtCoefficients(base, tuple(weights), "sequential", counter.calls)
    return coefficients, BezoutChain(tuple(pairs))


@dataclass(frozen=True)
class GarnerConverter:
    """Mixed-radix decoder built on every pairwise inverse m_i^-1 mod m_j."""

    base: ModuliBase
    inverses: tuple[tuple[int, ...], ...]
    egcd_calls: int

    def decode(self, vector: CrrVector) -> int:
        _require_same_base(vector.base, self.base)
        moduli = self.base.moduli
        digits = []
        for j, (x, m) in enumerate(zip(vector.residues, moduli)):
            v = x % m
            row = self.inverses[j]
            for i in range(j):
                v = (v - digits[i]) * row[i] % m
            digits.append(v)
        return sum(d * p for d, p in zip(digits, self.base.prefix_products))


def garner_converter(base: ModuliBase) -> GarnerConverter:
    """All pairwise inverses up front: r(r-1)/2 extended-gcd calls."""
    counter = EgcdCounter()
    moduli = base.moduli
    inverses = []
    for j, m in enumerate(moduli):
        row = []
        for i in range(j):
            _, inverse, _ = counter.egcd(moduli[i] % m, m)
            row.append(inverse % m)
        inverses.append(tuple(row))
    return GarnerConverter(base, tuple(inverses), counter.calls)


def reconstruct(vector: CrrVector, coefficients: CrtCoefficients) -> int:
    """The unique integer in [0, product) with the vector's residues."""
    _require_same_base(vector.base, coefficients.base)
    base = coefficients.base
    total = sum(
        x * w * cofactor
        for x, w, cofactor in zip(
            vector.residues, coefficients.weights, _cofactors(base)
        )
    )
    return total % base.product


@dataclass(frozen=True)
class LinearFormSample:
    """Outcome of one successful random-linear-form draw."""

    cofactors: tuple[int, ...]
    s: tuple[int, ...]
    t: tuple[int, ...]
    form_s: int
    form_t: int
    bezout_u: int
    bezout_v: int
    attempts: int
    n1_bound: int
    n2_bound: int


def default_n2_bound(base: ModuliBase) -> int:
    """Coefficient range keeping the coprime-success rate near its limit."""
    log_product = math.ceil(math.log(base.product))
    return max(1 << 16, 64 * (len(base.moduli) + log_product))


def _draw_forms(cofactors, rng, n2_bound):
    s = tuple(rng.randint(1, n2_bound) for _ in cofactors)
    t = tuple(rng.randint(1, n2_bound) for _ in cofactors)
    form_s = sum(c * si for c, si in zip(cofactors, s))
    form_t = sum(c * ti for c, ti in zip(cofactors, t))
    return s, t, form_s, form_t


def probabilistic_reconstruct(
    vector: CrrVector, rng, n2_bound: int | None = None, max_attempts: int = 64
) -> tuple[int, LinearFormSample]:
    """Reconstruct via random linear forms over the cofactors.

    Both coefficient vectors are drawn fresh on every attempt.  Once the two
    form sums are coprime, a single Bezout pair (u, v) yields the weights
    (u*s_i + v*t_i) mod m_i.
    """
    base = vector.base
    if n2_bound is None:
        n2_bound = default_n2_bound(base)
    if n2_bound < 1:
        raise ValueError("n2_bound must be positive")
    if max_attempts < 1:
        raise ValueError("max_attempts must be positive")
    cofactors = _cofactors(base)
    counter = EgcdCounter()
    for attempt in range(1, max_attempts + 1):
        s, t, form_s, form_t = _draw_forms(cofactors, rng, n2_bound)
        g, u, v = counter.egcd(form_s, form_t)
        if g == 1:
            break
    else:
        raise AttemptsExhaustedError(max_attempts, n2_bound)
    if u * form_s + v * form_t != 1:
        raise RuntimeError("invalid Bezout pair for the linear forms")
    total = sum(
        x * ((u * si + v * ti) % m) * c
        for x, si, ti, m, c in zip(vector.residues, s, t, base.moduli, cofactors)
    )
    sample = LinearFormSample(
        cofactors=cofactors,
        s=s,
        t=t,
        form_s=form_s,
        form_t=form_t,
        bezout_u=u,
        bezout_v=v,
        attempts=attempt,
        n1_bound=base.product,
        n2_bound=n2_bound,
    )
    return total % base.product, sample


def coprime_form_attempts(
    base: ModuliBase, rng, n2_bound: int | None = None, max_attempts: int = 64
) -> tuple[bool, int, bool]:
    """Draw form pairs until coprime; report (first_draw_hit, attempts, succeeded)."""
    if n2_bound is None:
        n2_bound = default_n2_bound(base)
    cofactors = _cofactors(base)
    first_hit = False
    for attempt in range(1, max_attempts + 1):
        _, _, form_s, form_t = _draw_forms(cofactors, rng, n2_bound)
        if math.gcd(form_s, form_t) == 1:
            if attempt == 1:
                first_hit = True
            return first_hit, attempt, True
    return first_hit, max_attempts, False


def _require_same_base(a: ModuliBase, b: ModuliBase):
    if a is not b and a.moduli != b.moduli:
        raise BaseMismatchError("vector and converter use different moduli bases")
