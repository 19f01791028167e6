"""Shared helpers for the test suite: independent oracles and generators."""

import random

from crrkit import ModuliBase, nth_prime

# Criteria on random coprime bases share this seed so the same 100 bases are
# exercised by every check that claims to run over "the same" population.
BASES_SEED = 20260815


def is_prime_trial(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def primes_by_trial(count: int) -> list[int]:
    """First ``count`` primes by pure trial division (oracle path)."""
    out = []
    candidate = 2
    while len(out) < count:
        if is_prime_trial(candidate):
            out.append(candidate)
        candidate += 1
    return out


def brute_force_crt(residues, moduli) -> int:
    """Search [0, prod) for the unique integer with the given residues."""
    product = 1
    for m in moduli:
        product *= m
    for x in range(product):
        if all(x % m == r for m, r in zip(moduli, residues)):
            return x
    raise AssertionError("no integer matches the residues")


def random_coprime_base(rng: random.Random, max_len: int = 32) -> ModuliBase:
    """A pairwise-coprime base: shuffled prime powers, occasionally composite."""
    r = rng.randint(1, max_len)
    pool = [nth_prime(i) for i in range(1, 120)]
    primes = rng.sample(pool, r + 1)
    moduli = []
    for p in primes[:r]:
        roll = rng.random()
        if roll < 0.15:
            moduli.append(p ** rng.randint(2, 3))
        elif roll < 0.25:
            moduli.append(p * primes[r])  # composite, still coprime to the rest
            primes[r] = 1
        else:
            moduli.append(p)
    moduli = [m for m in moduli if m > 1]
    rng.shuffle(moduli)
    return ModuliBase.from_moduli(moduli)
