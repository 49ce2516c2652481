"""Shared randomized-complex builder for the reduction and acceptance tests."""

import random

import pytest

from borderfloer.structures import BorderedStructure, Generator, OperationTerm


def random_filtered_complex(rng: random.Random, max_gens: int = 60,
                            levels=(-2, 2)) -> BorderedStructure:
    """Random 0-side complex with d^2 = 0 and non-increasing levels.

    Starts from a direct sum of dots and single arrows, then applies random
    filtration-respecting elementary basis changes (e_i <- e_i + e_k with
    level(k) <= level(i)), which preserve d^2 = 0, the filtration property,
    and homology.  On the matrix each change is row_i ^= row_k followed by
    col_k ^= col_i.
    """
    n = rng.randint(1, max_gens)
    lo, hi = levels
    alex = [rng.randint(lo, hi) for _ in range(n)]
    order = list(range(n))
    rng.shuffle(order)
    mat = [0] * n
    k = 0
    while k + 1 < n:
        if rng.random() < 0.7:
            a, b = order[k], order[k + 1]
            if alex[a] < alex[b]:
                a, b = b, a
            mat[a] |= 1 << b
            k += 2
        else:
            k += 1
    for _ in range(3 * n):
        i = rng.randrange(n)
        ks = [m for m in range(n) if m != i and alex[m] <= alex[i]]
        if not ks:
            continue
        m = rng.choice(ks)
        mat[i] ^= mat[m]
        mask_i = 1 << i
        bit_m = 1 << m
        for p in range(n):
            if mat[p] & mask_i:
                mat[p] ^= bit_m
    gens = [Generator(f"g{i}", {}, alex[i]) for i in range(n)]
    terms = [OperationTerm(f"g{i}", f"g{j}", {}, {})
             for i in range(n) for j in range(n) if mat[i] >> j & 1]
    return BorderedStructure([], gens, terms)


@pytest.fixture
def random_complex_factory():
    return random_filtered_complex
