#!/usr/bin/env python3
"""Regenerate the bundled ex5_* margin sets from their R recipes.

Each bundled instance ex5_2 .. ex5_13 is the margin triple of a random
zero-one m x n x l table drawn in R as

    set.seed(seed); array(rbinom(m*n*l, 1, prob), dim=c(m, n, l))

This script replicates R's default RNG stack (set.seed scrambling,
MT19937, the rbinom(1, p) inversion branch) bit-for-bit, regenerates all
twelve tables, and checks that their margins equal what fixtures.py ships.
Run it after touching the fixture data:

    python3 tools/regen_fixtures.py
"""

import sys

import numpy as np

from cptables.fixtures import fixture

M32 = 0xFFFFFFFF

# name -> (seed, m, n, l, prob)
RECIPES = {
    "ex5_2": (6, 3, 3, 4, 0.8),
    "ex5_3": (60, 3, 4, 4, 0.5),
    "ex5_4": (61, 3, 4, 4, 0.5),
    "ex5_5": (240, 4, 4, 4, 0.5),
    "ex5_6": (1240, 4, 4, 4, 0.5),
    "ex5_7": (2240, 4, 4, 4, 0.5),
    "ex5_8": (3340, 4, 4, 4, 0.5),
    "ex5_9": (3440, 4, 4, 4, 0.5),
    "ex5_10": (5440, 4, 4, 4, 0.5),
    "ex5_11": (122, 4, 4, 5, 0.2),
    "ex5_12": (222, 4, 4, 5, 0.2),
    "ex5_13": (322, 4, 4, 5, 0.2),
}


class RMersenneTwister:
    """R's default generator: set.seed(s) runs 50 rounds of 69069*x+1
    scrambling, then 625 more fill the MT19937 state (slot 0 is the
    position index, forced to 624); unif_rand() applies the 1998 MT
    tempering / 2^32 with R's endpoint fixup."""

    N, M = 624, 397
    MATRIX_A = 0x9908B0DF
    UPPER, LOWER = 0x80000000, 0x7FFFFFFF

    def __init__(self, seed):
        s = seed & M32
        for _ in range(50):
            s = (69069 * s + 1) & M32
        state = []
        for _ in range(625):
            s = (69069 * s + 1) & M32
            state.append(s)
        self.mt = state[1:]
        self.mti = 624

    def _next_u32(self):
        if self.mti >= self.N:
            mt, N, M = self.mt, self.N, self.M
            mag = (0, self.MATRIX_A)
            for kk in range(N - M):
                y = (mt[kk] & self.UPPER) | (mt[kk + 1] & self.LOWER)
                mt[kk] = mt[kk + M] ^ (y >> 1) ^ mag[y & 1]
            for kk in range(N - M, N - 1):
                y = (mt[kk] & self.UPPER) | (mt[kk + 1] & self.LOWER)
                mt[kk] = mt[kk + (M - N)] ^ (y >> 1) ^ mag[y & 1]
            y = (mt[N - 1] & self.UPPER) | (mt[0] & self.LOWER)
            mt[N - 1] = mt[M - 1] ^ (y >> 1) ^ mag[y & 1]
            self.mti = 0
        y = self.mt[self.mti]
        self.mti += 1
        y ^= y >> 11
        y ^= (y << 7) & 0x9D2C5680 & M32
        y ^= (y << 15) & 0xEFC60000 & M32
        y ^= y >> 18
        return y & M32

    def unif_rand(self):
        x = self._next_u32() * 2.3283064365386963e-10
        i2_32m1 = 2.328306437080797e-10
        if x <= 0.0:
            return 0.5 * i2_32m1
        if 1.0 - x <= 0.0:
            return 1.0 - 0.5 * i2_32m1
        return x


def rbern(rng, count, prob):
    """rbinom(count, 1, prob): one uniform per draw via the inversion
    branch, flipped when prob > 0.5 (R compares against min(p, 1-p))."""
    q = 1.0 - min(prob, 1.0 - prob)
    flip = prob > 0.5
    out = []
    for _ in range(count):
        ix = 0 if rng.unif_rand() < q else 1
        out.append((1 - ix) if flip else ix)
    return out


def generate_table(seed, m, n, l, prob):
    rng = RMersenneTwister(seed)
    draws = rbern(rng, m * n * l, prob)
    # R's array() fills in column-major order
    return np.array(draws, dtype=np.int64).reshape((m, n, l), order="F")


def main():
    bad = 0
    for name, (seed, m, n, l, prob) in RECIPES.items():
        table = generate_table(seed, m, n, l, prob)
        margins = (table.sum(axis=0), table.sum(axis=1), table.sum(axis=2))
        shipped = fixture(name).margins
        ok = all(np.array_equal(a, b) for a, b in zip(margins, shipped))
        print(f"{name:8} seed={seed:<5} {m}x{n}x{l} p={prob}  "
              f"{'ok' if ok else 'MISMATCH'}")
        bad += not ok
    if bad:
        print(f"{bad} fixture(s) do not match their recipe", file=sys.stderr)
        return 1
    print("all bundled margin sets match their R recipes")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
