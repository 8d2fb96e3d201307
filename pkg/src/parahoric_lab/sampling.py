"""Seeded samplers for property checks.

All randomness flows through ``numpy.random.Generator`` objects derived from
a ``SeedSequence``, so a (seed, index) pair always reproduces one sample.
"""

from __future__ import annotations

import numpy as np
from gmpy2 import mpq

from .exact import ExactMatrix, GaussianRational
from .laurent import LaurentMatrix, laurent_multiply
from .parahoric import ParahoricContext, group_membership
from .roots import GroupDescriptor, Root, Weight, ceiling_level


def spawn(seed: int, count: int) -> list[np.random.Generator]:
    """Independent generators for ``count`` samples under one 64-bit seed."""
    ss = np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF)
    return [np.random.default_rng(child) for child in ss.spawn(count)]


def random_rational(rng: np.random.Generator, max_den: int = 4, bound: int = 1) -> mpq:
    den = int(rng.integers(1, max_den + 1))
    num = int(rng.integers(-bound * den, bound * den + 1))
    return mpq(num, den)


def small_int(rng: np.random.Generator, bound: int = 3, nonzero: bool = True) -> int:
    while True:
        v = int(rng.integers(-bound, bound + 1))
        if v or not nonzero:
            return v


def random_weight(rng: np.random.Generator, group: GroupDescriptor, max_den: int = 4) -> Weight:
    n = group.n
    if group.is_sl:
        head = [random_rational(rng, max_den) for _ in range(n - 1)]
        return Weight(group, tuple(head) + (-sum(head),))
    return Weight(group, tuple(random_rational(rng, max_den) for _ in range(n)))


def random_poly(rng: np.random.Generator, lo: int, hi: int, max_terms: int = 2, lead: bool = False) -> dict:
    """Sparse polynomial sum c_k z^k with lo <= k <= hi and small integer c_k."""
    exps = list(range(lo, hi + 1))
    k = int(rng.integers(1, min(max_terms, len(exps)) + 1))
    chosen = set(int(e) for e in rng.choice(exps, size=k, replace=False))
    if lead:
        chosen.add(lo)
    return {e: mpq(small_int(rng)) for e in sorted(chosen)}


def _from_entries(n: int, entries: dict) -> LaurentMatrix:
    """entries: (i, j) -> {k: coefficient}."""
    grids: dict = {}
    for (i, j), poly in entries.items():
        for k, c in poly.items():
            grid = grids.setdefault(k, [[0] * n for _ in range(n)])
            grid[i][j] = c
    return LaurentMatrix(n, {k: ExactMatrix(g) for k, g in grids.items()})


def random_generator(rng: np.random.Generator, ctx: ParahoricContext) -> LaurentMatrix:
    """A torus element of T(R) or a root element I + p(z) E_r at its level."""
    n = ctx.group.n
    if rng.random() < 0.25:
        if ctx.group.is_sl:
            vals = [mpq(small_int(rng, 2)) for _ in range(n - 1)]
            prod = mpq(1)
            for v in vals:
                prod *= v
            vals.append(1 / prod)
            return LaurentMatrix.constant(ExactMatrix.diag(vals))
        entries = {}
        for i in range(n):
            poly = {0: mpq(small_int(rng, 2))}
            c1 = small_int(rng, 1, nonzero=False)
            if c1:
                poly[1] = mpq(c1)
            entries[(i, i)] = poly
        return _from_entries(n, entries)
    i, j = (int(x) for x in rng.choice(n, size=2, replace=False))
    m = ceiling_level(ctx.theta, Root(i, j))
    entries = {(k, k): {0: mpq(1)} for k in range(n)}
    entries[(i, j)] = random_poly(rng, m, m + 2)
    return _from_entries(n, entries)


def random_generator_product(rng: np.random.Generator, ctx: ParahoricContext, length: int = 6) -> LaurentMatrix:
    g = LaurentMatrix.identity(ctx.group.n)
    for _ in range(length):
        g = laurent_multiply(g, random_generator(rng, ctx))
    return g


def random_valuation_member(rng: np.random.Generator, ctx: ParahoricContext, tries: int = 200) -> LaurentMatrix:
    """Entry-wise construction g_ij = z^{m_ij} p_ij(z), kept when g^{-1} passes too."""
    n = ctx.group.n
    for _ in range(tries):
        entries = {}
        for i in range(n):
            for j in range(n):
                if i == j:
                    entries[(i, j)] = random_poly(rng, 0, 1, lead=True)
                elif rng.random() < 0.7:
                    m = ceiling_level(ctx.theta, Root(i, j))
                    entries[(i, j)] = random_poly(rng, m, m + 2)
        g = _from_entries(n, entries)
        if ctx.group.is_sl:
            continue
        if group_membership(ctx, g).member:
            return g
    raise RuntimeError("could not sample a parahoric group member")


def random_algebra_member(rng: np.random.Generator, ctx: ParahoricContext) -> LaurentMatrix:
    n = ctx.group.n
    entries = {}
    for i in range(n):
        for j in range(n):
            if rng.random() < 0.3:
                continue
            lo = 0 if i == j else ceiling_level(ctx.theta, Root(i, j))
            entries[(i, j)] = random_poly(rng, lo, lo + 2)
    if ctx.group.is_sl:
        trace: dict = {}
        for i in range(n - 1):
            for k, c in entries.get((i, i), {}).items():
                trace[k] = trace.get(k, 0) + c
        entries[(n - 1, n - 1)] = {k: -c for k, c in trace.items() if c}
    return _from_entries(n, entries)


def random_unimodular(rng: np.random.Generator, n: int) -> ExactMatrix:
    """Integer matrix of determinant 1 (product of unipotent triangular factors)."""
    lower = [[1 if i == j else (small_int(rng, 1, nonzero=False) if i > j else 0) for j in range(n)] for i in range(n)]
    upper = [[1 if i == j else (small_int(rng, 1, nonzero=False) if i < j else 0) for j in range(n)] for i in range(n)]
    return ExactMatrix(lower) @ ExactMatrix(upper)


IMAG_PARTS = (mpq(0), mpq(0), mpq(1, 4), mpq(-1, 4), mpq(1, 2), mpq(-1, 3))


def random_gaussian(rng: np.random.Generator, max_den: int = 4) -> GaussianRational:
    im = IMAG_PARTS[int(rng.integers(0, len(IMAG_PARTS)))]
    return GaussianRational(random_rational(rng, max_den), im)


def random_split_matrix(rng: np.random.Generator, n: int, traceless: bool = False) -> ExactMatrix:
    """Q T Q^{-1} with T upper triangular over Q(i) and Q unimodular."""
    diag = [random_gaussian(rng) for _ in range(n)]
    if rng.random() < 0.4 and n > 1:
        diag[1] = diag[0]
    if traceless:
        diag[-1] = diag[-1] - sum(diag, GaussianRational(0))
    grid = [[diag[i] if i == j else (GaussianRational(small_int(rng, 1, nonzero=False)) if i < j else GaussianRational(0)) for j in range(n)] for i in range(n)]
    Q = random_unimodular(rng, n)
    return Q @ ExactMatrix(grid) @ Q.inverse()


def random_levi_datum(rng: np.random.Generator, group: GroupDescriptor):
    """(alpha, residue) with the residue block-diagonal on the level sets of alpha."""
    n = group.n
    if rng.random() < 0.5:
        a = random_rational(rng)
        alpha = Weight(group, (0,) * n) if group.is_sl else Weight(group, (a,) * n)
    else:
        alpha = random_weight(rng, group)
    levels: dict = {}
    for i, a in enumerate(alpha.entries):
        levels.setdefault(a, []).append(i)
    grid = [[GaussianRational(0)] * n for _ in range(n)]
    for idx in levels.values():
        block = random_split_matrix(rng, len(idx))
        for p, i in enumerate(idx):
            for q, j in enumerate(idx):
                grid[i][j] = block[p, q]
    res = ExactMatrix(grid)
    if group.is_sl and res.trace():
        # shift one whole level block by a scalar so the spectrum stays split
        t = res.trace()
        idx = levels[alpha.entries[-1]]
        shift = t / len(idx)
        for i in idx:
            grid[i][i] = grid[i][i] - shift
        res = ExactMatrix(grid)
    return alpha, res


def nilpotent_of_shape(rng: np.random.Generator, shape, conjugate: bool = True) -> tuple[ExactMatrix, ExactMatrix]:
    """(Y, Q): a nilpotent with Jordan block sizes ``shape`` and the conjugator used."""
    n = sum(shape)
    grid = [[0] * n for _ in range(n)]
    off = 0
    for d in shape:
        for k in range(1, d):
            grid[off + k][off + k - 1] = 1
        off += d
    J = ExactMatrix(grid)
    Q = random_unimodular(rng, n) if conjugate else ExactMatrix.identity(n)
    return Q @ J @ Q.inverse(), Q


def partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest
