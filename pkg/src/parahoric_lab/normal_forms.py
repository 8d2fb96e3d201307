"""Gauge normal forms of logarithmic connection forms ``A(z) dz/z``.

Order by order, the coefficient ``a_i`` is split along the operator
``ad(a_0) - i``.  Its part off the resonant subspace (eigenvalue gaps equal
to ``i``) is removed by a gauge step ``I + g_i z^i`` (``exp(g_i z^i)`` for
SL); the resonant part is kept as ``b_i``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import (
    DomainError,
    Inconclusive,
    TracelessViolation,
    TruncationTooShallow,
)
from .exact import ZERO, ExactMatrix, GaussianRational, bracket
from .laurent import LaurentMatrix, laurent_multiply
from .parahoric import gauge_action
from .residue import jordan_decompose
from .roots import GroupDescriptor, Weight


@dataclass
class NormalForm:
    """``B = sum_i b_i z^i`` with ``[nabla, b_i] = i b_i`` and ``[sigma, b_i] = 0``.

    ``frame`` is the constant basis in which the semisimple part of ``b_0`` is
    diagonal with entries ``eigenvalues``; ``frame_terms`` are the ``b_i`` in
    that basis.  ``series`` is the full transformed form (to its truncation).
    """

    group: GroupDescriptor
    b_terms: dict
    nabla_part: ExactMatrix
    sigma_part: ExactMatrix
    gauge_witness: LaurentMatrix
    witness_inverse: LaurentMatrix
    resonance_orders: set
    series: LaurentMatrix
    frame: ExactMatrix
    eigenvalues: tuple
    frame_terms: dict
    max_order: int
    steps: list = field(default_factory=list)

    @property
    def b0(self) -> ExactMatrix:
        return self.b_terms[0]

    def nilpotent_part(self) -> ExactMatrix:
        return self.b0 - self.nabla_part - self.sigma_part

    def is_constant(self) -> bool:
        return not self.resonance_orders and all(k == 0 for k in self.series.terms)

    def check_brackets(self) -> bool:
        for i, b in self.b_terms.items():
            if i == 0:
                continue
            if bracket(self.nabla_part, b) != b.scale(i):
                return False
            if not bracket(self.sigma_part, b).is_zero():
                return False
        return True

    def beta(self) -> Weight | None:
        """Real parts of the residue eigenvalues, when ``frame`` is the identity."""
        if self.frame != ExactMatrix.identity(self.group.n):
            return None
        vals = tuple(lam.re for lam in self.eigenvalues)
        if self.group.is_sl and sum(vals) != 0:
            return None
        return Weight(self.group, vals)


def default_max_order(eigs) -> int:
    return max(8, 2 * integer_gap(eigs) + 2)


def integer_gap(eigs) -> int:
    gap = 0
    for a in eigs:
        for b in eigs:
            d = a - b
            if not d.im and d.re.denominator == 1 and d.re > gap:
                gap = int(d.re)
    return gap


def _exp_step(X: ExactMatrix, i: int, max_order: int) -> LaurentMatrix:
    """exp(X z^i) through ``max_order``."""
    return _exp_step_terms(X, i, max_order, factorial=True)


def _geometric_step(X: ExactMatrix, i: int, max_order: int) -> LaurentMatrix:
    """(I + X z^i)^{-1} = sum_k (-X z^i)^k through ``max_order``."""
    return _exp_step_terms(X.scale(GaussianRational(-1)), i, max_order, factorial=False)


def _exp_step_terms(X: ExactMatrix, i: int, max_order: int, factorial: bool) -> LaurentMatrix:
    n = X.rows
    terms = {0: ExactMatrix.identity(n)}
    power = ExactMatrix.identity(n)
    k = 1
    while i * k <= max_order:
        power = power @ X
        if factorial:
            power = power.scale(GaussianRational(1, 0) / k)
        if power.is_zero():
            return LaurentMatrix(n, terms)
        terms[i * k] = power
        k += 1
    return LaurentMatrix(n, terms, max_order)


def _solve_homological(a0_diag: tuple, n0: ExactMatrix, rest: ExactMatrix, i: int, resonant) -> ExactMatrix:
    """Solve ``(ad(a0) - i) X = rest`` on the non-resonant subspace.

    ``a0 = diag(a0_diag) + n0`` with ``n0`` nilpotent and commuting with the
    diagonal part; the inverse is a terminating Neumann series.
    """
    n = rest.rows

    def dinv(m: ExactMatrix) -> ExactMatrix:
        grid = m.tolist()
        for a in range(n):
            for b in range(n):
                if grid[a][b]:
                    if resonant[a][b]:
                        raise AssertionError("homological equation left the non-resonant subspace")
                    grid[a][b] = grid[a][b] / (a0_diag[a] - a0_diag[b] - i)
        return ExactMatrix(grid)

    term = dinv(rest)
    X = term
    for _ in range(2 * n * n):
        if n0.is_zero():
            break
        term = -dinv(bracket(n0, term))
        if term.is_zero():
            break
        X = X + term
    return X


def normalize(A: LaurentMatrix, group: GroupDescriptor, max_order: int | None = None) -> NormalForm:
    """Normal form up to ``max_order`` with an explicit gauge witness."""
    n = group.n
    if A.size != n:
        raise DomainError(f"{A.size}x{A.size} form for {group}")
    if A.valuation_bound() < 0:
        raise DomainError("connection form has a pole beyond first order (valuation < 0)")
    if group.is_sl:
        for k, m in A.terms.items():
            if m.trace():
                raise TracelessViolation(f"coefficient of z^{k} is not traceless", exponent=k)
    a0 = A.coefficient(0)
    jp = jordan_decompose(a0)
    eigs = jp.spectrum
    P = jp.basis
    Pinv = P.inverse()
    gap = integer_gap(eigs)
    if max_order is None:
        max_order = default_max_order(eigs)
        if A.trunc is not None and A.trunc < max_order:
            if A.trunc < gap:
                raise TruncationTooShallow(
                    f"form known to z^{A.trunc}, resonances reach z^{gap}", trunc=A.trunc, gap=gap
                )
            max_order = A.trunc
    elif A.trunc is not None and A.trunc < max_order:
        raise TruncationTooShallow(
            f"form known to z^{A.trunc}, max_order {max_order} requested", trunc=A.trunc
        )

    B = A.conjugate_by(Pinv, P)
    n0 = B.coefficient(0) - ExactMatrix.diag(eigs)
    witness = LaurentMatrix.identity(n)
    witness_inv = LaurentMatrix.identity(n)
    steps = []
    kept: dict = {0: B.coefficient(0)}
    for i in range(1, max_order + 1):
        c = B.coefficient(i)
        if c.is_zero():
            continue
        resonant = [[eigs[a] - eigs[b] == i for b in range(n)] for a in range(n)]
        grid = c.tolist()
        res_grid = [[grid[a][b] if resonant[a][b] else ZERO for b in range(n)] for a in range(n)]
        res_part = ExactMatrix(res_grid)
        rest = c - res_part
        if not rest.is_zero():
            X = _solve_homological(eigs, n0, rest, i, resonant)
            assert bracket(kept[0], X) - X.scale(i) == rest
            if group.is_sl:
                step = _exp_step(X, i, max_order)
                step_inv = _exp_step(X.scale(GaussianRational(-1)), i, max_order)
            else:
                step = LaurentMatrix(n, {0: ExactMatrix.identity(n), i: X})
                step_inv = _geometric_step(X, i, max_order)
            B = gauge_action(step, B, inverse=step_inv).truncate(max_order)
            witness = laurent_multiply(step, witness)
            witness_inv = laurent_multiply(witness_inv, step_inv)
            steps.append((i, X))
            assert B.coefficient(i) == res_part
        if not res_part.is_zero():
            kept[i] = res_part
    S = ExactMatrix.diag(eigs)
    nabla = ExactMatrix.diag([GaussianRational(lam.re) for lam in eigs])
    sigma = S - nabla
    back = lambda m: P @ m @ Pinv  # noqa: E731
    series = B.conjugate_by(P, Pinv)
    if P != ExactMatrix.identity(n):
        witness = laurent_multiply(
            laurent_multiply(LaurentMatrix.constant(P), witness), LaurentMatrix.constant(Pinv)
        )
        witness_inv = laurent_multiply(
            laurent_multiply(LaurentMatrix.constant(P), witness_inv), LaurentMatrix.constant(Pinv)
        )
    return NormalForm(
        group=group,
        b_terms={k: back(m) for k, m in kept.items()},
        nabla_part=back(nabla),
        sigma_part=back(sigma),
        gauge_witness=witness,
        witness_inverse=witness_inv,
        resonance_orders={k for k in kept if k > 0},
        series=series,
        frame=P,
        eigenvalues=tuple(eigs),
        frame_terms=kept,
        max_order=max_order,
        steps=steps,
    )


# ---------------------------------------------------------------- shearing


def _constraints(nf: NormalForm):
    """Equalities mu_a - mu_b = -i and inequalities mu_a - mu_b >= 0."""
    eqs, ineqs = [], []
    n = nf.group.n
    for i, m in nf.frame_terms.items():
        for a in range(n):
            for b in range(n):
                if a != b and m[a, b]:
                    if i == 0:
                        ineqs.append((a, b))
                    else:
                        eqs.append((a, b, -i))
    return eqs, ineqs


def _components(n: int, eqs):
    """Union-find with offsets: mu_x = mu_root + off[x].  None if inconsistent."""
    parent = list(range(n))
    off = [0] * n

    def find(x):
        if parent[x] == x:
            return x, 0
        r, o = find(parent[x])
        parent[x] = r
        off[x] = off[x] + o
        return r, off[x]

    for a, b, d in eqs:  # mu_a - mu_b = d
        ra, oa = find(a)
        rb, ob = find(b)
        if ra == rb:
            if oa - ob != d:
                return None
            continue
        # mu_a = mu_ra + oa, mu_b = mu_rb + ob; attach rb under ra
        parent[rb] = ra
        off[rb] = oa - ob - d
    comps: dict = {}
    for x in range(n):
        r, o = find(x)
        comps.setdefault(r, []).append((x, o))
    return list(comps.values())


def shearing_cocharacters(group: GroupDescriptor, nf: NormalForm) -> list[Weight]:
    """Integral cocharacters moving every resonant term to order zero.

    Coordinates refer to ``nf.frame``.  The search is bounded: each
    independent component is shifted within the largest resonance order.
    For GL the overall central shift is fixed by making the smallest entry 0.
    An empty list certifies that no torus shearing applies.
    """
    n = group.n
    if not nf.resonance_orders:
        return [Weight.zero(group)]
    eqs, ineqs = _constraints(nf)
    comps = _components(n, eqs)
    if comps is None:
        return []
    bound = max(nf.resonance_orders) * max(1, n - 1)
    # normalize each component so its minimum offset is 0
    norm = []
    for comp in comps:
        lo = min(o for _, o in comp)
        norm.append([(x, o - lo) for x, o in comp])
    found = []
    ranges = [range(-bound, bound + 1)] * len(norm)
    for shifts in itertools.product(*ranges):
        mu = [0] * n
        for comp, s in zip(norm, shifts):
            for x, o in comp:
                mu[x] = o + s
        if group.is_sl:
            if sum(mu) != 0:
                continue
        elif min(mu) != 0:
            continue
        if any(mu[a] - mu[b] < 0 for a, b in ineqs):
            continue
        found.append(tuple(mu))
    found = sorted(set(found), key=lambda m: (sum(x * x for x in m), m))
    return [Weight(group, m) for m in found]


def is_constant_equivalent(
    A: LaurentMatrix, group: GroupDescriptor, max_order: int | None = None
) -> tuple[bool, LaurentMatrix | None, ExactMatrix | None]:
    """Decide whether ``A dz/z`` is gauge equivalent to a constant form.

    Normalizes, tries every shearing cocharacter, then normalizes again.  A
    negative answer is only claimed for rank 2, where torus shearing is
    complete; larger ranks raise Inconclusive instead.
    """
    nf = normalize(A, group, max_order)
    if nf.is_constant():
        return _verified(A, nf.gauge_witness, nf.witness_inverse, nf.b0, nf.max_order)
    P, Pinv = nf.frame, nf.frame.inverse()
    for mu in shearing_cocharacters(group, nf):
        if mu.is_zero():
            continue
        shear = LaurentMatrix.z_power([int(x) for x in mu.entries])
        shear_inv = LaurentMatrix.z_power([-int(x) for x in mu.entries])
        if P != ExactMatrix.identity(group.n):
            shear, shear_inv = (
                laurent_multiply(laurent_multiply(LaurentMatrix.constant(P), s), LaurentMatrix.constant(Pinv))
                for s in (shear, shear_inv)
            )
        C = gauge_action(shear, nf.series, inverse=shear_inv)
        if C.valuation_bound() < 0:
            continue
        try:
            nf2 = normalize(C, group)
        except TruncationTooShallow:
            continue
        if nf2.is_constant():
            W = laurent_multiply(laurent_multiply(nf2.gauge_witness, shear), nf.gauge_witness)
            W_inv = laurent_multiply(
                laurent_multiply(nf.witness_inverse, shear_inv), nf2.witness_inverse
            )
            spread = int(max(mu.entries) - min(mu.entries))
            return _verified(A, W, W_inv, nf2.b0, max(0, min(nf.max_order, nf2.max_order) - spread))
    if group.n == 2:
        return False, None, None
    raise Inconclusive(
        "resonances persist after torus shearing; non-torus reductions are not excluded",
        resonance_orders=sorted(nf.resonance_orders),
    )


def _verified(A: LaurentMatrix, W: LaurentMatrix, W_inv: LaurentMatrix, const: ExactMatrix, upto: int):
    """Exact check that W transforms A into ``const`` through order ``upto``."""
    result = gauge_action(W, A, inverse=W_inv)
    target = LaurentMatrix(A.size, {0: const}, result.trunc)
    if not result.agrees_with(target, upto):
        raise AssertionError("gauge witness does not reproduce the constant form")
    return True, W, const


__all__ = [
    "NormalForm",
    "default_max_order",
    "integer_gap",
    "is_constant_equivalent",
    "normalize",
    "shearing_cocharacters",
]
