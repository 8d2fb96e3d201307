"""Parahoric subgroups and subalgebras of the loop group.

For GL_n and SL_n everything reduces to entry-wise valuation bounds:
``A`` lies in the parahoric algebra of ``theta`` iff
``val(A_ij) + theta_i - theta_j >= 0`` for all entries, and ``g`` lies in the
parahoric group iff both ``g`` and ``g^{-1}`` satisfy that bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (
    DeterminantViolation,
    FactorizationObstructed,
    SchemaError,
    SizeMismatch,
    TracelessViolation,
    TruncationTooShallow,
)
from .exact import ONE, ExactMatrix, Rational, format_rational
from .laurent import (
    LaurentMatrix,
    _scalar_inverse,
    default_trunc,
    determinant,
    laurent_inverse,
    laurent_multiply,
)
from .roots import GroupDescriptor, Root, Weight, ceiling_level


@dataclass(frozen=True)
class ParahoricContext:
    group: GroupDescriptor
    theta: Weight

    def __post_init__(self):
        if self.theta.group != self.group:
            raise SchemaError(
                f"weight belongs to {self.theta.group}, context is {self.group}",
            )

    @classmethod
    def of(cls, theta: Weight) -> "ParahoricContext":
        return cls(theta.group, theta)

    def level(self, r: Root) -> int:
        return ceiling_level(self.theta, r)


@dataclass
class Violation:
    i: int
    j: int
    exponent: int
    required: int

    def to_json(self) -> dict:
        d = {"entry": [self.i + 1, self.j + 1], "exponent": self.exponent, "required_level": self.required}
        if self.i != self.j:
            d["root"] = str(Root(self.i, self.j))
        return d


@dataclass
class MembershipReport:
    """Outcome of a membership test.

    ``slacks[i][j]`` is ``val(A_ij) + theta_i - theta_j``, or ``None`` for an
    entry known to vanish far enough that it cannot matter.
    """

    member: bool
    slacks: list
    violation: Violation | None = None
    inverse: "MembershipReport | None" = None
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "member": self.member,
            "slacks": [[None if s is None else format_rational(s) for s in row] for row in self.slacks],
            "first_violation": None if self.violation is None else self.violation.to_json(),
        }
        if self.inverse is not None:
            out["inverse"] = self.inverse.to_json()
        return out


def _entrywise_report(theta: Weight, a: LaurentMatrix) -> MembershipReport:
    n = a.size
    slacks: list = [[None] * n for _ in range(n)]
    first = None
    for i in range(n):
        for j in range(n):
            r = theta[i] - theta[j]
            v = a.entry_valuation(i, j)
            if v is None:
                if a.trunc is not None and a.trunc + 1 + r < 0:
                    raise TruncationTooShallow(
                        f"entry ({i + 1},{j + 1}) vanishes up to z^{a.trunc}, which does not decide membership",
                        entry=[i + 1, j + 1],
                        trunc=a.trunc,
                    )
                continue
            s = v + r
            slacks[i][j] = s
            if s < 0 and first is None:
                first = Violation(i, j, v, _ceil(-r))
    return MembershipReport(first is None, slacks, first)


def _ceil(q: Rational) -> int:
    return int(-((-q.numerator) // q.denominator))


def _check_traceless(a: LaurentMatrix):
    for k, m in a.terms.items():
        if m.trace():
            raise TracelessViolation(
                f"coefficient of z^{k} has trace {m.trace()} in an sl_n input", exponent=k
            )


def _check_size(ctx: ParahoricContext, a: LaurentMatrix):
    if a.size != ctx.group.n:
        raise SizeMismatch(f"{a.size}x{a.size} input for {ctx.group}")


def algebra_membership(ctx: ParahoricContext, a: LaurentMatrix) -> MembershipReport:
    """Membership of ``a`` in the parahoric Lie algebra of ``ctx.theta``."""
    _check_size(ctx, a)
    if ctx.group.is_sl:
        _check_traceless(a)
    return _entrywise_report(ctx.theta, a)


def _check_det_one(g: LaurentMatrix):
    terms, trunc = determinant(g)
    bad = {k: c for k, c in terms.items() if not (k == 0 and c == ONE)}
    if 0 not in terms or bad:
        raise DeterminantViolation(
            "determinant is not 1 in an SL_n input",
            det_terms={str(k): str(c) for k, c in terms.items()},
            trunc=trunc,
        )


def group_membership(
    ctx: ParahoricContext, g: LaurentMatrix, inverse: LaurentMatrix | None = None, order: int | None = None
) -> MembershipReport:
    """Membership of ``g`` in the parahoric group: ``g`` and ``g^{-1}`` both bounded."""
    _check_size(ctx, g)
    if ctx.group.is_sl:
        _check_det_one(g)
    ginv = laurent_inverse(g, order) if inverse is None else inverse
    direct = _entrywise_report(ctx.theta, g)
    inv = _entrywise_report(ctx.theta, ginv)
    rep = MembershipReport(direct.member and inv.member, direct.slacks, direct.violation, inverse=inv)
    if direct.member and not inv.member:
        rep.notes.append("the inverse violates the valuation bound")
    return rep


def tameness_check(theta: Weight, form: LaurentMatrix) -> MembershipReport:
    """Tameness of a dz/z coefficient: membership in the parahoric algebra."""
    return algebra_membership(ParahoricContext.of(theta), form)


# ------------------------------------------------------------------ actions


def adjoint_action(g: LaurentMatrix, a: LaurentMatrix, order: int | None = None) -> LaurentMatrix:
    """``g a g^{-1}``."""
    if g.size != a.size:
        raise SizeMismatch("g and A have different sizes")
    return laurent_multiply(laurent_multiply(g, a), laurent_inverse(g, order))


def gauge_action(
    g: LaurentMatrix, a: LaurentMatrix, order: int | None = None, inverse: LaurentMatrix | None = None
) -> LaurentMatrix:
    """``Ad(g) a + z g' g^{-1}``: gauge transform of the form ``a dz/z``.

    A known ``inverse`` of ``g`` skips the series inversion.
    """
    if g.size != a.size:
        raise SizeMismatch("g and A have different sizes")
    ginv = laurent_inverse(g, order) if inverse is None else inverse
    return laurent_multiply(laurent_multiply(g, a), ginv) + laurent_multiply(g.z_derivative(), ginv)


# ------------------------------------------------------------ factorization


@dataclass
class Factorization:
    """``g = t * u_1 * ... * u_m`` with ``t`` in T(R) and ``u_k`` in root groups."""

    torus: LaurentMatrix
    unipotents: list  # list[(Root, LaurentMatrix)]

    def product(self) -> LaurentMatrix:
        out = self.torus
        for _, u in self.unipotents:
            out = laurent_multiply(out, u)
        return out


def _series_product(a: dict, na, b: dict, nb) -> tuple[dict, int | None]:
    va = min(a) if a else (math.inf if na is None else na + 1)
    vb = min(b) if b else (math.inf if nb is None else nb + 1)
    bounds = []
    if na is not None:
        bounds.append(na + vb)
    if nb is not None:
        bounds.append(nb + va)
    bounds = [x for x in bounds if x != math.inf]
    trunc = int(min(bounds)) if bounds else None
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            k = i + j
            if trunc is not None and k > trunc:
                continue
            out[k] = out[k] + x * y if k in out else x * y
    return {k: c for k, c in out.items() if c}, trunc


def _root_element(n: int, i: int, j: int, q: dict, trunc) -> LaurentMatrix:
    ident = ExactMatrix.identity(n)
    terms = {0: ident}
    for k, c in q.items():
        e = ExactMatrix.unit(n, i, j, c)
        terms[k] = terms[k] + e if k in terms else e
    return LaurentMatrix(n, terms, trunc)


def iwahori_factorize(ctx: ParahoricContext, g: LaurentMatrix, order: int | None = None) -> Factorization:
    """Factor a parahoric group element into torus and root-group pieces.

    Elimination by root-group operations that respect the levels m_r(theta):
    pivots are entries of zero slack (the invertible leading matrix of
    ``z^theta g z^-theta``); rows below and columns right of the pivot are
    then cleared.  Roots may occur more than once in the output list.
    """
    n = g.size
    # extra precision absorbs the loss from negative-valuation entries
    order = default_trunc() + 4 * n if order is None else order
    rep = group_membership(ctx, g, order=order)
    if not rep.member:
        raise FactorizationObstructed(
            "element is not in the parahoric group",
            violation=None if rep.violation is None else rep.violation.to_json(),
        )
    theta = ctx.theta
    cur = g
    left: list = []  # (root, inverse factor), applied as cur <- l @ cur
    right: list = []  # cur <- cur @ r

    def slack0(i, j):
        v = cur.entry_valuation(i, j)
        return v is not None and v + theta[i] - theta[j] == 0

    def apply_left(i, j, q, qtrunc):
        nonlocal cur
        l = _root_element(n, i, j, q, qtrunc)
        cur = laurent_multiply(l, cur)
        left.append((Root(i, j), {k: -c for k, c in q.items()}, qtrunc))

    def apply_right(i, j, q, qtrunc):
        nonlocal cur
        r = _root_element(n, i, j, q, qtrunc)
        cur = laurent_multiply(cur, r)
        right.append((Root(i, j), {k: -c for k, c in q.items()}, qtrunc))

    for k in range(n):
        if not slack0(k, k):
            p = next((p for p in range(k + 1, n) if slack0(p, k)), None)
            if p is None:
                raise FactorizationObstructed(
                    f"no level-respecting pivot in column {k + 1}", column=k + 1, trunc=cur.trunc
                )
            m = theta[p] - theta[k]
            if m.denominator != 1:
                raise FactorizationObstructed("pivot row has a non-integral level shift")
            apply_left(k, p, {int(m): ONE}, None)
            if not slack0(k, k):
                raise FactorizationObstructed(f"pivot repair failed in column {k + 1}")
        piv = cur.entry(k, k)
        inv_terms, inv_trunc = _scalar_inverse(piv, cur.trunc, order)
        for i in range(k + 1, n):
            e = cur.entry(i, k)
            if not e:
                continue
            q, qt = _series_product(e, cur.trunc, inv_terms, inv_trunc)
            apply_left(i, k, {x: -c for x, c in q.items()}, qt)
        for j in range(k + 1, n):
            e = cur.entry(k, j)
            if not e:
                continue
            q, qt = _series_product(inv_terms, inv_trunc, e, cur.trunc)
            apply_right(k, j, {x: -c for x, c in q.items()}, qt)

    for i in range(n):
        for j in range(n):
            if i != j and cur.entry(i, j):
                raise FactorizationObstructed("elimination left an off-diagonal residue", entry=[i + 1, j + 1])
    t = cur
    for i in range(n):
        if cur.entry_valuation(i, i) != 0:
            raise FactorizationObstructed("torus factor is not a unit", entry=i + 1)
    # g = l_1^{-1} ... l_m^{-1} t r_s^{-1} ... r_1^{-1}; move t to the front.
    tinv = laurent_inverse(t, order)
    unipotents = []
    for root, q, qt in left:
        u = _root_element(n, root.i, root.j, q, qt)
        unipotents.append((root, laurent_multiply(laurent_multiply(tinv, u), t)))
    for root, q, qt in reversed(right):
        unipotents.append((root, _root_element(n, root.i, root.j, q, qt)))
    for root, u in unipotents:
        _check_level(ctx, root, u)
    return Factorization(t, unipotents)


def _check_level(ctx: ParahoricContext, root: Root, u: LaurentMatrix):
    v = u.entry_valuation(root.i, root.j)
    if v is not None and v < ctx.level(root):
        raise FactorizationObstructed(
            f"factor for {root} has valuation {v} below its level {ctx.level(root)}",
            root=str(root),
        )


def level_generator(ctx: ParahoricContext, root: Root, coeffs: dict) -> LaurentMatrix:
    """``I + p(z) E_r`` with ``p = sum coeffs[k] z^k``; checks ``k >= m_r(theta)``."""
    m = ctx.level(root)
    if any(k < m for k in coeffs):
        raise FactorizationObstructed(f"exponent below level {m} for {root}")
    return _root_element(ctx.group.n, root.i, root.j, coeffs, None)


__all__ = [
    "Factorization",
    "MembershipReport",
    "ParahoricContext",
    "Violation",
    "adjoint_action",
    "algebra_membership",
    "gauge_action",
    "group_membership",
    "iwahori_factorize",
    "level_generator",
    "tameness_check",
]
