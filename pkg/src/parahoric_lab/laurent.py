"""Truncated Laurent-polynomial matrices.

A :class:`LaurentMatrix` is a finite sum ``sum_k A_k z^k`` together with a
truncation order ``N``: coefficients with ``k > N`` are *unknown*, not zero.
``N = None`` marks an exact Laurent polynomial.  Every operation propagates
the tightest sound truncation order, and asking for a coefficient beyond it
raises :class:`TruncationTooShallow`.
"""

from __future__ import annotations

import math
import os
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    NotInvertibleInLoopGroup,
    SchemaError,
    SizeMismatch,
    TruncationTooShallow,
)
from .exact import ONE, ExactMatrix, GaussianRational, gaussian

DEFAULT_TRUNC_ENV = "PARAHORIC_LAB_DEFAULT_TRUNC"


def default_trunc() -> int:
    """Default truncation order for freshly built or inverted series."""
    raw = os.environ.get(DEFAULT_TRUNC_ENV)
    if raw is None or raw == "":
        return 12
    try:
        value = int(raw)
    except ValueError:
        raise SchemaError(f"{DEFAULT_TRUNC_ENV} must be an integer", value=raw) from None
    if value < 0:
        raise SchemaError(f"{DEFAULT_TRUNC_ENV} must be non-negative", value=raw)
    return value


def _tmin(*values):
    """Minimum of truncation orders where ``None`` means +infinity."""
    finite = [v for v in values if v is not None and v != math.inf]
    return min(finite) if finite else None


def _as_matrix(value, size: int | None = None) -> ExactMatrix:
    m = value if isinstance(value, ExactMatrix) else ExactMatrix(value)
    if size is not None and m.shape != (size, size):
        raise SizeMismatch(f"term of shape {m.shape} in a {size}x{size} series")
    return m


class LaurentMatrix:
    """Square matrix of truncated Laurent series over Q(i)."""

    __slots__ = ("size", "terms", "trunc", "_numeric")

    def __init__(self, size: int, terms: Mapping[int, object] | None = None, trunc: int | None = None):
        if size < 1:
            raise SchemaError("size must be positive", size=size)
        self.size = size
        self.trunc = trunc
        clean: dict[int, ExactMatrix] = {}
        for k, v in (terms or {}).items():
            k = int(k)
            if trunc is not None and k > trunc:
                continue
            m = _as_matrix(v, size)
            if not m.is_zero():
                clean[k] = m
        self.terms = dict(sorted(clean.items()))
        self._numeric = None

    # constructors
    @classmethod
    def constant(cls, m, trunc: int | None = None) -> "LaurentMatrix":
        m = _as_matrix(m)
        if not m.is_square():
            raise SizeMismatch("constant term must be square")
        return cls(m.rows, {0: m}, trunc)

    @classmethod
    def identity(cls, n: int) -> "LaurentMatrix":
        return cls(n, {0: ExactMatrix.identity(n)})

    @classmethod
    def zero(cls, n: int, trunc: int | None = None) -> "LaurentMatrix":
        return cls(n, {}, trunc)

    @classmethod
    def monomial(cls, m, k: int, trunc: int | None = None) -> "LaurentMatrix":
        m = _as_matrix(m)
        return cls(m.rows, {k: m}, trunc)

    @classmethod
    def z_power(cls, mu: Sequence[int]) -> "LaurentMatrix":
        """The exact diagonal matrix ``diag(z^mu_1, ..., z^mu_n)``."""
        n = len(mu)
        terms: dict[int, list] = {}
        for i, e in enumerate(mu):
            if int(e) != e:
                raise SchemaError("z-power exponents must be integers", mu=list(map(str, mu)))
            grid = terms.setdefault(int(e), [[0] * n for _ in range(n)])
            grid[i][i] = 1
        return cls(n, {k: ExactMatrix(g) for k, g in terms.items()})

    # inspection
    def is_exact(self) -> bool:
        return self.trunc is None

    def coefficient(self, k: int) -> ExactMatrix:
        if self.trunc is not None and k > self.trunc:
            raise TruncationTooShallow(
                f"coefficient z^{k} requested but series is known only up to z^{self.trunc}",
                requested=k,
                trunc=self.trunc,
            )
        return self.terms.get(k) or ExactMatrix.zeros(self.size)

    def valuation(self) -> int | None:
        """Least exponent with a nonzero coefficient (None for a zero series)."""
        return next(iter(self.terms), None)

    def valuation_bound(self):
        """A sound lower bound for the valuation: exact when nonzero.

        For a series that is zero up to its truncation order ``N`` this is
        ``N + 1``; an exact zero series gives ``math.inf``.
        """
        v = self.valuation()
        if v is not None:
            return v
        return math.inf if self.trunc is None else self.trunc + 1

    def max_exponent(self) -> int | None:
        return next(reversed(self.terms), None) if self.terms else None

    def is_zero(self) -> bool:
        return not self.terms

    def entry(self, i: int, j: int) -> dict[int, GaussianRational]:
        out = {}
        for k, m in self.terms.items():
            x = m[i, j]
            if x:
                out[k] = x
        return out

    def entry_valuation(self, i: int, j: int) -> int | None:
        for k, m in self.terms.items():
            if m[i, j]:
                return k
        return None

    def is_constant(self) -> bool:
        return all(k == 0 for k in self.terms)

    # arithmetic
    def _check(self, other: "LaurentMatrix"):
        if not isinstance(other, LaurentMatrix):
            raise TypeError("expected a LaurentMatrix")
        if other.size != self.size:
            raise SizeMismatch(f"sizes {self.size} and {other.size} differ")

    def __add__(self, other):
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        self._check(other)
        trunc = _tmin(self.trunc, other.trunc)
        terms = dict(self.terms)
        for k, m in other.terms.items():
            terms[k] = terms[k] + m if k in terms else m
        return LaurentMatrix(self.size, terms, trunc)

    def __neg__(self):
        return LaurentMatrix(self.size, {k: -m for k, m in self.terms.items()}, self.trunc)

    def __sub__(self, other):
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "LaurentMatrix":
        c = gaussian(c)
        return LaurentMatrix(self.size, {k: m.scale(c) for k, m in self.terms.items()}, self.trunc)

    def __mul__(self, c):
        if isinstance(c, LaurentMatrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        return laurent_multiply(self, other)

    def shift(self, k: int) -> "LaurentMatrix":
        """Multiply by ``z^k``."""
        trunc = None if self.trunc is None else self.trunc + k
        return LaurentMatrix(self.size, {e + k: m for e, m in self.terms.items()}, trunc)

    def truncate(self, order: int) -> "LaurentMatrix":
        """Forget all coefficients above ``order``."""
        return LaurentMatrix(self.size, self.terms, _tmin(self.trunc, order))

    def map_terms(self, fn) -> "LaurentMatrix":
        return LaurentMatrix(self.size, {k: fn(m) for k, m in self.terms.items()}, self.trunc)

    def conjugate_by(self, p: ExactMatrix, p_inv: ExactMatrix | None = None) -> "LaurentMatrix":
        """Term-wise ``p A_k p^{-1}`` for a constant invertible ``p``."""
        p_inv = p.inverse() if p_inv is None else p_inv
        return self.map_terms(lambda m: p @ m @ p_inv)

    def z_derivative(self) -> "LaurentMatrix":
        """Apply ``z d/dz`` term-wise."""
        return LaurentMatrix(self.size, {k: m.scale(k) for k, m in self.terms.items() if k}, self.trunc)

    def trace_series(self) -> dict[int, GaussianRational]:
        return {k: m.trace() for k, m in self.terms.items() if m.trace()}

    def agrees_with(self, other: "LaurentMatrix", upto: int | None = None) -> bool:
        """Coefficient-wise equality up to the common known order (or ``upto``)."""
        self._check(other)
        bound = _tmin(self.trunc, other.trunc, upto)
        keys = set(self.terms) | set(other.terms)
        for k in keys:
            if bound is not None and k > bound:
                continue
            if self.terms.get(k, None) != other.terms.get(k, None):
                a = self.terms.get(k) or ExactMatrix.zeros(self.size)
                b = other.terms.get(k) or ExactMatrix.zeros(self.size)
                if a != b:
                    return False
        return True

    def __eq__(self, other):
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        return self.size == other.size and self.agrees_with(other)

    __hash__ = None

    def __repr__(self):
        body = ", ".join(f"{k}: {m!r}" for k, m in self.terms.items())
        return f"LaurentMatrix(size={self.size}, trunc={self.trunc}, terms={{{body}}})"

    # numerics
    def evaluate(self, z: complex) -> np.ndarray:
        if self._numeric is None:
            self._numeric = [(k, m.to_numpy()) for k, m in self.terms.items()]
        out = np.zeros((self.size, self.size), dtype=complex)
        for k, arr in self._numeric:
            out += arr * (z**k)
        return out


def laurent_multiply(a: LaurentMatrix, b: LaurentMatrix) -> LaurentMatrix:
    """Product with truncation ``min(a.N + val(b), b.N + val(a))``."""
    a._check(b)
    va, vb = a.valuation_bound(), b.valuation_bound()
    bounds = []
    if a.trunc is not None:
        bounds.append(a.trunc + vb)
    if b.trunc is not None:
        bounds.append(b.trunc + va)
    bounds = [x for x in bounds if x != math.inf]
    trunc = min(bounds) if bounds else None
    if trunc is not None and trunc == -math.inf:
        trunc = None
    if trunc is not None:
        trunc = int(trunc)
    out: dict[int, ExactMatrix] = {}
    for i, x in a.terms.items():
        for j, y in b.terms.items():
            k = i + j
            if trunc is not None and k > trunc:
                continue
            p = x @ y
            out[k] = out[k] + p if k in out else p
    return LaurentMatrix(a.size, out, trunc)


# -------------------------------------------------------------- inversion


def _scalar_terms(s: LaurentMatrix) -> dict[int, GaussianRational]:
    return {k: m[0, 0] for k, m in s.terms.items()}


def _scalar_inverse(terms: dict[int, GaussianRational], trunc: int | None, order: int) -> tuple[dict, int | None]:
    """Invert a scalar series known up to ``trunc``.

    Returns ``(terms, trunc)`` of the inverse.  A monomial exact input gives
    an exact inverse; otherwise the inverse is computed through ``order``
    (capped by what the input determines).
    """
    v = next(iter(terms))
    lead = terms[v]
    if trunc is None and len(terms) == 1:
        return {-v: ONE / lead}, None
    # unit part u = s / (lead z^v) = 1 + sum_{k>=1} u_k z^k
    u = {k - v: c / lead for k, c in terms.items()}
    known = order + v
    if trunc is not None:
        known = min(known, trunc - v)
    inv = {0: ONE}
    for k in range(1, known + 1):
        acc = None
        for j in range(1, k + 1):
            uj = u.get(j)
            if uj is None:
                continue
            t = uj * inv.get(k - j, 0)
            acc = t if acc is None else acc + t
        if acc:
            inv[k] = -acc
    inv_lead = ONE / lead
    return {k - v: c * inv_lead for k, c in inv.items()}, known - v


def laurent_inverse(g: LaurentMatrix, order: int | None = None) -> LaurentMatrix:
    """Inverse in the loop group via adjugate and determinant.

    The adjugate comes from the Faddeev-LeVerrier recursion over the series
    ring, so no invertible leading coefficient is needed.  For exact input
    with a non-monomial determinant the result is truncated at ``order``
    (default: the session default truncation).
    """
    n = g.size
    if order is None:
        order = default_trunc()
    adj, det = adjugate_and_det(g)
    dterms = _scalar_terms(det)
    if not dterms:
        raise NotInvertibleInLoopGroup(
            "determinant vanishes to the known order", trunc=det.trunc
        )
    vadj = adj.valuation_bound()
    target = order if adj.trunc is None else max(order, adj.trunc)
    want = target - (vadj if vadj != math.inf else 0)
    inv_terms, inv_trunc = _scalar_inverse(dterms, det.trunc, want)
    ident = ExactMatrix.identity(n)
    dinv = LaurentMatrix(n, {k: ident.scale(c) for k, c in inv_terms.items()}, inv_trunc)
    return laurent_multiply(adj, dinv)


def adjugate_and_det(g: LaurentMatrix) -> tuple[LaurentMatrix, LaurentMatrix]:
    """Adjugate and determinant (the latter as a scalar multiple of I)."""
    n = g.size
    ident = LaurentMatrix.identity(n)
    m = ident
    c_prev = ident  # c_n = 1
    am = None
    for k in range(1, n + 1):
        if k > 1:
            m = am + c_prev
        am = laurent_multiply(g, m)
        tr = am.trace_series()
        idm = ExactMatrix.identity(n)
        c_prev = LaurentMatrix(
            n, {e: idm.scale(t / (-k)) for e, t in tr.items()}, am.trunc
        )
    # after the loop: c_prev = c_0 and m = M_n
    sign = -1 if n % 2 else 1
    det = c_prev.scale(sign)
    adj = m.scale(-sign)
    return adj, det


def determinant(g: LaurentMatrix) -> tuple[dict[int, GaussianRational], int | None]:
    """Determinant as ``(terms, trunc)`` of a scalar series."""
    det = adjugate_and_det(g)[1]
    return _scalar_terms(det), det.trunc


def log_derivative(g: LaurentMatrix, order: int | None = None) -> LaurentMatrix:
    """``z g'(z) g(z)^{-1}``: the dz/z-normalized logarithmic derivative."""
    return laurent_multiply(g.z_derivative(), laurent_inverse(g, order))
