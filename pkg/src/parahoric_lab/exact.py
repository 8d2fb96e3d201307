"""Exact scalars and dense matrices over the Gaussian rationals Q(i).

Rationals are ``gmpy2.mpq`` values.  A matrix stores its real and imaginary
parts as two rational grids; the imaginary grid is ``None`` for real
matrices, which keeps the common real case on a fast path.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce
from operator import mul
from typing import Iterable, Sequence

import numpy as np
from gmpy2 import mpq

from .errors import NotNilpotent, ResidueNotSplit, SchemaError, SizeMismatch

Rational = type(mpq(0))

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")
_ZERO = mpq(0)
_ONE = mpq(1)


def rational(value) -> Rational:
    """Coerce ``value`` to an exact rational.

    Accepts ints, ``Fraction``, ``mpq`` and strings of the form ``"p"`` or
    ``"p/q"``.  Floats are refused: they are not exact inputs.
    """
    if isinstance(value, Rational):
        return value
    if isinstance(value, bool):
        raise SchemaError("booleans are not rationals", value=value)
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        m = _RATIONAL_RE.match(value)
        if not m:
            raise SchemaError(f"malformed rational {value!r}", value=value)
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise SchemaError(f"zero denominator in {value!r}", value=value)
        return mpq(int(m.group(1)), den)
    raise SchemaError(
        f"cannot read {value!r} ({type(value).__name__}) as an exact rational",
        value=repr(value),
    )


def format_rational(q) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _gq(re_, im_) -> "GaussianRational":
    g = object.__new__(GaussianRational)
    g.re = re_
    g.im = im_
    return g


class GaussianRational:
    """An exact complex number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = rational(re)
        self.im = rational(im)

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            raise SchemaError("floating complex numbers are not exact", value=repr(value))
        return _gq(rational(value), _ZERO)

    def conj(self) -> "GaussianRational":
        return _gq(self.re, -self.im)

    def norm2(self) -> Rational:
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return not self.im

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __neg__(self):
        return _gq(-self.re, -self.im)

    def __add__(self, other):
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return _gq(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return _gq(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return _gq(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = _maybe(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b and not d:
            return _gq(a * c, _ZERO)
        return _gq(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _maybe(other)
        if o is None:
            return NotImplemented
        n = o.norm2()
        if not n:
            raise ZeroDivisionError("division by zero in Q(i)")
        a, b, c, d = self.re, self.im, o.re, o.im
        return _gq((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, other):
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (_gq(_ONE, _ZERO) / self) ** (-k)
        result = _gq(_ONE, _ZERO)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({str(self)!r})"

    def __str__(self):
        if not self.im:
            return format_rational(self.re)
        im = self.im
        if im == 1:
            ims = "i"
        elif im == -1:
            ims = "-i"
        else:
            ims = format_rational(im) + "i"
        if not self.re:
            return ims
        sign = "" if ims.startswith("-") else "+"
        return f"{format_rational(self.re)}{sign}{ims}"


def _maybe(value):
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Rational, Fraction)) and not isinstance(value, bool):
        return _gq(mpq(value), _ZERO)
    return None


def gaussian(value) -> GaussianRational:
    return GaussianRational.coerce(value)


ZERO = _gq(_ZERO, _ZERO)
ONE = _gq(_ONE, _ZERO)
I = _gq(_ZERO, _ONE)


# ---------------------------------------------------------------- matrices


def _grid_is_zero(grid) -> bool:
    return not any(any(row) for row in grid)


def _mm(a, b):
    bt = tuple(zip(*b))
    return tuple(tuple(sum(map(mul, row, col)) for col in bt) for row in a)


def _add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def _sub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def _neg(a):
    return tuple(tuple(-x for x in row) for row in a)


def _scale(a, c):
    return tuple(tuple(x * c for x in row) for row in a)


def _zero_grid(r, c):
    return tuple((_ZERO,) * c for _ in range(r))


class ExactMatrix:
    """Dense matrix over Q(i).  Immutable."""

    __slots__ = ("rows", "cols", "_re", "_im")

    def __init__(self, entries: Sequence[Sequence]):
        grid = [[gaussian(x) for x in row] for row in entries]
        if not grid or not grid[0]:
            raise SchemaError("a matrix needs at least one row and one column")
        cols = len(grid[0])
        if any(len(row) != cols for row in grid):
            raise SchemaError("ragged matrix rows")
        self.rows = len(grid)
        self.cols = cols
        self._re = tuple(tuple(x.re for x in row) for row in grid)
        im = tuple(tuple(x.im for x in row) for row in grid)
        self._im = None if _grid_is_zero(im) else im

    @classmethod
    def _make(cls, re_, im_=None) -> "ExactMatrix":
        m = object.__new__(cls)
        m.rows = len(re_)
        m.cols = len(re_[0])
        m._re = re_
        m._im = None if im_ is None or _grid_is_zero(im_) else im_
        return m

    # constructors
    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "ExactMatrix":
        return cls._make(_zero_grid(rows, rows if cols is None else cols))

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls._make(
            tuple(tuple(_ONE if i == j else _ZERO for j in range(n)) for i in range(n))
        )

    @classmethod
    def unit(cls, n: int, i: int, j: int, value=1) -> "ExactMatrix":
        """The matrix ``value * E_ij`` (0-based indices)."""
        v = gaussian(value)
        re_ = [[_ZERO] * n for _ in range(n)]
        im_ = [[_ZERO] * n for _ in range(n)]
        re_[i][j] = v.re
        im_[i][j] = v.im
        return cls._make(tuple(map(tuple, re_)), tuple(map(tuple, im_)))

    @classmethod
    def diag(cls, values: Iterable) -> "ExactMatrix":
        vals = [gaussian(v) for v in values]
        n = len(vals)
        return cls([[vals[i] if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "ExactMatrix":
        n = len(columns[0])
        return cls([[gaussian(columns[j][i]) for j in range(len(columns))] for i in range(n)])

    # access
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, key) -> GaussianRational:
        i, j = key
        return _gq(self._re[i][j], _ZERO if self._im is None else self._im[i][j])

    def tolist(self) -> list[list[GaussianRational]]:
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def column(self, j: int) -> list[GaussianRational]:
        return [self[i, j] for i in range(self.rows)]

    def columns(self) -> list[list[GaussianRational]]:
        return [self.column(j) for j in range(self.cols)]

    def diagonal(self) -> list[GaussianRational]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "ExactMatrix":
        re_ = tuple(tuple(self._re[i][j] for j in cols) for i in rows)
        im_ = None if self._im is None else tuple(tuple(self._im[i][j] for j in cols) for i in rows)
        return ExactMatrix._make(re_, im_)

    def real_part(self) -> "ExactMatrix":
        """Entrywise real part."""
        return ExactMatrix._make(self._re)

    def imag_part(self) -> "ExactMatrix":
        """Entrywise imaginary part (a real matrix)."""
        if self._im is None:
            return ExactMatrix.zeros(self.rows, self.cols)
        return ExactMatrix._make(self._im)

    def is_real(self) -> bool:
        return self._im is None

    def is_zero(self) -> bool:
        return self._im is None and _grid_is_zero(self._re)

    def is_diagonal(self) -> bool:
        return all(
            not self._re[i][j] and (self._im is None or not self._im[i][j])
            for i in range(self.rows)
            for j in range(self.cols)
            if i != j
        )

    def is_scalar(self) -> bool:
        return self.is_diagonal() and len(set(self.diagonal())) <= 1

    # arithmetic
    def _check_same(self, other):
        if self.shape != other.shape:
            raise SizeMismatch(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self._check_same(other)
        return ExactMatrix._make(_add(self._re, other._re), _add_opt(self._im, other._im))

    def __sub__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self._check_same(other)
        return ExactMatrix._make(_sub(self._re, other._re), _sub_opt(self._im, other._im))

    def __neg__(self):
        return ExactMatrix._make(_neg(self._re), None if self._im is None else _neg(self._im))

    def scale(self, c) -> "ExactMatrix":
        c = gaussian(c)
        if not c.im:
            return ExactMatrix._make(
                _scale(self._re, c.re), None if self._im is None else _scale(self._im, c.re)
            )
        a, b = c.re, c.im
        if self._im is None:
            return ExactMatrix._make(_scale(self._re, a), _scale(self._re, b))
        re_ = _sub(_scale(self._re, a), _scale(self._im, b))
        im_ = _add(_scale(self._re, b), _scale(self._im, a))
        return ExactMatrix._make(re_, im_)

    def __mul__(self, other):
        if isinstance(other, ExactMatrix):
            return NotImplemented
        if _maybe(other) is None:
            return NotImplemented
        return self.scale(other)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise SizeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        a, b, c, d = self._re, self._im, other._re, other._im
        if b is None and d is None:
            return ExactMatrix._make(_mm(a, c))
        if b is None:
            return ExactMatrix._make(_mm(a, c), _mm(a, d))
        if d is None:
            return ExactMatrix._make(_mm(a, c), _mm(b, c))
        return ExactMatrix._make(_sub(_mm(a, c), _mm(b, d)), _add(_mm(a, d), _mm(b, c)))

    def __pow__(self, k: int) -> "ExactMatrix":
        if not self.is_square():
            raise SizeMismatch("power of a non-square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        result = ExactMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def transpose(self) -> "ExactMatrix":
        re_ = tuple(zip(*self._re))
        im_ = None if self._im is None else tuple(zip(*self._im))
        return ExactMatrix._make(re_, im_)

    @property
    def T(self) -> "ExactMatrix":
        return self.transpose()

    def conj(self) -> "ExactMatrix":
        """Entrywise complex conjugate."""
        return ExactMatrix._make(self._re, None if self._im is None else _neg(self._im))

    def adjoint(self) -> "ExactMatrix":
        return self.conj().transpose()

    def trace(self) -> GaussianRational:
        re_ = sum((self._re[i][i] for i in range(self.rows)), _ZERO)
        im_ = _ZERO if self._im is None else sum((self._im[i][i] for i in range(self.rows)), _ZERO)
        return _gq(re_, im_)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self._re == other._re and self._im == other._im

    def __hash__(self):
        return hash((self._re, self._im))

    def __repr__(self):
        rows = ["[" + ", ".join(str(x) for x in row) + "]" for row in self.tolist()]
        return "ExactMatrix([" + ", ".join(rows) + "])"

    def to_numpy(self) -> np.ndarray:
        out = np.array([[float(x) for x in row] for row in self._re], dtype=complex)
        if self._im is not None:
            out += 1j * np.array([[float(x) for x in row] for row in self._im], dtype=float)
        return out

    # exact linear algebra
    def rref(self) -> tuple["ExactMatrix", list[int]]:
        grid, pivots = _rref(self.tolist())
        return ExactMatrix(grid), pivots

    def rank(self) -> int:
        return len(_rref(self.tolist())[1])

    def nullspace(self) -> list[list[GaussianRational]]:
        """Basis of the right kernel, as a list of column vectors."""
        grid, pivots = _rref(self.tolist())
        free = [j for j in range(self.cols) if j not in pivots]
        basis = []
        for f in free:
            v = [ZERO] * self.cols
            v[f] = ONE
            for r, p in enumerate(pivots):
                v[p] = -grid[r][f]
            basis.append(v)
        return basis

    def det(self) -> GaussianRational:
        if not self.is_square():
            raise SizeMismatch("determinant of a non-square matrix")
        grid = self.tolist()
        n = self.rows
        result = ONE
        for c in range(n):
            p = next((r for r in range(c, n) if grid[r][c]), None)
            if p is None:
                return ZERO
            if p != c:
                grid[c], grid[p] = grid[p], grid[c]
                result = -result
            piv = grid[c][c]
            result = result * piv
            for r in range(c + 1, n):
                if grid[r][c]:
                    f = grid[r][c] / piv
                    grid[r] = [x - f * y for x, y in zip(grid[r], grid[c])]
        return result

    def inverse(self) -> "ExactMatrix":
        if not self.is_square():
            raise SizeMismatch("inverse of a non-square matrix")
        n = self.rows
        aug = [row + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(self.tolist())]
        grid, pivots = _rref(aug)
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return ExactMatrix([row[n:] for row in grid])

    def solve(self, rhs: "ExactMatrix") -> "ExactMatrix":
        """Solve ``self @ X == rhs`` for square invertible ``self``."""
        return self.inverse() @ rhs

    def charpoly(self) -> list[GaussianRational]:
        """Coefficients of det(x I - A), constant term first (monic)."""
        if not self.is_square():
            raise SizeMismatch("characteristic polynomial of a non-square matrix")
        n = self.rows
        coeffs = [ZERO] * (n + 1)
        coeffs[n] = ONE
        m = ExactMatrix.zeros(n)
        ident = ExactMatrix.identity(n)
        for k in range(1, n + 1):
            m = self @ m + ident.scale(coeffs[n - k + 1])
            coeffs[n - k] = (self @ m).trace() / (-k)
        return coeffs

    def is_nilpotent(self) -> bool:
        return (self ** self.rows).is_zero()

    def nilpotency_index(self) -> int:
        """Least k with A^k = 0; raises NotNilpotent otherwise."""
        p = ExactMatrix.identity(self.rows)
        for k in range(1, self.rows + 1):
            p = p @ self
            if p.is_zero():
                return k
        raise NotNilpotent("matrix is not nilpotent")


def _add_opt(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return _add(a, b)


def _sub_opt(a, b):
    if b is None:
        return a
    if a is None:
        return _neg(b)
    return _sub(a, b)


def _rref(grid: list[list[GaussianRational]]):
    grid = [list(row) for row in grid]
    rows = len(grid)
    cols = len(grid[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((k for k in range(r, rows) if grid[k][c]), None)
        if p is None:
            continue
        grid[r], grid[p] = grid[p], grid[r]
        piv = grid[r][c]
        if piv != ONE:
            grid[r] = [x / piv for x in grid[r]]
        for k in range(rows):
            if k != r and grid[k][c]:
                f = grid[k][c]
                grid[k] = [x - f * y for x, y in zip(grid[k], grid[r])]
        pivots.append(c)
        r += 1
    return grid, pivots


def bracket(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Commutator ``[a, b] = ab - ba``."""
    return a @ b - b @ a


def span_rank(vectors: Sequence[Sequence[GaussianRational]]) -> int:
    if not vectors:
        return 0
    return len(_rref([list(v) for v in vectors])[1])


def prod_gaussian(values: Iterable) -> GaussianRational:
    return reduce(lambda a, b: a * b, (gaussian(v) for v in values), ONE)


# ------------------------------------------------------------- polynomials
# Polynomials over Q(i) are lists of GaussianRational, constant term first.


def poly_trim(p: list) -> list:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def poly_eval(p: Sequence[GaussianRational], x: GaussianRational) -> GaussianRational:
    acc = ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_divmod(p: Sequence, d: Sequence) -> tuple[list, list]:
    p = poly_trim(p)
    d = poly_trim(d)
    if not d:
        raise ZeroDivisionError("polynomial division by zero")
    q = [ZERO] * max(len(p) - len(d) + 1, 1)
    lead = d[-1]
    while len(p) >= len(d) and p:
        shift = len(p) - len(d)
        f = p[-1] / lead
        q[shift] = f
        for k, c in enumerate(d):
            p[shift + k] = p[shift + k] - f * c
        p = poly_trim(p[:-1] if not p[-1] else p)
    return poly_trim(q), p


def poly_monic(p: Sequence) -> list:
    p = poly_trim(p)
    return [c / p[-1] for c in p]


def poly_gcd(a: Sequence, b: Sequence) -> list:
    a, b = poly_trim(a), poly_trim(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    return poly_monic(a) if a else []


def poly_derivative(p: Sequence) -> list:
    return poly_trim([c * k for k, c in enumerate(p)][1:])


def _rational_candidates(x: float) -> list[Rational]:
    """Small-denominator rationals close to ``x``, simplest first."""
    tol = 1e-6 * max(1.0, abs(x))
    seen = []
    for bound in (1, 12, 10**3, 10**6, 10**9):
        f = Fraction(x).limit_denominator(bound)
        if abs(float(f) - x) > tol:
            continue
        q = mpq(f.numerator, f.denominator)
        if q not in seen:
            seen.append(q)
    return seen


def _deflate_numeric(remaining: list, found: list) -> list:
    numeric = np.roots([complex(c) for c in reversed(remaining)])
    for z in numeric:
        if len(remaining) <= 1:
            break
        hit = None
        for re_c in _rational_candidates(float(np.real(z))):
            for im_c in _rational_candidates(float(np.imag(z))):
                cand = _gq(re_c, im_c)
                if not poly_eval(remaining, cand):
                    hit = cand
                    break
            if hit is not None:
                break
        if hit is not None:
            found.append(hit)
            remaining = poly_divmod(remaining, [-hit, ONE])[0]
    return remaining


def split_roots(p: Sequence[GaussianRational]) -> list[tuple[GaussianRational, int]]:
    """Roots of ``p`` in Q(i) with multiplicities.

    Numerical roots of the squarefree part only propose exact candidates;
    every root returned has been verified exactly.  Raises ResidueNotSplit
    when the roots found do not account for the full degree.
    """
    p = poly_trim(p)
    if len(p) <= 1:
        return []
    g = poly_gcd(p, poly_derivative(p))
    sqfree = poly_monic(poly_divmod(p, g)[0]) if len(g) > 1 else poly_monic(p)
    found: list[GaussianRational] = []
    remaining = sqfree
    for _ in range(2):
        if len(remaining) <= 1:
            break
        remaining = _deflate_numeric(remaining, found)
    if len(remaining) > 1:
        raise ResidueNotSplit(
            "characteristic polynomial does not split over Q(i)",
            factor=[str(c) for c in remaining],
        )
    result = []
    for root in found:
        mult = 0
        q = poly_trim(p)
        while True:
            quo, rem = poly_divmod(q, [-root, ONE])
            if rem:
                break
            mult += 1
            q = quo
        result.append((root, mult))
    result.sort(key=lambda t: (-t[0].re, -t[0].im))
    return result


def eigenvalues(a: ExactMatrix) -> list[tuple[GaussianRational, int]]:
    """Exact eigenvalues with algebraic multiplicities (ResidueNotSplit if absent)."""
    return split_roots(a.charpoly())
