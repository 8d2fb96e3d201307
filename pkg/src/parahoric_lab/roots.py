"""Root data of GL_n and SL_n with respect to the diagonal torus.

Indices are 0-based internally; roots print as ``e1-e2`` (1-based) to match
the usual notation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

from .errors import SchemaError
from .exact import ExactMatrix, Rational, format_rational, rational

# Anti-dominance convention: a character of a standard parabolic is
# anti-dominant when its block values are non-decreasing.  Flipping this
# constant flips every stability inequality.
ANTIDOMINANT_NONDECREASING = True


@dataclass(frozen=True)
class GroupDescriptor:
    family: str
    n: int

    def __post_init__(self):
        if self.family not in ("GL", "SL"):
            raise SchemaError(f"unknown group family {self.family!r}", family=self.family)
        if not isinstance(self.n, int) or self.n < 1:
            raise SchemaError("rank must be a positive integer", n=self.n)
        if self.family == "SL" and self.n < 2:
            raise SchemaError("SL_n needs n >= 2", n=self.n)

    @property
    def is_sl(self) -> bool:
        return self.family == "SL"

    def dimension(self) -> int:
        return self.n * self.n - (1 if self.is_sl else 0)

    def __str__(self):
        return f"{self.family}{self.n}"


def GL(n: int) -> GroupDescriptor:
    return GroupDescriptor("GL", n)


def SL(n: int) -> GroupDescriptor:
    return GroupDescriptor("SL", n)


@dataclass(frozen=True)
class Weight:
    """A rational cocharacter of the diagonal torus."""

    group: GroupDescriptor
    entries: tuple = field(default=())

    def __post_init__(self):
        ents = tuple(rational(x) for x in self.entries)
        object.__setattr__(self, "entries", ents)
        if len(ents) != self.group.n:
            raise SchemaError(
                f"weight has {len(ents)} entries for {self.group}", entries=[format_rational(x) for x in ents]
            )
        if self.group.is_sl and sum(ents) != 0:
            raise SchemaError("SL weights must sum to zero", entries=[format_rational(x) for x in ents])

    @classmethod
    def zero(cls, group: GroupDescriptor) -> "Weight":
        return cls(group, (0,) * group.n)

    def __getitem__(self, i: int) -> Rational:
        return self.entries[i]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(self.group, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(self.group, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Weight":
        return Weight(self.group, tuple(-a for a in self.entries))

    def scale(self, c) -> "Weight":
        c = rational(c)
        return Weight(self.group, tuple(c * a for a in self.entries))

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.entries)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def as_matrix(self) -> ExactMatrix:
        return ExactMatrix.diag(self.entries)

    def __str__(self):
        return "(" + ", ".join(format_rational(x) for x in self.entries) + ")"


@dataclass(frozen=True)
class Root:
    """The root ``e_i - e_j`` (0-based ``i != j``); its root vector is E_ij."""

    i: int
    j: int

    def __post_init__(self):
        if self.i == self.j:
            raise SchemaError("a root needs distinct indices", i=self.i, j=self.j)

    def __neg__(self) -> "Root":
        return Root(self.j, self.i)

    def __call__(self, theta: Weight) -> Rational:
        return root_pairing(theta, self)

    def height(self) -> int:
        return self.j - self.i

    def is_positive(self) -> bool:
        return self.i < self.j

    def root_vector(self, n: int) -> ExactMatrix:
        return ExactMatrix.unit(n, self.i, self.j)

    def __str__(self):
        return f"e{self.i + 1}-e{self.j + 1}"


def all_roots(n: int) -> list[Root]:
    return [Root(i, j) for i in range(n) for j in range(n) if i != j]


def root_pairing(theta: Weight, r: Root) -> Rational:
    """<theta, r> = theta_i - theta_j."""
    return theta[r.i] - theta[r.j]


def ceil_rational(q) -> int:
    q = rational(q)
    return int(-((-q.numerator) // q.denominator))


def ceiling_level(theta: Weight, r: Root) -> int:
    """m_r(theta), the least integer m with r(theta) + m >= 0."""
    return ceil_rational(-root_pairing(theta, r))


def ad_eigendecomposition(theta: Weight) -> list[tuple[Rational, list[ExactMatrix]]]:
    """Eigenspaces of ad(diag(theta)) on gl_n or sl_n, largest eigenvalue first."""
    n = theta.group.n
    spaces: dict = {}
    for r in all_roots(n):
        spaces.setdefault(root_pairing(theta, r), []).append(r.root_vector(n))
    cartan = spaces.setdefault(rational(0), [])
    if theta.group.is_sl:
        for k in range(n - 1):
            cartan.append(ExactMatrix.unit(n, k, k) - ExactMatrix.unit(n, k + 1, k + 1))
    else:
        for k in range(n):
            cartan.append(ExactMatrix.unit(n, k, k))
    return sorted(spaces.items(), key=lambda kv: -kv[0])


@dataclass(frozen=True)
class ParabolicDescriptor:
    """Standard block-upper-triangular parabolic, plus an optional conjugator.

    The conjugator ``c`` transports the original frame into the standard
    one: ``c diag(gamma) c^{-1}`` is the sorted weight.
    """

    group: GroupDescriptor
    block_sizes: tuple
    conjugator: ExactMatrix | None = None

    def __post_init__(self):
        sizes = tuple(int(b) for b in self.block_sizes)
        object.__setattr__(self, "block_sizes", sizes)
        if not sizes or any(b <= 0 for b in sizes) or sum(sizes) != self.group.n:
            raise SchemaError(
                f"block sizes {list(sizes)} are not a composition of {self.group.n}", blocks=list(sizes)
            )
        if self.conjugator is not None and self.conjugator.shape != (self.group.n, self.group.n):
            raise SchemaError("conjugator has the wrong shape")

    @property
    def k(self) -> int:
        return len(self.block_sizes)

    def is_whole_group(self) -> bool:
        return self.k == 1

    def block_of(self) -> list[int]:
        """Block index of each coordinate (standard frame)."""
        out = []
        for b, size in enumerate(self.block_sizes):
            out.extend([b] * size)
        return out

    def block_ranges(self) -> list[range]:
        out, start = [], 0
        for size in self.block_sizes:
            out.append(range(start, start + size))
            start += size
        return out

    def roots(self) -> list[Root]:
        """Roots of the standard parabolic: non-negative on the block grading."""
        blk = self.block_of()
        return [r for r in all_roots(self.group.n) if blk[r.i] <= blk[r.j]]

    def levi_roots(self) -> list[Root]:
        blk = self.block_of()
        return [r for r in all_roots(self.group.n) if blk[r.i] == blk[r.j]]


def parabolic_from_weight(gamma: Weight) -> ParabolicDescriptor:
    """Parabolic attached to a weight: sort entries non-increasingly.

    Block sizes are the multiplicities of the sorted values; the conjugator
    is the permutation matrix performing the sort (None if already sorted).
    """
    n = gamma.group.n
    order = sorted(range(n), key=lambda i: -gamma[i])
    vals = [gamma[i] for i in order]
    sizes = []
    for k, v in enumerate(vals):
        if k and v == vals[k - 1]:
            sizes[-1] += 1
        else:
            sizes.append(1)
    conj = None
    if order != list(range(n)):
        conj = ExactMatrix([[1 if order[k] == j else 0 for j in range(n)] for k in range(n)])
    return ParabolicDescriptor(gamma.group, tuple(sizes), conj)


@dataclass(frozen=True)
class CharacterDescriptor:
    """chi = prod_i det(block_i)^{c_i} on a standard parabolic."""

    parabolic: ParabolicDescriptor
    block_values: tuple

    def __post_init__(self):
        vals = tuple(self.block_values)
        if any(isinstance(v, bool) or int(v) != v for v in vals):
            raise SchemaError("character block values must be integers", values=[str(v) for v in vals])
        vals = tuple(int(v) for v in vals)
        object.__setattr__(self, "block_values", vals)
        if len(vals) != self.parabolic.k:
            raise SchemaError(
                f"{len(vals)} block values for {self.parabolic.k} blocks", values=list(vals)
            )

    def is_trivial_on_center(self) -> bool:
        return sum(n * c for n, c in zip(self.parabolic.block_sizes, self.block_values)) == 0

    def is_trivial(self) -> bool:
        return not any(self.block_values)

    def coordinate_values(self) -> list[int]:
        """The character as a vector on the diagonal torus (standard frame)."""
        return [self.block_values[b] for b in self.parabolic.block_of()]

    def __add__(self, other: "CharacterDescriptor") -> "CharacterDescriptor":
        return CharacterDescriptor(
            self.parabolic, tuple(a + b for a, b in zip(self.block_values, other.block_values))
        )

    def scale(self, c: int) -> "CharacterDescriptor":
        return CharacterDescriptor(self.parabolic, tuple(c * a for a in self.block_values))


def _nondecreasing(values: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(values, values[1:]))


def _nonincreasing(values: Sequence[int]) -> bool:
    return all(a >= b for a, b in zip(values, values[1:]))


def is_antidominant(chi: CharacterDescriptor) -> bool:
    if ANTIDOMINANT_NONDECREASING:
        return _nondecreasing(chi.block_values)
    return _nonincreasing(chi.block_values)


def is_dominant(chi: CharacterDescriptor) -> bool:
    if ANTIDOMINANT_NONDECREASING:
        return _nonincreasing(chi.block_values)
    return _nondecreasing(chi.block_values)


def fundamental_antidominant_characters(parabolic: ParabolicDescriptor) -> list[CharacterDescriptor]:
    """Extremal rays of the anti-dominant cone of characters trivial on the center.

    For each split point t between blocks the generator is
    ``(-N_after, ..., -N_after, N_upto, ..., N_upto)`` divided by the gcd,
    where N_upto and N_after count coordinates up to and after the split.
    """
    sizes = parabolic.block_sizes
    n = sum(sizes)
    out = []
    upto = 0
    for t in range(len(sizes) - 1):
        upto += sizes[t]
        after = n - upto
        d = gcd(upto, after)
        vals = [-after // d if b <= t else upto // d for b in range(len(sizes))]
        if not ANTIDOMINANT_NONDECREASING:
            vals = [-v for v in vals]
        out.append(CharacterDescriptor(parabolic, tuple(vals)))
    return out
