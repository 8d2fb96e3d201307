"""Exact residue calculus: Jordan decomposition, sl2-triples, exponentials."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import gmpy2
import numpy as np
from gmpy2 import mpq

from .errors import DoesNotCommute, NonIntegralGrading, NonSquareScalar, NotNilpotent, NotSemisimple
from .exact import (
    ONE,
    ZERO,
    ExactMatrix,
    GaussianRational,
    bracket,
    eigenvalues,
    gaussian,
    rational,
    span_rank,
)


@dataclass(frozen=True)
class JordanPair:
    """``a = semisimple + nilpotent`` with commuting parts.

    ``basis`` has generalized eigenvectors as columns, grouped by eigenvalue,
    so ``basis^{-1} semisimple basis`` is diagonal with entries ``spectrum``.
    """

    semisimple: ExactMatrix
    nilpotent: ExactMatrix
    basis: ExactMatrix
    spectrum: tuple  # eigenvalue per basis column


@dataclass(frozen=True)
class SlTwoTriple:
    """(X, H, Y) with [H,X]=2X, [H,Y]=-2Y, [X,Y]=H.

    In the basis given by the columns of ``basis_change`` the triple is the
    standard block triple: Y lowers along each chain, H is integral diagonal.
    """

    X: ExactMatrix
    H: ExactMatrix
    Y: ExactMatrix
    basis_change: ExactMatrix
    chain_lengths: tuple = ()


def _first_support(vectors: Sequence[Sequence[GaussianRational]]) -> int:
    return min(next(i for i, x in enumerate(v) if x) for v in vectors)


def jordan_decompose(a: ExactMatrix) -> JordanPair:
    """Jordan-Chevalley decomposition via generalized eigenspaces.

    Eigenvalue blocks are ordered by the first coordinate their generalized
    eigenspace touches, so an already diagonal matrix gets the identity basis.
    """
    n = a.rows
    ident = ExactMatrix.identity(n)
    spaces = []
    for lam, mult in eigenvalues(a):
        vecs = ((a - ident.scale(lam)) ** mult).nullspace()
        spaces.append((lam, vecs))
    spaces.sort(key=lambda t: _first_support(t[1]))
    cols, spectrum = [], []
    for lam, vecs in spaces:
        cols.extend(vecs)
        spectrum.extend([lam] * len(vecs))
    basis = ExactMatrix.from_columns(cols)
    s = basis @ ExactMatrix.diag(spectrum) @ basis.inverse()
    return JordanPair(s, a - s, basis, tuple(spectrum))


def _is_semisimple(s: ExactMatrix) -> bool:
    n = s.rows
    ident = ExactMatrix.identity(n)
    total = sum(len((s - ident.scale(lam)).nullspace()) for lam, _ in eigenvalues(s))
    return total == n


def eigenspaces(s: ExactMatrix) -> list[tuple[GaussianRational, list]]:
    """Eigenspaces of a semisimple matrix (NotSemisimple otherwise)."""
    n = s.rows
    ident = ExactMatrix.identity(n)
    out = [(lam, (s - ident.scale(lam)).nullspace()) for lam, _ in eigenvalues(s)]
    if sum(len(v) for _, v in out) != n:
        raise NotSemisimple("matrix is not diagonalizable")
    out.sort(key=lambda t: _first_support(t[1]))
    return out


def _apply(m: ExactMatrix, v: Sequence[GaussianRational]) -> list[GaussianRational]:
    return [sum((m[i, j] * v[j] for j in range(m.cols)), ZERO) for i in range(m.rows)]


def jordan_chains(y: ExactMatrix) -> list[list[list[GaussianRational]]]:
    """Jordan chains ``[v, Yv, ..., Y^{d-1} v]`` of a nilpotent matrix.

    The chains together form a basis; longer chains come first.
    """
    n = y.rows
    power = [ExactMatrix.identity(n)]
    while not power[-1].is_zero():
        power.append(power[-1] @ y)
        if len(power) > n + 1:
            raise NotNilpotent("matrix is not nilpotent")
    depth = len(power) - 1  # nilpotency index
    kernels = [[]] + [power[d].nullspace() for d in range(1, depth + 1)]
    chains: list = []
    layer: list = []  # vectors at the current level coming from longer chains
    for d in range(depth, 0, -1):
        heads = []
        base = kernels[d - 1] + layer
        rank = span_rank(base)
        for v in kernels[d]:
            if span_rank(base + heads + [v]) > rank + len(heads):
                heads.append(v)
        for h in heads:
            chain = [h]
            for _ in range(d - 1):
                chain.append(_apply(y, chain[-1]))
            chains.append(chain)
        layer = [_apply(y, v) for v in layer + heads]
    return chains


def _standard_triple(d: int) -> tuple[list, list, list]:
    """Standard triple on one chain of length d (as dense grids)."""
    X = [[0] * d for _ in range(d)]
    H = [[0] * d for _ in range(d)]
    Y = [[0] * d for _ in range(d)]
    for k in range(d):
        H[k][k] = d - 1 - 2 * k
    for k in range(1, d):
        Y[k][k - 1] = 1
        X[k - 1][k] = k * (d - k)
    return X, H, Y


def _block_diag(blocks: list[list[list]]) -> list[list]:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return out


def _restrict(m: ExactMatrix, full: ExactMatrix, full_inv: ExactMatrix, cols: range) -> ExactMatrix:
    c = full_inv @ m @ full
    return c.submatrix(list(cols), list(cols))


def triple_on_subspaces(y: ExactMatrix, subspaces: list[list]) -> SlTwoTriple:
    """Complete ``y`` to a triple inside each of the given y-stable subspaces.

    ``subspaces`` is a list of bases (lists of column vectors) whose union is
    a basis of the whole space.
    """
    n = y.rows
    full_cols = [v for space in subspaces for v in space]
    full = ExactMatrix.from_columns(full_cols)
    full_inv = full.inverse()
    chain_cols: list = []
    Xb, Hb, Yb, lengths = [], [], [], []
    start = 0
    for space in subspaces:
        dim = len(space)
        idx = range(start, start + dim)
        block = _restrict(y, full, full_inv, idx)
        for chain in jordan_chains(block):
            d = len(chain)
            lengths.append(d)
            for coords in chain:
                # coordinates inside the subspace -> ambient vector
                vec = [ZERO] * n
                for local, c in zip(idx, coords):
                    if c:
                        col = full_cols[local]
                        vec = [x + c * w for x, w in zip(vec, col)]
                chain_cols.append(vec)
            X, H, Y = _standard_triple(d)
            Xb.append(X)
            Hb.append(H)
            Yb.append(Y)
        start += dim
    P = ExactMatrix.from_columns(chain_cols)
    Pinv = P.inverse()
    X = P @ ExactMatrix(_block_diag(Xb)) @ Pinv
    H = P @ ExactMatrix(_block_diag(Hb)) @ Pinv
    Y = P @ ExactMatrix(_block_diag(Yb)) @ Pinv
    assert Y == y, "chain basis does not reproduce Y"
    return SlTwoTriple(X, H, Y, P, tuple(lengths))


def sl2_completion(y: ExactMatrix, commute_with: ExactMatrix | None = None) -> SlTwoTriple:
    """Complete a nilpotent ``y`` to an sl2-triple (X, H, Y).

    With ``commute_with = s`` (semisimple, commuting with ``y``) the triple is
    built inside the eigenspaces of ``s`` so that X and H commute with ``s``.
    """
    if not y.is_nilpotent():
        raise NotNilpotent("Y is not nilpotent")
    n = y.rows
    if commute_with is None:
        spaces = [[[ONE if i == j else ZERO for i in range(n)] for j in range(n)]]
    else:
        if not bracket(commute_with, y).is_zero():
            raise DoesNotCommute("[s, Y] != 0")
        spaces = [vecs for _, vecs in eigenspaces(commute_with)]
    return triple_on_subspaces(y, spaces)


def check_triple(t: SlTwoTriple) -> bool:
    return (
        bracket(t.H, t.X) == t.X.scale(2)
        and bracket(t.H, t.Y) == t.Y.scale(-2)
        and bracket(t.X, t.Y) == t.H
    )


# ------------------------------------------------------------ exponentials


def nilpotent_exp(N: ExactMatrix, c=1) -> ExactMatrix:
    """exp(c N) for nilpotent N, as the terminating sum."""
    c = gaussian(c)
    if not N.is_nilpotent():
        raise NotNilpotent("exponent is not nilpotent")
    n = N.rows
    out = ExactMatrix.identity(n)
    term = ExactMatrix.identity(n)
    for k in range(1, n + 1):
        term = (term @ N).scale(c / k)
        if term.is_zero():
            break
        out = out + term
    return out


def nilpotent_exp_numeric(N: ExactMatrix, c: complex) -> np.ndarray:
    """exp(c N) in floating point, from exact powers of a nilpotent N."""
    if not N.is_nilpotent():
        raise NotNilpotent("exponent is not nilpotent")
    n = N.rows
    out = np.eye(n, dtype=complex)
    power = ExactMatrix.identity(n)
    for k in range(1, n + 1):
        power = power @ N
        if power.is_zero():
            break
        out += (c**k / math.factorial(k)) * power.to_numpy()
    return out


def _rational_sqrt(t) -> mpq | None:
    t = rational(t)
    num, den = t.numerator, t.denominator
    if gmpy2.is_square(num) and gmpy2.is_square(den):
        return mpq(gmpy2.isqrt(num), gmpy2.isqrt(den))
    return None


def torus_scaling(H: ExactMatrix, t, Z: ExactMatrix) -> ExactMatrix:
    """Grading action t^{ad(H)/2}: the ad(H)-weight-k part of Z is scaled by t^{k/2}."""
    t = rational(t)
    if t <= 0:
        raise NonSquareScalar("scaling parameter must be positive", t=str(t))
    try:
        spaces = eigenspaces(H)
    except NotSemisimple:
        raise NonIntegralGrading("H is not diagonalizable") from None
    cols, weights = [], []
    for lam, vecs in spaces:
        if lam.im or lam.re.denominator != 1:
            raise NonIntegralGrading(f"H has non-integral eigenvalue {lam}", eigenvalue=str(lam))
        cols.extend(vecs)
        weights.extend([int(lam.re)] * len(vecs))
    Q = ExactMatrix.from_columns(cols)
    Qinv = Q.inverse()
    Zq = (Qinv @ Z @ Q).tolist()
    root_t = None
    n = Z.rows
    for a in range(n):
        for b in range(n):
            x = Zq[a][b]
            if not x:
                continue
            k = weights[a] - weights[b]
            if k % 2 == 0:
                Zq[a][b] = x * t ** (k // 2)
            else:
                if root_t is None:
                    root_t = _rational_sqrt(t)
                    if root_t is None:
                        raise NonSquareScalar(
                            f"odd grading needs a square root of {t}", t=str(t)
                        )
                Zq[a][b] = x * root_t**k
    return Q @ ExactMatrix(Zq) @ Qinv


_EXACT_PHASES = {
    mpq(0): 1.0 + 0j,
    mpq(1, 4): -1j,
    mpq(1, 2): -1.0 + 0j,
    mpq(3, 4): 1j,
}


def phase(lam: GaussianRational) -> complex:
    """exp(-2 pi i lam) with the real part reduced mod 1 exactly first."""
    re_ = lam.re
    frac = re_ - (re_.numerator // re_.denominator)
    base = _EXACT_PHASES.get(frac)
    if base is None:
        base = complex(np.exp(-2j * math.pi * float(frac)))
    if lam.im:
        base *= math.exp(2 * math.pi * float(lam.im))
    return base


def phase_exp(d: ExactMatrix) -> np.ndarray:
    """exp(-2 pi i d) for a diagonalizable d with exactly known eigenvalues."""
    spaces = eigenspaces(d)
    cols, vals = [], []
    for lam, vecs in spaces:
        cols.extend(vecs)
        vals.extend([phase(lam)] * len(vecs))
    P = ExactMatrix.from_columns(cols)
    if P == ExactMatrix.identity(d.rows):
        return np.diag(np.array(vals, dtype=complex))
    return P.to_numpy() @ np.diag(np.array(vals, dtype=complex)) @ P.inverse().to_numpy()


__all__ = [
    "JordanPair",
    "SlTwoTriple",
    "check_triple",
    "eigenspaces",
    "jordan_chains",
    "jordan_decompose",
    "nilpotent_exp",
    "nilpotent_exp_numeric",
    "phase",
    "phase_exp",
    "sl2_completion",
    "torus_scaling",
    "triple_on_subspaces",
]
