"""Local Dolbeault / de Rham / Betti data at a tame puncture.

Given a weight ``alpha`` and a residue ``phi`` in the Levi of ``alpha``,
with Jordan decomposition ``phi = s + Y`` and a triple ``(X, H, Y)``
commuting with ``s``::

    beta   = alpha - (s + conj(s))
    gamma  = -(s + conj(s))
    nabla  = alpha + (s - conj(s)) - (H + X - Y)
    M      = exp(-2 pi i (alpha + s - conj(s))) exp(2 pi i (H + X - Y))

Everything is computed in an adapted basis where ``alpha`` and ``s`` are
diagonal and the triple is in standard block form; the conjugator to that
basis is part of every output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import LeviViolation, NumericError, SizeMismatch, TracelessViolation
from .exact import I, ExactMatrix, GaussianRational, bracket
from .residue import (
    JordanPair,
    SlTwoTriple,
    eigenspaces,
    jordan_decompose,
    nilpotent_exp_numeric,
    phase_exp,
    triple_on_subspaces,
)
from .roots import ParabolicDescriptor, Weight, parabolic_from_weight

TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class AdaptedData:
    """Residue data in the adapted basis (columns of ``conjugator``)."""

    conjugator: ExactMatrix
    s_diagonal: tuple  # eigenvalue of s on each adapted basis vector
    jordan: JordanPair
    triple: SlTwoTriple  # in the adapted basis

    @property
    def n(self) -> int:
        return len(self.s_diagonal)


@dataclass(frozen=True)
class DolbeaultLocalDatum:
    alpha: Weight
    residue: ExactMatrix

    def __post_init__(self):
        n = self.alpha.group.n
        if self.residue.shape != (n, n):
            raise SizeMismatch(f"residue of shape {self.residue.shape} for {self.alpha.group}")
        if not bracket(self.alpha.as_matrix(), self.residue).is_zero():
            raise LeviViolation("residue does not commute with diag(alpha)")
        if self.alpha.group.is_sl and self.residue.trace():
            raise TracelessViolation("SL residue must be traceless")

    @cached_property
    def adapted(self) -> AdaptedData:
        return _adapt(self.alpha, self.residue)

    @property
    def jordan(self) -> JordanPair:
        return self.adapted.jordan

    @property
    def triple(self) -> SlTwoTriple:
        """The triple transported back to the original basis."""
        P = self.adapted.conjugator
        Pinv = P.inverse()
        t = self.adapted.triple
        return SlTwoTriple(P @ t.X @ Pinv, P @ t.H @ Pinv, P @ t.Y @ Pinv, P, t.chain_lengths)


@dataclass(frozen=True)
class DeRhamLocalDatum:
    beta: Weight
    residue: ExactMatrix  # nabla_beta, in the adapted basis
    conjugator: ExactMatrix

    def sigma(self) -> ExactMatrix:
        """Imaginary part of the semisimple part of the residue."""
        jp = jordan_decompose(self.residue)
        P = jp.basis
        im = ExactMatrix.diag([GaussianRational(0, lam.im) for lam in jp.spectrum])
        return P @ im @ P.inverse()


@dataclass(frozen=True)
class BettiLocalDatum:
    gamma: Weight
    monodromy: np.ndarray
    phase_diagonal: ExactMatrix  # alpha + s - conj(s), exact
    unipotent_generator: ExactMatrix  # H + X - Y, exact nilpotent
    parabolic: ParabolicDescriptor
    conjugator: ExactMatrix

    @property
    def monodromy_levi(self) -> np.ndarray:
        return self.monodromy


def _adapt(alpha: Weight, phi: ExactMatrix) -> AdaptedData:
    n = alpha.group.n
    jp = jordan_decompose(phi)
    s, y = jp.semisimple, jp.nilpotent
    # joint eigenspaces of s and diag(alpha), grouped by alpha-level set so the
    # adapted basis vectors can be placed at coordinates with the same alpha
    levels: dict = {}
    for i, a in enumerate(alpha.entries):
        levels.setdefault(a, []).append(i)
    spaces, space_vals, placement = [], [], []
    for a, idx in levels.items():
        sub = s.submatrix(idx, idx)
        for lam, vecs in eigenspaces(sub):
            full = []
            for v in vecs:
                w = [GaussianRational(0)] * n
                for local, c in zip(idx, v):
                    w[local] = c
                full.append(w)
            spaces.append(full)
            space_vals.append(lam)
            placement.append(a)
    trip = triple_on_subspaces(y, spaces)
    # triple_on_subspaces orders chain vectors subspace by subspace; reorder so
    # the k-th basis vector lives in the alpha-level of coordinate k
    P0 = trip.basis_change
    lam_of_col, level_of_col = [], []
    col = 0
    for space, lam, a in zip(spaces, space_vals, placement):
        for _ in space:
            lam_of_col.append(lam)
            level_of_col.append(a)
            col += 1
    # columns of P0 are grouped by subspace; chain order inside is preserved
    queues: dict = {}
    for c, a in enumerate(level_of_col):
        queues.setdefault(a, []).append(c)
    order = [queues[a].pop(0) for a in alpha.entries]
    perm = ExactMatrix([[1 if order[j] == i else 0 for j in range(n)] for i in range(n)])
    P = P0 @ perm
    Pinv = P.inverse()
    t_ad = SlTwoTriple(Pinv @ trip.X @ P, Pinv @ trip.H @ P, Pinv @ trip.Y @ P, ExactMatrix.identity(n), trip.chain_lengths)
    s_diag = tuple(lam_of_col[c] for c in order)
    assert (Pinv @ s @ P) == ExactMatrix.diag(s_diag)
    assert (Pinv @ alpha.as_matrix() @ P) == alpha.as_matrix()
    return AdaptedData(P, s_diag, jp, t_ad)


def _nilpotent_generator(ad: AdaptedData) -> ExactMatrix:
    t = ad.triple
    return t.H + t.X - t.Y


def dolbeault_to_derham(d: DolbeaultLocalDatum) -> DeRhamLocalDatum:
    ad = d.adapted
    re2 = [2 * lam.re for lam in ad.s_diagonal]
    beta = Weight(d.alpha.group, tuple(a - r for a, r in zip(d.alpha.entries, re2)))
    diag = ExactMatrix.diag(
        [GaussianRational(a) + I * (2 * lam.im) for a, lam in zip(d.alpha.entries, ad.s_diagonal)]
    )
    nabla = diag - _nilpotent_generator(ad)
    return DeRhamLocalDatum(beta, nabla, ad.conjugator)


def dolbeault_to_betti(d: DolbeaultLocalDatum) -> BettiLocalDatum:
    ad = d.adapted
    gamma = Weight(d.alpha.group, tuple(-2 * lam.re for lam in ad.s_diagonal))
    D = ExactMatrix.diag(
        [GaussianRational(a) + I * (2 * lam.im) for a, lam in zip(d.alpha.entries, ad.s_diagonal)]
    )
    N = _nilpotent_generator(ad)
    if not bracket(D, N).is_zero():
        raise LeviViolation("phase and unipotent factors do not commute")
    M = phase_exp(D) @ nilpotent_exp_numeric(N, TWO_PI_I)
    return BettiLocalDatum(gamma, M, D, N, parabolic_from_weight(gamma), ad.conjugator)


def derham_to_betti_constant(a: ExactMatrix) -> np.ndarray:
    """exp(-2 pi i a) through the commuting Jordan factors of ``a``."""
    jp = jordan_decompose(a)
    return phase_exp(jp.semisimple) @ nilpotent_exp_numeric(jp.nilpotent, -TWO_PI_I)


@dataclass
class TableRow:
    dolbeault: DolbeaultLocalDatum
    derham: DeRhamLocalDatum
    betti: BettiLocalDatum
    consistency_deviation: float = 0.0
    notes: list = field(default_factory=list)


def table_row(d: DolbeaultLocalDatum, tol: float = 1e-10) -> TableRow:
    """Both table maps, plus the check M = exp(-2 pi i nabla)."""
    dr = dolbeault_to_derham(d)
    bt = dolbeault_to_betti(d)
    direct = derham_to_betti_constant(dr.residue)
    scale = max(1.0, float(np.max(np.abs(direct))))
    dev = float(np.max(np.abs(direct - bt.monodromy))) / scale
    if dev > tol:
        raise NumericError(
            "table monodromy disagrees with exp(-2 pi i nabla)", deviation=dev, tol=tol
        )
    return TableRow(d, dr, bt, dev)


__all__ = [
    "AdaptedData",
    "BettiLocalDatum",
    "DeRhamLocalDatum",
    "DolbeaultLocalDatum",
    "TableRow",
    "derham_to_betti_constant",
    "dolbeault_to_betti",
    "dolbeault_to_derham",
    "table_row",
]
