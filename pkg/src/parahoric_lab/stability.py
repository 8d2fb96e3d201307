"""Parahoric degrees, the mu-invariant and R-stability verdicts.

Reductions of structure group are supplied as data: a standard parabolic
plus the degrees ``d_i`` of the block-determinant line bundles, so that
``deg L(chi) = sum_i c_i d_i`` for ``chi = prod det_i^{c_i}``.  Verdicts are
therefore relative to the supplied reductions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from gmpy2 import mpq

from .errors import IncompatibleParabolic, InconsistentDegrees, SchemaError
from .exact import Rational
from .roots import (
    CharacterDescriptor,
    GroupDescriptor,
    ParabolicDescriptor,
    Weight,
    fundamental_antidominant_characters,
)

COMPATIBILITY_TAGS = ("plain", "higgs", "connection", "local_system")
MODES = ("torsor", "higgs", "connection", "local_system")

# reductions counted in each stability mode
MODE_ACCEPTS = {
    "torsor": {"plain", "higgs", "connection"},
    "higgs": {"higgs"},
    "connection": {"connection"},
    "local_system": {"local_system"},
}


@dataclass(frozen=True)
class ReductionDatum:
    parabolic: ParabolicDescriptor
    line_degrees: tuple
    compatible_with: str = "plain"
    levi_ledger: "DegreeLedger | None" = None

    def __post_init__(self):
        degs = tuple(self.line_degrees)
        if any(isinstance(d, bool) or int(d) != d for d in degs):
            raise SchemaError("line degrees must be integers")
        object.__setattr__(self, "line_degrees", tuple(int(d) for d in degs))
        if len(degs) != self.parabolic.k:
            raise SchemaError(f"{len(degs)} line degrees for {self.parabolic.k} blocks")
        if self.compatible_with not in COMPATIBILITY_TAGS:
            raise SchemaError(f"unknown compatibility tag {self.compatible_with!r}")

    def line_degree(self, chi: CharacterDescriptor) -> int:
        _check_same_parabolic(self.parabolic, chi)
        return sum(c * d for c, d in zip(chi.block_values, self.line_degrees))


@dataclass(frozen=True)
class DegreeLedger:
    group: GroupDescriptor
    weights: Mapping  # puncture id -> Weight
    reductions: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "weights", dict(self.weights))
        object.__setattr__(self, "reductions", tuple(self.reductions))
        for x, w in self.weights.items():
            if w.group != self.group:
                raise SchemaError(f"weight at {x!r} belongs to {w.group}, ledger is {self.group}")
        for r in self.reductions:
            if r.parabolic.group != self.group:
                raise SchemaError("reduction parabolic belongs to another group")


@dataclass
class StabilityVerdict:
    classification: str
    witnesses: list  # (reduction index, CharacterDescriptor, degree)
    evaluations: list = field(default_factory=list)
    conditional: bool = False
    mode: str = "torsor"

    def to_json(self) -> dict:
        return {
            "classification": self.classification,
            "conditional": self.conditional,
            "mode": self.mode,
            "witnesses": [_eval_json(w) for w in self.witnesses],
            "evaluations": [_eval_json(w) for w in self.evaluations],
        }


def _eval_json(item) -> dict:
    idx, chi, deg = item
    return {
        "reduction": idx,
        "blocks": list(chi.parabolic.block_sizes),
        "values": list(chi.block_values),
        "degree": _fmt(deg),
    }


def _fmt(q) -> str:
    q = mpq(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _check_same_parabolic(p: ParabolicDescriptor, chi: CharacterDescriptor):
    if chi.parabolic.block_sizes != p.block_sizes or chi.parabolic.group != p.group:
        raise IncompatibleParabolic(
            f"character on blocks {list(chi.parabolic.block_sizes)} for parabolic {list(p.block_sizes)}"
        )


def _standard_weight(theta: Weight, parabolic: ParabolicDescriptor) -> list[Rational]:
    """theta in the standard frame of the parabolic (applying its conjugator)."""
    if theta.group.n != parabolic.group.n:
        raise IncompatibleParabolic(f"weight for {theta.group} on a parabolic of {parabolic.group}")
    c = parabolic.conjugator
    if c is None:
        return list(theta.entries)
    m = c @ theta.as_matrix() @ c.inverse()
    if not m.is_diagonal() or not m.is_real():
        raise IncompatibleParabolic("conjugator does not carry theta to a diagonal weight")
    return [x.re for x in m.diagonal()]


def weight_character_pairing(theta: Weight, chi: CharacterDescriptor) -> Rational:
    """<theta, chi> = sum_i c_i * (sum of theta over block i)."""
    vals = _standard_weight(theta, chi.parabolic)
    total = mpq(0)
    for rng, c in zip(chi.parabolic.block_ranges(), chi.block_values):
        total += c * sum((vals[k] for k in rng), mpq(0))
    return total


def parahoric_degree(ledger: DegreeLedger, reduction: ReductionDatum, chi: CharacterDescriptor) -> Rational:
    """deg L(reduction, chi) + sum over punctures of <theta_x, chi>."""
    _check_same_parabolic(reduction.parabolic, chi)
    return mpq(reduction.line_degree(chi)) + sum(
        (weight_character_pairing(w, chi) for w in ledger.weights.values()), mpq(0)
    )


def local_degree(ledger: DegreeLedger, chi: CharacterDescriptor) -> Rational:
    """deg^loc = sum over punctures of <gamma_x, chi> (no line-bundle term)."""
    return sum((weight_character_pairing(w, chi) for w in ledger.weights.values()), mpq(0))


def _as_degree_list(trivial_reduction_degrees) -> list[tuple[int, int]]:
    if isinstance(trivial_reduction_degrees, Mapping):
        items = list(trivial_reduction_degrees.items())
    else:
        items = list(trivial_reduction_degrees)
    return [(int(k), int(d)) for k, d in items]


def mu_invariant(ledger: DegreeLedger, trivial_reduction_degrees: Sequence | Mapping = ()) -> Weight:
    """Central mu with <mu, kappa> = parh deg(kappa) for characters of G.

    ``trivial_reduction_degrees`` lists pairs ``(k, deg L(det^k))``.  For SL
    there are no nontrivial characters and mu = 0.
    """
    group = ledger.group
    if group.is_sl:
        return Weight.zero(group)
    n = group.n
    whole = ParabolicDescriptor(group, (n,))
    pairs = _as_degree_list(trivial_reduction_degrees)
    if not any(k for k, _ in pairs):
        raise SchemaError("mu needs the degree of a nontrivial character (a power of det)")
    value = None
    for k, d in pairs:
        chi = CharacterDescriptor(whole, (k,))
        deg = mpq(d) + sum((weight_character_pairing(w, chi) for w in ledger.weights.values()), mpq(0))
        if k == 0:
            if deg != 0:
                raise InconsistentDegrees("the trivial character has nonzero degree", degree=_fmt(deg))
            continue
        cand = deg / (k * n)
        if value is None:
            value = cand
        elif cand != value:
            raise InconsistentDegrees(
                "degrees of powers of det disagree", first=_fmt(value), second=_fmt(cand)
            )
    return Weight(group, (value,) * n)


def is_degree_zero(ledger: DegreeLedger, trivial_reduction_degrees: Sequence | Mapping = ()) -> bool:
    return mu_invariant(ledger, trivial_reduction_degrees).is_zero()


def _reduction_degrees(ledger: DegreeLedger, red: ReductionDatum, local: bool):
    out = []
    for chi in fundamental_antidominant_characters(red.parabolic):
        deg = local_degree(ledger, chi) if local else parahoric_degree(ledger, red, chi)
        out.append((chi, deg))
    return out


def is_admissible_reduction(ledger: DegreeLedger, reduction: ReductionDatum, local: bool = False) -> bool:
    """Degree vanishes on every fundamental anti-dominant character."""
    return all(deg == 0 for _, deg in _reduction_degrees(ledger, reduction, local))


def stability_verdict(ledger: DegreeLedger, mode: str = "torsor") -> StabilityVerdict:
    """Classify over the supplied reductions that are compatible with ``mode``."""
    mode = mode.replace("-", "_")
    if mode not in MODES:
        raise SchemaError(f"unknown stability mode {mode!r}", mode=mode)
    local = mode == "local_system"
    accepted = MODE_ACCEPTS[mode]
    evaluations = []
    for idx, red in enumerate(ledger.reductions):
        if red.compatible_with not in accepted or red.parabolic.is_whole_group():
            continue
        for chi, deg in _reduction_degrees(ledger, red, local):
            evaluations.append((idx, chi, deg))
    negative = [e for e in evaluations if e[2] < 0]
    zero = [e for e in evaluations if e[2] == 0]
    conditional = not evaluations
    if negative:
        return StabilityVerdict("unstable", negative, evaluations, conditional, mode)
    if not zero:
        return StabilityVerdict("stable", [], evaluations, conditional, mode)
    for idx, red in enumerate(ledger.reductions):
        if red.compatible_with not in accepted or red.parabolic.is_whole_group():
            continue
        if red.levi_ledger is None or not is_admissible_reduction(ledger, red, local):
            continue
        inner = stability_verdict(red.levi_ledger, mode)
        if inner.classification in ("stable", "polystable-certified"):
            return StabilityVerdict("polystable-certified", zero, evaluations, conditional, mode)
    return StabilityVerdict("semistable-not-stable", zero, evaluations, conditional, mode)


__all__ = [
    "DegreeLedger",
    "MODES",
    "ReductionDatum",
    "StabilityVerdict",
    "is_admissible_reduction",
    "is_degree_zero",
    "local_degree",
    "mu_invariant",
    "parahoric_degree",
    "stability_verdict",
    "weight_character_pairing",
]
