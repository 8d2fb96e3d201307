from fractions import Fraction

import pytest
from gmpy2 import mpq

from helpers import W
from parahoric_lab.errors import IncompatibleParabolic, InconsistentDegrees, SchemaError
from parahoric_lab.exact import ExactMatrix
from parahoric_lab.roots import GL, SL, CharacterDescriptor, ParabolicDescriptor, Weight
from parahoric_lab.stability import (
    DegreeLedger,
    ReductionDatum,
    is_admissible_reduction,
    is_degree_zero,
    local_degree,
    mu_invariant,
    parahoric_degree,
    stability_verdict,
    weight_character_pairing,
)

G2 = GL(2)
B2 = ParabolicDescriptor(G2, (1, 1))
WHOLE2 = ParabolicDescriptor(G2, (2,))


def chi(p, *vals):
    return CharacterDescriptor(p, vals)


class TestPairing:
    def test_central(self):
        th = W(GL(3), "1/2", "1/3", "-1/7")
        assert weight_character_pairing(th, chi(ParabolicDescriptor(GL(3), (3,)), 4)) == 4 * sum(th.entries)

    def test_examples(self):
        assert weight_character_pairing(W(G2, "1/2", "1/4"), chi(B2, 1, 1)) == mpq(3, 4)
        assert weight_character_pairing(W(G2, "1/2", "-1/2"), chi(B2, -1, 1)) == -1

    def test_conjugator(self):
        swap = ParabolicDescriptor(G2, (1, 1), ExactMatrix([[0, 1], [1, 0]]))
        assert weight_character_pairing(W(G2, "1/2", "-1/2"), chi(swap, -1, 1)) == 1

    def test_incompatible(self):
        with pytest.raises(IncompatibleParabolic):
            weight_character_pairing(W(GL(3), 0, 0, 0), chi(B2, -1, 1))


class TestDegree:
    def test_worked_example(self):
        ledger = DegreeLedger(G2, {"x": W(G2, "1/2", "1/4")})
        red = ReductionDatum(WHOLE2, (2,))
        assert parahoric_degree(ledger, red, chi(WHOLE2, 1)) == mpq(11, 4)

    def test_zero_weights(self):
        ledger = DegreeLedger(G2, {"x": Weight.zero(G2), "y": Weight.zero(G2)})
        red = ReductionDatum(B2, (3, -1))
        assert parahoric_degree(ledger, red, chi(B2, -1, 1)) == -4

    def test_gl1(self):
        G1 = GL(1)
        p = ParabolicDescriptor(G1, (1,))
        ledger = DegreeLedger(G1, {"x": W(G1, "1/3"), "y": W(G1, "-5/6")})
        assert parahoric_degree(ledger, ReductionDatum(p, (4,)), chi(p, 1)) == 4 + mpq(1, 3) - mpq(5, 6)

    def test_mismatched_character(self):
        ledger = DegreeLedger(G2, {})
        with pytest.raises(IncompatibleParabolic):
            parahoric_degree(ledger, ReductionDatum(B2, (0, 0)), chi(WHOLE2, 1))


class TestMu:
    def test_sl(self):
        ledger = DegreeLedger(SL(2), {"x": W(SL(2), "1/2", "-1/2")})
        assert mu_invariant(ledger).is_zero() and is_degree_zero(ledger)

    def test_gl2_zero(self):
        ledger = DegreeLedger(G2, {"x": W(G2, "1/2", "-1/2")})
        assert mu_invariant(ledger, [(1, 0)]) == Weight.zero(G2)
        assert is_degree_zero(ledger, {1: 0})

    def test_gl2_one(self):
        ledger = DegreeLedger(G2, {"x": W(G2, "1/2", "1/2")})
        assert mu_invariant(ledger, [(1, 1)]) == W(G2, 1, 1)
        assert not is_degree_zero(ledger, [(1, 1)])

    def test_consistency(self):
        ledger = DegreeLedger(G2, {})
        assert mu_invariant(ledger, [(1, 2), (2, 4)]) == W(G2, 1, 1)
        with pytest.raises(InconsistentDegrees):
            mu_invariant(ledger, [(1, 2), (2, 5)])
        with pytest.raises(SchemaError):
            mu_invariant(ledger, [])

    @pytest.mark.parametrize("k", [-3, -1, 1, 2, 5])
    def test_degree_zero_kills_all_characters(self, k):
        # deg L(det) = -sum(theta) = -1
        ledger = DegreeLedger(GL(3), {"x": W(GL(3), "1/2", "1/4", "1/4")})
        whole = ParabolicDescriptor(GL(3), (3,))
        red = ReductionDatum(whole, (-1,))
        assert is_degree_zero(ledger, [(1, -1)])
        assert parahoric_degree(ledger, red, chi(whole, k)) == 0


class TestVerdict:
    def test_no_reductions(self):
        v = stability_verdict(DegreeLedger(G2, {"x": W(G2, "1/3", 0)}))
        assert v.classification == "stable" and v.conditional

    def test_local_system_unstable(self):
        ledger = DegreeLedger(G2, {"x": W(G2, "1/3", "-1/3")}, [ReductionDatum(B2, (0, 0), "local_system")])
        v = stability_verdict(ledger, "local-system")
        assert v.classification == "unstable"
        (w,) = v.witnesses
        assert w[1].block_values == (-1, 1) and w[2] == mpq(-2, 3)

    def test_local_system_stable(self):
        ledger = DegreeLedger(G2, {"x": W(G2, "-1/3", "1/3")}, [ReductionDatum(B2, (5, -9), "local_system")])
        v = stability_verdict(ledger, "local_system")
        assert v.classification == "stable" and not v.conditional
        assert v.evaluations[0][2] == mpq(2, 3)

    def test_mode_filter(self):
        red = ReductionDatum(B2, (3, 0), "higgs")
        ledger = DegreeLedger(G2, {}, [red])
        assert stability_verdict(ledger, "higgs").classification == "unstable"
        assert stability_verdict(ledger, "connection").conditional
        assert stability_verdict(ledger, "torsor").classification == "unstable"

    def test_polystable(self):
        levi = DegreeLedger(GL(1), {})
        red = ReductionDatum(B2, (0, 0), "plain", levi)
        ledger = DegreeLedger(G2, {}, [red])
        assert stability_verdict(ledger).classification == "polystable-certified"
        bare = DegreeLedger(G2, {}, [ReductionDatum(B2, (0, 0))])
        assert stability_verdict(bare).classification == "semistable-not-stable"

    def test_unknown_mode(self):
        with pytest.raises(SchemaError):
            stability_verdict(DegreeLedger(G2, {}), "crystal")

    def test_json(self):
        import json

        ledger = DegreeLedger(G2, {"x": W(G2, "1/3", "-1/3")}, [ReductionDatum(B2, (0, 0))])
        json.dumps(stability_verdict(ledger).to_json())


class TestAdmissible:
    def test_cancelling_degrees(self):
        # d_i = -(sum over punctures of the block-i weights) = (-1, 1)
        ledger = DegreeLedger(G2, {"x": W(G2, 1, -2), "y": W(G2, 0, 1)})
        red = ReductionDatum(B2, (-1, 1))
        assert is_admissible_reduction(ledger, red)

    def test_half(self):
        ledger = DegreeLedger(G2, {"x": W(G2, "1/4", 0)})
        assert not is_admissible_reduction(ledger, ReductionDatum(B2, (0, 0)))

    def test_whole_group(self):
        ledger = DegreeLedger(G2, {})
        assert is_admissible_reduction(ledger, ReductionDatum(WHOLE2, (0,)))


def slope_classify(d_total, subs, weights):
    """Independent GL2 parabolic slope test.

    ``subs`` lists degrees of line subbundles, each sitting in the first
    coordinate of the standard flag; ``weights`` lists (a_x, b_x).
    """
    pardeg_e = Fraction(d_total) + sum(Fraction(a) + Fraction(b) for a, b in weights)
    classes = []
    for d_l in subs:
        pardeg_l = Fraction(d_l) + sum(Fraction(a) for a, _ in weights)
        diff = pardeg_e / 2 - pardeg_l
        classes.append(diff)
    if any(c < 0 for c in classes):
        return "unstable"
    if any(c == 0 for c in classes):
        return "semistable"
    return "stable"


SLOPE_CORPUS = [
    (0, [-1], []),
    (0, [0], []),
    (0, [1], []),
    (1, [0], []),
    (1, [1], []),
    (0, [0], [("1/3", 0)]),
    (0, [0], [(0, "1/3")]),
    (-1, [-1, -2], [("1/2", 0)]),
    (2, [1], [("1/4", "1/4"), ("1/3", "2/3")]),
    (3, [1, 2], [("0", "1/2")]),
]


@pytest.mark.parametrize("case", SLOPE_CORPUS)
def test_gl2_slope_checker_agrees(case):
    d_total, subs, weights = case
    ws = {f"x{k}": W(G2, a, b) for k, (a, b) in enumerate(weights)}
    reds = [ReductionDatum(B2, (d, d_total - d)) for d in subs]
    got = stability_verdict(DegreeLedger(G2, ws, reds)).classification
    expect = slope_classify(d_total, subs, weights)
    assert {"semistable-not-stable": "semistable", "polystable-certified": "semistable"}.get(got, got) == expect


def test_local_degree_drops_line_bundle():
    ledger = DegreeLedger(G2, {"x": W(G2, "1/3", "-1/3")})
    red = ReductionDatum(B2, (7, -7))
    c = chi(B2, -1, 1)
    assert local_degree(ledger, c) == parahoric_degree(ledger, red, c) - red.line_degree(c)
