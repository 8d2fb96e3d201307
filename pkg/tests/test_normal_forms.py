import time

import pytest
from gmpy2 import mpq

from helpers import E, L, M, W, z_diag
from parahoric_lab.errors import DomainError, Inconclusive, TracelessViolation, TruncationTooShallow
from parahoric_lab.exact import ExactMatrix
from parahoric_lab.laurent import LaurentMatrix, laurent_multiply
from parahoric_lab.normal_forms import is_constant_equivalent, normalize, shearing_cocharacters
from parahoric_lab.parahoric import gauge_action
from parahoric_lab.roots import GL, SL


def parity_form(m, trunc=None):
    h = mpq(m, 2)
    return L(2, {0: ExactMatrix.diag([h, -h]), m: E(2, 1, 2)}, trunc)


class TestNormalize:
    def test_constant(self):
        a = M([[1, 2], [0, 3]])
        nf = normalize(LaurentMatrix.constant(a), GL(2))
        assert nf.b0 == a and nf.steps == [] and nf.is_constant()

    def test_resonant_term_kept(self):
        A = L(2, {0: ExactMatrix.diag([mpq(1, 2), mpq(-1, 2)]), 1: E(2, 1, 2)})
        nf = normalize(A, GL(2))
        assert nf.b_terms[1] == E(2, 1, 2)
        assert nf.resonance_orders == {1} and nf.check_brackets()

    def test_non_resonant_removed(self):
        A = L(2, {0: ExactMatrix.diag([mpq(1, 4), mpq(-1, 4)]), 1: E(2, 1, 2)})
        nf = normalize(A, GL(2))
        assert nf.is_constant() and nf.b0 == ExactMatrix.diag([mpq(1, 4), mpq(-1, 4)])
        assert nf.gauge_witness == L(2, {0: ExactMatrix.identity(2), 1: E(2, 1, 2, -2)})
        back = gauge_action(nf.gauge_witness, A, inverse=nf.witness_inverse)
        assert back.agrees_with(LaurentMatrix.constant(nf.b0), nf.max_order)

    def test_witness_inverse(self):
        A = L(3, {0: M([[1, 1, 0], [0, 1, 0], [0, 0, 0]]), 1: M([[1, 2, 3], [4, 5, 6], [7, 8, 9]])})
        nf = normalize(A, GL(3))
        one = laurent_multiply(nf.gauge_witness, nf.witness_inverse)
        assert one.agrees_with(LaurentMatrix.identity(3), nf.max_order)
        assert nf.check_brackets()

    def test_semisimple_split(self):
        A = L(2, {0: ExactMatrix.diag([mpq(1, 2), mpq(-1, 2)]), 1: E(2, 1, 2)})
        nf = normalize(A, GL(2))
        assert nf.nabla_part + nf.sigma_part + nf.nilpotent_part() == nf.b0
        assert nf.beta() == W(GL(2), "1/2", "-1/2")

    def test_pole_rejected(self):
        with pytest.raises(DomainError):
            normalize(L(2, {-1: E(2, 1, 2)}), GL(2))

    def test_traceless(self):
        with pytest.raises(TracelessViolation):
            normalize(LaurentMatrix.constant(ExactMatrix.identity(2)), SL(2))

    def test_truncation(self):
        with pytest.raises(TruncationTooShallow):
            normalize(parity_form(4, trunc=2), SL(2))
        with pytest.raises(TruncationTooShallow):
            normalize(parity_form(2, trunc=5), SL(2), max_order=9)


class TestShearing:
    def test_no_resonance(self):
        nf = normalize(LaurentMatrix.constant(ExactMatrix.diag([1, 5])), GL(2))
        assert [w.is_zero() for w in shearing_cocharacters(GL(2), nf)] == [True]

    def test_even(self):
        nf = normalize(parity_form(2), SL(2))
        assert W(SL(2), -1, 1) in shearing_cocharacters(SL(2), nf)

    def test_odd(self):
        nf = normalize(parity_form(3), SL(2))
        assert shearing_cocharacters(SL(2), nf) == []


class TestConstantEquivalence:
    def test_even_sl2(self):
        ok, g, c = is_constant_equivalent(parity_form(2), SL(2))
        assert ok and g == z_diag(-1, 1) and c == E(2, 1, 2)

    def test_odd_sl2(self):
        assert is_constant_equivalent(parity_form(1), SL(2)) == (False, None, None)

    def test_gl2_m4(self):
        ok, g, c = is_constant_equivalent(parity_form(4), GL(2))
        assert ok
        result = gauge_action(g, parity_form(4))
        assert result.agrees_with(LaurentMatrix.constant(c), 8)

    @pytest.mark.parametrize("m", range(1, 9))
    def test_parity(self, m):
        ok, g, c = is_constant_equivalent(parity_form(m), SL(2))
        assert ok == (m % 2 == 0)
        if ok:
            assert g == z_diag(-m // 2, m // 2)

    def test_sl3_inconclusive(self):
        A = L(
            3,
            {
                0: ExactMatrix.diag([mpq(4, 3), mpq(1, 3), mpq(-5, 3)]),
                1: E(3, 1, 2),
                2: E(3, 2, 3),
            },
        )
        assert is_constant_equivalent(A, GL(3))[0]
        with pytest.raises(Inconclusive):
            is_constant_equivalent(A, SL(3))

    def test_gl3_quadratic_tail(self):
        A = L(3, {1: E(3, 1, 2) + E(3, 2, 1)})
        ok, g, c = is_constant_equivalent(A, GL(3))
        assert ok and c.is_zero()

    def test_parity_runtime(self):
        t0 = time.perf_counter()
        for m in range(1, 9):
            is_constant_equivalent(parity_form(m), SL(2))
        assert time.perf_counter() - t0 < 1.0
