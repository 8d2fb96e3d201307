import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import E, L, M, z_diag
from parahoric_lab.errors import SchemaError, TruncationTooShallow
from parahoric_lab.exact import ExactMatrix
from parahoric_lab.laurent import (
    LaurentMatrix,
    default_trunc,
    determinant,
    laurent_inverse,
    laurent_multiply,
    log_derivative,
)

I2 = ExactMatrix.identity(2)


class TestMultiply:
    def test_inverse_powers_cancel(self):
        zI = LaurentMatrix.monomial(I2, 1)
        assert laurent_multiply(zI, LaurentMatrix.monomial(I2, -1)) == LaurentMatrix.identity(2)

    def test_diagonal_product(self):
        assert laurent_multiply(z_diag(1, 0), z_diag(0, 1)) == z_diag(1, 1)

    def test_nilpotent_square(self):
        a = L(2, {0: I2, 1: E(2, 1, 2)})
        b = L(2, {0: I2, 1: E(2, 1, 2, -1)})
        prod = laurent_multiply(a, b)
        assert prod.trunc is None and prod == LaurentMatrix.identity(2)

    def test_truncation_rule(self):
        a = L(2, {0: I2, 1: E(2, 1, 2)}, trunc=5)
        b = L(2, {-1: I2}, trunc=3)
        # min(5 + (-1), 3 + 0)
        assert laurent_multiply(a, b).trunc == 3 + 0
        c = L(2, {2: I2}, trunc=4)
        assert laurent_multiply(a, c).trunc == min(5 + 2, 4 + 0)

    def test_valuation_superadditive(self):
        a = L(2, {1: E(2, 1, 2), 2: I2})
        b = L(2, {-1: E(2, 2, 1), 3: I2})
        assert laurent_multiply(a, b).valuation() >= a.valuation() + b.valuation()


class TestInverse:
    def test_diagonal(self):
        assert laurent_inverse(z_diag(1, -1)) == z_diag(-1, 1)

    def test_terminating_geometric_series(self):
        g = L(2, {0: I2, -1: E(2, 2, 1)})
        assert laurent_inverse(g) == L(2, {0: I2, -1: E(2, 2, 1, -1)})

    def test_higgs_gauge_round_trip(self):
        g = laurent_multiply(LaurentMatrix.constant(M([[-1, 1], [1, 1]])), z_diag(0, 1))
        assert laurent_multiply(g, laurent_inverse(g)).agrees_with(LaurentMatrix.identity(2))

    def test_series_inverse_truncates(self):
        g = L(2, {0: I2, 1: I2})  # (1 + z) I
        inv = laurent_inverse(g, order=6)
        assert inv.trunc == 6
        assert inv.coefficient(5) == I2.scale(-1)
        assert laurent_multiply(g, inv).agrees_with(LaurentMatrix.identity(2))

    def test_determinant(self):
        terms, trunc = determinant(z_diag(2, -1))
        assert trunc is None and list(terms) == [1]


class TestLogDerivative:
    def test_z(self):
        assert log_derivative(z_diag(1, 0)) == LaurentMatrix.constant(ExactMatrix.diag([1, 0]))

    def test_constant(self):
        assert log_derivative(LaurentMatrix.constant(M([[2, 1], [1, 1]]))) == LaurentMatrix.zero(2)

    def test_parity_witness(self):
        assert log_derivative(z_diag(-1, 1)) == LaurentMatrix.constant(ExactMatrix.diag([-1, 1]))


class TestStorage:
    def test_zero_terms_dropped_and_trunc_respected(self):
        a = L(2, {0: ExactMatrix.zeros(2), 1: I2, 9: I2}, trunc=4)
        assert list(a.terms) == [1] and a.valuation() == 1

    def test_coefficient_above_truncation(self):
        a = L(2, {0: I2}, trunc=2)
        assert a.coefficient(2).is_zero()
        with pytest.raises(TruncationTooShallow):
            a.coefficient(3)

    def test_default_trunc_env(self, monkeypatch):
        monkeypatch.delenv("PARAHORIC_LAB_DEFAULT_TRUNC", raising=False)
        assert default_trunc() == 12
        monkeypatch.setenv("PARAHORIC_LAB_DEFAULT_TRUNC", "20")
        assert default_trunc() == 20
        monkeypatch.setenv("PARAHORIC_LAB_DEFAULT_TRUNC", "lots")
        with pytest.raises(SchemaError):
            default_trunc()

    def test_evaluate(self):
        a = L(2, {-1: I2, 1: E(2, 1, 2)})
        v = a.evaluate(0.5)
        assert v[0, 0] == pytest.approx(2.0) and v[0, 1] == pytest.approx(0.5)


small = st.integers(-2, 2)


@st.composite
def unipotent_like(draw):
    """(I + upper at any order)(I + lower at positive order)."""
    up = LaurentMatrix.monomial(ExactMatrix.unit(2, 0, 1, draw(small) or 1), draw(st.integers(-2, 2)), 10)
    low = LaurentMatrix.monomial(ExactMatrix.unit(2, 1, 0, draw(small) or 1), draw(st.integers(1, 3)), 10)
    one = LaurentMatrix.identity(2)
    # (I + u)(I + l) is invertible with inverse (I - l)(I - u)
    return laurent_multiply(one + up, one + low)


@given(unipotent_like(), unipotent_like())
def test_inverse_of_product(g, h):
    lhs = laurent_inverse(laurent_multiply(g, h))
    rhs = laurent_multiply(laurent_inverse(h), laurent_inverse(g))
    assert lhs.agrees_with(rhs)


@given(unipotent_like(), unipotent_like())
def test_log_derivative_cocycle(g, h):
    lhs = log_derivative(laurent_multiply(g, h))
    ginv = laurent_inverse(g)
    rhs = log_derivative(g) + laurent_multiply(laurent_multiply(g, log_derivative(h)), ginv)
    assert lhs.agrees_with(rhs)
