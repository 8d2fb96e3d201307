from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from helpers import E, M, gi, q
from parahoric_lab.errors import ResidueNotSplit, SchemaError
from parahoric_lab.exact import (
    ExactMatrix,
    GaussianRational,
    I,
    bracket,
    eigenvalues,
    format_rational,
    rational,
    split_roots,
)

rationals = st.builds(lambda p, r: mpq(p, r), st.integers(-12, 12), st.integers(1, 6))
gaussians = st.builds(GaussianRational, rationals, rationals)


def square(n):
    return st.lists(st.lists(gaussians, min_size=n, max_size=n), min_size=n, max_size=n).map(ExactMatrix)


class TestRational:
    def test_accepted_forms(self):
        assert rational(3) == 3
        assert rational("-6/4") == mpq(-3, 2)
        assert rational(Fraction(1, 3)) == mpq(1, 3)
        assert rational(" 5 ") == 5

    @pytest.mark.parametrize("bad", ["1/0", "1.5", "x", 0.5, True, None])
    def test_rejected_forms(self, bad):
        with pytest.raises(SchemaError):
            rational(bad)

    def test_format(self):
        assert format_rational(mpq(-3, 6)) == "-1/2"
        assert format_rational(mpq(4, 2)) == "2"


class TestGaussian:
    def test_canonical_form(self):
        x = GaussianRational("2/4", "-3/6")
        assert x.re == mpq(1, 2) and x.re.denominator == 2
        assert x.im == mpq(-1, 2)

    @given(gaussians)
    def test_conjugation_involution(self, x):
        assert x.conj().conj() == x
        assert x.conj().re == x.re and x.conj().im == -x.im

    @given(gaussians, gaussians)
    def test_field_axioms(self, x, y):
        assert x * y == y * x
        assert (x + y) - y == x
        if y:
            assert (x / y) * y == x

    def test_i_squared(self):
        assert I * I == gi(-1)
        assert str(gi("1/2", "3/4")) == "1/2+3/4i"

    def test_real_hash_matches_rational(self):
        assert hash(gi("1/3")) == hash(mpq(1, 3))


class TestMatrix:
    def test_det_inverse_charpoly(self):
        a = M([[2, 1], [1, 1]])
        assert a.det() == 1
        assert a @ a.inverse() == ExactMatrix.identity(2)
        # t^2 - 3t + 1, constant term first
        assert a.charpoly() == [gi(1), gi(-3), gi(1)]

    def test_singular_inverse(self):
        with pytest.raises(ZeroDivisionError):
            M([[1, 2], [2, 4]]).inverse()

    def test_complex_inverse(self):
        a = M([[gi(0, 1), 1], [0, gi(2, -1)]])
        assert a @ a.inverse() == ExactMatrix.identity(2)

    @given(square(3), square(3))
    def test_trace_of_commutator_vanishes(self, a, b):
        assert bracket(a, b).trace() == 0

    @given(square(3))
    def test_charpoly_cayley_hamilton(self, a):
        p = a.charpoly()
        acc = ExactMatrix.zeros(3)
        power = ExactMatrix.identity(3)
        for c in p:
            acc = acc + power.scale(c)
            power = power @ a
        assert acc.is_zero()

    @given(square(2), square(2))
    def test_det_multiplicative(self, a, b):
        assert (a @ b).det() == a.det() * b.det()

    def test_nullspace_and_rank(self):
        a = M([[1, 2, 3], [2, 4, 6]])
        assert a.rank() == 1
        for v in a.nullspace():
            col = ExactMatrix.from_columns([v])
            assert (a @ col).is_zero()

    def test_nilpotent(self):
        n = E(3, 1, 2) + E(3, 2, 3)
        assert n.is_nilpotent() and n.nilpotency_index() == 3


class TestEigen:
    def test_gaussian_eigenvalues(self):
        spec = dict(eigenvalues(M([[0, 1], [-1, 0]])))
        assert spec == {gi(0, 1): 1, gi(0, -1): 1}

    def test_repeated_eigenvalue(self):
        assert eigenvalues(M([[1, 1], [0, 1]])) == [(gi(1), 2)]

    def test_quarter_root_not_rounded(self):
        assert dict(eigenvalues(M([["1/4", 0], [0, 0]]))) == {gi("1/4"): 1, gi(0): 1}

    def test_not_split(self):
        # t^2 - 2
        with pytest.raises(ResidueNotSplit):
            split_roots([gi(-2), gi(0), gi(1)])
        with pytest.raises(ResidueNotSplit):
            eigenvalues(M([[0, 2], [1, 0]]))

    def test_sorted_by_real_then_imaginary(self):
        vals = [lam for lam, _ in eigenvalues(ExactMatrix.diag([gi(0), gi(1), gi(0, 1)]))]
        assert vals == [gi(1), gi(0, 1), gi(0)]


def test_rational_parse_is_exact():
    assert q("7/3") == mpq(7, 3)
