import cmath
import itertools

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from helpers import E, M, gi
from parahoric_lab.errors import DoesNotCommute, NonIntegralGrading, NonSquareScalar, NotNilpotent
from parahoric_lab.exact import ExactMatrix, bracket
from parahoric_lab.residue import (
    check_triple,
    jordan_decompose,
    nilpotent_exp,
    phase_exp,
    sl2_completion,
    torus_scaling,
)
from parahoric_lab.sampling import nilpotent_of_shape, partitions, random_split_matrix, spawn

I2 = ExactMatrix.identity(2)
N2 = M([[1, 1], [-1, -1]])


class TestJordan:
    def test_unipotent(self):
        jp = jordan_decompose(M([[1, 1], [0, 1]]))
        assert jp.semisimple == I2 and jp.nilpotent == E(2, 1, 2)

    def test_nilpotent(self):
        jp = jordan_decompose(N2)
        assert jp.semisimple.is_zero() and jp.nilpotent == N2

    def test_rotation(self):
        a = M([[0, 1], [-1, 0]])
        jp = jordan_decompose(a)
        assert jp.semisimple == a and jp.nilpotent.is_zero()
        P = jp.basis
        assert (P.inverse() @ jp.semisimple @ P).is_diagonal()
        assert set(jp.spectrum) == {gi(0, 1), gi(0, -1)}

    def test_diagonal_input_keeps_identity_basis(self):
        jp = jordan_decompose(ExactMatrix.diag([1, 1, 2]))
        assert jp.basis == ExactMatrix.identity(3)
        # equal eigenvalues are grouped, so an interleaved diagonal is permuted
        jp = jordan_decompose(ExactMatrix.diag([1, 2, 1]))
        assert jp.spectrum == (gi(1), gi(1), gi(2))

    @pytest.mark.parametrize("seed", range(12))
    def test_random(self, seed):
        (rng,) = spawn(seed, 1)
        a = random_split_matrix(rng, 4)
        jp = jordan_decompose(a)
        assert jp.semisimple + jp.nilpotent == a
        assert bracket(jp.semisimple, jp.nilpotent).is_zero()
        assert jp.nilpotent.is_nilpotent()


class TestTriple:
    def test_standard(self):
        t = sl2_completion(E(2, 2, 1))
        assert t.X == E(2, 1, 2) and t.H == ExactMatrix.diag([1, -1])

    def test_zero(self):
        t = sl2_completion(ExactMatrix.zeros(2))
        assert t.X.is_zero() and t.H.is_zero() and t.Y.is_zero()

    def test_regular_3x3(self):
        y = E(3, 2, 1) + E(3, 3, 2)
        t = sl2_completion(y)
        assert t.H == ExactMatrix.diag([2, 0, -2])
        assert t.X == E(3, 1, 2, 2) + E(3, 2, 3, 2)
        assert check_triple(t)

    @pytest.mark.parametrize("shape", [p for n in range(1, 6) for p in partitions(n)])
    def test_all_shapes(self, shape):
        (rng,) = spawn(sum(shape) * 31 + len(shape), 1)
        y, Q = nilpotent_of_shape(rng, shape)
        t = sl2_completion(y)
        assert check_triple(t) and t.Y == y
        assert sorted(t.chain_lengths, reverse=True) == list(shape)

    def test_commuting_semisimple(self):
        y = E(3, 2, 1)
        s = ExactMatrix.diag([1, 1, 5])
        t = sl2_completion(y, s)
        assert bracket(t.X, s).is_zero() and bracket(t.H, s).is_zero()

    def test_errors(self):
        with pytest.raises(NotNilpotent):
            sl2_completion(I2)
        with pytest.raises(DoesNotCommute):
            sl2_completion(E(2, 2, 1), ExactMatrix.diag([1, 2]))


class TestExp:
    def test_zero(self):
        assert nilpotent_exp(ExactMatrix.zeros(3), 5) == ExactMatrix.identity(3)

    @pytest.mark.parametrize("c", ["0", "1", "-1", "1/2", "-7/3"])
    def test_square_zero(self, c):
        assert nilpotent_exp(N2, mpq(c)) == I2 + N2.scale(mpq(c))

    def test_regular_3x3(self):
        n = E(3, 1, 2) + E(3, 2, 3)
        e = nilpotent_exp(n)
        assert e == ExactMatrix.identity(3) + n + (n @ n).scale(mpq(1, 2))
        assert e @ nilpotent_exp(n, -1) == ExactMatrix.identity(3)

    def test_gaussian_coefficient(self):
        assert nilpotent_exp(E(2, 1, 2), gi(0, 2)) == I2 + E(2, 1, 2).scale(gi(0, 2))

    def test_not_nilpotent(self):
        with pytest.raises(NotNilpotent):
            nilpotent_exp(I2)


class TestScaling:
    t = sl2_completion(E(2, 2, 1))

    def test_centralizer_fixed(self):
        z = ExactMatrix.diag([3, 7])
        assert torus_scaling(self.t.H, 9, z) == z

    @pytest.mark.parametrize("s", ["1/4", "4", "9/25", "2", "3/7"])
    def test_grading(self, s):
        s = mpq(s)
        assert torus_scaling(self.t.H, s, self.t.Y) == self.t.Y.scale(1 / s)
        assert torus_scaling(self.t.H, s, self.t.X) == self.t.X.scale(s)

    def test_odd_grading_needs_square(self):
        t3 = sl2_completion(E(3, 2, 1) + E(3, 3, 2))
        z = E(3, 1, 2)  # ad(H)-weight 2 on the regular triple: no root needed
        assert torus_scaling(t3.H, 4, z) == z.scale(4)
        tw = sl2_completion(E(2, 2, 1))
        odd = ExactMatrix.diag([1, 0])
        h_odd = ExactMatrix.diag([1, 0])
        with pytest.raises(NonSquareScalar):
            torus_scaling(h_odd, 2, E(2, 1, 2))
        assert torus_scaling(h_odd, 4, E(2, 1, 2)) == E(2, 1, 2, 2)
        assert torus_scaling(tw.H, 2, odd) == odd

    def test_non_integral(self):
        with pytest.raises(NonIntegralGrading):
            torus_scaling(ExactMatrix.diag([mpq(1, 2), 0]), 4, I2)

    @given(st.integers(1, 5), st.integers(1, 5))
    def test_one_parameter_group(self, a, b):
        y = self.t.Y + self.t.X.scale(3) + self.t.H
        lhs = torus_scaling(self.t.H, a, torus_scaling(self.t.H, b, y))
        assert lhs == torus_scaling(self.t.H, a * b, y)


class TestPhase:
    def test_zero(self):
        assert np.allclose(phase_exp(ExactMatrix.zeros(2)), np.eye(2))

    def test_quarter(self):
        p = phase_exp(ExactMatrix.diag([mpq(1, 4), 0]))
        assert p[0, 0] == -1j and p[1, 1] == 1

    def test_integers(self):
        assert np.array_equal(phase_exp(ExactMatrix.diag([3, -2, 0])), np.eye(3))

    def test_generic(self):
        lam = gi("1/3", "1/5")
        p = phase_exp(ExactMatrix.diag([lam]))
        assert p[0, 0] == pytest.approx(cmath.exp(-2j * cmath.pi * complex(lam)), rel=1e-14)

    def test_non_diagonal(self):
        a = M([[0, mpq(1, 2)], [mpq(1, 2), 0]])  # eigenvalues +-1/2
        assert np.allclose(phase_exp(a), -np.eye(2))


def test_shapes_cover_all_partitions():
    assert [len(list(partitions(n))) for n in range(1, 6)] == [1, 2, 3, 5, 7]
    assert all(sum(p) == n for n in range(1, 6) for p in partitions(n))
    assert len(set(itertools.chain.from_iterable(partitions(n) for n in range(1, 6)))) == 18
