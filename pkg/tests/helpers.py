"""Shared constructors for the test modules."""

from gmpy2 import mpq

from parahoric_lab import ExactMatrix, LaurentMatrix, Weight
from parahoric_lab.exact import GaussianRational


def q(x):
    if isinstance(x, str) and "/" in x:
        p, r = x.split("/")
        return mpq(int(p), int(r))
    return mpq(x)


def M(rows):
    return ExactMatrix(rows)


def E(n, i, j, c=1):
    """Elementary matrix, 1-based indices."""
    return ExactMatrix.unit(n, i - 1, j - 1, c)


def L(size, terms, trunc=None):
    return LaurentMatrix(size, terms, trunc)


def W(group, *entries):
    return Weight(group, tuple(q(e) for e in entries))


def gi(re, im=0):
    return GaussianRational(q(re), q(im))


def z_diag(*exps):
    return LaurentMatrix.z_power(list(exps))
