"""Named property suites run over seeded samples.

Each check takes a generator and returns ``(ok, reproduction)`` where the
reproduction is JSON describing the sample.  A suite run is deterministic in
its seed and independent of evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from gmpy2 import mpq

from . import codec
from .errors import ParahoricError, SuiteUnknown
from .exact import ExactMatrix, bracket
from .laurent import LaurentMatrix, laurent_inverse, laurent_multiply, log_derivative
from .monodromy import NumericConnection, compare_conjugacy, integrate_monodromy
from .nahc import DolbeaultLocalDatum, derham_to_betti_constant, table_row
from .normal_forms import is_constant_equivalent, normalize
from .parahoric import (
    ParahoricContext,
    adjoint_action,
    algebra_membership,
    gauge_action,
    group_membership,
    iwahori_factorize,
)
from .residue import check_triple, jordan_decompose, nilpotent_exp, sl2_completion, torus_scaling
from .roots import GL, SL, Weight
from .sampling import (
    nilpotent_of_shape,
    partitions,
    random_algebra_member,
    random_generator_product,
    random_levi_datum,
    random_rational,
    random_split_matrix,
    random_valuation_member,
    random_weight,
    spawn,
)


@dataclass(frozen=True)
class Suite:
    name: str
    description: str
    check: Callable


SUITES: dict[str, Suite] = {}


def suite(name: str, description: str):
    def deco(fn):
        SUITES[name] = Suite(name, description, fn)
        return fn

    return deco


def _ctx(rng, families=("GL2", "GL3")):
    fam = families[int(rng.integers(0, len(families)))]
    group = GL(int(fam[2:])) if fam.startswith("GL") else SL(int(fam[2:]))
    return ParahoricContext.of(random_weight(rng, group))


@suite("parahoric-equality", "generator products pass the valuation test; valuation members factorize")
def _parahoric_equality(rng):
    ctx = _ctx(rng)
    g = random_generator_product(rng, ctx)
    h = random_valuation_member(rng, ctx)
    ok = group_membership(ctx, g).member
    f = iwahori_factorize(ctx, h)
    ok = ok and f.product().agrees_with(h)
    return ok, {"theta": codec.enc_weight(ctx.theta), "product": codec.enc_laurent(g), "member": codec.enc_laurent(h)}


@suite("group-closure", "products and inverses of parahoric members stay members")
def _group_closure(rng):
    ctx = _ctx(rng)
    g = random_valuation_member(rng, ctx)
    h = random_generator_product(rng, ctx, length=3)
    ok = group_membership(ctx, laurent_multiply(g, h)).member
    ok = ok and group_membership(ctx, laurent_inverse(g)).member
    return ok, {"theta": codec.enc_weight(ctx.theta), "g": codec.enc_laurent(g), "h": codec.enc_laurent(h)}


@suite("gauge-preserves-parahoric", "adjoint and gauge actions of the group preserve the parahoric algebra")
def _preserve(rng):
    ctx = _ctx(rng)
    g = random_valuation_member(rng, ctx) if rng.random() < 0.5 else random_generator_product(rng, ctx, 4)
    a = random_algebra_member(rng, ctx)
    ok = algebra_membership(ctx, adjoint_action(g, a)).member
    ok = ok and algebra_membership(ctx, gauge_action(g, a)).member
    return ok, {"theta": codec.enc_weight(ctx.theta), "g": codec.enc_laurent(g), "A": codec.enc_laurent(a)}


@suite("gauge-left-action", "gauge(g, gauge(h, A)) = gauge(gh, A)")
def _left_action(rng):
    ctx = _ctx(rng)
    g = random_generator_product(rng, ctx, 3)
    h = random_generator_product(rng, ctx, 3)
    a = random_algebra_member(rng, ctx)
    lhs = gauge_action(g, gauge_action(h, a))
    rhs = gauge_action(laurent_multiply(g, h), a)
    return lhs.agrees_with(rhs), {"g": codec.enc_laurent(g), "h": codec.enc_laurent(h), "A": codec.enc_laurent(a)}


@suite("laurent-inverse", "g times its inverse is the identity to truncation")
def _inverse(rng):
    ctx = _ctx(rng)
    g = random_valuation_member(rng, ctx)
    prod = laurent_multiply(g, laurent_inverse(g))
    return prod.agrees_with(LaurentMatrix.identity(g.size)), {"g": codec.enc_laurent(g)}


@suite("log-derivative-cocycle", "dlog(gh) = dlog(g) + Ad(g) dlog(h)")
def _cocycle(rng):
    ctx = _ctx(rng)
    g = random_valuation_member(rng, ctx)
    h = random_generator_product(rng, ctx, 3)
    lhs = log_derivative(laurent_multiply(g, h))
    rhs = log_derivative(g) + adjoint_action(g, log_derivative(h))
    return lhs.agrees_with(rhs), {"g": codec.enc_laurent(g), "h": codec.enc_laurent(h)}


@suite("jordan", "s + n = a, [s, n] = 0, n nilpotent, s diagonalizable")
def _jordan(rng):
    n = int(rng.integers(1, 6))
    a = random_split_matrix(rng, n)
    jp = jordan_decompose(a)
    P = jp.basis
    ok = (
        jp.semisimple + jp.nilpotent == a
        and bracket(jp.semisimple, jp.nilpotent).is_zero()
        and jp.nilpotent.is_nilpotent()
        and (P.inverse() @ jp.semisimple @ P).is_diagonal()
    )
    return ok, {"a": codec.enc_matrix(a)}


@suite("sl2-triple", "bracket relations of the completed triple, commuting with s")
def _triple(rng):
    n = int(rng.integers(1, 6))
    shapes = list(partitions(n))
    shape = shapes[int(rng.integers(0, len(shapes)))]
    y, Q = nilpotent_of_shape(rng, shape)
    vals = [random_rational(rng) for _ in shape]
    diag = [v for v, d in zip(vals, shape) for _ in range(d)]
    s = Q @ ExactMatrix.diag(diag) @ Q.inverse()
    t = sl2_completion(y, s)
    ok = check_triple(t) and bracket(t.X, s).is_zero() and bracket(t.H, s).is_zero()
    return ok, {"Y": codec.enc_matrix(y), "s": codec.enc_matrix(s)}


@suite("nilpotent-exp", "exp(cN) exp(-cN) = I")
def _nexp(rng):
    n = int(rng.integers(1, 6))
    shapes = list(partitions(n))
    y, _ = nilpotent_of_shape(rng, shapes[int(rng.integers(0, len(shapes)))])
    c = random_rational(rng, 4, 3)
    ok = nilpotent_exp(y, c) @ nilpotent_exp(y, -c) == ExactMatrix.identity(n)
    return ok, {"N": codec.enc_matrix(y), "c": codec.enc_rational(c)}


@suite("torus-scaling", "scaling by t then u equals scaling by tu")
def _scaling(rng):
    shape = (int(rng.integers(2, 4)),)
    y, Q = nilpotent_of_shape(rng, shape)
    t = sl2_completion(y)
    z = random_split_matrix(rng, shape[0])
    a = int(rng.integers(1, 4)) ** 2
    b = int(rng.integers(1, 4)) ** 2
    lhs = torus_scaling(t.H, a, torus_scaling(t.H, b, z))
    rhs = torus_scaling(t.H, a * b, z)
    return lhs == rhs, {"H": codec.enc_matrix(t.H), "Z": codec.enc_matrix(z), "t": a, "u": b}


@suite("table-consistency", "beta = alpha + gamma and M = exp(-2 pi i nabla)")
def _table(rng):
    group = (GL(2), SL(2), GL(3))[int(rng.integers(0, 3))]
    alpha, res = random_levi_datum(rng, group)
    row = table_row(DolbeaultLocalDatum(alpha, res))
    ok = row.derham.beta == alpha + row.betti.gamma
    return ok, {"alpha": codec.enc_weight(alpha), "residue": codec.enc_matrix(res)}


@suite("normal-form", "bracket invariants and gauge round trip of the normal form")
def _normal_form(rng):
    group = (GL(2), SL(2), GL(3))[int(rng.integers(0, 3))]
    ctx = ParahoricContext.of(Weight.zero(group))
    a0 = random_split_matrix(rng, group.n, traceless=group.is_sl)
    a = random_algebra_member(rng, ctx)
    A = LaurentMatrix(group.n, {k: m for k, m in a.terms.items() if k > 0}) + LaurentMatrix.constant(a0)
    nf = normalize(A, group)
    one = laurent_multiply(nf.gauge_witness, nf.witness_inverse)
    back = gauge_action(nf.gauge_witness, A, inverse=nf.witness_inverse).truncate(nf.max_order)
    ok = nf.check_brackets() and back.agrees_with(nf.series)
    ok = ok and one.agrees_with(LaurentMatrix.identity(A.size), nf.max_order)
    return ok, {"A": codec.enc_laurent(A), "group": str(group)}


@suite("monodromy-rule", "ODE monodromy of a constant form equals exp(-2 pi i a)")
def _monodromy(rng):
    n = int(rng.integers(1, 4))
    a = random_split_matrix(rng, n)
    res = integrate_monodromy(NumericConnection(LaurentMatrix.constant(a), tolerance=1e-12))
    ok, _ = compare_conjugacy(res.matrix, derham_to_betti_constant(a), 1e-8)
    return ok, {"a": codec.enc_matrix(a)}


@suite("constant-equiv-invariance", "the SL2 parity verdict survives a random integral gauge")
def _constant_equiv(rng):
    m = int(rng.integers(1, 7))
    group = SL(2)
    A = LaurentMatrix(2, {0: [[mpq(m, 2), 0], [0, -mpq(m, 2)]], m: [[0, 1], [0, 0]]})
    ctx = ParahoricContext.of(Weight.zero(group))
    g = random_generator_product(rng, ctx, 2)
    B = gauge_action(g, A)
    verdict = is_constant_equivalent(B, group)[0]
    return verdict == (m % 2 == 0), {"m": m, "g": codec.enc_laurent(g)}


def property_run(name: str, seed: int = 0, count: int = 100) -> dict:
    """Run ``count`` samples of a suite and report failures with reproductions."""
    if name not in SUITES:
        raise SuiteUnknown(f"unknown property suite {name!r}", suite=name, known=sorted(SUITES))
    s = SUITES[name]
    failures = []
    passed = 0
    for index, rng in enumerate(spawn(seed, count)):
        try:
            ok, repro = s.check(rng)
        except (ParahoricError, AssertionError) as exc:
            ok, repro = False, {"exception": f"{type(exc).__name__}: {exc}"}
        if ok:
            passed += 1
        else:
            failures.append({"index": index, "reproduction": repro})
    return {
        "suite": name,
        "seed": int(seed),
        "count": int(count),
        "passed": passed,
        "failed": len(failures),
        "failures": failures,
    }


def list_suites() -> list[dict]:
    return [{"name": s.name, "description": s.description} for s in SUITES.values()]

