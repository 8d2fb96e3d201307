"""Command line front end: one subcommand per family of operations, JSON in and out.

JSON-valued options accept inline JSON, ``@path`` for a file, or ``-`` for
stdin.  ``--input FILE`` supplies an object whose keys fill any option not
given on the command line (``--input`` keys use underscores, e.g.
``commute_with``).  Output always carries ``"schema": "parahoric-lab/1"``;
failures print ``{"error": {code, message, context}}`` and exit with 2
(schema), 3 (domain) or 4 (numeric).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Callable

from . import codec
from .codec import SCHEMA
from .errors import DomainError, ParahoricError, SchemaError
from .laurent import laurent_inverse, laurent_multiply, log_derivative
from .monodromy import NumericConnection, charpoly_numeric, compare_conjugacy, integrate_monodromy
from .nahc import (
    DolbeaultLocalDatum,
    derham_to_betti_constant,
    dolbeault_to_betti,
    dolbeault_to_derham,
    table_row,
)
from .normal_forms import is_constant_equivalent, normalize, shearing_cocharacters
from .parahoric import (
    ParahoricContext,
    adjoint_action,
    algebra_membership,
    gauge_action,
    group_membership,
    iwahori_factorize,
    tameness_check,
)
from .properties import list_suites, property_run
from .residue import jordan_decompose, nilpotent_exp, phase_exp, sl2_completion, torus_scaling
from .roots import (
    CharacterDescriptor,
    GroupDescriptor,
    Root,
    ad_eigendecomposition,
    ceiling_level,
    is_antidominant,
    parabolic_from_weight,
    root_pairing,
)
from .stability import (
    is_admissible_reduction,
    is_degree_zero,
    mu_invariant,
    parahoric_degree,
    stability_verdict,
    weight_character_pairing,
)

# every library operation and the one subcommand that exposes it
OPERATIONS: dict[str, str] = {
    "laurent_multiply": "laurent",
    "laurent_inverse": "laurent",
    "log_derivative": "laurent",
    "root_pairing": "roots",
    "ceiling_level": "roots",
    "ad_eigendecomposition": "roots",
    "parabolic_from_weight": "roots",
    "is_antidominant": "roots",
    "algebra_membership": "membership",
    "group_membership": "membership",
    "tameness_check": "membership",
    "iwahori_factorize": "factorize",
    "gauge_action": "gauge",
    "adjoint_action": "adjoint",
    "jordan_decompose": "residue",
    "sl2_completion": "residue",
    "nilpotent_exp": "residue",
    "torus_scaling": "residue",
    "phase_exp": "residue",
    "dolbeault_to_derham": "table",
    "dolbeault_to_betti": "table",
    "derham_to_betti_constant": "table",
    "table_row": "table",
    "normalize": "normalform",
    "shearing_cocharacters": "normalform",
    "is_constant_equivalent": "constant-equiv",
    "weight_character_pairing": "degree",
    "parahoric_degree": "degree",
    "mu_invariant": "degree",
    "is_degree_zero": "degree",
    "is_admissible_reduction": "degree",
    "stability_verdict": "stability",
    "integrate_monodromy": "monodromy",
    "compare_conjugacy": "monodromy",
    "property_run": "prop",
}


# ------------------------------------------------------------------ input


def _load_json(text: str) -> Any:
    if text == "-":
        text = sys.stdin.read()
    elif text.startswith("@"):
        try:
            with open(text[1:], encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise SchemaError(f"cannot read {text[1:]!r}: {exc.strerror}", path=text[1:]) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from None


class Inputs:
    """Option values merged with the ``--input`` object."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.doc = {}
        if getattr(args, "input", None):
            doc = _load_json(args.input if args.input == "-" else "@" + args.input)
            if not isinstance(doc, dict):
                raise SchemaError("--input must hold a JSON object")
            self.doc = doc

    def raw(self, name: str, required: bool = True):
        v = getattr(self.args, name, None)
        if v is not None:
            return _load_json(v) if isinstance(v, str) else v
        if name in self.doc:
            return self.doc[name]
        if required:
            raise SchemaError(f"missing input {name!r}", key=name)
        return None

    def text(self, name: str, required: bool = True):
        """A value that may be a bare string such as ``1/2`` or ``1,2`` instead of JSON."""
        v = self.scalar(name)
        if isinstance(v, str) and (v[:1] in "[{\"" or v.startswith("@") or v == "-"):
            return _load_json(v)
        if v is None and required:
            raise SchemaError(f"missing input {name!r}", key=name)
        return v

    def scalar(self, name: str, default=None):
        """Plain option value (no JSON decoding) falling back to the input object."""
        v = getattr(self.args, name, None)
        if v is not None:
            return v
        return self.doc.get(name, default)


def _decode(fn: Callable, *a, **kw):
    try:
        return fn(*a, **kw)
    except ParahoricError:
        raise
    except (TypeError, ValueError, KeyError, AttributeError, ZeroDivisionError) as exc:
        raise SchemaError(f"malformed input: {exc}") from None


def _weight(inp: Inputs, name: str, group: GroupDescriptor | None = None):
    return _decode(codec.dec_weight, inp.raw(name), group)


def _matrix(inp: Inputs, name: str, required: bool = True):
    x = inp.raw(name, required)
    return None if x is None else _decode(codec.dec_matrix, x)


def _laurent(inp: Inputs, name: str, required: bool = True):
    x = inp.raw(name, required)
    return None if x is None else _decode(codec.dec_laurent, x)


def _group_for(spec, n: int) -> GroupDescriptor:
    """``"GL"``, ``"SL3"`` or a group object; a bare family takes rank ``n``."""
    if isinstance(spec, str) and spec in ("GL", "SL"):
        return GroupDescriptor(spec, n)
    g = _decode(codec.dec_group, spec)
    if g.n != n:
        raise DomainError(f"{g} given for a {n}x{n} input", group=str(g), size=n)
    return g


def _root(x, n: int) -> Root:
    """``"i,j"``, ``[i, j]`` or ``{"i": .., "j": ..}``, 1-based."""
    if isinstance(x, str):
        parts = x.replace("e", "").replace("-", ",").split(",")
        x = [p for p in parts if p.strip()]
    if isinstance(x, dict):
        x = [x.get("i"), x.get("j")]
    try:
        i, j = (int(v) for v in x)
    except (TypeError, ValueError):
        raise SchemaError(f"bad root {x!r}; expected [i, j] (1-based)") from None
    if not (1 <= i <= n and 1 <= j <= n) or i == j:
        raise SchemaError(f"bad root ({i},{j}) for rank {n}")
    return Root(i - 1, j - 1)


# ----------------------------------------------------------------- output


def _triple_json(t) -> dict:
    return {
        "X": codec.enc_matrix(t.X),
        "H": codec.enc_matrix(t.H),
        "Y": codec.enc_matrix(t.Y),
        "basis_change": codec.enc_matrix(t.basis_change),
        "chain_lengths": list(t.chain_lengths),
    }


def _jordan_json(jp) -> dict:
    return {
        "semisimple": codec.enc_matrix(jp.semisimple),
        "nilpotent": codec.enc_matrix(jp.nilpotent),
        "basis": codec.enc_matrix(jp.basis),
        "spectrum": [codec.enc_scalar(x) for x in jp.spectrum],
    }


def _character_json(c: CharacterDescriptor) -> dict:
    return codec.enc_character(c)


def _nf_json(nf) -> dict:
    return {
        "b_terms": {str(k): codec.enc_matrix(m) for k, m in sorted(nf.b_terms.items())},
        "nabla": codec.enc_matrix(nf.nabla_part),
        "sigma": codec.enc_matrix(nf.sigma_part),
        "nilpotent": codec.enc_matrix(nf.nilpotent_part()),
        "series": codec.enc_laurent(nf.series),
        "frame": codec.enc_matrix(nf.frame),
        "eigenvalues": [codec.enc_scalar(x) for x in nf.eigenvalues],
        "max_order": nf.max_order,
        "brackets_ok": nf.check_brackets(),
    }


def _complex_scalar(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


# ------------------------------------------------------------ subcommands


def cmd_laurent(inp: Inputs) -> dict:
    op = inp.scalar("op", "multiply")
    a = _laurent(inp, "a")
    order = inp.scalar("max_order")
    if op == "multiply":
        out = laurent_multiply(a, _laurent(inp, "b"))
    elif op == "inverse":
        out = laurent_inverse(a, order)
    elif op == "logderiv":
        out = log_derivative(a, order)
    else:
        raise SchemaError(f"unknown laurent op {op!r}", op=op)
    return {"op": op, "result": codec.enc_laurent(out)}


def cmd_roots(inp: Inputs) -> dict:
    out: dict = {}
    theta = _weight(inp, "theta") if inp.raw("theta", False) is not None else None
    if theta is not None:
        n = theta.group.n
        out["theta"] = codec.enc_weight(theta)
        r = inp.text("root", False)
        if r is not None:
            root = _root(r, n)
            out["root"] = str(root)
            out["pairing"] = codec.enc_rational(root_pairing(theta, root))
            out["ceiling_level"] = ceiling_level(theta, root)
        if inp.scalar("ad"):
            out["ad_eigenspaces"] = [
                {"eigenvalue": codec.enc_rational(lam), "basis": [codec.enc_matrix(m) for m in basis]}
                for lam, basis in ad_eigendecomposition(theta)
            ]
        if inp.scalar("parabolic"):
            out["parabolic"] = codec.enc_parabolic(parabolic_from_weight(theta))
    ch = inp.raw("character", False)
    if ch is not None:
        grp = theta.group if theta is not None else _decode(codec.dec_group, inp.text("group"))
        chi = _decode(codec.dec_character, ch, grp)
        out["character"] = _character_json(chi)
        out["antidominant"] = is_antidominant(chi)
    if len(out) <= (1 if theta is not None else 0):
        raise SchemaError("roots needs --root, --ad, --parabolic or --character")
    return out


def cmd_membership(inp: Inputs) -> dict:
    theta = _weight(inp, "theta")
    elem = _laurent(inp, "element")
    ctx = ParahoricContext.of(theta)
    kind = inp.scalar("kind", "group")
    if kind == "algebra":
        rep = algebra_membership(ctx, elem)
    elif kind == "group":
        rep = group_membership(ctx, elem, order=inp.scalar("max_order"))
    elif kind == "tame":
        rep = tameness_check(theta, elem)
    else:
        raise SchemaError(f"unknown membership kind {kind!r}")
    return {"kind": kind, "theta": codec.enc_weight(theta), "report": rep.to_json()}


def cmd_gauge(inp: Inputs) -> dict:
    g, a = _laurent(inp, "g"), _laurent(inp, "form")
    return {"result": codec.enc_laurent(gauge_action(g, a, inp.scalar("max_order")))}


def cmd_adjoint(inp: Inputs) -> dict:
    g, a = _laurent(inp, "g"), _laurent(inp, "form")
    return {"result": codec.enc_laurent(adjoint_action(g, a, inp.scalar("max_order")))}


def cmd_factorize(inp: Inputs) -> dict:
    theta = _weight(inp, "theta")
    g = _laurent(inp, "element")
    f = iwahori_factorize(ParahoricContext.of(theta), g, inp.scalar("max_order"))
    return {
        "theta": codec.enc_weight(theta),
        "torus": codec.enc_laurent(f.torus),
        "unipotents": [{"root": str(r), "element": codec.enc_laurent(u)} for r, u in f.unipotents],
        "product_matches": f.product().agrees_with(g),
    }


def cmd_residue(inp: Inputs) -> dict:
    m = _matrix(inp, "matrix")
    what = inp.scalar("what", "jordan")
    if what == "jordan":
        return {"jordan": _jordan_json(jordan_decompose(m))}
    if what == "triple":
        t = sl2_completion(m, _matrix(inp, "commute_with", False))
        return {"triple": _triple_json(t)}
    if what == "exp":
        c = _decode(codec.dec_scalar, inp.text("c", False) or "1")
        return {"c": codec.enc_scalar(c), "exp": codec.enc_matrix(nilpotent_exp(m, c))}
    if what == "scale":
        H = _matrix(inp, "h")
        t = _decode(codec.dec_rational, inp.text("t"))
        return {"t": codec.enc_rational(t), "scaled": codec.enc_matrix(torus_scaling(H, t, m))}
    if what == "phase":
        return {"phase_exp": codec.enc_complex_matrix(phase_exp(m))}
    raise SchemaError(f"unknown residue operation {what!r}")


def cmd_table(inp: Inputs) -> dict:
    tol = inp.scalar("tol") or 1e-10
    if inp.scalar("constant"):
        a = _matrix(inp, "residue")
        return {"monodromy": codec.enc_complex_matrix(derham_to_betti_constant(a))}
    residue = _matrix(inp, "residue")
    alpha = _weight(inp, "alpha", _alpha_group(inp, residue.rows))
    d = DolbeaultLocalDatum(alpha, residue)
    which = inp.scalar("side", "row")
    if which == "derham":
        return {"derham": _derham_json(dolbeault_to_derham(d))}
    if which == "betti":
        return {"betti": _betti_json(dolbeault_to_betti(d))}
    row = table_row(d, tol)
    tr = d.triple
    return {
        "dolbeault": {
            "alpha": codec.enc_weight(alpha),
            "residue": codec.enc_matrix(residue),
            "jordan": _jordan_json(d.jordan),
            "triple": _triple_json(tr),
        },
        "derham": _derham_json(row.derham),
        "betti": _betti_json(row.betti),
        "conjugator": codec.enc_matrix(d.adapted.conjugator),
        "certificates": {
            "beta_equals_alpha_plus_gamma": row.derham.beta == alpha + row.betti.gamma,
            "monodromy_deviation": row.consistency_deviation,
            "tolerance": tol,
        },
    }


def _alpha_group(inp: Inputs, n: int):
    g = inp.text("group", False)
    return None if g is None else _group_for(g, n)


def _derham_json(dr) -> dict:
    return {
        "beta": codec.enc_weight(dr.beta),
        "residue": codec.enc_matrix(dr.residue),
        "sigma": codec.enc_matrix(dr.sigma()),
    }


def _betti_json(bt) -> dict:
    return {
        "gamma": codec.enc_weight(bt.gamma),
        "monodromy": codec.enc_complex_matrix(bt.monodromy),
        "phase_diagonal": codec.enc_matrix(bt.phase_diagonal),
        "unipotent_generator": codec.enc_matrix(bt.unipotent_generator),
        "parabolic": codec.enc_parabolic(bt.parabolic),
    }


def cmd_normalform(inp: Inputs) -> dict:
    A = _laurent(inp, "form")
    group = _group_for(inp.text("group", False) or "GL", A.size)
    nf = normalize(A, group, inp.scalar("max_order"))
    return {
        "group": str(group),
        "normal_form": _nf_json(nf),
        "resonances": sorted(nf.resonance_orders),
        "witness": codec.enc_laurent(nf.gauge_witness),
        "shearing_cocharacters": [codec.enc_weight(w) for w in shearing_cocharacters(group, nf)],
    }


def cmd_constant_equiv(inp: Inputs) -> dict:
    A = _laurent(inp, "form")
    group = _group_for(inp.text("group", False) or "GL", A.size)
    verdict, W, const = is_constant_equivalent(A, group, inp.scalar("max_order"))
    return {
        "group": str(group),
        "verdict": verdict,
        "witness": None if W is None else codec.enc_laurent(W),
        "constant": None if const is None else codec.enc_matrix(const),
    }


def _ledger(inp: Inputs):
    return _decode(codec.dec_ledger, inp.raw("ledger"))


def cmd_degree(inp: Inputs) -> dict:
    out: dict = {}
    ledger = _ledger(inp) if inp.raw("ledger", False) is not None else None
    ch = inp.raw("character", False)
    idx = inp.scalar("reduction")
    if ledger is None:
        theta = _weight(inp, "theta")
        if ch is None:
            raise SchemaError("pairing needs --character")
        chi = _decode(codec.dec_character, ch, theta.group)
        return {"pairing": codec.enc_rational(weight_character_pairing(theta, chi))}
    if idx is not None:
        if not 0 <= idx < len(ledger.reductions):
            raise SchemaError(f"reduction index {idx} out of range", count=len(ledger.reductions))
        red = ledger.reductions[idx]
        local = inp.scalar("local", False)
        out["reduction"] = idx
        out["admissible"] = is_admissible_reduction(ledger, red, local)
        if ch is not None:
            vals = ch if isinstance(ch, list) else _decode(lambda: ch["values"])
            chi = _decode(CharacterDescriptor, red.parabolic, tuple(vals))
            out["character"] = _character_json(chi)
            out["degree"] = codec.enc_rational(parahoric_degree(ledger, red, chi))
    td = inp.raw("trivial_degrees", False)
    if td is not None:
        mu = mu_invariant(ledger, td)
        out["mu"] = codec.enc_weight(mu)
        out["degree_zero"] = is_degree_zero(ledger, td)
    if not out:
        raise SchemaError("degree needs --reduction or --trivial-degrees (with --ledger)")
    return out


def cmd_stability(inp: Inputs) -> dict:
    ledger = _ledger(inp)
    mode = inp.scalar("mode", "torsor")
    v = stability_verdict(ledger, mode)
    out = v.to_json()
    out["note"] = "verdicts are relative to the supplied reductions"
    return out


def cmd_monodromy(inp: Inputs) -> dict:
    A = _laurent(inp, "form")
    radius = float(inp.scalar("radius", 0.25))
    tol = float(inp.scalar("tol") or 1e-11)
    paper = inp.scalar("paper_convention", True)
    res = integrate_monodromy(NumericConnection(A, radius, tol), paper_convention=paper)
    cp = charpoly_numeric(res.matrix)
    out = {
        "matrix": codec.enc_complex_matrix(res.matrix),
        "charpoly": codec.enc_complex_vector(cp),
        "det": _complex_scalar(complex((-1) ** A.size * cp[0])),
        "steps": res.steps,
        "rerun_deviation": res.rerun_deviation,
        "paper_convention": res.paper_convention,
        "radius": radius,
        "tol": tol,
    }
    cmp = inp.raw("compare", False)
    if cmp is not None:
        other = _compare_target(cmp)
        ok, rep = compare_conjugacy(res.matrix, other, float(inp.scalar("compare_tol", 1e-8)))
        out["comparison"] = {"conjugate": ok, "deviations": rep.deviations}
    return out


def _compare_target(x):
    if isinstance(x, dict) and "re" in x and isinstance(x["re"], list):
        return _decode(codec.dec_complex_matrix, x)
    if isinstance(x, dict) and "constant_form" in x:
        return derham_to_betti_constant(_decode(codec.dec_matrix, x["constant_form"]))
    return _decode(codec.dec_matrix, x).to_numpy()


def cmd_prop(inp: Inputs) -> dict:
    if inp.scalar("list"):
        return {"suites": list_suites()}
    name = inp.scalar("suite")
    if name is None:
        raise SchemaError("prop needs --suite NAME (or --list)")
    seed = int(inp.scalar("seed") or 0)
    if seed < 0 or seed >= 2**64:
        raise SchemaError("seed must be an unsigned 64-bit integer", seed=seed)
    count = int(inp.scalar("count", 100))
    return property_run(name, seed, count)


COMMANDS: dict[str, Callable[[Inputs], dict]] = {
    "laurent": cmd_laurent,
    "roots": cmd_roots,
    "membership": cmd_membership,
    "gauge": cmd_gauge,
    "adjoint": cmd_adjoint,
    "factorize": cmd_factorize,
    "residue": cmd_residue,
    "table": cmd_table,
    "normalform": cmd_normalform,
    "constant-equiv": cmd_constant_equiv,
    "degree": cmd_degree,
    "stability": cmd_stability,
    "monodromy": cmd_monodromy,
    "prop": cmd_prop,
}


# ----------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    """Usage errors become SchemaError so they get the JSON error shape."""

    def error(self, message):
        raise SchemaError(f"{self.prog}: {message}")


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    p.add_argument("--input", metavar="FILE", help="JSON object with the inputs ('-' for stdin)")
    p.add_argument("--output", metavar="FILE", help="write the JSON result here instead of stdout")
    p.add_argument("--seed", type=int, help="unsigned 64-bit seed")
    p.add_argument("--tol", type=float, help="numeric tolerance")
    p.add_argument("--max-order", dest="max_order", type=int, help="series order bound")
    p.add_argument(
        "--paper-convention",
        dest="paper_convention",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="report exp(-2 pi i a) for a constant form (default on)",
    )
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="parahoric-lab",
        description="Exact parahoric and residue computations with a numeric monodromy check.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND", parser_class=_Parser)
    common = _common()

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_, description=help_)

    p = add("laurent", "multiply, invert or take z g' g^-1 of truncated Laurent matrices")
    p.add_argument("--op", choices=("multiply", "inverse", "logderiv"))
    p.add_argument("--a", help="Laurent matrix JSON")
    p.add_argument("--b", help="Laurent matrix JSON (multiply)")

    p = add("roots", "root pairings, ceiling levels, ad-eigenspaces and parabolics of a weight")
    p.add_argument("--theta", help="weight JSON")
    p.add_argument("--root", help="1-based root as [i, j]")
    p.add_argument("--ad", action="store_true", default=None, help="ad(theta) eigendecomposition")
    p.add_argument("--parabolic", action="store_true", default=None, help="parabolic of the weight")
    p.add_argument("--character", help="character JSON (anti-dominance test)")
    p.add_argument("--group", help="group for --character without --theta")

    p = add("membership", "parahoric membership with a slack table")
    p.add_argument("--theta", help="weight JSON")
    p.add_argument("--element", help="Laurent matrix JSON")
    k = p.add_mutually_exclusive_group()
    k.add_argument("--algebra", dest="kind", action="store_const", const="algebra")
    k.add_argument("--group", dest="kind", action="store_const", const="group")
    k.add_argument("--tame", dest="kind", action="store_const", const="tame")

    for name, help_ in (("gauge", "gauge transform Ad(g)A + z g' g^-1"), ("adjoint", "adjoint action g A g^-1")):
        p = add(name, help_)
        p.add_argument("--g", help="Laurent matrix JSON")
        p.add_argument("--form", help="Laurent matrix JSON")

    p = add("factorize", "factor a parahoric group element into torus and root-group pieces")
    p.add_argument("--theta", help="weight JSON")
    p.add_argument("--element", help="Laurent matrix JSON")

    p = add("residue", "Jordan decomposition, sl2 triples and exponentials of an exact matrix")
    p.add_argument("--matrix", help="matrix JSON")
    w = p.add_mutually_exclusive_group()
    for flag in ("jordan", "triple", "exp", "scale", "phase"):
        w.add_argument(f"--{flag}", dest="what", action="store_const", const=flag)
    p.add_argument("--commute-with", dest="commute_with", help="semisimple matrix the triple must commute with")
    p.add_argument("--c", help="scalar for --exp (default 1); write negatives as --c=-1/2")
    p.add_argument("--h", help="grading element for --scale")
    p.add_argument("--t", help="positive rational for --scale")

    p = add("table", "Dolbeault, de Rham and Betti local data of a residue")
    p.add_argument("--alpha", help="weight JSON")
    p.add_argument("--residue", help="matrix JSON")
    p.add_argument("--group", help="group for a bare alpha list (e.g. GL2)")
    s = p.add_mutually_exclusive_group()
    s.add_argument("--derham", dest="side", action="store_const", const="derham")
    s.add_argument("--betti", dest="side", action="store_const", const="betti")
    s.add_argument(
        "--constant", action="store_true", default=None, help="exp(-2 pi i a) of a constant residue"
    )

    for name, help_ in (
        ("normalform", "normal form of A dz/z with a gauge witness"),
        ("constant-equiv", "decide gauge equivalence of A dz/z to a constant form"),
    ):
        p = add(name, help_)
        p.add_argument("--form", help="Laurent matrix JSON")
        p.add_argument("--group", help="GL or SL (rank from the form), or e.g. SL2")

    p = add("degree", "parahoric degrees, mu and admissibility over a degree ledger")
    p.add_argument("--ledger", help="degree ledger JSON")
    p.add_argument("--reduction", type=int, help="0-based index of a reduction in the ledger")
    p.add_argument("--character", help="character values (list) or character JSON")
    p.add_argument("--trivial-degrees", dest="trivial_degrees", help="[[k, deg L(det^k)], ...]")
    p.add_argument("--theta", help="weight JSON (pairing without a ledger)")
    p.add_argument("--local", action="store_true", default=None, help="drop the line-bundle term")

    p = add("stability", "stability verdict relative to the reductions in a ledger")
    p.add_argument("--ledger", help="degree ledger JSON")
    p.add_argument("--mode", choices=("torsor", "higgs", "connection", "local-system", "local_system"))

    p = add("monodromy", "numerical monodromy of A dz/z around a small circle")
    p.add_argument("--form", help="Laurent matrix JSON")
    p.add_argument("--radius", type=float)
    p.add_argument("--compare", help="matrix to compare up to conjugacy (exact or re/im)")
    p.add_argument("--compare-tol", dest="compare_tol", type=float)

    p = add("prop", "run a seeded property suite")
    p.add_argument("--suite")
    p.add_argument("--count", type=int)
    p.add_argument("--list", action="store_true", default=None)
    return parser


def _emit(obj: dict, path: str | None) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv: list[str] | None = None) -> tuple[int, dict]:
    """Parse and dispatch; returns (exit code, JSON document)."""
    return _execute(argv)[:2]


def _execute(argv) -> tuple[int, dict, str | None]:
    command = None
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        inp = Inputs(args)
        result = COMMANDS[command](inp)
        return 0, {"schema": SCHEMA, "command": command, **result}, args.output
    except ParahoricError as exc:
        return exc.exit_code, {"schema": SCHEMA, "command": command, "error": exc.to_json()}, None


def main(argv: list[str] | None = None) -> int:
    code, doc, output = _execute(argv)
    _emit(doc, output)
    return code


__all__ = ["COMMANDS", "OPERATIONS", "build_parser", "main", "run"]
