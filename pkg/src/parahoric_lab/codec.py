"""JSON encodings of the exact and numeric objects.

* rational: ``"p/q"`` (or ``"p"``); ints are accepted on input
* Gaussian rational: ``{"re": "p/q", "im": "p/q"}``; a bare rational is real
* matrix: list of rows of scalars
* Laurent matrix: ``{"size": n, "trunc": N, "terms": {"k": matrix}}`` where a
  missing ``trunc`` means the session default and ``null`` means exact
* weight: ``{"family": "GL", "n": k, "entries": [...]}``
* character: ``{"blocks": [...], "values": [...]}``
* complex matrix: ``{"re": [[...]], "im": [[...]]}``
"""

from __future__ import annotations

from typing import Any

import numpy as np

from .errors import SchemaError
from .exact import ExactMatrix, GaussianRational, format_rational, rational
from .laurent import LaurentMatrix, default_trunc
from .roots import CharacterDescriptor, GroupDescriptor, ParabolicDescriptor, Weight
from .stability import DegreeLedger, ReductionDatum

SCHEMA = "parahoric-lab/1"


def _require(obj: Any, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{where}: missing key {key!r}", key=key)
    return obj[key]


def enc_rational(q) -> str:
    return format_rational(q)


def dec_rational(x):
    if isinstance(x, float):
        raise SchemaError(f"floating value {x!r} where an exact rational is required", value=x)
    return rational(x)


def enc_scalar(g: GaussianRational):
    if not g.im:
        return format_rational(g.re)
    return {"re": format_rational(g.re), "im": format_rational(g.im)}


def dec_scalar(x) -> GaussianRational:
    if isinstance(x, dict):
        return GaussianRational(dec_rational(x.get("re", 0)), dec_rational(x.get("im", 0)))
    return GaussianRational(dec_rational(x))


def enc_matrix(m: ExactMatrix) -> list:
    return [[enc_scalar(x) for x in row] for row in m.tolist()]


def dec_matrix(x) -> ExactMatrix:
    if not isinstance(x, list) or not x or not all(isinstance(r, list) for r in x):
        raise SchemaError("a matrix is a non-empty list of rows")
    return ExactMatrix([[dec_scalar(v) for v in row] for row in x])


def enc_laurent(a: LaurentMatrix) -> dict:
    return {
        "size": a.size,
        "trunc": a.trunc,
        "terms": {str(k): enc_matrix(m) for k, m in a.terms.items()},
    }


def dec_laurent(x) -> LaurentMatrix:
    if isinstance(x, list):
        m = dec_matrix(x)
        return LaurentMatrix.constant(m, default_trunc())
    size = _require(x, "size", "laurent matrix")
    terms_raw = x.get("terms", {})
    if not isinstance(terms_raw, dict):
        raise SchemaError("laurent terms must be an object keyed by exponent")
    trunc = x["trunc"] if "trunc" in x else default_trunc()
    if trunc is not None and (isinstance(trunc, bool) or not isinstance(trunc, int)):
        raise SchemaError("trunc must be an integer or null", trunc=trunc)
    terms = {}
    for k, v in terms_raw.items():
        try:
            e = int(k)
        except ValueError:
            raise SchemaError(f"bad exponent {k!r}") from None
        terms[e] = dec_matrix(v)
    if not isinstance(size, int) or isinstance(size, bool):
        raise SchemaError("size must be an integer")
    return LaurentMatrix(size, terms, trunc)


def enc_group(g: GroupDescriptor) -> dict:
    return {"family": g.family, "n": g.n}


def dec_group(x) -> GroupDescriptor:
    if isinstance(x, str):
        fam, n = x[:2], x[2:]
        if not n.isdigit():
            raise SchemaError(f"bad group {x!r}; expected e.g. GL2 or SL3")
        return GroupDescriptor(fam, int(n))
    return GroupDescriptor(_require(x, "family", "group"), _require(x, "n", "group"))


def enc_weight(w: Weight) -> dict:
    return {"family": w.group.family, "n": w.group.n, "entries": [format_rational(e) for e in w.entries]}


def dec_weight(x, group: GroupDescriptor | None = None) -> Weight:
    if isinstance(x, list):
        if group is None:
            raise SchemaError("a bare entry list needs a group")
        return Weight(group, tuple(dec_rational(e) for e in x))
    g = dec_group(x) if group is None else group
    return Weight(g, tuple(dec_rational(e) for e in _require(x, "entries", "weight")))


def enc_parabolic(p: ParabolicDescriptor) -> dict:
    return {
        "blocks": list(p.block_sizes),
        "conjugator": None if p.conjugator is None else enc_matrix(p.conjugator),
    }


def dec_parabolic(x, group: GroupDescriptor) -> ParabolicDescriptor:
    conj = x.get("conjugator")
    return ParabolicDescriptor(
        group, tuple(_require(x, "blocks", "parabolic")), None if conj is None else dec_matrix(conj)
    )


def enc_character(c: CharacterDescriptor) -> dict:
    return {"blocks": list(c.parabolic.block_sizes), "values": list(c.block_values)}


def dec_character(x, group: GroupDescriptor, parabolic: ParabolicDescriptor | None = None) -> CharacterDescriptor:
    p = parabolic if parabolic is not None else dec_parabolic(x, group)
    return CharacterDescriptor(p, tuple(_require(x, "values", "character")))


def dec_ledger(x) -> DegreeLedger:
    group = dec_group(x)
    weights = {str(k): dec_weight(v, group) for k, v in (x.get("weights") or {}).items()}
    reductions = []
    for r in x.get("reductions") or []:
        levi = r.get("levi_ledger")
        reductions.append(
            ReductionDatum(
                dec_parabolic(r, group),
                tuple(_require(r, "line_degrees", "reduction")),
                r.get("compatible_with", "plain").replace("-", "_"),
                None if levi is None else dec_ledger(levi),
            )
        )
    return DegreeLedger(group, weights, tuple(reductions))


def enc_complex_matrix(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def dec_complex_matrix(x) -> np.ndarray:
    re_ = np.array(_require(x, "re", "complex matrix"), dtype=float)
    im_ = np.array(x.get("im", np.zeros_like(re_)), dtype=float)
    return re_ + 1j * im_


def enc_complex_vector(v) -> dict:
    v = np.asarray(v, dtype=complex)
    return {"re": v.real.tolist(), "im": v.imag.tolist()}
