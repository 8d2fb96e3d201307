import json

import numpy as np
import pytest
from gmpy2 import mpq

from helpers import E, L, W, gi
from parahoric_lab import codec
from parahoric_lab.errors import SchemaError
from parahoric_lab.exact import ExactMatrix
from parahoric_lab.laurent import LaurentMatrix
from parahoric_lab.roots import GL, SL


def roundtrip(enc, dec, x):
    return dec(json.loads(json.dumps(enc(x))))


def test_scalar():
    assert codec.enc_scalar(gi("1/2")) == "1/2"
    assert codec.enc_scalar(gi(0, -1)) == {"re": "0", "im": "-1"}
    assert codec.dec_scalar({"im": "1/3"}) == gi(0, "1/3")
    assert codec.dec_scalar(7) == gi(7)


def test_float_rejected():
    with pytest.raises(SchemaError):
        codec.dec_rational(0.5)
    with pytest.raises(SchemaError):
        codec.dec_matrix([[0.25]])


def test_matrix_roundtrip():
    m = ExactMatrix([[gi("1/2", 1), 0], [3, gi(0, "-2/3")]])
    assert roundtrip(codec.enc_matrix, codec.dec_matrix, m) == m


def test_laurent_roundtrip_and_defaults(monkeypatch):
    a = L(2, {-1: E(2, 2, 1), 3: E(2, 1, 2, mpq(5, 7))}, trunc=9)
    assert roundtrip(codec.enc_laurent, codec.dec_laurent, a).agrees_with(a)
    exact = codec.dec_laurent({"size": 2, "trunc": None, "terms": {"0": [[1, 0], [0, 1]]}})
    assert exact.trunc is None
    monkeypatch.setenv("PARAHORIC_LAB_DEFAULT_TRUNC", "15")
    assert codec.dec_laurent({"size": 2, "terms": {}}).trunc == 15
    assert codec.dec_laurent([[1, 0], [0, 1]]).trunc == 15


@pytest.mark.parametrize(
    "bad",
    [
        {"terms": {}},
        {"size": 2, "terms": {"x": [[1, 0], [0, 1]]}},
        {"size": 2, "trunc": 1.5, "terms": {}},
        {"size": 2, "terms": []},
    ],
)
def test_laurent_errors(bad):
    with pytest.raises(SchemaError):
        codec.dec_laurent(bad)


def test_group_and_weight():
    assert codec.dec_group("SL3") == SL(3)
    assert codec.dec_group({"family": "GL", "n": 2}) == GL(2)
    with pytest.raises(SchemaError):
        codec.dec_group("GLx")
    w = W(GL(2), "1/2", "-1/3")
    assert roundtrip(codec.enc_weight, codec.dec_weight, w) == w
    assert codec.dec_weight(["1/2", "-1/2"], SL(2)) == W(SL(2), "1/2", "-1/2")
    with pytest.raises(SchemaError):
        codec.dec_weight({"family": "GL", "n": 2, "entries": ["1/0", "0"]})


def test_ledger():
    doc = {
        "family": "GL",
        "n": 2,
        "weights": {"x": ["1/3", "-1/3"]},
        "reductions": [
            {"blocks": [1, 1], "line_degrees": [0, 0], "compatible_with": "local-system"},
            {"blocks": [1, 1], "line_degrees": [0, 0], "levi_ledger": {"family": "GL", "n": 1}},
        ],
    }
    ledger = codec.dec_ledger(doc)
    assert ledger.weights["x"] == W(GL(2), "1/3", "-1/3")
    assert ledger.reductions[0].compatible_with == "local_system"
    assert ledger.reductions[1].levi_ledger.group == GL(1)


def test_complex():
    m = np.array([[1 + 2j, 0], [0, -1j]])
    assert np.array_equal(codec.dec_complex_matrix(codec.enc_complex_matrix(m)), m)
    assert codec.dec_complex_matrix({"re": [[1.0]]})[0, 0] == 1


def test_identity_laurent_constant():
    assert codec.enc_laurent(LaurentMatrix.identity(1)) == {"size": 1, "trunc": None, "terms": {"0": [["1"]]}}
