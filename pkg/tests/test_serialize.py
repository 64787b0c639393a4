import json
from fractions import Fraction as F

from kmt import serialize
from kmt.apartment import FinitePointSet, enclosure
from kmt.envalg import build_context, commutator_constants
from kmt.groupfilt import exp_element, factorize
from kmt.loopsl2 import ValuedFieldModel, pi_exp_h, pi_image, strict_inclusion_witness
from kmt.rootdata import enumerate_roots, simply_connected_datum, validate_matrix


def test_roots_wire_format(a1t):
    table = enumerate_roots(a1t, 3)
    rows = serialize.roots_json(table)
    assert {"root": [1, 1], "mult": 1, "real": False} in rows
    json.dumps(rows)  # serializable


def test_element_wire_format(a1t_ctx):
    g = exp_element(a1t_ctx, 0, F(1, 2))
    data = serialize.element_json(g)
    assert {"monomial": {}, "coeff": "1"} in data
    assert any(e["coeff"] == "1/2" for e in data)


def test_factored_form_wire_format(a1t_ctx):
    g = exp_element(a1t_ctx, 2, F(3, 7))
    form = factorize(g)
    data = serialize.factored_form_json(form)
    entries = [e for e in data if e["lambda"] != "0"]
    assert entries == [{"root": [1, 1], "basis_index": 2, "lambda": "3/7"}]


def test_commutator_wire_format(a2):
    tab = commutator_constants(a2, (1, 0), (0, 1))
    data = serialize.commutator_json(tab)
    assert data == [{"p": 1, "q": 1, "gamma": [1, 1], "C": tab.constants[(1, 1)]}]


def test_matrix_wire_format():
    mat = pi_exp_h(1, F(1, 3), 4)
    data = serialize.laurent_matrix_json(mat)
    assert data["m"] == 2 and data["window"] == [0, 4]
    assert {"deg": 1, "coeff": "1/3"} in data["entries"][0][0]


def test_halfspaces_wire_format(a1t, a1t_table):
    encl = enclosure(a1t, a1t_table, FinitePointSet.of((0, 0)))
    data = serialize.halfspaces_json(encl)
    assert all(set(h) == {"alpha", "k", "open"} for h in data)
    assert any(h["alpha"] == [1, 1] and h["k"] == "0" for h in data)


def test_pi_image_dispatch(a1t_ctx):
    seq_mat = pi_image(("h", 1), F(1, 3), window=4)
    assert seq_mat.entry(1, 1) == {0: F(1), 1: F(-1, 3)}
    from kmt.envalg import exponential_sequence
    iz = a1t_ctx.basis_by_root[(1, 1)][0]
    seq = exponential_sequence(a1t_ctx, iz, strategy="mitzman_affine")
    mat = pi_image(seq, F(1, 3), window=4)
    assert mat.window == (0, 3)   # capped by the sequence depth
    assert mat.entry(1, 1) == {0: F(1), 1: F(-1, 3)}
    assert mat.entry(0, 0) == {k: F(1, 3) ** k for k in range(4)}
    one = pi_image(a1t_ctx.one())
    assert one.entry(0, 0) == {0: F(1)}


def test_datum_documents(tmp_path):
    doc = {"matrix": [[2, -2], [-2, 2]], "rank_Y": 1,
           "coroots": [[-1], [1]], "roots": [[-2], [2]]}
    p = tmp_path / "loop.json"
    p.write_text(json.dumps(doc))
    datum = serialize.load_datum(str(p))
    assert datum.rank_Y == 1 and not datum.is_free

    t = tmp_path / "loop.toml"
    t.write_text("matrix = [[2,-2],[-2,2]]\nrank_Y = 1\n"
                 "coroots = [[-1],[1]]\nroots = [[-2],[2]]\n")
    datum2 = serialize.load_datum(str(t))
    assert datum2.coroots == datum.coroots


def test_deterministic_dumps():
    assert serialize.dumps({"b": 1, "a": [2, 3]}) == '{"a":[2,3],"b":1}'
