import os

import pytest

from chainext.brst import ConstraintSystem, so3_system, toy_system
from chainext.bv import DeformationProblem, obstruction_R, two_ghost_problem
from chainext.complexes import verify_homotopy
from chainext.exactla import RatMatrix, rat
from chainext.formats import (
    FormatError, dump_extend, format_poly, load_brst, load_bv, load_cochain,
    load_extend, load_lie, parse_poly, read_kind,
)
from chainext.lie import LieAlgebra, jacobi_check

MODELS = os.path.join(os.path.dirname(__file__), "..", "src", "chainext",
                      "models")


def read_model(name):
    with open(os.path.join(MODELS, name)) as fh:
        return fh.read()


def test_read_kind():
    assert read_kind("# c\n\nkind: lie\ndim: 1\n") == "lie"
    with pytest.raises(FormatError):
        read_kind("# nothing\n")
    with pytest.raises(FormatError):
        read_kind("dim: 3\n")


def test_load_lie_so3_matches_fixture():
    alg = load_lie(read_model("lie_so3.txt"))
    want = LieAlgebra(3, {(0, 1): [0, 0, 1], (1, 2): [1, 0, 0],
                          (0, 2): [0, -1, 0]})
    assert alg.c == want.c
    assert jacobi_check(alg)


def test_load_lie_errors_carry_line_numbers():
    with pytest.raises(FormatError) as e:
        load_lie("kind: lie\ndim: 2\nc 2 1 1: 1\n")
    assert e.value.line == 3
    with pytest.raises(FormatError):
        load_lie("kind: lie\ndim: 2\nc 1 2 1: 1\nc 1 2 1: 2\n")  # duplicate
    with pytest.raises(FormatError):
        load_lie("kind: lie\ndim: 2\nc 1 2 1: nonsense\n")
    with pytest.raises(FormatError):
        load_lie("kind: lie\nc 1 2 1: 1\ndim: 2\n")  # entries before dim
    with pytest.raises(FormatError):
        load_lie("kind: lie\ndim: 2\nwhatever: 3\n")
    with pytest.raises(FormatError):
        load_lie("kind: lie\n")


def test_load_cochain():
    ch = load_cochain(read_model("cochain_obstructed_alpha1.txt"))
    assert ch.dim == 3 and ch.arity == 2
    assert ch.value((0, 1)) == [0, 0, 1]
    assert ch.value((0, 2)) == [1, 0, 0]
    with pytest.raises(FormatError):
        load_cochain("kind: cochain\ndim: 2\narity: 2\na 2 1 1: 1\n")
    with pytest.raises(FormatError):
        load_cochain("kind: cochain\ndim: 2\narity: 2\na 1 1: 1\n")


def test_poly_literals():
    sys_ = toy_system()
    alg = sys_.alg
    for text in ("0", "x1", "1/2 x1 x1", "x1 G1 + 3", "- eta1 eta2 + P1",
                 "-2/3 x1 - G2"):
        p = parse_poly(1, text, alg)
        assert parse_poly(1, format_poly(p), alg) == p
    assert parse_poly(1, "0", alg).is_zero()
    with pytest.raises(FormatError):
        parse_poly(1, "x1 1/2", alg)  # coefficient not first
    with pytest.raises(FormatError):
        parse_poly(1, "bogus", alg)
    with pytest.raises(FormatError):
        parse_poly(1, "x1 +", alg)


def test_load_brst_matches_shipped_systems():
    for name, ref in (("brst_so3.txt", so3_system),
                      ("brst_toy.txt", toy_system)):
        m, n, table, structure = load_brst(read_model(name))
        sys_ = ConstraintSystem(m, n, table, structure)
        want = ref()
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    assert sys_.structure_fn(c, a, b) == \
                        want.structure_fn(c, a, b)
    m, n, table, structure = load_brst(read_model("brst_abelian.txt"))
    assert (m, n) == (0, 2) and not table and not structure


def test_load_brst_errors():
    with pytest.raises(FormatError):
        load_brst("kind: brst\nm: 0\nn: 2\np G1 G2: 1\np G2 G1: 1\n")
    with pytest.raises(FormatError):
        load_brst("kind: brst\nm: 0\nn: 2\ns 2 1 1: 1\n")
    with pytest.raises(FormatError):
        load_brst("kind: brst\nn: 2\n")
    with pytest.raises(FormatError):
        load_brst("kind: brst\nm: 0\nn: 2\np G1 G9: 1\n")


def test_load_bv():
    model, S, trunc = load_bv(read_model("bv_two_pair.txt"))
    assert trunc == 2 and S[1] == "auto"
    assert model.pairs == [("phi", "phi_st"), ("C", "C_st")]
    model2, S2, _ = load_bv(read_model("bv_two_ghost.txt"))
    q = DeformationProblem(model2, S2, trunc=2)
    assert obstruction_R(q, 2) == obstruction_R(two_ghost_problem(), 2)
    with pytest.raises(FormatError):
        load_bv("kind: bv\nfield phi: even 0\nS0: auto\n")
    with pytest.raises(FormatError):
        load_bv("kind: bv\nfield phi: even zero\nS0: phi\n")
    with pytest.raises(FormatError):
        load_bv("kind: bv\nfield phi: even 0\nS0: phi\nS2: phi\n")
    with pytest.raises(FormatError):
        load_bv("kind: bv\nS0: 0\n")


def test_extend_round_trip():
    for name in ("extend_split.txt", "extend_medium.txt"):
        text = read_model(name)
        hd, l2_0, d_f = load_extend(text)
        assert verify_homotopy(hd)["ok"]
        again = dump_extend(hd, l2_0, d_f)
        hd2, l2b, dfb = load_extend(again)
        assert dump_extend(hd2, l2b, dfb) == again


def test_extend_errors():
    with pytest.raises(FormatError):
        load_extend("kind: extend\ndims: 2 1\nf_dim: 1\n"
                    "matrix l1 1: 2 1\n1\n")  # truncated rows
    with pytest.raises(FormatError):
        load_extend("kind: extend\ndims: 2 1\nf_dim: 1\n"
                    "matrix l1 1: 1 2\n1\n")  # wrong entry count
    with pytest.raises(FormatError):
        load_extend("kind: extend\ndims: 2 1\nf_dim: 1\n"
                    "matrix eta: 1 2\n1 0\nmatrix eta: 1 2\n1 0\n")
    with pytest.raises(FormatError):
        load_extend("kind: extend\ndims: 2 1\nf_dim: 1\n")  # missing blocks


def test_rationals_round_trip_in_dump():
    mat = RatMatrix([[rat("1/3"), rat("-7/2")]])
    header = "kind: extend\ndims: 2 1\nf_dim: 1\n"
    body = ("matrix l1 1: 2 1\n0\n0\nmatrix eta: 1 2\n1/3 -7/2\n"
            "matrix lam: 2 1\n3\n0\nmatrix s 0: 1 2\n0 0\n"
            "matrix l2_0: 2 2\n0 0\n0 0\n")
    hd, l2_0, d_f = load_extend(header + body)
    assert hd.eta == mat
    assert d_f is None
