import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cohomkit.errors import IncompatiblePair, IntegrabilityError, ModelError, TheoremViolation
from cohomkit.exterior import Form, Scalar
from cohomkit.lie_model import (AlmostComplexStructure, LieAlgebraModel, SymplecticForm, bigrade,
                                build_compatible_triple, ce_differential, compatible_triple,
                                darboux_complex_structure, star_operator, symplectic_operators,
                                validate_jacobi)
from cohomkit.modelfile import bundled_names, load_bundled, parse_shorthand
from cohomkit.randmodels import random_nilpotent

from oracles import koszul_betti, koszul_d, brackets_from_model


def model(text):
    return parse_shorthand(text).model


def J_from_map(n, images):
    """``images[i] = (j, s)`` means J e_i = s e_j."""
    J = [[0] * n for _ in range(n)]
    for i, (j, s) in images.items():
        J[j - 1][i - 1] = s
    return AlmostComplexStructure(tuple(map(tuple, J)))


def test_jacobi_examples():
    assert validate_jacobi(model("(0,0,0,0)"))
    assert validate_jacobi(model("(0,0,0,12)"))
    # d e^3 = e^14, d e^4 = e^13 is a genuine (solvable) Lie algebra: d^2 = 0 holds
    edited = LieAlgebraModel.from_triples("edited", 4, [[], [], [(1, 1, 4)], [(1, 1, 3)]])
    assert validate_jacobi(edited)
    # d e^5 = e^24 gives d^2 e^5 = -e^2 ^ e^13 != 0
    bad = LieAlgebraModel.from_triples("corrupt", 5, [[], [], [(1, 1, 2)], [(1, 1, 3)], [(1, 2, 4)]])
    v = validate_jacobi(bad)
    assert not v
    assert "e^5" in v.message


def test_differential_examples():
    heis = model("(0,0,12)")
    assert ce_differential(heis, 1).rank() == 1
    assert ce_differential(model("(0,0,0,0)"), 2).is_zero()
    assert model("(0,0,0,12)").betti[1] == 3


def test_betti_against_koszul_oracle():
    for name in bundled_names():
        m = load_bundled(name).model
        assert m.betti == koszul_betti(m), name


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([4, 5, 6]))
def test_random_models_satisfy_d_squared(seed, n):
    m = random_nilpotent(n, random.Random(seed))
    assert validate_jacobi(m)
    for k in range(n - 1):
        assert (ce_differential(m, k + 1) @ ce_differential(m, k)).is_zero()
    assert m.betti == koszul_betti(m)


def test_differential_matches_koszul_matrix_entrywise():
    m = load_bundled("iwasawa").model
    c = brackets_from_model(m)
    for k in range(3):
        mat, _, _ = koszul_d(m.n, c, k)
        ours = ce_differential(m, k)
        assert [[x.re for x in r] for r in ours.rows] == mat


def test_almost_complex_validation():
    with pytest.raises(ModelError):
        AlmostComplexStructure(((1, 0), (0, 1)))
    J = AlmostComplexStructure.standard(4)
    assert J.negated().negated() == J


def test_bigrade_torus_and_iwasawa():
    dc = bigrade(model("(0,0,0,0)"), AlmostComplexStructure.standard(4))
    assert all(dc.del_at(p, q).is_zero() and dc.delbar_at(p, q).is_zero() for p, q in dc.bidegrees)
    iw = load_bundled("iwasawa")
    dc = bigrade(iw.model, iw.J)
    # d phi^3 = -phi^1 ^ phi^2 is purely of type (2,0)
    d10 = dc.del_at(1, 0)
    src = dc.space(1, 0).labels
    tgt = dc.space(2, 0).labels
    col = d10.column(src.index((3,)))
    assert col[tgt.index((1, 2))] == -1
    assert sum(1 for x in col if x) == 1
    assert all(dc.delbar_at(1, 0).is_zero() for _ in [0])


def test_integrability_error():
    m = model("(0,0,0,12)")
    # J e1 = e2, J e3 = e4 is integrable here (primary Kodaira surface)
    bigrade(m, AlmostComplexStructure.standard(4))
    J = J_from_map(4, {1: (3, 1), 3: (1, -1), 2: (4, 1), 4: (2, -1)})
    with pytest.raises(IntegrabilityError) as exc:
        bigrade(m, J)
    assert "phi^" in str(exc.value)


def test_symplectic_form_validation():
    m = model("(0,0,0,12)")
    with pytest.raises(ModelError):
        SymplecticForm(m, Form(2, {(1, 2): 1, (3, 4): 1}))  # d(e34) = -e124 != 0
    with pytest.raises(ModelError):
        SymplecticForm(model("(0,0,0,0)"), Form(2, {(1, 2): 1}))


def test_symplectic_operator_examples():
    torus = model("(0,0,0,0)")
    sc = symplectic_operators(torus, SymplecticForm(torus, Form(2, {(1, 2): 1, (3, 4): 1})))
    assert all(sc.dl(k).is_zero() for k in range(5))
    kt = model("(0,0,0,12)")
    sc = symplectic_operators(kt, SymplecticForm(kt, Form(2, {(1, 4): 1, (2, 3): 1})))
    assert not sc.dl(2).is_zero()
    # closed 1-forms are d^Lambda-closed
    for v in [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]:
        assert not any(sc.dl(1).apply([Scalar(x) for x in v]))


def test_star_examples():
    t2 = model("(0,0)")
    w = SymplecticForm(t2, Form(2, {(1, 2): 1}))
    s1 = star_operator(w, 1)
    col = s1.column(0)
    assert col[0] != 0 and col[1] == 0
    t4 = model("(0,0,0,0)")
    w4 = SymplecticForm(t4, Form(2, {(1, 2): 1, (3, 4): 1}))
    # star(1) is the normalized volume omega^2 / 2!
    assert star_operator(w4, 0).column(0) == [1]


def test_compatible_triples():
    t4 = model("(0,0,0,0)")
    w = SymplecticForm(t4, Form(2, {(1, 2): 1, (3, 4): 1}))
    J = AlmostComplexStructure.standard(4)
    tri = build_compatible_triple(w, J)
    assert tri.g == tuple(tuple(Fraction(int(i == j)) for j in range(4)) for i in range(4))
    with pytest.raises(IncompatiblePair, match="positive definite"):
        build_compatible_triple(w, J.negated())
    kt = model("(0,0,0,12)")
    wk = SymplecticForm(kt, Form(2, {(1, 4): 1, (2, 3): 1}))
    Jk = J_from_map(4, {1: (4, 1), 4: (1, -1), 2: (3, 1), 3: (2, -1)})
    tri = build_compatible_triple(wk, Jk)
    assert tri.g == tuple(tuple(Fraction(int(i == j)) for j in range(4)) for i in range(4))
    # J e1 = e2 does not preserve e14 + e23
    with pytest.raises(IncompatiblePair, match="J-invariant"):
        build_compatible_triple(wk, J)
    assert compatible_triple(wk, J).J == Jk or compatible_triple(wk, J).g


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 1000))
def test_darboux_structure_is_compatible(seed):
    from cohomkit.randmodels import random_symplectic_model
    mf = random_symplectic_model(4 + 2 * (seed % 2), random.Random(seed), "r")
    w = mf.symplectic_form()
    J = darboux_complex_structure(w)
    build_compatible_triple(w, J)


def test_sl2_trap_fires_on_sign_error(monkeypatch):
    from cohomkit import lie_model
    orig = lie_model.lambda_operator
    monkeypatch.setattr(lie_model, "lambda_operator", lambda w, k: orig(w, k).scale(-1))
    kt = model("(0,0,0,12)")
    with pytest.raises(TheoremViolation, match="sl2"):
        symplectic_operators(kt, SymplecticForm(kt, Form(2, {(1, 4): 1, (2, 3): 1})))
