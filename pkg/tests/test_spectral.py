from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from formlap.coeffring import J, ratj
from formlap.forms import OperatorPoly
from formlap.spectral import (SpectralDataError, SpectralModel, SpectralPoint, eval_scalar,
                              kernel_dim, sphere_preset, synthetic_model, torus_preset)


def pt(kind, lam, mult=1):
    return SpectralPoint(kind, Fraction(lam), mult)


def test_eval_scalar_examples():
    op = OperatorPoly.make(4, 2, J * -2, (ratj(2),), (ratj(2),))
    assert eval_scalar(op, pt("coexact", 1), Fraction(1)) == 0
    assert eval_scalar(OperatorPoly.linear(4, 2, 1, -1), pt("harmonic", 0), Fraction(1)) == 0
    e2 = OperatorPoly.make(4, 2, 0, (ratj(0), ratj(1)), ())
    assert eval_scalar(e2, pt("exact", 3), Fraction(1)) == 9


def test_eval_scalar_pole():
    op = OperatorPoly.make(4, 2, 1 / J, (), ())
    with pytest.raises(Exception):
        eval_scalar(op, pt("exact", 1), Fraction(0))


def test_kernel_dim_examples():
    op = OperatorPoly.make(4, 2, J * -2, (ratj(2),), (ratj(2),))
    model = SpectralModel(4, 2, Fraction(1), (pt("coexact", 1, 5),))
    assert kernel_dim(op, model) == 5
    assert kernel_dim(OperatorPoly.linear(4, 2, 1, -1),
                      SpectralModel(4, 2, Fraction(1), (pt("harmonic", 0, 7),))) == 7
    assert kernel_dim(op, SpectralModel(4, 2, Fraction(1), ())) == 0


point_strategy = st.builds(
    pt,
    st.sampled_from(["exact", "coexact"]),
    st.fractions(min_value=Fraction(1, 3), max_value=8, max_denominator=4),
    st.integers(min_value=1, max_value=5),
)


@given(st.lists(point_strategy, max_size=6),
       st.integers(min_value=-3, max_value=3), st.integers(min_value=-3, max_value=3),
       st.fractions(min_value=-2, max_value=2, max_denominator=3))
@settings(max_examples=60)
def test_eval_multiplicative_over_product(points, a, b, c):
    p = OperatorPoly.make(6, 2, ratj(c) * J, (ratj(a),), (ratj(b),))
    q = OperatorPoly.make(6, 2, ratj(1), (ratj(b),), (ratj(a), ratj(1)))
    prod = p * q
    for point in points:
        lhs = eval_scalar(prod, point, Fraction(2))
        rhs = eval_scalar(p, point, Fraction(2)) * eval_scalar(q, point, Fraction(2))
        assert lhs == rhs


@given(st.lists(point_strategy, max_size=6))
@settings(max_examples=40)
def test_kernel_dim_subadditive(points):
    model = SpectralModel(6, 2, Fraction(1), tuple(points))
    p = OperatorPoly.make(6, 2, J * -1, (ratj(1),), (ratj(1),))
    q = OperatorPoly.make(6, 2, J * -4, (ratj(1),), (ratj(2),))
    assert kernel_dim(p * q, model) <= kernel_dim(p, model) + kernel_dim(q, model)


def test_kernel_dim_additive_when_distinct():
    # factor kernel eigenvalues pairwise distinct per kind: equality holds
    p = OperatorPoly.make(6, 2, J * -1, (ratj(1),), (ratj(1),))
    q = OperatorPoly.make(6, 2, J * -4, (ratj(1),), (ratj(2),))
    model = SpectralModel(6, 2, Fraction(1), (
        pt("exact", 1, 2), pt("coexact", 1, 3), pt("exact", 4, 5), pt("coexact", 2, 7),
        pt("exact", 9, 1), pt("coexact", 5, 1)))
    assert kernel_dim(p * q, model) == kernel_dim(p, model) + kernel_dim(q, model) == 17


def test_model_json_round_trip(tmp_path):
    model = SpectralModel(3, 1, Fraction(3, 2), (
        pt("harmonic", 0, 1), pt("exact", 3, 4), pt("coexact", 4, 6)), "synthetic", True)
    path = tmp_path / "model.json"
    model.save(path)
    loaded = SpectralModel.load(path)
    assert loaded == model
    data = path.read_text()
    assert '"3/2"' in data and '"schema": 1' in data


def test_sphere_preset():
    m = sphere_preset(3, 1, 2)
    have = {(p.kind, p.eigenvalue): p.multiplicity for p in m.points}
    assert have[("exact", Fraction(3))] == 4
    assert have[("exact", Fraction(8))] == 9
    assert have[("coexact", Fraction(4))] == 6
    assert have[("coexact", Fraction(9))] == 16
    assert m.j_value == Fraction(3, 2)


def test_sphere_preset_function_case():
    m = sphere_preset(3, 0, 2)
    kinds = {p.kind for p in m.points}
    assert "exact" not in kinds
    assert ("harmonic" in kinds)
    m0 = sphere_preset(3, 0, 0)
    assert [p.kind for p in m0.points] == ["harmonic"]


def test_sphere_preset_errors(tmp_path):
    with pytest.raises(SpectralDataError):
        sphere_preset(4, 1, 2)
    missing = tmp_path / "absent.json"
    with pytest.raises(SpectralDataError):
        sphere_preset(3, 1, 2, data_path=missing)
    untrusted = tmp_path / "untrusted.json"
    untrusted.write_text('{"schema": 1, "trusted": false, "n": 3, "families": []}')
    with pytest.raises(SpectralDataError):
        sphere_preset(3, 1, 2, data_path=untrusted)


def test_torus_preset():
    m = torus_preset(3, 1, 2)
    assert m.j_value == 0
    have = {(p.kind, p.eigenvalue): p.multiplicity for p in m.points}
    assert have[("harmonic", Fraction(0))] == 3
    # |xi|^2 = 1 has 6 lattice modes; exact part C(2,0) = 1, coexact C(2,1) = 2 each
    assert have[("exact", Fraction(1))] == 6
    assert have[("coexact", Fraction(1))] == 12


def test_synthetic_model_deterministic():
    a = synthetic_model(6, 2, 3, Fraction(1))
    b = synthetic_model(6, 2, 3, Fraction(1))
    assert a == b


def test_harmonic_point_validation():
    with pytest.raises(SpectralDataError):
        SpectralPoint("harmonic", Fraction(2), 1)
    with pytest.raises(SpectralDataError):
        SpectralPoint("mystery", Fraction(0), 1)
