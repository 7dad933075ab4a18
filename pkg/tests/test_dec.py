import math
import warnings
from fractions import Fraction

import numpy as np
import pytest

from formlap.dec import (MeshError, betti_numbers, build_mesh, compare_sphere_spectrum,
                         dec_import_model, hodge_operators, hodge_stars, integer_rank,
                         is_well_centered, pl_volume, spectrum, subdivide_barycentric,
                         unit_sphere_edge_scale)


@pytest.fixture(scope="module")
def five_cell():
    return build_mesh("boundary-4-simplex")


@pytest.fixture(scope="module")
def torus3():
    return build_mesh("torus3-grid", 3)


@pytest.fixture(scope="module")
def c600():
    return build_mesh("cell600")


def test_f_vectors(five_cell, torus3, c600):
    assert five_cell.counts() == (5, 10, 10, 5)
    assert c600.counts() == (120, 720, 1200, 600)
    assert torus3.counts()[3] == 27 * 6


def test_euler_characteristics(five_cell, torus3, c600):
    assert five_cell.euler_characteristic() == 0
    assert torus3.euler_characteristic() == 0
    assert c600.euler_characteristic() == 0


def test_boundary_of_boundary(five_cell, torus3, c600):
    for mesh in (five_cell, torus3, c600):
        for d in (1, 2):
            prod = mesh.boundaries[d] @ mesh.boundaries[d + 1]
            assert prod.nnz == 0 or not np.any(prod.toarray())


def test_invalid_preset():
    with pytest.raises(MeshError):
        build_mesh("dodecaplex")
    with pytest.raises(MeshError):
        build_mesh("torus3-grid", 2)


def test_betti_numbers_exact(five_cell, torus3, c600):
    assert betti_numbers(five_cell) == (1, 0, 0, 1)
    assert betti_numbers(c600) == (1, 0, 0, 1)
    assert betti_numbers(torus3) == (1, 3, 3, 1)


def test_integer_rank_small():
    import scipy.sparse

    m = scipy.sparse.csr_matrix(np.array([[1, 2], [2, 4]]))
    assert integer_rank(m) == 1
    m2 = scipy.sparse.csr_matrix(np.array([[2, 0], [0, 3]]))  # no unit pivots
    assert integer_rank(m2) == 2


def test_hodge_operator_structure(five_cell):
    up, down = hodge_operators(five_cell, 0)
    assert down.nnz == 0
    up1, down1 = hodge_operators(five_cell, 1)
    assert abs((up1 @ down1)).max() < 1e-10
    assert abs((down1 @ up1)).max() < 1e-10


def test_harmonic_dim_from_full_laplacian(five_cell):
    up, down = hodge_operators(five_cell, 0)
    lap = (up + down).toarray()
    assert int(np.sum(np.abs(np.linalg.eigvalsh(lap)) < 1e-9)) == 1


def test_well_centered_detection(five_cell, torus3, c600):
    assert is_well_centered(five_cell)
    assert is_well_centered(c600)
    assert not is_well_centered(torus3)  # grid tets have boundary circumcenters


def test_barycentric_fallback_warns(torus3):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        hodge_stars(torus3)
    assert any("not well-centered" in str(w.message) for w in caught)


def test_sphere_function_spectrum(c600):
    spec = spectrum(c600, 0, 6)
    nonzero = [lam for lam, kind in spec if kind != "harmonic"]
    # the lowest function shell is reproduced almost exactly on this mesh
    assert abs(nonzero[0] * unit_sphere_edge_scale(c600) - 3.0) < 0.2
    assert sum(1 for lam, kind in spec if kind == "harmonic") == 1


def test_sphere_comparison_within_tolerance(c600):
    from formlap.spectral import sphere_preset

    ref = sphere_preset(3, 1, 2)
    reference = [(p.kind, p.eigenvalue, p.multiplicity) for p in ref.points]
    cmp = compare_sphere_spectrum(c600, 1, 40, reference)
    assert cmp["max_rel_error"] <= 0.10
    kinds = {e["kind"] for e in cmp["entries"]}
    assert kinds == {"exact", "coexact"}
    for entry in cmp["entries"]:
        assert entry["cluster_size"] == entry["multiplicity"]


def test_dec_import_model(c600):
    model = dec_import_model(c600, 1, 40)
    assert model.source == "dec-import"
    assert model.j_value == Fraction(3, 2)
    have = {(p.kind, p.eigenvalue): p.multiplicity for p in model.points}
    assert have[("exact", Fraction(3))] == 4
    assert have[("coexact", Fraction(4))] == 6


def test_torus_function_eigenvalue_converges():
    # 2-pi-periodic torus: the lowest nonzero function eigenvalue tends to 1
    errs = []
    for m in (3, 5):
        mesh = build_mesh("torus3-grid", m)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            spec = spectrum(mesh, 0, 8)
        lam = next(l for l, kind in spec if l > 1e-9)
        errs.append(abs(lam - 1.0))
    assert errs[1] < errs[0]
    assert errs[1] < 0.15


def test_subdivision_requires_embedding(torus3):
    with pytest.raises(MeshError):
        subdivide_barycentric(torus3)


def test_mesh_cache_round_trip(tmp_path, monkeypatch):
    from formlap.dec import build_mesh_cached

    monkeypatch.setenv("FORMLAP_CACHE_DIR", str(tmp_path))
    a = build_mesh_cached("boundary-4-simplex")
    assert (tmp_path / "mesh-v1-boundary-4-simplex.json").exists()
    b = build_mesh_cached("boundary-4-simplex")
    assert a.counts() == b.counts()
    assert betti_numbers(b) == (1, 0, 0, 1)
