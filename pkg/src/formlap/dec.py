"""Discrete exterior calculus on triangulated 3-manifolds.

Supplies the numerical side of the spectral checks: simplicial meshes
of the flat 3-torus and of the 3-sphere (the boundary of the 4-simplex
and the 600-cell), diagonal Hodge stars (circumcentric with a
barycentric fallback on meshes that are not well-centered), the
up/down Laplacian pieces, exact Betti numbers by integer rank
computation, and approximate eigenvalues of the two pieces for
comparison against the trusted sphere spectrum file.

Boundary matrices are exact integer matrices; Betti numbers never pass
through floating point.  Eigenvalues do, and are treated as
mesh-limited approximations with an explicit tolerance everywhere.
"""

from __future__ import annotations

import itertools
import json
import math
import os
import warnings
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

MESH_SCHEMA = 1
PHI = (1 + math.sqrt(5)) / 2


class MeshError(ValueError):
    pass


@dataclass
class SimplicialMesh:
    """Simplicial 3-complex with per-simplex representative coordinates.

    ``simplices[d]`` lists sorted vertex-index tuples; ``coords[d][i]``
    holds one embedding of simplex i of dimension d as a (d+1, E) array
    (rows aligned with the sorted tuple).  For periodic meshes the
    representative is unwrapped inside one top simplex, which is enough
    for all metric quantities.  ``boundaries[d]`` is the integer matrix
    of the boundary operator from dimension d to d-1 (d >= 1).
    """

    name: str
    simplices: list[list[tuple[int, ...]]]
    coords: list[list[np.ndarray]]
    boundaries: list[scipy.sparse.csr_matrix | None]
    embedded: bool
    tet_sub: list[list[dict[int, int]]]  # per tet, per dim: local subset -> simplex index

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def counts(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.simplices)

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(s) for d, s in enumerate(self.simplices))


def _simplex_volume(pts: np.ndarray) -> float:
    """Volume of the simplex spanned by the rows of pts (any ambient dim)."""
    edges = pts[1:] - pts[0]
    if edges.shape[0] == 0:
        return 1.0
    gram = edges @ edges.T
    det = np.linalg.det(gram)
    return math.sqrt(max(det, 0.0)) / math.factorial(edges.shape[0])


def _circumcenter(pts: np.ndarray) -> np.ndarray:
    """Circumcenter of a simplex, inside its affine hull."""
    if pts.shape[0] == 1:
        return pts[0]
    edges = pts[1:] - pts[0]
    gram = 2.0 * edges @ edges.T
    rhs = np.einsum("ij,ij->i", edges, edges)
    sol = np.linalg.solve(gram, rhs)
    return pts[0] + sol @ edges


def _barycenter(pts: np.ndarray) -> np.ndarray:
    return pts.mean(axis=0)


def _build_from_tets(name: str, tets: list[tuple[tuple[int, ...], np.ndarray]],
                     embedded: bool) -> SimplicialMesh:
    """Assemble the full complex from top simplices with explicit coordinates.

    Each tet comes as (sorted vertex ids, coords aligned with the ids).
    """
    index: list[dict[tuple[int, ...], int]] = [dict() for _ in range(4)]
    simplices: list[list[tuple[int, ...]]] = [[] for _ in range(4)]
    coords: list[list[np.ndarray]] = [[] for _ in range(4)]
    tet_sub: list[list[dict[int, int]]] = []

    # register vertices in ascending id order so vertex simplex indices
    # coincide with the rank of the id (identity for contiguous ids)
    seen: dict[int, np.ndarray] = {}
    for ids, pts in tets:
        for i, vid in enumerate(ids):
            seen.setdefault(vid, pts[[i]])
    for vid in sorted(seen):
        index[0][(vid,)] = len(simplices[0])
        simplices[0].append((vid,))
        coords[0].append(seen[vid])

    for ids, pts in tets:
        sub_maps: list[dict[int, int]] = [dict() for _ in range(4)]
        for d in range(4):
            for subset in itertools.combinations(range(4), d + 1):
                key = tuple(ids[i] for i in subset)
                if key not in index[d]:
                    index[d][key] = len(simplices[d])
                    simplices[d].append(key)
                    coords[d].append(pts[list(subset)])
                local = sum(1 << i for i in subset)
                sub_maps[d][local] = index[d][key]
        tet_sub.append(sub_maps)

    boundaries: list[scipy.sparse.csr_matrix | None] = [None]
    for d in range(1, 4):
        rows, cols, vals = [], [], []
        for j, simplex in enumerate(simplices[d]):
            for i in range(d + 1):
                face = simplex[:i] + simplex[i + 1 :]
                rows.append(index[d - 1][face])
                cols.append(j)
                vals.append((-1) ** i)
        boundaries.append(scipy.sparse.csr_matrix(
            (vals, (rows, cols)), shape=(len(simplices[d - 1]), len(simplices[d])), dtype=np.int64))

    return SimplicialMesh(name, simplices, coords, boundaries, embedded, tet_sub)


# -- presets -------------------------------------------------------------------


def _boundary_4_simplex() -> SimplicialMesh:
    """The 5-vertex triangulation of the 3-sphere (boundary of the 4-simplex)."""
    basis = np.eye(5)
    centered = basis - basis.mean(axis=0)
    q, _ = np.linalg.qr(centered.T)
    verts = centered @ q[:, :4]
    verts /= np.linalg.norm(verts, axis=1)[:, None]
    tets = []
    for subset in itertools.combinations(range(5), 4):
        tets.append((tuple(subset), verts[list(subset)]))
    return _build_from_tets("boundary-4-simplex", tets, embedded=True)


def _cell600_vertices() -> np.ndarray:
    verts: list[tuple[float, ...]] = []
    for i in range(4):
        for s in (1.0, -1.0):
            v = [0.0] * 4
            v[i] = s
            verts.append(tuple(v))
    for signs in itertools.product((0.5, -0.5), repeat=4):
        verts.append(signs)
    even_perms = [p for p in itertools.permutations(range(4))
                  if _perm_sign(p) == 1]
    base = (PHI / 2, 0.5, 1 / (2 * PHI), 0.0)
    for p in even_perms:
        arranged = [base[p.index(i)] for i in range(4)]
        nz = [i for i in range(4) if arranged[i] != 0.0]
        for signs in itertools.product((1.0, -1.0), repeat=3):
            v = list(arranged)
            for slot, s in zip(nz, signs):
                v[slot] = s * abs(v[slot])
            verts.append(tuple(v))
    unique = sorted({tuple(v) for v in np.round(np.array(verts), 12).tolist()})
    out = np.array(unique)
    if out.shape != (120, 4):
        raise MeshError(f"600-cell vertex generation produced {out.shape}")
    return out


def _perm_sign(p: tuple[int, ...]) -> int:
    sign = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def _cell600() -> SimplicialMesh:
    """The 600-cell: 120 unit quaternions, edges at inner product phi/2."""
    verts = _cell600_vertices()
    gram = verts @ verts.T
    adj = np.abs(gram - PHI / 2) < 1e-9
    neighbors = [set(np.nonzero(adj[i])[0].tolist()) for i in range(120)]
    tets = []
    for i in range(120):
        for j in sorted(neighbors[i]):
            if j <= i:
                continue
            common_ij = neighbors[i] & neighbors[j]
            for k in sorted(common_ij):
                if k <= j:
                    continue
                for l in sorted(common_ij & neighbors[k]):
                    if l <= k:
                        continue
                    ids = (i, j, k, l)
                    tets.append((ids, verts[list(ids)]))
    mesh = _build_from_tets("cell600", tets, embedded=True)
    if mesh.counts() != (120, 720, 1200, 600):
        raise MeshError(f"600-cell f-vector {mesh.counts()}")
    return mesh


def _torus3_grid(m: int) -> SimplicialMesh:
    """Flat 3-torus, side 2*pi, m^3 cubes each cut into 6 tetrahedra."""
    if m < 3:
        raise MeshError("torus grid needs m >= 3 (smaller grids identify simplex vertices)")
    h = 2 * math.pi / m
    tets = []
    for base in itertools.product(range(m), repeat=3):
        for perm in itertools.permutations(range(3)):
            offs = [np.zeros(3, dtype=int)]
            cur = np.zeros(3, dtype=int)
            for axis in perm:
                cur = cur.copy()
                cur[axis] += 1
                offs.append(cur)
            ids = []
            pts = []
            for off in offs:
                lattice = tuple((np.array(base) + off) % m)
                ids.append(lattice[0] * m * m + lattice[1] * m + lattice[2])
                pts.append((np.array(base) + off) * h)
            order = np.argsort(ids)
            ids_sorted = tuple(int(ids[i]) for i in order)
            if len(set(ids_sorted)) != 4:
                raise MeshError("degenerate tet from periodic identification")
            pts_sorted = np.array([pts[i] for i in order])
            tets.append((ids_sorted, pts_sorted))
    return _build_from_tets(f"torus3-grid({m})", tets, embedded=False)


def build_mesh(preset: str, m: int | None = None) -> SimplicialMesh:
    """Build one of the presets: torus3-grid(m), boundary-4-simplex, cell600."""
    if preset == "boundary-4-simplex":
        return _boundary_4_simplex()
    if preset == "cell600":
        return _cell600()
    if preset == "torus3-grid":
        if m is None:
            raise MeshError("torus3-grid needs a grid size m")
        return _torus3_grid(m)
    raise MeshError(f"unknown mesh preset {preset!r}")


def subdivide_barycentric(mesh: SimplicialMesh, project_radius: float | None = None) -> SimplicialMesh:
    """One barycentric subdivision (embedded meshes only).

    With project_radius set, new vertices are pushed radially onto the
    sphere of that radius: refinement of a sphere approximant has to
    track the sphere itself, otherwise the spectrum converges to the
    inscribed polytope's and not to the round one.
    """
    if not mesh.embedded:
        raise MeshError("barycentric subdivision is only supported for embedded meshes")
    offsets = [0]
    for d in range(4):
        offsets.append(offsets[-1] + len(mesh.simplices[d]))
    bary = [[_barycenter(pts) for pts in mesh.coords[d]] for d in range(4)]
    if project_radius is not None:
        bary = [[b * (project_radius / np.linalg.norm(b)) for b in row] for row in bary]

    tets = []
    for t_idx, tet in enumerate(mesh.simplices[3]):
        sub = mesh.tet_sub[t_idx]
        for flag_perm in itertools.permutations(range(4)):
            locals_ = []
            acc = 0
            for v in flag_perm:
                acc |= 1 << v
                locals_.append(acc)
            ids = []
            pts = []
            for d, local in enumerate(locals_):
                s_idx = sub[d][local]
                ids.append(offsets[d] + s_idx)
                pts.append(bary[d][s_idx])
            order = np.argsort(ids)
            ids_sorted = tuple(int(ids[i]) for i in order)
            pts_sorted = np.array([pts[i] for i in order])
            tets.append((ids_sorted, pts_sorted))
    return _build_from_tets(mesh.name + "+bary", tets, embedded=True)


# -- Hodge stars ----------------------------------------------------------------


def _flag_dual_volumes(mesh: SimplicialMesh, centers: str) -> list[np.ndarray] | None:
    """Dual volumes per simplex via flags inside each tet.

    centers = "circumcentric" uses the orthogonal-projection property of
    circumcenters (signed heights); "barycentric" uses plain simplex
    volumes of the barycenter flags (always positive).  Returns None if
    a circumcentric accumulation produced a nonpositive total.
    """
    duals = [np.zeros(len(mesh.simplices[d])) for d in range(4)]
    for t_idx in range(len(mesh.simplices[3])):
        sub = mesh.tet_sub[t_idx]
        pts = mesh.coords[3][t_idx]
        center_of: dict[int, np.ndarray] = {}
        for local in range(1, 16):
            subset = [i for i in range(4) if local & (1 << i)]
            sp = pts[subset]
            center_of[local] = _circumcenter(sp) if centers == "circumcentric" else _barycenter(sp)

        full = 15
        duals[3][t_idx] += 0.0  # dual of a tet is its center point (volume 1 handled in star)
        for d in range(3):
            for subset in itertools.combinations(range(4), d + 1):
                local = sum(1 << i for i in subset)
                s_idx = sub[d][local]
                rest = [i for i in range(4) if i not in subset]
                for chain in itertools.permutations(rest):
                    locs = [local]
                    acc = local
                    for v in chain:
                        acc |= 1 << v
                        locs.append(acc)
                    cs = [center_of[l] for l in locs]
                    if centers == "circumcentric":
                        vol = 1.0
                        for step in range(len(cs) - 1):
                            u = cs[step + 1] - cs[step]
                            opp = [i for i in range(4) if locs[step + 1] & (1 << i) and not locs[step] & (1 << i)][0]
                            w_vec = pts[opp] - cs[step]
                            h = np.linalg.norm(u)
                            sgn = 1.0 if u @ w_vec >= 0 else -1.0
                            vol *= sgn * h
                        vol /= math.factorial(3 - d)
                    else:
                        vol = _simplex_volume(np.array(cs))
                    duals[d][s_idx] += vol
    for d in range(3):
        if np.any(duals[d] <= 1e-14):
            return None if centers == "circumcentric" else _raise_degenerate(d)
    return duals


def _raise_degenerate(d: int):
    raise MeshError(f"degenerate barycentric dual volume at dimension {d}")


def hodge_stars(mesh: SimplicialMesh) -> list[scipy.sparse.dia_matrix]:
    """Diagonal Hodge stars, circumcentric when well-centered else barycentric."""
    duals = _flag_dual_volumes(mesh, "circumcentric")
    if duals is None:
        warnings.warn(
            f"mesh {mesh.name} is not well-centered; falling back to barycentric stars",
            RuntimeWarning, stacklevel=2)
        duals = _flag_dual_volumes(mesh, "barycentric")
        assert duals is not None
    stars = []
    for d in range(4):
        primal = np.array([_simplex_volume(pts) for pts in mesh.coords[d]])
        dual = duals[d] if d < 3 else np.ones(len(mesh.simplices[3]))
        stars.append(scipy.sparse.diags(dual / primal))
    return stars


def hodge_operators(mesh: SimplicialMesh, k: int,
                    stars: list[scipy.sparse.dia_matrix] | None = None
                    ) -> tuple[scipy.sparse.csr_matrix, scipy.sparse.csr_matrix]:
    """(up, down) pieces of the Hodge Laplacian on k-cochains.

    up is the codifferential-after-d piece, down the d-after-codifferential
    piece; both are symmetric in the star inner product and their products
    vanish because the boundary of a boundary is empty.
    """
    if not 0 <= k <= mesh.dim:
        raise MeshError(f"degree {k} outside 0..{mesh.dim}")
    if stars is None:
        stars = hodge_stars(mesh)
    nk = len(mesh.simplices[k])
    inv_k = scipy.sparse.diags(1.0 / stars[k].diagonal())
    if k < mesh.dim:
        d_k = mesh.boundaries[k + 1].T.astype(float)
        up = inv_k @ d_k.T @ stars[k + 1] @ d_k
    else:
        up = scipy.sparse.csr_matrix((nk, nk))
    if k > 0:
        d_km1 = mesh.boundaries[k].T.astype(float)
        inv_km1 = scipy.sparse.diags(1.0 / stars[k - 1].diagonal())
        down = d_km1 @ inv_km1 @ d_km1.T @ stars[k]
    else:
        down = scipy.sparse.csr_matrix((nk, nk))
    return up.tocsr(), down.tocsr()


# -- exact rank and Betti numbers -------------------------------------------------


def integer_rank(matrix: scipy.sparse.spmatrix) -> int:
    """Exact rank of an integer matrix over Q.

    Sparse elimination preferring unit pivots (no fractions appear then);
    falls back to exact fraction pivoting when no unit entry remains.
    """
    coo = matrix.tocoo()
    rows: dict[int, dict[int, Fraction | int]] = {}
    for r, c, v in zip(coo.row, coo.col, coo.data):
        if v:
            rows.setdefault(int(r), {})[int(c)] = int(v)
    col_rows: dict[int, set[int]] = {}
    for r, row in rows.items():
        for c in row:
            col_rows.setdefault(c, set()).add(r)
    rank = 0
    while rows:
        best = None
        for r, row in rows.items():
            for c, v in row.items():
                if v == 1 or v == -1:
                    fill = (len(row) - 1) * (len(col_rows[c]) - 1)
                    if best is None or fill < best[0]:
                        best = (fill, r, c)
                        if fill == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            r = next(iter(rows))
            c = next(iter(rows[r]))
            best = (0, r, c)
        _, pr, pc = best
        pivot_row = rows.pop(pr)
        pv = pivot_row[pc]
        for c in pivot_row:
            col_rows[c].discard(pr)
        for r in list(col_rows.get(pc, ())):
            row = rows[r]
            factor = row[pc] * pv if pv in (1, -1) else Fraction(row[pc], pv)
            for c, v in pivot_row.items():
                nv = row.get(c, 0) - factor * v
                if nv:
                    row[c] = nv
                    col_rows.setdefault(c, set()).add(r)
                else:
                    if c in row:
                        del row[c]
                        col_rows[c].discard(r)
            if not row:
                del rows[r]
        col_rows.pop(pc, None)
        rank += 1
    return rank


def betti_numbers(mesh: SimplicialMesh) -> tuple[int, int, int, int]:
    """Exact Betti numbers from boundary ranks."""
    ranks = [0] + [integer_rank(mesh.boundaries[d]) for d in range(1, 4)] + [0]
    counts = mesh.counts()
    return tuple(counts[d] - ranks[d] - ranks[d + 1] for d in range(4))  # type: ignore[return-value]


# -- spectra ------------------------------------------------------------------------


def is_well_centered(mesh: SimplicialMesh) -> bool:
    return _flag_dual_volumes(mesh, "circumcentric") is not None


def _diagonal_pencil(mesh: SimplicialMesh, k: int,
                     stars: list[scipy.sparse.dia_matrix]) -> tuple:
    nk = len(mesh.simplices[k])
    star_k = stars[k]
    a_up = scipy.sparse.csr_matrix((nk, nk))
    a_down = scipy.sparse.csr_matrix((nk, nk))
    if k < mesh.dim:
        d_k = mesh.boundaries[k + 1].T.astype(float)
        a_up = (d_k.T @ stars[k + 1] @ d_k).tocsr()
    if k > 0:
        d_km1 = mesh.boundaries[k].T.astype(float)
        inv_km1 = scipy.sparse.diags(1.0 / stars[k - 1].diagonal())
        c = (star_k @ d_km1).tocsr()
        a_down = (c @ inv_km1 @ c.T).tocsr()
    return (a_up + a_down).tocsr(), a_up, scipy.sparse.csr_matrix(star_k)


def _lowest_pairs(a_full, a_up, mass, count: int, b_k: int) -> list[tuple[float, str]]:
    """Lowest nonzero eigenpairs classified exact/coexact, plus exact harmonics."""
    nk = a_full.shape[0]
    if nk <= 2500:
        vals, vecs = scipy.linalg.eigh(a_full.toarray(), mass.toarray())
    elif nk <= 6000:
        vals, vecs = scipy.sparse.linalg.eigsh(
            a_full, k=min(count + b_k + 8, nk - 1), M=mass.tocsc(),
            sigma=-1e-3, which="LM")
    else:
        # shift-invert factorisations fill in badly here; a preconditioned
        # block solver finds the lowest modes in seconds instead
        rng = np.random.default_rng(0)
        x0 = rng.standard_normal((nk, count + b_k + 4))
        prec = scipy.sparse.diags(1.0 / np.maximum(a_full.diagonal(), 1e-12)).tocsr()
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            vals, vecs = scipy.sparse.linalg.lobpcg(
                a_full, x0, B=mass.tocsr(), M=prec, largest=False,
                maxiter=400, tol=1e-6)
    order = np.argsort(vals)
    out: list[tuple[float, str]] = [(0.0, "harmonic")] * b_k
    top = float(vals[order[-1]]) if len(order) else 1.0
    tol = max(top, 1.0) * 1e-9
    taken = 0
    for idx in order:
        lam = float(vals[idx])
        if lam <= tol:
            continue  # numerically-zero directions are counted exactly via b_k
        v = vecs[:, idx]
        up_part = float(v @ (a_up @ v))
        total = float(v @ (a_full @ v))
        kind = "coexact" if up_part > total / 2 else "exact"
        out.append((lam, kind))
        taken += 1
        if taken >= count:
            break
    return sorted(out, key=lambda t: t[0])


def spectrum(mesh: SimplicialMesh, k: int, count: int,
             stars: list[scipy.sparse.dia_matrix] | None = None,
             method: str = "auto", betti_k: int | None = None) -> list[tuple[float, str]]:
    """Lowest eigenvalues of the two Laplacian pieces on k-cochains.

    Returns (eigenvalue, kind) pairs sorted by eigenvalue; the harmonic
    entries come from the exact Betti number, never from numerical
    zeros.  Nonzero eigenpairs are classified exact/coexact by the
    Rayleigh quotient of the up piece.  Callers that already know the
    k-th Betti number (a refined mesh of a verified one, say) can pass
    it to skip the exact rank computation.

    method "auto" uses diagonal circumcentric stars on well-centered
    meshes and the Galerkin (Whitney) matrices otherwise: the diagonal
    barycentric substitute is measurably inconsistent on skewed
    elements and is not used for eigenvalues.
    """
    if not 0 <= k <= mesh.dim:
        raise MeshError(f"degree {k} outside 0..{mesh.dim}")
    nk = len(mesh.simplices[k])
    if count > nk:
        raise MeshError(f"requested {count} eigenvalues of a {nk}-dimensional space")
    b_k = betti_numbers(mesh)[k] if betti_k is None else betti_k
    if method == "auto":
        if stars is not None or is_well_centered(mesh):
            method = "circumcentric"
        else:
            method = "whitney"
    if method == "circumcentric":
        a_full, a_up, mass = _diagonal_pencil(mesh, k, stars if stars is not None else hodge_stars(mesh))
    elif method == "whitney":
        from .whitney import galerkin_laplacian

        if k > 1:
            raise MeshError("galerkin spectra implemented for degrees 0 and 1 only")
        a_full, a_up, mass = galerkin_laplacian(mesh, k)
    else:
        raise MeshError(f"unknown spectrum method {method!r}")
    return _lowest_pairs(a_full, a_up, mass, count, b_k)


def pl_volume(mesh: SimplicialMesh) -> float:
    return float(sum(_simplex_volume(pts) for pts in mesh.coords[3]))


def sphere_scale_factor(mesh: SimplicialMesh) -> float:
    """Volume-based eigenvalue scaling onto the unit sphere (2/3 power)."""
    return (pl_volume(mesh) / (2 * math.pi ** 2)) ** (2.0 / 3.0)


def unit_sphere_edge_scale(mesh: SimplicialMesh) -> float:
    """Eigenvalue scaling onto the unit sphere via edge geodesic lengths.

    Each PL edge is the chord of a unit-sphere arc; restoring geodesic
    edge lengths multiplies the metric by (arc/chord)^2, hence the
    eigenvalues by the mean squared chord-to-arc ratio.
    """
    total = 0.0
    for pts in mesh.coords[1]:
        chord = float(np.linalg.norm(pts[1] - pts[0]))
        arc = 2 * math.asin(min(chord / 2, 1.0))
        total += (chord / arc) ** 2
    return total / len(mesh.coords[1])


# -- comparison with the trusted sphere data ----------------------------------------


def _cluster(values: list[float], rel_gap: float = 0.06) -> list[tuple[float, int]]:
    """Group a sorted eigenvalue list into (mean, size) clusters.

    Discretization splits an exact multiplet by a few percent; distinct
    low sphere eigenvalues sit tens of percent apart, so a relative gap
    threshold separates them cleanly.
    """
    clusters: list[tuple[float, int]] = []
    cur: list[float] = []
    for v in values:
        if cur and v - cur[-1] > rel_gap * max(cur[-1], 1e-12):
            clusters.append((sum(cur) / len(cur), len(cur)))
            cur = []
        cur.append(v)
    if cur:
        clusters.append((sum(cur) / len(cur), len(cur)))
    return clusters


def compare_sphere_spectrum(mesh: SimplicialMesh, k: int, count: int,
                            reference: list[tuple[str, Fraction, int]],
                            shells_per_kind: int = 1, betti_k: int | None = None) -> dict:
    """Relative discrepancies of the lowest per-kind eigenvalue shells.

    reference lists (kind, exact eigenvalue, multiplicity) sorted per
    kind.  Computed eigenvalues are scaled onto the unit sphere by the
    edge-geodesic factor, clustered into approximate multiplets, and the
    cluster means are compared to the reference shells.
    """
    scale = unit_sphere_edge_scale(mesh)
    spec = spectrum(mesh, k, count, betti_k=betti_k)
    result: dict = {"mesh": mesh.name, "k": k, "scale": scale, "entries": []}
    for kind in ("exact", "coexact"):
        refs = [(float(v), mult) for kd, v, mult in reference if kd == kind]
        got = sorted(lam * scale for lam, kd in spec if kd == kind)
        clusters = _cluster(got)
        for i, (ref, mult) in enumerate(refs[:shells_per_kind]):
            if i >= len(clusters):
                break
            mean, size = clusters[i]
            result["entries"].append(
                {"kind": kind, "shell": i + 1, "reference": ref, "computed": mean,
                 "rel_error": abs(mean - ref) / ref,
                 "multiplicity": mult, "cluster_size": size})
    result["max_rel_error"] = max((e["rel_error"] for e in result["entries"]), default=math.inf)
    return result


def dec_import_model(mesh: SimplicialMesh, k: int, count: int,
                     rtol: float = 0.10, shells_per_kind: int = 1) -> "SpectralModel":
    """Promote oracle eigenvalues into an exact spectral model.

    The lowest shells_per_kind clusters per kind (unit-sphere scaled) are
    matched to the nearest trusted reference eigenvalue within rtol and
    promoted to that exact rational, with the measured cluster sizes as
    multiplicities.  A shell that matches nothing aborts the import: a
    model with unexplained spectral content must not feed the kernel
    checks.  Higher shells are discarded as mesh-unresolved.
    """
    from .spectral import SpectralModel, SpectralPoint, sphere_preset

    reference = sphere_preset(3, k, j_max=8)
    scale = unit_sphere_edge_scale(mesh)
    spec = spectrum(mesh, k, count)
    points: list[SpectralPoint] = []
    b_k = sum(p.multiplicity for p in reference.points if p.kind == "harmonic")
    measured_b = sum(1 for lam, kd in spec if kd == "harmonic")
    if measured_b != b_k:
        raise MeshError(f"harmonic dimension {measured_b} disagrees with reference {b_k}")
    if b_k:
        points.append(SpectralPoint("harmonic", Fraction(0), b_k))
    for kind in ("exact", "coexact"):
        refs = sorted(p.eigenvalue for p in reference.points if p.kind == kind)
        got = sorted(lam * scale for lam, kd in spec if kd == kind)
        for mean, size in _cluster(got)[:shells_per_kind]:
            best = min(refs, key=lambda r: abs(mean - float(r)), default=None)
            if best is None or abs(mean - float(best)) > rtol * float(best):
                raise MeshError(
                    f"computed {kind} eigenvalue {mean:.4f} matches no reference value "
                    f"within {rtol:.0%}")
            points.append(SpectralPoint(kind, best, size))
    return SpectralModel(3, k, reference.j_value, tuple(points), "dec-import", True)


# -- mesh cache ----------------------------------------------------------------------


def cache_dir() -> Path | None:
    env = os.environ.get("FORMLAP_CACHE_DIR")
    return Path(env) if env else None


def mesh_cache_key(preset: str, m: int | None) -> str:
    return f"mesh-v{MESH_SCHEMA}-{preset}" + (f"-{m}" if m is not None else "")


def build_mesh_cached(preset: str, m: int | None = None) -> SimplicialMesh:
    """build_mesh with an optional JSON cache under FORMLAP_CACHE_DIR."""
    cdir = cache_dir()
    if cdir is None:
        return build_mesh(preset, m)
    cdir.mkdir(parents=True, exist_ok=True)
    path = cdir / (mesh_cache_key(preset, m) + ".json")
    if path.exists():
        try:
            return _mesh_from_json(json.loads(path.read_text()))
        except Exception:
            path.unlink()
    mesh = build_mesh(preset, m)
    path.write_text(json.dumps(_mesh_to_json(mesh)))
    return mesh


def _mesh_to_json(mesh: SimplicialMesh) -> dict:
    return {
        "schema": MESH_SCHEMA,
        "name": mesh.name,
        "embedded": mesh.embedded,
        "tets": [
            {"ids": list(mesh.simplices[3][i]), "pts": mesh.coords[3][i].tolist()}
            for i in range(len(mesh.simplices[3]))
        ],
    }


def _mesh_from_json(data: dict) -> SimplicialMesh:
    if data.get("schema") != MESH_SCHEMA:
        raise MeshError("unsupported mesh cache schema")
    tets = [(tuple(t["ids"]), np.array(t["pts"])) for t in data["tets"]]
    return _build_from_tets(data["name"], tets, embedded=data["embedded"])
