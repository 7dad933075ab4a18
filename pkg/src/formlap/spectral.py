"""Finite spectral models of the Hodge decomposition.

A model is a finite list of (kind, eigenvalue, multiplicity) points; an
expanded operator acts on a point as a scalar by E -> eigenvalue on
exact points, F -> eigenvalue on coexact points, both -> 0 on harmonic
points, and J -> the model's fixed rational value.  Null-space
dimensions are sums of multiplicities over points where that scalar
vanishes.

Presets: the unit round 3-sphere (loaded from a versioned data file
with provenance, never hardcoded in the code path) and the flat torus
(computed from lattice modes, J = 0).  Models are also importable from
the simplicial oracle after its eigenvalues have been matched against
the trusted data file.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .forms import OperatorPoly

KINDS = ("exact", "coexact", "harmonic")


class SpectralDataError(ValueError):
    """Missing, untrusted, or malformed spectral data."""


@dataclass(frozen=True)
class SpectralPoint:
    kind: str
    eigenvalue: Fraction
    multiplicity: int

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise SpectralDataError(f"unknown point kind {self.kind!r}")
        if self.kind == "harmonic" and self.eigenvalue != 0:
            raise SpectralDataError("harmonic points carry eigenvalue 0")
        if self.multiplicity < 0:
            raise SpectralDataError("negative multiplicity")


@dataclass(frozen=True)
class SpectralModel:
    n: int
    k: int
    j_value: Fraction
    points: tuple[SpectralPoint, ...]
    source: str = "synthetic"  # synthetic | sphere-preset | torus-preset | dec-import
    trusted: bool = True

    def as_json(self) -> dict:
        return {
            "schema": 1,
            "n": self.n,
            "k": self.k,
            "j_value": _frac_str(self.j_value),
            "points": [
                {"kind": p.kind, "eigenvalue": _frac_str(p.eigenvalue), "multiplicity": p.multiplicity}
                for p in self.points
            ],
            "source": self.source,
            "trusted": self.trusted,
        }

    @staticmethod
    def from_json(data: dict) -> SpectralModel:
        if data.get("schema") != 1:
            raise SpectralDataError(f"unsupported spectral model schema {data.get('schema')!r}")
        pts = tuple(
            SpectralPoint(p["kind"], Fraction(p["eigenvalue"]), int(p["multiplicity"]))
            for p in data["points"]
        )
        return SpectralModel(int(data["n"]), int(data["k"]), Fraction(data["j_value"]),
                             pts, data.get("source", "synthetic"), bool(data.get("trusted", False)))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.as_json(), indent=2, sort_keys=True) + "\n")

    @staticmethod
    def load(path: str | Path) -> SpectralModel:
        return SpectralModel.from_json(json.loads(Path(path).read_text()))


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def eval_scalar(op: OperatorPoly, pt: SpectralPoint, j_value: Fraction) -> Fraction:
    """Scalar action of an expanded operator on one spectral point."""
    e = pt.eigenvalue if pt.kind == "exact" else Fraction(0)
    f = pt.eigenvalue if pt.kind == "coexact" else Fraction(0)
    acc = op.const.eval_at(j_value)
    for p in range(1, len(op.e_coeffs) + 1):
        acc += op.e_coeff(p).eval_at(j_value) * e**p
    for q in range(1, len(op.f_coeffs) + 1):
        acc += op.f_coeff(q).eval_at(j_value) * f**q
    return acc


def kernel_dim(op: OperatorPoly, model: SpectralModel) -> int:
    """Sum of multiplicities over model points annihilated by the operator."""
    return sum(pt.multiplicity for pt in model.points
               if eval_scalar(op, pt, model.j_value) == 0)


def factor_kernel_content(op: OperatorPoly, j_value: Fraction) -> set[tuple[str, Fraction | None]]:
    """Null-space content of a degree-one factor a E + b F + c at fixed J.

    Entries (kind, eigenvalue); eigenvalue None means every point of the
    kind (a degenerate factor whose scalar vanishes identically there).
    """
    a = op.e_coeff(1).eval_at(j_value)
    b = op.f_coeff(1).eval_at(j_value)
    c = op.const.eval_at(j_value)
    out: set[tuple[str, Fraction | None]] = set()
    if c == 0:
        out.add(("harmonic", None))
        out.add(("exact", Fraction(0)) if a != 0 else ("exact", None))
        out.add(("coexact", Fraction(0)) if b != 0 else ("coexact", None))
    else:
        if a != 0:
            out.add(("exact", -c / a))
        if b != 0:
            out.add(("coexact", -c / b))
    return out


# -- presets -----------------------------------------------------------------


def _sphere_data_path() -> Path:
    return Path(str(resources.files("formlap").joinpath("data/sphere_s3.json")))


def sphere_preset(n: int, k: int, j_max: int, data_path: str | Path | None = None) -> SpectralModel:
    """Unit round sphere model from the versioned data file, shells 1..j_max.

    The file must be marked trusted (it is shipped after validation by
    the simplicial oracle; see the data file's provenance block).
    """
    path = Path(data_path) if data_path is not None else _sphere_data_path()
    if not path.exists():
        raise SpectralDataError(f"sphere spectral data file not found: {path}")
    data = json.loads(path.read_text())
    if data.get("schema") != 1:
        raise SpectralDataError("unsupported sphere data schema")
    if not data.get("trusted", False):
        raise SpectralDataError("sphere spectral data file is not marked trusted")
    if data.get("n") != n:
        raise SpectralDataError(f"no sphere data for n = {n}")
    fam = next((f for f in data["families"] if f["k"] == k), None)
    if fam is None:
        raise SpectralDataError(f"no sphere data for k = {k}")
    points: list[SpectralPoint] = []
    if fam["harmonic"] > 0:
        points.append(SpectralPoint("harmonic", Fraction(0), fam["harmonic"]))
    for kind in ("exact", "coexact"):
        for shell in fam[kind]:
            if shell["shell"] <= j_max:
                points.append(SpectralPoint(kind, Fraction(shell["eigenvalue"]),
                                            int(shell["multiplicity"])))
    return SpectralModel(n, k, Fraction(data["j_value"]), tuple(points), "sphere-preset", True)


def torus_preset(n: int, k: int, max_norm_sq: int) -> SpectralModel:
    """Flat torus model (2*pi-periodic): eigenvalues |xi|^2 up to a cutoff.

    Per nonzero lattice mode, a k-form space splits into an exact part of
    dimension C(n-1, k-1) and a coexact part of dimension C(n-1, k);
    harmonic forms are the constants, C(n, k) of them.  J = 0.
    """
    counts: dict[int, int] = {}
    bound = math.isqrt(max_norm_sq)

    def count_modes(dim: int, remaining: int) -> dict[int, int]:
        if dim == 0:
            return {0: 1}
        sub = count_modes(dim - 1, remaining)
        out: dict[int, int] = {}
        for x in range(-bound, bound + 1):
            for m, c in sub.items():
                t = m + x * x
                if t <= remaining:
                    out[t] = out.get(t, 0) + c
        return out

    counts = count_modes(n, max_norm_sq)
    points = [SpectralPoint("harmonic", Fraction(0), math.comb(n, k))]
    for m in sorted(counts):
        if m == 0:
            continue
        r = counts[m]
        if k >= 1:
            points.append(SpectralPoint("exact", Fraction(m), r * math.comb(n - 1, k - 1)))
        if k <= n - 1:
            points.append(SpectralPoint("coexact", Fraction(m), r * math.comb(n - 1, k)))
    return SpectralModel(n, k, Fraction(0), tuple(points), "torus-preset", True)


def synthetic_model(n: int, k: int, ell: int, j_value: Fraction,
                    seed: int = 0, extra_points: int = 3) -> SpectralModel:
    """Deterministic synthetic model adapted to one operator's factor list.

    Includes every factor kernel eigenvalue that is annihilated by
    exactly one factor (spectral coincidences between factors are
    omitted: the decomposition theorems presume per-kind distinctness,
    and the verifier reports coincidences rather than asserting an
    outcome), plus harmonic content and off-kernel noise points.
    """
    import random

    from .factory import closed_factors

    rng = random.Random((n * 1009 + k * 101 + ell * 11 + seed) & 0x7FFFFFFF)
    factors = closed_factors(n, k, ell).factors

    def scalar_at(kind: str, lam: Fraction) -> list[int]:
        pt = SpectralPoint(kind, lam, 1)
        return [i for i, f in enumerate(factors) if eval_scalar(f, pt, j_value) == 0]

    points: list[SpectralPoint] = []
    seen: set[tuple[str, Fraction]] = set()

    harmonic_killers = [i for i, f in enumerate(factors) if f.const.eval_at(j_value) == 0]
    if len(harmonic_killers) <= 1:
        points.append(SpectralPoint("harmonic", Fraction(0), rng.randint(1, 4)))

    for f in factors:
        for kind, lam in sorted(factor_kernel_content(f, j_value),
                                key=lambda t: (t[0], str(t[1]))):
            if lam is None or lam == 0 or (kind, lam) in seen:
                continue
            if len(scalar_at(kind, lam)) == 1:
                points.append(SpectralPoint(kind, lam, rng.randint(1, 5)))
                seen.add((kind, lam))

    noise = 0
    step = 0
    while noise < extra_points and step < 200:
        step += 1
        kind = rng.choice(("exact", "coexact"))
        lam = j_value * Fraction(rng.randint(1, 60), rng.randint(1, 7)) + step
        if lam == 0 or (kind, lam) in seen:
            continue
        if len(scalar_at(kind, lam)) <= 1:
            points.append(SpectralPoint(kind, lam, rng.randint(1, 3)))
            seen.add((kind, lam))
            noise += 1
    return SpectralModel(n, k, j_value, tuple(points), "synthetic", True)
