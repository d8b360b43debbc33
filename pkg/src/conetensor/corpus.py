"""The bundled instance corpus.

Every instance is built by a function below and shipped as a JSON file in
``conetensor/data`` so runs need no generation step.  Polygons keep their
cyclic vertex order in the file and are rebuilt as :class:`PolygonCone`.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional

from . import ratlin as rl
from .cone import Cone, PolygonCone, cone_from_json, direct_sum, homogenize_polytope, \
    polygon_homogenization, regular_polygon, simplex_cone
from .lorentz import boundary_point, inner_polyhedral_approx


@dataclass(frozen=True)
class Instance:
    name: str
    description: str
    cone: Cone

    @property
    def is_polygon(self) -> bool:
        return isinstance(self.cone, PolygonCone)

    def to_json(self) -> dict:
        if isinstance(self.cone, PolygonCone):
            cone = {"dim": 3, "generators": rl.mat_to_json(self.cone.cyclic_rays)}
            kind = "polygon"
        else:
            cone = self.cone.to_json("generators" if self.cone._gens is not None else "inequalities")
            kind = "cone"
        return {"name": self.name, "description": self.description, "kind": kind, "cone": cone}

    @classmethod
    def from_json(cls, data) -> "Instance":
        if data.get("kind") == "polygon":
            rays = [rl.vec(v) for v in data["cone"]["generators"]]
            cone = polygon_homogenization([r[:2] for r in rays])
        else:
            cone = cone_from_json(data["cone"])
        return cls(data["name"], data["description"], cone)


SQUARE = [(1, 1), (-1, 1), (-1, -1), (1, -1)]
CUBE = [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]


def square_cone() -> PolygonCone:
    return polygon_homogenization(SQUARE)


def cube_cone() -> Cone:
    return homogenize_polytope(CUBE)


def random_polygon(m: int, rng: random.Random) -> PolygonCone:
    """Random rational convex m-gon: distinct points on the unit circle
    in counterclockwise order, then a random orientation-preserving
    rational affine map (convex position survives affine maps)."""
    ts: set = set()
    while len(ts) < m:
        ts.add(Fraction(rng.randint(-24, 24), rng.randint(1, 4)))
    pts = [boundary_point(t)[:2] for t in sorted(ts, reverse=True)]
    while True:
        a, b, c, d = (rng.randint(-3, 3) for _ in range(4))
        if a * d - b * c > 0:
            break
    sx, sy = Fraction(rng.randint(-3, 3), 2), Fraction(rng.randint(-3, 3), 2)
    return polygon_homogenization([(a * x + b * y + sx, c * x + d * y + sy) for x, y in pts])


def build_corpus() -> list[Instance]:
    out = []
    for n in range(1, 6):
        out.append(Instance(f"orthant{n}", f"nonnegative orthant in R^{n}", Cone.orthant(n)))
    out.append(Instance("simplex3_skew", "simplex cone on a non-standard basis of R^3",
                        simplex_cone([(1, 0, 0), (1, 1, 0), (1, 2, 3)])))
    for k in range(3, 9):
        out.append(Instance(f"polygon{k}", f"homogenized rational {k}-gon inscribed in the unit circle",
                            regular_polygon(k)))
    out.append(Instance("square", "homogenized square with vertices (+-1, +-1)", square_cone()))
    out.append(Instance("square_plus_ray", "square cone (+) a half-line, in R^4",
                        direct_sum(square_cone(), Cone.orthant(1))))
    out.append(Instance("pentagon_plus_ray", "pentagon cone (+) a half-line, in R^4",
                        direct_sum(regular_polygon(5), Cone.orthant(1))))
    out.append(Instance("orthant2_plus_orthant2", "(R>=0)^2 (+) (R>=0)^2, a simplex cone in R^4",
                        direct_sum(Cone.orthant(2), Cone.orthant(2))))
    out.append(Instance("cube", "cone over the unit cube at height 1, in R^4", cube_cone()))
    out.append(Instance("square_pyramid", "cone over a square pyramid at height 1, in R^4",
                        homogenize_polytope([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1)])))
    out.append(Instance("partial_simplex_2in3", "two independent rays in R^3",
                        Cone(3, generators=[(1, 0, 0), (0, 1, 0)])))
    out.append(Instance("partial_simplex_1in2", "one ray in R^2", Cone(2, generators=[(1, 1)])))
    out.append(Instance("lorentz_approx12", "12 exact boundary rays of L^3, homogenized",
                        inner_polyhedral_approx(12)))
    out.append(Instance("half_plane", "the half-plane x2 >= 0 in R^2", Cone(2, inequalities=[(0, 1)])))
    out.append(Instance("wedge", "R x (R>=0)^2: a wedge with one-dimensional lineality",
                        Cone(3, inequalities=[(0, 1, 0), (0, 0, 1)])))
    return out


def _data_dir():
    return resources.files("conetensor") / "data"


def write_corpus(directory: Optional[Path] = None) -> list[Path]:
    directory = Path(directory) if directory else Path(str(_data_dir()))
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for inst in build_corpus():
        p = directory / f"{inst.name}.json"
        p.write_text(json.dumps(inst.to_json(), indent=1) + "\n")
        paths.append(p)
    return paths


def load_corpus() -> list[Instance]:
    """Shipped instances, in file-name order."""
    files = sorted((f for f in _data_dir().iterdir() if f.name.endswith(".json")), key=lambda f: f.name)
    return [Instance.from_json(json.loads(f.read_text())) for f in files]


def get_instance(name: str) -> Instance:
    for inst in load_corpus():
        if inst.name == name:
            return inst
    raise KeyError(name)


def proper_generating(instances) -> list[Instance]:
    return [i for i in instances if i.cone.is_proper() and i.cone.is_generating()]
