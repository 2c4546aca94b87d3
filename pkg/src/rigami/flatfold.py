"""Local flat-foldability: the exact reflection test and vertex classification."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from . import geometry as geo
from .geometry import Point
from .pattern import CreasePattern, VertexStar
from .scalar import DEFAULT_BITS, Interval

reflect = geo.reflect


class VertexKind(str, Enum):
    DEGREE4_FLAT_FOLDABLE = "Degree4FlatFoldable"
    COLLINEAR_PAIR = "CollinearPair"
    BOUNDARY = "Boundary"
    OTHER = "Other"


@dataclass(frozen=True)
class VertexClass:
    kind: VertexKind
    alpha: Optional[Interval] = None  # sector between canonical creases c0 and c1
    beta: Optional[Interval] = None  # sector between c1 and c2

    @property
    def foldable(self) -> bool:
        return self.kind in (VertexKind.DEGREE4_FLAT_FOLDABLE, VertexKind.COLLINEAR_PAIR)


def kawasaki_vectors(vectors: Sequence[Point]) -> bool:
    """Reflect the first vector through the other three in turn.

    Three reflections compose to a reflection through some line; the result
    equals the first vector exactly when the alternating sector sum vanishes.
    """
    if len(vectors) != 4:
        raise ValueError(f"expected 4 crease vectors, got {len(vectors)}")
    p = vectors[0]
    for q in vectors[1:]:
        p = reflect(p, q)
    return p == vectors[0]


def kawasaki_check_degree4(star: VertexStar) -> bool:
    if star.degree != 4:
        raise ValueError(f"vertex {star.center} has degree {star.degree}, not 4")
    return kawasaki_vectors(star.vectors)


def is_collinear_pair(vectors: Sequence[Point]) -> bool:
    return len(vectors) == 2 and geo.opposite(vectors[0], vectors[1])


def is_flat_foldable_quad(vectors: Sequence[Point]) -> bool:
    """Four counterclockwise crease vectors with sectors (a, b, pi-a, pi-b), 0 < a, b < pi.

    A reflection test passes for a degenerate star too (two coincident
    directions), so strictly positive turns between neighbours are required.
    """
    if len(vectors) != 4:
        return False
    for i in range(4):
        u, v = vectors[i], vectors[(i + 1) % 4]
        if geo.cross(u, v) <= 0:
            # every sector of a flat-foldable quad is strictly below pi
            return False
    return kawasaki_vectors(vectors)


def classify_vertex(pattern: CreasePattern, v: int, bits: int = DEFAULT_BITS) -> VertexClass:
    if v in pattern.boundary_set:
        return VertexClass(VertexKind.BOUNDARY)
    star = pattern.vertex_star(v, bits)
    if is_collinear_pair(star.vectors):
        return VertexClass(VertexKind.COLLINEAR_PAIR)
    if is_flat_foldable_quad(star.vectors):
        return VertexClass(
            VertexKind.DEGREE4_FLAT_FOLDABLE, star.sector_angles[0], star.sector_angles[1]
        )
    return VertexClass(VertexKind.OTHER)


def classify_all(pattern: CreasePattern, bits: int = DEFAULT_BITS) -> dict:
    return {v: classify_vertex(pattern, v, bits) for v in range(len(pattern.vertices))}
