"""Degree-4 vertex kinematics in tangent half-angle coordinates.

A flat-foldable degree-4 vertex with sectors (alpha, beta, pi-alpha, pi-beta)
between creases c0..c3 folds in exactly two one-parameter modes::

    A: (t0, t1, t2, t3) = (t, -p_a t, t,  p_a t)
    B: (t0, t1, t2, t3) = (-p_b t, t, p_b t, t)

with ``p_a = (1 - ta tb) / (1 + ta tb)`` and ``p_b = (tb - ta) / (tb + ta)``,
``ta = tan(alpha/2)`` and ``tb = tan(beta/2)``.  Everything here works on the
tangents ``t_i = tan(rho_i / 2)``; radians only appear in :func:`fold_state_3d`.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence, Tuple

import mpmath

from . import geometry as geo
from .flatfold import is_flat_foldable_quad
from .pattern import CreasePattern, VertexStar
from .scalar import DEFAULT_BITS, Interval, Scalar


class Mode(str, Enum):
    A = "A"
    B = "B"


class KinematicsError(ValueError):
    pass


class FoldInconsistent(RuntimeError):
    """Face placements disagree beyond tolerance when reached by two paths."""

    def __init__(self, residual, tol):
        super().__init__(f"loop residual {mpmath.nstr(residual, 5)} exceeds {tol}")
        self.residual = residual


class _Suppressed:
    """An infinite speed coefficient: the crease it points to cannot co-fold."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "SUPPRESSED"


SUPPRESSED = _Suppressed()


@dataclass(frozen=True)
class VertexKinematics:
    alpha: Interval
    beta: Interval
    tan_half_alpha: Scalar
    tan_half_beta: Scalar
    p_a: Scalar
    p_b: Scalar
    a_valid: bool  # p_a != 0, decided exactly from the geometry
    b_valid: bool  # p_b != 0

    @property
    def exact(self) -> bool:
        return not isinstance(self.p_a, Interval) and not isinstance(self.p_b, Interval)

    def valid(self, mode: Mode) -> bool:
        return self.a_valid if mode is Mode.A else self.b_valid

    def modes(self) -> Tuple[Mode, ...]:
        return tuple(m for m in Mode if self.valid(m))


def kinematics_from_vectors(vectors: Sequence[geo.Point], bits: int = DEFAULT_BITS) -> VertexKinematics:
    if not is_flat_foldable_quad(vectors):
        raise KinematicsError("crease vectors do not form a flat-foldable degree-4 vertex")
    v0, v1, v2, v3 = vectors
    ta = geo.tan_half_angle(v0, v1, bits)
    tb = geo.tan_half_angle(v1, v2, bits)
    pa = (1 - ta * tb) / (1 + ta * tb)
    pb = (tb - ta) / (tb + ta)
    # p_a vanishes iff alpha + beta = pi, i.e. c0 and c2 are opposite; p_b iff alpha = beta
    a_valid = not geo.opposite(v0, v2)
    b_valid = not geo.opposite(v1, v3)
    if not a_valid:
        pa = Fraction(0)
    if not b_valid:
        pb = Fraction(0)
    return VertexKinematics(
        alpha=geo.ccw_angle(v0, v1, bits),
        beta=geo.ccw_angle(v1, v2, bits),
        tan_half_alpha=ta,
        tan_half_beta=tb,
        p_a=pa,
        p_b=pb,
        a_valid=a_valid,
        b_valid=b_valid,
    )


def compute_kinematics(star: VertexStar, bits: int = DEFAULT_BITS) -> VertexKinematics:
    if star.degree != 4:
        raise KinematicsError(f"vertex {star.center} has degree {star.degree}")
    return kinematics_from_vectors(star.vectors, bits)


def mode_vector(kin: VertexKinematics, mode: Mode) -> Tuple[Scalar, Scalar, Scalar, Scalar]:
    """Speeds of c0..c3 at unit driving parameter."""
    if mode is Mode.A:
        return (Fraction(1), -kin.p_a, Fraction(1), kin.p_a)
    return (-kin.p_b, Fraction(1), kin.p_b, Fraction(1))


def speed_coefficient(kin: VertexKinematics, mode: Mode, i: int, j: int):
    """Signed ratio t_i / t_j for adjacent creases i, j; SUPPRESSED if infinite."""
    if (i - j) % 4 not in (1, 3):
        raise ValueError(f"creases {i} and {j} are not adjacent")
    s = mode_vector(kin, mode)
    if (mode is Mode.A and not kin.a_valid and j in (1, 3)) or (
        mode is Mode.B and not kin.b_valid and j in (0, 2)
    ):
        return SUPPRESSED
    return s[i] / s[j]


def single_vertex_state(kin: VertexKinematics, mode: Mode, t) -> Tuple[Scalar, ...]:
    return tuple(x * t for x in mode_vector(kin, mode))


def opposite_angle_relations(rho: Sequence, tol=0) -> bool:
    """rho0 = rho2 and rho1 = -rho3, or rho1 = rho3 and rho0 = -rho2."""
    r0, r1, r2, r3 = rho

    def zero(x):
        if isinstance(x, Interval):
            return x.lo - tol <= 0 <= x.hi + tol
        return abs(x) <= tol

    return (zero(r0 - r2) and zero(r1 + r3)) or (zero(r1 - r3) and zero(r0 + r2))


# -- 3D reconstruction ----------------------------------------------------------------

def _rz(a):
    c, s = mpmath.cos(a), mpmath.sin(a)
    return mpmath.matrix([[c, -s, 0], [s, c, 0], [0, 0, 1]])


def _rx(a):
    c, s = mpmath.cos(a), mpmath.sin(a)
    return mpmath.matrix([[1, 0, 0], [0, c, -s], [0, s, c]])


def _mp(x):
    if isinstance(x, Interval):
        x = x.mid
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator


def vertex_loop_residual(kin: VertexKinematics, tangents: Sequence, bits: int = DEFAULT_BITS):
    """max |R - I| for the product of sector and fold rotations around one vertex."""
    with mpmath.workprec(bits):
        al = 2 * mpmath.atan(_mp(kin.tan_half_alpha))
        be = 2 * mpmath.atan(_mp(kin.tan_half_beta))
        r = [2 * mpmath.atan(_mp(t)) for t in tangents]
        m = (
            _rz(mpmath.pi - be) * _rx(r[0]) * _rz(al) * _rx(r[1])
            * _rz(be) * _rx(r[2]) * _rz(mpmath.pi - al) * _rx(r[3])
        )
        return max(abs(m[i, j] - (1 if i == j else 0)) for i in range(3) for j in range(3))


def _axis_rotation(axis, angle):
    # Rodrigues' formula for a unit axis in the xy-plane
    ux, uy = axis
    c, s = mpmath.cos(angle), mpmath.sin(angle)
    k = 1 - c
    return mpmath.matrix(
        [
            [c + ux * ux * k, ux * uy * k, uy * s],
            [uy * ux * k, c + uy * uy * k, -ux * s],
            [-uy * s, ux * s, c],
        ]
    )


@dataclass(frozen=True)
class FoldState3D:
    t: Fraction
    fold_angles: Dict[int, mpmath.mpf]  # radians, valley positive
    face_placements: Dict[int, Tuple[mpmath.matrix, mpmath.matrix]]
    max_residual: mpmath.mpf

    def to_json(self) -> dict:
        def num(x):
            return mpmath.nstr(x, 20, min_fixed=-3, max_fixed=3)

        return {
            "t": f"{self.t.numerator}/{self.t.denominator}",
            "fold_angles": {str(c): num(a) for c, a in sorted(self.fold_angles.items())},
            "faces": [
                {
                    "face": f,
                    "rotation": [[num(r[i, j]) for j in range(3)] for i in range(3)],
                    "translation": [num(tr[i]) for i in range(3)],
                }
                for f, (r, tr) in sorted(self.face_placements.items())
            ],
            "max_residual": mpmath.nstr(self.max_residual, 6),
        }


def fold_state_3d(
    pattern: CreasePattern,
    crease_speeds: Mapping[int, Scalar],
    t,
    bits: int = DEFAULT_BITS,
    tol: float = 1e-9,
) -> FoldState3D:
    """Place every face rigidly at fold parameter ``t``.

    Crease ``c`` gets fold angle ``2 atan(t * speed_c)``.  Faces are reached
    by breadth-first search from face 0 across creases; every other face
    adjacency is then a loop check, and the worst mismatch is reported.
    """
    t = Fraction(t)
    faces = pattern.faces
    with mpmath.workprec(bits):
        angles = {
            c: 2 * mpmath.atan(_mp(t) * _mp(crease_speeds.get(c, 0))) for c in pattern.creases
        }
        # each crease borders the face on its left for one direction
        sides: Dict[int, list] = {}
        for f, face in enumerate(faces):
            for k, (v, e) in enumerate(face.pairs()):
                w = face.vertices[(k + 1) % len(face.vertices)]
                sides.setdefault(e, []).append((f, v, w))
        place: Dict[int, Tuple] = {}
        residual = mpmath.mpf(0)
        if faces:
            place[0] = (mpmath.eye(3), mpmath.matrix([0, 0, 0]))
        queue = deque([0] if faces else [])
        while queue:
            f = queue.popleft()
            rf, tf = place[f]
            for k, (v, e) in enumerate(faces[f].pairs()):
                if not pattern.edges[e].is_crease:
                    continue
                w = faces[f].vertices[(k + 1) % len(faces[f].vertices)]
                for g, _, _ in sides.get(e, []):
                    if g == f:
                        continue
                    a = [_mp(x) for x in pattern.vertices[v]]
                    b = [_mp(x) for x in pattern.vertices[w]]
                    d = [b[0] - a[0], b[1] - a[1]]
                    n = mpmath.sqrt(d[0] ** 2 + d[1] ** 2)
                    # valley: the face across the crease turns up
                    rot = _axis_rotation((d[0] / n, d[1] / n), -angles[e])
                    av = mpmath.matrix([a[0], a[1], 0])
                    rg = rf * rot
                    tg = rf * (av - rot * av) + tf
                    if g not in place:
                        place[g] = (rg, tg)
                        queue.append(g)
                    else:
                        r0, t0 = place[g]
                        dev = max(
                            max(abs(rg[i, j] - r0[i, j]) for i in range(3) for j in range(3)),
                            max(abs(tg[i] - t0[i]) for i in range(3)),
                        )
                        residual = max(residual, dev)
    if residual > tol:
        raise FoldInconsistent(residual, tol)
    return FoldState3D(t, angles, place, residual)
