"""Brute-force ground truth: Partition, 1-in-3 SAT, small rigid foldability.

Nothing here shares search code with :mod:`rigami.solver`; rigid
foldability is decided by enumerating every option vector and calling the
face-closure check.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .flatfold import VertexKind, classify_vertex
from .pattern import CreasePattern
from .scalar import DEFAULT_BITS, DEFAULT_CAP

PARTITION_CAP = 30
SAT_CAP = 24
RIGID_ALL_CAP = 16
RIGID_OPTIONAL_CAP = 12


class OracleCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    answer: bool
    witness: Optional[Any] = None


def partition_oracle(elements: Sequence[int]) -> OracleResult:
    """Brute-force equal-sum split.

    The witness is the half that contains the first element, choosing the
    fewest elements and then the lexicographically smallest positions; its
    values are listed in position order.
    """
    a = [int(x) for x in elements]
    if len(a) > PARTITION_CAP:
        raise OracleCapExceeded(f"{len(a)} elements exceed the cap of {PARTITION_CAP}")
    if any(x < 1 for x in a):
        raise ValueError("elements must be positive integers")
    total = sum(a)
    if total % 2 or not a:
        return OracleResult(False)
    best = None
    for mask in range(1, 1 << len(a), 2):  # odd masks: position 0 is in S
        idx = tuple(i for i in range(len(a)) if mask >> i & 1)
        if 2 * sum(a[i] for i in idx) == total:
            key = (len(idx), idx)
            if best is None or key < best:
                best = key
    if best is None:
        return OracleResult(False)
    return OracleResult(True, [a[i] for i in best[1]])


@dataclass(frozen=True)
class SatInstance:
    num_vars: int
    clauses: Tuple[Tuple[int, int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(int(x) for x in c) for c in self.clauses))
        if self.num_vars < 1:
            raise ValueError("need at least one variable")
        if not self.clauses:
            raise ValueError("need at least one clause")
        for c in self.clauses:
            if len(c) != 3 or any(not 1 <= x <= self.num_vars for x in c):
                raise ValueError(f"bad clause {c}")

    def satisfied_by(self, assignment: Dict[int, bool]) -> bool:
        return all(sum(bool(assignment[x]) for x in c) == 1 for c in self.clauses)


def one_in_three_oracle(inst: SatInstance) -> OracleResult:
    """Smallest satisfying assignment, ordered as the binary number x_n ... x_1."""
    if inst.num_vars > SAT_CAP:
        raise OracleCapExceeded(f"{inst.num_vars} variables exceed the cap of {SAT_CAP}")
    for mask in range(1 << inst.num_vars):
        asg = {i + 1: bool(mask >> i & 1) for i in range(inst.num_vars)}
        if inst.satisfied_by(asg):
            return OracleResult(True, asg)
    return OracleResult(False)


def brute_force_rigid(
    pattern: CreasePattern,
    epsilon=Fraction(0),
    variant: str = "all",
    bits: int = DEFAULT_BITS,
    cap: int = DEFAULT_CAP,
    collect: bool = False,
) -> OracleResult:
    """Enumerate option vectors and keep those passing the face-closure check.

    With ``collect`` the witness is the list of every valid certificate;
    otherwise it is the first one found.
    """
    from .solver import admissible_local_subsets, certificate_from_options, check_closure

    verts = list(pattern.interior_vertices)
    if variant == "all":
        for v in verts:
            kind = classify_vertex(pattern, v, bits).kind
            if kind not in (VertexKind.DEGREE4_FLAT_FOLDABLE, VertexKind.COLLINEAR_PAIR):
                raise ValueError(f"vertex {v} is {kind.value}")
        if len(verts) > RIGID_ALL_CAP:
            raise OracleCapExceeded(f"{len(verts)} vertices exceed the cap of {RIGID_ALL_CAP}")
    elif variant == "optional":
        if len(verts) > RIGID_OPTIONAL_CAP:
            raise OracleCapExceeded(f"{len(verts)} vertices exceed the cap of {RIGID_OPTIONAL_CAP}")
    else:
        raise ValueError(f"unknown variant {variant!r}")

    options = []
    for v in verts:
        opts = admissible_local_subsets(pattern, v, bits)
        if variant == "all":
            full = frozenset(pattern.incident_creases(v))
            opts = [o for o in opts if o.active == full]
        elif len(opts) > 4:
            raise OracleCapExceeded(f"vertex {v} has {len(opts)} admissible subsets (cap 4)")
        options.append(opts)

    interior = set(verts)
    free = [
        c for c in pattern.creases
        if pattern.edges[c].u not in interior and pattern.edges[c].v not in interior
    ]
    if variant == "all":
        free_choices = [tuple(free)]
    else:
        free_choices = [tuple(s) for k in range(len(free) + 1) for s in combinations(free, k)]

    found: List = []
    for combo in product(*options):
        chosen = dict(zip(verts, combo))
        if not _consistent(pattern, chosen, interior):
            continue
        active_here = set().union(*(o.active for o in combo)) if combo else set()
        for fc in free_choices:
            if variant == "optional" and not active_here and not fc:
                continue
            cert = certificate_from_options(pattern, chosen, Fraction(epsilon), fc, bits)
            if check_closure(pattern, cert, Fraction(epsilon), bits, cap):
                if not collect:
                    return OracleResult(True, cert)
                found.append(cert)
    if collect and found:
        return OracleResult(True, found)
    return OracleResult(False)


def _consistent(pattern: CreasePattern, chosen, interior) -> bool:
    # a crease between two interior vertices is active at both ends or at neither
    for c in pattern.creases:
        e = pattern.edges[c]
        if e.u in interior and e.v in interior:
            if (c in chosen[e.u].active) != (c in chosen[e.v].active):
                return False
    return True
