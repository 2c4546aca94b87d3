"""Shared strategies and small builders for the test suite."""
from fractions import Fraction

from hypothesis import strategies as st


# tangents of half angles in (0, 1) keep every sector strictly between 0 and pi/2
def half_tangents(lo=Fraction(1, 50), hi=Fraction(49, 50)):
    return st.fractions(min_value=lo, max_value=hi, max_denominator=60)


def mutations(pattern, cert, rng):
    """One random single-field change of ``cert`` that must make it invalid.

    Returns ``(label, mutated)``.
    """
    from dataclasses import replace

    from rigami.kinematics import Mode

    active = sorted(cert.active_creases)
    inactive = sorted(set(pattern.creases) - cert.active_creases)
    kinds = ["negate", "zero", "double", "drop", "eps"]
    if cert.vertex_modes:
        kinds.append("mode")
    if inactive:
        kinds.append("add")
    kind = rng.choice(kinds)
    speeds = dict(cert.crease_speeds)
    c = rng.choice(active)
    if kind == "negate":
        speeds[c] = -speeds[c]
    elif kind == "zero":
        speeds[c] = Fraction(0)
    elif kind == "double":
        speeds[c] = speeds[c] * rng.choice([2, 3, Fraction(1, 2), -1 - Fraction(rng.randrange(1, 9), 10)])
    elif kind == "drop":
        return f"drop {c}", replace(cert, active_creases=cert.active_creases - {c})
    elif kind == "add":
        d = rng.choice(inactive)
        speeds[d] = Fraction(1)
        return f"add {d}", replace(cert, active_creases=cert.active_creases | {d}, crease_speeds=speeds)
    elif kind == "mode":
        v = rng.choice(sorted(cert.vertex_modes))
        modes = dict(cert.vertex_modes)
        modes[v] = Mode.B if modes[v] is Mode.A else Mode.A
        return f"mode {v}", replace(cert, vertex_modes=modes)
    elif kind == "eps":
        return "eps", replace(cert, epsilon_used=-Fraction(rng.randrange(1, 100), 100))
    return f"{kind} {c}", replace(cert, crease_speeds=speeds)
