"""1-in-3 SAT compiled to gadgets: layout, local tables and witnesses."""
import pytest

from rigami import sat
from rigami.oracles import SatInstance
from rigami.solver import admissible_local_subsets, decide_optional_creases, verify_certificate

ONE = SatInstance(4, [(1, 2, 3)])


@pytest.fixture(scope="module")
def one_clause():
    return sat.reduce_sat(ONE)


def row_values(table):
    return ["".join(v for _, v in row) for row in table]


# -- layout --------------------------------------------------------------------------

def test_layout_dimensions():
    assert (sat.layout(ONE).rows, sat.layout(ONE).cols) == (7, 4)
    two = sat.layout(SatInstance(4, [(1, 2, 3), (1, 2, 3)]))
    assert (two.rows, two.cols) == (11, 7)


def test_layout_places_splitters_on_literal_columns():
    lay = sat.layout(SatInstance(4, [(2, 4, 4)]))
    assert lay.variables == (2, 4)
    assert lay.stamps[(0, 1)] == sat.VAR_SPLITTER
    assert lay.stamps[(1, 2)] == lay.stamps[(1, 3)] == sat.VAR_SPLITTER
    assert lay.stamps[(0, 0)] == sat.VAR_CROSSING
    assert lay.stamps[(2, 0)] == "clause"
    assert lay.stamps[(5, 1)] == "converter_crossover"


def test_wire_values_follow_the_assignment():
    lay = sat.layout(ONE)
    rows, cols = sat.wire_values(lay, {1: False, 2: True, 3: False, 4: False})
    assert [rows[i] for i in range(3)] == [False, True, False]
    assert cols == {0: True, 1: False, 2: True, 3: False}
    assert rows[lay.clause_row(0, 3)]


def test_emitted_pattern_metadata(one_clause):
    m = one_clause.pattern.meta
    assert m["reduction"] == "sat"
    assert m["grid"] == [7, 4]
    assert one_clause.epsilon == 0


def test_every_vertex_can_fold_something(one_clause):
    p = one_clause.pattern
    for v in p.interior_vertices:
        assert any(o.kind != "empty" for o in admissible_local_subsets(p, v))


# -- gadget tables -------------------------------------------------------------------

@pytest.mark.parametrize("kind", ["splitter", "staircase", "widening", "converter"])
def test_splitters_copy_their_signal(kind):
    assert row_values(sat.signal_table(sat.make_gadget(kind))) == ["FFFF", "TTTT"]


@pytest.mark.parametrize("kind", ["suppressor", "wide_suppressor"])
def test_suppressors_block_crossing(kind):
    rows = row_values(sat.signal_table(sat.make_gadget(kind)))
    assert "TTTT" not in rows
    assert {"FFFF", "TTFF", "FFTT"} <= set(rows)


@pytest.mark.parametrize("kind", ["crossover", "rotated_crossover"])
def test_crossovers_pass_both_wires(kind):
    rows = row_values(sat.signal_table(sat.make_gadget(kind)))
    assert {"FFFF", "TTFF", "FFTT", "TTTT"} <= set(rows)
    # a wire never changes value across the stamp
    assert all(r[0] == r[1] and r[2] == r[3] for r in rows if "P" not in r)


def test_gadget_ports_hold_four_creases():
    g = sat.make_gadget("widening")
    assert g.widths["T"] == ("wide",)
    assert all(len(w) == 4 for side in g.ports.values() for w in side)


def test_unknown_gadget():
    with pytest.raises(ValueError):
        sat.make_gadget("sprocket")


def test_staircase_ratio():
    assert sat.staircase_ratio([1, 2, 4, 8]) == sat.F(1, 4)
    assert sat.staircase_ratio([8, 4, 2, 1]) == sat.F(1, 4)
    assert sat.staircase_ratio([1, 1, 1, 1]) == 1


# -- end to end ----------------------------------------------------------------------

def test_satisfiable_clause_folds(one_clause):
    v = decide_optional_creases(one_clause.pattern, 0)
    assert v.answer
    assert verify_certificate(one_clause.pattern, v.certificate)


def test_repeated_literal_clause_does_not_fold():
    out = sat.reduce_sat(SatInstance(4, [(1, 1, 1)]))
    assert not decide_optional_creases(out.pattern, 0).answer


@pytest.mark.parametrize("x", [1, 2, 3])
def test_witness_certificates(one_clause, x):
    cert = sat.witness_certificate(ONE, {x: True}, one_clause)
    assert verify_certificate(one_clause.pattern, cert)
    ratios = [(d, sat.staircase_ratio(s)) for _, d, s in sat.clause_row_speeds(one_clause.pattern, sat.layout(ONE), cert)]
    assert ratios == [(x - 1, sat.F(1, 4))]


@pytest.mark.parametrize("asg", [{}, {1: True, 2: True}])
def test_witness_rejects_non_solutions(one_clause, asg):
    with pytest.raises(ValueError):
        sat.witness_certificate(ONE, asg, one_clause)
