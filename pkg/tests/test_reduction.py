from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tetravex.core import (
    LEFT, RIGHT, TOP, Boundary, FormatError, Instance, Sentinel, Tile, Tiling, serialize_instance,
    validate_tiling,
)
from tetravex.reduction import (
    AssignBlock, Assignment, CountReport, Junction, LabelPlan, OneInThreeInstance, Padding,
    ReductionError, TopStart, check_sentinels, decode_assignment, expected_counts,
    layout_witness, pad_map, pad_to_square, parse_1in3, parse_map, reduce, sat_oracle,
    serialize_1in3, serialize_map,
)
from tetravex.solver import solve

YES = OneInThreeInstance(3, ((1, 2, 3),))
NO = OneInThreeInstance(1, ((1, 1, 1),))
TWO = OneInThreeInstance(4, ((1, 2, 3), (1, 2, 4)))


@st.composite
def formulas(draw, max_n=4, max_m=3):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, max_m))
    clause = st.tuples(*(st.integers(1, n),) * 3)
    return OneInThreeInstance(n, tuple(draw(st.lists(clause, min_size=m, max_size=m))))


def bits(s: str) -> Assignment:
    return Assignment.from_bits(s)


# -- 1in3 format and oracle ---------------------------------------------------

def test_parse_examples():
    assert parse_1in3("p 1in3 3 1\n1 2 3") == YES
    assert parse_1in3("p 1in3 1 1\n1 1 1\n") == NO


@pytest.mark.parametrize("text", [
    "p 1in3 2 1\n1 -2 2",
    "p 1in3 2 1\n1 0 2",
    "p 1in3 2 1\n1 3 2",
    "p 1in3 2 2\n1 2 2",
    "p 1in3 2 1\n1 2",
    "p cnf 2 1\n1 2 2",
    "",
])
def test_parse_errors(text):
    with pytest.raises(FormatError):
        parse_1in3(text)


@settings(max_examples=50, deadline=None)
@given(formulas())
def test_1in3_round_trip(sat):
    assert parse_1in3(serialize_1in3(sat)) == sat


def test_oracle_examples():
    assert [str(a) for a in sat_oracle(YES)] == ["001", "010", "100"]
    assert sat_oracle(NO) == []
    assert sorted(str(a) for a in sat_oracle(TWO)) == ["0011", "0100", "1000"]


def test_oracle_guard():
    with pytest.raises(ValueError):
        sat_oracle(OneInThreeInstance(21, ((1, 2, 3),)))


# -- label plan and geometry ----------------------------------------------------

@pytest.mark.parametrize("n, m", [(1, 1), (3, 2), (5, 3)])
def test_label_ranges_disjoint(n, m):
    plan = LabelPlan(n, m)
    var = {plan.variable(i) for i in range(1, n + 1)}
    cls = {plan.clause(p) for p in range(1, m + 1)}
    jun = {plan.junction(p, s) for p in range(1, m + 1) for s in (1, 2, 3)}
    link = {plan.link(i) for i in range(1, n + 2)}
    ruler = {plan.ruler(r) for r in range(12 * m + 1)}
    groups = [var, cls, jun, link, ruler]
    assert sum(map(len, groups[:4])) == len(set().union(*groups[:4]))
    for a, b in itertools.combinations(groups, 2):
        assert not a & b
    assert min(jun) > n + m
    assert max(link) < plan.ruler_base <= min(ruler)
    assert max(ruler) < plan.frame_base


def test_dimensions_n1_m1():
    inst, rmap = reduce(NO)
    assert (inst.width, inst.height, inst.size) == (6, 13, 78)
    assert (rmap.width, rmap.height) == (6, 13)


def test_expected_counts_examples():
    c = expected_counts(1, 1)
    assert (c.junction_tiles, c.vertical_wire_cells, c.horizontal_wire_cells,
            c.crossing_cells, c.filler_tiles) == (12, 12, 18, 0, 18)
    c = expected_counts(2, 1)
    assert (c.vertical_wire_cells, c.horizontal_wire_cells, c.crossing_cells) == (36, 42, 12)


@pytest.mark.parametrize("n, m", list(itertools.product(range(1, 5), range(1, 4))))
def test_count_conformance(n, m):
    rng = random.Random(n * 10 + m)
    sat = OneInThreeInstance(n, tuple(tuple(rng.randint(1, n) for _ in range(3)) for _ in range(m)))
    _, rmap = reduce(sat)
    rep = CountReport.from_map(rmap)
    assert rep == expected_counts(n, m)
    # Cell accounting: every cell is counted once outside the two overlapping categories.
    singles = (rep.vertical_wire_cells - rep.crossing_cells) + (rep.horizontal_wire_cells - rep.crossing_cells)
    assert rep.total_tiles == 2 + 4 * n + 12 * m + singles + rep.crossing_cells + rep.junction_tiles + rep.filler_tiles


@settings(max_examples=40, deadline=None)
@given(formulas())
def test_junction_geometry(sat):
    _, rmap = reduce(sat)
    for p, cl in enumerate(sat.clauses, start=1):
        for s, v in enumerate(cl, start=1):
            cells = sorted((r, c) for r, c, role in rmap.cells()
                           if isinstance(role, Junction) and (role.p, role.slot) == (p, s))
            top = 12 * (p - 1) + 3 * s
            left = 4 * v - 2
            assert cells == [(top, left), (top, left + 1), (top + 1, left), (top + 1, left + 1)]


# -- emitted tiles ---------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(formulas())
def test_sentinel_discipline(sat):
    inst, _ = reduce(sat)
    assert check_sentinels(inst) == []
    assert sum(t.top == TOP for t in inst.tiles) == inst.width
    assert sum(t.left == LEFT for t in inst.tiles) == inst.height
    # End tile plus the right-column fillers between horizontal-wire rows.
    assert sum(t.right == RIGHT for t in inst.tiles) == inst.height - 6 * sat.m


@settings(max_examples=40, deadline=None)
@given(formulas(max_n=3, max_m=2))
def test_multiset_independent_of_enumeration_order(sat):
    for boundary in Boundary:
        texts = {serialize_instance(reduce(sat, boundary, _order=o)[0])
                 for o in ("row", "column", "reverse", "row")}
        assert len(texts) == 1


def test_unknown_order_rejected():
    with pytest.raises(ValueError):
        reduce(YES, _order="spiral")


def test_clause_column_multiset():
    sat = OneInThreeInstance(3, ((1, 2, 3),))
    inst, rmap = reduce(sat, anchor_rows=False)
    c = LabelPlan(3, 1).clause(1)
    col = sorted((t for t in inst.tiles if t.left == LEFT and t.top != TOP), key=Tile.sort_key)
    want = [Tile(0, 0, -c, LEFT), Tile(-c, 0, c, LEFT), Tile(c, 0, -c, LEFT),
            Tile(-c, 0, -c, LEFT), Tile(-c, 0, -c, LEFT), Tile(-c, 0, 0, LEFT)]
    want += [Tile(c, v, -c, LEFT) for v in (1, 2, 3)] + [Tile(-c, -v, c, LEFT) for v in (1, 2, 3)]
    assert col == sorted(want, key=Tile.sort_key)


def test_assignment_row_is_rigid_chain():
    inst, _ = reduce(TWO)
    plan = LabelPlan(4, 2)
    row0 = [t for t in inst.tiles if t.top == TOP]
    assert Tile(TOP, plan.link(1), 0, LEFT) in row0
    for i in range(1, 5):
        assert Tile(TOP, i, 0, plan.link(i)) in row0
        assert Tile(TOP, plan.link(i + 1), 0, i) in row0
        assert Tile(TOP, i, i, i) in row0 and Tile(TOP, i, -i, i) in row0
    assert any(t.right == RIGHT and t.left == plan.link(5) for t in row0)


def test_shared_block_labels_variant():
    inst, rmap = reduce(YES, rigid_blocks=False)
    assert Tile(TOP, 1, 0, LEFT) in inst.tiles and Tile(TOP, 1, 0, 1) in inst.tiles
    assert not rmap.rigid_blocks


# -- equivalence -----------------------------------------------------------------

def corpus(seed=99, count=40):
    rng = random.Random(seed)
    out = [YES, NO, TWO]
    for _ in range(count):
        n, m = rng.randint(1, 3), rng.randint(1, 2)
        out.append(OneInThreeInstance(n, tuple(tuple(rng.randint(1, n) for _ in range(3)) for _ in range(m))))
    return out


@pytest.mark.parametrize("variant", [
    dict(),
    dict(pad_square=True),
    dict(boundary=Boundary.TOROIDAL),
    dict(rigid_blocks=False),
])
def test_equivalence(variant):
    for sat in corpus():
        inst, rmap = reduce(sat, **variant)
        res = solve(inst, limit=1)
        assert res.solvable == bool(sat_oracle(sat)), (sat.clauses, variant)
        if res.solvable:
            assert validate_tiling(inst, res.witnesses[0]).valid
            assert sat.satisfied_by(decode_assignment(rmap, res.witnesses[0]))


def test_single_clause_count_is_one_per_assignment():
    for sat in (YES, OneInThreeInstance(3, ((3, 1, 2),))):
        inst, _ = reduce(sat)
        assert solve(inst, limit=None, collect=0).count == len(sat_oracle(sat))


@pytest.mark.parametrize("sat", [
    YES, TWO, OneInThreeInstance(2, ((1, 2, 2),)), OneInThreeInstance(3, ((1, 2, 3), (3, 2, 2))),
])
def test_all_tilings_decode_onto_oracle(sat):
    inst, rmap = reduce(sat)
    res = solve(inst, limit=None, collect=10_000)
    assert len(res.witnesses) == res.count
    decoded = {str(decode_assignment(rmap, w)) for w in res.witnesses}
    assert decoded == {str(a) for a in sat_oracle(sat)}


def test_shared_blocks_have_extra_arrangements():
    inst, _ = reduce(YES, rigid_blocks=False)
    assert solve(inst, limit=None, collect=0).count == 3 * 3 ** 3


def test_every_solver_witness_decodes_to_oracle_assignment():
    inst, rmap = reduce(YES)
    oracle = {str(a) for a in sat_oracle(YES)}
    res = solve(inst, limit=None, collect=10)
    assert res.witnesses
    assert all(str(decode_assignment(rmap, w)) in oracle for w in res.witnesses)


def test_unanchored_clause_column_admits_unsatisfiable():
    # Without the anchor chain the plain clause column lets (1,1,1) through.
    inst, _ = reduce(NO, anchor_rows=False)
    assert solve(inst, limit=1).solvable
    inst, _ = reduce(NO)
    assert not solve(inst, limit=1).solvable


# -- witnesses and decoding -------------------------------------------------------

@pytest.mark.parametrize("variant", [
    dict(),
    dict(pad_square=True),
    dict(boundary=Boundary.TOROIDAL),
    dict(rigid_blocks=False),
    dict(anchor_rows=False),
])
def test_witness_round_trip(variant):
    for sat in corpus(seed=5, count=25):
        inst, rmap = reduce(sat, **variant)
        for a in sat_oracle(sat):
            tiling = layout_witness(sat, a, **variant)
            assert validate_tiling(inst, tiling).valid, (sat.clauses, str(a))
            assert decode_assignment(rmap, tiling) == a


def test_witness_examples():
    inst, rmap = reduce(YES)
    assert decode_assignment(rmap, layout_witness(YES, bits("010"))) == bits("010")
    assert validate_tiling(inst, layout_witness(YES, bits("100"))).valid
    inst2, _ = reduce(TWO)
    assert validate_tiling(inst2, layout_witness(TWO, bits("0011"))).valid
    with pytest.raises(ReductionError):
        layout_witness(YES, bits("110"))
    with pytest.raises(ReductionError):
        layout_witness(YES, bits("10"))


def test_decode_rejects_zeroed_block():
    _, rmap = reduce(YES)
    tiling = layout_witness(YES, bits("100"))
    grid = [list(r) for r in tiling.grid]
    for pos in (2, 3):
        r, c = rmap.find(AssignBlock(1, pos))
        grid[r][c] = Tile(TOP, 1, 0, 1)
    with pytest.raises(ReductionError):
        decode_assignment(rmap, Tiling(tuple(map(tuple, grid))))


def test_decode_rejects_wrong_dims():
    _, rmap = reduce(YES)
    with pytest.raises(ReductionError):
        decode_assignment(rmap, layout_witness(TWO, bits("1000")))


def test_toroidal_decode_after_shift():
    inst, rmap = reduce(TWO, Boundary.TOROIDAL)
    tiling = layout_witness(TWO, bits("0011"), Boundary.TOROIDAL)
    H, W = tiling.height, tiling.width
    shifted = Tiling(tuple(tuple(tiling[(r - 3) % H, (c - 5) % W] for c in range(W)) for r in range(H)))
    assert validate_tiling(inst, shifted).valid
    assert decode_assignment(rmap, shifted) == bits("0011")
    assert rmap.find(TopStart()) == (0, 0)


# -- padding -------------------------------------------------------------------

def test_pad_square_arithmetic():
    inst, rmap = reduce(NO)
    sq = pad_to_square(inst, rmap)
    assert (sq.width, sq.height, sq.size) == (13, 13, 169)
    assert sq.size - inst.size == 91


def test_pad_wide_board_uses_top_edge():
    # n=3, m=1 is 14 wide and 13 tall.
    inst, rmap = reduce(YES)
    sq = pad_to_square(inst, rmap)
    assert (sq.width, sq.height) == (14, 14)
    pm = pad_map(rmap)
    assert pm.origin == (1, 0) and all(isinstance(x, Padding) for x in pm.roles[0])
    assert solve(sq, limit=1).solvable


def test_padding_labels_fresh_and_paired():
    for sat in (NO, YES, TWO):
        inst, _ = reduce(sat)
        sq = pad_to_square(inst)
        old = {x for t in inst.tiles for x in t if not isinstance(x, Sentinel)}
        added = list((sq.counts() - inst.counts()).elements())
        assert len(added) == sq.size - inst.size
        fresh = [x for t in added for x in t if not isinstance(x, Sentinel)]
        assert not set(fresh) & (old | {0})
        assert min(abs(x) for x in fresh) > sat.n + 4 * sat.m
        occurrences = {x: fresh.count(x) for x in set(fresh)}
        assert set(occurrences.values()) <= {1, 2}


def test_padding_already_square_is_identity():
    inst, rmap = reduce(YES)
    sq = pad_to_square(inst, rmap)
    assert pad_to_square(sq) == sq


def test_padding_refusals():
    with pytest.raises(ReductionError):
        reduce(YES, Boundary.TOROIDAL, pad_square=True)
    tor, tmap = reduce(YES, Boundary.TOROIDAL)
    with pytest.raises(ReductionError):
        pad_to_square(tor, tmap)
    with pytest.raises(ReductionError):
        pad_to_square(Instance(2, 1, Boundary.BORDERED, (Tile(0, 0, 0, 0),) * 2))


def test_padded_equivalence():
    for sat, want in ((YES, True), (NO, False), (TWO, True)):
        inst, _ = reduce(sat, pad_square=True)
        assert inst.width == inst.height
        assert solve(inst, limit=1).solvable == want


# -- role map -------------------------------------------------------------------

@pytest.mark.parametrize("variant", [
    dict(), dict(pad_square=True), dict(boundary=Boundary.TOROIDAL),
    dict(rigid_blocks=False, anchor_rows=False),
])
def test_map_round_trip(variant):
    _, rmap = reduce(TWO, **variant)
    assert parse_map(serialize_map(rmap)) == rmap


def test_map_parse_errors():
    text = serialize_map(reduce(YES)[1])
    lines = text.splitlines()
    for k, bad in ((0, "tvxmap 2"), (2, "boundary sideways"), (3, "anchor maybe"),
                   (4, "blocks wobbly"), (8, lines[8] + " F")):
        broken = lines.copy()
        broken[k] = bad
        with pytest.raises(FormatError):
            parse_map("\n".join(broken))
