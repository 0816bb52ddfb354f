"""Positive 1-in-3-SAT to Tetravex.

Board geometry (bordered): columns 0..4n+1, rows 0..12m.

* row 0 holds the start tile, one 4-tile assignment block per variable
  (variable i at columns 4i-3..4i) and the end tile;
* variable i's vertical wire runs down columns 4i-2, 4i-1;
* clause p occupies column 0, rows 12(p-1)+1..12p, with its three input
  pairs at row offsets (3,4), (6,7), (9,10);
* each clause slot drives a two-row horizontal wire that meets the slot
  variable's vertical wire in a 2x2 junction;
* everything else is zero filler.

Tiles are emitted from cell roles alone, never from an assignment, so the
multiset only depends on (n, m, clauses).  :func:`layout_witness` is the
independent path that arranges those tiles for a given assignment.

Row anchoring
-------------
With the plain clause column, nothing pins the rows its input
pairs occupy: horizontal wires and junctions float, and the column admits
0, 1, 2 or 3 true inputs.  With ``anchor_rows=True`` (the default) the
right-hand column carries a chain of fresh labels from the end tile down to
the bottom edge.  At a slot's two rows the chain label is held constant, so
the slot's horizontal wire tiles there are ordinary crossing tiles
``<K, +-v, K, +-v>`` that can only sit on those two rows.  Geometry and
per-role tile counts are unchanged.

Rigid blocks
------------
In the plain construction the leftmost tile of block i is
``<Top, i, 0, i>``, which also fits the two middle slots, so the zero-bottom
tile and the two signal tiles of every block permute freely: 3^n
arrangements per assignment, and the signal tiles are not guaranteed to sit
in the middle cells.  With ``rigid_blocks=True`` (the default) the links
between consecutive blocks use fresh labels ``a_1 .. a_{n+1}``: the start
tile is ``<Top, a_1, 0, Left>``, block i runs ``<Top, i, 0, a_i>``, the two
signal tiles, then ``<Top, a_{i+1}, 0, i>``, and the end tile's left label
is ``a_{n+1}``.  Each assignment then has exactly one arrangement of the
top row and the signal tiles always occupy the middle cells.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, fields
from typing import ClassVar, Iterable, Union

from .core import (
    LEFT,
    RIGHT,
    TOP,
    Boundary,
    FormatError,
    Instance,
    Sentinel,
    Tile,
    Tiling,
    _int,
)

MAX_ORACLE_VARS = 20
SLOT_OFFSETS = ((3, 4), (6, 7), (9, 10))


class ReductionError(ValueError):
    pass


# -- 1-in-3 instances -------------------------------------------------------

@dataclass(frozen=True)
class OneInThreeInstance:
    n: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        clauses = tuple(tuple(int(x) for x in cl) for cl in self.clauses)
        if self.n < 1:
            raise ValueError("need at least one variable")
        if not clauses:
            raise ValueError("need at least one clause")
        for cl in clauses:
            if len(cl) != 3:
                raise ValueError(f"clause {cl} does not have three literals")
            for v in cl:
                if not 1 <= v <= self.n:
                    raise ValueError(f"variable {v} outside 1..{self.n}")
        object.__setattr__(self, "clauses", clauses)

    @property
    def m(self) -> int:
        return len(self.clauses)

    def satisfied_by(self, values: "Assignment | Iterable[bool]") -> bool:
        vals = values.values if isinstance(values, Assignment) else tuple(values)
        if len(vals) != self.n:
            return False
        return all(sum(vals[v - 1] for v in cl) == 1 for cl in self.clauses)


@dataclass(frozen=True)
class Assignment:
    values: tuple[bool, ...]

    @classmethod
    def from_bits(cls, bits: str) -> "Assignment":
        if not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"bad assignment bit string {bits!r}")
        return cls(tuple(b == "1" for b in bits))

    def __str__(self) -> str:
        return "".join("1" if v else "0" for v in self.values)

    def __getitem__(self, var: int) -> bool:
        """1-based variable lookup."""
        return self.values[var - 1]

    def __len__(self) -> int:
        return len(self.values)


def parse_1in3(text: str) -> OneInThreeInstance:
    lines = [(i + 1, ln) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln.strip() and not ln.lstrip().startswith("c ")]
    if not lines:
        raise FormatError(1, "empty 1in3 file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 4 or parts[:2] != ["p", "1in3"]:
        raise FormatError(lineno, f"expected 'p 1in3 <n> <m>', got {header!r}")
    n = _int(lineno, parts[2], "variable count")
    m = _int(lineno, parts[3], "clause count")
    if n < 1 or m < 1:
        raise FormatError(lineno, "variable and clause counts must be positive")
    body = lines[1:]
    if len(body) != m:
        raise FormatError(body[-1][0] if body else lineno, f"header says {m} clauses, found {len(body)}")
    clauses = []
    for lineno, line in body:
        toks = line.split()
        if len(toks) != 3:
            raise FormatError(lineno, f"clause needs 3 variables, got {len(toks)}")
        cl = []
        for tok in toks:
            v = _int(lineno, tok, "variable")
            if v <= 0:
                raise FormatError(lineno, f"literal {v} is not a positive variable index")
            if v > n:
                raise FormatError(lineno, f"variable {v} exceeds n={n}")
            cl.append(v)
        clauses.append(tuple(cl))
    return OneInThreeInstance(n, tuple(clauses))


def serialize_1in3(inst: OneInThreeInstance) -> str:
    lines = [f"p 1in3 {inst.n} {inst.m}"]
    lines += [" ".join(map(str, cl)) for cl in inst.clauses]
    return "\n".join(lines) + "\n"


def sat_oracle(inst: OneInThreeInstance) -> list[Assignment]:
    """Every assignment giving each clause exactly one true occurrence.

    Plain enumeration of all 2^n assignments, ascending as bit strings.
    """
    if inst.n > MAX_ORACLE_VARS:
        raise ValueError(f"oracle refuses n={inst.n} (max {MAX_ORACLE_VARS})")
    return [
        Assignment(vals)
        for vals in itertools.product((False, True), repeat=inst.n)
        if inst.satisfied_by(vals)
    ]


# -- labels and roles -------------------------------------------------------

@dataclass(frozen=True)
class LabelPlan:
    n: int
    m: int

    def variable(self, i: int) -> int:
        return i

    def clause(self, p: int) -> int:
        return self.n + p

    def junction(self, p: int, s: int) -> int:
        return self.n + self.m + 3 * (p - 1) + s

    def link(self, i: int) -> int:
        """Rigid-block link label on the face left of block i (i = n+1: the end tile)."""
        return self.n + 4 * self.m + i

    @property
    def ruler_base(self) -> int:
        """First label above every variable, clause, junction and link label."""
        return 2 * self.n + 4 * self.m + 2

    @property
    def frame_base(self) -> int:
        """First label of the toroidal frame chains."""
        return self.ruler_base + 12 * self.m + 1

    def ruler(self, row: int) -> int:
        """Anchor-chain label on the bottom edge of right-column cell ``row``.

        The label is held constant across a slot's two rows.
        """
        off = (row - 1) % 12 + 1 if row > 0 else 0
        if off in (3, 4):
            row -= off - 2
        elif off in (6, 7):
            row -= off - 5
        elif off in (9, 10):
            row -= off - 8
        return self.ruler_base + row


@dataclass(frozen=True)
class TopStart:
    code: ClassVar[str] = "S"


@dataclass(frozen=True)
class AssignBlock:
    i: int
    pos: int  # 1..4
    code: ClassVar[str] = "A"


@dataclass(frozen=True)
class TopEnd:
    code: ClassVar[str] = "E"


@dataclass(frozen=True)
class ClauseCell:
    p: int
    offset: int  # 1..12
    code: ClassVar[str] = "C"


@dataclass(frozen=True)
class VerticalWire:
    i: int
    side: int  # 0 = left column of the pair
    code: ClassVar[str] = "V"


@dataclass(frozen=True)
class HorizontalWire:
    p: int
    slot: int
    row: int  # 0 = upper row of the pair
    code: ClassVar[str] = "H"


@dataclass(frozen=True)
class Crossing:
    i: int
    p: int
    slot: int
    side: int
    row: int
    code: ClassVar[str] = "X"


@dataclass(frozen=True)
class Junction:
    p: int
    slot: int
    corner: int  # 0 TL, 1 TR, 2 BL, 3 BR
    code: ClassVar[str] = "J"


@dataclass(frozen=True)
class Filler:
    code: ClassVar[str] = "F"


@dataclass(frozen=True)
class VerticalEnd:
    """Toroidal terminator-row cell closing variable i's wire."""

    i: int
    side: int
    code: ClassVar[str] = "Y"


@dataclass(frozen=True)
class HorizontalEnd:
    """Toroidal terminator-column cell closing a slot's wire."""

    p: int
    slot: int
    row: int
    code: ClassVar[str] = "Z"


@dataclass(frozen=True)
class Frame:
    """Toroidal frame cell that is not a wire end."""

    code: ClassVar[str] = "B"


@dataclass(frozen=True)
class Padding:
    """Cell of the rigid block added by :func:`pad_to_square`."""

    r: int
    c: int
    code: ClassVar[str] = "P"


CellRole = Union[
    TopStart, AssignBlock, TopEnd, ClauseCell, VerticalWire, HorizontalWire,
    Crossing, Junction, Filler, VerticalEnd, HorizontalEnd, Frame, Padding,
]
_ROLE_CLASSES = {cls.code: cls for cls in CellRole.__args__}


def role_token(role: CellRole) -> str:
    return role.code + ".".join(str(getattr(role, f.name)) for f in fields(role))


def parse_role(token: str) -> CellRole:
    cls = _ROLE_CLASSES.get(token[:1])
    if cls is None:
        raise ValueError(f"unknown role token {token!r}")
    rest = token[1:]
    args = [int(x) for x in rest.split(".")] if rest else []
    if len(args) != len(fields(cls)):
        raise ValueError(f"role token {token!r} needs {len(fields(cls))} field(s)")
    return cls(*args)


@dataclass(frozen=True)
class ReductionMap:
    """Per-cell gadget roles of a reduced instance.

    ``origin`` is where the unpadded construction's (0, 0) cell sits.
    """

    sat: OneInThreeInstance
    boundary: Boundary
    anchor_rows: bool
    roles: tuple[tuple[CellRole, ...], ...]
    origin: tuple[int, int] = (0, 0)
    rigid_blocks: bool = True

    @property
    def plan(self) -> LabelPlan:
        return LabelPlan(self.sat.n, self.sat.m)

    @property
    def width(self) -> int:
        return len(self.roles[0])

    @property
    def height(self) -> int:
        return len(self.roles)

    @property
    def padded(self) -> bool:
        return self.origin != (0, 0)

    def cells(self) -> Iterable[tuple[int, int, CellRole]]:
        for r, row in enumerate(self.roles):
            for c, role in enumerate(row):
                yield r, c, role

    def find(self, role: CellRole) -> tuple[int, int]:
        for r, c, x in self.cells():
            if x == role:
                return r, c
        raise KeyError(role)

    def tally(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for _, _, role in self.cells():
            out[type(role).__name__] = out.get(type(role).__name__, 0) + 1
        return out


def serialize_map(rmap: ReductionMap) -> str:
    sat = rmap.sat
    lines = [
        "tvxmap 1",
        f"dims {rmap.width} {rmap.height}",
        f"boundary {rmap.boundary.value}",
        f"anchor {'rows' if rmap.anchor_rows else 'none'}",
        f"blocks {'rigid' if rmap.rigid_blocks else 'shared'}",
        f"origin {rmap.origin[1]} {rmap.origin[0]}",
        f"p 1in3 {sat.n} {sat.m}",
    ]
    lines += [" ".join(map(str, cl)) for cl in sat.clauses]
    lines += [" ".join(role_token(x) for x in row) for row in rmap.roles]
    return "\n".join(lines) + "\n"


def parse_map(text: str) -> ReductionMap:
    lines = text.splitlines()

    def field_line(i: int, key: str, nargs: int) -> list[str]:
        parts = lines[i].split() if i < len(lines) else []
        if not parts or parts[0] != key or len(parts) != nargs + 1:
            raise FormatError(i + 1, f"expected '{key}' with {nargs} field(s)")
        return parts[1:]

    if field_line(0, "tvxmap", 1) != ["1"]:
        raise FormatError(1, "unsupported map version")
    w, h = (_int(2, x, "dimension") for x in field_line(1, "dims", 2))
    try:
        boundary = Boundary(field_line(2, "boundary", 1)[0])
    except ValueError:
        raise FormatError(3, "unknown boundary") from None
    anchor = field_line(3, "anchor", 1)[0]
    if anchor not in ("rows", "none"):
        raise FormatError(4, f"unknown anchor mode {anchor!r}")
    blocks = field_line(4, "blocks", 1)[0]
    if blocks not in ("rigid", "shared"):
        raise FormatError(5, f"unknown block mode {blocks!r}")
    ox, oy = (_int(6, x, "origin") for x in field_line(5, "origin", 2))
    n, m = (_int(7, x, "count") for x in field_line(6, "p", 3)[1:])
    sat = parse_1in3("\n".join(lines[6:7 + m]))
    body = lines[7 + m:]
    while body and not body[-1].strip():
        body.pop()
    if len(body) != h:
        raise FormatError(8 + m, f"expected {h} role rows, found {len(body)}")
    roles = []
    for r, line in enumerate(body):
        toks = line.split()
        if len(toks) != w:
            raise FormatError(8 + m + r, f"expected {w} role tokens, got {len(toks)}")
        try:
            roles.append(tuple(parse_role(t) for t in toks))
        except ValueError as exc:
            raise FormatError(8 + m + r, str(exc)) from None
    return ReductionMap(sat, boundary, anchor == "rows", tuple(roles), (oy, ox),
                        blocks == "rigid")


# -- geometry ---------------------------------------------------------------

def _slot_of_row(row: int) -> tuple[int, int, int] | None:
    """(clause p, slot s, pair row 0/1) for a horizontal-wire row."""
    if row < 1:
        return None
    p, off = divmod(row - 1, 12)
    off += 1
    for s, (a, b) in enumerate(SLOT_OFFSETS, start=1):
        if off == a:
            return p + 1, s, 0
        if off == b:
            return p + 1, s, 1
    return None


def _wire_of_col(col: int, n: int) -> tuple[int, int] | None:
    """(variable i, side) for a vertical-wire column."""
    if col < 2 or col > 4 * n - 1:
        return None
    q, rem = divmod(col + 2, 4)
    if rem == 0:
        return q, 0
    if rem == 1:
        return q, 1
    return None


def role_grid(sat: OneInThreeInstance) -> tuple[tuple[CellRole, ...], ...]:
    """Roles of the bordered construction; depends on (n, m, clauses) only."""
    n, m = sat.n, sat.m
    W, H = 4 * n + 2, 12 * m + 1
    grid: list[list[CellRole]] = [[Filler()] * W for _ in range(H)]
    grid[0][0] = TopStart()
    for i in range(1, n + 1):
        for pos in range(1, 5):
            grid[0][4 * i - 4 + pos] = AssignBlock(i, pos)
    grid[0][W - 1] = TopEnd()
    for r in range(1, H):
        p, off = divmod(r - 1, 12)
        grid[r][0] = ClauseCell(p + 1, off + 1)
        slot = _slot_of_row(r)
        for c in range(1, W):
            wire = _wire_of_col(c, n)
            if slot is None:
                if wire is not None:
                    grid[r][c] = VerticalWire(*wire)
                continue
            p1, s, row = slot
            v = sat.clauses[p1 - 1][s - 1]
            if wire is None:
                grid[r][c] = HorizontalWire(p1, s, row)
            elif wire[0] == v:
                grid[r][c] = Junction(p1, s, 2 * row + wire[1])
            else:
                grid[r][c] = Crossing(wire[0], p1, s, wire[1], row)
    return tuple(tuple(row) for row in grid)


# -- tile emission ----------------------------------------------------------

def _sign(side: int) -> int:
    return 1 if side == 0 else -1


def _tile(sat: OneInThreeInstance, role: CellRole, r: int, c: int, anchored: bool,
          truth: Assignment | None = None, rigid: bool = True) -> Tile:
    """Tile for one bordered cell.

    With ``truth=None`` the role's fixed emission is used; with an
    assignment the tile is the one the witness layout puts there.  Both
    choices draw from the same per-gadget tile set.
    """
    n, m = sat.n, sat.m
    plan = LabelPlan(n, m)
    W = 4 * n + 2
    pol = (lambda var: 1 if truth is None or truth[var] else -1)
    link = plan.link if rigid else (lambda i: i)

    if isinstance(role, TopStart):
        return Tile(TOP, link(1), 0, LEFT)
    if isinstance(role, TopEnd):
        return Tile(TOP, RIGHT, plan.ruler(0) if anchored else 0, link(n + 1))
    if isinstance(role, AssignBlock):
        i, pos = role.i, role.pos
        if pos == 1:
            return Tile(TOP, i, 0, link(i))
        if pos == 4:
            return Tile(TOP, link(i + 1), 0, i)
        s = _sign(pos - 2) * pol(i)
        return Tile(TOP, i, s * i, i)
    if isinstance(role, ClauseCell):
        return _clause_tile(sat, role, truth)
    if isinstance(role, VerticalWire):
        s = _sign(role.side) * pol(role.i)
        return Tile(s * role.i, 0, s * role.i, 0)
    if isinstance(role, HorizontalWire):
        v = sat.clauses[role.p - 1][role.slot - 1]
        s = _sign(role.row) * pol(v)
        x = 0
        if anchored and c == W - 1:
            x = plan.ruler(r)
        return Tile(x, s * v, x, s * v)
    if isinstance(role, Crossing):
        v = sat.clauses[role.p - 1][role.slot - 1]
        sv = _sign(role.side) * pol(role.i)
        sh = _sign(role.row) * pol(v)
        return Tile(sv * role.i, sh * v, sv * role.i, sh * v)
    if isinstance(role, Junction):
        v = sat.clauses[role.p - 1][role.slot - 1]
        j = plan.junction(role.p, role.slot)
        corner = role.corner
        if pol(v) < 0:
            corner ^= 1  # the false arrangement mirrors the pair left-right
        return (
            Tile(v, -v, -j, v),
            Tile(-v, v, j, -v),
            Tile(-j, v, v, -v),
            Tile(j, -v, -v, v),
        )[corner]
    if isinstance(role, Filler):
        if anchored and c == W - 1 and r > 0:
            return Tile(plan.ruler(r - 1), RIGHT, plan.ruler(r), 0)
        return Tile(0, 0, 0, 0)
    raise ReductionError(f"no bordered tile for role {role!r}")


def _clause_tile(sat: OneInThreeInstance, role: ClauseCell, truth: Assignment | None) -> Tile:
    """Clause column: top, buffer, pair, buffer, pair, buffer, pair, buffer, bottom."""
    p, off = role.p, role.offset
    c = LabelPlan(sat.n, sat.m).clause(p)
    clause = sat.clauses[p - 1]
    if off == 1:
        return Tile(0, 0, -c, LEFT)
    if off == 12:
        return Tile(-c, 0, 0, LEFT)
    for s, (a, b) in enumerate(SLOT_OFFSETS, start=1):
        if off in (a, b):
            v = clause[s - 1]
            first = off == a
            is_true = truth is None or truth[v]
            if truth is not None and not is_true:
                first = not first
            return Tile(c, v, -c, LEFT) if first else Tile(-c, -v, c, LEFT)
    # buffers at offsets 2, 5, 8, 11
    k = (2, 5, 8, 11).index(off)
    if truth is None:
        return (Tile(-c, 0, c, LEFT), Tile(c, 0, -c, LEFT),
                Tile(-c, 0, -c, LEFT), Tile(-c, 0, -c, LEFT))[k]
    true_slot = [truth[v] for v in clause].index(True) + 1
    above_true = k + 1 == true_slot
    below_true = k == true_slot
    if above_true:
        return Tile(-c, 0, c, LEFT)
    if below_true:
        return Tile(c, 0, -c, LEFT)
    return Tile(-c, 0, -c, LEFT)


def _held(index: int, pairs: Iterable[int]) -> int:
    """Chain position with the label held constant across each pair."""
    for first in pairs:
        if index in (first, first + 1):
            return first - 1
    return index


def _toroidal_extend(sat: OneInThreeInstance, grid: list[list[Tile]],
                     roles: list[list[CellRole]], truth: Assignment | None) -> None:
    """Close the bordered board into a torus by adding a frame, in place.

    A terminator row goes below the board and a terminator column to its
    right.  Across the wrap they face the board's top and left edges, so
    their outer faces carry Top and Left: the sentinels keep pinning the
    assignment row and the clause column, now matched by exactly one frame
    strip each.  Frame cells are chained by fresh labels (held constant
    across each wire pair, whose two tiles swap with polarity) so the frame
    is itself rigid.
    """
    n = sat.n
    H, W = len(grid), len(grid[0])
    base = LabelPlan(n, sat.m).frame_base
    wire_pairs = [4 * i - 2 for i in range(1, n + 1)]
    slot_pairs = [r for r in range(1, H) if (_slot_of_row(r) or (0, 0, 1))[2] == 0]
    rho = lambda c: base + 1 + _held(c, wire_pairs)  # noqa: E731  right face of row cell c
    sigma = lambda r: base + W + 2 + _held(r, slot_pairs)  # noqa: E731  bottom face of column cell r
    for r in range(H):
        slot = _slot_of_row(r)
        roles[r].append(HorizontalEnd(*slot) if slot else Frame())
        grid[r].append(Tile(sigma(r - 1), grid[r][0].left, sigma(r), grid[r][W - 1].right))
    last_roles: list[CellRole] = []
    last: list[Tile] = []
    for c in range(W):
        wire = _wire_of_col(c, n)
        last_roles.append(VerticalEnd(*wire) if wire else Frame())
        last.append(Tile(grid[H - 1][c].bottom, rho(c), grid[0][c].top, rho(c - 1)))
    last_roles.append(Frame())
    last.append(Tile(sigma(H - 1), rho(-1), sigma(-1), rho(W - 1)))
    roles.append(last_roles)
    grid.append(last)


def _layout(sat: OneInThreeInstance, boundary: Boundary, anchor_rows: bool,
            truth: Assignment | None, order: str = "row", rigid: bool = True):
    base_roles = role_grid(sat)
    H, W = len(base_roles), len(base_roles[0])
    cells = [(r, c) for r in range(H) for c in range(W)]
    if order == "column":
        cells = [(r, c) for c in range(W) for r in range(H)]
    elif order == "reverse":
        cells.reverse()
    elif order != "row":
        raise ValueError(f"unknown enumeration order {order!r}")
    grid: list[list[Tile | None]] = [[None] * W for _ in range(H)]
    for r, c in cells:
        grid[r][c] = _tile(sat, base_roles[r][c], r, c, anchor_rows, truth, rigid)
    roles = [list(row) for row in base_roles]
    if boundary is Boundary.TOROIDAL:
        _toroidal_extend(sat, grid, roles, truth)
    rmap = ReductionMap(sat, boundary, anchor_rows, tuple(tuple(r) for r in roles),
                        rigid_blocks=rigid)
    return grid, rmap


def reduce(sat: OneInThreeInstance, boundary: Boundary = Boundary.BORDERED,
           pad_square: bool = False, anchor_rows: bool = True,
           rigid_blocks: bool = True, _order: str = "row") -> tuple[Instance, ReductionMap]:
    """Compile a positive 1-in-3 instance into a Tetravex instance.

    ``anchor_rows=False`` gives the plain clause column of the textbook
    construction (see the module docstring for why that is not
    sound).  ``rigid_blocks=False`` keeps the plain assignment-block
    labels, whose blocks can be rearranged inside.  ``_order`` only changes the order cells are visited while
    emitting tiles and exists so tests can check the multiset does not
    depend on it.
    """
    boundary = Boundary(boundary)
    if pad_square and boundary is Boundary.TOROIDAL:
        raise ReductionError("pad_square needs a bordered reduction (no sentinel edge to dock on)")
    grid, rmap = _layout(sat, boundary, anchor_rows, None, _order, rigid_blocks)
    tiles = [t for row in grid for t in row]
    inst = Instance(len(grid[0]), len(grid), boundary, tuple(tiles))
    if pad_square:
        padded = pad_to_square(inst, rmap)
        return padded, pad_map(rmap)
    return inst, rmap


def expected_counts(n: int, m: int) -> "CountReport":
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    W, H = 4 * n + 2, 12 * m + 1
    crossings = 12 * n * m - 12 * m
    return CountReport(
        width=W,
        height=H,
        total_tiles=W * H,
        junction_tiles=12 * m,
        vertical_wire_cells=24 * n * m - 12 * m,
        horizontal_wire_cells=24 * n * m - 6 * m,
        crossing_cells=crossings,
        filler_tiles=12 * n * m + 6 * m,
    )


@dataclass(frozen=True)
class CountReport:
    """Board arithmetic.

    ``vertical_wire_cells`` and ``horizontal_wire_cells`` both include the
    crossing cells (each crossing is a vertical and a horizontal wiring
    tile at once); every other field counts each cell once.
    """

    width: int
    height: int
    total_tiles: int
    junction_tiles: int
    vertical_wire_cells: int
    horizontal_wire_cells: int
    crossing_cells: int
    filler_tiles: int

    @classmethod
    def from_map(cls, rmap: ReductionMap) -> "CountReport":
        """Tally the roles of an unpadded bordered map."""
        t = rmap.tally()
        x = t.get("Crossing", 0)
        return cls(
            width=rmap.width,
            height=rmap.height,
            total_tiles=sum(t.values()),
            junction_tiles=t.get("Junction", 0),
            vertical_wire_cells=t.get("VerticalWire", 0) + x,
            horizontal_wire_cells=t.get("HorizontalWire", 0) + x,
            crossing_cells=x,
            filler_tiles=t.get("Filler", 0),
        )


# -- witnesses --------------------------------------------------------------

def layout_witness(sat: OneInThreeInstance, a: Assignment,
                   boundary: Boundary = Boundary.BORDERED, pad_square: bool = False,
                   anchor_rows: bool = True, rigid_blocks: bool = True) -> Tiling:
    """The tiling of ``reduce(sat, ...)`` that encodes assignment ``a``."""
    if len(a) != sat.n or not sat.satisfied_by(a):
        raise ReductionError(f"assignment {a} does not put exactly one true variable in every clause")
    boundary = Boundary(boundary)
    if pad_square and boundary is Boundary.TOROIDAL:
        raise ReductionError("pad_square needs a bordered reduction")
    grid, rmap = _layout(sat, boundary, anchor_rows, a, rigid=rigid_blocks)
    if pad_square:
        inst, _ = reduce(sat, boundary, False, anchor_rows, rigid_blocks)
        grid = _pad_grid(inst, grid)
    return Tiling(tuple(tuple(row) for row in grid))


def decode_assignment(rmap: ReductionMap, tiling: Tiling) -> Assignment:
    """Read each variable's value off its assignment block.

    The block's two signal tiles carry bottoms i and -i; i left of -i means
    true.  Rigid blocks hold them in the two middle cells, and only those
    are read.  With shared block labels the zero-bottom tile may sit anywhere
    among the first three cells, so the order of the two non-zero bottoms
    is what counts.  Toroidal tilings may be cyclically shifted; the start tile's
    position gives the shift.
    """
    if (tiling.width, tiling.height) != (rmap.width, rmap.height):
        raise ReductionError("tiling and map dimensions differ")
    W, H = rmap.width, rmap.height
    sr, sc = rmap.find(TopStart())
    dr = dc = 0
    if rmap.boundary is Boundary.TOROIDAL:
        start_tile = _start_tile(rmap)
        hits = [(r, c) for r in range(H) for c in range(W) if tiling[r, c] == start_tile]
        if len(hits) != 1:
            raise ReductionError("cannot locate the start tile")
        dr, dc = hits[0][0] - sr, hits[0][1] - sc
    values = []
    for i in range(1, rmap.sat.n + 1):
        bottoms = []
        for pos in range(1, 5):
            r, c = rmap.find(AssignBlock(i, pos))
            bottoms.append(tiling[(r + dr) % H, (c + dc) % W].bottom)
        signal = bottoms[1:3] if rmap.rigid_blocks else [b for b in bottoms if b != 0]
        if signal == [i, -i]:
            values.append(True)
        elif signal == [-i, i]:
            values.append(False)
        else:
            raise ReductionError(f"block {i} bottoms {bottoms} do not encode a value")
    return Assignment(tuple(values))


def _start_tile(rmap: ReductionMap) -> Tile:
    link = LabelPlan(rmap.sat.n, rmap.sat.m).link(1) if rmap.rigid_blocks else 1
    return Tile(TOP, link, 0, LEFT)


# -- square padding ---------------------------------------------------------

def _fresh_base(instance: Instance) -> int:
    top = 0
    for t in instance.tiles:
        for x in t:
            if not isinstance(x, Sentinel):
                top = max(top, abs(x))
    return top + 1


def _padding_block(instance: Instance) -> tuple[str, list[list[Tile]]]:
    """Rigid block of fresh-label tiles that docks on a sentinel edge."""
    W, H = instance.width, instance.height
    base = _fresh_base(instance)
    counter = itertools.count(base)
    if H > W:
        rows, cols, side = H, H - W, "left"
    else:
        rows, cols, side = W - H, W, "top"
    # vertical edge labels: vlab[r][c] is the left edge of block cell (r, c)
    vlab = [[next(counter) for _ in range(cols + 1)] for _ in range(rows)]
    hlab = [[next(counter) for _ in range(cols)] for _ in range(rows + 1)]
    if side == "left":
        for r in range(rows):
            vlab[r][cols] = LEFT
    else:
        for c in range(cols):
            hlab[rows][c] = TOP
    block = [
        [Tile(hlab[r][c], vlab[r][c + 1], hlab[r + 1][c], vlab[r][c]) for c in range(cols)]
        for r in range(rows)
    ]
    return side, block


def _check_paddable(instance: Instance) -> None:
    if instance.toroidal:
        raise ReductionError("cannot pad a toroidal instance: no sentinel edge")
    W, H = instance.width, instance.height
    if H > W:
        n_left = sum(1 for t in instance.tiles if t.left == LEFT)
        if n_left != H or any(t.right == LEFT for t in instance.tiles):
            raise ReductionError("instance has no constant Left edge to dock on")
    elif W > H:
        n_top = sum(1 for t in instance.tiles if t.top == TOP)
        if n_top != W or any(t.bottom == TOP for t in instance.tiles):
            raise ReductionError("instance has no constant Top edge to dock on")


def pad_to_square(instance: Instance, rmap: ReductionMap | None = None) -> Instance:
    """Square an oblong bordered reduction instance.

    A rigid block of tiles with fresh labels is added against the
    reduction's constant Left edge (or Top edge when the board is wider
    than tall).  Inside the block every fresh label sits on exactly the two
    faces that meet; outer faces carry a label used once.  The block can
    only occupy the strip it was built for, so solvability is unchanged.
    """
    if rmap is not None and (rmap.boundary is not Boundary.BORDERED or rmap.padded):
        raise ReductionError("pad_to_square needs an unpadded bordered reduction")
    if instance.width == instance.height:
        return instance
    _check_paddable(instance)
    _, block = _padding_block(instance)
    side = max(instance.width, instance.height)
    tiles = list(instance.tiles) + [t for row in block for t in row]
    return Instance(side, side, Boundary.BORDERED, tuple(tiles))


def _pad_grid(instance: Instance, grid: list[list[Tile]]) -> list[list[Tile]]:
    if instance.width == instance.height:
        return grid
    where, block = _padding_block(instance)
    if where == "left":
        return [list(brow) + list(row) for brow, row in zip(block, grid)]
    return [list(r) for r in block] + [list(r) for r in grid]


def pad_map(rmap: ReductionMap) -> ReductionMap:
    W, H = rmap.width, rmap.height
    if W == H:
        return rmap
    if H > W:
        k = H - W
        roles = tuple(tuple(Padding(r, c) for c in range(k)) + row for r, row in enumerate(rmap.roles))
        origin = (0, k)
    else:
        k = W - H
        roles = tuple(tuple(Padding(r, c) for c in range(W)) for r in range(k)) + rmap.roles
        origin = (k, 0)
    return ReductionMap(rmap.sat, rmap.boundary, rmap.anchor_rows, roles, origin,
                        rmap.rigid_blocks)


def check_sentinels(instance: Instance) -> list[Tile]:
    """Tiles breaking the sentinel discipline of an unpadded bordered reduction.

    No bottom may be Top, no right may be Left and no left may be Right.
    """
    return [t for t in instance.tiles if t.bottom == TOP or t.right == LEFT or t.left == RIGHT]
