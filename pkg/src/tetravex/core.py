"""Tiles, instances, tilings, adjacency validation and the text formats.

A label is either a plain ``int`` or one of the three :class:`Sentinel`
members.  Sentinels are enum members, so they never compare equal to any
integer (including 0) and generated label spaces cannot collide with them.
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence, Union


class Sentinel(enum.Enum):
    TOP = "T"
    LEFT = "L"
    RIGHT = "R"

    def __repr__(self) -> str:
        return self.name.capitalize()


TOP = Sentinel.TOP
LEFT = Sentinel.LEFT
RIGHT = Sentinel.RIGHT

Label = Union[int, Sentinel]

_SENTINEL_RANK = {TOP: 0, LEFT: 1, RIGHT: 2}
_TOKEN_TO_SENTINEL = {s.value: s for s in Sentinel}


def label_key(label: Label) -> tuple[int, int]:
    """Total order: integers ascending, then Top, Left, Right."""
    if isinstance(label, Sentinel):
        return (1, _SENTINEL_RANK[label])
    return (0, label)


def label_token(label: Label) -> str:
    if isinstance(label, Sentinel):
        return label.value
    return str(label)


def parse_label(token: str) -> Label:
    if token in _TOKEN_TO_SENTINEL:
        return _TOKEN_TO_SENTINEL[token]
    try:
        return int(token)
    except ValueError:
        raise ValueError(f"bad label token {token!r}") from None


class Tile(NamedTuple):
    """Four edge labels in (top, right, bottom, left) order.  Never rotated."""

    top: Label
    right: Label
    bottom: Label
    left: Label

    def sort_key(self) -> tuple:
        return tuple(label_key(x) for x in self)

    def __str__(self) -> str:
        return " ".join(label_token(x) for x in self)


def canonical_order(tiles: Sequence[Tile]) -> tuple[Tile, ...]:
    return tuple(sorted(tiles, key=Tile.sort_key))


class Boundary(enum.Enum):
    BORDERED = "bordered"
    TOROIDAL = "toroidal"


class FormatError(ValueError):
    """Malformed instance / tiling text.  The message names the line number."""

    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


@dataclass(frozen=True)
class Instance:
    """A board size, a boundary mode and a multiset of tiles.

    Tiles are stored in canonical order, so two instances holding the same
    multiset compare equal regardless of the order they were given in.
    """

    width: int
    height: int
    boundary: Boundary
    tiles: tuple[Tile, ...]

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"bad dimensions {self.width}x{self.height}")
        tiles = tuple(Tile(*t) for t in self.tiles)
        if len(tiles) != self.width * self.height:
            raise ValueError(
                f"{len(tiles)} tiles for a {self.width}x{self.height} board"
            )
        object.__setattr__(self, "tiles", canonical_order(tiles))

    @property
    def size(self) -> int:
        return self.width * self.height

    @property
    def toroidal(self) -> bool:
        return self.boundary is Boundary.TOROIDAL

    def counts(self) -> Counter:
        return Counter(self.tiles)


@dataclass(frozen=True)
class Tiling:
    """Row-major grid of tile types (``grid[row][col]``)."""

    grid: tuple[tuple[Tile, ...], ...]

    def __post_init__(self):
        grid = tuple(tuple(Tile(*t) for t in row) for row in self.grid)
        if not grid or not grid[0] or any(len(r) != len(grid[0]) for r in grid):
            raise ValueError("tiling grid must be a non-empty rectangle")
        object.__setattr__(self, "grid", grid)

    @property
    def height(self) -> int:
        return len(self.grid)

    @property
    def width(self) -> int:
        return len(self.grid[0])

    def __getitem__(self, rc: tuple[int, int]) -> Tile:
        r, c = rc
        return self.grid[r][c]

    def counts(self) -> Counter:
        return Counter(t for row in self.grid for t in row)


Cell = tuple[int, int]


@dataclass(frozen=True)
class Violation:
    """A mismatched adjacency: ``first`` is the left/upper cell."""

    first: Cell
    second: Cell
    labels: tuple[Label, Label]


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)
    multiset_ok: bool = True

    @property
    def valid(self) -> bool:
        return not self.violations and self.multiset_ok

    def __bool__(self) -> bool:
        return self.valid


def validate_tiling(instance: Instance, tiling: Tiling) -> ValidationReport:
    if (tiling.width, tiling.height) != (instance.width, instance.height):
        raise ValueError(
            f"tiling is {tiling.width}x{tiling.height}, "
            f"instance is {instance.width}x{instance.height}"
        )
    W, H = instance.width, instance.height
    g = tiling.grid
    violations = []
    for r in range(H):
        for c in range(W):
            t = g[r][c]
            if c + 1 < W or instance.toroidal:
                nc = (c + 1) % W
                if t.right != g[r][nc].left:
                    violations.append(Violation((r, c), (r, nc), (t.right, g[r][nc].left)))
            if r + 1 < H or instance.toroidal:
                nr = (r + 1) % H
                if t.bottom != g[nr][c].top:
                    violations.append(Violation((r, c), (nr, c), (t.bottom, g[nr][c].top)))
    return ValidationReport(tuple(violations), tiling.counts() == instance.counts())


# -- text formats -----------------------------------------------------------

def serialize_instance(instance: Instance) -> str:
    lines = [
        "tvx 1",
        f"dims {instance.width} {instance.height}",
        f"boundary {instance.boundary.value}",
        f"tiles {len(instance.tiles)}",
    ]
    lines.extend(str(t) for t in instance.tiles)
    return "\n".join(lines) + "\n"


def _expect(lines: list[str], i: int, keyword: str, nargs: int) -> list[str]:
    if i >= len(lines):
        raise FormatError(i + 1, f"expected '{keyword}' line, got end of input")
    parts = lines[i].split()
    if not parts or parts[0] != keyword or len(parts) != nargs + 1:
        raise FormatError(i + 1, f"expected '{keyword}' with {nargs} field(s), got {lines[i]!r}")
    return parts[1:]


def _int(lineno: int, token: str, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise FormatError(lineno, f"{what} must be an integer, got {token!r}") from None


def parse_instance(text: str) -> Instance:
    lines = text.splitlines()
    (version,) = _expect(lines, 0, "tvx", 1)
    if version != "1":
        raise FormatError(1, f"unsupported version {version!r}")
    w, h = (_int(2, x, "dimension") for x in _expect(lines, 1, "dims", 2))
    (bmode,) = _expect(lines, 2, "boundary", 1)
    try:
        boundary = Boundary(bmode)
    except ValueError:
        raise FormatError(3, f"unknown boundary {bmode!r}") from None
    (count,) = _expect(lines, 3, "tiles", 1)
    count = _int(4, count, "tile count")
    if count != w * h:
        raise FormatError(4, f"tile count {count} does not match dims {w}x{h}")
    body = lines[4:]
    while body and not body[-1].strip():
        body.pop()
    if len(body) != count:
        raise FormatError(4 + len(body), f"expected {count} tile lines, found {len(body)}")
    tiles = []
    for k, line in enumerate(body):
        lineno = k + 5
        toks = line.split()
        if len(toks) != 4:
            raise FormatError(lineno, f"tile needs 4 labels, got {len(toks)}")
        try:
            tiles.append(Tile(*(parse_label(t) for t in toks)))
        except ValueError as exc:
            raise FormatError(lineno, str(exc)) from None
    return Instance(w, h, boundary, tuple(tiles))


def serialize_tiling(tiling: Tiling) -> str:
    """Row-major slot indices into the canonical tile list.

    The canonical list is recovered from the grid's own multiset, so a
    tiling whose multiset equals its instance's serializes consistently
    without needing the instance.  Equal tile types take their slots in
    row-major order.
    """
    canon = canonical_order([t for row in tiling.grid for t in row])
    next_slot: dict[Tile, int] = {}
    for idx in range(len(canon) - 1, -1, -1):
        next_slot[canon[idx]] = idx
    lines = ["tvxsol 1", f"dims {tiling.width} {tiling.height}"]
    for row in tiling.grid:
        out = []
        for t in row:
            out.append(next_slot[t])
            next_slot[t] += 1
        lines.append(" ".join(map(str, out)))
    return "\n".join(lines) + "\n"


def parse_tiling(text: str, instance: Instance) -> Tiling:
    lines = text.splitlines()
    (version,) = _expect(lines, 0, "tvxsol", 1)
    if version != "1":
        raise FormatError(1, f"unsupported version {version!r}")
    w, h = (_int(2, x, "dimension") for x in _expect(lines, 1, "dims", 2))
    if (w, h) != (instance.width, instance.height):
        raise FormatError(
            2, f"tiling dims {w}x{h} do not match instance {instance.width}x{instance.height}"
        )
    body = lines[2:]
    while body and not body[-1].strip():
        body.pop()
    if len(body) != h:
        raise FormatError(2 + len(body), f"expected {h} rows, found {len(body)}")
    seen: set[int] = set()
    grid = []
    for r, line in enumerate(body):
        lineno = r + 3
        toks = line.split()
        if len(toks) != w:
            raise FormatError(lineno, f"expected {w} indices, got {len(toks)}")
        row = []
        for tok in toks:
            idx = _int(lineno, tok, "slot index")
            if not 0 <= idx < instance.size:
                raise FormatError(lineno, f"slot index {idx} out of range 0..{instance.size - 1}")
            if idx in seen:
                raise FormatError(lineno, f"slot index {idx} used twice")
            seen.add(idx)
            row.append(instance.tiles[idx])
        grid.append(tuple(row))
    return Tiling(tuple(grid))
