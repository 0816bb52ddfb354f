"""Backtracking solution counter and a brute-force oracle for small boards.

The search fills cells row-major, so every new cell has at most a left and
an upper neighbour already placed.  Candidates come from an index keyed by
(required left label, required top label); tile types with multiplicity are
branched on once per type, which makes the count a count of *type-level*
distinct tilings.

Two symmetries are factored out.  Labels that can be swapped without
changing the tile multiset (for instance two gadget-internal labels) give
solutions in free orbits, so the search keeps only the tiling in which each
such class of labels first appears in ascending order.  Toroidal boards are
also translation-symmetric (see :func:`solve`).
"""
from __future__ import annotations

import enum
import itertools
import math
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .core import Instance, Tile, Tiling

BRUTE_FORCE_MAX_CELLS = 9


class Status(enum.Enum):
    SOLVABLE = "SOLVABLE"
    UNSOLVABLE = "UNSOLVABLE"
    LIMIT_REACHED = "LIMIT_REACHED"


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    max_depth: int = 0
    elapsed: float = 0.0  # seconds


@dataclass
class SolveResult:
    status: Status
    count: int
    witnesses: list[Tiling] = field(default_factory=list)
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def solvable(self) -> bool:
        return self.count > 0


# Edge lines a tile can be pinned to, as bits.
_TOP, _LEFT, _BOTTOM, _RIGHT = 1, 2, 4, 8
_LINES = (_TOP, _LEFT, _BOTTOM, _RIGHT)


class _Compiled:
    """Integer-coded view of an instance shared by every search step."""

    def __init__(self, instance: Instance):
        counts = instance.counts()
        self.types = list(dict.fromkeys(instance.tiles))  # canonical order, deduped
        self.mult = [counts[t] for t in self.types]
        ids: dict = {}
        code = lambda lab: ids.setdefault(lab, len(ids))  # noqa: E731
        self.ids = ids
        self.T = [code(t.top) for t in self.types]
        self.R = [code(t.right) for t in self.types]
        self.B = [code(t.bottom) for t in self.types]
        self.L = [code(t.left) for t in self.types]

        n = len(self.types)
        self.all = tuple(range(n))
        by_l: dict[int, list[int]] = {}
        by_t: dict[int, list[int]] = {}
        by_lt: dict[tuple[int, int], list[int]] = {}
        for k in range(n):
            by_l.setdefault(self.L[k], []).append(k)
            by_t.setdefault(self.T[k], []).append(k)
            by_lt.setdefault((self.L[k], self.T[k]), []).append(k)
        self.by_l = {k: tuple(v) for k, v in by_l.items()}
        self.by_t = {k: tuple(v) for k, v in by_t.items()}
        self.by_lt = {k: tuple(v) for k, v in by_lt.items()}

        # A bordered tile whose top label is nobody's bottom can only sit on
        # the top row; likewise for the other three sides.
        self.pin = [0] * n
        if not instance.toroidal:
            bottoms, tops = set(self.B), set(self.T)
            rights, lefts = set(self.R), set(self.L)
            for k in range(n):
                p = 0
                if self.T[k] not in bottoms:
                    p |= _TOP
                if self.L[k] not in rights:
                    p |= _LEFT
                if self.B[k] not in tops:
                    p |= _BOTTOM
                if self.R[k] not in lefts:
                    p |= _RIGHT
                self.pin[k] = p


def _label_classes(cp: _Compiled, frozen: set[int]) -> list[list[int]]:
    """Classes of label codes any permutation of which maps the multiset to itself.

    Two labels are swappable when their tiles agree once each is masked
    out and no tile carries both.  Transpositions that are symmetries
    generate the full symmetric group on each connected class.  Labels in
    ``frozen`` are left alone.
    """
    seen_in: dict[int, list[int]] = {}
    for k in range(len(cp.types)):
        for lab in {cp.T[k], cp.R[k], cp.B[k], cp.L[k]}:
            seen_in.setdefault(lab, []).append(k)
    by_sig: dict[tuple, list[int]] = {}
    for lab, ks in seen_in.items():
        if lab in frozen:
            continue
        sig = tuple(sorted(
            (tuple(-1 if x == lab else x for x in (cp.T[k], cp.R[k], cp.B[k], cp.L[k])), cp.mult[k])
            for k in ks
        ))
        by_sig.setdefault(sig, []).append(lab)
    classes = []
    for group in by_sig.values():
        if len(group) < 2:
            continue
        # union-find over the swappable pairs inside the group
        parent = {lab: lab for lab in group}

        def root(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in itertools.combinations(group, 2):
            if not set(seen_in[a]) & set(seen_in[b]):
                parent[root(a)] = root(b)
        parts: dict[int, list[int]] = {}
        for lab in group:
            parts.setdefault(root(lab), []).append(lab)
        classes.extend(sorted(p) for p in parts.values() if len(p) > 1)
    return classes


def _search(instance: Instance, cp: _Compiled, limit: int | None, collect: int,
            first: tuple[int, ...] | None, stats: SearchStats,
            classes: list[list[int]] = ()) -> tuple[int, list[list[int]]]:
    """Row-major DFS.  Returns the solution count and up to ``collect`` grids.

    Sound prunings ride along.  Pinned tiles must still fit on their edge
    line.  Every open bottom face on the frontier needs a distinct unplaced
    tile carrying that label on top (on a torus the row-0 tops likewise need
    unplaced bottoms).  Once row 0 is full, every unplaced top needs a face
    above it: an open frontier bottom or another unplaced tile's bottom.
    Tiles with equal top and bottom ("loops") cannot feed themselves, so a
    run of them needs at least one outside supplier.  Finally, when a row
    starts its tops are fixed by the row above; a backward pass over them
    gives the left labels each column can still accept, so a tile whose
    right label its successor cannot accept is skipped at once.
    """
    W, H = instance.width, instance.height
    N = W * H
    toroidal = instance.toroidal
    T, R, B, L = cp.T, cp.R, cp.B, cp.L
    mult = list(cp.mult)
    ntypes = len(mult)
    pin = cp.pin
    by_l, by_t, by_lt, all_types = cp.by_l, cp.by_t, cp.by_lt, cp.all
    nlabels = 1 + max(max(T), max(R), max(B), max(L))

    # line index per bit: 0 top, 1 left, 2 bottom, 3 right
    line_ids = [tuple(i for i, ln in enumerate(_LINES) if m & ln) for m in range(16)]
    cell_mask = []
    for k in range(N):
        r, c = divmod(k, W)
        cell_mask.append((_TOP if r == 0 else 0) | (_LEFT if c == 0 else 0)
                         | (_BOTTOM if r == H - 1 else 0) | (_RIGHT if c == W - 1 else 0))
    cell_lines = [line_ids[m] for m in cell_mask]
    pin_lines = [line_ids[p] for p in pin]
    use_pins = any(pin)
    free = [W, H, W, H]
    pinned = [sum(mult[t] for t in range(ntypes) if pin[t] & ln) for ln in _LINES]
    if use_pins and any(pinned[i] > free[i] for i in range(4)):
        return 0, []

    top_supply = [0] * nlabels
    bottom_supply = [0] * nlabels
    loops = [0] * nlabels  # unplaced tiles with top == bottom
    is_loop = [T[t] == B[t] for t in range(ntypes)]
    for t in range(ntypes):
        top_supply[T[t]] += mult[t]
        bottom_supply[B[t]] += mult[t]
        if is_loop[t]:
            loops[T[t]] += mult[t]

    def fed(lab: int) -> bool:
        s = loops[lab]
        outside = open_bottom[lab] + bottom_supply[lab] - s
        return top_supply[lab] - s <= outside and (not s or outside > 0)
    open_bottom = [0] * nlabels
    open_top = [0] * nlabels
    last_row = (H - 1) * W
    wrap_rows = toroidal and H > 1

    row_cache: dict[tuple[int, ...], list[frozenset]] = {}
    row_accepts: list[list[frozenset]] = [[]] * H

    def accepts(tops: tuple[int, ...], dead: frozenset) -> list[frozenset]:
        acc = [frozenset()] * W
        nxt = frozenset(L[t] for t in by_t.get(tops[-1], ()) if t not in dead)
        acc[W - 1] = nxt
        for col in range(W - 2, 0, -1):
            nxt = frozenset(L[t] for t in by_t.get(tops[col], ())
                            if R[t] in nxt and t not in dead)
            acc[col] = nxt
        return acc

    def starves(t: int, row: int) -> bool:
        """Would placing t in ``row`` leave its top label unfed?

        Only asked when no other cell of the row has that top, so nothing
        else placed in the row can improve the answer.
        """
        lab = T[t]
        loop = is_loop[t]
        s = loops[lab] - loop
        x = top_supply[lab] - loops[lab] - (not loop)
        opened = open_bottom[lab] - 1 + (loop and row < H - 1)
        outside = opened + bottom_supply[lab] - loop - s
        return x > outside or (s > 0 and outside <= 0)

    def dead_types(tops: tuple[int, ...], row: int) -> frozenset:
        seen: dict[int, int] = {}
        for lab in tops:
            seen[lab] = seen.get(lab, 0) + 1
        dead = []
        for lab, n in seen.items():
            if n == 1 and loops[lab]:
                dead.extend(t for t in by_t[lab] if not mult[t] or starves(t, row))
        return frozenset(dead)

    # symmetry breaking: class labels must first appear in ascending rank
    rank = {}
    for ci, cls in enumerate(classes):
        for i, lab in enumerate(cls):
            rank[lab] = (ci, i)
    sym_faces = [tuple(rank[x] for x in (T[t], R[t], B[t], L[t]) if x in rank)
                 for t in range(ntypes)]
    used = [0] * len(classes)
    bumps: list[list[int]] = [[] for _ in range(N)]

    grid = [-1] * N
    cands: list[tuple[int, ...]] = [()] * N
    ptr = [0] * N
    count = 0
    found: list[list[int]] = []
    nodes = 0
    deepest = stats.max_depth

    def undo(k: int, t: int) -> None:
        if bumps[k]:
            for ci in bumps[k]:
                used[ci] -= 1
            bumps[k] = []
        mult[t] += 1
        top_supply[T[t]] += 1
        bottom_supply[B[t]] += 1
        if is_loop[t]:
            loops[T[t]] += 1
        if k >= W:
            open_bottom[B[grid[k - W]]] += 1
        if k < last_row:
            open_bottom[B[t]] -= 1
        if wrap_rows:
            if k < W:
                open_top[T[t]] -= 1
            elif k >= last_row:
                open_top[T[grid[k - last_row]]] += 1
        if use_pins:
            for i in cell_lines[k]:
                free[i] += 1
            for i in pin_lines[t]:
                pinned[i] += 1
        grid[k] = -1

    k = 0
    if first is not None:
        cands[0] = first
    else:
        cands[0] = all_types
    ptr[0] = 0
    while k >= 0:
        cl = cands[k]
        p = ptr[k]
        if p >= len(cl):
            k -= 1
            if k >= 0:
                undo(k, grid[k])
            continue
        t = cl[p]
        ptr[k] = p + 1
        if not mult[t]:
            continue
        nodes += 1
        r, c = divmod(k, W)
        if r and c < W - 1 and R[t] not in row_accepts[r][c + 1]:
            continue
        if toroidal:
            if c == W - 1 and R[t] != L[grid[k - c] if c else t]:
                continue
            if k >= last_row and B[t] != T[grid[c] if k >= W else t]:
                continue
        if use_pins and pin[t] & ~cell_mask[k]:
            continue
        sf = sym_faces[t]
        if sf:
            inc = []
            for ci, i in sf:
                if i >= used[ci]:
                    if i != used[ci]:
                        break
                    used[ci] += 1
                    inc.append(ci)
            else:
                bumps[k] = inc
                inc = None
            if inc is not None:
                for ci in inc:
                    used[ci] -= 1
                continue
        # place
        grid[k] = t
        mult[t] -= 1
        tt, bt = T[t], B[t]
        top_supply[tt] -= 1
        bottom_supply[bt] -= 1
        if tt == bt:
            loops[tt] -= 1
        if k >= W:
            open_bottom[B[grid[k - W]]] -= 1
        if k < last_row:
            open_bottom[bt] += 1
        ok = open_bottom[tt] <= top_supply[tt] and open_bottom[bt] <= top_supply[bt]
        if wrap_rows:
            if k < W:
                open_top[tt] += 1
            elif k >= last_row:
                open_top[T[grid[k - last_row]]] -= 1
            if ok:
                ok = open_top[bt] <= bottom_supply[bt] and open_top[tt] <= bottom_supply[tt]
        if ok and k >= W - 1:
            if k == W - 1:
                ok = all(fed(lab) for lab in range(nlabels))
            else:
                ok = fed(tt) and fed(bt)
        if use_pins:
            for i in cell_lines[k]:
                free[i] -= 1
            for i in pin_lines[t]:
                pinned[i] -= 1
            if ok:
                for i in range(4):
                    if pinned[i] > free[i]:
                        ok = False
                        break
        if not ok:
            undo(k, t)
            continue
        if k >= deepest:
            deepest = k + 1
        if k + 1 == N:
            count += 1
            if len(found) < collect:
                found.append(list(grid))
            undo(k, t)
            if limit is not None and count >= limit:
                break
            continue
        k += 1
        if c + 1 < W:
            if k >= W:
                cands[k] = by_lt.get((R[t], B[grid[k - W]]), ())
            else:
                cands[k] = by_l.get(R[t], ())
        else:
            tops = tuple(B[x] for x in grid[k - W:k])
            dead = dead_types(tops, r + 1)
            acc = row_cache.get((tops, dead))
            if acc is None:
                acc = row_cache[tops, dead] = accepts(tops, dead)
            row_accepts[r + 1] = acc
            cands[k] = by_t.get(tops[0], ())
        ptr[k] = 0

    stats.nodes_expanded += nodes
    stats.max_depth = deepest
    return count, found


def _symmetry_anchor(cp: _Compiled) -> int | None:
    """Singleton tile type whose right and lower neighbours are most constrained."""
    n_left = {}
    n_top = {}
    for k in range(len(cp.types)):
        n_left[cp.L[k]] = n_left.get(cp.L[k], 0) + 1
        n_top[cp.T[k]] = n_top.get(cp.T[k], 0) + 1
    singles = [k for k, m in enumerate(cp.mult) if m == 1]
    if not singles:
        return None
    return min(singles, key=lambda k: (n_left.get(cp.R[k], 0) + n_top.get(cp.B[k], 0), k))


def solve(instance: Instance, limit: int | None = None, collect: int = 1) -> SolveResult:
    """Count type-level distinct tilings, stopping once ``limit`` are found.

    ``limit=None`` counts exhaustively.  Up to ``collect`` witnesses are
    returned, in the order the search meets them.

    Toroidal boards are translation-symmetric.  When some tile type occurs
    exactly once, no non-trivial shift fixes a tiling, so the tilings split
    into orbits of exactly W*H.  The search then pins that tile to (0, 0)
    and multiplies.  Swappable label classes are handled the same way:
    each orbit has one member with the class labels in first-appearance
    order.  Witnesses are the canonical solutions and their images.
    """
    if limit is not None and limit < 1:
        raise ValueError("limit must be >= 1")
    if collect < 0 or (limit is not None and collect > limit):
        raise ValueError("collect must be in 0..limit")
    started = time.perf_counter()
    cp = _Compiled(instance)
    W, H = instance.width, instance.height
    stats = SearchStats()
    anchor = None
    if instance.toroidal and W * H > 1:
        anchor = _symmetry_anchor(cp)
    frozen = set()
    if anchor is not None:
        frozen = {cp.T[anchor], cp.R[anchor], cp.B[anchor], cp.L[anchor]}
    classes = _label_classes(cp, frozen)
    orbit = math.prod(math.factorial(len(c)) for c in classes)
    shifts = [(0, 0)]
    if anchor is not None:
        orbit *= W * H
        shifts = [(dr, dc) for dr in range(H) for dc in range(W)]
    sub_limit = None if limit is None else -(-limit // orbit)
    first = None if anchor is None else (anchor,)
    count, grids = _search(instance, cp, sub_limit, -(-collect // orbit), first, stats, classes)
    count *= orbit
    if limit is not None:
        count = min(count, limit)

    witnesses: list[Tiling] = []
    for g in grids:
        for relabel in _relabelings(cp, classes):
            for dr, dc in shifts:
                if len(witnesses) >= collect:
                    break
                witnesses.append(Tiling(tuple(
                    tuple(relabel[g[((r - dr) % H) * W + (c - dc) % W]] for c in range(W))
                    for r in range(H)
                )))
            if len(witnesses) >= collect:
                break
    stats.elapsed = time.perf_counter() - started
    if count == 0:
        status = Status.UNSOLVABLE
    elif limit is not None and count >= limit:
        status = Status.LIMIT_REACHED
    else:
        status = Status.SOLVABLE
    return SolveResult(status, count, witnesses, stats)


def _relabelings(cp: _Compiled, classes: list[list[int]]):
    """Yield type-index -> Tile maps, one per permutation of the label classes."""
    labels = {code: lab for lab, code in cp.ids.items()}
    for perms in itertools.product(*(itertools.permutations(c) for c in classes)):
        swap = {}
        for cls, perm in zip(classes, perms):
            swap.update(zip(cls, perm))
        yield [
            Tile(*(labels[swap.get(x, x)] for x in (cp.T[k], cp.R[k], cp.B[k], cp.L[k])))
            for k in range(len(cp.types))
        ]


def is_uniquely_solvable(instance: Instance) -> bool:
    return solve(instance, limit=2, collect=0).count == 1


@lru_cache(maxsize=None)
def _permutations(n: int) -> np.ndarray:
    perms = np.fromiter(
        itertools.chain.from_iterable(itertools.permutations(range(n))),
        dtype=np.int8,
        count=math.factorial(n) * n,
    )
    return perms.reshape(-1, n)


def brute_force_count(instance: Instance) -> int:
    """Exact type-level solution count by exhaustive enumeration.

    Every arrangement of the tile *slots* over the grid is checked with
    vectorised edge comparisons and no pruning.  Each type-level tiling is
    realised by exactly prod(multiplicity!) slot arrangements, so the slot
    count divides evenly.
    """
    W, H = instance.width, instance.height
    N = W * H
    if N > BRUTE_FORCE_MAX_CELLS:
        raise ValueError(f"brute force refuses {N} cells (max {BRUTE_FORCE_MAX_CELLS})")
    ids: dict = {}
    code = lambda lab: ids.setdefault(lab, len(ids))  # noqa: E731
    top = np.array([code(t.top) for t in instance.tiles])
    right = np.array([code(t.right) for t in instance.tiles])
    bottom = np.array([code(t.bottom) for t in instance.tiles])
    left = np.array([code(t.left) for t in instance.tiles])

    P = _permutations(N)
    ok = np.ones(len(P), dtype=bool)
    wrap = instance.toroidal
    for r in range(H):
        for c in range(W):
            k = r * W + c
            if c + 1 < W or wrap:
                k2 = r * W + (c + 1) % W
                ok &= right[P[:, k]] == left[P[:, k2]]
            if r + 1 < H or wrap:
                k2 = ((r + 1) % H) * W + c
                ok &= bottom[P[:, k]] == top[P[:, k2]]
    slot_count = int(ok.sum())
    symmetry = math.prod(math.factorial(m) for m in instance.counts().values())
    assert slot_count % symmetry == 0
    return slot_count // symmetry
