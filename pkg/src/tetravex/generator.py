"""Random puzzle generation and the solvability experiment harness.

Randomness comes from SplitMix64 (Steele, Lea and Flood's 64-bit mixing
generator, the seeding generator of the xoshiro family), implemented here
bit-exactly so streams are identical on every platform.  Version tag:
``splitmix64/1``.

Per-trial seeds are ``mix64(seed ^ trial)``, where ``mix64`` is the
SplitMix64 output finaliser.  Trials are therefore independent of each
other and of the order they run in.
"""
from __future__ import annotations

import csv
import enum
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Boundary, Instance, Tile
from .solver import is_uniquely_solvable, solve

PRNG_NAME = "splitmix64/1"
MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15

CSV_HEADER = ("mode", "width", "height", "alphabet", "seed", "trials",
              "solvable_frac", "unique_frac", "mean_nodes", "mean_micros")


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + _GAMMA) & MASK64
        return mix64(self.state)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), by rejection so there is no modulo bias."""
        if n < 1:
            raise ValueError("n must be positive")
        limit = (1 << 64) - (1 << 64) % n
        while True:
            x = self.next()
            if x < limit:
                return x % n

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


def trial_seed(seed: int, trial: int) -> int:
    return mix64((seed & MASK64) ^ trial)


class Mode(enum.Enum):
    SHREDDED = "shredded"
    IID = "iid"


@dataclass(frozen=True)
class GenConfig:
    width: int
    height: int
    alphabet: int
    seed: int
    mode: Mode = Mode.SHREDDED
    boundary: Boundary = Boundary.BORDERED

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"bad board size {self.width}x{self.height}")
        if self.alphabet < 1:
            raise ValueError("alphabet must be at least 1")
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "boundary", Boundary(self.boundary))

    def with_seed(self, seed: int) -> "GenConfig":
        return GenConfig(self.width, self.height, self.alphabet, seed & MASK64,
                         self.mode, self.boundary)


class GenerationError(RuntimeError):
    def __init__(self, attempts: int, msg: str):
        super().__init__(f"{msg} after {attempts} attempt(s)")
        self.attempts = attempts


def generate_shredded(cfg: GenConfig) -> Instance:
    """Label every edge of a full board, cut it up, shuffle the pieces.

    Draw order: the vertical edges row by row (W+1 per row, left border
    first), then the horizontal edges (H+1 rows of W, top border first).
    On a torus the closing border repeats the opening one.
    """
    if cfg.mode is not Mode.SHREDDED:
        raise ValueError("generate_shredded needs mode=shredded")
    W, H, L = cfg.width, cfg.height, cfg.alphabet
    rng = SplitMix64(cfg.seed)
    vert = [[rng.below(L) for _ in range(W + 1)] for _ in range(H)]
    horiz = [[rng.below(L) for _ in range(W)] for _ in range(H + 1)]
    if cfg.boundary is Boundary.TOROIDAL:
        for row in vert:
            row[W] = row[0]
        horiz[H] = list(horiz[0])
    tiles = [
        Tile(horiz[r][c], vert[r][c + 1], horiz[r + 1][c], vert[r][c])
        for r in range(H) for c in range(W)
    ]
    rng.shuffle(tiles)
    return Instance(W, H, cfg.boundary, tuple(tiles))


def generate_iid(cfg: GenConfig) -> Instance:
    """Every label of every tile drawn independently; may well be unsolvable."""
    if cfg.mode is not Mode.IID:
        raise ValueError("generate_iid needs mode=iid")
    rng = SplitMix64(cfg.seed)
    L = cfg.alphabet
    tiles = [Tile(*(rng.below(L) for _ in range(4))) for _ in range(cfg.width * cfg.height)]
    return Instance(cfg.width, cfg.height, cfg.boundary, tuple(tiles))


def generate(cfg: GenConfig) -> Instance:
    if cfg.mode is Mode.SHREDDED:
        return generate_shredded(cfg)
    return generate_iid(cfg)


def generate_unique(cfg: GenConfig, budget: int) -> Instance:
    """First shredded sample with exactly one type-level solution.

    Seeds tried are seed, seed+1, ... (mod 2^64), at most ``budget`` of them.
    """
    if budget < 1:
        raise ValueError("budget must be positive")
    if cfg.mode is not Mode.SHREDDED:
        raise ValueError("generate_unique needs mode=shredded")
    for attempt in range(budget):
        inst = generate_shredded(cfg.with_seed(cfg.seed + attempt))
        if is_uniquely_solvable(inst):
            return inst
    raise GenerationError(budget, "no uniquely solvable instance found")


# -- experiments ------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentRow:
    mode: Mode
    width: int
    height: int
    alphabet: int
    seed: int
    trials: int
    solvable_frac: float
    unique_frac: float
    mean_nodes: float
    mean_micros: float

    def csv_fields(self) -> list[str]:
        return [
            self.mode.value, str(self.width), str(self.height), str(self.alphabet),
            str(self.seed), str(self.trials), f"{self.solvable_frac:.6f}",
            f"{self.unique_frac:.6f}", f"{self.mean_nodes:.3f}", f"{self.mean_micros:.1f}",
        ]


def _run_trial(cfg: GenConfig) -> tuple[int, int, int, float]:
    res = solve(generate(cfg), limit=2, collect=0)
    return (res.count >= 1, res.count == 1, res.stats.nodes_expanded, res.stats.elapsed * 1e6)


def run_experiment(modes: Iterable[Mode | str], sizes: Iterable[tuple[int, int]],
                   alphabets: Iterable[int], trials: int, seed: int,
                   workers: int = 1) -> list[ExperimentRow]:
    """Solvable and unique fractions for every (mode, size, alphabet) cell.

    Each instance is solved with limit 2.  Rows come out in the nested
    order modes, sizes, alphabets.  With ``workers > 1`` trials run in a
    process pool; sums are order-free, so results do not change.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    grid = [(Mode(m), w, h, a) for m in modes for (w, h) in sizes for a in alphabets]
    jobs = [
        GenConfig(w, h, a, trial_seed(seed, t), mode)
        for mode, w, h, a in grid for t in range(trials)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_trial, jobs, chunksize=max(1, trials // 4)))
    else:
        outcomes = [_run_trial(cfg) for cfg in jobs]

    rows = []
    for k, (mode, w, h, a) in enumerate(grid):
        chunk = outcomes[k * trials:(k + 1) * trials]
        solvable = sum(o[0] for o in chunk)
        unique = sum(o[1] for o in chunk)
        rows.append(ExperimentRow(
            mode, w, h, a, seed & MASK64, trials,
            solvable / trials, unique / trials,
            sum(o[2] for o in chunk) / trials,
            sum(o[3] for o in chunk) / trials,
        ))
    return rows


def experiment_csv(rows: Sequence[ExperimentRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.csv_fields())
    return buf.getvalue()
