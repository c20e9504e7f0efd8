"""Weight pairs and every sup-over-cube constant: A_p, two-weight A_p, and
the logarithmically bumped two-weight conditions.

Each constant is a supremum over a finite cube family; any finite family
gives a lower bound for the true sup over all cubes, so every report records
the family it was computed on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Cube, GridFunction
from .operators import maximal_fn
from .orlicz import YoungFunction, orlicz_average_values

__all__ = [
    "WeightPair",
    "BumpSpec",
    "BumpReport",
    "ap_constant",
    "two_weight_ap",
    "bump_constant",
    "iterate_maximal",
]


@dataclass(frozen=True)
class WeightPair:
    """u may vanish on part of the grid; v must be positive everywhere."""

    u: GridFunction
    v: GridFunction

    def __post_init__(self) -> None:
        if self.u.grid != self.v.grid:
            raise ValueError("u and v must share a grid")
        if np.any(self.u.values < 0):
            raise ValueError("u must be nonnegative")
        if not np.any(self.u.values > 0):
            raise ValueError("u must be positive somewhere")
        if np.min(self.v.values) <= 0:
            raise ValueError("v must be positive everywhere")


@dataclass(frozen=True)
class BumpSpec:
    """Exponents of the bumped product norm.

    a_left/a_right are the log-bump exponents on the u- and v-side factors.
    a_left = None means the left factor is the plain average of u (the
    maximal-operator condition uses exactly that form).
    """

    p: float
    delta: float | None
    preset: str
    a_left: float | None
    a_right: float

    def __post_init__(self) -> None:
        if not self.p > 1:
            raise ValueError("p must be > 1")
        if self.preset not in ("max", "czo", "comm", "custom"):
            raise ValueError(f"unknown preset {self.preset!r}")
        if self.preset != "custom":
            if self.delta is None or self.delta <= 0:
                raise ValueError("presets require delta > 0")
            pc = self.p / (self.p - 1.0)
            expected = {
                "max": (None, pc - 1.0 + self.delta),
                "czo": (self.p - 1.0 + self.delta, pc - 1.0 + self.delta),
                "comm": (2.0 * self.p - 1.0 + self.delta, 2.0 * pc - 1.0 + self.delta),
            }[self.preset]
            if (self.a_left, self.a_right) != expected:
                raise ValueError(f"exponents {self.a_left, self.a_right} do not "
                                 f"match preset {self.preset!r}")

    @classmethod
    def maximal(cls, p: float, delta: float = 1.0) -> "BumpSpec":
        pc = p / (p - 1.0)
        return cls(p, delta, "max", None, pc - 1.0 + delta)

    @classmethod
    def czo(cls, p: float, delta: float = 1.0) -> "BumpSpec":
        pc = p / (p - 1.0)
        return cls(p, delta, "czo", p - 1.0 + delta, pc - 1.0 + delta)

    @classmethod
    def commutator(cls, p: float, delta: float = 1.0) -> "BumpSpec":
        pc = p / (p - 1.0)
        return cls(p, delta, "comm", 2.0 * p - 1.0 + delta, 2.0 * pc - 1.0 + delta)

    @classmethod
    def custom(cls, p: float, a_left: float | None, a_right: float,
               delta: float | None = None) -> "BumpSpec":
        return cls(p, delta, "custom", a_left, a_right)


@dataclass
class BumpReport:
    constant: float
    argmax_cube: Cube
    cube_family: str
    p: float
    preset: str | None = None
    delta: float | None = None
    per_cube: np.ndarray | None = None


def _group_by_length(cubes: list[Cube]) -> dict[int, list[int]]:
    groups: dict[int, list[int]] = {}
    for pos, q in enumerate(cubes):
        groups.setdefault(q.n_cells, []).append(pos)
    return groups


def _gather_blocks(values: np.ndarray, cubes: list[Cube], positions: list[int],
                   n: int) -> np.ndarray:
    starts = np.array([cubes[p].i0 for p in positions])
    return values[starts[:, None] + np.arange(n)[None, :]]


def _sup_report(per_cube: np.ndarray, cubes: list[Cube], family: str, p: float,
                keep_values: bool, **meta) -> BumpReport:
    k = int(np.argmax(per_cube))
    return BumpReport(
        constant=float(per_cube[k]),
        argmax_cube=cubes[k],
        cube_family=family,
        p=p,
        per_cube=per_cube if keep_values else None,
        **meta,
    )


def ap_constant(w: GridFunction, p: float, cubes: list[Cube],
                family: str = "custom", keep_values: bool = False) -> BumpReport:
    """sup over cubes of (avg_Q w) (avg_Q w^(1-p')) ^ (p-1)."""
    if not p > 1:
        raise ValueError("p must be > 1")
    if np.min(w.values) <= 0:
        raise ValueError("A_p requires w > 0 on every cell")
    if not cubes:
        raise ValueError("cube family must be nonempty")
    pc = p / (p - 1.0)
    dual = w.values ** (1.0 - pc)
    per_cube = np.empty(len(cubes))
    for n, positions in _group_by_length(cubes).items():
        blocks_w = _gather_blocks(w.values, cubes, positions, n)
        blocks_d = _gather_blocks(dual, cubes, positions, n)
        per_cube[positions] = blocks_w.mean(axis=1) * blocks_d.mean(axis=1) ** (p - 1.0)
    return _sup_report(per_cube, cubes, family, p, keep_values, preset="ap")


def two_weight_ap(pair: WeightPair, p: float, cubes: list[Cube],
                  family: str = "custom", keep_values: bool = False) -> BumpReport:
    """sup over cubes of (avg_Q u) (avg_Q v^(1-p')) ^ (p-1)."""
    if not p > 1:
        raise ValueError("p must be > 1")
    if not cubes:
        raise ValueError("cube family must be nonempty")
    pc = p / (p - 1.0)
    dual = pair.v.values ** (1.0 - pc)
    per_cube = np.empty(len(cubes))
    for n, positions in _group_by_length(cubes).items():
        blocks_u = _gather_blocks(pair.u.values, cubes, positions, n)
        blocks_d = _gather_blocks(dual, cubes, positions, n)
        per_cube[positions] = blocks_u.mean(axis=1) * blocks_d.mean(axis=1) ** (p - 1.0)
    return _sup_report(per_cube, cubes, family, p, keep_values, preset="two_weight_ap")


def bump_constant(pair: WeightPair, spec: BumpSpec, cubes: list[Cube],
                  family: str = "custom", rel_tol: float = 1e-10,
                  keep_values: bool = False) -> BumpReport:
    """sup over cubes of F_left(Q) * F_right(Q).

    F_right is the Orlicz average of v^(-1/p) with exponents (p', a_right).
    F_left is the plain average of u for the maximal preset, and otherwise
    the Orlicz average of u^(1/p) with exponents (p, a_left).
    """
    if not cubes:
        raise ValueError("cube family must be nonempty")
    p = spec.p
    u_root = pair.u.values ** (1.0 / p)
    v_root = pair.v.values ** (-1.0 / p)
    phi_right = YoungFunction(p / (p - 1.0), spec.a_right)
    phi_left = None if spec.a_left is None else YoungFunction(p, spec.a_left)

    per_cube = np.empty(len(cubes))
    for n, positions in _group_by_length(cubes).items():
        blocks_r = _gather_blocks(v_root, cubes, positions, n)
        right, _, _ = orlicz_average_values(blocks_r, phi_right, rel_tol)
        if phi_left is None:
            blocks_u = _gather_blocks(pair.u.values, cubes, positions, n)
            left = blocks_u.mean(axis=1)
        else:
            blocks_l = _gather_blocks(u_root, cubes, positions, n)
            left, _, _ = orlicz_average_values(blocks_l, phi_left, rel_tol)
        per_cube[positions] = left * right
    return _sup_report(per_cube, cubes, family, p, keep_values,
                       preset=spec.preset, delta=spec.delta)


def iterate_maximal(u: GridFunction, k: int) -> GridFunction:
    """k-fold composition of the Hardy-Littlewood maximal operator."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    if np.any(u.values < 0):
        raise ValueError("u must be nonnegative")
    out = u
    for _ in range(k):
        out = maximal_fn(out)
    return out
