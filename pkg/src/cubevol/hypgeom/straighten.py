"""Straightening of singular cubes with recorded vertex lifts."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..chains import FacePattern, FormalChain, bits
from .cubes import StraightCube


@dataclass(frozen=True)
class SingularCube:
    """A face of a labelled singular cube, with the lifts of the parent's vertices.

    ``fixed`` records, for each parent coordinate, ``None`` if it is free or
    the value 0/1 it is frozen at.  Faces of faces are therefore canonical,
    so boundary identities hold on the nose.  ``fn`` (optional) evaluates
    the parent cube and is ignored for equality.
    """

    label: str
    lifts: tuple[tuple[float, ...], ...]
    fixed: tuple = ()
    fn: Callable | None = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if not self.lifts:
            raise ValueError(f"singular cube {self.label!r} has no vertex lifts")
        count = len(self.lifts)
        if count & (count - 1):
            raise ValueError("vertex lifts must come in a power of two")
        if not self.fixed:
            object.__setattr__(self, "fixed", (None,) * (count.bit_length() - 1))
        if 2 ** len(self.fixed) != count:
            raise ValueError("face data does not match the number of lifts")

    @classmethod
    def from_array(cls, label: str, lifts, fn=None) -> "SingularCube":
        return cls(label, tuple(tuple(float(a) for a in p) for p in np.asarray(lifts)), (), fn)

    @property
    def dim(self) -> int:
        return sum(1 for f in self.fixed if f is None)

    def vertex_lifts(self) -> np.ndarray:
        """Lifts of this face's own 2^k vertices, in storage order."""
        free = [a for a, f in enumerate(self.fixed) if f is None]
        out = []
        for b in bits(self.dim):
            full = list(self.fixed)
            for a, v in zip(free, b):
                full[a] = v
            out.append(self.lifts[int("".join(map(str, full)) or "0", 2)])
        return np.array(out)

    def face(self, p: FacePattern) -> "SingularCube":
        free = [a for a, f in enumerate(self.fixed) if f is None]
        if not 1 <= p.j <= len(free):
            raise IndexError(f"face {p} out of range for a {self.dim}-cube")
        fixed = list(self.fixed)
        fixed[free[p.j - 1]] = p.i
        return SingularCube(self.label, self.lifts, tuple(fixed), self.fn)

    def boundary_terms(self):
        for j in range(1, self.dim + 1):
            for i in (0, 1):
                yield self.face(FacePattern(j, i)), (-1) ** (j + i)

    def is_degenerate(self) -> bool:
        return False

    def evaluate(self, t):
        if self.fn is None:
            raise ValueError(f"singular cube {self.label!r} carries no map")
        t = np.atleast_2d(np.asarray(t, dtype=float))
        full = np.empty((t.shape[0], len(self.fixed)))
        col = 0
        for a, f in enumerate(self.fixed):
            if f is None:
                full[:, a] = t[:, col]
                col += 1
            else:
                full[:, a] = f
        return self.fn(full)

    def sort_key(self):
        return (3, self.label, tuple(-1 if f is None else f for f in self.fixed))


def straighten_cube(c) -> StraightCube:
    if isinstance(c, StraightCube):
        return c
    lifts = getattr(c, "vertex_lifts", None)
    if lifts is None:
        raise ValueError(f"{c!r} has no recorded vertex lifts")
    return StraightCube(lifts())


def straighten(z: FormalChain) -> FormalChain:
    """Replace each generator by the straight cube on its vertex lifts, linearly."""
    return z.map_generators(straighten_cube)


__all__ = ["SingularCube", "straighten", "straighten_cube"]
