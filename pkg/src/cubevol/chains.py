"""Exact chain algebra for affine cubical and simplicial chains.

Generators are affine cells in rational coordinate space, identified by
their vertex tuples.  A cube of dimension ``k`` stores its ``2**k``
vertices in the lexicographic order of the bit strings ``(b_1, ..., b_k)``
(``b_1`` most significant); it is evaluated by multilinear interpolation,
i.e. by iterated affine joins.  Coefficients are :class:`fractions.Fraction`.

Any hashable object providing ``dim``, ``boundary_terms()``,
``is_degenerate()`` and ``sort_key()`` can serve as a generator of a
:class:`FormalChain`; the geometric modules reuse this for straight cubes.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

Point = tuple[Fraction, ...]


def as_point(coords: Iterable) -> Point:
    return tuple(Fraction(c) for c in coords)


def bits(k: int) -> list[tuple[int, ...]]:
    """The index set J^k in storage order."""
    return list(itertools.product((0, 1), repeat=k))


def bit_index(b: Sequence[int]) -> int:
    idx = 0
    for x in b:
        idx = 2 * idx + x
    return idx


def insert_bit(b: Sequence[int], j: int, i: int) -> tuple[int, ...]:
    """Insert bit ``i`` at (1-based) position ``j``."""
    return tuple(b[: j - 1]) + (i,) + tuple(b[j - 1:])


@dataclass(frozen=True)
class FacePattern:
    j: int
    i: int

    def __post_init__(self):
        if self.j < 1 or self.i not in (0, 1):
            raise ValueError(f"invalid face pattern ({self.j}, {self.i})")


@dataclass(frozen=True)
class Simplex:
    vertices: tuple[Point, ...]
    _hash: int = field(init=False, repr=False, compare=False)

    kind = "simplex"

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("a simplex needs at least one vertex")
        ambient = {len(v) for v in self.vertices}
        if len(ambient) > 1:
            raise ValueError("simplex vertices live in different dimensions")
        # hashing Fractions is slow and chains hash generators constantly
        object.__setattr__(self, "_hash", hash(("simplex", self.vertices)))

    def __hash__(self):
        return self._hash

    @classmethod
    def of(cls, *vertices) -> "Simplex":
        return cls(tuple(as_point(v) for v in vertices))

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def face(self, i: int) -> "Simplex":
        return Simplex(self.vertices[:i] + self.vertices[i + 1:])

    def boundary_terms(self) -> Iterator[tuple["Simplex", int]]:
        if self.dim == 0:
            return
        for i in range(self.dim + 1):
            yield self.face(i), (-1) ** i

    def is_degenerate(self) -> bool:
        # image of a degeneracy map: two consecutive vertices agree
        return any(a == b for a, b in zip(self.vertices, self.vertices[1:]))

    def map_vertices(self, f) -> "Simplex":
        return Simplex(tuple(f(v) for v in self.vertices))

    def sort_key(self):
        return (0, self.vertices)


@dataclass(frozen=True)
class Cube:
    vertices: tuple[Point, ...]
    _hash: int = field(init=False, repr=False, compare=False)

    kind = "cube"

    def __post_init__(self):
        n = len(self.vertices)
        if n == 0 or n & (n - 1):
            raise ValueError(f"a cube needs 2**k vertices, got {n}")
        ambient = {len(v) for v in self.vertices}
        if len(ambient) > 1:
            raise ValueError("cube vertices live in different dimensions")
        # hashing Fractions is slow and chains hash generators constantly
        object.__setattr__(self, "_hash", hash(("cube", self.vertices)))

    def __hash__(self):
        return self._hash

    @classmethod
    def of(cls, *vertices) -> "Cube":
        return cls(tuple(as_point(v) for v in vertices))

    @classmethod
    def identity(cls, k: int) -> "Cube":
        """The standard cube id_{[0,1]^k} as an affine cube in Q^k."""
        return cls(tuple(as_point(b) for b in bits(k)))

    @property
    def dim(self) -> int:
        return len(self.vertices).bit_length() - 1

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    def vertex(self, b: Sequence[int]) -> Point:
        return self.vertices[bit_index(b)]

    def face(self, p: FacePattern) -> "Cube":
        if not 1 <= p.j <= self.dim:
            raise IndexError(f"face {p} out of range for a {self.dim}-cube")
        return Cube(tuple(self.vertex(insert_bit(b, p.j, p.i)) for b in bits(self.dim - 1)))

    def boundary_terms(self) -> Iterator[tuple["Cube", int]]:
        for j in range(1, self.dim + 1):
            for i in (0, 1):
                yield self.face(FacePattern(j, i)), (-1) ** (j + i)

    def is_degenerate(self) -> bool:
        # affine cubes are independent of t_j iff opposite (j,0)/(j,1) faces agree
        k = self.dim
        return any(
            self.face(FacePattern(j, 0)) == self.face(FacePattern(j, 1)) for j in range(1, k + 1)
        )

    def evaluate(self, t: Sequence) -> Point:
        """Multilinear evaluation at a point of [0,1]^k (exact for rational t)."""
        t = [Fraction(x) for x in t]
        if len(t) != self.dim:
            raise ValueError("parameter dimension mismatch")
        layer = list(self.vertices)
        # join along t_1 first: pairs differ in the most significant remaining bit
        for tj in t:
            half = len(layer) // 2
            layer = [
                tuple((1 - tj) * a + tj * b for a, b in zip(layer[m], layer[m + half]))
                for m in range(half)
            ]
        return layer[0]

    def map_vertices(self, f) -> "Cube":
        return Cube(tuple(f(v) for v in self.vertices))

    def sort_key(self):
        return (1, self.vertices)


class FormalChain(Mapping):
    """A finite rational combination of generators of a common dimension.

    Stored canonically: zero coefficients dropped, terms sorted by the
    generators' ``sort_key``.
    """

    __slots__ = ("dim", "_terms")

    def __init__(self, terms: Mapping | Iterable[tuple[object, object]] = (), dim: int | None = None):
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for gen, c in items:
            c = Fraction(c)
            if c:
                acc[gen] = acc.get(gen, 0) + c
        acc = {g: c for g, c in acc.items() if c}
        dims = {g.dim for g in acc}
        if len(dims) > 1:
            raise ValueError(f"mixed generator dimensions {sorted(dims)}")
        if dims:
            (d,) = dims
            if dim is not None and dim != d:
                raise ValueError(f"declared dimension {dim} but generators have dimension {d}")
            dim = d
        if dim is None:
            raise ValueError("dimension of an empty chain must be given")
        self.dim = dim
        self._terms = dict(sorted(acc.items(), key=lambda kv: kv[0].sort_key()))

    @classmethod
    def of(cls, gen, coeff=1) -> "FormalChain":
        return cls({gen: coeff})

    @classmethod
    def zero(cls, dim: int) -> "FormalChain":
        return cls({}, dim=dim)

    def __getitem__(self, gen):
        return self._terms[gen]

    def __iter__(self):
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if isinstance(other, FormalChain):
            return self.dim == other.dim and self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        return hash((self.dim, tuple(self._terms.items())))

    def __add__(self, other: "FormalChain") -> "FormalChain":
        self._check(other)
        return FormalChain(itertools.chain(self.items(), other.items()), dim=self.dim)

    def __sub__(self, other: "FormalChain") -> "FormalChain":
        return self + (-other)

    def __neg__(self) -> "FormalChain":
        return self.scale(-1)

    def __rmul__(self, c) -> "FormalChain":
        return self.scale(c)

    def scale(self, c) -> "FormalChain":
        c = Fraction(c)
        return FormalChain(((g, c * a) for g, a in self.items()), dim=self.dim)

    def _check(self, other):
        if not isinstance(other, FormalChain):
            raise TypeError(f"cannot combine a chain with {type(other).__name__}")
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def map_generators(self, f, dim: int | None = None) -> "FormalChain":
        """Linear extension of a generator map ``f: gen -> gen``."""
        return FormalChain(((f(g), c) for g, c in self.items()), dim=self.dim if dim is None else dim)

    def __repr__(self):
        if not self._terms:
            return f"FormalChain(0, dim={self.dim})"
        parts = [f"{c}*{g!r}" for g, c in self.items()]
        return f"FormalChain({' + '.join(parts)})"


def boundary(z: FormalChain) -> FormalChain:
    """Boundary of a chain, using each generator's own face formula."""
    if z.dim < 1:
        raise ValueError("boundary needs a chain of dimension >= 1")
    out = ((face, c * s) for g, c in z.items() for face, s in g.boundary_terms())
    return FormalChain(out, dim=z.dim - 1)


def _check_kind(z: FormalChain, kind: str) -> None:
    for g in z:
        if getattr(g, "kind", None) != kind:
            raise TypeError(f"expected a chain of {kind}s, found {type(g).__name__}")


def boundary_cube(z: FormalChain) -> FormalChain:
    """Cubical boundary: sum_j (-1)^j (c o face(j,0) - c o face(j,1))."""
    _check_kind(z, "cube")
    return boundary(z)


def boundary_simplex(z: FormalChain) -> FormalChain:
    _check_kind(z, "simplex")
    return boundary(z)


def cube_face(c: Cube, p: FacePattern) -> Cube:
    return c.face(p)


def is_degenerate(g) -> bool:
    return g.is_degenerate()


def reduce_degenerate(z: FormalChain) -> FormalChain:
    """Canonical representative of ``z`` modulo degenerate generators."""
    return FormalChain(((g, c) for g, c in z.items() if not g.is_degenerate()), dim=z.dim)


def l1_norm(z: FormalChain) -> Fraction:
    return sum((abs(c) for c in z.values()), Fraction(0))


def quotient_norm(z: FormalChain) -> Fraction:
    """l1 norm of the class of ``z`` modulo degenerate generators."""
    return l1_norm(reduce_degenerate(z))


# -- JSON ------------------------------------------------------------------

def _frac_json(x: Fraction) -> list[int]:
    return [x.numerator, x.denominator]


def _json_frac(pair) -> Fraction:
    if isinstance(pair, (int, str)):
        return Fraction(pair)
    num, den = pair
    if not isinstance(num, int) or not isinstance(den, int):
        raise ValueError(f"expected integer [num, den], got {pair!r}")
    return Fraction(num, den)


def chain_to_json(z: FormalChain) -> dict:
    terms = []
    for g, c in z.items():
        if getattr(g, "kind", None) not in ("cube", "simplex"):
            raise TypeError(f"{type(g).__name__} has no rational JSON form")
        flat = [_frac_json(x) for v in g.vertices for x in v]
        terms.append({"kind": g.kind, "vertices": flat, "coeff": _frac_json(c)})
    return {"dim": z.dim, "terms": terms}


def chain_from_json(data: Mapping) -> FormalChain:
    dim = int(data["dim"])
    terms = []
    for t in data["terms"]:
        kind = t["kind"]
        count = dim + 1 if kind == "simplex" else 2 ** dim if kind == "cube" else None
        if count is None:
            raise ValueError(f"unknown generator kind {kind!r}")
        flat = [_json_frac(p) for p in t["vertices"]]
        if not flat or len(flat) % count:
            raise ValueError(f"{len(flat)} coordinates do not split into {count} vertices")
        amb = len(flat) // count
        verts = tuple(tuple(flat[i * amb:(i + 1) * amb]) for i in range(count))
        gen = Simplex(verts) if kind == "simplex" else Cube(verts)
        terms.append((gen, _json_frac(t["coeff"])))
    return FormalChain(terms, dim=dim)


def dumps(z: FormalChain, **kw) -> str:
    return json.dumps(chain_to_json(z), **kw)


def loads(s: str) -> FormalChain:
    return chain_from_json(json.loads(s))
