"""Natural chain maps between affine cubical and simplicial chains.

Every map here is defined on the standard cube (or simplex) first and then
transported to an arbitrary affine cell by substituting vertices: a model
simplex with vertices ``p_0..p_m`` in ``[0,1]^k`` becomes the affine simplex
on ``c(p_0)..c(p_m)`` where ``c`` is the multilinear cube.  Vertex
substitution commutes with taking faces on both sides, so chain-map
identities proven on the model transfer exactly.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .chains import (
    Cube,
    FacePattern,
    FormalChain,
    Simplex,
    as_point,
    bits,
    boundary,
    reduce_degenerate,
)

MAX_BASE_DIM = 3


def corner(*coords: int, n: int) -> tuple[Fraction, ...]:
    """Sum of the standard basis vectors e_i for i in ``coords`` (1-based) in Q^n."""
    return as_point(1 if i + 1 in coords else 0 for i in range(n))


# Signed vertex lists of T_0..T_3 on the standard cube; vertices are given
# as the index sets S of the corners e_S.
T_DATA: dict[int, list[tuple[int, list[tuple[int, ...]]]]] = {
    0: [(1, [()])],
    1: [(1, [(), (1,)])],
    2: [(1, [(2,), (), (1, 2)]), (-1, [(1,), (), (1, 2)])],
    3: [
        (1, [(), (1,), (2,), (3,)]),
        (-1, [(1, 2), (1,), (2,), (1, 2, 3)]),
        (1, [(1, 3), (1,), (3,), (1, 2, 3)]),
        (-1, [(2, 3), (2,), (3,), (1, 2, 3)]),
        # central tetrahedron; its first vertex is e_1
        (1, [(1,), (2,), (3,), (1, 2, 3)]),
    ],
}


def t_map(j: int) -> FormalChain:
    """T_j(id) as a chain of affine simplices in [0,1]^j."""
    if j not in T_DATA:
        raise ValueError(f"T_j is only defined for j <= {MAX_BASE_DIM}; use extend_phi")
    terms = [(Simplex(tuple(corner(*s, n=j) for s in verts)), sign) for sign, verts in T_DATA[j]]
    return FormalChain(terms, dim=j)


@dataclass(frozen=True)
class SignedCubeSymmetry:
    """x -> y with y_i = x_{perm[i]}, flipped to 1 - y_i where ``flips[i]``."""

    perm: tuple[int, ...]
    flips: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.perm)

    @property
    def sign(self) -> int:
        """0 if orientation-preserving, 1 otherwise."""
        p = self.perm
        inversions = sum(1 for a in range(len(p)) for b in range(a + 1, len(p)) if p[a] > p[b])
        return (inversions + sum(self.flips)) % 2

    def __call__(self, x):
        return tuple(1 - x[p] if f else x[p] for p, f in zip(self.perm, self.flips))

    def compose(self, other: "SignedCubeSymmetry") -> "SignedCubeSymmetry":
        """self o other."""
        perm = tuple(other.perm[p] for p in self.perm)
        flips = tuple(f ^ other.flips[p] for p, f in zip(self.perm, self.flips))
        return SignedCubeSymmetry(perm, flips)


def cube_symmetries(n: int) -> list[SignedCubeSymmetry]:
    """All 2^n * n! isometries of [0,1]^n."""
    return [
        SignedCubeSymmetry(p, f)
        for p in itertools.permutations(range(n))
        for f in itertools.product((0, 1), repeat=n)
    ]


def symmetrize(j: int, z: FormalChain) -> FormalChain:
    """Signed average of ``z`` over the isometry group of [0,1]^j."""
    group = cube_symmetries(j)
    weight = Fraction(1, len(group))
    terms = []
    for g in group:
        s = -weight if g.sign else weight
        terms.extend((simplex.map_vertices(g), s * c) for simplex, c in z.items())
    return FormalChain(terms, dim=z.dim)


def cone(z: FormalChain, v) -> FormalChain:
    """Cone over ``v``, appended as the last vertex of every simplex."""
    v = as_point(v)
    return FormalChain(
        ((Simplex(s.vertices + (v,)), c) for s, c in z.items()), dim=z.dim + 1
    )


def push_forward(model: FormalChain, cube: Cube) -> FormalChain:
    """Transport a chain of simplices in [0,1]^k along the affine cube ``cube``."""
    cache: dict = {}

    def f(p):
        if p not in cache:
            cache[p] = cube.evaluate(p)
        return cache[p]

    return model.map_generators(lambda s: s.map_vertices(f))


def _apply_natural(model_of, z: FormalChain) -> FormalChain:
    terms = []
    for c, coeff in z.items():
        if getattr(c, "kind", None) != "cube":
            raise TypeError("expected a chain of affine cubes")
        terms.extend((s, coeff * a) for s, a in push_forward(model_of(c.dim), c).items())
    return reduce_degenerate(FormalChain(terms, dim=z.dim))


@lru_cache(maxsize=None)
def base_model(j: int) -> FormalChain:
    """phi_j(id_{[0,1]^j}) = Sigma_j T_j(id) modulo degenerate simplices."""
    return reduce_degenerate(symmetrize(j, t_map(j)))


def phi(j: int, z: FormalChain) -> FormalChain:
    """The symmetrized maps for j <= 3, extended by naturality."""
    if not 0 <= j <= MAX_BASE_DIM:
        raise ValueError(f"phi is defined for j <= {MAX_BASE_DIM}; use extend_phi")
    if z.dim != j:
        raise ValueError(f"expected a {j}-chain, got dimension {z.dim}")
    return _apply_natural(lambda k: base_model(k), z)


def coned_model(n: int, base) -> FormalChain:
    """Iterated-coning image of id_{[0,1]^n} from a degree n-1 model map.

    ``base(k)`` returns the model chain of degree ``k``.  With the cone
    vertex appended last, d(w * v) = (dw) * v + (-1)^n w for an (n-1)-chain
    ``w``, so the cone of the cycle phi(d id) carries the sign (-1)^n.
    """
    ident = Cube.identity(n)
    w = FormalChain.zero(n - 1)
    for face, s in ident.boundary_terms():
        w = w + s * push_forward(base(n - 1), face)
    centre = [Fraction(1, 2)] * n
    sign = 1 if n % 2 == 0 else -1
    return reduce_degenerate(sign * cone(w, centre))


@lru_cache(maxsize=None)
def extended_model(n: int) -> FormalChain:
    if n <= MAX_BASE_DIM:
        return base_model(n)
    return coned_model(n, extended_model)


def extend_phi(n: int, z: FormalChain, base=None) -> FormalChain:
    """Chain map in degree ``n`` built by coning over cube centres.

    ``base`` optionally replaces the model maps of degree < n (as a callable
    ``k -> model chain``); by default the symmetrized maps are used up to
    degree 3 and coning above.
    """
    if z.dim != n:
        raise ValueError(f"expected an {n}-chain, got dimension {z.dim}")
    if n <= MAX_BASE_DIM and base is None:
        return phi(n, z)
    model = coned_model(n, base) if base is not None else extended_model(n)
    return _apply_natural(lambda k: model, z)


def collapse_weights(t):
    """Barycentric coordinates of the collapse [0,1]^n -> simplex."""
    out = []
    prod = 1
    for x in t:
        out.append(prod * (1 - x))
        prod = prod * x
    out.append(prod)
    return out


def simplex_to_cube(sigma: Simplex) -> FormalChain:
    """Composite of ``sigma`` with the standard collapse of the n-cube.

    The collapse is multilinear, so the composite is the affine cube whose
    vertex at ``b`` is ``p_k`` with ``k`` the number of leading ones of ``b``.
    """
    n = sigma.dim
    verts = []
    for b in bits(n):
        k = 0
        while k < n and b[k]:
            k += 1
        verts.append(sigma.vertices[k])
    return FormalChain.of(Cube(tuple(verts)))


def psi(z: FormalChain) -> FormalChain:
    """Linear extension of :func:`simplex_to_cube`."""
    terms = [(cube, c * a) for s, c in z.items() for cube, a in simplex_to_cube(s).items()]
    return FormalChain(terms, dim=z.dim)


def chain_map_defect(j: int, cube: Cube) -> FormalChain:
    """d phi_j(c) - phi_{j-1}(d c); zero exactly when compatibility holds."""
    z = FormalChain.of(cube)
    lhs = reduce_degenerate(boundary(extend_phi(j, z)))
    rhs = extend_phi(j - 1, boundary(z))
    return lhs - rhs


__all__ = [
    "FacePattern",
    "SignedCubeSymmetry",
    "base_model",
    "chain_map_defect",
    "cone",
    "cube_symmetries",
    "extend_phi",
    "phi",
    "psi",
    "simplex_to_cube",
    "symmetrize",
    "t_map",
]
