"""Cones and fans: construction, membership, smoothness, completeness.

Only simplicial cones are supported; a fan made of simplicial cones with
linearly independent primitive generators is automatically strongly
convex cone by cone.  Fans are validated at construction and immutable
afterwards, so all queries are pure and safe under concurrent reads.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from itertools import combinations

from .lattice import (
    DimensionMismatch,
    IntMatrix,
    LatticeVector,
    det,
    primitive_reduce,
    rational_rank,
    solve_rational,
)


class InvalidFan(ValueError):
    """Raised when the input cones do not form a valid simplicial fan."""


class Cone:
    """A simplicial rational cone spanned by primitive generators.

    ``ray_indices`` records the positions of the generators in the owning
    fan's ray list when the cone belongs to a fan.
    """

    __slots__ = ("generators", "ray_indices", "dim")

    def __init__(self, generators, ray_indices=None):
        gens = tuple(
            g if isinstance(g, LatticeVector) else LatticeVector(g)
            for g in generators
        )
        if not gens:
            raise ValueError("a cone needs at least one generator")
        ambient = gens[0].dim
        if any(g.dim != ambient for g in gens):
            raise DimensionMismatch("generators of mixed dimension")
        for g in gens:
            if g.is_zero() or primitive_reduce(g) != g:
                raise ValueError(f"generator {g} is not primitive")
        if rational_rank([g.coords for g in gens]) != len(gens):
            raise InvalidFan(
                f"generators {[g.coords for g in gens]} are linearly dependent "
                "(only simplicial cones are supported)"
            )
        if ray_indices is not None:
            # keep generators aligned with the sorted index list
            idxs = tuple(int(i) for i in ray_indices)
            if len(idxs) != len(gens):
                raise DimensionMismatch("one ray index per generator required")
            order = sorted(range(len(idxs)), key=lambda t: idxs[t])
            gens = tuple(gens[t] for t in order)
            idxs = tuple(idxs[t] for t in order)
        else:
            idxs = None
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "ray_indices", idxs)
        object.__setattr__(self, "dim", len(gens))

    def __setattr__(self, name, value):
        raise AttributeError("Cone is immutable")

    @property
    def ambient_dim(self):
        return self.generators[0].dim

    def __eq__(self, other):
        return isinstance(other, Cone) and frozenset(self.generators) == frozenset(
            other.generators
        )

    def __hash__(self):
        return hash(frozenset(self.generators))

    def __repr__(self):
        return f"Cone({', '.join(str(g.coords) for g in self.generators)})"


def cone_contains(c, u):
    """Exact membership of a rational point in a simplicial cone.

    Solves u = sum x_j g_j over Q; the point lies in the cone iff the
    system is consistent with all coefficients nonnegative.
    """
    uc = tuple(u.coords) if hasattr(u, "coords") else tuple(Fraction(x) for x in u)
    if len(uc) != c.ambient_dim:
        raise DimensionMismatch(f"point dim {len(uc)} vs ambient {c.ambient_dim}")
    sol = solve_rational([g.coords for g in c.generators], uc)
    if sol is None:
        return False
    return all(x >= 0 for x in sol)


class Fan:
    """A pure simplicial fan given by primitive rays and maximal cones.

    Construction validates: rays primitive and distinct, every ray used,
    all maximal cones full-dimensional and simplicial, and pairwise
    intersections being common faces.  The last point is certified by
    exact membership tests of each cone's generators against every other
    cone: a generator lying inside another cone without being a shared
    ray witnesses an overlap.
    """

    __slots__ = ("rays", "max_cones", "dim", "_complete")

    def __init__(self, rays, max_cones):
        rays = tuple(
            r if isinstance(r, LatticeVector) else LatticeVector(r) for r in rays
        )
        if not rays:
            raise InvalidFan("a fan needs at least one ray")
        n = rays[0].dim
        if any(r.dim != n for r in rays):
            raise DimensionMismatch("rays of mixed dimension")
        for i, r in enumerate(rays):
            if r.is_zero():
                raise InvalidFan(f"ray {i} is zero")
            if primitive_reduce(r) != r:
                raise InvalidFan(
                    f"ray {i} = {r.coords} is not primitive; reduce it first"
                )
        if len(set(rays)) != len(rays):
            raise InvalidFan("duplicate rays")

        cones = []
        seen = set()
        for idxs in max_cones:
            idxs = tuple(int(i) for i in idxs)
            if len(set(idxs)) != len(idxs):
                raise InvalidFan(f"repeated ray index in cone {idxs}")
            if any(i < 0 or i >= len(rays) for i in idxs):
                raise InvalidFan(f"ray index out of range in cone {idxs}")
            if len(idxs) != n:
                raise InvalidFan(
                    f"cone {idxs} has dimension {len(idxs)}, fan must be pure "
                    f"of dimension {n}"
                )
            key = frozenset(idxs)
            if key in seen:
                raise InvalidFan(f"duplicate maximal cone {sorted(idxs)}")
            seen.add(key)
            cones.append(Cone((rays[i] for i in idxs), ray_indices=idxs))
        if not cones:
            raise InvalidFan("a fan needs at least one maximal cone")

        used = set()
        for c in cones:
            used.update(c.ray_indices)
        missing = sorted(set(range(len(rays))) - used)
        if missing:
            raise InvalidFan(f"rays {missing} appear in no maximal cone")

        for ca, cb in combinations(cones, 2):
            common = set(ca.ray_indices) & set(cb.ray_indices)
            for src, dst in ((ca, cb), (cb, ca)):
                for i, g in zip(src.ray_indices, src.generators):
                    if i not in common and cone_contains(dst, g):
                        raise InvalidFan(
                            f"cones {sorted(src.ray_indices)} and "
                            f"{sorted(dst.ray_indices)} overlap: ray {g.coords} "
                            "lies in both but is not a shared ray"
                        )

        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", tuple(cones))
        object.__setattr__(self, "dim", n)
        object.__setattr__(self, "_complete", None)

    def __setattr__(self, name, value):
        raise AttributeError("Fan is immutable")

    @property
    def n_rays(self):
        return len(self.rays)

    def cone_by_rays(self, idxs):
        key = frozenset(idxs)
        for c in self.max_cones:
            if frozenset(c.ray_indices) == key:
                return c
        raise KeyError(f"no maximal cone with rays {sorted(idxs)}")

    def containing_cone(self, u):
        """First maximal cone containing the rational point u, or None."""
        for c in self.max_cones:
            if cone_contains(c, u):
                return c
        return None

    def __repr__(self):
        return (
            f"Fan(dim={self.dim}, rays={[r.coords for r in self.rays]}, "
            f"max_cones={[list(c.ray_indices) for c in self.max_cones]})"
        )


def is_smooth(fan):
    """True iff every maximal cone's generator matrix has det +-1."""
    return all(
        det(IntMatrix(g.coords for g in c.generators)) in (1, -1)
        for c in fan.max_cones
    )


def _facet_table(fan):
    """Map facet (as a frozenset of ray indices) -> cones containing it.

    Facets of a simplicial n-cone are the (n-1)-subsets of its generators,
    and in a validated fan a shared (n-1)-dimensional intersection is
    spanned by shared rays, so keying by index subsets is exact.
    """
    table = defaultdict(list)
    for c in fan.max_cones:
        for drop in c.ray_indices:
            facet = frozenset(i for i in c.ray_indices if i != drop)
            table[facet].append(c)
    return table


def is_complete(fan):
    """Completeness via facet pairing.

    For a pure, strongly convex simplicial fan, the support is all of R^n
    iff every facet of every maximal cone is shared by exactly two
    maximal cones.  Cached on the fan.
    """
    if fan._complete is None:
        result = all(len(cs) == 2 for cs in _facet_table(fan).values())
        object.__setattr__(fan, "_complete", result)
    return fan._complete


def facet_pairs(fan):
    """All (n-1)-dimensional walls, each listed once.

    Returns triples (cone_a, cone_b, facet_ray_indices); cone_b is None
    for an unmatched boundary facet.
    """
    out = []
    for facet, cs in sorted(
        _facet_table(fan).items(), key=lambda kv: sorted(kv[0])
    ):
        a = cs[0]
        b = cs[1] if len(cs) > 1 else None
        out.append((a, b, tuple(sorted(facet))))
    return out
