"""Torus-invariant divisors, support functions and the section polytope.

Convention warning.  Two opposite conventions coexist in this toolkit and
are never mixed implicitly:

* ``support_value`` evaluates the piecewise-linear support function of
  the divisor, which is the *min* of the linear functions given by the
  Cartier data.  "Convex" throughout this module means
  ``f(tu+(1-t)v) >= t f(u) + (1-t) f(v)`` (min-of-linear convention), the
  one under which convex == basepoint-free and strictly convex == ample.
* The growth majorant used by the numerical lab (``weights.psi_eval``)
  is the *sup* of ``<m, x>`` over the section polytope, the opposite
  convention.

All types are immutable after construction; queries are pure.
"""

from __future__ import annotations

from fractions import Fraction

from .lattice import (
    DimensionMismatch,
    IntMatrix,
    LatticeVector,
    rational_rank,
    solve_integer,
)


class OutsideSupport(ValueError):
    """Raised when a point lies in no cone of the fan (incomplete fans)."""


class NotBasepointFree(ValueError):
    """Raised when vertex data is requested for a non-convex divisor."""


class TorusDivisor:
    """An integer combination of the ray hypersurfaces of a fan."""

    __slots__ = ("fan", "coefficients")

    def __init__(self, fan, coefficients):
        coefficients = tuple(int(a) for a in coefficients)
        if len(coefficients) != fan.n_rays:
            raise DimensionMismatch(
                f"{len(coefficients)} coefficients for {fan.n_rays} rays"
            )
        object.__setattr__(self, "fan", fan)
        object.__setattr__(self, "coefficients", coefficients)

    def __setattr__(self, name, value):
        raise AttributeError("TorusDivisor is immutable")

    def __add__(self, other):
        if other.fan is not self.fan:
            raise ValueError("divisors live on different fans")
        return TorusDivisor(
            self.fan, (a + b for a, b in zip(self.coefficients, other.coefficients))
        )

    def __mul__(self, k):
        return TorusDivisor(self.fan, (int(k) * a for a in self.coefficients))

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, TorusDivisor)
            and other.fan is self.fan
            and other.coefficients == self.coefficients
        )

    def __hash__(self):
        return hash((id(self.fan), self.coefficients))

    def __repr__(self):
        return f"TorusDivisor{self.coefficients}"


class SupportFunction:
    """The divisor together with its Cartier data, one m_sigma per cone.

    The Cartier data satisfies <m_sigma, v_i> = -a_i exactly on every
    generator v_i of sigma; the function evaluates piecewise linearly.
    Build instances with :func:`cartier_data`.
    """

    __slots__ = ("divisor", "cartier", "_convex", "_strict", "_polytope")

    def __init__(self, divisor, cartier):
        object.__setattr__(self, "divisor", divisor)
        object.__setattr__(self, "cartier", dict(cartier))
        for cone in divisor.fan.max_cones:
            m = self.cartier[cone.ray_indices]
            for i, g in zip(cone.ray_indices, cone.generators):
                if m.dot(g) != -divisor.coefficients[i]:
                    raise ValueError(
                        f"Cartier data {m.coords} fails on ray {g.coords}"
                    )
        object.__setattr__(self, "_convex", None)
        object.__setattr__(self, "_strict", None)
        object.__setattr__(self, "_polytope", None)

    def __setattr__(self, name, value):
        raise AttributeError("SupportFunction is immutable")

    @property
    def fan(self):
        return self.divisor.fan

    def m_sigma(self, cone):
        idxs = cone.ray_indices if hasattr(cone, "ray_indices") else tuple(sorted(cone))
        return self.cartier[idxs]

    def cartier_items(self):
        """(cone, m_sigma) pairs in the fan's cone order."""
        return [(c, self.cartier[c.ray_indices]) for c in self.fan.max_cones]

    def __repr__(self):
        data = {tuple(k): v.coords for k, v in self.cartier.items()}
        return f"SupportFunction(a={self.divisor.coefficients}, m={data})"


def cartier_data(fan, divisor):
    """Solve for the Cartier data of a divisor on a smooth fan.

    For each maximal cone the generator matrix is unimodular, so the
    linear system <m, v_i> = -a_i has a unique integer solution; a
    NotUnimodular error propagates from a non-smooth cone.
    """
    if divisor.fan is not fan:
        raise ValueError("divisor does not live on this fan")
    cartier = {}
    for cone in fan.max_cones:
        M = IntMatrix(g.coords for g in cone.generators)
        rhs = LatticeVector(-divisor.coefficients[i] for i in cone.ray_indices)
        cartier[cone.ray_indices] = solve_integer(M, rhs)
    return SupportFunction(divisor, cartier)


def support_value(phi, u):
    """Evaluate the support function at a rational point.

    Returns <m_sigma, u> as an exact Fraction for any maximal cone sigma
    containing u; the value does not depend on the chosen cone.
    """
    uc = tuple(u.coords) if hasattr(u, "coords") else tuple(Fraction(x) for x in u)
    cone = phi.fan.containing_cone(uc)
    if cone is None:
        raise OutsideSupport(f"{uc} lies in no maximal cone")
    return Fraction(phi.m_sigma(cone).dot(uc))


def _outside_ray_checks(phi):
    """All (m_sigma paired against rays outside sigma) values + bounds."""
    fan = phi.fan
    a = phi.divisor.coefficients
    for cone in fan.max_cones:
        m = phi.m_sigma(cone)
        inside = set(cone.ray_indices)
        for i, v in enumerate(fan.rays):
            if i not in inside:
                yield m.dot(v), -a[i]


def is_convex(phi):
    """Convexity of the support function, decided by the local criterion.

    phi is convex iff <m_sigma, v_i> >= -a_i for every maximal cone sigma
    and every ray v_i outside sigma.  Equivalent to the min formula
    phi(u) = min over the polytope of <m, u> holding everywhere; the min
    formula is re-verified on random samples in the suite but the finite
    local check is the decision procedure.
    """
    if phi._convex is None:
        object.__setattr__(
            phi, "_convex", all(lhs >= rhs for lhs, rhs in _outside_ray_checks(phi))
        )
    return phi._convex


def is_strictly_convex(phi):
    """Strict convexity: every outside-ray inequality is strict.

    With strictness the linearity region of each m_sigma is exactly sigma,
    which is the ampleness criterion.
    """
    if phi._strict is None:
        object.__setattr__(
            phi, "_strict", all(lhs > rhs for lhs, rhs in _outside_ray_checks(phi))
        )
    return phi._strict


def is_basepoint_free(phi):
    """Basepoint-free == convex support function (smooth complete case)."""
    return is_convex(phi)


def is_ample(phi):
    """Ample == strictly convex support function (smooth complete case)."""
    return is_strictly_convex(phi)


def is_very_ample(phi):
    """On a smooth complete fan, very ample coincides with ample.

    The vertex-chart semigroup test in the sections module gives the
    independent cross-check exercised by the suite.
    """
    return is_ample(phi)


class SectionPolytope:
    """The polyhedron {m : <m, v_i> >= -a_i} attached to a divisor.

    The H-representation is always available.  The vertex list equals the
    set of distinct Cartier data exactly when the divisor is basepoint
    free; otherwise ``vertices`` is None and ``vertex_set()`` raises.
    Lattice point enumerations are cached per degree on the instance.
    """

    __slots__ = ("support", "normals", "offsets", "vertices", "dim", "_points")

    def __init__(self, support, vertices, dim):
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "normals", support.fan.rays)
        object.__setattr__(
            self, "offsets", tuple(-a for a in support.divisor.coefficients)
        )
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "_points", {})

    def __setattr__(self, name, value):
        raise AttributeError("SectionPolytope is immutable")

    @property
    def fan(self):
        return self.support.fan

    @property
    def ambient_dim(self):
        return self.fan.dim

    def vertex_set(self):
        if self.vertices is None:
            raise NotBasepointFree(
                "vertex list unavailable: the support function is not convex"
            )
        return self.vertices

    def has_vertices(self):
        return self.vertices is not None

    def contains(self, m, degree=1):
        """Exact membership of an integer point in degree * P."""
        mc = tuple(m.coords) if hasattr(m, "coords") else tuple(m)
        if len(mc) != self.ambient_dim:
            raise DimensionMismatch("point dimension differs from ambient")
        return all(
            sum(x * y for x, y in zip(mc, v.coords)) >= degree * b
            for v, b in zip(self.normals, self.offsets)
        )

    def __repr__(self):
        verts = (
            sorted(v.coords for v in self.vertices)
            if self.vertices is not None
            else "unavailable"
        )
        return f"SectionPolytope(dim={self.dim}, vertices={verts})"


def polytope(phi):
    """Assemble the section polytope of a support function.

    For a convex phi the vertices are the deduplicated Cartier data and
    the dimension is their affine rank.  For a non-convex phi the
    polytope is returned with the H-representation only and the vertex
    list flagged unavailable.  Cached on the support function so lattice
    point enumerations are shared.
    """
    if phi._polytope is not None:
        return phi._polytope
    if is_convex(phi):
        verts = tuple(
            sorted({m for _, m in phi.cartier_items()}, key=lambda m: m.coords)
        )
        if len(verts) == 1:
            dim = 0
        else:
            base = verts[0]
            dim = rational_rank([(v - base).coords for v in verts[1:]])
        P = SectionPolytope(phi, verts, dim)
    else:
        P = SectionPolytope(phi, None, None)
    object.__setattr__(phi, "_polytope", P)
    return P
