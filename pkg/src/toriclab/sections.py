"""Lattice points of scaled section polytopes and the graded section ring.

The degree-d monomial basis of the sections of the d-th power of the
line bundle is the set of lattice points of d * P.  The same data is
carried by a cone in Z^(n+1): the sign convention for that cone is not
forced by the defining formulas, so it is fixed operationally here by
requiring that the degree-d slice of the dual-cone semigroup coincide
with d * P intersect Z^n; that bijection is enforced as an executable
postcondition (ConventionMismatch on failure), never assumed.

Enumeration is bounding box + exact membership throughout: polytopes are
desk scale and exactness beats cleverness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import ceil, floor, gcd

from .divisors import is_very_ample, polytope
from .fans import is_complete
from .lattice import (
    IntMatrix,
    LatticeVector,
    kernel_vector,
    primitive_reduce,
    rational_rank,
    solve_integer,
    solve_rational,
)


class Unbounded(ValueError):
    """Raised when a recession direction makes enumeration meaningless."""


class ConventionMismatch(AssertionError):
    """Raised when the dual-cone slice disagrees with the polytope route.

    Signals a sign error in the lifted-cone orientation; never returned
    silently.
    """


class GenerationFailure(ValueError):
    """Raised when a vertex-chart set fails to generate the chart semigroup."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"dual basis vector {tuple(witness)} is not generated")


class NotStronglyConvex(ValueError):
    """Raised by the facet enumerator when the cone contains a line."""


@dataclass(frozen=True)
class GradedMonomial:
    """A degree together with an exponent in (degree * P) intersect Z^n."""

    degree: int
    exponent: tuple

    def pair(self):
        """The (exponent, degree) lattice point in Z^(n+1)."""
        return self.exponent + (self.degree,)


def _require_bounded(P):
    if not is_complete(P.fan):
        raise Unbounded(
            "the fan is not complete, so the section polyhedron may be unbounded"
        )


def _box_from_points(points):
    los = [min(p[k] for p in points) for k in range(len(points[0]))]
    his = [max(p[k] for p in points) for k in range(len(points[0]))]
    return los, his


def _basic_solutions(normals, offsets):
    """Feasible basic solutions of {<m, v> >= b} by n-subset enumeration.

    For a bounded nonempty polyhedron these are exactly the vertices;
    returns rational coordinate tuples.
    """
    n = len(normals[0])
    rows = [tuple(v) for v in normals]
    sols = []
    for subset in combinations(range(len(rows)), n):
        cols = list(zip(*(rows[i] for i in subset)))
        if rational_rank([rows[i] for i in subset]) != n:
            continue
        rhs = [offsets[i] for i in subset]
        x = solve_rational(cols, rhs)
        if x is None:
            continue
        if all(
            sum(Fraction(c) * xi for c, xi in zip(rows[i], x)) >= offsets[i]
            for i in range(len(rows))
        ):
            sols.append(tuple(x))
    return sols


def lattice_points(P, d):
    """All integer m with <m, v_i> >= -d * a_i, in lexicographic order.

    The scan box is the bounding box of d * vertices when the vertex list
    exists, and of the feasible basic solutions of the scaled system
    otherwise (the non-basepoint-free case).  Results are cached per
    degree on the polytope.
    """
    d = int(d)
    if d < 0:
        raise ValueError("degree must be nonnegative")
    if d in P._points:
        return P._points[d]
    _require_bounded(P)
    if P.has_vertices():
        corners = [tuple(d * c for c in v.coords) for v in P.vertex_set()]
    else:
        scaled = _basic_solutions(
            [v.coords for v in P.normals], [d * b for b in P.offsets]
        )
        corners = scaled
    if not corners:
        pts = ()
    else:
        los, his = _box_from_points(corners)
        ranges = [range(ceil(lo), floor(hi) + 1) for lo, hi in zip(los, his)]
        pts = tuple(
            LatticeVector(m) for m in product(*ranges) if P.contains(m, d)
        )
    P._points[d] = pts
    return pts


def section_count_table(P, d_max):
    """Counts of lattice_points(P, d) for d = 0 .. d_max."""
    return [(d, len(lattice_points(P, d))) for d in range(int(d_max) + 1)]


class LiftedCone:
    """The cone in Z^(n+1) attached to a support function.

    ``generators`` is the literal list (0,...,0,1) and (v_i, -a_i).
    ``oriented_generators`` flips the sign of the last coordinate of the
    ray lifts, giving (0,...,0,1) and (v_i, +a_i): this is the orientation
    under which the dual cone's degree-d slices are d * P intersect Z^n
    (the executable bijection that pins the convention), and it is the
    one all geometric queries use.  Generators expressible as nonnegative
    combinations of the others are flagged redundant but retained.
    """

    __slots__ = ("support", "generators", "oriented_generators", "_redundant")

    def __init__(self, support):
        n = support.fan.dim
        apex = (0,) * n + (1,)
        a = support.divisor.coefficients
        lifts = [tuple(v.coords) + (-a[i],) for i, v in enumerate(support.fan.rays)]
        oriented = [tuple(v.coords) + (a[i],) for i, v in enumerate(support.fan.rays)]
        object.__setattr__(self, "support", support)
        object.__setattr__(
            self, "generators", tuple(LatticeVector(g) for g in [apex] + lifts)
        )
        object.__setattr__(
            self,
            "oriented_generators",
            tuple(LatticeVector(g) for g in [apex] + oriented),
        )
        object.__setattr__(self, "_redundant", None)

    def __setattr__(self, name, value):
        raise AttributeError("LiftedCone is immutable")

    @property
    def ambient_dim(self):
        return self.support.fan.dim + 1

    def redundant_flags(self):
        """Per-generator flags: True where the oriented generator is a
        nonnegative combination of the other oriented generators."""
        if self._redundant is None:
            gens = [g.coords for g in self.oriented_generators]
            flags = tuple(
                _in_cone([h for j, h in enumerate(gens) if j != i], g)
                for i, g in enumerate(gens)
            )
            object.__setattr__(self, "_redundant", flags)
        return self._redundant

    def is_strongly_convex(self):
        return _lineality_circuit(
            [g.coords for g in self.oriented_generators]
        ) is None

    def __repr__(self):
        return f"LiftedCone({[g.coords for g in self.generators]})"


def lifted_cone(phi):
    """Assemble the lifted cone of a support function."""
    return LiftedCone(phi)


def _in_cone(generators, target):
    """Exact conic membership via Caratheodory subset enumeration.

    target lies in the cone iff it is a nonnegative combination of some
    linearly independent subset of generators.
    """
    target = tuple(Fraction(x) for x in target)
    if all(x == 0 for x in target):
        return True
    d = len(target)
    gens = [tuple(g) for g in generators]
    for size in range(1, d + 1):
        for subset in combinations(gens, size):
            if rational_rank(subset) != size:
                continue
            x = solve_rational(list(subset), target)
            if x is not None and all(c >= 0 for c in x):
                return True
    return False


def _lineality_circuit(generators):
    """A positive circuit (nonneg combo of generators summing to zero).

    Returns the participating generator subset, or None when the cone is
    pointed.  Minimal positive circuits have linearly independent proper
    subsets and a one-dimensional kernel with full support, so subset
    enumeration up to rank+1 is complete.
    """
    gens = [tuple(g) for g in generators]
    if not gens:
        return None
    r = rational_rank(gens)
    for size in range(2, r + 2):
        for subset in combinations(range(len(gens)), size):
            rows = [gens[i] for i in subset]
            if rational_rank(rows) != size - 1:
                continue
            w = kernel_vector(list(zip(*rows)))
            if w is None:
                continue
            if all(x > 0 for x in w) or all(x < 0 for x in w):
                return subset
    return None


def _cone_facets(generators):
    """Facets of a full-dimensional pointed cone in R^d.

    Searches (d-1)-subsets of the generators for supporting hyperplanes;
    each facet is reported once as (inward_normal, zero_set_indices).
    Raises NotStronglyConvex when the cone contains a line.
    """
    gens = [tuple(g) for g in generators]
    d = len(gens[0])
    if _lineality_circuit(gens) is not None:
        raise NotStronglyConvex("the cone contains a line")
    if rational_rank(gens) != d:
        raise ValueError("facet search requires a full-dimensional cone")
    facets = {}
    for subset in combinations(range(len(gens)), d - 1):
        rows = [gens[i] for i in subset]
        if rational_rank(rows) != d - 1:
            continue
        h = kernel_vector(rows)
        if h is None:
            continue
        signs = [sum(Fraction(x) * y for x, y in zip(h, g)) for g in gens]
        if all(s >= 0 for s in signs):
            pass
        elif all(s <= 0 for s in signs):
            h = [-x for x in h]
            signs = [-s for s in signs]
        else:
            continue
        denom = 1
        for x in h:
            f = Fraction(x)
            denom = denom * f.denominator // gcd(denom, f.denominator)
        normal = primitive_reduce(
            LatticeVector(int(Fraction(x) * denom) for x in h)
        )
        zero = tuple(i for i, s in enumerate(signs) if s == 0)
        facets[normal.coords] = zero
    return [(LatticeVector(h), zero) for h, zero in sorted(facets.items())]


def proper_faces_simplicial(C):
    """Whether every proper face of the lifted cone is simplicial, with
    the ray lifts as fundamental generators.

    Decided on the oriented cone.  A cone with a lineality space cannot
    satisfy the criterion, so False is returned directly in that case
    (this is what makes the answer agree with strict convexity on
    non-strict and non-convex divisors).  Otherwise every facet's zero
    set must be linearly independent and every ray lift extremal.  The
    suite cross-checks the result against is_strictly_convex.
    """
    gens = [g.coords for g in C.oriented_generators]
    try:
        facets = _cone_facets(gens)
    except NotStronglyConvex:
        return False
    for _, zero in facets:
        rows = [gens[i] for i in zero]
        if rational_rank(rows) != len(rows):
            return False
    # index 0 is the apex (0,...,0,1); it may be interior, the lifts not
    for i in range(1, len(gens)):
        if _in_cone([g for j, g in enumerate(gens) if j != i], gens[i]):
            return False
    return True


def _slice_points(C, d):
    """Degree-d lattice points of the dual of the oriented cone.

    Independent of the Cartier-data route: the box comes from the basic
    solutions of the slice inequalities read off the generator list.
    """
    n = C.ambient_dim - 1
    gens = [g.coords for g in C.oriented_generators]
    normals = []
    offsets = []
    for g in gens:
        head, tail = g[:n], g[n]
        if head == (0,) * n:
            # pairing with the apex reads d * tail >= 0
            if d * tail < 0:
                return ()
            continue
        normals.append(head)
        offsets.append(Fraction(-d * tail))
    sols = _basic_solutions(normals, offsets)
    if not sols:
        return ()
    los, his = _box_from_points(sols)
    ranges = [range(ceil(lo), floor(hi) + 1) for lo, hi in zip(los, his)]
    out = []
    for m in product(*ranges):
        if all(
            sum(x * y for x, y in zip(m, v)) >= b for v, b in zip(normals, offsets)
        ):
            out.append(m)
    return tuple(out)


def graded_slice(C, d):
    """The degree-d monomials of the dual-cone semigroup.

    The orientation is fixed so that the slice equals d * P intersect M;
    the bijection with lattice_points is verified on every call and a
    failure raises ConventionMismatch rather than returning bad data.
    """
    d = int(d)
    if d < 0:
        raise ValueError("degree must be nonnegative")
    slice_exps = _slice_points(C, d)
    P = polytope(C.support)
    expected = tuple(m.coords for m in lattice_points(P, d))
    if set(slice_exps) != set(expected):
        raise ConventionMismatch(
            f"degree-{d} slice {sorted(slice_exps)} does not match "
            f"{sorted(expected)}"
        )
    return [GradedMonomial(d, m) for m in sorted(slice_exps)]


def semigroup_generators_up_to(C, d_max):
    """Minimal graded monomials of degree <= d_max generating all
    monomials of degree <= d_max under exponent-pair addition.

    Brute-force sieve: a monomial is decomposable iff it splits as a sum
    of two lower-degree monomials of the semigroup.  Evidence is reported
    up to d_max only; no global generation claim is made.
    """
    d_max = int(d_max)
    P = polytope(C.support)
    by_degree = {d: graded_slice(C, d) for d in range(d_max + 1)}
    gens = []
    for d in range(1, d_max + 1):
        for mono in by_degree[d]:
            decomposable = False
            for d1 in range(1, d):
                d2 = d - d1
                for lower in by_degree[d1]:
                    rest = tuple(x - y for x, y in zip(mono.exponent, lower.exponent))
                    if P.contains(rest, d2):
                        decomposable = True
                        break
                if decomposable:
                    break
            if not decomposable:
                gens.append(mono)
    return gens


def vertex_chart_generators(P, sigma):
    """The chart exponents {m - m_sigma : m in P intersect M}.

    Verifies that the returned set generates the chart semigroup by
    checking that each dual-basis generator of the smooth cone sigma is
    a nonnegative integer combination of the set.  Pairing any such
    combination with the sum of sigma's generators shows it must consist
    of a single set element, so membership of the dual basis in the set
    is the whole check.
    """
    phi = P.support
    if not is_very_ample(phi):
        raise ValueError("vertex charts require a very ample divisor")
    if sigma.dim != P.ambient_dim:
        raise ValueError("sigma must be a maximal cone")
    m_sigma = phi.m_sigma(sigma)
    chart = tuple(
        sorted(((m - m_sigma) for m in lattice_points(P, 1)), key=lambda v: v.coords)
    )
    chart_set = set(chart)
    M = IntMatrix(g.coords for g in sigma.generators)
    n = P.ambient_dim
    for j in range(n):
        e_j = LatticeVector(1 if t == j else 0 for t in range(n))
        w_j = solve_integer(M, e_j)
        if w_j not in chart_set:
            raise GenerationFailure(w_j.coords)
    return chart
