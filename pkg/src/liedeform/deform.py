"""Infinitesimal and miniversal deformations, solution branches and jumps.

The universal infinitesimal deformation is ``d1 = d + sum delta_i t_i`` over
a prebasis ``delta`` of ``H^2``.  The miniversal deformation adds
``sum gamma_j x_j`` with ``gamma`` the P-part of the splitting of ``L_2``
and solves for ``x`` so that ``[d_inf, d_inf]`` has no component along
``beta_j = D(gamma_j)``.  What is left along the ``H^3`` prebasis ``alpha``
are the relations on the base.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .classify3 import CanonicalClass, classify
from .coder import Codifferential, Coderivation, bracket
from .cohomology import coboundary, splitting, _require_certified
from .errors import (
    DenominatorVanishes,
    RelationViolated,
    SplitNotSpanning,
    TruncationTooSmall,
)
from .scalars import MultiPoly, ParamName, PolyRing, RatFun, param, t_params, to_ratfun


def _lift(c, ring):
    if isinstance(c, (MultiPoly, RatFun)):
        return c
    return ring.const(c)


def _is_zero(c):
    return not c


@dataclass(frozen=True)
class DeformedCodifferential:
    """``base + sum h_i t_i + sum p_j x_j``; ``x_j`` may be a parameter or a solved value."""

    base: Codifferential
    h_terms: tuple = ()
    p_terms: tuple = ()
    ring: PolyRing = field(default_factory=PolyRing)

    @property
    def params(self) -> tuple:
        return tuple(t for _, t in self.h_terms)

    @property
    def solved(self) -> bool:
        return not any(isinstance(v, ParamName) for _, v in self.p_terms)

    @property
    def rational(self) -> bool:
        return any(isinstance(v, RatFun) and not v.is_polynomial() for _, v in self.p_terms)

    def body(self) -> Coderivation:
        """Coefficients as MultiPolys, or RatFuns once some ``x_j`` is rational."""
        ring = self.ring
        if self.rational:
            lift = lambda c: to_ratfun(c, ring)  # noqa: E731
        else:
            lift = lambda c: _lift(c.as_poly() if isinstance(c, RatFun) else c, ring)  # noqa: E731
        base = self.base.body
        grid = [[lift(c) for c in row] for row in base.coeffs]
        terms = [(h, ring.gen(t)) for h, t in self.h_terms]
        for p, v in self.p_terms:
            terms.append((p, ring.gen(v) if isinstance(v, ParamName) else v))
        for cod, val in terms:
            val = lift(val)
            for i, row in enumerate(cod.coeffs):
                for j, c in enumerate(row):
                    if c:
                        grid[i][j] = grid[i][j] + val * c
        return Coderivation(base.dim, base.arity, tuple(tuple(r) for r in grid))

    def matrix(self) -> list:
        return [list(r) for r in self.body().coeffs]

    def at(self, point) -> Coderivation:
        """Evaluate at rational parameter values; unnamed parameters are 0."""
        point = {param(k): Fraction(v) for k, v in point.items()}
        full = {g: point.get(g, Fraction(0)) for g in self.ring.gens}
        return self.body().map(lambda c: c.evaluate(full) if hasattr(c, "evaluate") else Fraction(c))

    def render(self, pretty=False) -> list[list[str]]:
        def show(c):
            if hasattr(c, "pretty"):
                return c.pretty() if pretty else str(c)
            return str(c)

        return [[show(c) for c in row] for row in self.body().coeffs]


def infinitesimal(d, prebasis_H2=None) -> DeformedCodifferential:
    """``d1 = d + sum delta_i t_i`` with one fresh ``t_i`` per ``H^2`` representative."""
    body = _require_certified(d)
    base = d if isinstance(d, Codifferential) else Codifferential(body, True)
    H, _, _ = splitting(body, 2, prebasis_H2)
    ts = t_params(len(H))
    return DeformedCodifferential(base, tuple(zip(H, ts)), (), PolyRing(ts))


@dataclass(frozen=True)
class L3Split:
    """The basis ``alpha | beta | tau`` of ``L_3`` and its inverse."""

    alpha: tuple
    beta: tuple
    tau: tuple
    inverse: tuple

    @classmethod
    def build(cls, alpha, beta, tau) -> L3Split:
        cols = [c.vector() for c in (*alpha, *beta, *tau)]
        n = len(cols[0]) if cols else 0
        if len(cols) != n:
            raise SplitNotSpanning(f"{len(cols)} vectors cannot form a basis of a {n}-dimensional space")
        if not n:
            return cls(tuple(alpha), tuple(beta), tuple(tau), ())
        try:
            inv = linalg.inverse(linalg.transpose(cols))
        except Exception as exc:  # Singular
            raise SplitNotSpanning("alpha, beta, tau do not span L_3") from exc
        return cls(tuple(alpha), tuple(beta), tuple(tau), tuple(tuple(r) for r in inv))

    @classmethod
    def of(cls, d, prebasis_H3=None, gamma=None) -> L3Split:
        body = _require_certified(d)
        H3, _, P3 = splitting(body, 3, prebasis_H3)
        if gamma is None:
            gamma = splitting(body, 2)[2]
        beta = [coboundary(body, g) for g in gamma]
        return cls.build(H3, beta, P3)


def bracket_decompose(xi: Coderivation, split: L3Split):
    """Coordinates ``(r, s, y)`` of ``xi`` along ``alpha``, ``beta`` and ``tau``."""
    v = xi.vector()
    if len(v) != len(split.inverse):
        raise SplitNotSpanning("split does not live in the space of xi")
    coords = []
    for row in split.inverse:
        acc = Fraction(0)
        for a, c in zip(row, v):
            if a and c:
                acc = c * a + acc
        coords.append(acc)
    na, nb = len(split.alpha), len(split.beta)
    return coords[:na], coords[na : na + nb], coords[na + nb :]


@dataclass
class MiniversalResult:
    deformation: DeformedCodifferential
    relations: list
    exact: bool
    truncation_degree: int
    r: list = field(default_factory=list)
    s: list = field(default_factory=list)
    y: list = field(default_factory=list)
    split: L3Split | None = None
    y_in_ideal: bool | None = None

    @property
    def rigid(self) -> bool:
        return not self.deformation.h_terms

    def bracket(self) -> Coderivation:
        """``[d_inf, d_inf]`` rebuilt from its ``alpha``-coordinates."""
        total = None
        for a, c in zip(self.split.alpha, self.r):
            term = a.map(lambda q, c=c: c * q)
            total = term if total is None else total + term
        return total


def _numerator(c):
    if isinstance(c, RatFun):
        return c.num
    return c


def _relations(r):
    out = []
    for c in r:
        num = _numerator(c)
        if num:
            p = num.primitive()
            if p not in out:
                out.append(p)
    return out


def miniversal(
    d,
    truncation_degree: int = 4,
    prebases: dict | None = None,
    allow_truncated: bool = False,
) -> MiniversalResult:
    """Solve the miniversal deformation of ``d``.

    ``prebases`` may fix the representatives of ``H^2`` and ``H^3``
    (``{2: [...], 3: [...]}``).  The ``x_j`` are found order by order up to
    ``truncation_degree``; exactness is then checked by substitution and, if
    the quadratic part in ``x`` vanishes, by solving the now linear system
    ``s = 0`` over rational functions.  Without exact closure the result is
    only valid modulo ``m^(truncation_degree+1)`` and TruncationTooSmall is
    raised unless ``allow_truncated``.
    """
    if truncation_degree < 2:
        raise TruncationTooSmall("truncation degree must be at least 2")
    prebases = prebases or {}
    inf = infinitesimal(d, prebases.get(2))
    body = inf.base.body
    gamma = splitting(body, 2)[2]
    split = L3Split.of(body, prebases.get(3), gamma)
    ring = inf.ring
    d1 = inf.body()

    if not inf.h_terms:
        result = MiniversalResult(inf, [], True, truncation_degree, [], [], [], split, True)
        return result

    def decompose(cod):
        return bracket_decompose(bracket(cod, cod), split)

    if not gamma:
        r, s, y = decompose(d1)
        return _finish(inf, r, s, y, split, truncation_degree, True)

    cross = [bracket(d1, g) for g in gamma]
    x = [ring.zero() for _ in gamma]
    stable = True
    for n in range(2, truncation_degree + 1):
        cod = _with_x(d1, gamma, x)
        _, s, _ = decompose(cod)
        new = [(xi - si * Fraction(1, 2)).truncate(n) for xi, si in zip(x, s)]
        stable = new == x
        x = new
    deformed = DeformedCodifferential(inf.base, inf.h_terms, tuple(zip(gamma, x)), ring)
    r, s, y = decompose(deformed.body())
    if all(_is_zero(c) for c in s) and all(_is_zero(c) for c in y):
        return _finish(deformed, r, s, y, split, truncation_degree, True)

    closure = _rational_closure(inf, d1, gamma, cross, split)
    if closure is not None:
        deformed, (r, s, y) = closure
        if all(_is_zero(c) for c in s):
            return _finish(deformed, r, s, y, split, truncation_degree, True)

    if not allow_truncated:
        why = "did not stabilize" if not stable else "stabilized but does not close exactly"
        raise TruncationTooSmall(
            f"x {why} by degree {truncation_degree}; raise the truncation or allow truncated results"
        )
    r, s, y = decompose(deformed.body())
    r = [c.truncate(truncation_degree) for c in r]
    s = [c.truncate(truncation_degree) for c in s]
    y = [c.truncate(truncation_degree) for c in y]
    return _finish(deformed, r, s, y, split, truncation_degree, False)


def _with_x(d1, gamma, x):
    out = d1
    for g, xi in zip(gamma, x):
        out = out + g.map(lambda c, xi=xi: xi * c)
    return out


def _rational_closure(inf, d1, gamma, cross, split):
    """Solve ``s = 0`` exactly when ``s`` is affine in ``x``.

    Because every ``gamma`` has degree 1 the bracket is symmetric, so
    ``s(x) = s(d1) + 2 sum x_j s([d1, gamma_j]) + sum x_i x_j s([gamma_i, gamma_j])``.
    """
    for i, gi in enumerate(gamma):
        for gj in gamma[i:]:
            if any(bracket_decompose(bracket(gi, gj), split)[1]):
                return None
    ring = inf.ring
    _, s0, _ = bracket_decompose(bracket(d1, d1), split)
    cols = [bracket_decompose(c, split)[1] for c in cross]
    m = len(gamma)
    mat = [[_lift(cols[j][i], ring) * 2 for j in range(m)] for i in range(m)]
    rhs = [-_lift(c, ring) for c in s0]
    nums, den = linalg.solve_poly_system(mat, rhs)
    x = [RatFun(nm, den) for nm in nums]
    deformed = DeformedCodifferential(inf.base, inf.h_terms, tuple(zip(gamma, x)), ring)
    body = deformed.body()
    return deformed, bracket_decompose(bracket(body, body), split)


def _finish(deformed, r, s, y, split, T, exact):
    relations = _relations(r)
    ys = [_numerator(c) for c in y]
    if all(not c for c in ys):
        in_ideal = True
    else:
        in_ideal = all(not c or not c.reduce_by(relations) for c in ys)
    exact = exact and all(not c for c in ys)
    return MiniversalResult(deformed, relations, exact, T, list(r), list(s), list(y), split, in_ideal)


# -- branches and jumps -----------------------------------------------------


@dataclass(frozen=True)
class Branch:
    """Substitution ``t_i -> RatFun`` describing a solution curve of the relations."""

    name: str
    assignment: dict
    description: str = ""

    @classmethod
    def parse(cls, name, substitutions: dict, ring: PolyRing, description="") -> Branch:
        from .notation import parse_ratfun

        assignment = {param(k): parse_ratfun(v, ring) for k, v in substitutions.items()}
        return cls(name, assignment, description)

    def free(self, ring: PolyRing) -> tuple:
        return tuple(g for g in ring.gens if g not in self.assignment)

    def check(self, relations) -> None:
        from .scalars import poly_substitute

        for rel in relations:
            ring = rel.ring
            value = poly_substitute(rel, self.assignment, ring=ring, partial=True)
            if value:
                raise RelationViolated(f"branch {self.name!r} gives {rel} = {value}")

    def point(self, sample, ring: PolyRing) -> dict:
        sample = {param(k): Fraction(v) for k, v in sample.items()}
        free = self.free(ring)
        missing = [str(g) for g in free if g not in sample]
        if missing:
            from .errors import MissingAssignment

            raise MissingAssignment(f"sample leaves {', '.join(missing)} unassigned")
        out = {g: sample[g] for g in free}
        for g, v in self.assignment.items():
            value = to_ratfun(v, ring)
            try:
                out[g] = value.evaluate(sample)
            except DenominatorVanishes as exc:
                raise DenominatorVanishes(f"branch {self.name!r} is undefined at {_show(sample)}") from exc
        return out


def _show(sample):
    return ", ".join(f"{k}={v}" for k, v in sorted(sample.items(), key=lambda kv: param(kv[0]).sort_key))


def analyze_branch(mv: MiniversalResult, branch: Branch, samples) -> list[tuple[dict, CanonicalClass]]:
    """Classify the deformed algebra at rational samples along ``branch``."""
    branch.check(mv.relations)
    ring = mv.deformation.ring
    out = []
    for sample in samples:
        point = branch.point(sample, ring)
        cls, _ = classify(mv.deformation.at(point))
        out.append(({str(k): Fraction(v) for k, v in sample.items()}, cls))
    return out


# -- moduli graph -------------------------------------------------------------

STRATA = ("d1", "d2", "d3", "family")
MARKED_POINTS = ("(1:1)", "(1:0)", "(1:-1)")


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    kind: str = "jump"
    source_point: str | None = None
    target_point: str | None = None

    @property
    def key(self):
        return (self.source, self.source_point or "", self.target, self.target_point or "", self.kind)


@dataclass
class ModuliGraph:
    nodes: tuple
    edges: tuple
    marked_points: tuple = MARKED_POINTS

    def has_edge(self, source, target, target_point=None) -> bool:
        return any(
            e.kind == "jump" and e.source == source and e.target == target
            and (target_point is None or e.target_point == target_point)
            for e in self.edges
        )


def _stratum(cls: CanonicalClass) -> str:
    return cls.label


def _endpoint(name, point=None):
    """Graph node and marked point of a fixture algebra."""
    if name in ("d_1_1", "d_1_0", "d_1_m1", "d_lambda_mu"):
        return "family", {"d_1_1": "(1:1)", "d_1_0": "(1:0)", "d_1_m1": "(1:-1)"}.get(name, "*")
    return name, None


def moduli_graph(include_abelian: bool = False) -> ModuliGraph:
    """Strata and jump deformations, found by classifying samples on fixture branches.

    A branch whose samples stay in the source stratum is a motion along the
    family (a ``move`` self-loop); samples in another stratum give a jump
    edge, labelled with the marked point when every sample lands on the same
    one and ``*`` when the target point varies.
    """
    from .fixtures import branch_specs, catalog_entry, prebases

    sources = ("d1", "d2", "d3", "d_1_m1", "d_lambda_mu")
    edges = set()
    for name in sources:
        d = catalog_entry(name)
        mv = miniversal(d, prebases=prebases(name))
        src, src_pt = _endpoint(name)
        for spec in branch_specs(name):
            branch = Branch.parse(spec.name, spec.substitutions, mv.deformation.ring, spec.description)
            if spec.kind == "smooth":
                continue
            results = analyze_branch(mv, branch, spec.samples)
            by_target = {}
            for _, cls in results:
                by_target.setdefault(_stratum(cls), []).append(cls)
            if spec.kind == "move":
                if set(by_target) != {src}:
                    raise ArithmeticError(f"branch {spec.name!r} of {name} leaves its stratum")
                edges.add(Edge(src, src, "move"))
                continue
            if src in by_target:
                raise ArithmeticError(f"branch {spec.name!r} of {name} does not jump")
            for target, classes in by_target.items():
                if target == "family":
                    pts = {c.marked_point() for c in classes}
                    tp = pts.pop() if len(pts) == 1 and None not in pts else "*"
                else:
                    tp = None
                edges.add(Edge(src, target, "jump", src_pt, tp))
    nodes = STRATA + (("abelian",) if include_abelian else ())
    if include_abelian:
        for target in STRATA:
            edges.add(Edge("abelian", target, "jump", None, "*" if target == "family" else None))
    return ModuliGraph(nodes, tuple(sorted(edges, key=lambda e: e.key)))
