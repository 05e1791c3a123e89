"""Adjoint cohomology of a codifferential and the splittings it induces.

``D_k : L_k -> L_{k+1}`` is ``phi -> [d, phi]`` for ``k >= 1``; on
``L_0 = V`` it is the adjoint action ``v -> (u -> d(u ^ v))``, so ``H^1``
counts outer derivations.  Coordinates on ``L_k`` follow
:meth:`Coderivation.vector`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .coder import Codifferential, Coderivation, basis_of, bracket, jacobi_residual
from .errors import BadPrebasis, NotCertified
from .exterior import binom


def _body(d) -> Coderivation:
    return d.body if isinstance(d, Codifferential) else d


def _require_certified(d):
    body = _body(d)
    if isinstance(d, Codifferential) and d.certified:
        return body
    res = jacobi_residual(body)
    if not res.is_zero():
        raise NotCertified(f"not a Lie bracket; Jacobi residual {res}", residual=res)
    return body


@dataclass(frozen=True)
class CoboundaryMatrix:
    degree: int
    matrix: tuple

    @property
    def shape(self):
        return (len(self.matrix), len(self.matrix[0]) if self.matrix else 0)


def _key(body: Coderivation):
    return (body.dim, tuple(tuple(Fraction(c) for c in row) for row in body.coeffs))


def coboundary_matrix(d, k: int) -> CoboundaryMatrix:
    body = _body(d)
    return CoboundaryMatrix(k, _coboundary_cached(_key(body), k))


@lru_cache(maxsize=256)
def _coboundary_cached(key, k):
    dim, grid = key
    body = Coderivation(dim, 2, grid)
    n_rows = dim * binom(dim, k + 1)
    n_cols = dim * binom(dim, k)
    cols = []
    if k == 0:
        for i in range(1, dim + 1):
            terms = {}
            for u in range(1, dim + 1):
                if u == i:
                    continue
                word = (u, i)
                for t in range(1, dim + 1):
                    c = _bracket_value(body, word, t)
                    if c:
                        terms[((u,), t)] = c
            cols.append(Coderivation.from_terms(dim, 1, terms).vector())
    else:
        for phi in basis_of(dim, k):
            cols.append(bracket(body, phi).vector())
    if not n_rows:
        return ()
    return tuple(tuple(cols[j][i] for j in range(n_cols)) for i in range(n_rows))


def _bracket_value(body, word, target):
    """Coefficient of f_target in d(f_a ^ f_b) for an arbitrary ordered pair."""
    a, b = word
    if a == b:
        return Fraction(0)
    from .exterior import word_index

    j = word_index(body.dim, 2)[(min(a, b), max(a, b))]
    c = body.coeffs[target - 1][j]
    return c if a < b else -c


def _as_rows(cm: CoboundaryMatrix, n_cols):
    return [list(r) for r in cm.matrix] if cm.matrix else []


@dataclass
class DegreeData:
    degree: int
    dim_L: int
    rank_D: int
    dim_ker: int
    dim_H: int
    prebasis_H: list = field(default_factory=list)
    basis_B: list = field(default_factory=list)
    prebasis_P: list = field(default_factory=list)


@dataclass
class CohomologyReport:
    dim: int
    degrees: dict

    def dims(self, ks=(1, 2, 3)) -> tuple:
        return tuple(self.degrees[k].dim_H for k in ks)

    def __getitem__(self, k) -> DegreeData:
        return self.degrees[k]


def _pivot_columns(rows):
    if not rows:
        return []
    return linalg._echelon(rows, reduced=False)[1]


def splitting(d, k: int, prebasis_H=None):
    """Return ``(prebasis_H, basis_B, prebasis_P)`` for ``L_k``.

    * ``basis_B``: images ``D(e)`` of the basis elements ``e`` of ``L_{k-1}``
      sitting at pivot columns of ``D_{k-1}``;
    * ``prebasis_P``: basis elements of ``L_k`` at pivot columns of ``D_k``;
    * ``prebasis_H``: cocycles independent modulo ``B``, chosen greedily
      from the nullspace basis, unless ``prebasis_H`` overrides them.
    """
    body = _require_certified(d)
    n = body.dim
    dim_L = n * binom(n, k)
    Dk = _as_rows(coboundary_matrix(body, k), dim_L)
    P_idx = _pivot_columns(Dk)
    basis_k = basis_of(n, k)
    P = [basis_k[j] for j in P_idx]

    B_vecs = []
    if k >= 1:
        Dprev = _as_rows(coboundary_matrix(body, k - 1), n * binom(n, k - 1))
        for j in _pivot_columns(Dprev):
            B_vecs.append([row[j] for row in Dprev])
    B = [Coderivation.from_vector(n, k, v) for v in B_vecs]

    kernel = linalg.nullspace(Dk, ncols=dim_L) if dim_L else []
    dim_H = len(kernel) - len(B_vecs)
    if prebasis_H is None:
        chosen = []
        span = list(B_vecs)
        r = linalg.rank(span) if span else 0
        for v in kernel:
            if len(chosen) == dim_H:
                break
            trial = span + [v]
            if linalg.rank(trial) > r:
                span, r = trial, r + 1
                chosen.append(v)
        H = [Coderivation.from_vector(n, k, v) for v in chosen]
    else:
        H = list(prebasis_H)
        _validate_prebasis(H, Dk, B_vecs, dim_H, k)
    return H, B, P


def _validate_prebasis(H, Dk, B_vecs, dim_H, k):
    if len(H) != dim_H:
        raise BadPrebasis(f"H^{k} has dimension {dim_H}, got {len(H)} representatives")
    vecs = [[Fraction(c) for c in h.vector()] for h in H]
    for h, v in zip(H, vecs):
        if h.arity != k:
            raise BadPrebasis(f"{h} is not in L_{k}")
        if Dk and any(linalg.matvec(Dk, v)):
            raise BadPrebasis(f"{h} is not a cocycle")
    span = B_vecs + vecs
    if span and linalg.rank(span) != len(span):
        raise BadPrebasis(f"representatives for H^{k} are dependent modulo coboundaries")


def cohomology_report(d, kmax: int | None = None, overrides: dict | None = None) -> CohomologyReport:
    body = _require_certified(d)
    n = body.dim
    kmax = n if kmax is None else kmax
    overrides = overrides or {}
    degrees = {}
    for k in range(0, kmax + 1):
        dim_L = n * binom(n, k)
        Dk = _as_rows(coboundary_matrix(body, k), dim_L)
        rk = linalg.rank(Dk) if Dk else 0
        H, B, P = splitting(body, k, overrides.get(k))
        degrees[k] = DegreeData(k, dim_L, rk, dim_L - rk, len(H), H, B, P)
    return CohomologyReport(n, degrees)


def coboundary(d, phi: Coderivation) -> Coderivation:
    """``D(phi)``; for arity 0 this is the adjoint action."""
    body = _body(d)
    if phi.arity == 0:
        cm = coboundary_matrix(body, 0)
        v = linalg.matvec([list(r) for r in cm.matrix], phi.vector())
        return Coderivation.from_vector(body.dim, 1, v)
    return bracket(body, phi)
