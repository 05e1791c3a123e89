"""Coderivations of the exterior coalgebra and their graded bracket.

An element of ``L_k = Hom(Lambda^k V, V)`` is stored as its coefficient grid
``a[i][j]``: the coefficient of ``f_{i+1}`` in the image of the ``j+1``-th
basis word of ``Lambda^k V``.  Coefficients may be Fractions, MultiPolys or
RatFuns; only ring operations and truthiness are used.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Mapping

from .errors import ArityMismatch, DimensionMismatch, OutOfRange
from .exterior import MAX_DIM, binom, sort_word, unshuffles, word_index, words


def _is_zero(c) -> bool:
    return not c


@dataclass(frozen=True)
class Coderivation:
    dim: int
    arity: int
    coeffs: tuple

    def __post_init__(self):
        if self.arity < 0:
            raise ArityMismatch("arity must be non-negative")
        if self.dim < 1 or self.dim > MAX_DIM:
            raise DimensionMismatch(f"dimension {self.dim} outside 1..{MAX_DIM}")
        ncols = binom(self.dim, self.arity)
        rows = tuple(tuple(r) for r in self.coeffs)
        if len(rows) != self.dim or any(len(r) != ncols for r in rows):
            raise DimensionMismatch(f"grid must be {self.dim} x {ncols}")
        object.__setattr__(self, "coeffs", rows)

    # -- construction ------------------------------------------------------
    @classmethod
    def zero(cls, dim, arity, zero=Fraction(0)):
        return cls(dim, arity, tuple((zero,) * binom(dim, arity) for _ in range(dim)))

    @classmethod
    def from_grid(cls, grid, arity=2):
        grid = [[c if not isinstance(c, int) else Fraction(c) for c in row] for row in grid]
        return cls(len(grid), arity, grid)

    @classmethod
    def basis(cls, dim, word, target, coeff=Fraction(1)):
        """The coderivation sending basis ``word`` to ``coeff * f_target``."""
        return cls.from_terms(dim, len(tuple(word)), {(tuple(word), target): coeff})

    @classmethod
    def from_terms(cls, dim, arity, terms: Mapping, zero=Fraction(0)):
        """Build from ``{(word, target): coeff}``; unsorted words pick up signs."""
        grid = [[zero] * binom(dim, arity) for _ in range(dim)]
        idx = word_index(dim, arity)
        for (word, target), c in terms.items():
            sign, w = sort_word(word)
            if not sign:
                continue
            if w not in idx or not 1 <= target <= dim:
                raise OutOfRange(f"term {word}->{target} out of range for N={dim}")
            j = idx[w]
            grid[target - 1][j] = grid[target - 1][j] + sign * c
        return cls(dim, arity, grid)

    @classmethod
    def from_vector(cls, dim, arity, vec):
        """Inverse of :meth:`vector`."""
        ncols = binom(dim, arity)
        if len(vec) != dim * ncols:
            raise DimensionMismatch("vector length does not match L_k")
        grid = [[vec[j * dim + i] for j in range(ncols)] for i in range(dim)]
        return cls(dim, arity, grid)

    # -- views -------------------------------------------------------------
    @property
    def degree(self):
        return self.arity - 1

    @property
    def ncols(self):
        return binom(self.dim, self.arity)

    def column(self, j):
        return [row[j] for row in self.coeffs]

    def vector(self) -> list:
        """Flattened coordinates; coordinate ``(j-1)*N + i`` is ``a^i_j``."""
        return [self.coeffs[i][j] for j in range(self.ncols) for i in range(self.dim)]

    def terms(self) -> Iterator[tuple[tuple[int, ...], int, object]]:
        for j, w in enumerate(words(self.dim, self.arity)):
            for i in range(self.dim):
                c = self.coeffs[i][j]
                if c:
                    yield w, i + 1, c

    def is_zero(self):
        return all(_is_zero(c) for row in self.coeffs for c in row)

    def __bool__(self):
        return not self.is_zero()

    def map(self, f: Callable) -> Coderivation:
        return Coderivation(self.dim, self.arity, tuple(tuple(f(c) for c in row) for row in self.coeffs))

    def evaluate(self, point) -> Coderivation:
        """Substitute rational values for all parameters."""
        return self.map(lambda c: c.evaluate(point) if hasattr(c, "evaluate") else Fraction(c))

    # -- linear structure ----------------------------------------------------
    def _check(self, other):
        if not isinstance(other, Coderivation):
            return NotImplemented
        if (self.dim, self.arity) != (other.dim, other.arity):
            raise DimensionMismatch(f"L_{self.arity}(N={self.dim}) vs L_{other.arity}(N={other.dim})")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Coderivation(
            self.dim,
            self.arity,
            tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.coeffs, other.coeffs)),
        )

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return self.map(lambda c: -c)

    def __mul__(self, scalar):
        if isinstance(scalar, Coderivation):
            return NotImplemented
        return self.map(lambda c: c * scalar)

    def __rmul__(self, scalar):
        return self.map(lambda c: scalar * c)

    def __eq__(self, other):
        if not isinstance(other, Coderivation):
            return NotImplemented
        if (self.dim, self.arity) != (other.dim, other.arity):
            return False
        return (self - other).is_zero()

    __hash__ = None

    # -- rendering -------------------------------------------------------------
    def render(self, pretty=False) -> str:
        sym = "psi" if self.arity % 2 == 0 else "phi"
        sep = "," if self.dim >= 10 else ""
        out = []
        for w, i, c in self.terms():
            name = f"{sym}^{{{sep.join(map(str, w))}}}_{i}"
            out.append((name, c))
        if not out:
            return "0"
        pieces = []
        for k, (name, c) in enumerate(out):
            pieces.append(_scaled(name, c, pretty, first=(k == 0)))
        return "".join(pieces)

    def __str__(self):
        return self.render()


def _scaled(name, c, pretty, first):
    text = c.pretty() if pretty and hasattr(c, "pretty") else str(c)
    if text == "1":
        body, neg = name, False
    elif text == "-1":
        body, neg = name, True
    elif isinstance(c, Fraction) or (hasattr(c, "terms") and len(c.terms) == 1):
        neg = text.startswith("-")
        body = f"{text.lstrip('-')}*{name}" if not pretty else f"{name}{text.lstrip('-')}"
    else:
        neg = False
        body = f"({text})*{name}" if not pretty else f"{name}({text})"
    if first:
        return ("-" if neg else "") + body
    return (" - " if neg else " + ") + body


def basis_element(dim, word, target):
    return Coderivation.basis(dim, word, target)


def basis_of(dim, arity) -> list[Coderivation]:
    """Basis of L_k ordered by flattened coordinate (word slow, target fast)."""
    return [Coderivation.basis(dim, w, i) for w in words(dim, arity) for i in range(1, dim + 1)]


def _extend_sparse(phi: Coderivation, word: tuple) -> dict:
    k, m = phi.arity, len(word)
    out: dict = {}
    idx = word_index(phi.dim, k)
    for sh in unshuffles(k, m - k):
        first = tuple(word[p - 1] for p in sh.first)
        rest = tuple(word[p - 1] for p in sh.rest)
        j = idx[first]
        for i in range(phi.dim):
            c = phi.coeffs[i][j]
            if not c:
                continue
            sign, w = sort_word((i + 1,) + rest)
            if not sign:
                continue
            s = sign * sh.sign
            prev = out.get(w)
            term = c if s == 1 else -c
            out[w] = term if prev is None else prev + term
    return {w: c for w, c in out.items() if c}


def extend_apply(phi: Coderivation, word) -> dict:
    """Apply the coderivation extension of ``phi`` to a basis word.

    Returns ``{word of length m-k+1: coefficient}`` with zero terms dropped.
    """
    word = tuple(word)
    if len(word) < phi.arity:
        raise ArityMismatch(f"word of length {len(word)} is shorter than arity {phi.arity}")
    if any(not 1 <= a <= phi.dim for a in word) or list(word) != sorted(set(word)):
        raise OutOfRange(f"{word} is not a basis word for N={phi.dim}")
    return _extend_sparse(phi, word)


def rep_matrix(phi: Coderivation, m: int, zero=Fraction(0)) -> list[list]:
    """Matrix of the extension ``Lambda^m V -> Lambda^{m-k+1} V``."""
    k = phi.arity
    if m < k or m > phi.dim:
        raise ArityMismatch(f"need arity {k} <= m <= {phi.dim}, got m={m}")
    target = word_index(phi.dim, m - k + 1)
    mat = [[zero] * binom(phi.dim, m) for _ in range(len(target))]
    for j, w in enumerate(words(phi.dim, m)):
        for u, c in _extend_sparse(phi, w).items():
            mat[target[u]][j] = c
    return mat


def compose(phi: Coderivation, psi: Coderivation) -> Coderivation:
    """The corestriction of ``phi o psi``, an element of ``L_{k+l-1}``."""
    if phi.dim != psi.dim:
        raise DimensionMismatch("coderivations on different spaces")
    n, k, l = phi.dim, phi.arity, psi.arity
    arity = k + l - 1
    zero = _zero_like(phi, psi)
    if arity < 0:
        raise ArityMismatch("composition of two arity-0 coderivations is undefined")
    grid = [[zero] * binom(n, arity) for _ in range(n)]
    if arity > n or arity < l:
        return Coderivation(n, arity, grid)
    idx = word_index(n, k)
    for j, w in enumerate(words(n, arity)):
        for u, c in _extend_sparse(psi, w).items():
            col = idx[u]
            for i in range(n):
                a = phi.coeffs[i][col]
                if a:
                    grid[i][j] = grid[i][j] + a * c
    return Coderivation(n, arity, grid)


def _zero_like(*cods):
    for cod in cods:
        for row in cod.coeffs:
            for c in row:
                if hasattr(c, "ring"):
                    return c * 0
    return Fraction(0)


def bracket(phi: Coderivation, psi: Coderivation) -> Coderivation:
    """Graded commutator ``phi psi - (-1)^(deg phi * deg psi) psi phi``."""
    if phi.dim != psi.dim:
        raise DimensionMismatch("coderivations on different spaces")
    a = compose(phi, psi)
    b = compose(psi, phi)
    if (phi.degree * psi.degree) % 2:
        return a + b
    return a - b


def jacobi_residual(d: Coderivation) -> Coderivation:
    """``d o d`` in L_3, i.e. half of ``[d, d]``; zero iff d is a Lie bracket."""
    if d.arity != 2:
        raise ArityMismatch("the Jacobi residual is defined for arity 2")
    return compose(d, d)


def b_vector3(a) -> list:
    """Closed-form image of f1^f2^f3 under a 3-dimensional bracket matrix."""
    if len(a) != 3 or any(len(r) != 3 for r in a):
        raise DimensionMismatch("b_vector3 needs a 3x3 grid")
    return [-a[0][1] - a[1][2], a[0][0] - a[2][2], a[1][0] + a[2][1]]


@dataclass(frozen=True)
class Codifferential:
    body: Coderivation
    certified: bool = False

    @classmethod
    def certify(cls, body: Coderivation) -> Codifferential:
        from .errors import NotCertified

        if body.arity != 2:
            raise ArityMismatch("a codifferential has arity 2")
        res = jacobi_residual(body)
        if not res.is_zero():
            raise NotCertified(f"Jacobi residual is nonzero: {res}", residual=res)
        return cls(body, True)

    @property
    def dim(self):
        return self.body.dim

    @property
    def matrix(self):
        return self.body.coeffs

