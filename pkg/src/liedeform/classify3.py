"""Equivalence of codifferentials and the classification of 3-dimensional Lie algebras.

A basis change ``g`` (matrix ``G``, columns are the images of the old basis
vectors) acts by ``g*(d) = g^-1 o d o g``, which on bracket matrices reads
``A' = G^-1 A Q`` with ``Q`` the induced action on ``Lambda^2 V``.

Classification works over Q.  The family ``d(lambda:mu)`` is identified by
the invariant ``kappa = (lambda+mu)^2 / (lambda*mu)`` computed from trace and
determinant, so irrational eigenvalues never need to be adjoined.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from . import linalg
from .coder import Codifferential, Coderivation, jacobi_residual
from .errors import BadLabel, BothZero, DimensionMismatch, NotCertified, Singular, UnsupportedDim
from .exterior import words

ZERO_PRODUCT = "zero-product"


def induced_q(G) -> list[list[Fraction]]:
    """Matrix of ``g`` on Lambda^2 V from the 2x2 minors of G."""
    n = len(G)
    G = [[Fraction(c) for c in row] for row in G]
    if not linalg.det(G):
        raise Singular("basis change matrix is singular")
    ws = words(n, 2)
    return [
        [G[k - 1][u - 1] * G[l - 1][v - 1] - G[l - 1][u - 1] * G[k - 1][v - 1] for (u, v) in ws]
        for (k, l) in ws
    ]


def _grid(d):
    if isinstance(d, Codifferential):
        d = d.body
    if isinstance(d, Coderivation):
        return [list(r) for r in d.coeffs]
    return [list(r) for r in d]


def transport(d, G) -> Codifferential:
    """``g*(d)`` as a certified codifferential."""
    A = [[Fraction(c) for c in row] for row in _grid(d)]
    Q = induced_q(G)
    Ginv = linalg.inverse([[Fraction(c) for c in row] for row in G])
    A2 = linalg.matmul(linalg.matmul(Ginv, A), Q)
    return Codifferential.certify(Coderivation(len(A2), 2, A2))


def verify_equiv(d, d2, G, diagnostics: list | None = None) -> bool:
    """True iff ``G A' = A Q`` exactly with ``det G != 0``, i.e. ``g*(d) = d2``."""
    A = _grid(d)
    A2 = _grid(d2)
    if len(A) != len(A2) or len(G) != len(A):
        raise DimensionMismatch("shapes of d, d' and G disagree")
    G = [[Fraction(c) for c in row] for row in G]
    if not linalg.det(G):
        if diagnostics is not None:
            diagnostics.append("G is singular")
        return False
    Q = induced_q(G)
    lhs = linalg.matmul(G, A2)
    rhs = linalg.matmul(A, Q)
    ok = lhs == rhs
    if not ok and diagnostics is not None:
        diagnostics.append("G A' != A Q")
    return ok


def family_invariant(lam, mu):
    """``kappa = (lam+mu)^2/(lam*mu)``, or ``ZERO_PRODUCT`` when ``lam*mu = 0``."""
    lam, mu = Fraction(lam), Fraction(mu)
    if not lam and not mu:
        raise BothZero("(0:0) is not a point of P^1")
    if not lam * mu:
        return ZERO_PRODUCT
    return (lam + mu) ** 2 / (lam * mu)


def _invariant_from_trace_det(tr, dt):
    if not dt:
        return ZERO_PRODUCT
    return Fraction(tr) ** 2 / dt


@dataclass(frozen=True)
class CanonicalClass:
    label: str
    kappa: object = None
    point: tuple | None = field(default=None, compare=False)

    @property
    def name(self):
        if self.label != "family":
            return self.label
        if self.point is not None:
            lam, mu = self.point
            return f"d({_fmt(lam)}:{_fmt(mu)})"
        return f"family[kappa={_fmt(self.kappa)}]"

    def marked_point(self):
        """Label of the special family point this class sits on, if any."""
        if self.label != "family":
            return None
        if self.kappa == ZERO_PRODUCT:
            return "(1:0)"
        if self.kappa == 4:
            return "(1:1)"
        if self.kappa == 0:
            return "(1:-1)"
        return None

    def __str__(self):
        if self.label == "family" and self.point is not None:
            k = self.kappa if self.kappa == ZERO_PRODUCT else f"kappa={_fmt(self.kappa)}"
            return f"{self.name} [{k}]"
        if self.label == "family":
            return self.name
        return self.label


def _fmt(q):
    if isinstance(q, str):
        return q
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def family_class(lam, mu) -> CanonicalClass:
    return CanonicalClass("family", family_invariant(lam, mu), (Fraction(lam), Fraction(mu)))


@dataclass
class Witness:
    G: list
    Q: list
    representative: Codifferential
    canonical: bool

    def verify(self, d) -> bool:
        return verify_equiv(self.representative, d, self.G)


LABELS = ("abelian", "d1", "d2", "d3", "family")


def canonical(label, point=None) -> Codifferential:
    """Catalog codifferentials for N = 3.

    ``d1 = psi^{23}_1``, ``d2 = psi^{13}_1 + psi^{23}_2``,
    ``d3 = psi^{12}_3 + psi^{13}_2 + psi^{23}_1`` and
    ``d(lam:mu) = lam psi^{13}_1 + psi^{23}_1 + mu psi^{23}_2``.
    """
    if isinstance(label, CanonicalClass):
        label, point = label.label, label.point
    z = Fraction(0)
    if label == "abelian":
        A = [[z] * 3 for _ in range(3)]
    elif label == "d1":
        A = [[0, 0, 1], [0, 0, 0], [0, 0, 0]]
    elif label == "d2":
        A = [[0, 1, 0], [0, 0, 1], [0, 0, 0]]
    elif label == "d3":
        A = [[0, 0, 1], [0, 1, 0], [1, 0, 0]]
    elif label == "family":
        if point is None:
            raise BadLabel("the family needs a point (lambda, mu)")
        lam, mu = map(Fraction, point)
        if not lam and not mu:
            raise BothZero("(0:0) is not a point of P^1")
        A = [[0, lam, 1], [0, 0, mu], [0, 0, 0]]
    else:
        raise BadLabel(f"unknown label {label!r}")
    return Codifferential(Coderivation.from_grid(A), True)


def _col(M, j):
    return [row[j] for row in M]


def _from_columns(cols):
    return [[cols[j][i] for j in range(len(cols))] for i in range(len(cols[0]))]


def _bracket_vec(A, u, v):
    """d(u, v) for coordinate vectors u, v (N = 3)."""
    out = [Fraction(0)] * 3
    for j, (a, b) in enumerate(words(3, 2)):
        c = u[a - 1] * v[b - 1] - u[b - 1] * v[a - 1]
        if c:
            for i in range(3):
                out[i] += A[i][j] * c
    return out


def _rational_sqrt(q: Fraction):
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def _unit_vectors():
    return [[Fraction(int(i == j)) for i in range(3)] for j in range(3)]


def _small_vectors():
    base = _unit_vectors()
    yield from base
    for a in (1, -1, 2, -2, 3):
        for i in range(3):
            for j in range(i + 1, 3):
                yield [base[i][k] + a * base[j][k] for k in range(3)]
    for a in (1, 2, -1):
        for b in (1, 2, -1, 3):
            yield [Fraction(1), Fraction(a), Fraction(b)]


def _ad(A, x):
    return _from_columns([_bracket_vec(A, x, e) for e in _unit_vectors()])


def _isotropic_vectors(K, height):
    """Rational vectors with K(v, v) = 0, found by fixing two coordinates."""
    rng = range(-height, height + 1)
    pairs = sorted(((a, b) for a in rng for b in rng), key=lambda ab: (max(map(abs, ab)), ab))
    for solve in (2, 1, 0):
        i, j = [x for x in range(3) if x != solve]
        for a, b in pairs:
            v = [Fraction(0)] * 3
            v[i], v[j] = Fraction(a), Fraction(b)
            # K(v + z e_solve) = qa z^2 + qb z + qc
            qa = K[solve][solve]
            qb = 2 * sum(K[solve][m] * v[m] for m in range(3))
            qc = sum(K[m][n] * v[m] * v[n] for m in range(3) for n in range(3))
            roots = []
            if qa:
                r = _rational_sqrt(qb * qb - 4 * qa * qc)
                if r is not None:
                    roots = [(-qb + r) / (2 * qa), (-qb - r) / (2 * qa)]
            elif qb:
                roots = [-qc / qb]
            elif not qc:
                roots = [Fraction(0)]
            for z in roots:
                w = list(v)
                w[solve] = z
                if any(w):
                    yield w


def _sl2_triple_basis(A, height=6):
    """Columns (e, f, h) with [e,f]=h, [h,e]=2e, [h,f]=-2f, or None.

    A nonzero nilpotent ``e`` exists over Q exactly when the Killing form is
    isotropic; it is searched for on a bounded grid.
    """
    ads = [_ad(A, e) for e in _unit_vectors()]
    K = [[sum(linalg.matmul(ads[i], ads[j])[r][r] for r in range(3)) for j in range(3)] for i in range(3)]
    for e in _isotropic_vectors(K, height):
        ade = _ad(A, e)
        ade2 = linalg.matmul(ade, ade)
        y = next((u for u in _unit_vectors() if any(linalg.matvec(ade2, u))), None)
        if y is None:
            continue
        w = linalg.matvec(ade2, y)
        c = next(w[i] / e[i] for i in range(3) if e[i])
        h = [x * (-2 / c) for x in _bracket_vec(A, e, y)]
        adh = _ad(A, h)
        fs = linalg.nullspace([[adh[i][j] + 2 * (i == j) for j in range(3)] for i in range(3)], ncols=3)
        if len(fs) != 1:
            continue
        f = fs[0]
        ef = _bracket_vec(A, e, f)
        k = next(ef[i] / h[i] for i in range(3) if h[i])
        return _from_columns([e, [x / k for x in f], h])
    return None


def _perfect_case(A):
    """Rank-3 algebra: a basis change onto d3, else onto [[0,0,mu],[0,lam,0],[1,0,0]]."""
    triple = _sl2_triple_basis(A)
    if triple is not None:
        d3 = [[Fraction(c) for c in row] for row in canonical("d3").body.coeffs]
        std = _sl2_triple_basis(d3)
        return linalg.matmul(triple, linalg.inverse(std)), True
    pair = None
    for u in _small_vectors():
        for v in _small_vectors():
            w = _bracket_vec(A, u, v)
            if linalg.rank([u, v, w]) == 3:
                pair = (u, v, w)
                break
        if pair:
            break
    if pair is None:
        raise ArithmeticError("no pair with bracket outside its span was found")
    M1 = _from_columns(list(pair))
    A1 = [list(r) for r in transport(A, M1).body.coeffs]
    # now d(f1,f2) = f3; N = ad(f3) restricted to span(f1, f2), traceless
    N = [[A1[0][1], A1[0][2]], [A1[1][1], A1[1][2]]]
    c = N[0][0] ** 2 + N[0][1] * N[1][0]
    best = None
    for v in ([1, 0], [0, 1], [1, 1], [1, -1], [1, 2], [2, 1], [1, 3], [3, 1], [1, -2], [2, -1]):
        v = [Fraction(x) for x in v]
        Nv = [N[0][0] * v[0] + N[0][1] * v[1], N[1][0] * v[0] + N[1][1] * v[1]]
        delta = v[0] * Nv[1] - v[1] * Nv[0]
        if not delta:
            continue
        M2 = _from_columns([[v[0], v[1], 0], [Nv[0], Nv[1], 0], [0, 0, delta]])
        lam, mu = delta, delta * c
        cand = (M2, lam, mu)
        if best is None:
            best = cand
        if _to_d3(lam, mu) is not None:
            best = cand
            break
    M2, lam, mu = best
    M = linalg.matmul(M1, M2)
    fin = _to_d3(lam, mu)
    if fin is not None:
        return linalg.matmul(M, fin), True
    return M, False


def _to_d3(lam, mu):
    """Basis change from the (lam, mu) normal form onto d3, if rational."""
    r, s = _rational_sqrt(1 / lam), _rational_sqrt(1 / mu)
    if r is not None and s is not None:
        return [[r, 0, 0], [0, s, 0], [0, 0, r * s]]
    # swapping gives (-mu, -lam)
    r, s = _rational_sqrt(-1 / mu), _rational_sqrt(-1 / lam)
    if r is not None and s is not None:
        swap = [[0, -1, 0], [1, 0, 0], [0, 0, 1]]
        return linalg.matmul([[Fraction(c) for c in row] for row in swap], [[r, 0, 0], [0, s, 0], [0, 0, r * s]])
    return None


def _abelian_ideal(A):
    """A 2-dimensional abelian ideal containing the derived algebra (rank <= 2)."""
    cols = [_col(A, j) for j in range(3)]
    derived = [c for c in cols if any(c)]
    R_rows, _ = linalg.rref(derived)
    basis = [row for row in R_rows]
    if len(basis) == 2:
        return basis
    w = basis[0]
    ad_w = _from_columns([_bracket_vec(A, e, w) for e in _unit_vectors()])
    kernel = linalg.nullspace(ad_w, ncols=3)
    for u in kernel:
        if linalg.rank([w, u]) == 2:
            return [w, u]
    raise ArithmeticError("centralizer of the derived algebra is too small")


def _blockdiag(P, s=Fraction(1)):
    return [[P[0][0], P[0][1], 0], [P[1][0], P[1][1], 0], [0, 0, s]]


def _classify_R(R):
    """Normalize the 2x2 derivation block; returns (class, basis change, representative R, canonical?)."""
    one, zero = Fraction(1), Fraction(0)
    tr = R[0][0] + R[1][1]
    dt = R[0][0] * R[1][1] - R[0][1] * R[1][0]
    ident = [[one, zero], [zero, one]]

    def apply(R, P):
        return linalg.matmul(linalg.matmul(linalg.inverse(P), R), P)

    def cyclic_vector(R):
        for v in ([one, zero], [zero, one], [one, one]):
            Rv = linalg.matvec(R, v)
            if v[0] * Rv[1] - v[1] * Rv[0]:
                return v, Rv
        return None

    if R[0][1] == 0 and R[1][0] == 0 and R[0][0] == R[1][1]:
        c = R[0][0]
        return CanonicalClass("d2"), _blockdiag(ident, 1 / c), True
    if not tr and not dt:
        v, Rv = cyclic_vector(R)
        P = [[Rv[0], v[0]], [Rv[1], v[1]]]
        return CanonicalClass("d1"), _blockdiag(P), True
    disc = tr * tr - 4 * dt
    root = _rational_sqrt(disc)
    kappa = _invariant_from_trace_det(tr, dt)
    if root is None:
        v, Rv = cyclic_vector(R)
        P = [[v[0], Rv[0]], [v[1], Rv[1]]]
        return CanonicalClass("family", kappa), _blockdiag(P), False
    e1, e2 = (tr + root) / 2, (tr - root) / 2
    lam, mu = (e1, e2) if abs(e1) >= abs(e2) else (e2, e1)
    # scale so the larger eigenvalue is 1, then bring R/lam to [[1,1],[0,m]]
    S = _blockdiag(ident, 1 / lam)
    Rs = [[x / lam for x in row] for row in R]
    m = mu / lam
    if m == 1:
        N = [[Rs[0][0] - 1, Rs[0][1]], [Rs[1][0], Rs[1][1] - 1]]
        v = next(v for v in ([one, zero], [zero, one]) if any(linalg.matvec(N, v)))
        P = [[linalg.matvec(N, v)[0], v[0]], [linalg.matvec(N, v)[1], v[1]]]
    else:
        ev1 = linalg.nullspace([[Rs[0][0] - 1, Rs[0][1]], [Rs[1][0], Rs[1][1] - 1]], ncols=2)[0]
        evm = linalg.nullspace([[Rs[0][0] - m, Rs[0][1]], [Rs[1][0], Rs[1][1] - m]], ncols=2)[0]
        a = 1 / (1 - m)
        e2v = [a * ev1[0] + evm[0], a * ev1[1] + evm[1]]
        P = [[ev1[0], e2v[0]], [ev1[1], e2v[1]]]
    assert apply(Rs, P) == [[one, one], [zero, m]]
    return CanonicalClass("family", kappa, (one, m)), linalg.matmul(S, _blockdiag(P)), True


def classify(d) -> tuple[CanonicalClass, Witness]:
    """Identify a 3-dimensional Lie algebra and produce an explicit witness.

    The witness satisfies ``verify_equiv(representative, d, G)``.  The
    representative is the catalog codifferential except when the
    normalization would need a square root: then it is the last rational
    normal form reached (reported with ``canonical=False``).
    """
    body = d.body if isinstance(d, Codifferential) else d
    if not isinstance(body, Coderivation):
        body = Coderivation.from_grid(body)
    if body.dim != 3:
        raise UnsupportedDim(f"full classification needs N = 3, got {body.dim}")
    if not (isinstance(d, Codifferential) and d.certified):
        res = jacobi_residual(body)
        if not res.is_zero():
            raise NotCertified(f"Jacobi residual {res}", residual=res)
    A = [[Fraction(c) for c in row] for row in body.coeffs]
    rk = linalg.rank(A)
    ident = linalg.identity(3)
    if rk == 0:
        cls, M, exact = CanonicalClass("abelian"), ident, True
    elif rk == 3:
        M, exact = _perfect_case(A)
        cls = CanonicalClass("d3")
    else:
        W = _abelian_ideal(A)
        e = next(e for e in _unit_vectors() if linalg.rank(W + [e]) == 3)
        M1 = _from_columns([W[0], W[1], e])
        A1 = [list(r) for r in transport(A, M1).body.coeffs]
        if any(A1[i][0] for i in range(3)) or any(A1[2]):
            raise ArithmeticError("ideal reduction did not produce block form")
        R = [[A1[0][1], A1[0][2]], [A1[1][1], A1[1][2]]]
        cls, M2, exact = _classify_R(R)
        M = linalg.matmul(M1, M2)
    rep = transport(A, M)
    G = linalg.inverse(M)
    witness = Witness(G, induced_q(G), rep, exact)
    if exact and rep.body != canonical(cls).body:
        raise ArithmeticError(f"normal form {rep.body.coeffs} does not match catalog entry {cls}")
    if not verify_equiv(rep, body, G):
        raise ArithmeticError("classification witness failed verification")
    return cls, witness


def rank3(d) -> int:
    return linalg.rank([[Fraction(c) for c in row] for row in _grid(d)])
