import random
from fractions import Fraction

import pytest

from conftest import CATALOG7, random_invertible
from liedeform import deform
from liedeform.classify3 import canonical, family_invariant, transport
from liedeform.coder import Codifferential, Coderivation, basis_of, bracket, jacobi_residual
from liedeform.cohomology import coboundary
from liedeform.deform import (
    Branch,
    L3Split,
    analyze_branch,
    bracket_decompose,
    infinitesimal,
    miniversal,
    moduli_graph,
)
from liedeform.errors import DenominatorVanishes, RelationViolated, SplitNotSpanning, TruncationTooSmall
from liedeform.fixtures import BRANCHES, branch_specs, catalog_entry, prebases
from liedeform.notation import parse_coderivation

F = Fraction


def mv_of(name):
    return miniversal(catalog_entry(name), prebases=prebases(name))


def rendered(mv):
    return mv.deformation.render()


# -- infinitesimal deformation ---------------------------------------------------------


def test_infinitesimal_examples():
    assert infinitesimal(canonical("d3")).h_terms == ()
    inf = infinitesimal(catalog_entry("d_1_m1"), prebases("d_1_m1")[2])
    assert inf.render() == [["0", "1 + t1", "1"], ["0", "0", "-1"], ["t2", "0", "0"]]
    inf = infinitesimal(canonical("d1"), prebases("d1")[2])
    assert [str(t) for t in inf.params] == ["t1", "t2", "t3", "t4", "t5"]
    assert not inf.p_terms


@pytest.mark.parametrize("name", CATALOG7 + ("abelian",))
def test_augmentation_recovers_base(name):
    mv = miniversal(catalog_entry(name), prebases=prebases(name))
    assert mv.deformation.at({}) == catalog_entry(name).body


def _flat_mod_m2(d):
    inf = infinitesimal(d)
    if not inf.h_terms:
        return True
    b = inf.body()
    xi = bracket(b, b)
    return all(not c.truncate(1) for row in xi.coeffs for c in row)


def test_infinitesimal_flatness():
    rnd = random.Random(4)
    algebras = [catalog_entry(n) for n in CATALOG7] + [canonical("abelian")]
    algebras += [transport(catalog_entry(CATALOG7[i]), random_invertible(rnd)) for i in range(len(CATALOG7))]
    assert all(_flat_mod_m2(d) for d in algebras)


# -- decomposition -------------------------------------------------------------------------------


def test_bracket_decompose_zero():
    split = L3Split.of(canonical("d1"), prebases("d1")[3])
    r, s, y = bracket_decompose(Coderivation.zero(3, 3), split)
    assert not any(r) and not any(s) and not any(y)


def test_bracket_decompose_fixture_brackets():
    mv = mv_of("d_1_m1")
    assert [a.render() for a in mv.split.alpha] == ["phi^{123}_3"]
    assert [str(c) for c in mv.r] == ["-2*t1*t2"]
    assert not any(mv.s) and not any(mv.y)
    mv = mv_of("d1")
    assert [a.render() for a in mv.split.alpha] == ["phi^{123}_2", "phi^{123}_3"]
    assert [str(c) for c in mv.r] == ["2*t1*t4 + 2*t3*t5", "2*t1*t5 - 2*t2*t3"]


def test_split_not_spanning():
    phi = parse_coderivation("phi^{123}_1", 3)
    with pytest.raises(SplitNotSpanning):
        L3Split.build([phi], [], [])
    with pytest.raises(SplitNotSpanning):
        L3Split.build([phi, phi, parse_coderivation("phi^{123}_2", 3)], [], [])


# -- miniversal deformation --------------------------------------------------------------------


def test_miniversal_d_1_m1():
    mv = mv_of("d_1_m1")
    assert mv.exact and [str(r) for r in mv.relations] == ["t1*t2"]
    assert rendered(mv) == [["0", "1 + t1", "1"], ["0", "0", "-1"], ["t2", "0", "0"]]


def test_miniversal_d1():
    mv = mv_of("d1")
    assert mv.exact
    assert [str(r) for r in mv.relations] == ["t1*t4 + t3*t5", "t1*t5 - t2*t3"]
    assert rendered(mv) == [["t1", "t3", "1"], ["-t5", "t4", "0"], ["t2", "t5", "0"]]


@pytest.mark.parametrize("name", ["d2", "d_lambda_mu", "d_1_1", "d_1_0"])
def test_miniversal_unobstructed(name):
    mv = mv_of(name)
    assert mv.exact and mv.relations == []
    b = mv.deformation.body()
    assert bracket(b, b).is_zero()
    assert all(not v for _, v in mv.deformation.p_terms)


def test_miniversal_d2_matrix():
    assert rendered(mv_of("d2")) == [["0", "1 + t1", "t3"], ["0", "t2", "1"], ["0", "0", "0"]]


def test_d3_is_rigid():
    mv = mv_of("d3")
    assert mv.rigid and mv.exact and mv.relations == []


def _check_exact(mv):
    body = mv.deformation.body()
    xi = bracket(body, body)
    total = mv.bracket()
    if total is None:
        assert xi.is_zero()
    else:
        assert xi == total
    assert not any(mv.s)


def _four_dim(terms):
    return Codifferential.certify(Coderivation.from_terms(4, 2, {((i, j), k): c for i, j, k, c in terms}))


FOUR_DIM = {
    "heisenberg+R": [(1, 2, 3, 1)],
    "filiform": [(1, 2, 3, 1), (1, 3, 4, 1)],
    "r2+r2": [(1, 2, 2, 1), (3, 4, 4, 1)],
    "diag(1,2,3)": [(1, 4, 1, -1), (2, 4, 2, -2), (3, 4, 3, -3)],
}


@pytest.mark.parametrize("name", sorted(FOUR_DIM))
def test_four_dimensional_exact_closure(name):
    mv = miniversal(_four_dim(FOUR_DIM[name]))
    assert mv.exact and mv.y_in_ideal
    _check_exact(mv)


def test_filiform_needs_nonzero_corrections():
    mv = miniversal(_four_dim(FOUR_DIM["filiform"]))
    assert any(v for _, v in mv.deformation.p_terms)


@pytest.mark.parametrize("name", CATALOG7)
def test_exact_results_close_identically(name):
    _check_exact(mv_of(name))


def _perturbed(name, seed):
    rnd = random.Random(seed)
    d = catalog_entry(name)
    pb = prebases(name)
    h2 = [h + coboundary(d.body, rnd.choice(basis_of(3, 1))) * rnd.choice([1, -1, 2]) for h in pb[2]]
    return d, {2: h2, 3: pb.get(3)}


def test_rational_closure():
    d, pb = _perturbed("d_1_m1", 1)
    mv = miniversal(d, truncation_degree=3, prebases=pb)
    assert mv.deformation.rational
    assert mv.exact and len(mv.relations) == 1
    _check_exact(mv)


def test_truncation_too_small(monkeypatch):
    with pytest.raises(TruncationTooSmall):
        miniversal(canonical("d1"), truncation_degree=1)
    d, pb = _perturbed("d_1_m1", 1)
    monkeypatch.setattr(deform, "_rational_closure", lambda *a: None)
    with pytest.raises(TruncationTooSmall):
        miniversal(d, truncation_degree=3, prebases=pb)
    mv = miniversal(d, truncation_degree=3, prebases=pb, allow_truncated=True)
    assert not mv.exact and mv.truncation_degree == 3
    # s vanishes modulo m^4
    assert all(not c for c in mv.s)
    assert all(c.total_degree() <= 3 for c in mv.relations)


def test_relation_necessity():
    rnd = random.Random(8)
    for name in ("d1", "d_1_m1"):
        mv = mv_of(name)
        ts = mv.deformation.params
        for _ in range(40):
            pt = {t: F(rnd.randint(-2, 2)) for t in ts}
            values = [r.evaluate(pt) for r in mv.relations]
            residual = jacobi_residual(mv.deformation.at(pt))
            assert residual.is_zero() == (not any(values))
        for rel in mv.relations:
            # a point violating this relation is not a Lie algebra
            pt = next(p for p in ({t: F(rnd.randint(-3, 3)) for t in ts} for _ in range(1000)) if rel.evaluate(p))
            assert not jacobi_residual(mv.deformation.at(pt)).is_zero()


# -- branches ----------------------------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["d1", "d_1_m1", "d2", "d_lambda_mu"])
def test_branch_soundness(name):
    mv = mv_of(name)
    for spec in branch_specs(name):
        Branch.parse(spec.name, spec.substitutions, mv.deformation.ring).check(mv.relations)


def _run(name, subs, samples):
    mv = mv_of(name)
    branch = Branch.parse("b", subs, mv.deformation.ring)
    return [cls for _, cls in analyze_branch(mv, branch, samples)]


def test_jump_d_1_m1_to_d3():
    (cls,) = _run("d_1_m1", {"t1": "0"}, [{"t2": 1}])
    assert cls.label == "d3"


def test_d_1_m1_moves_along_family():
    (cls,) = _run("d_1_m1", {"t2": "0"}, [{"t1": 1}])
    assert cls.label == "family" and cls.kappa == F(-1, 2)
    assert cls.kappa == family_invariant(2, -1)


def test_jump_d2_to_d11():
    (cls,) = _run("d2", {"t1": "0", "t2": "0"}, [{"t3": 1}])
    assert cls.label == "family" and cls.marked_point() == "(1:1)"


def test_d1_branches():
    (cls,) = _run("d1", {"t3": "0", "t4": "0", "t5": "0"}, [{"t1": 5, "t2": 6}])
    assert cls.kappa == F(25, 6)
    (cls,) = _run("d1", {"t5": "-t1*t4/t3", "t2": "-t1^2*t4/t3^2"}, [{"t1": 1, "t3": 5, "t4": -6}])
    assert cls.kappa == F(25, 6)
    labels = _run("d1", {"t1": "0", "t3": "0"}, [{"t2": 1, "t4": 1, "t5": 1}, {"t2": 1, "t4": -1, "t5": 1}])
    assert [c.label for c in labels] == ["d3", "family"]
    assert labels[1].marked_point() == "(1:-1)"


def test_branch_errors():
    mv = mv_of("d_1_m1")
    with pytest.raises(RelationViolated):
        analyze_branch(mv, Branch.parse("bad", {"t1": "1"}, mv.deformation.ring), [{"t2": 1}])
    mv = mv_of("d1")
    spec = BRANCHES["d1"][3]
    branch = Branch.parse(spec.name, spec.substitutions, mv.deformation.ring)
    with pytest.raises(DenominatorVanishes):
        analyze_branch(mv, branch, [{"t1": 1, "t3": 0, "t4": 1}])


def test_no_d1_sample_is_d2():
    mv = mv_of("d1")
    for spec in branch_specs("d1"):
        branch = Branch.parse(spec.name, spec.substitutions, mv.deformation.ring)
        assert all(cls.label != "d2" for _, cls in analyze_branch(mv, branch, spec.samples))


@pytest.mark.parametrize("lam,mu", [(2, 3), (1, 1), (1, 0), (3, -1), (F(1, 2), 5)])
def test_family_motion_kappa(lam, mu):
    mv = miniversal(canonical("family", (lam, mu)), prebases=prebases("d_lambda_mu", (lam, mu)))
    for t in (1, -2, F(1, 3), 5, F(-7, 2)):
        (_, cls), = analyze_branch(mv, Branch("generic", {}), [{"t1": t}])
        det = F(lam) * F(mu) - F(t)
        expected = "zero-product" if not det else (F(lam) + F(mu)) ** 2 / det
        assert cls.kappa == expected


# -- moduli graph ---------------------------------------------------------------------------------------------


def test_moduli_graph_edges():
    g = moduli_graph()
    assert g.nodes == ("d1", "d2", "d3", "family")
    jumps = {(e.source, e.source_point, e.target, e.target_point) for e in g.edges if e.kind == "jump"}
    assert jumps == {
        ("d1", None, "d3", None),
        ("d1", None, "family", "(1:-1)"),
        ("d1", None, "family", "*"),
        ("d2", None, "family", "(1:1)"),
        ("family", "(1:-1)", "d3", None),
    }
    assert [(e.source, e.target) for e in g.edges if e.kind == "move"] == [("family", "family")]
    assert not g.has_edge("d1", "d2")
    assert g.has_edge("family", "d3")


def test_moduli_graph_abelian_opt_in():
    g = moduli_graph(include_abelian=True)
    assert "abelian" in g.nodes and g.has_edge("abelian", "d3")
