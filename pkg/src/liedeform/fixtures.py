"""The catalog of 3-dimensional algebras with reference prebases and solution branches.

Prebases fix the coordinates of the base of the miniversal deformation, so
using them makes the relations reproducible term for term.  Branches are
solutions of those relations, written as substitutions for the parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .classify3 import canonical
from .coder import Codifferential
from .errors import BadLabel
from .notation import parse_coderivation

CATALOG = ("d1", "d2", "d3", "d_1_1", "d_lambda_mu", "d_1_0", "d_1_m1", "abelian")

# the generic family point used when no (lambda, mu) is given
DEFAULT_FAMILY_POINT = (Fraction(2), Fraction(3))

_PREBASES = {
    "d1": {
        1: ["phi^{2}_3", "phi^{3}_2", "phi^{1}_1 + phi^{2}_2", "phi^{2}_2 - phi^{3}_3"],
        2: ["psi^{12}_1", "psi^{12}_3", "psi^{13}_1", "psi^{13}_2", "psi^{13}_3 - psi^{12}_2"],
        3: ["phi^{123}_2", "phi^{123}_3"],
    },
    "d2": {
        1: ["phi^{1}_2", "phi^{2}_1", "phi^{2}_2"],
        2: ["psi^{13}_1", "psi^{13}_2", "psi^{23}_1"],
    },
    "d_1_m1": {
        1: ["2*phi^{1}_1 + phi^{2}_1"],
        2: ["psi^{13}_1", "psi^{12}_3"],
        3: ["phi^{123}_3"],
    },
    "family": {
        1: ["phi^{1}_1 + phi^{2}_2"],
        2: ["psi^{13}_2"],
    },
    "d3": {},
}


def _family_point(name, point=None):
    if name == "d_1_1":
        return (Fraction(1), Fraction(1))
    if name == "d_1_0":
        return (Fraction(1), Fraction(0))
    if name == "d_1_m1":
        return (Fraction(1), Fraction(-1))
    if name == "d_lambda_mu":
        return tuple(map(Fraction, point)) if point is not None else DEFAULT_FAMILY_POINT
    return None


def catalog_entry(name, point=None) -> Codifferential:
    """Catalog codifferential by fixture name (``d_lambda_mu`` takes a point)."""
    if name in ("d1", "d2", "d3", "abelian"):
        return canonical(name)
    fp = _family_point(name, point)
    if fp is None:
        raise BadLabel(f"unknown fixture {name!r}; choose from {', '.join(CATALOG)}")
    return canonical("family", fp)


def prebases(name, point=None) -> dict:
    """Reference prebases ``{degree: [Coderivation, ...]}`` for a fixture.

    For the family only the ``H^2`` representative is used away from
    ``(1:-1)``; the reference ``H^1`` list for ``d(1:0)`` is incomplete and is
    therefore omitted there.
    """
    if name == "abelian":
        return {}
    if name in _PREBASES:
        data = _PREBASES[name]
    elif name in ("d_lambda_mu", "d_1_1", "d_1_0"):
        data = dict(_PREBASES["family"])
        lam, mu = _family_point(name, point)
        if lam + mu == 0:
            data = _PREBASES["d_1_m1"]
        elif name == "d_1_0":
            data = {2: data[2]}
    else:
        raise BadLabel(f"unknown fixture {name!r}")
    return {k: [parse_coderivation(s, 3) for s in v] for k, v in data.items()}


@dataclass(frozen=True)
class BranchSpec:
    """A solution branch as text: ``{"t5": "-t1*t4/t3", ...}``."""

    name: str
    substitutions: dict
    samples: tuple = field(default=())
    description: str = ""
    kind: str = "jump"  # "jump", "smooth" (nearby points) or "move" (along the family)


BRANCHES = {
    "d_1_m1": (
        BranchSpec("t1=0", {"t1": "0"}, ({"t2": 1}, {"t2": 2}, {"t2": -3}, {"t2": "1/2"}), "jump to d3"),
        BranchSpec("t2=0", {"t2": "0"}, ({"t1": 1}, {"t1": 2}, {"t1": "-1/3"}), "moves along the family", "move"),
    ),
    "d2": (
        BranchSpec("t1=t2=0", {"t1": "0", "t2": "0"}, ({"t3": 1}, {"t3": 2}, {"t3": -5}), "jump to d(1:1)"),
        BranchSpec(
            "generic",
            {},
            ({"t1": 1, "t2": 1, "t3": 2}, {"t1": "1/2", "t2": 3, "t3": -1}, {"t1": 0, "t2": 1, "t3": 1}),
            "nearby family points",
            "smooth",
        ),
    ),
    "d1": (
        BranchSpec(
            "1: t1=t3=0",
            {"t1": "0", "t3": "0"},
            ({"t2": 1, "t4": 1, "t5": 1}, {"t2": 2, "t4": -1, "t5": 3}, {"t2": 1, "t4": 1, "t5": 0}),
            "jump to d3 off t2*t4 + t5^2 = 0",
        ),
        BranchSpec(
            "1': t1=t3=0, t2*t4+t5^2=0",
            {"t1": "0", "t3": "0", "t2": "-t5^2/t4"},
            ({"t4": -1, "t5": 1}, {"t4": 2, "t5": 3}, {"t4": "1/3", "t5": -2}),
            "jump to d(1:-1)",
        ),
        BranchSpec(
            "2: t3=t4=t5=0",
            {"t3": "0", "t4": "0", "t5": "0"},
            ({"t1": 5, "t2": 6}, {"t1": 3, "t2": 2}, {"t1": 2, "t2": 1}, {"t1": 1, "t2": 0}, {"t1": 0, "t2": -1}),
            "jumps to every family point",
        ),
        BranchSpec(
            "3: t5=-t1*t4/t3, t2=-t1^2*t4/t3^2",
            {"t5": "-t1*t4/t3", "t2": "-t1^2*t4/t3^2"},
            ({"t1": 1, "t3": 5, "t4": -6}, {"t1": 2, "t3": 3, "t4": -2}, {"t1": 0, "t3": 1, "t4": 0}, {"t1": 1, "t3": 2, "t4": 1}),
            "jumps to every family point",
        ),
    ),
    "family": (
        BranchSpec("generic", {}, ({"t1": 1}, {"t1": -2}, {"t1": "1/3"}), "moves along the family", "move"),
    ),
}


def branch_specs(name, point=None):
    if name in BRANCHES:
        return BRANCHES[name]
    if name in ("d_lambda_mu", "d_1_1", "d_1_0"):
        return BRANCHES["family"]
    return ()
