"""Command-line front end.

Algebras are read from JSON files listing structure constants::

    {"dim": 3, "structure": [{"pair": [1, 2], "target": 3, "coeff": "1"}]}

meaning ``[e1, e2] = 1 * e3``.  Exit codes: 0 success, 1 mathematical
negative (non-Jacobi, not certified, no exact closure), 2 usage or parse
error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .classify3 import ZERO_PRODUCT, classify, verify_equiv
from .coder import Codifferential, Coderivation, jacobi_residual
from .cohomology import cohomology_report
from .deform import miniversal, moduli_graph
from .errors import (
    LieDeformError,
    NotCertified,
    ParseError,
    TruncationTooSmall,
)
from .exterior import MAX_DIM, word_index, words
from .fixtures import CATALOG, catalog_entry, prebases
from .scalars import format_rational, parse_rational

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


# -- algebra files -------------------------------------------------------------


@dataclass(frozen=True)
class AlgebraFile:
    dim: int
    structure: tuple  # ((i, j), k, Fraction), sorted, nonzero

    @classmethod
    def parse(cls, text: str) -> AlgebraFile:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
        return cls.from_json(data)

    @classmethod
    def from_json(cls, data) -> AlgebraFile:
        if not isinstance(data, dict) or "dim" not in data:
            raise ParseError("algebra file needs a 'dim' field")
        if set(data) - {"dim", "structure"}:
            raise ParseError(f"unknown keys {sorted(set(data) - {'dim', 'structure'})}")
        dim = data["dim"]
        if not isinstance(dim, int) or isinstance(dim, bool) or not 1 <= dim <= MAX_DIM:
            raise ParseError(f"dim must be an integer in 1..{MAX_DIM}")
        entries = data.get("structure", [])
        if not isinstance(entries, list):
            raise ParseError("'structure' must be a list")
        seen = {}
        for e in entries:
            if not isinstance(e, dict) or set(e) - {"pair", "target", "coeff"}:
                raise ParseError(f"bad structure entry {e!r}")
            try:
                (i, j), k = e["pair"], e["target"]
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"bad structure entry {e!r}") from exc
            if not all(isinstance(v, int) and not isinstance(v, bool) for v in (i, j, k)):
                raise ParseError(f"indices must be integers in {e!r}")
            if not (1 <= i < j <= dim and 1 <= k <= dim):
                raise ParseError(f"need 1 <= i < j <= {dim} and 1 <= k <= {dim} in {e!r}")
            c = e.get("coeff", "1")
            if isinstance(c, bool) or not isinstance(c, (str, int)):
                raise ParseError(f"coefficients are rational strings, got {c!r}")
            key = ((i, j), k)
            if key in seen:
                raise ParseError(f"duplicate entry for pair {[i, j]} and target {k}")
            seen[key] = parse_rational(c)
        idx = word_index(dim, 2)
        structure = tuple(
            (pair, k, c) for (pair, k), c in sorted(seen.items(), key=lambda kv: (idx[kv[0][0]], kv[0][1])) if c
        )
        return cls(dim, structure)

    @classmethod
    def from_coderivation(cls, d) -> AlgebraFile:
        body = d.body if isinstance(d, Codifferential) else d
        ws = words(body.dim, 2)
        structure = tuple(
            (ws[j], k + 1, Fraction(c))
            for j in range(len(ws))
            for k in range(body.dim)
            if (c := body.coeffs[k][j])
        )
        return cls(body.dim, structure)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "structure": [
                {"pair": list(p), "target": k, "coeff": format_rational(c)} for p, k, c in self.structure
            ],
        }

    def serialize(self) -> str:
        """Normalized text: one structure entry per line, entries in basis order."""
        data = self.to_json()
        rows = [json.dumps(e) for e in data["structure"]]
        if not rows:
            return f'{{"dim": {self.dim}, "structure": []}}\n'
        body = ",\n    ".join(rows)
        return f'{{\n  "dim": {self.dim},\n  "structure": [\n    {body}\n  ]\n}}\n'

    def coderivation(self) -> Coderivation:
        return Coderivation.from_terms(self.dim, 2, {(p, k): c for p, k, c in self.structure})


# -- reports ----------------------------------------------------------------------


@dataclass
class Report:
    command: list
    digest: str | None
    payload: dict
    text: str
    exit_code: int = EXIT_OK

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "input_sha256": self.digest,
            "version": __version__,
            "result": self.payload,
        }

    def render(self, fmt) -> str:
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"
        return self.text if self.text.endswith("\n") else self.text + "\n"


def _q(c) -> str:
    return format_rational(c) if isinstance(c, (int, Fraction)) else str(c)


def _matrix_text(rows, indent="  ") -> str:
    cells = [[_q(c) for c in row] for row in rows]
    width = max((len(c) for row in cells for c in row), default=1)
    return "\n".join(indent + "[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)


def _show(value, pretty):
    if hasattr(value, "pretty") and pretty:
        return value.pretty()
    return _q(value)


def _residual_payload(res: Coderivation) -> dict:
    return {"zero": res.is_zero(), "terms": {c.render(): _q(v) for c, v in _split_terms(res)}}


def _split_terms(cod: Coderivation):
    for word, target, c in cod.terms():
        yield Coderivation.basis(cod.dim, word, target), c


# -- commands ---------------------------------------------------------------------


def cmd_jacobi(alg: AlgebraFile, args) -> tuple[dict, str, int]:
    res = jacobi_residual(alg.coderivation())
    payload = {"dim": alg.dim, "residual": _residual_payload(res)}
    if res.is_zero():
        return payload, "Jacobi residual: 0 (a Lie algebra)", EXIT_OK
    return payload, f"Jacobi residual: {res.render(args.pretty)}", EXIT_NEGATIVE


def _certify(alg: AlgebraFile) -> Codifferential:
    return Codifferential.certify(alg.coderivation())


def cmd_cohomology(alg: AlgebraFile, args) -> tuple[dict, str, int]:
    d = _certify(alg)
    kmax = alg.dim if args.max_degree is None else args.max_degree
    if not 0 <= kmax <= alg.dim:
        raise ParseError(f"--max-degree must lie in 0..{alg.dim}")
    rep = cohomology_report(d, kmax)
    degrees = []
    lines = []
    for k in range(kmax + 1):
        dd = rep[k]
        reps = [h.render() for h in dd.prebasis_H]
        degrees.append({"degree": k, "dim_L": dd.dim_L, "rank_D": dd.rank_D, "dim_H": dd.dim_H, "prebasis": reps})
        shown = ", ".join(h.render(args.pretty) for h in dd.prebasis_H) or "0"
        lines.append(f"H^{k}: dim {dd.dim_H}  <{shown}>")
    payload = {"dim": alg.dim, "dims": [dd["dim_H"] for dd in degrees], "degrees": degrees}
    return payload, "\n".join(lines), EXIT_OK


def cmd_classify(alg: AlgebraFile, args) -> tuple[dict, str, int]:
    d = _certify(alg)
    cls, w = classify(d)
    verified = verify_equiv(w.representative, d, w.G)
    kappa = cls.kappa if cls.kappa in (None, ZERO_PRODUCT) else _q(cls.kappa)
    payload = {
        "label": cls.label,
        "name": cls.name,
        "kappa": kappa,
        "point": None if cls.point is None else [_q(c) for c in cls.point],
        "marked_point": cls.marked_point(),
        "canonical": w.canonical,
        "representative": [[_q(c) for c in row] for row in w.representative.body.coeffs],
        "witness": [[_q(c) for c in row] for row in w.G],
        "verified": verified,
    }
    lines = [f"class: {cls}"]
    if not w.canonical:
        lines.append("normal form needs a square root; witness maps from the rational representative")
        lines.append(_matrix_text(w.representative.body.coeffs))
    lines += ["witness G:", _matrix_text(w.G), f"verify_equiv: {'ok' if verified else 'FAILED'}"]
    return payload, "\n".join(lines), EXIT_OK if verified else EXIT_NEGATIVE


def cmd_miniversal(alg: AlgebraFile | None, args) -> tuple[dict, str, int]:
    if args.fixtures:
        fixture = catalog_entry(args.fixtures)
        if alg is not None and alg.coderivation() != fixture.body:
            raise ParseError(f"input algebra is not the catalog entry {args.fixtures!r}")
        d, pb = fixture, prebases(args.fixtures)
    elif alg is None:
        raise ParseError("miniversal needs an input file or --fixtures")
    else:
        d, pb = _certify(alg), None
    mv = miniversal(d, args.truncation, prebases=pb, allow_truncated=args.allow_truncated)
    dm = mv.deformation
    if mv.rigid:
        payload = {"rigid": True, "matrix": [[_q(c) for c in r] for r in d.body.coeffs],
                   "relations": [], "exact": True, "truncation_degree": mv.truncation_degree}
        return payload, "rigid: H^2=0, miniversal = d", EXIT_OK
    bracket = mv.bracket()
    payload = {
        "rigid": False,
        "parameters": [str(t) for t in dm.params],
        "h_terms": [[h.render(), str(t)] for h, t in dm.h_terms],
        "p_terms": [[p.render(), str(v)] for p, v in dm.p_terms],
        "matrix": dm.render(),
        "relations": [str(r) for r in mv.relations],
        "bracket": _poly_terms(bracket),
        "exact": mv.exact,
        "y_in_ideal": mv.y_in_ideal,
        "truncation_degree": mv.truncation_degree,
    }
    pretty = args.pretty
    lines = ["d_inf =", _matrix_text(dm.render(pretty))]
    solved = [f"  x{j + 1} = {_show(v, pretty)}" for j, (_, v) in enumerate(dm.p_terms)]
    if solved:
        lines += ["solved corrections:"] + solved
    lines.append("[d_inf, d_inf] = " + _bracket_text(bracket, pretty))
    rels = ", ".join(_show(r, pretty) for r in mv.relations) or "none"
    lines.append(f"relations: {rels}")
    lines.append(f"exact: {'true' if mv.exact else 'false (valid to degree ' + str(mv.truncation_degree) + ')'}")
    return payload, "\n".join(lines), EXIT_OK


def _poly_terms(cod):
    if cod is None:
        return {}
    return {b.render(): str(c) for b, c in _split_terms(cod)}


def _bracket_text(cod, pretty):
    if cod is None or cod.is_zero():
        return "0"
    out = ""
    for b, c in _split_terms(cod):
        s = _show(c, pretty)
        sign = " + " if out else ""
        if " " in s:
            s = f"({s})"
        elif s.startswith("-"):
            sign, s = (" - " if out else "-"), s[1:]
        out += f"{sign}{s}*{b.render(pretty)}"
    return out


def cmd_moduli_graph(args) -> tuple[dict, str, int]:
    g = moduli_graph(include_abelian=args.include_abelian)
    nodes = []
    for n in sorted(g.nodes):
        node = {"id": n}
        if n == "family":
            node["marked_points"] = list(g.marked_points)
        nodes.append(node)
    edges = [
        {k: v for k, v in (("source", e.source), ("target", e.target), ("kind", e.kind),
                           ("source_point", e.source_point), ("target_point", e.target_point)) if v is not None}
        for e in g.edges
    ]
    payload = {"nodes": nodes, "edges": edges}
    if args.emit == "json":
        return payload, json.dumps(payload, indent=2, sort_keys=True), EXIT_OK
    return payload, to_dot(nodes, edges), EXIT_OK


def _attrs(d: dict) -> str:
    return ", ".join(f'{k}="{v}"' for k, v in sorted(d.items()))


def to_dot(nodes, edges) -> str:
    """Deterministic DOT text: nodes then edges, each sorted lexicographically."""
    lines = ["digraph moduli {"]
    for n in sorted(nodes, key=lambda n: n["id"]):
        attrs = {"label": n["id"]}
        if "marked_points" in n:
            attrs["marked_points"] = " ".join(n["marked_points"])
        lines.append(f"  {n['id']} [{_attrs(attrs)}];")
    rows = []
    for e in edges:
        extra = {k: v for k, v in e.items() if k not in ("source", "target")}
        rows.append(f"  {e['source']} -> {e['target']} [{_attrs(extra)}];")
    lines += sorted(rows)
    lines.append("}")
    return "\n".join(lines)


def cmd_catalog(args) -> tuple[dict, str, int]:
    if not args.name:
        payload = {"catalog": list(CATALOG)}
        return payload, "\n".join(CATALOG), EXIT_OK
    point = None
    if args.point:
        point = tuple(parse_rational(c) for c in args.point)
    alg = AlgebraFile.from_coderivation(catalog_entry(args.name, point))
    return alg.to_json(), alg.serialize(), EXIT_OK


# -- argument handling ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="liedeform", description="Lie algebras as codifferentials: cohomology, classification, deformations.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help, needs_input=True, optional_input=False):
        p = sub.add_parser(name, help=help)
        if needs_input:
            p.add_argument("input", nargs="?" if optional_input else None, help="algebra JSON file ('-' for stdin)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--pretty", action="store_true", help="superscript parameters in text output")
        return p

    add("jacobi", "check the Jacobi identity")
    p = add("cohomology", "adjoint cohomology dimensions and representatives")
    p.add_argument("--max-degree", type=int, default=None)
    add("classify", "classify a 3-dimensional Lie algebra with a witness")
    p = add("miniversal", "miniversal deformation and relations on its base", optional_input=True)
    p.add_argument("--fixtures", choices=CATALOG, help="use the reference prebases of a catalog algebra")
    p.add_argument("--truncation", type=int, default=4)
    p.add_argument("--allow-truncated", action="store_true")
    p = add("moduli-graph", "jump deformations between strata", needs_input=False)
    p.add_argument("--emit", choices=("dot", "json"), default="dot")
    p.add_argument("--include-abelian", action="store_true")
    p = add("catalog", "list catalog algebras or print one as an algebra file", needs_input=False)
    p.add_argument("name", nargs="?", choices=CATALOG)
    p.add_argument("--point", nargs=2, metavar=("LAMBDA", "MU"))
    return parser


def _read_input(path):
    if path is None:
        return None, None
    if path == "-":
        raw = sys.stdin.buffer.read()
    else:
        try:
            with open(path, "rb") as fh:
                raw = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError("algebra files must be UTF-8") from exc
    return AlgebraFile.parse(text), hashlib.sha256(raw).hexdigest()


_COMMANDS = {
    "jacobi": cmd_jacobi,
    "cohomology": cmd_cohomology,
    "classify": cmd_classify,
    "miniversal": cmd_miniversal,
}


def run(argv=None) -> tuple[int, str, str]:
    """Run the CLI; returns ``(exit_code, stdout, stderr)``."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), "", ""
    try:
        if args.command == "moduli-graph":
            payload, text, code = cmd_moduli_graph(args)
            digest = None
        elif args.command == "catalog":
            payload, text, code = cmd_catalog(args)
            digest = None
        else:
            alg, digest = _read_input(getattr(args, "input", None))
            payload, text, code = _COMMANDS[args.command](alg, args)
    except NotCertified as exc:
        payload = {"error": "NotCertified", "message": str(exc)}
        if exc.residual is not None:
            payload["residual"] = _residual_payload(exc.residual)
        return _emit(args, argv, None, payload, f"error: {exc}", EXIT_NEGATIVE)
    except TruncationTooSmall as exc:
        return _emit(args, argv, None, {"error": "TruncationTooSmall", "message": str(exc)}, f"error: {exc}", EXIT_NEGATIVE)
    except LieDeformError as exc:
        return EXIT_USAGE, "", f"liedeform: {type(exc).__name__}: {exc}\n"
    return _emit(args, argv, digest, payload, text, code)


def _emit(args, argv, digest, payload, text, code):
    report = Report(argv, digest, payload, text, code)
    return code, report.render(args.format), ""


def main(argv=None) -> int:
    code, out, err = run(argv)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
