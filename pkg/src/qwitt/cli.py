"""Command-line interface with JSON input and output.

Vector documents look like::

    {"ring": "Zq", "g": "q", "trunc": 2, "coords": ["1", "0"]}

``--in`` / ``--in2`` take either inline JSON or a path to a JSON file. A bare JSON list is read as the coordinates, with ring,
deformation and truncation taken from the flags. Failures print
``{"error": name, "detail": text}`` and exit with 2 (parse), 4 (integrality)
or 3 (any other library error).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import bridges, lambdaf, necklace, symfun, witt
from .errors import ParseError, QWittError
from .exactalg import QPolynomial
from .rings import get_ring
from .witt import Deformation, GhostVector, WittContext, WittVector


# ---------------------------------------------------------------------------
# document handling
# ---------------------------------------------------------------------------


def _load(source: str | None, flag: str) -> Any:
    """Inline JSON (including bare scalars) or, failing that, a JSON file path."""
    if source is None:
        raise ParseError(f"{flag} is required for this command")
    text = source.strip()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        if text.startswith(("[", "{")):
            raise ParseError(f"{flag} is not valid JSON: {exc}") from exc
    try:
        return json.loads(Path(source).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {flag} file {source!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{flag} file {source!r} is not valid JSON: {exc}") from exc


def _context_from(args: argparse.Namespace, doc: Any = None, trunc: int | None = None) -> WittContext:
    meta = doc if isinstance(doc, dict) else {}
    g = meta.get("g", args.g)
    m = meta.get("m", args.m)
    if g is not None and m is not None:
        raise ParseError("give either g or m, not both")
    if g is None and m is None:
        raise ParseError("a deformation is required: --g POLY or --m INT")
    ring_name = meta.get("ring", args.ring) or ("Zq" if g is not None else "Z")
    ring = get_ring(str(ring_name))
    if trunc is None:
        trunc = meta.get("trunc", args.trunc)
    if trunc is None and doc is not None:
        trunc = len(_coords_of(doc))
    if trunc is None:
        raise ParseError("a truncation level is required: --trunc N")
    try:
        deformation = Deformation.polynomial(str(g)) if g is not None else Deformation.integer(int(m))
    except (ValueError, TypeError) as exc:
        raise ParseError(f"bad deformation: {exc}") from exc
    return WittContext(deformation, int(trunc), ring)


def _coords_of(doc: Any) -> list[Any]:
    coords = doc.get("coords") if isinstance(doc, dict) else doc
    if not isinstance(coords, list):
        raise ParseError("expected a list of coordinates")
    return coords


def _parse_coords(ctx: WittContext, doc: Any) -> list[Any]:
    coords = _coords_of(doc)
    if len(coords) != ctx.trunc:
        raise ParseError(f"expected {ctx.trunc} coordinates, got {len(coords)}")
    return [ctx.ring.parse(c) for c in coords]


def _read_vector(args: argparse.Namespace, cls: type, flag: str = "--in") -> Any:
    doc = _load(getattr(args, "in2" if flag == "--in2" else "inp"), flag)
    ctx = _context_from(args, doc)
    return cls(ctx, _parse_coords(ctx, doc))


def _deformation_fields(ctx: WittContext) -> dict[str, Any]:
    d = ctx.deformation
    return {"g": str(d.g)} if d.is_polynomial else {"m": d.m}


def _vector_doc(kind: str, v: Any) -> dict[str, Any]:
    ctx = v.ctx
    return {"kind": kind, "ring": ctx.ring.key, **_deformation_fields(ctx), "trunc": ctx.trunc, "coords": v.to_strings()}


def _series_doc(s: lambdaf.LambdaElement) -> dict[str, Any]:
    ctx = s.ctx
    return {"kind": "series", "ring": ctx.ring.key, **_deformation_fields(ctx), "trunc": ctx.trunc, "coeffs": s.to_strings()}


# ---------------------------------------------------------------------------
# command handlers
# ---------------------------------------------------------------------------


def _cmd_witt(args: argparse.Namespace) -> Any:
    op = args.op
    if op == "gen-polys":
        if args.n is None:
            raise ParseError("--n is required")
        g = QPolynomial.parse(args.g) if args.g is not None else None
        s, p, i = witt.gen_defining_polys(args.n, g)
        return {
            "kind": "defining-polys",
            "n": args.n,
            "g": str(g if g is not None else QPolynomial.q()),
            "S": s.to_json_terms(),
            "P": p.to_json_terms(),
            "I": i.to_json_terms(),
        }
    if op == "unity":
        return _vector_doc("witt", witt.unity(_context_from(args)))
    if op == "unghost":
        return _vector_doc("witt", witt.unghost(_read_vector(args, GhostVector)))
    a = _read_vector(args, WittVector)
    if op in ("add", "mul"):
        b = _read_vector(args, WittVector, "--in2")
        return _vector_doc("witt", witt.witt_add(a, b) if op == "add" else witt.witt_mul(a, b))
    if op == "neg":
        return _vector_doc("witt", witt.witt_neg(a))
    if op == "ghost":
        return _vector_doc("ghost", witt.ghost(a))
    if op == "transport":
        if args.h is None:
            return _vector_doc("witt", witt.transport_two_minus_g(a))
        return _vector_doc("witt", witt.transport_to_h(a, args.h))
    if op == "induce":
        return _vector_doc("witt", witt.induce(_need(args.r, "--r"), a))
    if op == "restrict":
        r = _need(args.r, "--r")
        return _vector_doc("witt", witt.restrict(r, a, args.n if args.n is not None else a.ctx.trunc // r))
    raise ParseError(f"unknown witt operation {op!r}")


def _cmd_neck(args: argparse.Namespace) -> Any:
    op = args.op
    if op == "mobius":
        n = _need(args.n, "--n")
        if args.g is not None:
            g = QPolynomial.parse(args.g)
            return [str(necklace.mobius_hat(g, k)) for k in range(1, n + 1)]
        return [necklace.mobius(_need(args.m, "--m or --g"), k) for k in range(1, n + 1)]
    if op == "coeff":
        n, i, j = _need(args.n, "--n"), _need(args.i, "--i"), _need(args.j, "--j")
        if n % i or n % j:
            raise ParseError("--i and --j must divide --n")
        if args.g is not None:
            deformation = Deformation.polynomial(args.g)
        else:
            deformation = Deformation.integer(_need(args.m, "--m or --g"))
        value = necklace.struct_const_symbolic(deformation, n, i, j)
        return {"kind": "struct-const", **{k: v for k, v in (("g", args.g), ("m", args.m)) if v is not None}, "n": n, "i": i, "j": j, "value": str(value)}
    if op == "unity":
        return _vector_doc("necklace", necklace.neck_unity(_context_from(args)))
    if op == "eta":
        return _vector_doc("necklace", necklace.eta_inverse(_read_vector(args, GhostVector)))
    a = _read_vector(args, necklace.NecklaceVector)
    if op == "mul":
        return _vector_doc("necklace", necklace.neck_mul(a, _read_vector(args, necklace.NecklaceVector, "--in2")))
    if op == "ghost":
        return _vector_doc("ghost", necklace.neck_ghost(a))
    if op == "induce":
        return _vector_doc("necklace", necklace.neck_induce(_need(args.r, "--r"), a))
    if op == "restrict":
        r = _need(args.r, "--r")
        return _vector_doc("necklace", necklace.neck_restrict(r, a, args.n if args.n is not None else a.ctx.trunc // r))
    if op == "transport":
        return _vector_doc("necklace", necklace.neck_transport_two_minus(a))
    raise ParseError(f"unknown neck operation {op!r}")


def _cmd_series(args: argparse.Namespace) -> Any:
    op = args.op
    if op == "kimlee":
        doc = _load(args.inp, "--in")
        if not isinstance(doc, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in doc):
            raise ParseError("kimlee expects a JSON array of integers")
        trunc = args.trunc if args.trunc is not None else len(doc)
        padded = list(doc) + [0] * max(0, trunc - len(doc))
        return [str(b) for b in lambdaf.kimlee_expand(padded, trunc)]
    if op == "theta":
        return _series_doc(lambdaf.theta(_read_vector(args, WittVector)))
    doc = _load(args.inp, "--in")
    coeffs = doc.get("coeffs") if isinstance(doc, dict) else doc
    if not isinstance(coeffs, list) or not coeffs:
        raise ParseError("expected a list of series coefficients starting with the constant term")
    ctx = _context_from(args, doc if isinstance(doc, dict) else None, trunc=len(coeffs) - 1)
    s = lambdaf.LambdaElement.parse(ctx, coeffs)
    if op == "theta-inv":
        return _vector_doc("witt", lambdaf.theta_inv(s))
    if op == "upsilon":
        return _vector_doc("ghost", lambdaf.upsilon(s))
    raise ParseError(f"unknown series operation {op!r}")


def _cmd_bridge(args: argparse.Namespace) -> Any:
    op = args.op
    if op == "tau":
        return _vector_doc("necklace", bridges.tau(_read_vector(args, WittVector)))
    if op == "tau-inv":
        return _vector_doc("witt", bridges.tau_inv(_read_vector(args, necklace.NecklaceVector)))
    if op == "teich":
        n = _need(args.n, "--n")
        ctx = _context_from(args, trunc=n)
        x = ctx.ring.parse(_load(args.inp, "--in"))
        return {"kind": "teichmuller", "ring": ctx.ring.key, **_deformation_fields(ctx), "x": ctx.ring.format(x),
                "values": [ctx.ring.format(bridges.teich(ctx, x, k)) for k in range(1, n + 1)]}
    raise ParseError(f"unknown bridge operation {op!r}")


def _cmd_symfun(args: argparse.Namespace) -> Any:
    alphabet = symfun.Alphabet(_need(args.vars, "--vars"))
    n = _need(args.n, "--n")
    table = {"u": alphabet.u, "v": alphabet.v, "hq": alphabet.hq, "gq": alphabet.gq, "qn": alphabet.qn}
    value = table[args.op](n)
    return {"kind": "symfun", "basis": args.op, "vars": alphabet.k, "n": n, "terms": value.to_json_terms()}


def _need(value: Any, flag: str) -> Any:
    if value is None:
        raise ParseError(f"{flag} is required for this command")
    return value


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


_GROUPS = {
    "witt": (["add", "mul", "neg", "ghost", "unghost", "unity", "transport", "induce", "restrict", "gen-polys"], _cmd_witt),
    "neck": (["mul", "ghost", "eta", "mobius", "coeff", "induce", "restrict", "unity", "transport"], _cmd_neck),
    "series": (["theta", "theta-inv", "upsilon", "kimlee"], _cmd_series),
    "bridge": (["tau", "tau-inv", "teich"], _cmd_bridge),
    "symfun": (["u", "v", "hq", "gq", "qn"], _cmd_symfun),
}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ring", help="Z, Q, Zq, Qq, Zmod:K, optionally with +trivpsi")
    p.add_argument("--g", help="deformation polynomial in q, e.g. q or 1-2*q")
    p.add_argument("--m", type=int, help="integer deformation")
    p.add_argument("--trunc", type=int, help="truncation level N")
    p.add_argument("--in", dest="inp", help="inline JSON or a path to a JSON file")
    p.add_argument("--in2", help="second operand, same format as --in")
    p.add_argument("--r", type=int, help="induction / restriction index")
    p.add_argument("--h", type=int, choices=(0, 2), help="target constant for transport")
    p.add_argument("--n", type=int)
    p.add_argument("--i", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--vars", type=int, help="alphabet size for symfun")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qwitt", description="q-deformed Witt and necklace rings")
    groups = parser.add_subparsers(dest="group", required=True)
    for name, (ops, handler) in _GROUPS.items():
        gp = groups.add_parser(name)
        sub = gp.add_subparsers(dest="op", required=True)
        for op in ops:
            p = sub.add_parser(op)
            _add_common(p)
            p.set_defaults(handler=handler)
    return parser


def run(argv: Sequence[str] | None = None, out: Any = None) -> int:
    """Execute one command; returns the process exit code."""
    out = out if out is not None else sys.stdout
    args = build_parser().parse_args(argv)
    try:
        result = args.handler(args)
    except QWittError as exc:
        json.dump({"error": exc.name, "detail": str(exc)}, out)
        out.write("\n")
        return exc.exit_code
    except ValueError as exc:
        json.dump({"error": "ParseError", "detail": str(exc)}, out)
        out.write("\n")
        return ParseError.exit_code
    json.dump(result, out)
    out.write("\n")
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
