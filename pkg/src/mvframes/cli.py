"""Command-line front end.

Every command reads JSON input files, prints a JSON report (UTF-8, keys
sorted, fractions as reduced "a/b" strings) and exits with

    0  ok
    1  a property check failed
    2  malformed or unsupported input
    3  a resource bound was exceeded
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import frames, lgroups, morphisms, nuclei, rings
from .core import (
    DEFAULT_BOUND, Element, Signature, element_from_json, element_to_json,
    enumerate_carrier, signature_from_json, signature_to_json,
)
from .errors import CarrierTooLarge, InfiniteCarrier, MalformedInput, MVFrameError, PreconditionFailed

EXIT_OK, EXIT_PROPERTY, EXIT_INPUT, EXIT_BOUND = 0, 1, 2, 3
HASSE_LIMIT = 200


@dataclass
class Config:
    seed: int = 0
    bound: int = DEFAULT_BOUND
    witness_prefix: int = frames.WITNESS_PREFIX
    compact_json: bool = False
    out: str | None = None

    def __post_init__(self):
        if self.bound < 1 or self.witness_prefix < 1 or self.seed < 0:
            raise ValueError("--bound and --witness-prefix must be positive, --seed non-negative")


@dataclass
class Workspace:
    """Loaded objects keyed by kind and name, plus the run configuration."""

    config: Config
    objects: dict = field(default_factory=dict)

    def rng(self) -> random.Random:
        return random.Random(self.config.seed)

    def add(self, kind: str, name: str, obj):
        slot = self.objects.setdefault(kind, {})
        if name in slot:
            raise MVFrameError(f"duplicate {kind} name {name!r}")
        slot[name] = obj
        return obj

    def load_json(self, path: str):
        try:
            return json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise MalformedInput(f"cannot read {path}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc

    def signature(self, path: str) -> Signature:
        obj = self.load_json(path)
        if isinstance(obj, dict) and "signature" in obj:
            obj = obj["signature"]
        return self.add("signature", path, signature_from_json(obj))


# ---------------------------------------------------------------------------
# Commands: each returns (exit code, report)
# ---------------------------------------------------------------------------

def cmd_classify(ws: Workspace, args):
    sig = ws.signature(args.spec)
    report = frames.classify(sig).to_json()
    report["signature"] = str(sig)
    return EXIT_OK, report


def cmd_compact(ws: Workspace, args):
    sig = ws.signature(args.spec)
    x = element_from_json(sig, ws.load_json(args.element))
    verdict = frames.is_compact(x)
    report = verdict.to_json()
    report["element"] = element_to_json(x)
    code = EXIT_OK
    if verdict.witness is not None:
        check = frames.verify_witness(verdict.witness, ws.config.witness_prefix)
        report["witnessCheck"] = {"ok": check.ok, "checkedTerms": check.checked_terms,
                                  "failures": list(check.failures)}
        code = EXIT_OK if check.ok else EXIT_PROPERTY
    return code, report


def _nucleus_arg(ws: Workspace, sig: Signature, text: str):
    path = Path(text)
    if path.suffix == ".json" or path.exists():
        return nuclei.nucleus_from_json(sig, ws.load_json(text))
    name, _, rest = text.partition(":")
    params = dict(kv.split("=", 1) for kv in rest.split(",") if kv) if rest else {}
    return nuclei.builtin_nucleus(name, sig, **params)


def cmd_nucleus(ws: Workspace, args):
    sig = ws.signature(args.spec)
    j = ws.add("nucleus", args.nucleus, _nucleus_arg(ws, sig, args.nucleus))
    cls = nuclei.classify_nucleus(j, ws.rng(), bound=ws.config.bound)
    report = cls.to_json()
    report["nucleus"] = j.name
    report["signature"] = str(sig)
    if args.algebra:
        try:
            report["nuclearAlgebra"] = nuclei.nuclear_as_algebra(j, cls, ws.rng()).to_json()
        except PreconditionFailed as exc:
            report["nuclearAlgebra"] = {"error": str(exc), "failed": list(exc.failed)}
    return (EXIT_OK if cls.is_nucleus else EXIT_PROPERTY), report


def cmd_ring(ws: Workspace, args):
    R = ws.add("ring", args.ring, rings.ring_from_json(ws.load_json(args.ring)))
    lat = rings.ideal_lattice(R, ws.config.bound)
    report = {"ring": str(R), "signature": str(lat.sig)}
    ok = True
    if args.mv_check:
        checks = rings.mv_check(R, ws.config.bound)
        report["mvCheck"] = checks
        ok = all(v is not False for v in checks.values())
    if args.radical:
        rows = rings.radical_table(R, ws.config.bound)
        report["radical"] = [{"ideal": str(I), "radical": str(r), "value": str(x), "radicalValue": str(rx)}
                             for I, r, x, rx in rows]
        rep = rings.radical_nucleus_report(R, ws.config.bound)
        report["nucleus"] = rep.to_json()
        ok = ok and rep.ok
    return (EXIT_OK if ok else EXIT_PROPERTY), report


def cmd_gamma(ws: Workspace, args):
    obj = ws.load_json(args.path)
    L = ws.add("lu-signature", args.path, lgroups.lu_signature_from_json(obj))
    G = lgroups.gamma(L)
    checks = G.verify(ws.rng())
    return (EXIT_OK if all(v is not False for v in checks.values()) else EXIT_PROPERTY), {
        "group": str(L), "signature": signature_to_json(G.sig), "str": str(G.sig), "checks": checks}


def cmd_phi(ws: Workspace, args):
    sig = ws.signature(args.path)
    L = lgroups.phi(sig)
    roundtrip = lgroups.gamma(L).sig == sig
    return (EXIT_OK if roundtrip else EXIT_PROPERTY), {
        "signature": str(sig), "group": lgroups.lu_signature_to_json(L), "str": str(L), "roundTrip": roundtrip}


def cmd_hom(ws: Workspace, args):
    phi = ws.add("hom", args.path, morphisms.hom_from_json(ws.load_json(args.path)))
    report = morphisms.coherence_equivalence(phi).to_json()
    return (EXIT_OK if report["equivalent"] else EXIT_PROPERTY), report


def hasse_dot(sig: Signature, bound: int = HASSE_LIMIT) -> str:
    size = sig.carrier_size()
    if size is None:
        raise InfiniteCarrier(f"{sig} is not enumerable")
    if size > bound:
        raise CarrierTooLarge(f"{sig} has {size} elements; the diagram limit is {bound}")
    elems = list(enumerate_carrier(sig, bound))
    ids = {x: f"n{k}" for k, x in enumerate(elems)}
    lines = ["digraph hasse {", "  rankdir=BT;", "  node [shape=plaintext];"]
    lines += [f'  {ids[x]} [label="{x}"];' for x in elems]
    for x in elems:
        for y in upper_covers(x):
            lines.append(f"  {ids[x]} -> {ids[y]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def upper_covers(x: Element) -> list:
    """Raise one coordinate by one chain step."""
    out = []
    for b, i in x.sig.coordinates():
        step = x.sig.kind_at(b).successor(x[(b, i)])
        if step is not None:
            out.append(Element.build(x.sig, exceptions={**{c: x[c] for c in x.sig.coordinates()}, (b, i): step}))
    return out


def cmd_hasse(ws: Workspace, args):
    sig = ws.signature(args.spec)
    limit = min(HASSE_LIMIT, ws.config.bound)
    if any(not blk.kind.is_finite for blk in sig.blocks):
        raise InfiniteCarrier(f"{sig} has a unit-interval factor")
    return EXIT_OK, hasse_dot(sig, limit)


# ---------------------------------------------------------------------------
# Argument parsing and dispatch
# ---------------------------------------------------------------------------

def _common(defaults: bool) -> argparse.ArgumentParser:
    # defaults only on the top-level parser, so a flag given before the
    # command is not reset by the subparser
    sup = None if defaults else argparse.SUPPRESS
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0 if defaults else sup, help="random seed for sampled checks")
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND if defaults else sup, help="enumeration bound")
    p.add_argument("--witness-prefix", type=int, default=frames.WITNESS_PREFIX if defaults else sup,
                   help="number of witness terms to verify")
    p.add_argument("--json", action="store_true", default=False if defaults else sup,
                   help="single-line canonical JSON")
    p.add_argument("--out", default=None if defaults else sup, help="write output to this file")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mvframes", parents=[_common(True)],
                                     description="Frame-theoretic checks for products of MV-chains.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common(False)

    p = sub.add_parser("classify", parents=[common], help="algebraic / coherent / regular flags")
    p.add_argument("spec")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("compact", parents=[common], help="compactness verdict with witness")
    p.add_argument("spec")
    p.add_argument("element")
    p.set_defaults(func=cmd_compact)

    p = sub.add_parser("nucleus", parents=[common], help="classify a nucleus")
    p.add_argument("spec")
    p.add_argument("nucleus", help="builtin name (e.g. ceiling, threshold:t0=1/2) or a JSON file")
    p.add_argument("--algebra", action="store_true", help="also build the nuclear algebra")
    p.set_defaults(func=cmd_nucleus)

    p = sub.add_parser("ring", parents=[common], help="ideal lattice of a finite ring")
    p.add_argument("ring")
    p.add_argument("--radical", action="store_true", help="radical table and nucleus report")
    p.add_argument("--mv-check", action="store_true", help="ring-side MV operations against the chains")
    p.set_defaults(func=cmd_ring)

    p = sub.add_parser("gamma", parents=[common], help="unit interval of an lu-group")
    p.add_argument("path")
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("phi", parents=[common], help="lu-group of a chain product")
    p.add_argument("path")
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser("hom", parents=[common], help="coherence and maximal-compact preservation of a hom")
    p.add_argument("path")
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("hasse", parents=[common], help="DOT Hasse diagram (at most 200 elements)")
    p.add_argument("spec")
    p.set_defaults(func=cmd_hasse)
    return parser


def render(report, compact: bool) -> str:
    if isinstance(report, str):
        return report
    if compact:
        return json.dumps(report, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.buffer.write(text.encode("utf-8"))
        sys.stdout.flush()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        config = Config(args.seed, args.bound, args.witness_prefix, args.json, args.out)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    ws = Workspace(config)
    try:
        code, report = args.func(ws, args)
    except (CarrierTooLarge, InfiniteCarrier) as exc:
        print(f"bound exceeded: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (MVFrameError, ValueError, ZeroDivisionError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(render(report, config.compact_json), config.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
