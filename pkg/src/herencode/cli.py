"""Command-line front end.

Exit codes: 0 success, 2 usage or input error, 3 no labeling scheme available,
4 a proof claim or certificate check failed, 5 the input is outside the class.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional

from . import __version__
from .corpus import enumerate_class, sample_class
from .errors import (ArgumentError, CertificateInvalidError, ClaimViolated, DecodeError, HerencodeError,
                     InvariantError, MalformedWordError, NotBipartiteError, NotInClassError, ParseError,
                     PreconditionMissing, ResourceError, SchemeUnavailableError, UnsupportedPrimeError)
from .formats import FORMATS, detect_format, parse_graph, serialize_graph
from .graph import BipartiteGraph, as_graph, bits_to_list
from .labeling import LabelingScheme, forest_cover_scheme, label_biclique, label_by_degeneracy
from .modular import check_length_accounting, decode_modular, encode_modular
from .recognition import ClassSpec
from .speed import speed_csv, speed_table
from .succinct import decode_functional, encode_functional, from_hex, functional_bound, to_hex
from .witness import (ClassRef, SuccinctPlan, certificate_from_json, certificate_to_json,
                      certificate_to_scheme, class_ids, class_info, find_certificate, verify_certificate)
from .witness.finders import as_bipartite

EXIT_OK, EXIT_USAGE, EXIT_SCHEME, EXIT_CLAIM, EXIT_NOT_IN_CLASS = 0, 2, 3, 4, 5

CLASS_PARAMS = ("p", "s", "k")


class CommandFailed(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise CommandFailed(EXIT_USAGE, f"cannot read {path}: {exc.strerror}") from None


def _load_graph(path: str, fmt: Optional[str]):
    data = _read_input(path)
    return parse_graph(data, fmt or detect_format(data))


def _emit(args, data: bytes | str) -> None:
    if isinstance(data, str):
        data = data.encode()
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _class_ref(args) -> ClassRef:
    if not args.class_id:
        raise CommandFailed(EXIT_USAGE, "--class is required")
    info = class_info(args.class_id)
    params = {k: getattr(args, k) for k in CLASS_PARAMS if k in info.params and getattr(args, k) is not None}
    return ClassRef.make(args.class_id, **params)


def _default_jobs() -> int:
    raw = os.environ.get("HERENCODE_JOBS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _write_manifest(args, outputs: list[str]) -> None:
    if not args.manifest:
        return
    params = {k: v for k, v in sorted(vars(args).items())
              if k not in ("func", "manifest", "command", "input", "out") and v is not None}
    manifest = {
        "command": args.command,
        "inputs": [p for p in (getattr(args, "input", None),) if p],
        "parameters": params,
        "outputs": outputs,
        "seed": getattr(args, "seed", None),
        "version": __version__,
    }
    Path(args.manifest).write_text(_dump(manifest))


def _outputs(args, *extra: str) -> list[str]:
    return ([args.out] if args.out else []) + list(extra)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_encode(args) -> int:
    g = as_graph(_load_graph(args.input, args.format))
    if args.codec == "modular":
        word = encode_modular(g)
        report = check_length_accounting(g)
        stats = {"codec": "modular", **report.to_json()}
        ok = report.ok
        text = word
        if args.verify:
            ok = ok and decode_modular(word) == g
    else:
        c = args.c if args.c is not None else 1
        bits = encode_functional(g, c)
        bound = functional_bound(g.n, c)
        ok = len(bits) <= bound
        stats = {"codec": "functional", "n": g.n, "c": c, "length": len(bits), "bound": bound}
        text = to_hex(bits, g.n, c)
        if args.verify:
            ok = ok and decode_functional(bits, c, g.n) == g
    stats["ok"] = ok
    _emit(args, text + "\n")
    sidecar = (args.out + ".stats.json") if args.out else None
    if sidecar:
        Path(sidecar).write_text(_dump(stats))
    else:
        sys.stderr.write(_dump(stats))
    _write_manifest(args, _outputs(args, *([sidecar] if sidecar else [])))
    return EXIT_OK if ok else EXIT_CLAIM


def cmd_decode(args) -> int:
    text = _read_input(args.input).decode("utf-8", errors="replace").strip()
    if args.codec == "modular":
        g = decode_modular(text)
    else:
        bits, n, c = from_hex(text)
        g = decode_functional(bits, c, n)
    _emit(args, serialize_graph(g, args.format or "edge-list"))
    _write_manifest(args, _outputs(args))
    return EXIT_OK


def _build_scheme(args, g) -> LabelingScheme:
    bip = isinstance(g, BipartiteGraph)
    if args.scheme == "degeneracy":
        return label_by_degeneracy(g, args.d if args.d is not None else 1, bipartite=bip)
    if args.scheme == "forest-cover":
        return forest_cover_scheme(g)
    if args.scheme == "biclique":
        bg = as_bipartite(g)
        missing = [(u, v) for u in bits_to_list(bg.top) for v in bits_to_list(bg.bottom) if not bg.adj(u, v)]
        if missing:
            raise SchemeUnavailableError(f"not complete bipartite: ({missing[0][0]}, {missing[0][1]}) is missing")
        return label_biclique(bg, bg.top)
    ref = _class_ref(args)
    bg = as_bipartite(g)
    cert = find_certificate(bg, ref.class_id, dict(ref.params))
    got = certificate_to_scheme(bg, cert)
    if isinstance(got, SuccinctPlan):
        raise SchemeUnavailableError(f"no explicit labels: {got.reason}")
    return got


def cmd_label(args) -> int:
    g = _load_graph(args.input, args.format)
    scheme = _build_scheme(args, g)
    if args.verify:
        bad = scheme.mismatches(g)
        if bad:
            raise CommandFailed(EXIT_SCHEME, f"labels disagree with the graph on {bad[0]}")
        if not scheme.verify(g):
            raise CommandFailed(EXIT_SCHEME, "label length exceeds the declared bound")
    bundle = scheme.to_json()
    bundle["n"] = as_graph(g).n
    _emit(args, _dump(bundle))
    _write_manifest(args, _outputs(args))
    return EXIT_OK


def cmd_query(args) -> int:
    try:
        bundle = LabelingScheme.from_json(json.loads(_read_input(args.input)))
    except (json.JSONDecodeError, KeyError, TypeError, AttributeError) as exc:
        raise CommandFailed(EXIT_USAGE, f"malformed label bundle: {exc}") from None
    for v in (args.u, args.v):
        if v not in bundle.labels:
            raise CommandFailed(EXIT_USAGE, f"vertex {v} is not in the bundle")
    sys.stdout.write("1\n" if bundle.adjacent(args.u, args.v) else "0\n")
    _write_manifest(args, [])
    return EXIT_OK


def cmd_witness(args) -> int:
    g = _load_graph(args.input, args.format)
    if args.check:
        try:
            cert = certificate_from_json(json.loads(_read_input(args.check)))
        except json.JSONDecodeError as exc:
            raise CommandFailed(EXIT_USAGE, f"malformed certificate: {exc}") from None
        result = verify_certificate(g, cert)
        if not result:
            raise CommandFailed(EXIT_CLAIM, f"certificate rejected: {result.reason}")
        sys.stdout.write("certificate verified\n")
        _write_manifest(args, [])
        return EXIT_OK
    ref = _class_ref(args)
    cert = find_certificate(g, ref.class_id, dict(ref.params))
    result = verify_certificate(g, cert)
    if not result:
        raise CommandFailed(EXIT_CLAIM, f"constructed certificate failed verification: {result.reason}")
    _emit(args, _dump(certificate_to_json(cert)))
    _write_manifest(args, _outputs(args))
    return EXIT_OK


def cmd_count(args) -> int:
    if args.spec:
        try:
            spec = ClassSpec.from_json(_read_input(args.spec).decode())
        except (json.JSONDecodeError, UnicodeDecodeError, KeyError, TypeError, AttributeError) as exc:
            raise CommandFailed(EXIT_USAGE, f"malformed class spec: {exc!r}") from None
        name = spec.name or Path(args.spec).stem
    else:
        ref = _class_ref(args)
        spec, name = ref.spec(), str(ref)
    rows = speed_table(spec, args.n_max, name, jobs=args.jobs or _default_jobs())
    _emit(args, speed_csv(rows))
    _write_manifest(args, _outputs(args))
    return EXIT_OK


def cmd_corpus(args) -> int:
    ref = _class_ref(args)
    spec = ref.spec()
    if args.sample is not None:
        graphs = sample_class(spec, args.sample, args.max_part, seed=args.seed)
    else:
        graphs = enumerate_class(spec, args.max_part, jobs=args.jobs or _default_jobs())
    lines = []
    for g in graphs:
        lines.append(json.dumps({"top": bits_to_list(g.top), "bottom": bits_to_list(g.bottom),
                                 "edges": [list(e) for e in g.graph.edges()]}, separators=(",", ":")))
    _emit(args, "".join(line + "\n" for line in lines))
    _write_manifest(args, _outputs(args))
    return EXIT_OK


def cmd_replay(args) -> int:
    try:
        manifest = json.loads(_read_input(args.input))
        command = manifest["command"]
        params = manifest["parameters"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise CommandFailed(EXIT_USAGE, f"malformed manifest: {exc}") from None
    argv = [command]
    argv += manifest.get("inputs", [])
    if "spec" in params:
        argv.append(str(params.pop("spec")))
    if command == "query":
        argv += [str(params.pop("u")), str(params.pop("v"))]
    for key, val in sorted(params.items()):
        flag = "--" + key.replace("_", "-")
        if key == "class_id":
            flag = "--class"
        if val is True:
            argv.append(flag)
        elif val is not False:
            argv += [flag, str(val)]
    outputs = manifest.get("outputs", [])
    if outputs:
        argv += ["--out", args.out or outputs[0]]
    return main(argv)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_class_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--class", dest="class_id", choices=class_ids(primary_only=True), help="class identifier")
    p.add_argument("--p", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--k", type=int)


def _common(p: argparse.ArgumentParser, with_input: bool = True) -> None:
    if with_input:
        p.add_argument("input", help="input file, or - for stdin")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--manifest", help="also write a run manifest to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="herencode", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"herencode {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="encode a graph with the modular or functional codec")
    _common(p)
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--codec", choices=("modular", "functional"), default="modular")
    p.add_argument("--c", type=int, help="functional codec parameter (default 1)")
    p.add_argument("--verify", action="store_true", help="decode again and compare")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decode a word written by encode")
    _common(p)
    p.add_argument("--format", choices=FORMATS, help="output graph format (default edge-list)")
    p.add_argument("--codec", choices=("modular", "functional"), default="modular")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("label", help="build an adjacency labeling bundle")
    _common(p)
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--scheme", choices=("degeneracy", "forest-cover", "biclique", "certificate"),
                   default="degeneracy")
    p.add_argument("--d", type=int, help="degeneracy bound (default 1)")
    _add_class_flags(p)
    p.add_argument("--verify", action="store_true", help="check every vertex pair")
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("query", help="adjacency of two vertices from their labels")
    p.add_argument("input", help="label bundle")
    p.add_argument("u", type=int)
    p.add_argument("v", type=int)
    p.add_argument("--manifest", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_query, out=None)

    p = sub.add_parser("witness", help="find and verify a structural certificate")
    _common(p)
    p.add_argument("--format", choices=FORMATS)
    _add_class_flags(p)
    p.add_argument("--check", help="verify this certificate file instead of searching")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("count", help="labelled speed table as CSV")
    _common(p, with_input=False)
    p.add_argument("spec", nargs="?", help="class spec JSON file")
    _add_class_flags(p)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--jobs", type=int)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("corpus", help="exhaustive or sampled in-class bipartite graphs (JSON lines)")
    _common(p, with_input=False)
    _add_class_flags(p)
    p.add_argument("--max-part", type=int, default=4)
    p.add_argument("--sample", type=int, help="draw this many random graphs instead of enumerating")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int)
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("replay", help="rerun the command recorded in a manifest")
    p.add_argument("input", help="manifest file")
    p.add_argument("--out", help="override the recorded output path")
    p.set_defaults(func=cmd_replay)
    return parser


_USAGE_ERRORS = (ArgumentError, ParseError, InvariantError, DecodeError, MalformedWordError, ResourceError)


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CommandFailed as exc:
        code, msg = exc.code, str(exc)
    except ClaimViolated as exc:
        code, msg = EXIT_CLAIM, str(exc)
    except CertificateInvalidError as exc:
        code, msg = EXIT_CLAIM, f"certificate invalid: {exc}"
    except (NotInClassError, NotBipartiteError) as exc:
        code, msg = EXIT_NOT_IN_CLASS, f"not in class: {exc}"
    except (SchemeUnavailableError, UnsupportedPrimeError, PreconditionMissing) as exc:
        code, msg = EXIT_SCHEME, f"scheme unavailable: {exc}"
    except _USAGE_ERRORS as exc:
        code, msg = EXIT_USAGE, f"error: {exc}"
    except HerencodeError as exc:
        code, msg = EXIT_USAGE, f"error: {exc}"
    sys.stderr.write(f"herencode: {msg}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
