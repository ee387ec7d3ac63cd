"""``wci`` command line: ring info, chi sets, indices, suites and the census.

Exit status: 0 on success, 1 when a property violation was found, 2 on
invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from pathlib import Path

from . import index as ix
from .constructors import DEFAULT_SIZE_CAP, SymbolicTriangularRing, build
from .errors import InputError, RingError
from .ring import (
    center,
    idempotents,
    is_abelian,
    is_local,
    jacobson_radical,
    nilpotents,
    units,
)
from .verifier import DEFAULT_SEED, SUITES, default_catalog, load_catalog, run_suite, search_max_win

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


def _parse_json(text: str, source: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(
            f"invalid JSON in {source} at line {exc.lineno} column {exc.colno} (char {exc.pos}): {exc.msg}"
        ) from None


def _load_spec(args):
    if args.spec is not None and args.spec_file is not None:
        raise InputError("give either --spec or --spec-file, not both")
    if args.spec is None and args.spec_file is None:
        raise InputError("a ring spec is required (--spec JSON, --spec-file PATH, or --spec -)")
    if args.spec_file is not None:
        if args.spec_file == "-":
            return _parse_json(sys.stdin.read(), "stdin")
        try:
            text = Path(args.spec_file).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {args.spec_file}: {exc.strerror}") from None
        return _parse_json(text, args.spec_file)
    if args.spec == "-":
        return _parse_json(sys.stdin.read(), "stdin")
    return _parse_json(args.spec, "--spec")


def _ring(args):
    return build(_load_spec(args), size_cap=args.size_cap)


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "item"):
        return value.item()
    return value


def cmd_info(args):
    ring = _ring(args)
    if isinstance(ring, SymbolicTriangularRing):
        data = {
            "ring": ring.name,
            "order": None,
            "one": list(ring.one),
            "idempotents": [list(e) for e in ring.idempotents()],
            "units": "(a, w, b) with a, b in {1, -1}",
            "module_order": ring.module_order,
        }
        return data, [data], EXIT_OK
    data = {"ring": ring.name, "order": ring.order, "unital": ring.unital, "one": ring.one}
    data["idempotents"] = list(idempotents(ring))
    data["nilpotents"] = list(nilpotents(ring))
    data["center"] = list(center(ring))
    data["abelian"] = is_abelian(ring)
    if ring.unital:
        data["units"] = list(units(ring))
        data["jacobson_radical"] = list(jacobson_radical(ring))
        data["local"] = is_local(ring)
    if ring.codec is not None:
        data["labels"] = {str(x): ring.label(x) for x in range(ring.order)}
    return data, [data], EXIT_OK


def _parse_element(ring, text: str):
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        raise InputError(f"--element must be an index or a JSON value, got {text!r}") from None
    if isinstance(ring, SymbolicTriangularRing):
        return ring.element(value)
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    return ring.encode(value)


def cmd_chi(args):
    ring = _ring(args)
    if args.element is None:
        raise InputError("chi needs --element")
    a = _parse_element(ring, args.element)
    report = ix.chi(ring, a, clean=args.clean)
    data = report.to_dict()
    data["ring"] = ring.name
    data["variant"] = "clean" if args.clean else "weak"
    if not isinstance(ring, SymbolicTriangularRing):
        data["labels"] = {str(m): ring.label(m) for m in report.members}
    rows = [
        {"ring": ring.name, "element": data["element"], "idempotent": w["idempotent"], "unit": w["unit"]}
        for w in data["witnesses"]
    ]
    return data, rows, EXIT_OK


def cmd_index(args):
    ring = _ring(args)
    if isinstance(ring, SymbolicTriangularRing):
        raise InputError("the weak clean index is only computed for finite rings")
    win, argmax = ix.index_argmax(ring, jobs=args.jobs)
    clean, clean_argmax = ix.index_argmax(ring, clean=True, jobs=args.jobs)
    data = {
        "ring": ring.name,
        "order": ring.order,
        "win": win,
        "in": clean,
        "argmax": argmax,
        "in_argmax": clean_argmax,
        "argmax_label": ring.label(argmax),
    }
    return data, [data], EXIT_OK


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("WCI_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"WCI_SEED must be an integer, got {env!r}") from None
    return DEFAULT_SEED


def _catalog(args):
    return load_catalog(args.catalog) if args.catalog else default_catalog()


def cmd_verify(args):
    report = run_suite(
        args.suite,
        _catalog(args),
        seed=_seed(args),
        samples=args.samples,
        window=args.window,
        size_cap=args.size_cap,
    )
    data = report.to_dict(timing=args.timing)
    rows = [
        {**{k: v for k, v in r.items() if k != "witness"}, "witness": json.dumps(_jsonable(r["witness"]), sort_keys=True)}
        for r in data["results"]
    ]
    return data, rows, EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_search(args):
    started = time.perf_counter()
    census = search_max_win(_catalog(args), jobs=args.jobs, size_cap=args.size_cap)
    if args.timing:
        census["elapsed_ms"] = int((time.perf_counter() - started) * 1000)
    code = EXIT_VIOLATION if census["win3_finite"] or census["unclassified"] else EXIT_OK
    return census, census["rows"], code


def cmd_catalog(args):
    entries = _catalog(args)
    data = {"catalog": [{"name": e.name, "spec": e.spec} for e in entries]}
    rows = [{"name": e.name, "spec": json.dumps(e.spec, sort_keys=True)} for e in entries]
    return data, rows, EXIT_OK


def _emit(data, rows, fmt: str, stream) -> None:
    if fmt == "csv":
        rows = [_jsonable(r) for r in rows]
        columns = list(dict.fromkeys(k for r in rows for k in r))
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: v if isinstance(v, (str, int, float, bool)) or v is None else json.dumps(v, sort_keys=True)
                             for k, v in r.items()})
        stream.write(buf.getvalue())
    else:
        stream.write(json.dumps(_jsonable(data), sort_keys=True, indent=2) + "\n")
    stream.flush()


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--json", dest="format", action="store_const", const="json", help="same as --format json")
    common.add_argument("--size-cap", type=int, default=DEFAULT_SIZE_CAP, help="largest ring order to construct")
    common.add_argument("--timing", action="store_true", help="include elapsed time in the output")
    common.add_argument("--jobs", type=int, default=1, help="worker threads for element scans")

    spec_opts = argparse.ArgumentParser(add_help=False)
    spec_opts.add_argument("--spec", help="RingSpec as inline JSON, or - for stdin")
    spec_opts.add_argument("--spec-file", help="file holding a RingSpec, or - for stdin")

    catalog_opts = argparse.ArgumentParser(add_help=False)
    catalog_opts.add_argument("--catalog", help="catalog JSON file (default: bundled catalog)")

    parser = argparse.ArgumentParser(prog="wci", description="Weak clean index of finite rings.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("info", parents=[common, spec_opts], help="structural summary of a ring")
    p.set_defaults(run=cmd_info)
    p = sub.add_parser("chi", parents=[common, spec_opts], help="chi set of one element")
    p.add_argument("--element", help="element index, or JSON value in the ring's label form")
    p.add_argument("--clean", action="store_true", help="clean variant (only a-e counts)")
    p.set_defaults(run=cmd_chi)
    p = sub.add_parser("index", parents=[common, spec_opts], help="weak clean and clean index")
    p.set_defaults(run=cmd_index)
    p = sub.add_parser("verify", parents=[common, catalog_opts], help="run a property suite")
    p.add_argument("--suite", default="all", help=f"one of {', '.join(SUITES)}, or all")
    p.add_argument("--seed", type=int, default=None, help="sampling seed (default: $WCI_SEED or built-in)")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--window", type=int, default=50)
    p.set_defaults(run=cmd_verify)
    p = sub.add_parser("search", parents=[common, catalog_opts], help="census of weak clean indices")
    p.set_defaults(run=cmd_search)
    p = sub.add_parser("catalog", parents=[common, catalog_opts], help="list catalog specs")
    p.set_defaults(run=cmd_catalog)
    return parser


def main(argv: list[str] | None = None, *, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        data, rows, code = args.run(args)
    except (RingError, ValueError) as exc:
        stderr.write(f"wci: error: {exc}\n")
        return EXIT_INPUT
    _emit(data, rows, args.format, stdout)
    return code


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
