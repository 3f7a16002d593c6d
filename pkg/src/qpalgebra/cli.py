"""Command-line front end.

Subcommands: build-sphere, build-fig5, derive, dim, mutate, analyze,
verify-lemmas, verify-bound.  Exit codes: 0 success (including a
FiniteDimensional verdict), 3 inconclusive verdict or failed verification
(not an error), 4 cap exceeded, 2 bad input, 1 unexpected failure.  All
randomness sits behind the recorded seed; reports embed the configuration,
package version, and timing.  The QP_THREADS environment variable is
accepted and recorded for forward compatibility; the engine currently
executes single-threaded regardless of its value.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field as dc_field
from typing import Optional

from . import __version__
from .algebra import AlgebraError
from .cyclic import (
    AnalysisError,
    arrow_sequence_search,
    theorem_condition_check,
)
from .fields import RATIONALS, PrimeField
from .io import (
    FormatError,
    canonical_dumps,
    element_to_list,
    qp_from_dict,
    qp_to_dict,
    quiver_doc_to_dict,
    load_quiver_doc,
)
from .jacobian import CapExceeded, DEFAULT_ROW_CAP, finite_dim_certificate, jacobian_relations
from .mutation import MutationError, mutate
from .qp import PunctureScalars, ScalarError
from .quiver import QuiverError, chordless_cycles, is_cyclically_oriented
from .sphere import fig5_quiver, sphere_qp, verify_lemma_identities, verify_length_bound

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3
EXIT_CAP = 4


@dataclass
class RunConfig:
    command: str
    args: dict
    seed: int = 0
    threads: int = 1
    version: str = dc_field(default=__version__)

    def to_json_dict(self) -> dict:
        return {
            "command": self.command,
            "args": self.args,
            "seed": self.seed,
            "threads": self.threads,
            "version": self.version,
        }


def _threads_from_env() -> int:
    raw = os.environ.get("QP_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise ScalarError(f"QP_THREADS must be an integer, got {raw!r}")
    if value < 1:
        raise ScalarError("QP_THREADS must be >= 1")
    return value


def _field_from_args(args) -> object:
    if args.field == "Q":
        return RATIONALS
    return PrimeField(args.prime)


def _scalars_from_args(args, count: int, field) -> PunctureScalars:
    if args.scalars == "ones":
        return PunctureScalars.ones(count, field)
    return PunctureScalars.random(count, args.seed, field)


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise FormatError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise FormatError(
            f"malformed JSON in {path} at line {exc.lineno} column {exc.colno}: {exc.msg}"
        )


def _emit(doc: dict, out_path: Optional[str]) -> None:
    text = canonical_dumps(doc)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report(config: RunConfig, started: float, payload: dict) -> dict:
    return {
        "config": config.to_json_dict(),
        "timing_seconds": round(time.time() - started, 6),
        **payload,
    }


def cmd_build_sphere(args, config: RunConfig) -> int:
    n = args.punctures - 2
    if n < 3:
        raise ScalarError("need at least 5 punctures (n >= 3)")
    field = _field_from_args(args)
    scalars = _scalars_from_args(args, n + 2, field)
    D = args.max_degree if args.max_degree is not None else 2 * n + 4
    sqp = sphere_qp(n, scalars, D, field)
    meta = {"command": "build-sphere", "punctures": args.punctures, "seed": args.seed,
            "scalars_mode": args.scalars, "version": __version__}
    _emit(qp_to_dict(sqp.qp, meta=meta), args.out)
    return EXIT_OK


def cmd_build_fig5(args, config: RunConfig) -> int:
    meta = {"command": "build-fig5", "seed": args.seed, "version": __version__}
    _emit(quiver_doc_to_dict(fig5_quiver(), meta=meta), args.out)
    return EXIT_OK


def cmd_derive(args, config: RunConfig) -> int:
    started = time.time()
    qp = qp_from_dict(_load_json(args.infile), args.max_degree)
    rels = jacobian_relations(qp)
    payload = {
        "relations": {aid: element_to_list(e) for aid, e in rels.relations},
    }
    _emit(_report(config, started, payload), args.out)
    return EXIT_OK


def cmd_dim(args, config: RunConfig) -> int:
    started = time.time()
    qp = qp_from_dict(_load_json(args.infile), args.max_degree)
    cert = finite_dim_certificate(qp, row_cap=args.row_cap)
    _emit(_report(config, started, {"certificate": cert.to_json_dict()}), args.out)
    return EXIT_OK if cert.is_finite() else EXIT_INCONCLUSIVE


def cmd_mutate(args, config: RunConfig) -> int:
    started = time.time()
    qp = qp_from_dict(_load_json(args.infile), args.max_degree)
    vertex = args.vertex
    if vertex not in set(qp.quiver.vertices):
        # vertex ids may be ints in the document
        try:
            vertex = int(args.vertex)
        except ValueError:
            pass
    result = mutate(qp, vertex)
    payload = {
        "premutated": qp_to_dict(result.premutated, meta={}),
        "reduced": qp_to_dict(result.reduced, meta={}),
        "removed_pairs": [list(p) for p in result.removed_pairs],
        "substitutions": {aid: element_to_list(e) for aid, e in result.substitutions},
    }
    _emit(_report(config, started, payload), args.out)
    return EXIT_OK


def cmd_analyze(args, config: RunConfig) -> int:
    started = time.time()
    quiver = load_quiver_doc(_load_json(args.infile))
    payload: dict = {}
    if args.chordless:
        cycles = chordless_cycles(quiver, args.cycle_bound)
        payload["chordless_cycles"] = [
            {"arrows": list(c.arrows), "forwards": list(c.forwards), "oriented": c.oriented}
            for c in cycles
        ]
        try:
            ok, witness = is_cyclically_oriented(quiver)
            payload["cyclically_oriented"] = ok
            payload["orientation_witness"] = list(witness.arrows) if witness else None
        except QuiverError as exc:
            payload["cyclically_oriented"] = None
            payload["orientation_note"] = str(exc)
    if args.condition_check:
        payload["condition_report"] = theorem_condition_check(quiver, args.cycle_bound).to_json_dict()
    if args.sequence_from:
        seq = arrow_sequence_search(quiver, args.sequence_from, step_cap=args.step_cap)
        payload["arrow_sequence"] = seq.to_json_dict()
    _emit(_report(config, started, payload), args.out)
    return EXIT_OK


def cmd_verify_lemmas(args, config: RunConfig) -> int:
    started = time.time()
    n = args.punctures - 2
    field = _field_from_args(args)
    scalars = _scalars_from_args(args, n + 2, field)
    report = verify_lemma_identities(n, scalars, args.max_degree, field)
    _emit(_report(config, started, {"lemma_report": report.to_json_dict()}), args.out)
    return EXIT_OK if report.all_identities_hold else EXIT_INCONCLUSIVE


def cmd_verify_bound(args, config: RunConfig) -> int:
    started = time.time()
    n = args.punctures - 2
    field = _field_from_args(args)
    scalars = _scalars_from_args(args, n + 2, field)
    D = args.max_degree if args.max_degree is not None else 2 * n + 4
    ok = verify_length_bound(n, D, scalars, field)
    payload = {"length_bound": {"n": n, "length": 2 * n + 2, "D": D, "holds": ok}}
    _emit(_report(config, started, payload), args.out)
    return EXIT_OK if ok else EXIT_INCONCLUSIVE


def _add_common(p: argparse.ArgumentParser, needs_field: bool = False) -> None:
    p.add_argument("--out", help="write the JSON result here instead of stdout")
    p.add_argument("--seed", type=int, default=0, help="seed for any randomness (recorded)")
    if needs_field:
        p.add_argument("--field", choices=["Q", "Fp"], default="Q")
        p.add_argument("--prime", type=int, default=32003, help="p for --field Fp")
        p.add_argument("--scalars", choices=["ones", "random"], default="ones")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qp",
        description="Exact computations with quivers with potentials: "
        "Jacobian ideals, dimension certificates, and mutation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-sphere", help="build the punctured-sphere QP")
    p.add_argument("--punctures", type=int, required=True, help="number of punctures (>= 5)")
    p.add_argument("--max-degree", type=int, default=None, help="truncation degree (default 2n+4)")
    _add_common(p, needs_field=True)
    p.set_defaults(func=cmd_build_sphere)

    p = sub.add_parser("build-fig5", help="build the 4-punctured-sphere quiver")
    _add_common(p)
    p.set_defaults(func=cmd_build_fig5)

    p = sub.add_parser("derive", help="print all cyclic derivatives of a QP")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--max-degree", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("dim", help="finite-dimensionality certificate")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--row-cap", type=int, default=DEFAULT_ROW_CAP)
    _add_common(p)
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("mutate", help="QP mutation at a vertex")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--vertex", required=True)
    p.add_argument("--max-degree", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("analyze", help="chordless cycles, orientation, sequence search")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--chordless", action="store_true")
    p.add_argument("--condition-check", action="store_true")
    p.add_argument("--sequence-from", default=None, metavar="ARROW")
    p.add_argument("--cycle-bound", type=int, default=None)
    p.add_argument("--step-cap", type=int, default=10_000)
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify-lemmas", help="run the sphere identity suite")
    p.add_argument("--punctures", type=int, required=True)
    p.add_argument("--max-degree", type=int, default=8)
    _add_common(p, needs_field=True)
    p.set_defaults(func=cmd_verify_lemmas)

    p = sub.add_parser("verify-bound", help="check the nilpotency length bound 2n+2")
    p.add_argument("--punctures", type=int, required=True)
    p.add_argument("--max-degree", type=int, default=None)
    _add_common(p, needs_field=True)
    p.set_defaults(func=cmd_verify_bound)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig(
            command=args.command,
            args={k: v for k, v in vars(args).items() if k != "func" and v is not None},
            seed=getattr(args, "seed", 0),
            threads=_threads_from_env(),
        )
        return args.func(args, config)
    except CapExceeded as exc:
        print(f"qp: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (FormatError, QuiverError, AlgebraError, MutationError, AnalysisError, ScalarError) as exc:
        print(f"qp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover - unexpected
        print(f"qp: internal error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
