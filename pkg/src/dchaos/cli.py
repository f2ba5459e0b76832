"""Command line front end.

Exit status: 0 when the analysis ran (and a certificate, if any, passed),
1 when a certificate failed verification, 2 on input errors. Input errors
are reported on stderr as a JSON object with a pointer to the offending
field when schema validation caught them.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import jsonschema

from . import schemas
from .chaos import certificate_from_json, example_certificate, verify_certificate
from .density import IndexSet, density_profile, merge_density_one
from .errors import DChaosError
from .mobius import MobiusMap, ddc_verdict
from .shifts import EXACT_MAX, ShiftOperator, SimpleFunction, count_at_least, ratio_sequence, vanishing_values
from .weights import BACKWARD, FORWARD, WeightSequence, weight_from_json

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    def __init__(self, message: str, pointer: str | None = None):
        super().__init__(message)
        self.pointer = pointer


# ---------------------------------------------------------------- output


def _fmt_value(x) -> str:
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".12g")


def _json_value(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return x
    return float(x)


def emit_curve(series: Sequence[tuple[int, object]], fmt: str = "csv", destination=None, header=("n", "value")) -> str:
    """Write ``(n, value)`` rows as CSV or JSON; returns the text written.

    CSV renders values to 12 significant digits; JSON renders Fractions
    exactly as ``"p/q"``.
    """
    rows = list(series)
    if not rows:
        raise ValueError("series is empty")
    ns = [int(n) for n, _ in rows]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("first components must be strictly increasing")
    if fmt == "csv":
        text = ",".join(header) + "\n" + "".join(f"{n},{_fmt_value(x)}\n" for n, x in rows)
    elif fmt == "json":
        text = _dumps([[n, _json_value(x)] for n, x in rows])
    else:
        raise ValueError(f"unknown format {fmt!r}")
    _write(text, destination)
    return text


def _dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _write(text: str, destination) -> None:
    if destination is None or destination == "-":
        sys.stdout.write(text)
        return
    if hasattr(destination, "write"):
        destination.write(text)
        return
    try:
        Path(destination).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write {destination}: {exc.strerror}") from exc


# ---------------------------------------------------------------- input


def _load(path: str, schema: dict, what: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {what} file {path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    validate(doc, schema, what)
    return doc


def validate(doc, schema: dict, what: str) -> None:
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        pointer = "/" + "/".join(str(p) for p in err.absolute_path)
        raise InputError(f"{what}: {err.message}", pointer)


def _weights(path: str) -> WeightSequence:
    doc = _load(path, schemas.WEIGHT, "weights")
    try:
        return weight_from_json(doc)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"weights: {exc}", "/generator") from exc


# ---------------------------------------------------------------- commands


def cmd_density(args) -> int:
    if args.merge:
        if not args.weights:
            raise InputError("--merge needs --weights")
        v = _weights(args.weights)
        op = ShiftOperator(args.kind, v)
        vals = vanishing_values(op, args.n_max)
        res = merge_density_one([lambda n: vals[n - 1]], args.n_max, strategy=args.strategy)
        doc = {
            "achieved_k": res.achieved_k,
            "failure": res.failure,
            "set": res.index_set.to_json(args.n_max),
            "blocks": [
                {"k": b.k, "M": b.M, "card": b.card, "required": b.required, "conditions_hold": b.conditions_hold}
                for b in res.blocks
            ],
            "finite_horizon": True,
        }
        _write(_dumps(doc), args.output)
        return EXIT_OK
    if not args.input:
        raise InputError("density needs --input or --merge")
    doc = _load(args.input, schemas.DENSITY, "density request")
    A = IndexSet.from_intervals(doc["set"]) if "set" in doc else IndexSet.explicit(doc["explicit"])
    try:
        prof = density_profile(A, doc["horizons"])
    except ValueError as exc:
        raise InputError(str(exc), "/horizons") from exc
    if args.format == "csv":
        emit_curve(list(zip(prof.horizons, prof.ratios)), "csv", args.output, ("N", "ratio"))
    else:
        _write(_dumps(prof.to_json()), args.output)
    return EXIT_OK


def cmd_shift_verify(args) -> int:
    doc = _load(args.input, schemas.SHIFT_VERIFY, "shift request")
    v = weight_from_json(doc["weights"])
    kind = doc.get("kind", BACKWARD)
    try:
        f = SimpleFunction.from_json(doc["function"])
    except ValueError as exc:
        raise InputError(str(exc), "/function") from exc
    op = ShiftOperator(kind, v)
    N = doc["N"]
    rs = ratio_sequence(op, f.support, list(f.coeffs.values()), N, args.backend, args.exact_max)
    series = list(zip(range(1, N + 1), rs))
    if args.format == "csv":
        emit_curve(series, "csv", args.output, ("n", "ratio"))
        return EXIT_OK
    out = {"kind": kind, "side": v.side, "N": N, "ratios": [[n, _json_value(x)] for n, x in series]}
    if "k" in doc:
        tc = count_at_least(op, f.support, list(f.coeffs.values()), N, doc["k"], args.backend, args.exact_max)
        out["count_at_least_k"] = {"k": doc["k"], "count": tc.count, "backend": tc.backend, "near_ties": tc.near_ties}
    _write(_dumps(out), args.output)
    return EXIT_OK


def cmd_shift_example(args) -> int:
    ks = list(range(args.k_min, args.k_max + 1))
    try:
        cert = example_certificate(ks, "exact" if args.backend == "exact" else "float")
    except ValueError as exc:
        raise InputError(str(exc), None) from exc
    v = WeightSequence.harmonic()
    if args.curve is not None:
        blk = next((b for b in cert.blocks if b.k == args.curve), None)
        if blk is None:
            raise InputError(f"--curve {args.curve} is not among the generated blocks")
        rs = ratio_sequence(ShiftOperator(BACKWARD, v), blk.S, blk.C, blk.N, args.backend, args.exact_max)
        emit_curve(list(zip(range(1, blk.N + 1), rs)), args.format, args.output, ("n", "ratio"))
        return EXIT_OK
    verdict = verify_certificate(v, BACKWARD, cert, args.backend, args.exact_max, args.workers)
    _write(_dumps(verdict.to_json()), args.output)
    return EXIT_OK if verdict.passed else EXIT_FAIL


def cmd_certificate(args) -> int:
    v = _weights(args.weights)
    doc = _load(args.cert, schemas.CERTIFICATE, "certificate")
    try:
        cert = certificate_from_json(doc)
    except ValueError as exc:
        raise InputError(f"certificate: {exc}", "/blocks") from exc
    for t, b in enumerate(cert.blocks):
        if not (v.in_domain(min(b.S)) and v.in_domain(max(b.S))):
            raise InputError(f"certificate: block k={b.k} leaves the {v.side} domain", f"/blocks/{t}/S")
    verdict = verify_certificate(v, args.kind, cert, args.backend, args.exact_max, args.workers)
    out = verdict.to_json()
    validate(out, schemas.VERDICT, "verdict")
    _write(_dumps(out), args.output)
    return EXIT_OK if verdict.passed else EXIT_FAIL


def cmd_mobius(args) -> int:
    doc = _load(args.spec, schemas.MOBIUS, "automorphism")
    try:
        phi = MobiusMap.from_json(doc)
    except ValueError as exc:
        raise InputError(f"automorphism: {exc}", "") from exc
    res = ddc_verdict(phi, horizon=args.horizon)
    if args.format == "csv":
        ev = res["evidence"]
        if res["verdict"]:
            fam = ev[ev["decaying_family"]][0]["measures"]
        else:
            fam = ev["rotation_orbit_norms"]
        emit_curve(list(enumerate(fam)), "csv", args.output, ("n", "measure"))
        return EXIT_OK
    out = res if args.verdict else {"classification": res["evidence"]["classification"]}
    _write(_dumps(out), args.output)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dchaos", description="Distributional chaos certificates and circle dynamics.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats=("json", "csv")):
        sp.add_argument("--output", "-o", default="-", help="output path (default: stdout)")
        sp.add_argument("--format", choices=formats, default="json")

    def backend(sp):
        sp.add_argument("--backend", choices=("exact", "float", "auto"), default="auto")
        sp.add_argument("--exact-max", type=_positive, default=EXACT_MAX, help="largest N for the exact backend")
        sp.add_argument("--workers", type=_positive, default=1)

    d = sub.add_parser("density", help="density profile of an index set, or the density-one merge")
    d.add_argument("--input", "-i", help="density request JSON")
    d.add_argument("--merge", action="store_true", help="run the merge construction on a weight")
    d.add_argument("--weights")
    d.add_argument("--kind", choices=(BACKWARD, FORWARD), default=BACKWARD)
    d.add_argument("--n-max", type=_positive, default=4 * 5**5)
    d.add_argument("--strategy", choices=("proof", "direct"), default="direct")
    common(d)
    d.set_defaults(func=cmd_density)

    s = sub.add_parser("shift-verify", help="ratio sequence of a simple function under a shift")
    s.add_argument("--input", "-i", required=True)
    backend(s)
    common(s)
    s.set_defaults(func=cmd_shift_verify)

    e = sub.add_parser("shift-example", help="verify the harmonic example certificate")
    e.add_argument("--k-max", type=_positive, required=True)
    e.add_argument("--k-min", type=_positive, default=2)
    e.add_argument("--curve", type=_positive, help="emit the ratio sequence of block k instead")
    backend(e)
    common(e)
    e.set_defaults(func=cmd_shift_example)

    m = sub.add_parser("mobius", help="classify a disk automorphism and decide the chaos verdict")
    m.add_argument("--spec", required=True)
    m.add_argument("--verdict", action="store_true", help="include the verdict and evidence")
    m.add_argument("--horizon", type=_positive, default=30)
    common(m)
    m.set_defaults(func=cmd_mobius)

    c = sub.add_parser("certificate", help="verify a certificate against a weight")
    c.add_argument("--weights", required=True)
    c.add_argument("--cert", required=True)
    c.add_argument("--kind", choices=(BACKWARD, FORWARD), default=BACKWARD)
    backend(c)
    common(c, formats=("json",))
    c.set_defaults(func=cmd_certificate)
    return p


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def _report(message: str, pointer: str | None) -> None:
    err = {"error": message}
    if pointer is not None:
        err["pointer"] = pointer
    sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")


def main(argv: Iterable[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(None if argv is None else list(argv))
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        _report(str(exc), exc.pointer)
    except (DChaosError, ValueError, KeyError) as exc:
        _report(f"{type(exc).__name__}: {exc}", None)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
