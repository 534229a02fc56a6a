"""Command-line front end.

Subcommands: ``measure``, ``witness``, ``gen`` and ``verify``. Exit codes are
0 on success, 1 when a verification fails and 2 on usage, parse or domain
errors. The default seed for ``gen`` and ``verify`` is read from the
``QTEXTURE_SEED`` environment variable (42 when unset).

Matrix files are JSON documents ``{"dim", "kind", "matrix"}`` with complex
entries stored as ``[re, im]`` pairs; Kraus channels carry a ``"kraus"``
list of such matrices instead. Basis indices are 0-based and angles are in
radians.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
import time

import numpy as np

from qtexture import harness
from qtexture.channels import KrausChannel, is_texture_free, random_texture_free_channel, random_texture_free_unitary_mix
from qtexture.exceptions import TextureError
from qtexture.measures import MEASURE_IDS, evaluate
from qtexture.states import DensityMatrix, make_rng, random_f1_fixing_unitary, random_mixed
from qtexture.witnesses import (
    evaluate_witness,
    imaginarity_witness,
    universal_witness,
    witness_jk,
    witness_theta,
    witness_w1,
)

SEED_ENV = "QTEXTURE_SEED"
KINDS = ("density", "hermitian", "unitary", "kraus_channel")
DEFAULT_MEASURES = ("tGR:alpha=0.5,z=1", "tSR", "tF", "tTr", "tW", "tR:alpha=0.5", "tBures", "tTsallis:mu=0.5")


class UsageError(Exception):
    """Bad input from the command line or an input file; maps to exit code 2."""


def default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 42
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


# --- matrix files ---------------------------------------------------------

def encode_matrix(m):
    m = np.asarray(m, dtype=np.complex128)
    return [[[float(x.real), float(x.imag)] for x in row] for row in m]


def decode_matrix(rows, where="matrix"):
    if not isinstance(rows, list) or not rows:
        raise UsageError(f"{where}: expected a non-empty array of rows")
    n = len(rows)
    out = np.empty((n, n), dtype=np.complex128)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise UsageError(f"{where}[{i}]: expected a row of {n} entries")
        for j, entry in enumerate(row):
            if (not isinstance(entry, list) or len(entry) != 2
                    or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)):
                raise UsageError(f"{where}[{i}][{j}]: expected [re, im] pair of numbers, got {entry!r}")
            out[i, j] = complex(entry[0], entry[1])
    return out


def _json_params(params):
    return {k: encode_matrix(v) if isinstance(v, np.ndarray) else v for k, v in params.items()}


def matrix_document(kind, matrix=None, kraus=None, **meta):
    if kind == "kraus_channel":
        dim = int(np.asarray(kraus[0]).shape[1])
        doc = {"dim": dim, "kind": kind, "kraus": [encode_matrix(k) for k in kraus]}
    else:
        dim = int(np.asarray(matrix).shape[0])
        doc = {"dim": dim, "kind": kind, "matrix": encode_matrix(matrix)}
    doc.update(meta)
    return doc


def parse_matrix_document(text, source="<input>"):
    """Parse a matrix file into (kind, validated object, raw document)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise UsageError(f"{source}: top level must be an object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise UsageError(f"{source}: field 'kind' must be one of {KINDS}, got {kind!r}")
    dim = doc.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise UsageError(f"{source}: field 'dim' must be a positive integer, got {dim!r}")
    try:
        if kind == "kraus_channel":
            ops = doc.get("kraus")
            if not isinstance(ops, list) or not ops:
                raise UsageError(f"{source}: field 'kraus' must be a non-empty array of matrices")
            mats = [decode_matrix(k, f"{source}: kraus[{n}]") for n, k in enumerate(ops)]
            for n, k in enumerate(mats):
                if k.shape != (dim, dim):
                    raise UsageError(f"{source}: kraus[{n}] has shape {k.shape}, field 'dim' says {dim}")
            obj = KrausChannel(mats)
        else:
            m = decode_matrix(doc.get("matrix"), f"{source}: matrix")
            if m.shape[0] != dim:
                raise UsageError(f"{source}: field 'matrix' has {m.shape[0]} rows, field 'dim' says {dim}")
            if kind == "density":
                obj = DensityMatrix(m)
            elif kind == "unitary":
                if np.max(np.abs(m.conj().T @ m - np.eye(dim))) > 1e-10:
                    raise UsageError(f"{source}: field 'matrix' is not unitary")
                obj = m
            else:
                if np.max(np.abs(m - m.conj().T)) > 1e-10:
                    raise UsageError(f"{source}: field 'matrix' is not Hermitian")
                obj = m
    except TextureError as exc:
        raise UsageError(f"{source}: {exc}") from None
    return kind, obj, doc


def load_matrix_file(path, expect=None):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    kind, obj, doc = parse_matrix_document(text, path)
    if expect is not None and kind not in expect:
        raise UsageError(f"{path}: expected kind {' or '.join(expect)}, got {kind!r}")
    return kind, obj, doc


def _write_json(doc, path, indent=1):
    text = json.dumps(doc, indent=indent, allow_nan=False) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


# --- measure --------------------------------------------------------------

def parse_measure_spec(spec):
    """``"tGR:alpha=0.5,z=1"`` -> ``("tGR", {"alpha": 0.5, "z": 1.0})``."""
    name, _, rest = spec.partition(":")
    if name not in MEASURE_IDS:
        raise UsageError(f"unknown measure {name!r}; choose from {', '.join(MEASURE_IDS)}")
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, val = item.partition("=")
        if not eq:
            raise UsageError(f"measure {name}: parameter {item!r} must look like key=value")
        if key not in MEASURE_IDS[name]:
            raise UsageError(f"measure {name}: unknown parameter {key!r}; expected {MEASURE_IDS[name]}")
        try:
            params[key] = float(val)
        except ValueError:
            raise UsageError(f"measure {name}: parameter {key}={val!r} is not a number") from None
    missing = [k for k in MEASURE_IDS[name] if k not in params]
    if missing:
        raise UsageError(f"measure {name}: missing parameter(s) {', '.join(missing)}")
    return name, params


def _fmt(x):
    x = float(x) + 0.0
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def _param_str(params):
    return ",".join(f"{k}={v!r}" for k, v in params.items())


def cmd_measure(args):
    _, rho, _ = load_matrix_file(args.state, expect=("density",))
    specs = args.measure or list(DEFAULT_MEASURES)
    rows = []
    for spec in specs:
        name, params = parse_measure_spec(spec)
        try:
            value = float(evaluate(name, rho, **params))
        except TextureError as exc:
            raise UsageError(f"measure {spec}: {exc}") from None
        rows.append((name, params, value))
    if args.out == "json":
        payload = [{"id": n, "params": p, "value": _fmt(v) if math.isinf(v) else v + 0.0} for n, p, v in rows]
        _write_json(payload, None)
    elif args.out == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "params", "value"])
        for n, p, v in rows:
            w.writerow([n, _param_str(p), _fmt(v)])
        sys.stdout.write(buf.getvalue())
    else:
        for n, p, v in rows:
            print(f"{n:<9} {_param_str(p) or '-':<20} {_fmt(v)}")
    return 0


# --- witness --------------------------------------------------------------

def _floats(text, n, what):
    parts = text.split(",")
    if len(parts) != n:
        raise UsageError(f"witness spec {what}: expected {n} comma-separated values, got {text!r}")
    return parts


def build_witness(spec, dim):
    """Witness from a spec string: w1 | theta:θ | jk:j,k,φ | imag:j,k,± | universal:FILE."""
    family, _, arg = spec.partition(":")
    try:
        if family == "w1" and not arg:
            return witness_w1(dim)
        if family == "theta":
            return witness_theta(dim, float(arg))
        if family == "jk":
            j, k, phi = _floats(arg, 3, "jk")
            return witness_jk(dim, int(j), int(k), float(phi))
        if family == "imag":
            j, k, sign = _floats(arg, 3, "imag")
            return imaginarity_witness(dim, int(j), int(k), sign.strip())
        if family == "universal" and arg:
            _, a, _ = load_matrix_file(arg, expect=("hermitian", "density"))
            a = a.data if isinstance(a, DensityMatrix) else a
            if a.shape[0] != dim:
                raise UsageError(f"witness operator has dim {a.shape[0]}, state has dim {dim}")
            return universal_witness(a)
    except (ValueError, IndexError) as exc:
        if isinstance(exc, TextureError):
            raise UsageError(f"witness {spec}: {exc}") from None
        raise UsageError(f"invalid witness spec {spec!r}: {exc}") from None
    raise UsageError(f"invalid witness spec {spec!r}; use w1 | theta:θ | jk:j,k,φ | imag:j,k,± | universal:FILE")


def cmd_witness(args):
    _, rho, _ = load_matrix_file(args.state, expect=("density",))
    w = build_witness(args.spec, rho.dim)
    res = evaluate_witness(w, rho)
    out = {
        "family": res.witness_family,
        "params": _json_params(w.params),
        "expectation": res.expectation,
        "detected": res.detected,
        "boundary": res.boundary,
        "derived_tF": res.derived_tf,
    }
    if args.out == "json":
        _write_json(out, None)
    else:
        print(f"family       {out['family']}")
        print(f"expectation  {_fmt(res.expectation)}")
        print(f"detected     {'yes' if res.detected else 'no'}")
        if res.derived_tf is not None:
            print(f"derived tF   {_fmt(res.derived_tf)}")
    return 0


# --- gen ------------------------------------------------------------------

def cmd_gen(args):
    seed = default_seed() if args.seed is None else args.seed
    rng = make_rng(seed)
    d = args.dim
    try:
        if args.kind == "state":
            rank = d if args.rank is None else args.rank
            if not 1 <= rank <= d:
                raise UsageError(f"--rank must lie in [1, {d}], got {rank}")
            doc = matrix_document("density", random_mixed(d, rank, rng).data, seed=seed, rank=rank)
        elif args.kind == "channel":
            if args.terms is not None:
                ch = random_texture_free_unitary_mix(d, args.terms, rng)
                meta = {"construction": "unitary_mix", "terms": args.terms}
            else:
                ch = random_texture_free_channel(d, args.env, rng)
                meta = {"construction": "isometry", "env": args.env}
            doc = matrix_document("kraus_channel", kraus=list(ch.kraus_ops), seed=seed, **meta)
        elif args.kind == "unitary":
            doc = matrix_document("unitary", random_f1_fixing_unitary(d, rng), seed=seed)
        else:
            if args.spec is None:
                raise UsageError("gen witness needs a spec, e.g. theta:2.0")
            w = build_witness(args.spec, d)
            doc = matrix_document("hermitian", w.op, family=w.family, params=_json_params(w.params), threshold=w.threshold)
    except TextureError as exc:
        raise UsageError(str(exc)) from None
    _write_json(doc, args.out, indent=None)
    return 0


# --- verify ---------------------------------------------------------------

def parse_dims(text):
    dims = []
    for part in text.split(","):
        lo, dash, hi = part.partition("-")
        try:
            dims.extend(range(int(lo), int(hi) + 1) if dash else [int(lo)])
        except ValueError:
            raise UsageError(f"--dims: cannot parse {part!r}; use e.g. 2,3,4 or 2-6") from None
    return dims


def cmd_verify(args):
    cfg_kw = {}
    if args.dims is not None:
        cfg_kw["dims"] = parse_dims(args.dims)
    if args.samples is not None:
        cfg_kw["samples_per_dim"] = args.samples
    if args.tol is not None:
        cfg_kw["tolerance"] = args.tol
    cfg_kw["seed"] = default_seed() if args.seed is None else args.seed
    try:
        cfg = harness.SuiteConfig(**cfg_kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    names = list(harness.SUITES) if args.suite == "all" else [args.suite]
    reports = []
    for name in names:
        t0 = time.perf_counter()
        rep = harness.SUITES[name](cfg)
        elapsed = time.perf_counter() - t0
        reports.append(rep)
        status = "PASS" if rep.passed else "FAIL"
        n_bad = sum(v["violations"] for v in rep.properties.values())
        print(f"{status} {name}: {rep.checks_run} checks, {n_bad} violations, {rep.skipped} skipped, "
              f"worst slack {rep.worst_slack!r} ({elapsed:.1f}s)")
        for key, tally in rep.properties.items():
            if tally["violations"]:
                print(f"     {key}: {tally['violations']} of {tally['checks']}")
    passed = all(r.passed for r in reports)
    if args.out:
        _write_json({"passed": passed, "suites": [r.to_dict() for r in reports]}, args.out)
    return 0 if passed else 1


# --- entry point ----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="qtexture", description="Quantum-state texture measures, witnesses and verification suites.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("measure", help="compute texture measures of a density-matrix file")
    m.add_argument("state", help="density matrix file")
    m.add_argument("--measure", action="append", metavar="ID[:k=v,...]",
                   help=f"measure to compute, repeatable (default: all). ids: {', '.join(MEASURE_IDS)}")
    m.add_argument("--out", choices=("text", "json", "csv"), default="text")
    m.set_defaults(func=cmd_measure)

    w = sub.add_parser("witness", help="evaluate a texture witness on a state")
    w.add_argument("spec", help="w1 | theta:θ | jk:j,k,φ | imag:j,k,± | universal:FILE (0-based indices, radians)")
    w.add_argument("state", help="density matrix file")
    w.add_argument("--out", choices=("text", "json"), default="text")
    w.set_defaults(func=cmd_witness)

    g = sub.add_parser("gen", help="generate a random state, free channel, f1-fixing unitary or witness")
    g.add_argument("kind", choices=("state", "channel", "unitary", "witness"))
    g.add_argument("spec", nargs="?", help="witness spec (gen witness only)")
    g.add_argument("--dim", type=int, required=True)
    g.add_argument("--rank", type=int, help="state rank (default: full)")
    g.add_argument("--env", type=int, default=2, help="environment dimension of the isometry channel")
    g.add_argument("--terms", type=int, help="build a mixture of this many f1-fixing unitaries instead")
    g.add_argument("--seed", type=int, help=f"RNG seed (default: ${SEED_ENV} or 42)")
    g.add_argument("--out", help="output file (default: stdout)")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="run property-verification suites")
    v.add_argument("--suite", choices=("axioms", "propositions", "witnesses", "all"), default="all")
    v.add_argument("--dims", help="e.g. 2,3,4 or 2-6 (default 2-6)")
    v.add_argument("--samples", type=int, help="samples per dimension (default 200)")
    v.add_argument("--seed", type=int, help=f"RNG seed (default: ${SEED_ENV} or 42)")
    v.add_argument("--tol", type=float, help="inequality slack (default 1e-9); identity tolerances scale with it")
    v.add_argument("--out", help="write the JSON report here")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (UsageError, TextureError) as exc:
        print(f"qtexture: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
