"""Command-line front end: eval, verify, dimension and sweep.

Exit codes: 0 success, 1 identity failure, 2 invalid parameters,
3 precision refusal, 4 partial sweep failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import identities, relations
from .cache import ConstantCache, canonical_key
from .characters import dirichlet_l_value, gauss_sum, kronecker_character
from .errors import DomainError, NotRationalError, PrecisionError
from .numerics import hurwitz_zeta, mzv, polylog_at_root, riemann_zeta
from .periodic import PeriodicFunction, l_value

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INVALID = 2
EXIT_PRECISION = 3
EXIT_PARTIAL = 4

DEFAULT_PREC = 256

IDENTITIES = (
    "euler-factor", "hecke", "dedekind", "dedekind-generic", "gauss",
    "stuffle", "bernoulli-l-link", "unit-decomposition", "reflection",
)
SPACES = ("cm", "strong-cm", "okada", "zagier")


class UsageError(ValueError):
    pass


# --------------------------------------------------------------------------
# parameter parsing


def parse_rational(text) -> Fraction:
    """'p/q' or an integer; decimal and exponent literals are refused."""
    if isinstance(text, bool) or isinstance(text, float):
        raise UsageError(f"rationals must be given as 'p/q' strings, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    s = str(text).strip()
    if any(ch in s for ch in ".eE"):
        raise UsageError(f"rationals must be given as 'p/q', not floating literals: {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"invalid rational {s!r}") from exc


def parse_int(text, name: str) -> int:
    if isinstance(text, bool):
        raise UsageError(f"{name} must be an integer")
    if isinstance(text, int):
        return text
    try:
        return int(str(text).strip())
    except ValueError as exc:
        raise UsageError(f"{name} must be an integer, got {text!r}") from exc


def parse_height(text) -> int:
    """Integer height bound; '1e6' style powers are accepted when exact."""
    if isinstance(text, int) and not isinstance(text, bool):
        return text
    s = str(text).strip().lower()
    if "e" in s:
        mant, _, exp = s.partition("e")
        try:
            value = int(mant) * 10 ** int(exp)
        except ValueError as exc:
            raise UsageError(f"invalid height {text!r}") from exc
        if int(exp) < 0:
            raise UsageError(f"height must be a positive integer, got {text!r}")
        return value
    return parse_int(s, "height")


def parse_int_list(text, name: str) -> list[int]:
    if isinstance(text, (list, tuple)):
        return [parse_int(x, name) for x in text]
    return [parse_int(x, name) for x in str(text).split(",") if x.strip()]


def _require(params: dict, *names: str) -> None:
    missing = [n for n in names if params.get(n) is None]
    if missing:
        raise UsageError("missing parameter(s): " + ", ".join("--" + m for m in missing))


def _load_function(params: dict) -> PeriodicFunction:
    if params.get("function") is not None:
        src = params["function"]
        if isinstance(src, dict):
            return PeriodicFunction.from_json(src)
        try:
            text = Path(src).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read periodic function file {src!r}: {exc}") from exc
        try:
            return PeriodicFunction.from_json(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"malformed periodic function file: {exc}") from exc
    if params.get("values") is not None:
        vals = params["values"]
        items = vals if isinstance(vals, list) else str(vals).split(",")
        parsed = [parse_rational(v) for v in items]
        return PeriodicFunction(len(parsed), tuple(parsed))
    raise UsageError("need --function FILE or --values v1,v2,...")


# --------------------------------------------------------------------------
# commands as pure functions of a parameter dict


def _value_json(v) -> dict:
    return v.to_json()


def _eval_compute(subject: str, params: dict, prec: int) -> tuple[dict, dict]:
    """(canonical params, result dict) for an eval request."""
    if subject == "hurwitz":
        _require(params, "k", "x")
        k, x = parse_int(params["k"], "k"), parse_rational(params["x"])
        canon = {"k": k, "x": str(x)}
        return canon, {"value": _value_json(hurwitz_zeta(k, x, prec))}
    if subject == "zeta":
        _require(params, "k")
        k = parse_int(params["k"], "k")
        return {"k": k}, {"value": _value_json(riemann_zeta(k, prec))}
    if subject == "polylog":
        _require(params, "m", "q", "a")
        m, q, a = (parse_int(params[n], n) for n in ("m", "q", "a"))
        return {"m": m, "q": q, "a": a}, {"value": _value_json(polylog_at_root(m, q, a, prec))}
    if subject == "mzv":
        _require(params, "s")
        s = parse_int_list(params["s"], "s")
        return {"s": ",".join(map(str, s))}, {"value": _value_json(mzv(s, prec))}
    if subject == "gauss":
        _require(params, "disc")
        disc = parse_int(params["disc"], "disc")
        tau = gauss_sum(kronecker_character(disc))
        return {"disc": disc}, {"exact": str(tau), "value": _value_json(tau.embed(prec))}
    if subject == "lvalue":
        _require(params, "k")
        k = parse_int(params["k"], "k")
        if params.get("disc") is not None:
            disc = parse_int(params["disc"], "disc")
            return {"k": k, "disc": disc}, {"value": _value_json(dirichlet_l_value(kronecker_character(disc), k, prec))}
        f = _load_function(params)
        method = params.get("method") or "hurwitz"
        canon = {"k": k, "period": f.period, "values": ",".join(map(str, f.values)), "method": method}
        return canon, {"value": _value_json(l_value(f, k, prec, method=method))}
    raise UsageError(f"unknown eval subject {subject!r}")


def _error_log2(result: dict) -> int | None:
    return result.get("value", {}).get("error_log2")


def run_eval(params: dict, cache: ConstantCache | None = None) -> tuple[int, dict]:
    _require(params, "subject")
    subject = params["subject"]
    prec = parse_int(params.get("prec") or DEFAULT_PREC, "prec")
    if prec < 16:
        raise UsageError("--prec must be at least 16 bits")
    if cache is not None:
        # canonical parameters need parsing but not evaluation; reuse the parsers
        probe = _canonical_eval_params(subject, params)
        key = canonical_key("eval:" + subject, probe, prec)
        hit = cache.get(key, max_error_log2=1 - prec)
        if hit is not None:
            return EXIT_OK, hit
    canon, result = _eval_compute(subject, params, prec)
    out = {"command": "eval", "subject": subject, "params": canon, "precision_bits": prec, **result}
    if cache is not None:
        cache.put(key, out, _error_log2(result))
    return EXIT_OK, out


def _canonical_eval_params(subject: str, params: dict) -> dict:
    names = {
        "hurwitz": ("k", "x"), "zeta": ("k",), "polylog": ("m", "q", "a"), "mzv": ("s",),
        "gauss": ("disc",), "lvalue": ("k", "disc", "function", "values", "method"),
    }.get(subject)
    if names is None:
        raise UsageError(f"unknown eval subject {subject!r}")
    canon = {}
    for n in names:
        v = params.get(n)
        if v is None:
            continue
        if n == "x":
            v = str(parse_rational(v))
        elif n == "s":
            v = ",".join(map(str, parse_int_list(v, "s")))
        elif n in ("function", "values"):
            f = _load_function({n: v})
            n, v = "f", f"{f.period}:" + ",".join(map(str, f.values))
        elif n != "method":
            v = parse_int(v, n)
        canon[n] = v
    if subject == "lvalue" and "disc" not in canon:
        canon.setdefault("method", "hurwitz")
    return canon


def run_verify(params: dict) -> tuple[int, dict]:
    _require(params, "identity")
    name = params["identity"]
    if name not in IDENTITIES:
        raise UsageError(f"unknown identity {name!r}; choose from {', '.join(IDENTITIES)}")
    prec = parse_int(params.get("prec") or DEFAULT_PREC, "prec")
    g = lambda n: parse_int(params[n], n)  # noqa: E731
    if name == "euler-factor":
        _require(params, "k", "q")
        rep = identities.check_euler_factor(g("k"), g("q"), prec)
    elif name == "reflection":
        _require(params, "k", "q", "a")
        rep = identities.check_reflection(g("k"), g("q"), g("a"), prec)
    elif name == "hecke":
        _require(params, "k", "q", "a")
        rep = identities.check_hecke_formula(g("k"), g("q"), g("a"), prec)
    elif name == "dedekind":
        _require(params, "q", "k")
        rep = identities.check_dedekind_determinant(g("q"), g("k"), prec)
    elif name == "dedekind-generic":
        _require(params, "orders", "values")
        vals = params["values"]
        items = vals if isinstance(vals, list) else str(vals).split(",")
        rep = identities.check_dedekind_generic(parse_int_list(params["orders"], "orders"),
                                                [parse_rational(v) for v in items])
    elif name == "gauss":
        _require(params, "disc")
        rep = identities.check_gauss_sum(g("disc"))
    elif name == "stuffle":
        if params.get("s1") is not None or params.get("s2") is not None:
            _require(params, "s1", "s2")
            rep = identities.check_stuffle(None, prec, pair=(g("s1"), g("s2")))
        else:
            _require(params, "d")
            rep = identities.check_stuffle(g("d"), prec)
    elif name == "bernoulli-l-link":
        _require(params, "disc", "d")
        rep = identities.check_bernoulli_l_link(g("disc"), g("d"), prec)
    else:  # unit-decomposition
        _require(params, "k")
        rep = identities.check_unit_decomposition(_load_function(params), g("k"), prec)
    return (EXIT_OK if rep.passed else EXIT_FAIL), rep.to_json()


def run_dimension(params: dict) -> tuple[int, dict]:
    _require(params, "space")
    space = params["space"]
    if space not in SPACES:
        raise UsageError(f"unknown space {space!r}; choose from {', '.join(SPACES)}")
    prec = parse_int(params.get("prec") or DEFAULT_PREC, "prec")
    height = parse_height(params.get("height") or relations.DEFAULT_HEIGHT)
    g = lambda n: parse_int(params[n], n)  # noqa: E731
    if space == "zagier":
        _require(params, "weight")
        cap = parse_int(params.get("length_cap") or 3, "length_cap")
        rep = relations.zagier_dimension_evidence(g("weight"), height, prec, cap)
    else:
        _require(params, "k", "q")
        if space == "cm":
            rep = relations.cm_dimension_evidence(g("k"), g("q"), height, prec)
        elif space == "strong-cm":
            rep = relations.strong_cm_dimension_evidence(
                g("k"), g("q"), height, prec, adjoin_pi=bool(params.get("adjoin_pi"))
            )
        else:
            rep = relations.okada_set_evidence(g("k"), g("q"), height, prec)
    rep = {"command": "dimension", "height_bound": height, "precision_bits": prec, **rep}
    return EXIT_OK, rep


def execute(command: str, params: dict, use_cache: bool = True) -> tuple[int, dict]:
    """Run one command; domain errors become exit codes with a diagnostic payload."""
    try:
        if command == "eval":
            return run_eval(params, ConstantCache() if use_cache else None)
        if command == "verify":
            return run_verify(params)
        if command == "dimension":
            return run_dimension(params)
        raise UsageError(f"unknown command {command!r}")
    except PrecisionError as exc:
        return EXIT_PRECISION, {"error": str(exc), "required_precision_bits": exc.required_bits}
    except (UsageError, DomainError, NotRationalError, ValueError, ZeroDivisionError) as exc:
        return EXIT_INVALID, {"error": str(exc)}


# --------------------------------------------------------------------------
# sweeps


def _expand_range(spec) -> list:
    if isinstance(spec, list):
        return spec
    if isinstance(spec, dict) and "from" in spec and "to" in spec:
        step = int(spec.get("step", 1))
        return list(range(int(spec["from"]), int(spec["to"]) + 1, step))
    raise UsageError(f"range must be a list or {{from, to[, step]}}, got {spec!r}")


def expand_config(config) -> list[dict]:
    if not isinstance(config, list):
        raise UsageError("sweep config must be a JSON array")
    tasks = []
    for i, item in enumerate(config):
        if not isinstance(item, dict) or item.get("command") not in ("eval", "verify", "dimension"):
            raise UsageError(f"config entry {i} needs a command in eval/verify/dimension")
        base = dict(item.get("params") or {})
        ranges = item.get("ranges") or {}
        if not isinstance(base, dict) or not isinstance(ranges, dict):
            raise UsageError(f"config entry {i}: params and ranges must be objects")
        names = sorted(ranges)
        for combo in itertools.product(*(_expand_range(ranges[n]) for n in names)):
            params = {**base, **dict(zip(names, combo))}
            tasks.append({"command": item["command"], "params": params})
    return tasks


def _theorem_backed(task: dict) -> bool:
    """Conjecture-evidence outcomes (cm, strong-cm, zagier searches) never fail a sweep."""
    if task["command"] == "dimension":
        return task["params"].get("space") == "okada"
    return True


def _run_task(task: dict, use_cache: bool) -> dict:
    code, payload = execute(task["command"], task["params"], use_cache)
    if code in (EXIT_INVALID, EXIT_PRECISION):
        status = "error"
    elif code == EXIT_FAIL:
        status = "fail"
    elif task["command"] == "dimension" and task["params"].get("space") == "okada" and not payload.get("consistent"):
        status = "fail"
    else:
        status = "pass"
    return {
        "command": task["command"],
        "params": task["params"],
        "status": status,
        "exit_code": code,
        "theorem_backed": _theorem_backed(task),
        "report": payload,
    }


def write_atomic(path: Path, text: str) -> None:
    """Write to a temporary file in the target directory, then rename over the target."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=path.name + ".", suffix=".tmp", dir=str(path.parent))
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def run_sweep(config, jobs: int = 1, use_cache: bool = True) -> tuple[int, list[dict]]:
    tasks = expand_config(config)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_task, tasks, itertools.repeat(use_cache)))
    else:
        results = [_run_task(t, use_cache) for t in tasks]
    failed = any(
        r["status"] == "error" or (r["status"] == "fail" and r["theorem_backed"]) for r in results
    )
    return (EXIT_PARTIAL if failed else EXIT_OK), results


# --------------------------------------------------------------------------
# output


def _flatten(d: dict, prefix: str = "") -> dict:
    flat: dict[str, Any] = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            flat.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            if any(isinstance(x, (dict, list)) for x in v):
                raise UsageError("csv output is only available for flat reports")
            flat[key] = ";".join(map(str, v))
        else:
            flat[key] = v
    return flat


def render(payload: dict, fmt: str, command: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2)
    if fmt == "csv":
        if command == "dimension":
            raise UsageError("csv output is only available for flat reports (eval, verify)")
        flat = _flatten(payload)
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(flat), lineterminator="\n")
        writer.writeheader()
        writer.writerow(flat)
        return buf.getvalue().rstrip("\n")
    # plain
    if command == "eval":
        v = payload["value"]
        if "real" in v:
            text = f"{v['real']} + ({v['imag']})*i"
        else:
            text = v["decimal"]
        if "exact" in payload:
            text = f"{payload['exact']} = {text}"
        return f"{text}  (error <= 2^{v['error_log2']})"
    if command == "verify":
        return f"{payload['name']}: {payload['verdict']} (residual_log2 {payload['residual_log2']})"
    return json.dumps(payload, indent=2)


# --------------------------------------------------------------------------
# argparse


def _common(parser: argparse.ArgumentParser, with_format: bool = True) -> None:
    parser.add_argument("--prec", type=int, default=DEFAULT_PREC, help="working precision in bits (default 256)")
    parser.add_argument("--no-cache", action="store_true", help="bypass the constant cache")
    if with_format:
        parser.add_argument("--out", choices=("json", "csv", "plain"), default="json", help="output format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cmspaces", description="Hurwitz zeta values, identities and relation evidence")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate a constant with a certified error bound")
    ev.add_argument("subject", choices=("hurwitz", "zeta", "polylog", "lvalue", "mzv", "gauss"))
    for name in ("k", "x", "m", "q", "a", "s", "disc", "function", "values"):
        ev.add_argument(f"--{name}")
    ev.add_argument("--method", choices=("hurwitz", "series"))
    _common(ev)

    ve = sub.add_parser("verify", help="check one identity and print its report")
    ve.add_argument("--identity", required=True)
    for name in ("k", "q", "a", "d", "s1", "s2", "disc", "orders", "values", "function"):
        ve.add_argument(f"--{name}")
    _common(ve)

    di = sub.add_parser("dimension", help="relation search evidence for a space")
    di.add_argument("--space", required=True, choices=SPACES)
    for name in ("k", "q", "weight", "height"):
        di.add_argument(f"--{name}")
    di.add_argument("--length-cap", dest="length_cap")
    di.add_argument("--adjoin-pi", dest="adjoin_pi", action="store_true")
    _common(di)

    sw = sub.add_parser("sweep", help="run a batch of commands from a config file")
    sw.add_argument("--config", required=True)
    sw.add_argument("--jobs", type=int, default=1)
    sw.add_argument("--out", help="output file (written atomically); stdout when omitted")
    sw.add_argument("--no-cache", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code not in (0, None) else EXIT_OK
    use_cache = not args.no_cache

    if args.command == "sweep":
        try:
            config = json.loads(Path(args.config).read_text(encoding="utf-8"))
            if args.jobs < 1:
                raise UsageError("--jobs must be >= 1")
            code, results = run_sweep(config, args.jobs, use_cache)
        except (OSError, json.JSONDecodeError, UsageError) as exc:
            print(f"error: malformed sweep config: {exc}", file=sys.stderr)
            return EXIT_INVALID
        text = json.dumps(results, indent=2) + "\n"
        if args.out:
            write_atomic(Path(args.out), text)
        else:
            sys.stdout.write(text)
        if code != EXIT_OK:
            bad = sum(1 for r in results if r["status"] != "pass")
            print(f"sweep: {bad} of {len(results)} task(s) did not pass", file=sys.stderr)
        return code

    params = {k: v for k, v in vars(args).items() if k not in ("command", "no_cache", "out")}
    code, payload = execute(args.command, params, use_cache)
    if code in (EXIT_INVALID, EXIT_PRECISION):
        print(f"error: {payload['error']}", file=sys.stderr)
        if code == EXIT_PRECISION:
            print(f"required precision: {payload['required_precision_bits']} bits", file=sys.stderr)
        return code
    try:
        print(render(payload, args.out, args.command))
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return code


if __name__ == "__main__":
    raise SystemExit(main())
