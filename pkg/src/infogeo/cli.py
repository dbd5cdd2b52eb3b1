"""Command-line interface.

Every invocation prints a single JSON object (the result envelope) on
stdout: ``{"command", "inputs", "outputs", "diagnostics", "status"}``
with ``status`` either ``"ok"`` or ``"error:<category>"``.  The one
exception is ``sweep`` in CSV format, which streams a CSV table instead.
Progress and warnings go to stderr.

Exit codes: 0 success, 1 verification failure, 2 usage error (bad flags,
unknown model, malformed grid), 3 numeric or domain error (infeasible
moments, points outside a chart, truncation overflow).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__, coherent, core, discrete, regression, sphere
from .errors import (
    CanonicalityError,
    ConstraintError,
    ConvergenceError,
    DegeneracyError,
    DomainError,
    EvaluationError,
    InfeasibleError,
    InfoGeoError,
    SupportError,
    TruncationError,
    UnsupportedOperationError,
)
from .registry import BUILTIN_NAMES, ModelHandle, get_model, load_config
from .verify import verify_all, verify_handle, verify_numerics

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

_CANONICAL_KINDS = ("qubit", "coherent", "discrete")


class UsageError(Exception):
    """Bad flags or flag values; reported with exit code 2."""


_ERROR_CATEGORIES = (
    (InfeasibleError, "infeasible"),
    (TruncationError, "truncation"),
    (ConstraintError, "constraint"),
    (ConvergenceError, "convergence"),
    (DegeneracyError, "degenerate"),
    (SupportError, "support"),
    (CanonicalityError, "canonicality"),
    (DomainError, "domain"),
    (UnsupportedOperationError, "unsupported"),
    (EvaluationError, "evaluation"),
)


def _category(exc: InfoGeoError) -> str:
    for cls, name in _ERROR_CATEGORIES:
        if isinstance(exc, cls):
            return name
    return "numeric"


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (np.integer, int)) and not isinstance(value, bool):
        return int(value)
    if isinstance(value, complex):
        return f"{value.real!r},{value.imag!r}"
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _emit(command: str, inputs: dict, outputs: dict, diagnostics: dict,
          status: str) -> None:
    envelope = {"command": command, "inputs": inputs, "outputs": outputs,
                "diagnostics": diagnostics, "status": status}
    json.dump(_jsonable(envelope), sys.stdout, sort_keys=True)
    sys.stdout.write("\n")


def _parse_floats(text: str, flag: str, expect: int | None = None) -> np.ndarray:
    tokens = text.replace(",", " ").split()
    try:
        values = [float(t) for t in tokens]
    except ValueError:
        raise UsageError(f"{flag} expects numbers, got {text!r}") from None
    if expect is not None and len(values) != expect:
        raise UsageError(f"{flag} expects {expect} numbers, got {len(values)}")
    if not values:
        raise UsageError(f"{flag} is empty")
    return np.array(values)


def _parse_complex(text: str, flag: str) -> complex:
    vals = _parse_floats(text, flag)
    if vals.size == 1:
        return complex(vals[0], 0.0)
    if vals.size == 2:
        return complex(vals[0], vals[1])
    raise UsageError(f"{flag} expects 're,im', got {text!r}")


def _resolve_model(args) -> ModelHandle:
    config = getattr(args, "config", None)
    name = getattr(args, "model", None)
    if config and name:
        raise UsageError("pass either --model or --config, not both")
    if config:
        try:
            return load_config(config)
        except FileNotFoundError:
            raise UsageError(f"config file not found: {config}") from None
        except ValueError as exc:
            raise UsageError(f"bad config: {exc}") from None
    if not name:
        raise UsageError("a model is required (--model NAME or --config FILE)")
    try:
        return get_model(name)
    except KeyError:
        known = ", ".join(BUILTIN_NAMES)
        raise UsageError(f"unknown model {name!r}; known models: {known}") from None


def _require_canonical(handle: ModelHandle, command: str) -> None:
    if handle.kind not in _CANONICAL_KINDS:
        raise UsageError(
            f"{command} needs a model with canonical coordinates; "
            f"{handle.name!r} has kind {handle.kind!r}")


def _model_inputs(args, handle: ModelHandle) -> dict:
    if getattr(args, "config", None):
        return {"config": args.config, "model": handle.name}
    return {"model": handle.name}


def _parse_dataset(args, handle: ModelHandle):
    """Returns (data set object, echo dict for the envelope)."""
    kind = handle.kind
    x_given = getattr(args, "x", None)
    z_given = getattr(args, "z", None)
    file_given = getattr(args, "x_file", None)
    if kind == "coherent":
        if (z_given is None) == (file_given is None):
            raise UsageError("coherent data needs exactly one of --z or --x-file")
        if z_given is not None:
            z = _parse_complex(z_given, "--z")
            nmax = args.nmax or handle.options["nmax"]
            return coherent.coherent_state(z, nmax=nmax), {"z": z_given}
        try:
            return coherent.load_state(file_given), {"x_file": file_given}
        except FileNotFoundError:
            raise UsageError(f"state file not found: {file_given}") from None
        except ValueError as exc:
            raise UsageError(f"bad state file: {exc}") from None
    if x_given is None:
        raise UsageError(f"{kind} data must be given with --x")
    if kind == "qubit":
        x = _parse_floats(x_given, "--x", 3)
        if float(np.linalg.norm(x)) > 1.0 + 1e-12:
            raise DomainError("polarization vector is longer than 1")
        return x, {"x": list(x)}
    if kind == "discrete":
        family = handle.options["family"]
        x = _parse_floats(x_given, "--x", family.alphabet_size)
        try:
            x = discrete.check_probability(x)
        except ValueError as exc:
            raise DomainError(str(exc)) from None
        return x, {"x": list(x)}
    raise UsageError(f"model kind {kind!r} has no data-set parser")


def _model_point(args, handle: ModelHandle) -> tuple[np.ndarray, dict]:
    """Model coordinates from --theta, or from --u through the chart."""
    model = handle.descriptor
    theta_given = getattr(args, "theta", None)
    u_given = getattr(args, "u", None)
    if (theta_given is None) == (u_given is None):
        raise UsageError("give the model point as exactly one of --theta or --u")
    if theta_given is not None:
        theta = _parse_floats(theta_given, "--theta", model.n)
        return theta, {"theta": list(theta)}
    u = _parse_floats(u_given, "--u", model.n)
    if not model.energy_domain.membership(u):
        raise DomainError("moment vector lies outside the model chart")
    return core.u_to_theta(model, u), {"u": list(u)}


# ------------------------------------------------------------- commands

def _cmd_massieu(args) -> int:
    handle = _resolve_model(args)
    _require_canonical(handle, "massieu")
    model = handle.descriptor
    if args.theta is None:
        raise UsageError("massieu needs --theta")
    theta = _parse_floats(args.theta, "--theta", model.n)
    inputs = _model_inputs(args, handle)
    inputs["theta"] = list(theta)
    pair = core.canonical_check(model, theta, tol=args.tol)
    outputs = {
        "massieu": pair.massieu,
        "u": list(pair.u),
        "entropy": pair.entropy,
        "canonical_residual": pair.residual,
    }
    if handle.kind == "discrete":
        family = handle.options["family"]
        outputs["member_distribution"] = list(discrete.boltzmann_gibbs(family, theta))
    diagnostics = {"roundtrip_error": pair.roundtrip_error}
    _emit("massieu", inputs, outputs, diagnostics, "ok")
    return EXIT_OK


def _cmd_maxent(args) -> int:
    handle = _resolve_model(args)
    inputs = _model_inputs(args, handle)

    if handle.kind == "regression":
        if args.data is None:
            raise UsageError("maxent on regression needs --data FILE")
        try:
            pts = regression.load_pairs(args.data)
        except FileNotFoundError:
            raise UsageError(f"data file not found: {args.data}") from None
        except ValueError as exc:
            raise UsageError(f"bad data file: {exc}") from None
        inputs["data"] = args.data
        qa, qb = regression.regression_questions(pts)
        outputs = {
            "questions": [qa, qb],
            "entropy": regression.regression_entropy(pts),
            "perfect": regression.regression_is_perfect(pts),
        }
        _emit("maxent", inputs, outputs, {"points": int(pts.shape[0])}, "ok")
        return EXIT_OK

    if handle.kind == "sphere":
        if args.x is None:
            raise UsageError("maxent on the sphere needs --x 'x1,x2,x3'")
        x = _parse_floats(args.x, "--x", 3)
        inputs["x"] = list(x)
        mu = sphere.sphere_mu(x)
        outputs = {"direction": list(mu), "entropy": sphere.sphere_entropy(x)}
        if mu[2] > 0.0:
            q = sphere.sphere_questions(x)
            outputs["questions"] = list(q)
            outputs["reconstruction"] = list(sphere.sphere_from_questions(q))
        _emit("maxent", inputs, outputs, {}, "ok")
        return EXIT_OK

    model = handle.descriptor
    if args.u is None:
        raise UsageError("maxent needs the moment targets --u")
    u = _parse_floats(args.u, "--u", model.n)
    inputs["u"] = list(u)
    if handle.kind == "discrete":
        family = handle.options["family"]
        tol = args.tol if args.tol is not None else 1e-12
        theta, iterations = discrete.maxent_fit_report(family, u, tol=tol)
        achieved = family.hamiltonians @ discrete.boltzmann_gibbs(family, theta)
        note = "damped Newton on the dual objective"
    else:
        if not model.energy_domain.membership(u):
            raise DomainError("moment vector lies outside the model chart")
        theta = core.u_to_theta(model, u)
        achieved = core.theta_to_u(model, theta)
        iterations = 0
        note = "closed-form chart inversion"
    outputs = {"theta": list(theta), "achieved": list(achieved),
               "iterations": iterations}
    diagnostics = {"residual": float(np.max(np.abs(achieved - u))), "note": note}
    _emit("maxent", inputs, outputs, diagnostics, "ok")
    return EXIT_OK


def _cmd_divergence(args) -> int:
    handle = _resolve_model(args)
    _require_canonical(handle, "divergence")
    model = handle.descriptor
    inputs = _model_inputs(args, handle)
    has_data = any(getattr(args, k, None) is not None for k in ("x", "z", "x_file"))

    if has_data:
        x, echo = _parse_dataset(args, handle)
        inputs.update(echo)
        theta, point_echo = _model_point(args, handle)
        inputs.update(point_echo)
        report = core.divergence_from_data(model, x, theta)
        answers, _ = model.dataset_answers(x)
        outputs = {
            "mode": "data",
            "value": report.value,
            "massieu_term": report.massieu_at,
            "entropy_term": report.entropy_of_x,
            "linear_term": report.linear_term,
            "answers": list(np.asarray(answers, dtype=float)),
            "theta": list(theta),
        }
        _emit("divergence", inputs, outputs, {}, "ok")
        return EXIT_OK

    if args.theta is None or args.zeta is None:
        raise UsageError("divergence needs data (--x/--z/--x-file) plus a model"
                         " point, or two model points --theta and --zeta")
    theta = _parse_floats(args.theta, "--theta", model.n)
    zeta = _parse_floats(args.zeta, "--zeta", model.n)
    inputs["theta"] = list(theta)
    inputs["zeta"] = list(zeta)
    u = core.theta_to_u(model, theta)
    phi_theta = core.massieu(model, theta)
    phi_zeta = core.massieu(model, zeta)
    value = core.bregman_divergence(model, theta, zeta)
    outputs = {
        "mode": "model",
        "value": value,
        "massieu_at_first": phi_theta,
        "massieu_at_second": phi_zeta,
        "linear_term": float((zeta - theta) @ u),
        "u_first": list(u),
    }
    _emit("divergence", inputs, outputs, {}, "ok")
    return EXIT_OK


def _cmd_pythagoras(args) -> int:
    handle = _resolve_model(args)
    _require_canonical(handle, "pythagoras")
    model = handle.descriptor
    inputs = _model_inputs(args, handle)
    has_data = any(getattr(args, k, None) is not None for k in ("x", "z", "x_file"))

    if args.theta is None or args.zeta is None:
        raise UsageError("pythagoras needs --theta and --zeta")
    theta = _parse_floats(args.theta, "--theta", model.n)
    zeta = _parse_floats(args.zeta, "--zeta", model.n)
    inputs["theta"] = list(theta)
    inputs["zeta"] = list(zeta)

    if has_data:
        if args.xi is not None:
            raise UsageError("give either data or --xi, not both")
        x, echo = _parse_dataset(args, handle)
        inputs.update(echo)
        residual = core.pythagoras_data(model, x, theta, zeta,
                                        compliance_tol=args.tol or 1e-9)
        outputs = {
            "mode": "data",
            "divergence_data_first": core.divergence_from_data(model, x, theta).value,
            "divergence_first_second": core.bregman_divergence(model, theta, zeta),
            "divergence_data_second": core.divergence_from_data(model, x, zeta).value,
            "residual": residual,
        }
        _emit("pythagoras", inputs, outputs, {}, "ok")
        return EXIT_OK

    if args.xi is None:
        raise UsageError("pythagoras needs either data (--x/--z/--x-file)"
                         " or a third model point --xi")
    xi = _parse_floats(args.xi, "--xi", model.n)
    inputs["xi"] = list(xi)
    orthogonality, residual = core.pythagoras_models(model, theta, zeta, xi)
    outputs = {
        "mode": "model",
        "divergence_first_second": core.bregman_divergence(model, theta, zeta),
        "divergence_second_third": core.bregman_divergence(model, zeta, xi),
        "divergence_first_third": core.bregman_divergence(model, theta, xi),
        "orthogonality": orthogonality,
        "residual": residual,
    }
    _emit("pythagoras", inputs, outputs, {}, "ok")
    return EXIT_OK


_SWEEP_LIMIT = 1_000_000


def _parse_grid(specs, n: int) -> list[np.ndarray]:
    axes: list[np.ndarray] = [np.zeros(1) for _ in range(n)]
    seen = set()
    if not specs:
        raise UsageError("sweep needs at least one --grid AXIS=START:STOP:COUNT")
    for spec in specs:
        head, sep, tail = spec.partition("=")
        parts = tail.split(":")
        if not sep or len(parts) != 3:
            raise UsageError(f"bad grid spec {spec!r}; expected AXIS=START:STOP:COUNT")
        try:
            axis = int(head)
            start, stop = float(parts[0]), float(parts[1])
            count = int(parts[2])
        except ValueError:
            raise UsageError(f"bad grid spec {spec!r}") from None
        if not 1 <= axis <= n:
            raise UsageError(f"grid axis {axis} out of range 1..{n}")
        if axis in seen:
            raise UsageError(f"grid axis {axis} listed twice")
        if count < 1:
            raise UsageError("grid COUNT must be at least 1")
        seen.add(axis)
        axes[axis - 1] = np.linspace(start, stop, count)
    total = 1
    for ax in axes:
        total *= ax.size
    if total > _SWEEP_LIMIT:
        raise UsageError(f"grid has {total} points; the limit is {_SWEEP_LIMIT}")
    return axes


def _cmd_sweep(args) -> int:
    handle = _resolve_model(args)
    _require_canonical(handle, "sweep")
    model = handle.descriptor
    axes = _parse_grid(args.grid, model.n)

    wanted = [q.strip() for q in (args.quantities or "").split(",") if q.strip()]
    if not wanted:
        raise UsageError("sweep needs --quantities (comma-separated names)")
    known = {"phi", "entropy", "residual", "unorm"}
    known.update(f"u{j + 1}" for j in range(model.n))
    for q in wanted:
        if q not in known:
            raise UsageError(f"unknown quantity {q!r}; known: {sorted(known)}")
    quantities = sorted(set(wanted))

    header = [f"theta{j + 1}" for j in range(model.n)] + quantities
    rows = []
    need_u = any(q.startswith("u") or q in ("entropy", "residual") for q in quantities)
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=-1)
    for theta in points:
        values = {"phi": core.massieu(model, theta)}
        if need_u:
            u = core.theta_to_u(model, theta)
            values["unorm"] = float(np.linalg.norm(u))
            for j in range(model.n):
                values[f"u{j + 1}"] = float(u[j])
            if "entropy" in quantities or "residual" in quantities:
                s = model.entropy_u(u)
                values["entropy"] = s
                values["residual"] = abs(values["phi"] - s + float(theta @ u))
        rows.append(list(theta) + [values[q] for q in quantities])

    if args.format == "object":
        inputs = _model_inputs(args, handle)
        inputs["grid"] = list(args.grid)
        inputs["quantities"] = quantities
        outputs = {"header": header, "rows": rows, "count": len(rows)}
        _emit("sweep", inputs, outputs, {}, "ok")
        return EXIT_OK
    sys.stdout.write(",".join(header) + "\n")
    for row in rows:
        sys.stdout.write(",".join(f"{v:.12g}" for v in row) + "\n")
    print(f"sweep: {len(rows)} rows", file=sys.stderr)
    return EXIT_OK


def _cmd_verify(args) -> int:
    if args.config:
        handle = _resolve_model(args)
        suites = {handle.name: verify_handle(handle)}
        target = handle.name
    elif args.model and args.model != "all":
        if args.model == "numerics":
            suites = {"numerics": verify_numerics()}
        else:
            handle = _resolve_model(args)
            suites = {handle.name: verify_handle(handle)}
        target = args.model
    else:
        suites = verify_all()
        target = "all"

    total = failed = 0
    report = {}
    failing = []
    for suite, results in suites.items():
        report[suite] = []
        for r in results:
            total += 1
            if not r.passed:
                failed += 1
                failing.append(f"{suite}:{r.name}")
            flag = "ok" if r.passed else "FAIL"
            print(f"[{suite}] {r.name}: {flag} (worst {r.worst:.3e},"
                  f" tol {r.tol:.1e})", file=sys.stderr)
            report[suite].append({"name": r.name, "passed": r.passed,
                                  "worst": r.worst, "tol": r.tol, "note": r.note})
    inputs = {"target": target}
    outputs = {"suites": report, "failures": failing,
               "checks": total, "failed": failed}
    status = "ok" if failed == 0 else "error:verify"
    _emit("verify", inputs, outputs, {}, status)
    return EXIT_OK if failed == 0 else EXIT_VERIFY


# --------------------------------------------------------------- parser

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="infogeo",
        description="Dual coordinates, entropy transforms, and divergences"
                    " for a small zoo of statistical models.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, point_flags=True):
        p.add_argument("--model", help="built-in model name")
        p.add_argument("--config", help="INI file describing a model")
        p.add_argument("--tol", type=float, default=None,
                       help="tolerance override for the underlying solver")
        if point_flags:
            p.add_argument("--theta", help="model parameters, comma-separated")
            p.add_argument("--u", help="moment coordinates, comma-separated")

    p = sub.add_parser("massieu", help="log-normalizer, moments, entropy,"
                                       " and the canonical residual at theta")
    add_common(p)
    p.set_defaults(func=_cmd_massieu)

    p = sub.add_parser("maxent", help="model point matching moment targets"
                                      " (or the best fit for summary models)")
    add_common(p)
    p.add_argument("--x", help="data vector (sphere)")
    p.add_argument("--data", help="CSV file of x,y pairs (regression)")
    p.set_defaults(func=_cmd_maxent)

    p = sub.add_parser("divergence", help="divergence of data or a model point"
                                          " from a model point")
    add_common(p)
    p.add_argument("--zeta", help="second model point (model-to-model mode)")
    p.add_argument("--x", help="data: polarization vector or distribution")
    p.add_argument("--z", help="data: coherent amplitude 're,im'")
    p.add_argument("--x-file", dest="x_file", help="data: oscillator state file")
    p.add_argument("--nmax", type=int, default=None,
                   help="oscillator basis cutoff for --z")
    p.set_defaults(func=_cmd_divergence)

    p = sub.add_parser("pythagoras", help="three-point divergence identity"
                                          " (data or model triple)")
    add_common(p)
    p.add_argument("--zeta", help="second model point")
    p.add_argument("--xi", help="third model point (model-triple mode)")
    p.add_argument("--x", help="data: polarization vector or distribution")
    p.add_argument("--z", help="data: coherent amplitude 're,im'")
    p.add_argument("--x-file", dest="x_file", help="data: oscillator state file")
    p.add_argument("--nmax", type=int, default=None,
                   help="oscillator basis cutoff for --z")
    p.set_defaults(func=_cmd_pythagoras)

    p = sub.add_parser("sweep", help="tabulate quantities over a parameter grid")
    add_common(p, point_flags=False)
    p.add_argument("--grid", action="append", default=[],
                   metavar="AXIS=START:STOP:COUNT",
                   help="grid for one theta axis (repeatable); unlisted axes"
                        " are pinned at 0")
    p.add_argument("--quantities",
                   help="comma-separated: phi, entropy, residual, unorm, u1..un")
    p.add_argument("--format", choices=("csv", "object"), default="csv")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("verify", help="run the property suites")
    p.add_argument("target", nargs="?", default=None,
                   help="'all' (default) or a model name")
    p.add_argument("--model", help="verify one built-in model")
    p.add_argument("--config", help="verify the model from an INI file")
    p.set_defaults(func=_cmd_verify)
    return parser


_NEGATIVE_OK = ("--theta", "--u", "--zeta", "--xi", "--x", "--z")


def _normalize_argv(argv: list[str]) -> list[str]:
    # join vector flags with values that begin with a minus sign, which
    # argparse would otherwise read as option strings
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (tok in _NEGATIVE_OK and i + 1 < len(argv)
                and argv[i + 1].startswith("-") and not argv[i + 1].startswith("--")):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = _build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_normalize_argv(argv))
    if args.command == "verify" and args.target and not args.model:
        args.model = args.target
    command = args.command
    try:
        return args.func(args)
    except UsageError as exc:
        _emit(command, {}, {}, {"message": str(exc)}, "error:usage")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfoGeoError as exc:
        _emit(command, {}, {}, {"message": str(exc)}, f"error:{_category(exc)}")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
