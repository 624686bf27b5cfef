"""Command-line front end.

Subcommands: curvature, verify, construct, oracle, identities (an alias
for verify --identities).  Jobs are JSON spec files; reports are JSON
on stdout (and --out), byte-identical across runs for identical specs.

Exit codes: 0 pass, 1 verification fail, 2 spec/parse error,
3 singular domain, 4 family hypothesis violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import __version__
from .expr import (
    Domain,
    EvaluationError,
    Expr,
    ParseError,
    compile_expr,
    parse,
    to_string,
)
from .families import (
    Branch1,
    Branch2,
    ConstantComponents,
    ConstantMetric,
    FamilyParams,
    HypothesisError,
    construct,
)
from .geometry import DiagonalMetric, is_flat, ricci
from .identities import (
    PotentialFunction,
    check_curvature_identity,
    check_laplacian_scalar,
    check_ric_vv,
    check_scalar_divergence,
    check_steady_soliton,
    gradient_field,
)
from .numeric import (
    DomainTooSingularError,
    SamplingConfig,
    fd_validate,
    sample_points,
    sampled_max_abs,
    sampled_range,
)
from .riccifield import (
    FrameField,
    closedness_defect,
    equation_guards,
    from_coordinates,
    residual_system,
    verify,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_SPEC_ERROR = 2
EXIT_SINGULAR_DOMAIN = 3
EXIT_HYPOTHESIS = 4


class SpecError(ValueError):
    """The job spec file is malformed."""


# ---------------------------------------------------------------------------
# Spec loading
# ---------------------------------------------------------------------------


def load_spec(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise SpecError(f"cannot read spec file {path}: {err}") from None
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as err:
        raise SpecError(f"spec file {path} is not valid JSON: {err}") from None
    if not isinstance(spec, dict):
        raise SpecError("spec must be a JSON object")
    return spec


def _parse_expr(text, label: str) -> Expr:
    if not isinstance(text, str):
        raise SpecError(f"{label} must be an expression string, got {text!r}")
    try:
        return parse(text)
    except ParseError as err:
        raise SpecError(f"{label}: {err}") from None


def parse_domain_flag(text: str) -> dict:
    """Parse --domain "x1:lo,hi;x2:lo,hi" into spec-domain form."""
    out = {}
    for part in text.split(";"):
        if ":" not in part:
            raise SpecError(f"bad --domain segment {part!r}")
        name, _, rng = part.partition(":")
        name = name.strip()
        if name not in ("x1", "x2"):
            raise SpecError(f"bad --domain coordinate {name!r}")
        pieces = rng.split(",")
        if len(pieces) != 2:
            raise SpecError(f"bad --domain range {rng!r}")
        try:
            out[name] = [float(pieces[0]), float(pieces[1])]
        except ValueError:
            raise SpecError(f"bad --domain range {rng!r}") from None
    return out


def effective_domain(spec: dict, args) -> Domain:
    dom = dict(spec.get("domain") or {})
    if getattr(args, "domain", None):
        dom.update(parse_domain_flag(args.domain))
    x1 = dom.get("x1", [-1.0, 1.0])
    x2 = dom.get("x2", [-1.0, 1.0])
    guard = dom.get("guard", 1e-6)
    try:
        return Domain(x1_range=(float(x1[0]), float(x1[1])), x2_range=(float(x2[0]), float(x2[1])), guard=float(guard))
    except (TypeError, ValueError, IndexError) as err:
        raise SpecError(f"bad domain: {err}") from None


def effective_config(spec: dict, args) -> SamplingConfig:
    sampling = dict(spec.get("sampling") or {})
    if getattr(args, "seed", None) is not None:
        sampling["seed"] = args.seed
    if getattr(args, "samples", None) is not None:
        sampling["samples"] = args.samples
    if getattr(args, "tolerance", None) is not None:
        sampling["tolerance"] = args.tolerance
    defaults = SamplingConfig()
    try:
        return SamplingConfig(
            samples=int(sampling.get("samples", defaults.samples)),
            seed=int(sampling.get("seed", defaults.seed)),
            tolerance=float(sampling.get("tolerance", defaults.tolerance)),
            fd_step=float(sampling.get("fd_step", defaults.fd_step)),
            fd_tolerance=float(sampling.get("fd_tolerance", defaults.fd_tolerance)),
        )
    except (TypeError, ValueError) as err:
        raise SpecError(f"bad sampling config: {err}") from None


def spec_metric(spec: dict) -> DiagonalMetric:
    metric = spec.get("metric")
    if not isinstance(metric, dict) or "f1" not in metric or "f2" not in metric:
        raise SpecError('spec needs "metric": {"f1": ..., "f2": ...}')
    return DiagonalMetric(
        f1=_parse_expr(metric["f1"], "metric.f1"),
        f2=_parse_expr(metric["f2"], "metric.f2"),
    )


def spec_field(spec: dict, m: DiagonalMetric) -> FrameField:
    field = spec.get("field")
    if not isinstance(field, dict) or "V1" not in field or "V2" not in field:
        raise SpecError('spec needs "field": {"frame": ..., "V1": ..., "V2": ...}')
    frame = field.get("frame", "orthonormal")
    v1 = _parse_expr(field["V1"], "field.V1")
    v2 = _parse_expr(field["V2"], "field.V2")
    if frame == "orthonormal":
        return FrameField(V1=v1, V2=v2)
    if frame == "coordinate":
        return from_coordinates(m, v1, v2)
    raise SpecError(f'field.frame must be "orthonormal" or "coordinate", got {frame!r}')


_FAMILY_KINDS = {
    "constant_components": ("f1", "f2", "c1", "c2"),
    "branch1": ("f2", "k", "c"),
    "branch2": ("f2", "c", "c1", "c2"),
    "constant_metric": ("k1", "k2", "c1", "c2"),
}


def spec_family(spec: dict) -> FamilyParams:
    family = spec.get("family")
    if not isinstance(family, dict) or "kind" not in family:
        raise SpecError('spec needs "family": {"kind": ..., ...}')
    kind = family["kind"]
    if kind not in _FAMILY_KINDS:
        raise SpecError(f"unknown family kind {kind!r}; expected one of {sorted(_FAMILY_KINDS)}")
    missing = [k for k in _FAMILY_KINDS[kind] if k not in family]
    if missing:
        raise SpecError(f"family {kind!r} is missing parameters {missing}")
    try:
        if kind == "constant_components":
            return ConstantComponents(
                f1=_parse_expr(family["f1"], "family.f1"),
                f2=_parse_expr(family["f2"], "family.f2"),
                c1=float(family["c1"]),
                c2=float(family["c2"]),
            )
        if kind == "branch1":
            return Branch1(f2=_parse_expr(family["f2"], "family.f2"), k=float(family["k"]), c=float(family["c"]))
        if kind == "branch2":
            return Branch2(
                f2=_parse_expr(family["f2"], "family.f2"),
                c=float(family["c"]),
                c1=float(family["c1"]),
                c2=float(family["c2"]),
            )
        return ConstantMetric(
            k1=float(family["k1"]), k2=float(family["k2"]), c1=float(family["c1"]), c2=float(family["c2"])
        )
    except (TypeError, ValueError) as err:
        raise SpecError(f"bad family parameters: {err}") from None


def _check_job_shape(spec: dict, command: str) -> None:
    present = [k for k in ("field", "potential", "family") if spec.get(k) is not None]
    if command == "verify":
        if len(present) != 1:
            raise SpecError(f"verify jobs need exactly one of field/potential/family, found {present or 'none'}")
        if present == ["family"]:
            raise SpecError("family jobs are run with the construct command")
    if command == "construct" and present != ["family"]:
        raise SpecError(f"construct jobs need exactly a family section, found {present or 'none'}")


# ---------------------------------------------------------------------------
# Report assembly
# ---------------------------------------------------------------------------


def _echo_domain(d: Domain) -> dict:
    return {"x1": list(d.x1_range), "x2": list(d.x2_range), "guard": d.guard}


def _echo_config(cfg: SamplingConfig) -> dict:
    return {
        "samples": cfg.samples,
        "seed": cfg.seed,
        "tolerance": cfg.tolerance,
        "fd_step": cfg.fd_step,
        "fd_tolerance": cfg.fd_tolerance,
    }


def _echo_spec(spec: dict, d: Domain, cfg: SamplingConfig) -> dict:
    echo = {"domain": _echo_domain(d), "sampling": _echo_config(cfg)}
    for key in ("metric", "field", "potential", "family"):
        if spec.get(key) is not None:
            echo[key] = spec[key]
    return echo


def curvature_section(m: DiagonalMetric, d: Domain, cfg: SamplingConfig) -> dict:
    curv = ricci(m)
    exprs = {"h12": curv.h12, "h21": curv.h21, "rho": curv.rho, "r": curv.r}
    points = sample_points(d, cfg, equation_guards(m, exprs.values()))
    section = {}
    for name, e in exprs.items():
        lo, hi = sampled_range(e, points)
        section[name] = to_string(e)
        section[f"{name}_range"] = [lo, hi]
    return section


def render_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _write_report(report: dict, args) -> None:
    text = render_report(report)
    sys.stdout.write(text)
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")


def emit_grid(path: str, m: DiagonalMetric, exprs: dict, d: Domain, size: int) -> None:
    """CSV grid of sampled values on a regular size x size lattice."""
    if size < 2:
        raise SpecError(f"--grid-size must be at least 2, got {size}")
    fns = {name: compile_expr(e) for name, e in exprs.items()}
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x1", "x2", *fns.keys()])
        for i in range(size):
            x1 = d.x1_range[0] + (d.x1_range[1] - d.x1_range[0]) * i / (size - 1)
            for j in range(size):
                x2 = d.x2_range[0] + (d.x2_range[1] - d.x2_range[0]) * j / (size - 1)
                row = [repr(x1), repr(x2)]
                for fn in fns.values():
                    try:
                        row.append(repr(fn(x1, x2)))
                    except Exception:
                        row.append("nan")
                writer.writerow(row)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_curvature(args) -> int:
    spec = load_spec(args.spec)
    d = effective_domain(spec, args)
    cfg = effective_config(spec, args)
    m = spec_metric(spec)
    section = curvature_section(m, d, cfg)
    report = {
        "version": __version__,
        "command": "curvature",
        "seed": cfg.seed,
        "spec": _echo_spec(spec, d, cfg),
        "curvature": section,
        "rho_range": section["rho_range"],
        "flat": is_flat(m, d, cfg),
        "verdict": "pass",
    }
    if args.emit_grid:
        emit_grid(args.emit_grid, m, {"rho": ricci(m).rho}, d, args.grid_size)
    _write_report(report, args)
    return EXIT_PASS


def _identity_verdicts(m, V, d, cfg, potential=None) -> dict:
    verdicts = {
        "ric_vv": check_ric_vv(m, V, d, cfg),
        "scalar_divergence": check_scalar_divergence(m, V, d, cfg),
        "curvature_identity": check_curvature_identity(m, V, d, cfg),
    }
    defect = closedness_defect(m, V)
    points = sample_points(d, cfg, equation_guards(m, [defect]))
    maxima, _ = sampled_max_abs([defect], points)
    verdicts["closedness"] = maxima[0] <= cfg.tolerance
    if potential is not None:
        verdicts["steady_soliton"] = check_steady_soliton(m, potential, d, cfg)
        verdicts["laplacian_scalar"] = check_laplacian_scalar(m, potential, d, cfg)
    return verdicts


def _verify_report(spec, m, V, d, cfg, args, potential=None, extra=None) -> tuple[dict, int]:
    result = verify(m, V, d, cfg)
    section = curvature_section(m, d, cfg)
    command = "verify" if args.command == "identities" else args.command
    report = {
        "version": __version__,
        "command": command,
        "seed": cfg.seed,
        "spec": _echo_spec(spec, d, cfg),
        "curvature": section,
        "rho_range": section["rho_range"],
        "flat": is_flat(m, d, cfg),
        "field": {"V1": to_string(V.V1), "V2": to_string(V.V2)},
        "residual_max": list(result.max_abs),
        "points_used": result.points_used,
        "verdict": result.verdict,
    }
    if extra:
        report.update(extra)
    exit_code = EXIT_PASS if result.passed else EXIT_FAIL
    if getattr(args, "identities", False) and result.passed:
        verdicts = _identity_verdicts(m, V, d, cfg, potential=potential)
        report["identities"] = verdicts
        if not all(verdicts.values()):
            report["verdict"] = "fail"
            exit_code = EXIT_FAIL
    if args.emit_grid:
        residuals = residual_system(m, V)
        exprs = {"rho": ricci(m).rho}
        exprs.update({f"R{i+1}": r for i, r in enumerate(residuals)})
        emit_grid(args.emit_grid, m, exprs, d, args.grid_size)
    return report, exit_code


def cmd_verify(args) -> int:
    spec = load_spec(args.spec)
    _check_job_shape(spec, "verify")
    d = effective_domain(spec, args)
    cfg = effective_config(spec, args)
    m = spec_metric(spec)
    potential = None
    if spec.get("potential") is not None:
        potential = PotentialFunction(_parse_expr(spec["potential"], "potential"))
        V = gradient_field(m, potential)
    else:
        V = spec_field(spec, m)
    report, exit_code = _verify_report(spec, m, V, d, cfg, args, potential=potential)
    _write_report(report, args)
    return exit_code


def cmd_construct(args) -> int:
    spec = load_spec(args.spec)
    _check_job_shape(spec, "construct")
    d = effective_domain(spec, args)
    cfg = effective_config(spec, args)
    params = spec_family(spec)
    m, V = construct(params, d, cfg)
    derived = {
        "metric": {"f1": to_string(m.f1), "f2": to_string(m.f2)},
        "field": {"frame": "orthonormal", "V1": to_string(V.V1), "V2": to_string(V.V2)},
        "domain": _echo_domain(d),
        "sampling": _echo_config(cfg),
    }
    emit_path = args.emit_spec or str(Path(args.spec).with_suffix("")) + ".derived.json"
    Path(emit_path).write_text(json.dumps(derived, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    extra = {
        "derived_spec": derived,
        "derived_spec_path": emit_path,
        "proof_only_case": isinstance(params, Branch1) and params.k == 0.0,
    }
    report, exit_code = _verify_report(spec, m, V, d, cfg, args, extra=extra)
    _write_report(report, args)
    return exit_code


def cmd_oracle(args) -> int:
    spec = load_spec(args.spec)
    d = effective_domain(spec, args)
    cfg = effective_config(spec, args)
    m = spec_metric(spec)
    curv = ricci(m)
    exprs = {"h12": curv.h12, "h21": curv.h21, "rho": curv.rho}
    if spec.get("field") is not None:
        V = spec_field(spec, m)
        for i, r in enumerate(residual_system(m, V)):
            exprs[f"R{i+1}"] = r
    elif spec.get("potential") is not None:
        V = gradient_field(m, PotentialFunction(_parse_expr(spec["potential"], "potential")))
        for i, r in enumerate(residual_system(m, V)):
            exprs[f"R{i+1}"] = r
    guards = [m.f1, m.f2]
    section = {}
    worst = 0.0
    for name, e in exprs.items():
        outcome = fd_validate(e, d, cfg, guards=guards)
        worst = max(worst, outcome.max_rel_error)
        section[name] = {
            "max_rel_error": outcome.max_rel_error,
            "points_used": outcome.points_used,
            "points_skipped": outcome.points_skipped,
        }
    verdict = "pass" if worst <= cfg.fd_tolerance else "fail"
    report = {
        "version": __version__,
        "command": "oracle",
        "seed": cfg.seed,
        "spec": _echo_spec(spec, d, cfg),
        "fd": section,
        "fd_tolerance": cfg.fd_tolerance,
        "verdict": verdict,
    }
    _write_report(report, args)
    return EXIT_PASS if verdict == "pass" else EXIT_FAIL


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _add_common_flags(sub) -> None:
    sub.add_argument("--spec", required=True, help="path to the JSON job spec")
    sub.add_argument("--out", help="also write the JSON report to this path")
    sub.add_argument("--seed", type=int, help="override sampling.seed")
    sub.add_argument("--samples", type=int, help="override sampling.samples")
    sub.add_argument("--tolerance", type=float, help="override sampling.tolerance")
    sub.add_argument("--domain", help='override domain, e.g. "x1:-1,1;x2:-1,1"')
    sub.add_argument("--emit-grid", help="write a CSV grid of sampled values to this path")
    sub.add_argument("--grid-size", type=int, default=21, help="grid resolution per axis")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ricci",
        description="Curvature and Ricci-vector-field checks for diagonal plane metrics",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("curvature", help="curvature data and flatness of the metric")
    _add_common_flags(p)
    p.set_defaults(handler=cmd_curvature)

    p = subs.add_parser("verify", help="check nabla V = Q for the spec's field or potential")
    _add_common_flags(p)
    p.add_argument("--identities", action="store_true", help="append consequence-identity verdicts")
    p.set_defaults(handler=cmd_verify)

    p = subs.add_parser("identities", help="alias for verify --identities")
    _add_common_flags(p)
    p.set_defaults(handler=cmd_verify, identities=True)

    p = subs.add_parser("construct", help="build a family pair, emit its spec, and verify it")
    _add_common_flags(p)
    p.add_argument("--emit-spec", help="path for the derived metric+field spec")
    p.set_defaults(handler=cmd_construct)

    p = subs.add_parser("oracle", help="finite-difference validation of all derived expressions")
    _add_common_flags(p)
    p.set_defaults(handler=cmd_oracle)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (SpecError, ParseError) as err:
        print(f"spec error: {err}", file=sys.stderr)
        return EXIT_SPEC_ERROR
    except DomainTooSingularError as err:
        print(f"singular domain: {err}", file=sys.stderr)
        return EXIT_SINGULAR_DOMAIN
    except HypothesisError as err:
        print(f"{err}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except EvaluationError as err:
        print(f"evaluation error: {err}", file=sys.stderr)
        return EXIT_SINGULAR_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
