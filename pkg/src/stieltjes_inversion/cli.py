"""Command-line front end.

    stieltjes-inv <command> --config model.ini [--out PATH] [--seed N]

Commands: analyze, transform, invert, verify, sweep.  Exit status is 0 when
every check passes, 1 when a suite misses its tolerance and 2 on bad input.
"""
from __future__ import annotations

import argparse
import configparser
import enum
import io
import math
import re
import sys
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import StieltjesError
from .polynomial import Polynomial
from .signal import (
    ExponentialSum,
    RationalSpec,
    Strictness,
    admissible_sector,
    build_model,
    eval_signal,
)
from .transforms import EvalMode, double_laplace, invert
from .verify import (
    ORACLE_TOL,
    PV_TOL,
    REALPART_TOL,
    RESIDUE_TOL,
    THEOREM1_TOL,
    THEOREM2_TOL,
    ZERO_REALPART_TOL,
    Spacing,
    TransformGrid,
    VerificationReport,
    generate_rational_models,
    verify_realpart_identity,
    verify_residue_normalization,
    verify_theorem1,
    verify_theorem2,
)

COMMANDS = ("analyze", "transform", "invert", "verify", "sweep")
EXIT_OK, EXIT_FAILED, EXIT_INVALID = 0, 1, 2


class ConfigError(StieltjesError, ValueError):
    def __init__(self, message, line=None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line


class ModelSource(enum.Enum):
    RATIONAL_COEFFS = "rational_coeffs"
    RATIONAL_ROOTS = "rational_roots"
    POLES = "poles"


@dataclass(frozen=True)
class Tolerances:
    theorem1: float = THEOREM1_TOL
    theorem2: float = THEOREM2_TOL
    realpart: float = REALPART_TOL
    realpart_zero: float = ZERO_REALPART_TOL
    pv: float = PV_TOL
    residue: float = RESIDUE_TOL
    oracle: float = ORACLE_TOL


@dataclass(frozen=True)
class RunConfig:
    model_source: ModelSource | None = None
    num_coeffs: tuple[complex, ...] = ()
    den_coeffs: tuple[complex, ...] = ()
    den_roots: tuple[complex, ...] = ()
    poles: tuple[complex, ...] = ()
    residues: tuple[complex, ...] = ()
    strictness: Strictness = Strictness.PAPER_STRICT
    grid: TransformGrid = field(default_factory=TransformGrid)
    tolerances: Tolerances = field(default_factory=Tolerances)
    command: str | None = None
    out: str | None = None
    report: str | None = None
    seed: int = 7
    count: int = 100
    probes: int = 20
    degree_min: int = 3
    degree_max: int = 8


_ALLOWED = {
    "model": {"num_coeffs", "den_coeffs", "den_roots", "poles", "residues", "strictness"},
    "grid": {"s_min", "s_max", "points", "spacing"},
    "tolerances": {"theorem1", "theorem2", "realpart", "realpart_zero", "pv", "residue", "oracle"},
    "run": {"command", "out", "report", "seed", "count", "probes", "degree_min", "degree_max"},
}

def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` / ``a-bi`` / ``bi`` / ``a`` (``j`` accepted too)."""
    t = text.strip().replace("−", "-").replace(" ", "").replace("i", "j")
    if t in ("j", "+j"):
        t = "1j"
    elif t == "-j":
        t = "-1j"
    elif t.endswith("j") and t[-2:-1] in ("+", "-"):
        t = t[:-1] + "1j"
    try:
        return complex(t)
    except ValueError:
        raise ValueError(f"malformed complex number {text.strip()!r}") from None


def _unquote(v: str) -> str:
    v = v.strip()
    if len(v) >= 2 and v[0] == v[-1] and v[0] in "\"'":
        v = v[1:-1]
    return v


def _line_numbers(text: str) -> dict[tuple[str, str], int]:
    out, section = {}, None
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            out[(section, "")] = n
        elif section and ("=" in line or ":" in line) and not line.startswith(("#", ";")):
            key = re.split(r"[=:]", line, maxsplit=1)[0].strip().lower()
            out.setdefault((section, key), n)
    return out


def parse_config(text: str) -> RunConfig:
    """Parse the INI-style run configuration; unknown sections or keys are errors."""
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";",))
    try:
        parser.read_string(text)
    except configparser.ParsingError as exc:
        line = exc.errors[0][0] if exc.errors else None
        raise ConfigError("cannot parse configuration", line) from None
    except configparser.DuplicateOptionError as exc:
        raise ConfigError(f"duplicate key {exc.option!r} in [{exc.section}]", exc.lineno) from None
    except configparser.DuplicateSectionError as exc:
        raise ConfigError(f"duplicate section [{exc.section}]", exc.lineno) from None
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None

    lines = _line_numbers(text)
    for section in parser.sections():
        if section not in _ALLOWED:
            raise ConfigError(f"unknown section [{section}]", lines.get((section, "")))
        for key in parser[section]:
            if key not in _ALLOWED[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}]", lines.get((section, key)))

    def raw(section, key):
        if parser.has_option(section, key):
            return _unquote(parser.get(section, key))
        return None

    def convert(section, key, fn, what):
        v = raw(section, key)
        if v is None:
            return None
        try:
            return fn(v)
        except ValueError as exc:
            raise ConfigError(f"{section}.{key}: malformed {what} ({exc})", lines.get((section, key))) from None

    def clist(v):
        return tuple(parse_complex(x) for x in v.split(",") if x.strip())

    cfg = {}
    present = [k for k in ("den_coeffs", "den_roots", "poles") if raw("model", k) is not None]
    if len(present) > 1:
        second = present[1]
        raise ConfigError(
            f"conflicting model sources: {', '.join(present)} (give exactly one)",
            lines.get(("model", second)),
        )
    for key in ("num_coeffs", "den_coeffs", "den_roots", "poles", "residues"):
        v = convert("model", key, clist, "complex list")
        if v is not None:
            cfg[key] = v
    if present:
        src = present[0]
        cfg["model_source"] = {
            "den_coeffs": ModelSource.RATIONAL_COEFFS,
            "den_roots": ModelSource.RATIONAL_ROOTS,
            "poles": ModelSource.POLES,
        }[src]
        if src == "poles":
            if "residues" not in cfg:
                raise ConfigError("model.poles given without model.residues", lines.get(("model", "poles")))
            if "num_coeffs" in cfg:
                raise ConfigError(
                    "conflicting model sources: num_coeffs together with poles",
                    lines.get(("model", "num_coeffs")),
                )
        else:
            if "num_coeffs" not in cfg:
                raise ConfigError(f"model.{src} given without model.num_coeffs", lines.get(("model", src)))
            if "residues" in cfg:
                raise ConfigError(
                    f"conflicting model sources: residues together with {src}",
                    lines.get(("model", "residues")),
                )
    elif "num_coeffs" in cfg or "residues" in cfg:
        key = "num_coeffs" if "num_coeffs" in cfg else "residues"
        raise ConfigError("incomplete model: no den_coeffs, den_roots or poles", lines.get(("model", key)))

    strict = convert("model", "strictness", lambda v: Strictness(v.strip().lower()), "strictness")
    if strict is not None:
        cfg["strictness"] = strict

    g = TransformGrid()
    s_min = convert("grid", "s_min", float, "number")
    s_max = convert("grid", "s_max", float, "number")
    points = convert("grid", "points", int, "integer")
    spacing = convert("grid", "spacing", lambda v: _spacing(v), "spacing")
    try:
        cfg["grid"] = TransformGrid(
            s_min if s_min is not None else g.s_min,
            s_max if s_max is not None else g.s_max,
            points if points is not None else g.points,
            spacing if spacing is not None else g.spacing,
        )
    except ValueError as exc:
        raise ConfigError(str(exc), lines.get(("grid", ""))) from None

    tol_kwargs = {}
    for key in _ALLOWED["tolerances"]:
        v = convert("tolerances", key, float, "number")
        if v is not None:
            if not v > 0:
                raise ConfigError(f"tolerances.{key} must be positive", lines.get(("tolerances", key)))
            tol_kwargs[key] = v
    cfg["tolerances"] = Tolerances(**tol_kwargs)

    for key in ("seed", "count", "probes", "degree_min", "degree_max"):
        v = convert("run", key, int, "integer")
        if v is not None:
            cfg[key] = v
    for key in ("command", "out", "report"):
        v = raw("run", key)
        if v is not None:
            cfg[key] = v
    if cfg.get("command") is not None and cfg["command"] not in COMMANDS:
        raise ConfigError(f"unknown command {cfg['command']!r}", lines.get(("run", "command")))
    return RunConfig(**cfg)


def _spacing(v: str) -> Spacing:
    v = v.strip().lower()
    if v in ("log", "logarithmic"):
        return Spacing.LOGARITHMIC
    if v in ("lin", "linear"):
        return Spacing.LINEAR
    raise ValueError(f"unknown spacing {v!r}")


def rational_spec(cfg: RunConfig) -> RationalSpec:
    q = Polynomial(cfg.num_coeffs)
    if cfg.model_source is ModelSource.RATIONAL_COEFFS:
        p = Polynomial(cfg.den_coeffs)
    else:
        p = Polynomial.from_roots(cfg.den_roots)
    return RationalSpec(q, p, cfg.strictness)


def spec_from_model(model: ExponentialSum) -> RationalSpec:
    """Rational data Q/P whose partial fractions are the model's terms."""
    lam = [t.pole for t in model.terms]
    P = Polynomial.from_roots(lam)
    Q = Polynomial(())
    for k, t in enumerate(model.terms):
        Q = _poly_add(Q, Polynomial.from_roots([l for j, l in enumerate(lam) if j != k], t.residue))
    if model.real_signal:
        P = Polynomial(tuple(c.real for c in P.coeffs))
        Q = Polynomial(tuple(c.real for c in Q.coeffs))
    return RationalSpec(Q, P, Strictness.RELAXED)


def _poly_add(a: Polynomial, b: Polynomial) -> Polynomial:
    n = max(len(a.coeffs), len(b.coeffs))
    ca = list(a.coeffs) + [0j] * (n - len(a.coeffs))
    cb = list(b.coeffs) + [0j] * (n - len(b.coeffs))
    return Polynomial(tuple(x + y for x, y in zip(ca, cb)))


def load_model(cfg: RunConfig) -> tuple[ExponentialSum, RationalSpec]:
    if cfg.model_source is None:
        raise ConfigError("no model given: set one of model.den_coeffs, model.den_roots, model.poles")
    if cfg.model_source is ModelSource.POLES:
        model = ExponentialSum.from_poles(cfg.poles, cfg.residues)
        return model, spec_from_model(model)
    spec = rational_spec(cfg)
    return build_model(spec), spec


def fmt(x: float) -> str:
    return f"{x:.17g}"


def fmt_c(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}i"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def cmd_analyze(cfg: RunConfig):
    model, _ = load_model(cfg)
    sector = admissible_sector(model)
    lines = [
        f"terms: {len(model.terms)}",
        f"real_signal: {'true' if model.real_signal else 'false'}",
        f"strictness: {cfg.strictness.value}",
    ]
    for t in model.terms:
        lines.append(f"pole {fmt_c(t.pole)} residue {fmt_c(t.residue)}")
    lines.append(f"phi0_sup: {fmt(sector.phi0_sup)}")
    lines += [f"warning: {w}" for w in model.warnings]
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_transform(cfg: RunConfig):
    model, _ = load_model(cfg)
    rows, worst = [], 0.0
    for s in cfg.grid.abscissae():
        s = float(s)
        r = double_laplace(model, s)
        try:
            err = abs(double_laplace(model, s, EvalMode.QUADRATURE_ORACLE) - r)
        except StieltjesError:
            err = math.inf
        worst = max(worst, err / (1 + abs(r)))
        rows.append((s, r.real, r.imag, err))
    code = EXIT_OK if worst <= cfg.tolerances.oracle else EXIT_FAILED
    return _csv(("s", "re_r", "im_r", "oracle_abs_err"), rows), code


def cmd_invert(cfg: RunConfig):
    model, _ = load_model(cfg)
    rows, worst = [], 0.0
    for s in cfg.grid.abscissae():
        s = float(s)
        z = eval_signal(model, s).real
        zr = invert(model, s)
        abs_err = abs(zr - z)
        rel = abs_err / (1 + abs(z))
        worst = max(worst, rel)
        rows.append((s, z, zr, abs_err, rel))
    code = EXIT_OK if worst <= cfg.tolerances.theorem2 else EXIT_FAILED
    return _csv(("s", "z_true", "z_rec", "abs_err", "rel_err"), rows), code


def run_suites(model, spec, cfg: RunConfig, probe_seed: int = 0) -> list[VerificationReport]:
    tol = cfg.tolerances
    return [
        verify_theorem1(model, cfg.grid, tol.theorem1, oracle_tol=tol.oracle),
        verify_theorem2(model, cfg.grid, tol.theorem2),
        verify_realpart_identity(
            model, cfg.grid, tol.realpart, zero_tol=tol.realpart_zero, pv_tol=tol.pv
        ),
        verify_residue_normalization(
            spec, cfg.probes, tol.residue, seed=probe_seed, oracle_tol=tol.oracle
        ),
    ]


def cmd_verify(cfg: RunConfig):
    model, spec = load_model(cfg)
    reports = run_suites(model, spec, cfg)
    text = "\n\n".join(r.to_text() for r in reports) + "\n"
    return text, EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


SUITE_NAMES = ("theorem1", "theorem2", "realpart", "residue")


def cmd_sweep(cfg: RunConfig):
    ensemble = generate_rational_models(
        cfg.seed, cfg.count, degree_range=(cfg.degree_min, cfg.degree_max)
    )
    header = ["model", "l", "n"]
    for name in SUITE_NAMES:
        header += [f"{name}_err", f"{name}_check_max", f"{name}_pass"]
    rows = []
    worst = {name: (-1.0, -1) for name in SUITE_NAMES}
    failed = {name: 0 for name in SUITE_NAMES}
    for idx, g in enumerate(ensemble):
        reports = run_suites(g.model, g.spec, cfg, probe_seed=cfg.seed + idx)
        row = [idx, g.spec.denominator.degree, g.spec.numerator.degree]
        for name, rep in zip(SUITE_NAMES, reports):
            check_max = max((c.value / c.tol for c in rep.checks), default=0.0)
            row += [rep.max_rel_err, check_max, 1 if rep.passed else 0]
            if rep.max_rel_err > worst[name][0]:
                worst[name] = (rep.max_rel_err, idx)
            failed[name] += 0 if rep.passed else 1
        rows.append(row)

    lines = [f"sweep: seed {cfg.seed}, {cfg.count} models, l in [{cfg.degree_min}, {cfg.degree_max}]"]
    tols = dict(zip(SUITE_NAMES, (cfg.tolerances.theorem1, cfg.tolerances.theorem2,
                                  cfg.tolerances.realpart, cfg.tolerances.residue)))
    for name in SUITE_NAMES:
        err, idx = worst[name]
        lines += [
            "",
            f"identity: {name}",
            f"worst_max_rel_err: {fmt(err)} (model {idx}, tol {tols[name]:.3g})",
            f"failed_models: {failed[name]}",
            "PASS" if failed[name] == 0 else "FAIL",
        ]
    ok = all(v == 0 for v in failed.values())
    csv_text = _csv(header, rows)
    return (csv_text, "\n".join(lines) + "\n"), EXIT_OK if ok else EXIT_FAILED


def run_command(cfg: RunConfig, stdout=None, stderr=None) -> int:
    """Execute ``cfg.command``; returns the process exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    handlers = {
        "analyze": cmd_analyze,
        "transform": cmd_transform,
        "invert": cmd_invert,
        "verify": cmd_verify,
        "sweep": cmd_sweep,
    }
    if cfg.command not in handlers:
        print(f"error: unknown command {cfg.command!r}", file=stderr)
        return EXIT_INVALID
    try:
        output, code = handlers[cfg.command](cfg)
    except (StieltjesError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INVALID

    if cfg.command == "sweep":
        data, report = output
        _emit(data, cfg.out, stdout)
        if cfg.report is not None:
            _emit(report, cfg.report, stdout)
        elif cfg.out is not None:
            stdout.write(report)
        else:
            stderr.write(report)
    else:
        _emit(output, cfg.out, stdout)
    return code


def _emit(text: str, path: str | None, stream) -> None:
    if path is None:
        stream.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="stieltjes-inv",
        description="Boundary-value inversion of double Laplace transforms of exponential sums.",
    )
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="INI run configuration (optional for sweep)")
    ap.add_argument("--out", help="write CSV / report here instead of standard output")
    ap.add_argument("--report", help="sweep only: path for the text report")
    ap.add_argument("--seed", type=int, help="ensemble seed (sweep)")
    ap.add_argument("--count", type=int, help="ensemble size (sweep)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config is None:
            if args.command != "sweep":
                raise ConfigError(f"{args.command} needs --config")
            cfg = RunConfig()
        else:
            with open(args.config, encoding="utf-8") as fh:
                cfg = parse_config(fh.read())
    except (OSError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    overrides = {"command": args.command}
    for key in ("out", "report", "seed", "count"):
        v = getattr(args, key)
        if v is not None:
            overrides[key] = v
    return run_command(replace(cfg, **overrides))


if __name__ == "__main__":
    raise SystemExit(main())
