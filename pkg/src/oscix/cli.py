"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import serialize
from .amplitude import parse_amplitude
from .analysis import parse_grid, remainder_series
from .core import DomainError, NumericalError, OscixError, Phase, format_fraction, parse_phase
from .expansion import PRESET_HELP, eval_expansion, expand, expansion_to_dict, preset
from .oracle import QuadratureConfig, oracle_1d_regularized, oracle_rotated

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3


@dataclass
class RunSpec:
    command: str
    phase: str | None = None
    preset: str | None = None
    amplitude: str = "1"
    n1: int | None = None
    lam: float | None = None
    grid: str = "20:640:8"
    method: str = "rotated"
    chi: str = "gauss"
    nodes: int | None = None
    format: str | None = None
    output: str | None = None
    keep_zeros: bool = False
    timestamp: bool = True

    def __post_init__(self):
        if (self.phase is None) == (self.preset is None) and self.command != "presets":
            raise DomainError("give exactly one of --phase and --preset")
        if self.format is not None and self.format not in ("json", "csv", "pretty"):
            raise DomainError(f"unknown output format {self.format!r}")

    @classmethod
    def from_config(cls, path: str, overrides: dict) -> "RunSpec":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise DomainError(f"cannot read config {path}: {exc}") from None
        if not isinstance(data, dict):
            raise DomainError("config must be a JSON object")
        if "lambda" in data:
            data["lam"] = data.pop("lambda")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)

    def resolve_phase(self) -> Phase:
        return preset(self.preset) if self.preset is not None else parse_phase(self.phase)

    def quadrature(self) -> QuadratureConfig:
        if self.nodes is None:
            return QuadratureConfig()
        return QuadratureConfig(nodes=self.nodes, nodes_nd=self.nodes)

    def require_n1(self) -> int:
        if self.n1 is None:
            raise DomainError("--n1 is required for this command")
        return int(self.n1)

    def require_lambda(self) -> float:
        if self.lam is None:
            raise DomainError("--lambda is required for this command")
        lam = float(self.lam)
        if not (math.isfinite(lam) and lam > 0):
            raise DomainError(f"lambda must be a finite positive number, got {self.lam}")
        return lam


def _complex(z: complex) -> dict:
    return {"re": z.real, "im": z.imag}


def _header(spec: RunSpec, phase: Phase) -> dict:
    out = {"command": spec.command, "phase_canonical": phase.describe(),
           "permutation": [j + 1 for j in phase.permutation], "amplitude": spec.amplitude}
    if spec.timestamp:
        out["generated"] = serialize.timestamp()
    return out


def _run_oracle(spec: RunSpec, phase: Phase, amp, lam: float):
    if spec.method == "rotated":
        return oracle_rotated(phase, amp, lam, spec.quadrature())
    if spec.method == "regularized":
        if phase.n != 1:
            raise DomainError("the regularized oracle is one-dimensional")
        m, s = phase.monomials[0]
        return oracle_1d_regularized(m, s, amp, lam, chi=spec.chi)
    raise DomainError(f"unknown oracle method {spec.method!r}")


def cmd_expand(spec: RunSpec) -> str:
    phase = spec.resolve_phase()
    amp = parse_amplitude(spec.amplitude, phase.n)
    e = expand(phase, amp, spec.require_n1(), keep_zeros=spec.keep_zeros)
    fmt = spec.format or "json"
    if fmt == "json":
        doc = {**_header(spec, phase), "expansion": expansion_to_dict(e)}
        if spec.lam is not None:
            lam = spec.require_lambda()
            doc["lambda"] = lam
            doc["value"] = _complex(eval_expansion(e, lam))
        return serialize.dumps(doc) + "\n"
    if fmt == "csv":
        lines = [f"# remainder_order: {format_fraction(e.remainder_order)}", "exponent,re,im,alphas"]
        for t in e.terms:
            alphas = " ".join("(" + ";".join(map(str, a)) + ")" for a in t.contributors)
            lines.append(f"{format_fraction(t.exponent)},{t.coefficient.real:.17g},"
                         f"{t.coefficient.imag:.17g},{alphas}")
        return "\n".join(lines) + "\n"
    lines = [f"phase      {phase.describe()}  (canonical; permutation "
             f"{[j + 1 for j in phase.permutation]})",
             f"amplitude  {amp.label}", f"N1         {e.n1}",
             f"remainder  O(lambda^-{format_fraction(e.remainder_order)})", ""]
    if not e.terms:
        lines.append("(no terms: every retained coefficient vanishes or the index set is empty)")
    for t in e.terms:
        c = t.coefficient
        lines.append(f"  lambda^-{format_fraction(t.exponent):<8} {c.real:+.12e} {c.imag:+.12e}i")
    return "\n".join(lines) + "\n"


def cmd_oracle(spec: RunSpec) -> str:
    phase = spec.resolve_phase()
    amp = parse_amplitude(spec.amplitude, phase.n)
    res = _run_oracle(spec, phase, amp, spec.require_lambda())
    if (spec.format or "json") == "pretty":
        return (f"{res.method} at lambda={res.lam:g}: {res.value.real:+.15e} {res.value.imag:+.15e}i"
                f"  (error estimate {res.error:.2e})\n")
    return serialize.dumps({**_header(spec, phase), "result": res.to_dict()}) + "\n"


def cmd_compare(spec: RunSpec) -> str:
    phase = spec.resolve_phase()
    amp = parse_amplitude(spec.amplitude, phase.n)
    lam = spec.require_lambda()
    e = expand(phase, amp, spec.require_n1())
    partial = eval_expansion(e, lam)
    res = _run_oracle(spec, phase, amp, lam)
    diff = abs(res.value - partial)
    scale = lam ** -float(e.remainder_order)
    doc = {**_header(spec, phase), "lambda": lam, "N1": e.n1,
           "expansion": _complex(partial), "oracle": _complex(res.value), "oracle_error": res.error,
           "oracle_method": res.method, "abs_diff": diff,
           "remainder_order": format_fraction(e.remainder_order),
           "lambda_pow_minus_order": scale, "diff_over_scale": diff / scale}
    if (spec.format or "json") == "pretty":
        return (f"expansion  {partial.real:+.15e} {partial.imag:+.15e}i ({len(e.terms)} terms)\n"
                f"oracle     {res.value.real:+.15e} {res.value.imag:+.15e}i (+- {res.error:.1e}, {res.method})\n"
                f"|diff|     {diff:.6e}\n"
                f"budget     lambda^-{format_fraction(e.remainder_order)} = {scale:.6e};"
                f" |diff| / that = {diff / scale:.4g}\n")
    return serialize.dumps(doc) + "\n"


def cmd_convergence(spec: RunSpec) -> str:
    phase = spec.resolve_phase()
    amp = parse_amplitude(spec.amplitude, phase.n)
    lams = parse_grid(spec.grid)
    table = remainder_series(phase, amp, spec.require_n1(), lams, spec.method, spec.quadrature())
    fmt = spec.format or "csv"
    if fmt == "json":
        doc = {**_header(spec, phase), "predicted_order": format_fraction(table.predicted_order),
               "fitted_slope": table.fitted_slope, "slope_stderr": table.slope_stderr,
               "fit_rows": table.fit_rows, "fit_note": table.fit_note,
               "rows": [{"lambda": r.lam,
                         "oracle": None if r.oracle is None else _complex(r.oracle),
                         "expansion": _complex(r.expansion), "abs_diff": r.diff,
                         "oracle_error": r.oracle_error, "failure": r.failure} for r in table.rows]}
        return serialize.dumps(doc) + "\n"
    text = table.to_csv()
    if spec.timestamp:
        text = f"# generated: {serialize.timestamp()}\n" + text
    if fmt == "pretty":
        slope = "none" if table.fitted_slope is None else f"{table.fitted_slope:.4f} +- {table.slope_stderr:.4f}"
        text += f"# predicted slope {-float(table.predicted_order):.4f}, fitted {slope}\n"
    return text


def cmd_presets(spec: RunSpec) -> str:
    width = max(map(len, PRESET_HELP))
    return "".join(f"{name:<{width}}  {desc}\n" for name, desc in PRESET_HELP.items())


COMMANDS = {"expand": cmd_expand, "oracle": cmd_oracle, "compare": cmd_compare,
            "convergence": cmd_convergence, "presets": cmd_presets}


HELP = {
    "expand": "truncated asymptotic expansion (exponents, coefficients, remainder order)",
    "oracle": "numerical value of the integral at one lambda",
    "compare": "expansion against oracle at one lambda",
    "convergence": "remainder decay over a lambda grid with a fitted slope (CSV)",
    "presets": "list preset phases",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oscix",
        description="Asymptotic expansions of oscillatory integrals with monomial phases, "
                    "checked against numerical quadrature.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=HELP[name])
        if name == "presets":
            continue
        p.add_argument("--config", help="JSON RunSpec; command-line flags override its fields")
        p.add_argument("--phase", help="inline phase, e.g. '3:+,2:-' (user order)")
        p.add_argument("--preset", help="preset phase: A_k[+|-], E6[+|-], E8, quadratic(n,p)")
        p.add_argument("--amplitude", help="amplitude expression or builtin (default: 1)")
        p.add_argument("--format", choices=["json", "csv", "pretty"])
        p.add_argument("--output", "-o", help="write to this file instead of stdout")
        p.add_argument("--no-timestamp", dest="timestamp", action="store_false", default=None,
                       help="omit the generation timestamp")
        if name in ("expand", "compare", "convergence"):
            p.add_argument("--n1", type=int, help="truncation parameter N1 (> largest degree)")
        if name in ("expand", "oracle", "compare"):
            p.add_argument("--lambda", dest="lam", type=float, help="large parameter lambda > 0")
        if name == "expand":
            p.add_argument("--keep-zeros", action="store_true", default=None,
                           help="keep terms whose coefficient vanishes")
        if name in ("oracle", "compare", "convergence"):
            p.add_argument("--method", choices=["rotated", "regularized"])
            p.add_argument("--nodes", type=int, help="quadrature nodes per axis")
        if name in ("oracle", "compare"):
            p.add_argument("--chi", choices=["gauss", "quartic", "sech"],
                           help="cutoff for the regularized oracle")
        if name == "convergence":
            p.add_argument("--grid", help="geometric lambda grid start:stop:count (default 20:640:8)")
    return parser


def _spec_from_args(args: argparse.Namespace) -> RunSpec:
    values = {k: v for k, v in vars(args).items() if k not in ("config",)}
    command = values.pop("command")
    config = getattr(args, "config", None)
    if config:
        return RunSpec.from_config(config, {"command": command, **values})
    return RunSpec(command=command, **{k: v for k, v in values.items() if v is not None})


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = _spec_from_args(args)
        text = COMMANDS[spec.command](spec)
        if spec.output:
            Path(spec.output).write_text(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    except DomainError as exc:
        print(f"oscix: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (NumericalError, OscixError, ArithmeticError) as exc:
        print(f"oscix: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"oscix: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
