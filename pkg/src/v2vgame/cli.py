"""Command-line front end.

Commands
    solve                one instance, both modes of closure by exo_p presence
    sweep                solve across an information-quality grid
    classify             endogenous outcome family and thresholds
    paradox-search       scan for cost-paradox certificates
    certify-equivalence  batch cross-model agreement check
    validate-mc          Monte-Carlo check of the analytic cost tables

Inputs come from a YAML config (--config) and/or flags; flags win.  Every
command writes one tabular artifact (CSV or JSON lines) whose bytes are a
deterministic function of the inputs: floats are serialized with 17
significant digits, rows follow fixed grid order, and sampling is fully
seeded.  Exit codes: 0 success, 1 invalid input or configuration, 2 solver
failure, 3 a certification or validation that ran but did not pass.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import Any, Sequence

import numpy as np
import yaml

from .analysis import (
    ParadoxSearchSpace,
    certify_equivalence,
    monte_carlo_validate,
    normalize_grid,
    random_endogenous_instances,
    search_paradox,
    solve_instance,
    sweep_beta,
)
from .curves import Curve, ModelCurves
from .endogenous import classify_family
from .errors import (
    GameError,
    ModeError,
    SolverError,
    StatisticalFailure,
    ValidationError,
)
from .exogenous import TIE_BREAKS
from .game import GameInstance, Model, validate_instance

COMMANDS = (
    "solve",
    "sweep",
    "classify",
    "paradox-search",
    "certify-equivalence",
    "validate-mc",
)

OUT_DIR_ENV = "V2VGAME_OUT_DIR"

FORMATS = ("csv", "json-lines")

RESULT_COLUMNS = [
    "mode",
    "model",
    "family",
    "beta",
    "y",
    "r",
    "exo_p",
    "p_accident",
    "p_signal",
    "social_cost",
    "residual",
    "iterations",
    "indifferent",
]

CLASSIFY_COLUMNS = ["beta", "y", "r", "family", "p_vs", "p_n", "p_vu"]

PARADOX_COLUMNS = [
    "y",
    "r",
    "true_positive",
    "false_positive",
    "crash",
    "beta_low",
    "beta_high",
    "cost_low",
    "cost_high",
    "p_low",
    "p_high",
    "family_low",
    "family_high",
    "margin",
]

EQUIVALENCE_COLUMNS = [
    "count",
    "max_prob_gap",
    "max_cost_gap",
    "tol",
    "passed",
    "families",
]

MC_COLUMNS = [
    "model",
    "agent_type",
    "strategy",
    "analytic",
    "empirical",
    "std_err",
    "z",
    "samples",
    "passed",
]

_NUM = {"type": "number"}
_OPT_NUM = {"type": ["number", "null"]}
_STR = {"type": "string"}
_INT = {"type": "integer"}
_BOOL = {"type": "boolean"}

# one-row JSON schemas for the json-lines outputs, keyed by command
ROW_SCHEMAS = {
    "solve": {
        "type": "object",
        "properties": {
            "mode": {"enum": ["exogenous", "endogenous"]},
            "model": {"enum": ["bayesian", "non-bayesian"]},
            "family": {"type": ["string", "null"]},
            "beta": _NUM,
            "y": _NUM,
            "r": _NUM,
            "exo_p": _OPT_NUM,
            "p_accident": _NUM,
            "p_signal": _NUM,
            "social_cost": _NUM,
            "residual": _NUM,
            "iterations": _INT,
            "indifferent": _STR,
        },
        "required": RESULT_COLUMNS,
        "additionalProperties": False,
    },
    "classify": {
        "type": "object",
        "properties": {
            "beta": _NUM,
            "y": _NUM,
            "r": _NUM,
            "family": _STR,
            "p_vs": _NUM,
            "p_n": _NUM,
            "p_vu": _NUM,
        },
        "required": CLASSIFY_COLUMNS,
        "additionalProperties": False,
    },
    "paradox-search": {
        "type": "object",
        "properties": {
            "y": _NUM,
            "r": _NUM,
            "true_positive": _STR,
            "false_positive": _STR,
            "crash": _STR,
            "beta_low": _NUM,
            "beta_high": _NUM,
            "cost_low": _NUM,
            "cost_high": _NUM,
            "p_low": _NUM,
            "p_high": _NUM,
            "family_low": _STR,
            "family_high": _STR,
            "margin": _NUM,
        },
        "required": PARADOX_COLUMNS,
        "additionalProperties": False,
    },
    "certify-equivalence": {
        "type": "object",
        "properties": {
            "count": _INT,
            "max_prob_gap": _NUM,
            "max_cost_gap": _NUM,
            "tol": _NUM,
            "passed": _BOOL,
            "families": _STR,
        },
        "required": EQUIVALENCE_COLUMNS,
        "additionalProperties": False,
    },
    "validate-mc": {
        "type": "object",
        "properties": {
            "model": {"enum": ["bayesian", "non-bayesian"]},
            "agent_type": _STR,
            "strategy": _STR,
            "analytic": _NUM,
            "empirical": _NUM,
            "std_err": _NUM,
            "z": _NUM,
            "samples": _INT,
            "passed": _BOOL,
        },
        "required": MC_COLUMNS,
        "additionalProperties": False,
    },
}
ROW_SCHEMAS["sweep"] = ROW_SCHEMAS["solve"]


# ---------------------------------------------------------------------------
# argument and config handling
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="v2vgame",
        description="solve and analyze the road-hazard broadcast game",
    )
    parser.add_argument("command_pos", nargs="?", choices=COMMANDS, metavar="command")
    parser.add_argument("--command", choices=COMMANDS)
    parser.add_argument("--config", help="YAML configuration file")
    parser.add_argument("--beta", type=float)
    parser.add_argument("--beta-grid", help="start:stop:count or comma-separated list")
    parser.add_argument("--y", type=float)
    parser.add_argument("--r", type=float)
    parser.add_argument("--exo-p", type=float)
    parser.add_argument("--curve-t", help="true-positive curve, family:p1,p2,...")
    parser.add_argument("--curve-f", help="false-positive curve, family:p1,p2,...")
    parser.add_argument("--curve-p", help="crash curve, family:p1,p2,...")
    parser.add_argument("--models", help="comma-separated subset of bayesian,non-bayesian")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--samples", type=int)
    parser.add_argument("--out", help="output path")
    parser.add_argument("--format", choices=FORMATS)
    return parser


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ValidationError("cannot read config %r: %s" % (path, exc)) from exc
    except yaml.YAMLError as exc:
        raise ValidationError("config %r is not valid YAML: %s" % (path, exc)) from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ValidationError("config root must be a mapping, got %s" % type(data).__name__)
    return data


def _pick(flag_value, config: dict, key: str, default=None):
    if flag_value is not None:
        return flag_value
    return config.get(key, default)


def _parse_models(raw) -> tuple[Model, ...]:
    if raw is None:
        return (Model.BAYESIAN, Model.NON_BAYESIAN)
    if isinstance(raw, str):
        names = [tok.strip() for tok in raw.split(",") if tok.strip()]
    else:
        names = [str(tok) for tok in raw]
    models = []
    for name in names:
        try:
            models.append(Model(name))
        except ValueError:
            raise ValidationError(
                "unknown model %r (expected bayesian or non-bayesian)" % name
            ) from None
    if not models:
        raise ValidationError("model list must not be empty")
    return tuple(models)


def _parse_grid(raw) -> tuple[float, ...]:
    if raw is None:
        raise ValidationError("a beta grid is required (beta_grid in config or --beta-grid)")
    if isinstance(raw, str):
        if ":" in raw:
            parts = raw.split(":")
            if len(parts) != 3:
                raise ValidationError("grid spec %r needs start:stop:count" % raw)
            try:
                start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            except ValueError as exc:
                raise ValidationError("unparseable grid spec %r" % raw) from exc
            return normalize_grid(np.linspace(start, stop, count))
        try:
            return normalize_grid(float(tok) for tok in raw.split(",") if tok.strip())
        except ValueError as exc:
            raise ValidationError("unparseable grid list %r" % raw) from exc
    if isinstance(raw, dict):
        try:
            return normalize_grid(
                np.linspace(float(raw["start"]), float(raw["stop"]), int(raw["count"]))
            )
        except KeyError as exc:
            raise ValidationError("grid mapping needs start, stop, count") from exc
    try:
        return normalize_grid(raw)
    except TypeError as exc:
        raise ValidationError("unusable beta grid %r" % (raw,)) from exc


def _build_instance(args, config: dict, need_beta: bool = True) -> GameInstance:
    section = config.get("instance", {})
    if not isinstance(section, dict):
        raise ValidationError("config 'instance' must be a mapping")
    beta = _pick(args.beta, section, "beta")
    y = _pick(args.y, section, "y")
    r = _pick(args.r, section, "r")
    exo_p = _pick(args.exo_p, section, "exo_p")
    if y is None or r is None:
        raise ValidationError("instance needs y and r (flags or config)")
    if beta is None:
        if need_beta:
            raise ValidationError("instance needs beta (flag or config)")
        beta = 0.0

    curve_cfg = section.get("curves", {})
    if not isinstance(curve_cfg, dict):
        raise ValidationError("config 'instance.curves' must be a mapping")

    def load_curve(flag_value, key: str) -> Curve:
        if flag_value is not None:
            return Curve.parse(flag_value)
        raw = curve_cfg.get(key)
        if raw is None:
            raise ValidationError("missing curve %r (config or flag)" % key)
        if isinstance(raw, str):
            return Curve.parse(raw)
        if isinstance(raw, dict):
            return Curve.from_dict(raw)
        raise ValidationError("curve %r must be a spec string or mapping" % key)

    curves = ModelCurves(
        load_curve(args.curve_t, "true_positive"),
        load_curve(args.curve_f, "false_positive"),
        load_curve(args.curve_p, "crash"),
    )
    instance = GameInstance(
        beta=float(beta),
        y=float(y),
        r=float(r),
        curves=curves,
        exo_p=None if exo_p is None else float(exo_p),
    )
    return validate_instance(instance)


# ---------------------------------------------------------------------------
# deterministic writers
# ---------------------------------------------------------------------------


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def _json_value(value: Any) -> str:
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return json.dumps(value)
    if isinstance(value, float):
        return "%.17g" % value
    raise TypeError("unserializable cell %r" % (value,))


def write_rows(rows: list[dict], columns: list[str], path: str, fmt: str) -> None:
    """Write rows with a byte-deterministic layout.

    CSV gets a header and LF line endings; json-lines gets one object per
    line with keys in column order.  Floats use 17 significant digits in
    both formats.
    """
    if fmt == "csv":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_csv_cell(row[col]) for col in columns])
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            for row in rows:
                parts = (
                    "%s: %s" % (json.dumps(col), _json_value(row[col]))
                    for col in columns
                )
                fh.write("{" + ", ".join(parts) + "}\n")


def _output_path(args, config: dict, command: str, fmt: str) -> str:
    out_cfg = config.get("output", {})
    if not isinstance(out_cfg, dict):
        raise ValidationError("config 'output' must be a mapping")
    path = args.out if args.out is not None else out_cfg.get("path")
    if path is None:
        base = os.environ.get(OUT_DIR_ENV, ".")
        ext = "csv" if fmt == "csv" else "jsonl"
        path = os.path.join(base, "v2vgame-%s.%s" % (command, ext))
    return path


def _output_format(args, config: dict) -> str:
    out_cfg = config.get("output", {})
    fmt = args.format if args.format is not None else (
        out_cfg.get("format") if isinstance(out_cfg, dict) else None
    )
    fmt = fmt or "csv"
    if fmt not in FORMATS:
        raise ValidationError("unknown output format %r (expected csv or json-lines)" % fmt)
    return fmt


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _cmd_solve(args, config):
    instance = _build_instance(args, config)
    models = _parse_models(_pick(args.models, config, "models"))
    rows = [solve_instance(instance, model).to_row() for model in models]
    return rows, RESULT_COLUMNS, 0


def _cmd_sweep(args, config):
    grid_raw = args.beta_grid if args.beta_grid is not None else config.get("beta_grid")
    grid = _parse_grid(grid_raw)
    instance = _build_instance(args, config, need_beta=False)
    models = _parse_models(_pick(args.models, config, "models"))
    modes = config.get("modes")
    if modes is None:
        modes = ["exogenous"] if instance.exo_p is not None else ["endogenous"]
    if isinstance(modes, str):
        modes = [modes]
    sweep = sweep_beta(instance, grid, models=models, modes=tuple(modes))
    rows = [pt.result.to_row() for pt in sweep.points]
    return rows, RESULT_COLUMNS, 0


def _cmd_classify(args, config):
    instance = _build_instance(args, config)
    family = classify_family(instance)
    thresholds = instance.thresholds()
    rows = [
        {
            "beta": instance.beta,
            "y": instance.y,
            "r": instance.r,
            "family": family.value,
            "p_vs": thresholds.p_vs,
            "p_n": thresholds.p_n,
            "p_vu": thresholds.p_vu,
        }
    ]
    return rows, CLASSIFY_COLUMNS, 0


def _parse_search_space(config: dict) -> ParadoxSearchSpace:
    section = config.get("search", {})
    if not isinstance(section, dict):
        raise ValidationError("config 'search' must be a mapping")
    defaults = ParadoxSearchSpace()
    known = {
        "y_values",
        "r_values",
        "intercepts",
        "slopes",
        "technologies",
        "beta_count",
        "margin",
    }
    unknown = set(section) - known
    if unknown:
        raise ValidationError("unknown search keys: %s" % ", ".join(sorted(unknown)))
    kwargs = {}
    for key in ("y_values", "r_values", "intercepts", "slopes"):
        if key in section:
            kwargs[key] = tuple(float(v) for v in section[key])
    if "technologies" in section:
        techs = []
        for pair in section["technologies"]:
            if len(pair) != 2:
                raise ValidationError("technology entries need [true, false] pairs")
            techs.append((float(pair[0]), float(pair[1])))
        kwargs["technologies"] = tuple(techs)
    if "beta_count" in section:
        kwargs["beta_count"] = int(section["beta_count"])
    if "margin" in section:
        kwargs["margin"] = float(section["margin"])
    space = ParadoxSearchSpace(**kwargs)
    return space if kwargs else defaults


def _cmd_paradox(args, config):
    space = _parse_search_space(config)
    mode = config.get("mode", "endogenous")
    certificates = search_paradox(space, mode=mode)
    rows = [cert.to_row() for cert in certificates]
    code = 0 if certificates else 3
    return rows, PARADOX_COLUMNS, code


def _cmd_equivalence(args, config):
    count = int(_pick(None, config, "count", 1000))
    seed = int(_pick(args.seed, config, "seed", 12345))
    if count < 1:
        raise ValidationError("count must be positive")
    instances = random_endogenous_instances(count, seed)
    report = certify_equivalence(instances)
    families = "|".join(
        "%s:%d" % (fam.value, report.family_counts[fam])
        for fam in sorted(report.family_counts, key=lambda f: f.value)
    )
    rows = [
        {
            "count": report.count,
            "max_prob_gap": report.max_prob_gap,
            "max_cost_gap": report.max_cost_gap,
            "tol": report.tol,
            "passed": report.passed,
            "families": families,
        }
    ]
    return rows, EQUIVALENCE_COLUMNS, 0 if report.passed else 3


def _cmd_validate_mc(args, config):
    instance = _build_instance(args, config)
    models = _parse_models(_pick(args.models, config, "models"))
    samples = int(_pick(args.samples, config, "samples", 200000))
    seed = int(_pick(args.seed, config, "seed", 12345))
    rows = []
    all_passed = True
    for model in models:
        result = solve_instance(instance, model)
        report = monte_carlo_validate(result, samples, seed, check=False)
        all_passed = all_passed and report.passed
        for entry in report.entries:
            rows.append(
                {
                    "model": model.value,
                    "agent_type": entry.agent_type.value,
                    "strategy": entry.strategy.value,
                    "analytic": entry.analytic,
                    "empirical": entry.empirical,
                    "std_err": entry.std_err,
                    "z": entry.z,
                    "samples": entry.samples,
                    "passed": abs(entry.z) <= 4.0,
                }
            )
    return rows, MC_COLUMNS, 0 if all_passed else 3


_RUNNERS = {
    "solve": _cmd_solve,
    "sweep": _cmd_sweep,
    "classify": _cmd_classify,
    "paradox-search": _cmd_paradox,
    "certify-equivalence": _cmd_equivalence,
    "validate-mc": _cmd_validate_mc,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1

    try:
        config = _load_config(args.config)
        command = args.command_pos or args.command or config.get("command")
        if command is None:
            raise ValidationError(
                "no command given (positional, --command, or config 'command')"
            )
        if command not in COMMANDS:
            raise ValidationError("unknown command %r" % command)
        if args.command_pos and args.command and args.command_pos != args.command:
            raise ValidationError(
                "conflicting commands %r and %r" % (args.command_pos, args.command)
            )
        fmt = _output_format(args, config)
        path = _output_path(args, config, command, fmt)
        rows, columns, code = _RUNNERS[command](args, config)
        write_rows(rows, columns, path, fmt)
        print("%s: wrote %d row(s) to %s" % (command, len(rows), path))
        if code == 3:
            print("%s: certification FAILED" % command, file=sys.stderr)
        return code
    except (ValidationError, ModeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except StatisticalFailure as exc:
        print("validation failed: %s" % exc, file=sys.stderr)
        return 3
    except SolverError as exc:
        print("solver failure: %s" % exc, file=sys.stderr)
        return 2
    except GameError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except OSError as exc:
        print("i/o failure: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
