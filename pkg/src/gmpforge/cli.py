"""Command-line entry point.

Exit codes: 0 success, 2 usage error, 3 configuration error, 4 runtime or
corpus error. ``GMP_FORGE_OUT`` overrides the default output directory.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from dataclasses import fields
from pathlib import Path

from gmpforge import experiment
from gmpforge.ga import GaConfig
from gmpforge.gmp import GenerationParams, ParseError, parse_sexpr, pretty
from gmpforge.sut import get_sut, registry

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3, 4

_GA_FLAGS = [f.name for f in fields(GaConfig) if f.name not in ("master_seed", "generation")]
_GEN_FLAGS = [f.name for f in fields(GenerationParams)]


class ConfigError(Exception):
    pass


def _flag(name: str) -> str:
    return "--" + name.replace("_", "-")


def _add_overrides(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("hyperparameters")
    defaults = GaConfig()
    for name in _GA_FLAGS:
        value = getattr(defaults, name)
        g.add_argument(_flag(name), type=type(value), default=None, metavar=type(value).__name__.upper(),
                       help=f"default {value}")
    for name in _GEN_FLAGS:
        value = getattr(defaults.generation, name)
        g.add_argument(_flag(name), type=type(value), default=None, metavar=type(value).__name__.upper(),
                       help=f"default {value}")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (results do not depend on it)")
    p.add_argument("--output-dir", type=Path, default=None,
                   help="base output directory (env GMP_FORGE_OUT, default ./out)")
    p.add_argument("--run-name", default=None, help="subdirectory name instead of a timestamp")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gmpforge", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list-suts", help="print the corpus catalogue")

    p = sub.add_parser("train", help="train GMP populations on one SUT")
    p.add_argument("--sut", required=True)
    p.add_argument("--seed", type=int, default=0)
    _add_overrides(p)

    p = sub.add_parser("generalise", help="evaluate one generalisation case")
    p.add_argument("--training-object", required=True)
    p.add_argument("--training-dir", type=Path, default=None,
                   help="study directory holding training/ artifacts; trains first when omitted")
    p.add_argument("--seed", type=int, default=0)
    _add_overrides(p)

    p = sub.add_parser("full-study", help="train on every SUT and run every generalisation case")
    p.add_argument("--seed", type=int, required=True)
    _add_overrides(p)

    p = sub.add_parser("inspect", help="pretty-print a serialized individual")
    p.add_argument("file", type=Path)
    return parser


def _config(args) -> GaConfig:
    ga = {n: getattr(args, n) for n in _GA_FLAGS if getattr(args, n) is not None}
    gen = {n: getattr(args, n) for n in _GEN_FLAGS if getattr(args, n) is not None}
    try:
        return GaConfig(master_seed=args.seed, generation=GenerationParams(**gen), **ga)
    except ValueError as exc:
        given = [_flag(n) for n in list(ga) + list(gen)] or ["defaults"]
        raise ConfigError(f"{', '.join(given)}: {exc}") from None


def _out_dir(args) -> Path:
    base = args.output_dir or Path(os.environ.get("GMP_FORGE_OUT", "out"))
    return Path(base) / (args.run_name or time.strftime("%Y%m%d-%H%M%S"))


def _resolve(flag: str, name: str) -> str:
    try:
        return get_sut(name).name
    except KeyError:
        raise ConfigError(f"{flag}: unknown SUT {name!r} (see list-suts)") from None


def cmd_list_suts(args) -> int:
    rows = [(s.name, str(s.arity), ", ".join(k.name.lower() for k in s.signature.param_kinds),
             s.signature.return_kind.name.lower(), str(s.prime_path_count)) for s in registry()]
    header = ("name", "inputs", "input kinds", "returns", "prime paths")
    widths = [max(len(r[i]) for r in rows + [header]) for i in range(len(header))]
    for row in [header] + rows:
        print("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return EXIT_OK


def cmd_train(args) -> int:
    name = _resolve("--sut", args.sut)
    config = _config(args)
    out = _out_dir(args)
    results = experiment.run_training_suite(config, [name], jobs=args.jobs, out_dir=out)
    for r in results[name]:
        s = r.stats[-1]
        print(f"{name} run {r.run_index}: final mean {s.mean_fitness:.3f} best {s.best_fitness:.3f}")
    print(f"artifacts: {out}")
    return EXIT_OK


def cmd_generalise(args) -> int:
    name = _resolve("--training-object", args.training_object)
    cases = [c for c in experiment.generalisation_cases() if c.training_object == name]
    if not cases:
        raise ConfigError(f"--training-object: {name!r} has no generalisation set")
    config = _config(args)
    out = _out_dir(args)
    if args.training_dir is not None:
        training = {name: experiment.load_training(args.training_dir, name, config.runs_per_case)}
    else:
        training = experiment.run_training_suite(config, [name], jobs=args.jobs, out_dir=out)
    results = experiment.run_generalisation(cases, training, config, jobs=args.jobs)
    experiment.emit_stats(training, results, out)
    for r in results:
        print(f"{r.training_object} -> {r.test_object}: mean {r.mean:.3f} sd {r.std_dev:.3f}")
    print(f"artifacts: {out}")
    return EXIT_OK


def cmd_full_study(args) -> int:
    out = _out_dir(args)
    experiment.full_study(_config(args), out, jobs=args.jobs)
    print(f"artifacts: {out}")
    return EXIT_OK


def cmd_inspect(args) -> int:
    try:
        text = args.file.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{args.file}: {exc.strerror or exc}") from None
    try:
        print(pretty(parse_sexpr(text)))
    except ParseError as exc:
        raise ConfigError(f"{args.file}: {exc}") from None
    return EXIT_OK


COMMANDS = {
    "list-suts": cmd_list_suts,
    "train": cmd_train,
    "generalise": cmd_generalise,
    "full-study": cmd_full_study,
    "inspect": cmd_inspect,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "jobs", 1) < 1:
        print("gmpforge: error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"gmpforge: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (experiment.CaseConfigurationError, experiment.CorruptArtifactError) as exc:
        print(f"gmpforge: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # corpus or runtime failure
        print(f"gmpforge: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
