"""Training and generalisation studies over the corpus, and their CSV outputs."""

from __future__ import annotations

import csv
import io
import logging
import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Optional, Sequence

from gmpforge.ga import GaConfig, GenerationStats, RunResult, evaluate_fitness, project_inputs, stream, train
from gmpforge.gmp import GmpIndividual, ParseError, deserialize
from gmpforge.sut import ContractError, get_sut, registry

log = logging.getLogger(__name__)

# training object -> unseen test objects; the repeated Fibonacci entry of the
# Euclidean-Iterative row is kept once
GENERALISATION_TABLE: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("And", ("AndOr", "Or", "TrueOrFalse", "True", "Xor")),
    ("TrueOrFalse", ("True",)),
    ("Or", ("AndOr", "And", "TrueOrFalse", "True", "Xor")),
    ("True", ("True",)),
    ("Euclidean - Iterative", ("Fibonacci - Iterative", "Euclidean - Recursive", "BinomialCoefficient")),
    ("Euclidean - Recursive",
     ("Fibonacci - Recursive", "Fibonacci - Iterative", "Euclidean - Iterative", "BinomialCoefficient")),
    ("Fibonacci - Iterative", ("Fibonacci - Recursive",)),
    ("Fibonacci - Recursive", ("Fibonacci - Iterative",)),
    ("Palindrome - Iterative", ("Palindrome - Recursive",)),
    ("Palindrome - Recursive", ("Palindrome - Iterative",)),
    ("BinomialCoefficient",
     ("Fibonacci - Iterative", "Fibonacci - Recursive", "Euclidean - Iterative", "Euclidean - Recursive")),
    ("AndOr", ("Xor", "True", "TrueOrFalse", "And", "Or")),
    ("Xor", ("True", "TrueOrFalse", "And", "Or", "AndOr")),
    ("Substring", ("Vowels", "Anagram - Iterative", "Anagram - Recursive")),
    ("Anagram - Iterative", ("Vowels", "Substring", "Anagram - Recursive")),
    ("Anagram - Recursive", ("Vowels", "Substring", "Anagram - Iterative")),
    ("Remainder", ("Fibonacci - Iterative", "Fibonacci - Recursive", "Euclidean - Iterative",
                   "Euclidean - Recursive", "BinomialCoefficient")),
    ("Vowels", ("Substring", "Anagram - Iterative", "Anagram - Recursive")),
)

GROUPS = ("2", "3", "4-5")


class CaseConfigurationError(ValueError):
    pass


class CorruptArtifactError(ValueError):
    pass


@dataclass(frozen=True)
class GeneralisationCase:
    training_object: str
    test_objects: tuple[str, ...]

    def __post_init__(self):
        train_sut = get_sut(self.training_object)
        for name in self.test_objects:
            try:
                project_inputs(train_sut.signature, get_sut(name))
            except ContractError as exc:
                raise CaseConfigurationError(f"{self.training_object} -> {name}: {exc}") from None


@dataclass(frozen=True)
class GeneralisationResult:
    training_object: str
    test_object: str
    population_fitness: tuple[float, ...]
    run_means: tuple[float, ...]

    @property
    def mean(self) -> float:
        return statistics.fmean(self.population_fitness)

    @property
    def std_dev(self) -> float:
        return statistics.pstdev(self.population_fitness)


def generalisation_cases() -> list[GeneralisationCase]:
    return [GeneralisationCase(t, tests) for t, tests in GENERALISATION_TABLE]


def prime_path_group(count: int) -> str:
    if count <= 2:
        return "2"
    if count == 3:
        return "3"
    return "4-5"


def _train_job(args):
    name, config, run = args
    result = train(get_sut(name), config, run)
    # final populations stay in the worker; only the serialized top individuals travel
    return replace(result, final_population=[], final_fitness=[])


def _map(fn, jobs_list: list, jobs: int):
    if jobs <= 1 or len(jobs_list) <= 1:
        return [fn(j) for j in jobs_list]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, jobs_list))


def run_training_suite(
    config: GaConfig,
    suts: Optional[Iterable[str]] = None,
    jobs: int = 1,
    out_dir: Optional[Path] = None,
) -> dict[str, list[RunResult]]:
    """Train ``config.runs_per_case`` independent runs for each SUT (all 20 by default)."""
    names = [s.name for s in registry()] if suts is None else [get_sut(n).name for n in suts]
    work = [(name, config, run) for name in names for run in range(config.runs_per_case)]
    results: dict[str, list[RunResult]] = {name: [] for name in names}
    for result in _map(_train_job, work, jobs):
        results[result.sut_name].append(result)
        if out_dir is not None:
            write_run(result, out_dir)
    return results


def build_generalisation_population(runs: Sequence[RunResult], signature=None) -> list[GmpIndividual]:
    """Deserialize the top individuals of every run, each with fresh default state."""
    if not runs:
        raise CorruptArtifactError("no training runs to rebuild from")
    signature = signature or get_sut(runs[0].sut_name).signature
    population = []
    for run in runs:
        for rank, text in enumerate(run.top10):
            try:
                population.append(deserialize(text, signature))
            except ParseError as exc:
                raise CorruptArtifactError(f"{run.sut_name} run {run.run_index} rank {rank}: {exc}") from None
    return population


def evaluate_generalisation(
    case: GeneralisationCase, runs: Sequence[RunResult], config: GaConfig
) -> list[GeneralisationResult]:
    train_sut = get_sut(case.training_object)
    population = build_generalisation_population(runs, train_sut.signature)
    per_run = len(population) // max(1, len(runs))
    results = []
    for name in case.test_objects:
        test_sut = get_sut(name)
        fitness = tuple(
            evaluate_fitness(
                ind,
                test_sut,
                config.generalisation_budget,
                stream(config.master_seed, "generalise", train_sut.slug, test_sut.slug, i),
            ).fitness
            for i, ind in enumerate(population)
        )
        run_means = tuple(
            statistics.fmean(fitness[r * per_run : (r + 1) * per_run]) for r in range(len(runs))
        ) if per_run else ()
        results.append(GeneralisationResult(train_sut.name, test_sut.name, fitness, run_means))
    return results


def _generalise_job(args):
    case, runs, config = args
    return evaluate_generalisation(case, runs, config)


def run_generalisation(
    cases: Sequence[GeneralisationCase],
    training: dict[str, list[RunResult]],
    config: GaConfig,
    jobs: int = 1,
) -> list[GeneralisationResult]:
    work = []
    for case in cases:
        runs = training.get(get_sut(case.training_object).name)
        if not runs:
            raise CaseConfigurationError(f"no training artifacts for {case.training_object}")
        work.append((case, runs, config))
    return [r for batch in _map(_generalise_job, work, jobs) for r in batch]


# ---------------------------------------------------------------- output files


def _fmt(x: float) -> str:
    # shortest repr round-trips exactly, so reloaded runs match in-memory ones
    return repr(float(x))


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) if isinstance(v, float) else v for v in row])
    path.write_text(buf.getvalue(), encoding="utf-8", newline="")


def run_dir(out_dir: Path, sut_name: str, run_index: int) -> Path:
    return Path(out_dir) / "training" / get_sut(sut_name).slug / str(run_index)


def write_run(result: RunResult, out_dir: Path) -> Path:
    d = run_dir(out_dir, result.sut_name, result.run_index)
    _write_csv(
        d / "stats.csv",
        ("generation", "mean_fitness", "std_dev", "best_fitness"),
        ((s.generation_index, s.mean_fitness, s.std_dev_fitness, s.best_fitness) for s in result.stats),
    )
    top = d / "top10"
    top.mkdir(parents=True, exist_ok=True)
    for rank, text in enumerate(result.top10):
        (top / f"{rank}.gmp").write_text(text + "\n", encoding="utf-8", newline="")
    return d


def load_run(out_dir: Path, sut_name: str, run_index: int) -> RunResult:
    """Read back one run written by :func:`write_run`."""
    d = run_dir(out_dir, sut_name, run_index)
    try:
        with open(d / "stats.csv", newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        stats = [
            GenerationStats(int(r["generation"]), float(r["mean_fitness"]), float(r["std_dev"]),
                            float(r["best_fitness"]), -1)
            for r in rows
        ]
        files = sorted((d / "top10").glob("*.gmp"), key=lambda p: int(p.stem))
        top = [p.read_text(encoding="utf-8").strip() for p in files]
    except (OSError, KeyError, ValueError) as exc:
        raise CorruptArtifactError(f"cannot read training artifacts in {d}: {exc}") from None
    return RunResult(get_sut(sut_name).name, run_index, stats, top)


def load_training(out_dir: Path, sut_name: str, runs: int) -> list[RunResult]:
    return [load_run(out_dir, sut_name, r) for r in range(runs)]


def _box(values: Sequence[float]) -> tuple[float, float, float, float, float]:
    if len(values) == 1:
        v = values[0]
        return v, v, v, v, v
    q1, med, q3 = statistics.quantiles(values, n=4, method="inclusive")
    return min(values), q1, med, q3, max(values)


def emit_stats(
    training: dict[str, list[RunResult]],
    generalisation: Sequence[GeneralisationResult],
    out_dir: Path,
) -> list[Path]:
    """Write the curve, spread-by-complexity and box-plot CSVs under ``out_dir``."""
    out_dir = Path(out_dir)
    curves, spread = [], {}
    for name in sorted(training, key=lambda n: [s.name for s in registry()].index(n)):
        runs = training[name]
        if not runs:
            continue
        group = prime_path_group(get_sut(name).prime_path_count)
        for g in range(min(len(r.stats) for r in runs)):
            means = [r.stats[g].mean_fitness for r in runs]
            curves.append((name, group, g, statistics.fmean(means), statistics.pstdev(means)))
            spread.setdefault((group, g), []).extend(r.stats[g].std_dev_fitness for r in runs)
    paths = [out_dir / "training" / "training_curves.csv", out_dir / "training" / "stddev_by_complexity.csv",
             out_dir / "generalisation" / "generalisation_box.csv",
             out_dir / "generalisation" / "generalisation_run_means.csv"]
    _write_csv(paths[0], ("sut", "prime_path_group", "generation", "mean_over_runs", "stddev_over_runs"), curves)
    _write_csv(
        paths[1],
        ("prime_path_group", "generation", "mean_population_std_dev"),
        ((grp, g, statistics.fmean(v)) for (grp, g), v in sorted(spread.items(), key=lambda kv: (
            GROUPS.index(kv[0][0]), kv[0][1]))),
    )
    _write_csv(
        paths[2],
        ("training_object", "test_object", "mean", "std_dev", "min", "q1", "median", "q3", "max"),
        ((r.training_object, r.test_object, r.mean, r.std_dev, *_box(r.population_fitness)) for r in generalisation),
    )
    _write_csv(
        paths[3],
        ("training_object", "test_object", "run", "mean"),
        ((r.training_object, r.test_object, i, m) for r in generalisation for i, m in enumerate(r.run_means)),
    )
    return paths


def full_study(config: GaConfig, out_dir: Path, jobs: int = 1) -> tuple[dict, list[GeneralisationResult]]:
    """Train every corpus SUT, evaluate every generalisation case, write all outputs."""
    out_dir = Path(out_dir)
    training = run_training_suite(config, jobs=jobs, out_dir=out_dir)
    results = run_generalisation(generalisation_cases(), training, config, jobs=jobs)
    emit_stats(training, results, out_dir)
    log.info("study written to %s", os.fspath(out_dir))
    return training, results
