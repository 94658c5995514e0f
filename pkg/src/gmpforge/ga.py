"""Evolutionary search over GMP populations with prime-path coverage as fitness."""

from __future__ import annotations

import logging
import random
import statistics
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

from gmpforge.cfg import CoverageSet, coverage_fraction, coverage_of, union_coverage
from gmpforge.gmp import (
    GenerationParams,
    GmpIndividual,
    Inconclusive,
    crossover,
    execute,
    generate_random,
    mutate,
    reset_state,
    serialize,
    update_state,
)
from gmpforge.sut import ContractError, SutDescriptor, invoke
from gmpforge.values import RuntimeValue, Signature

log = logging.getLogger(__name__)

TOP_K = 10


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 150
    generations: int = 100
    runs_per_case: int = 5
    reproduction_rate: float = 0.30
    mutation_rate: float = 0.40
    crossover_rate: float = 0.30
    mutation_depth: int = 5
    tournament_size: int = 4
    input_budget: int = 5
    generalisation_budget: int = 10
    master_seed: int = 0
    generation: GenerationParams = field(default_factory=GenerationParams)

    def __post_init__(self):
        rates = (self.reproduction_rate, self.mutation_rate, self.crossover_rate)
        if any(r < 0 for r in rates):
            raise ValueError("operator rates must be non-negative")
        if abs(sum(rates) - 1.0) > 1e-9:
            raise ValueError(f"operator rates must sum to 1, got {sum(rates):g}")
        if self.population_size < 1:
            raise ValueError("population_size must be positive")
        if self.generations < 0 or self.runs_per_case < 1:
            raise ValueError("generations must be >= 0 and runs_per_case >= 1")
        if self.tournament_size < 1 or self.mutation_depth < 1:
            raise ValueError("tournament_size and mutation_depth must be positive")
        if self.input_budget < 1 or self.generalisation_budget < 1:
            raise ValueError("input budgets must be positive")

    def slot_counts(self) -> tuple[int, int, int]:
        """Offspring produced by reproduction, mutation and crossover per generation."""
        n = self.population_size
        n_rep = int(round(self.reproduction_rate * n))
        n_mut = min(n - n_rep, int(round(self.mutation_rate * n)))
        return n_rep, n_mut, n - n_rep - n_mut


@dataclass(frozen=True)
class FitnessRecord:
    fitness: float
    covered: CoverageSet
    inconclusive_count: int
    failure_count: int = 0
    # distinct graph nodes reached; a debug statistic only
    nodes_reached: int = 0


@dataclass(frozen=True)
class GenerationStats:
    generation_index: int
    mean_fitness: float
    std_dev_fitness: float
    best_fitness: float
    best_individual_id: int

    @classmethod
    def of(cls, index: int, fitnesses: Sequence[float]) -> "GenerationStats":
        best = max(range(len(fitnesses)), key=lambda i: (fitnesses[i], -i))
        return cls(
            index,
            statistics.fmean(fitnesses),
            statistics.pstdev(fitnesses),
            fitnesses[best],
            best,
        )


@dataclass
class RunResult:
    sut_name: str
    run_index: int
    stats: list[GenerationStats]
    top10: list[str]
    final_population: list[GmpIndividual] = field(default_factory=list, repr=False)
    final_fitness: list[float] = field(default_factory=list, repr=False)

    @property
    def final_mean(self) -> float:
        return self.stats[-1].mean_fitness


@lru_cache(maxsize=1 << 16)
def _invoke_cached(sut: SutDescriptor, inputs: tuple[RuntimeValue, ...]):
    response = invoke(sut, inputs)
    return response, coverage_of(response.trace, sut.graph)


def project_inputs(signature: Signature, sut: SutDescriptor):
    """How many leading main-tree outputs feed ``sut``; raises if incompatible."""
    target = sut.signature
    if target.arity > signature.arity:
        raise ContractError(f"{sut.name} needs {target.arity} inputs, individual makes {signature.arity}")
    if tuple(signature.param_kinds[: target.arity]) != target.param_kinds:
        raise ContractError(f"input kinds of {sut.name} do not match the individual's leading outputs")
    if signature.return_kind is not target.return_kind:
        raise ContractError(f"{sut.name} returns {target.return_kind.name}, individual expects "
                            f"{signature.return_kind.name}")
    return target.arity


def evaluate_fitness(
    ind: GmpIndividual,
    sut: SutDescriptor,
    budget: int = 5,
    rng: Optional[random.Random] = None,
) -> FitnessRecord:
    """Coverage of ``sut`` achieved by ``budget`` successive executions of ``ind``.

    Individuals trained on a wider signature are accepted; their leading main
    trees feed the SUT and the remaining outputs are discarded.
    """
    rng = rng or random.Random(0)
    arity = project_inputs(ind.signature, sut)
    reset_state(ind)
    sets: list[CoverageSet] = []
    reached: set[int] = set()
    inconclusive = failures = 0
    for _ in range(budget):
        outcome = execute(ind, rng)
        if isinstance(outcome, Inconclusive):
            inconclusive += 1
            continue
        response, covered = _invoke_cached(sut, outcome.values[:arity])
        sets.append(covered)
        reached.update(response.trace.visited)
        failures += response.failed
        update_state(ind, response)
    covered = union_coverage(sets)
    return FitnessRecord(coverage_fraction(covered, sut.graph), covered, inconclusive, failures, len(reached))


def tournament_select(fitnesses: Sequence[float], k: int, rng: random.Random) -> int:
    """Index of the fittest of ``k`` uniform draws with replacement; ties go to the smaller index."""
    n = len(fitnesses)
    if n == 0:
        raise ValueError("empty population")
    best = rng.randrange(n)
    for _ in range(k - 1):
        i = rng.randrange(n)
        if fitnesses[i] > fitnesses[best] or (fitnesses[i] == fitnesses[best] and i < best):
            best = i
    return best


def evolve_generation(
    population: Sequence[GmpIndividual],
    fitnesses: Sequence[float],
    config: GaConfig,
    rng: random.Random,
) -> list[GmpIndividual]:
    """Next generation: reproduction, mutation and crossover slots filled in that order."""
    n_rep, n_mut, n_cross = config.slot_counts()
    k = config.tournament_size
    params = config.generation

    def pick() -> GmpIndividual:
        return population[tournament_select(fitnesses, k, rng)]

    offspring = [pick().clone() for _ in range(n_rep)]
    offspring += [mutate(pick(), config.mutation_depth, params, rng) for _ in range(n_mut)]
    target = len(offspring) + n_cross
    while len(offspring) < target:
        a, b = crossover(pick(), pick(), rng, params)
        offspring.append(a)
        if len(offspring) < target:
            offspring.append(b)
    return offspring


def stream(*key) -> random.Random:
    """Independent generator for one labelled purpose; str seeds hash via SHA-512."""
    return random.Random("/".join(str(k) for k in key))


def evaluate_population(
    population: Sequence[GmpIndividual], sut: SutDescriptor, budget: int, key: tuple
) -> list[FitnessRecord]:
    return [evaluate_fitness(ind, sut, budget, stream(*key, i)) for i, ind in enumerate(population)]


def top_individuals(population, fitnesses, k: int = TOP_K) -> list[int]:
    order = sorted(range(len(population)), key=lambda i: (-fitnesses[i], population[i].size, i))
    return order[:k]


def train(sut: SutDescriptor, config: GaConfig = GaConfig(), run_index: int = 0) -> RunResult:
    base = (config.master_seed, sut.slug, run_index)
    init_rng = stream(*base, "init")
    population = [
        generate_random(sut.signature, config.generation, init_rng) for _ in range(config.population_size)
    ]
    records = evaluate_population(population, sut, config.input_budget, (*base, 0, "eval"))
    fitnesses = [r.fitness for r in records]
    stats = [GenerationStats.of(0, fitnesses)]
    for g in range(1, config.generations + 1):
        population = evolve_generation(population, fitnesses, config, stream(*base, g, "breed"))
        records = evaluate_population(population, sut, config.input_budget, (*base, g, "eval"))
        fitnesses = [r.fitness for r in records]
        stats.append(GenerationStats.of(g, fitnesses))
        if g % 25 == 0:
            log.debug("%s run %d gen %d mean %.3f", sut.name, run_index, g, stats[-1].mean_fitness)
    top = [serialize(population[i]) for i in top_individuals(population, fitnesses)]
    return RunResult(sut.name, run_index, stats, top, list(population), fitnesses)
