import statistics

import pytest

from gmpforge import experiment
from gmpforge.experiment import (
    GENERALISATION_TABLE,
    CaseConfigurationError,
    CorruptArtifactError,
    GeneralisationCase,
    GeneralisationResult,
    build_generalisation_population,
    emit_stats,
    evaluate_generalisation,
    generalisation_cases,
    load_training,
    prime_path_group,
    run_generalisation,
    run_training_suite,
)
from gmpforge.ga import GaConfig, evaluate_fitness, stream
from gmpforge.sut import get_sut

from oracles import check_individual

SMALL = GaConfig(population_size=16, generations=2, runs_per_case=5, master_seed=2)


@pytest.fixture(scope="module")
def xor_training(tmp_path_factory):
    out = tmp_path_factory.mktemp("study")
    return out, run_training_suite(SMALL, ["Xor"], out_dir=out)


def test_case_table_shape():
    cases = generalisation_cases()
    assert len(cases) == 18
    assert len({c.training_object for c in cases}) == 18
    by_name = {c.training_object: c.test_objects for c in cases}
    assert by_name["Xor"] == ("True", "TrueOrFalse", "And", "Or", "AndOr")
    assert by_name["Euclidean - Iterative"].count("Fibonacci - Iterative") == 1
    for c in cases:
        assert len(set(c.test_objects)) == len(c.test_objects)


def test_incompatible_case_rejected():
    with pytest.raises(CaseConfigurationError):
        GeneralisationCase("True", ("And",))
    with pytest.raises(CaseConfigurationError):
        GeneralisationCase("IsPrime", ("Fibonacci - Iterative",))


def test_groups():
    assert prime_path_group(get_sut("IsPrime").prime_path_count) == "4-5"
    assert prime_path_group(get_sut("Vowels").prime_path_count) == "4-5"
    assert prime_path_group(get_sut("Xor").prime_path_count) == "3"
    assert prime_path_group(get_sut("True").prime_path_count) == "2"


def test_empty_results_give_header_only_csvs(tmp_path):
    paths = emit_stats({}, [], tmp_path)
    assert [p.read_text().count("\n") for p in paths] == [1, 1, 1, 1]
    assert paths[2].read_text().startswith("training_object,test_object,mean,std_dev,min,q1,median,q3,max\n")


def test_constant_distribution_box(tmp_path):
    r = GeneralisationResult("Xor", "True", (0.5,) * 50, (0.5,) * 5)
    emit_stats({}, [r], tmp_path)
    row = (tmp_path / "generalisation" / "generalisation_box.csv").read_text().splitlines()[1]
    assert row == "Xor,True,0.5,0.0,0.5,0.5,0.5,0.5,0.5"


def test_layout_and_round_trip(xor_training):
    out, training = xor_training
    runs = training["Xor"]
    assert len(runs) == 5 and all(len(r.stats) == 3 for r in runs)
    stats = out / "training" / "xor" / "0" / "stats.csv"
    raw = stats.read_bytes()
    assert raw.startswith(b"generation,mean_fitness,std_dev,best_fitness\n") and b"\r" not in raw
    assert sorted(p.name for p in (out / "training" / "xor" / "0" / "top10").iterdir())[:2] == ["0.gmp", "1.gmp"]
    loaded = load_training(out, "Xor", 5)
    assert [r.top10 for r in loaded] == [r.top10 for r in runs]
    assert [[s.mean_fitness for s in r.stats] for r in loaded] == [[s.mean_fitness for s in r.stats] for r in runs]


def test_generalisation_population(xor_training):
    _, training = xor_training
    pop = build_generalisation_population(training["Xor"])
    assert len(pop) == 50
    assert all(check_individual(i) == [] and i.state.execution_count == 0 for i in pop)


def test_corrupt_artifacts(xor_training, tmp_path):
    _, training = xor_training
    broken = [r for r in training["Xor"]]
    broken[0] = experiment.RunResult("Xor", 0, broken[0].stats, ["(gmp (adf"] + broken[0].top10[1:])
    with pytest.raises(CorruptArtifactError):
        build_generalisation_population(broken)
    with pytest.raises(CorruptArtifactError):
        load_training(tmp_path, "Xor", 5)


def test_generalisation_results(xor_training):
    _, training = xor_training
    results = run_generalisation(generalisation_cases()[12:13], training, SMALL)
    assert [r.test_object for r in results] == ["True", "TrueOrFalse", "And", "Or", "AndOr"]
    for r in results:
        assert len(r.population_fitness) == 50 and len(r.run_means) == 5
        assert r.mean == pytest.approx(statistics.fmean(r.run_means))
        assert all(0.0 <= f <= 1.0 for f in r.population_fitness)


def test_missing_training_is_configuration_error():
    with pytest.raises(CaseConfigurationError):
        run_generalisation(generalisation_cases()[:1], {}, SMALL)


def test_larger_budget_never_lowers_own_object_fitness(xor_training):
    _, training = xor_training
    sut = get_sut("Xor")
    pop = build_generalisation_population(training["Xor"])
    for i, ind in enumerate(pop):
        five = evaluate_fitness(ind, sut, 5, stream("b", i)).fitness
        ten = evaluate_fitness(ind, sut, 10, stream("b", i)).fitness
        assert ten >= five
    self_case = GeneralisationCase("Xor", ("Xor",))
    (r,) = evaluate_generalisation(self_case, training["Xor"], SMALL)
    assert r.mean >= statistics.fmean(run.final_mean for run in training["Xor"])


def test_jobs_do_not_change_training():
    cfg = GaConfig(population_size=10, generations=2, runs_per_case=2, master_seed=4)
    one = run_training_suite(cfg, ["And", "Vowels"], jobs=1)
    two = run_training_suite(cfg, ["And", "Vowels"], jobs=2)
    for name in one:
        assert [(r.stats, r.top10) for r in one[name]] == [(r.stats, r.top10) for r in two[name]]


def test_table_rows_are_all_compatible():
    for train_name, tests in GENERALISATION_TABLE:
        GeneralisationCase(train_name, tests)
