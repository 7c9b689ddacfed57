#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <set>

#include "snnmoo/objectives.hpp"

using namespace snnmoo;

namespace {

EvaluationSettings small_settings() {
    EvaluationSettings s;
    s.n_exc = 80;
    s.n_inh = 20;
    s.duration = 300;
    return s;
}

StudySpec two_objective(RateTargets t, double f, std::uint64_t seed) {
    StudySpec s;
    s.mode = StudyMode::two_objective_fixed_f;
    s.targets = t;
    s.fixed_f = f;
    s.seed = seed;
    s.genes = gene_specs_for(s.mode, {});
    return s;
}

StudySpec three_objective(RateTargets t, std::uint64_t seed) {
    StudySpec s;
    s.mode = StudyMode::three_objective_free_f;
    s.targets = t;
    s.seed = seed;
    s.genes = gene_specs_for(s.mode, {});
    return s;
}

NetworkGenome genome(double g_e, double g_i, double f, double mu) {
    NetworkGenome g;
    g.g_e = g_e;
    g.g_i = g_i;
    g.f = f;
    g.mu_thal = mu;
    return g;
}

// Rates from an independent rerun with the seeds an evaluation derives.
RateSummary rerun(const NetworkGenome& g, std::uint64_t seed, moo::SeedTag tag, const EvaluationSettings& s) {
    const auto seeds = evaluation_seeds(seed, tag.generation, tag.index, 0);
    const auto net = build_network(g, seeds.network, s.n_exc, s.n_inh);
    return mean_rates(run_simulation(net, g, s.duration, seeds.noise));
}

}  // namespace

TEST(RateDistances, ExactHitIsZero) {
    const auto [de, di] = rate_distances({5.0, 2.0, 0.0}, {5.0, 2.0});
    EXPECT_EQ(de, 0.0);
    EXPECT_EQ(di, 0.0);
}

TEST(RateDistances, Arithmetic) {
    const auto [de, di] = rate_distances({3.5, 4.0, 0.0}, {5.0, 2.0});
    EXPECT_EQ(de, 1.5);
    EXPECT_EQ(di, 2.0);
}

TEST(EvaluateTwoObjective, BaselineMatchesIndependentRerun) {
    const auto spec = two_objective({5.0, 2.0}, 1.0, 42);
    const EvaluationSettings settings;
    const moo::SeedTag tag{3, 7};
    const std::vector<double> genes{0.5, 1.0};
    const auto obj = evaluate_two_objective(genes, spec, tag, settings);
    const auto r = rerun(genome(0.5, 1.0, 1.0, 0.0), 42, tag, settings);
    ASSERT_EQ(obj.size(), 2u);
    EXPECT_EQ(obj[0], std::abs(r.r_exc - 5.0));
    EXPECT_EQ(obj[1], std::abs(r.r_inh - 2.0));
}

TEST(EvaluateTwoObjective, UsesFixedFractionAndMean) {
    auto spec = two_objective({5.0, 2.0}, 0.3, 9);
    spec.fixed_mu = 1.5;
    const auto settings = small_settings();
    const moo::SeedTag tag{0, 2};
    const auto obj = evaluate_two_objective(std::vector<double>{0.4, 0.8}, spec, tag, settings);
    const auto r = rerun(genome(0.4, 0.8, 0.3, 1.5), 9, tag, settings);
    EXPECT_EQ(obj[0], std::abs(r.r_exc - 5.0));
    EXPECT_EQ(obj[1], std::abs(r.r_inh - 2.0));
}

TEST(EvaluateTwoObjective, RejectsWrongModeAndGeneCount) {
    const auto settings = small_settings();
    EXPECT_THROW(evaluate_two_objective(std::vector<double>{0.5, 1.0, 0.0, 1.0}, three_objective({5, 2}, 1), {},
                                        settings),
                 std::invalid_argument);
    EXPECT_THROW(evaluate_two_objective(std::vector<double>{0.5}, two_objective({5, 2}, 1.0, 1), {}, settings),
                 std::invalid_argument);
    EXPECT_THROW(evaluate_three_objective(std::vector<double>{0.5, 1.0}, two_objective({5, 2}, 1.0, 1), {},
                                          settings),
                 std::invalid_argument);
}

TEST(EvaluateThreeObjective, SparsityObjectiveIsTheFractionGene) {
    const auto spec = three_objective({10.0, 2.0}, 5);
    const auto settings = small_settings();
    for (double f : {0.0, 0.16, 0.5, 1.0}) {
        const auto obj = evaluate_three_objective(std::vector<double>{0.0, 0.5, 1.0, f}, spec, {1, 1}, settings);
        ASSERT_EQ(obj.size(), 3u);
        EXPECT_EQ(obj[2], f);
    }
}

TEST(EvaluateThreeObjective, RateObjectivesAgreeWithTwoObjectiveMode) {
    Rng rng(77);
    const auto settings = small_settings();
    for (int trial = 0; trial < 5; ++trial) {
        const double mu = rng.uniform(-3.0, 3.0);
        const double ge = rng.uniform(0.0, 1.0);
        const double gi = rng.uniform(0.0, 2.0);
        const double f = rng.uniform(0.0, 1.0);
        const moo::SeedTag tag{static_cast<std::size_t>(trial), 4};
        const auto three = evaluate_three_objective(std::vector<double>{mu, ge, gi, f}, three_objective({5, 2}, 11),
                                                    tag, settings);
        auto spec2 = two_objective({5, 2}, f, 11);
        spec2.fixed_mu = mu;
        const auto two = evaluate_two_objective(std::vector<double>{ge, gi}, spec2, tag, settings);
        EXPECT_EQ(three[0], two[0]);
        EXPECT_EQ(three[1], two[1]);
    }
}

TEST(EvaluateThreeObjective, SeparateMeansReachEachPopulation) {
    auto spec = three_objective({5, 2}, 3);
    spec.separate_thalamic_means = true;
    spec.genes = gene_specs_for(spec.mode, {}, true);
    const auto settings = small_settings();
    const moo::SeedTag tag{2, 0};
    const auto obj = evaluate_three_objective(std::vector<double>{2.0, -1.0, 0.5, 1.0, 0.7}, spec, tag, settings);
    auto g = genome(0.5, 1.0, 0.7, 2.0);
    g.mu_thal_inh = -1.0;
    const auto r = rerun(g, 3, tag, settings);
    EXPECT_EQ(obj[0], std::abs(r.r_exc - 5.0));
    EXPECT_EQ(obj[1], std::abs(r.r_inh - 2.0));
}

TEST(Objectives, NonNegative) {
    Rng rng(5);
    const auto settings = small_settings();
    for (int trial = 0; trial < 10; ++trial) {
        const std::vector<double> genes{rng.uniform(-10, 10), rng.uniform(0, 1), rng.uniform(0, 2), rng.uniform(0, 1)};
        const auto obj = evaluate_three_objective(genes, three_objective({rng.uniform(0, 10), rng.uniform(0, 10)}, 1),
                                                  {0, static_cast<std::size_t>(trial)}, settings);
        for (double v : obj) EXPECT_GE(v, 0.0);
    }
}

TEST(Objectives, SwappedTargetsOnlyChangeTheSubtraction) {
    const auto settings = small_settings();
    const moo::SeedTag tag{1, 3};
    const std::vector<double> genes{0.6, 1.2};
    const auto a = evaluate_two_objective(genes, two_objective({5, 2}, 0.5, 8), tag, settings);
    const auto b = evaluate_two_objective(genes, two_objective({2, 5}, 0.5, 8), tag, settings);
    const auto r = rerun(genome(0.6, 1.2, 0.5, 0.0), 8, tag, settings);
    EXPECT_EQ(a[0], std::abs(r.r_exc - 5.0));
    EXPECT_EQ(b[0], std::abs(r.r_exc - 2.0));
    EXPECT_EQ(a[1], std::abs(r.r_inh - 2.0));
    EXPECT_EQ(b[1], std::abs(r.r_inh - 5.0));
}

TEST(Objectives, RepeatsAverageDistances) {
    auto settings = small_settings();
    settings.repeats = 3;
    const auto spec = two_objective({5, 2}, 1.0, 21);
    const moo::SeedTag tag{4, 1};
    const auto g = genome(0.5, 1.0, 1.0, 0.0);
    const auto obj = evaluate_two_objective(std::vector<double>{0.5, 1.0}, spec, tag, settings);
    double de = 0.0, di = 0.0;
    for (std::size_t r = 0; r < 3; ++r) {
        const auto [x, y] = rate_distances(simulate_for_evaluation(g, 21, tag, r, settings), spec.targets);
        de += x;
        di += y;
    }
    EXPECT_EQ(obj[0], de / 3.0);
    EXPECT_EQ(obj[1], di / 3.0);
}

TEST(Objectives, DivergenceYieldsSentinel) {
    auto settings = small_settings();
    settings.divergence_sentinel = 1e6;
    SnnRateProblem problem(three_objective({5, 2}, 1), settings);
    const auto obj = problem(std::vector<double>{1e308, 0.5, 1.0, 0.25}, {0, 0});
    EXPECT_EQ(obj[0], 1e6);
    EXPECT_EQ(obj[1], 1e6);
    EXPECT_EQ(obj[2], 0.25);
    EXPECT_EQ(problem.divergences(), 1u);
}

TEST(Objectives, RejectsNegativeTargets) {
    EXPECT_THROW(SnnRateProblem(two_objective({-1, 2}, 1.0, 0), small_settings()), std::domain_error);
}

TEST(ExperimentGrid, NineCombinations) {
    StudyFamily fam;
    fam.f_values = {1.0, 0.5, 0.2};
    fam.targets = {{5, 2}, {2, 2}, {2, 5}};
    const auto specs = experiment_grid(fam, 42);
    ASSERT_EQ(specs.size(), 9u);
    std::set<std::uint64_t> seeds;
    std::set<std::string> ids;
    for (const auto& s : specs) {
        EXPECT_EQ(s.mode, StudyMode::two_objective_fixed_f);
        EXPECT_EQ(s.genes.size(), 2u);
        seeds.insert(s.seed);
        ids.insert(s.id);
    }
    EXPECT_EQ(seeds.size(), 9u);
    EXPECT_EQ(ids.size(), 9u);
    EXPECT_EQ(specs[0].id, "2obj_exc5_inh2_f1");
    EXPECT_EQ(specs[8].id, "2obj_exc2_inh5_f0p2");
    EXPECT_EQ(specs[8].seed, derive_seed(42, {8}));
}

TEST(ExperimentGrid, SingleSpec) {
    StudyFamily fam;
    EXPECT_EQ(experiment_grid(fam, 1).size(), 1u);
}

TEST(ExperimentGrid, ThreeObjectiveFamilyIgnoresFractions) {
    StudyFamily fam;
    fam.mode = StudyMode::three_objective_free_f;
    fam.f_values = {1.0, 0.5};
    fam.targets = {{2, 10}, {5, 5}, {10, 2}};
    const auto specs = experiment_grid(fam, 7);
    ASSERT_EQ(specs.size(), 3u);
    EXPECT_EQ(specs[2].targets, (RateTargets{10, 2}));
    EXPECT_EQ(specs[2].objective_names().size(), 3u);
    EXPECT_EQ(specs[0].genes.size(), 4u);
    EXPECT_EQ(specs[0].genes[0].name, "mu");
    EXPECT_EQ(specs[0].genes[3].name, "f");
}

TEST(ExperimentGrid, EmptyFactorListIsAConfigError) {
    StudyFamily fam;
    fam.targets.clear();
    EXPECT_THROW(experiment_grid(fam, 1), ConfigError);
    fam.targets = {{5, 2}};
    fam.f_values.clear();
    EXPECT_THROW(experiment_grid(fam, 1), ConfigError);
    fam.f_values = {1.5};
    EXPECT_THROW(experiment_grid(fam, 1), ConfigError);
}
