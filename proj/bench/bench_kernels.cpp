// Parallel kernels against their serial references on synthetic heads.

#include "otfcl/classifier.hpp"
#include "otfcl/isay.hpp"
#include "otfcl/kernels.hpp"
#include "otfcl/rng.hpp"
#include "otfcl/stats.hpp"

#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

namespace {

using namespace otfcl;

struct Fixture {
    LinearHead head;
    StatisticsStore store;
    FeatureSet data;
    std::vector<LabeledFeature> samples;
    std::vector<std::size_t> indices;

    Fixture(std::size_t classes, std::size_t dim, std::size_t rows) : data(dim) {
        Rng rng(42);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::vector<Label> labels(classes);
        std::iota(labels.begin(), labels.end(), Label{0});
        std::vector<double> w(classes * dim);
        for (double& x : w) x = 0.1 * normal(rng);
        head = LinearHead(dim, labels, w);
        std::vector<double> f(dim);
        for (std::size_t r = 0; r < rows; ++r) {
            const auto label = static_cast<Label>(r % classes);
            for (double& x : f) x = normal(rng) + static_cast<double>(label);
            data.push_back(label, f);
            store.observe(label, f);
        }
        for (std::size_t r = 0; r < rows; ++r) {
            samples.push_back({data.row(r), data.labels[r]});
        }
        indices.resize(rows);
        std::iota(indices.begin(), indices.end(), std::size_t{0});
    }
};

template <bool Parallel>
void BM_Gradient(benchmark::State& state) {
    Fixture fx(static_cast<std::size_t>(state.range(0)), 512, static_cast<std::size_t>(state.range(1)));
    std::vector<double> grad(fx.head.weights().size());
    for (auto _ : state) {
        std::fill(grad.begin(), grad.end(), 0.0);
        const double loss = Parallel ? kernels::accumulate_ce_gradient(fx.head, fx.samples, grad)
                                     : kernels::serial::accumulate_ce_gradient(fx.head, fx.samples, grad);
        benchmark::DoNotOptimize(loss);
    }
    state.SetItemsProcessed(state.iterations() * state.range(1));
}

template <bool Parallel>
void BM_Evaluate(benchmark::State& state) {
    Fixture fx(static_cast<std::size_t>(state.range(0)), 512, static_cast<std::size_t>(state.range(1)));
    const IsayModel isay(fx.store);
    for (auto _ : state) {
        const std::size_t correct = Parallel ? kernels::count_correct(fx.head, &isay, fx.data, fx.indices)
                                             : kernels::serial::count_correct(fx.head, &isay, fx.data, fx.indices);
        benchmark::DoNotOptimize(correct);
    }
    state.SetItemsProcessed(state.iterations() * state.range(1));
}

template <bool Parallel>
void BM_Distances(benchmark::State& state) {
    Fixture fx(static_cast<std::size_t>(state.range(0)), 512, static_cast<std::size_t>(state.range(1)));
    const IsayModel isay(fx.store);
    std::vector<double> out(fx.data.size() * fx.head.class_count());
    for (auto _ : state) {
        if (Parallel) {
            kernels::batch_distances(isay, fx.data, out);
        } else {
            kernels::serial::batch_distances(isay, fx.data, out);
        }
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(1));
}

} // namespace

BENCHMARK(BM_Gradient<false>)->Args({100, 100})->Args({100, 1000});
BENCHMARK(BM_Gradient<true>)->Args({100, 100})->Args({100, 1000});
BENCHMARK(BM_Evaluate<false>)->Args({100, 2000});
BENCHMARK(BM_Evaluate<true>)->Args({100, 2000});
BENCHMARK(BM_Distances<false>)->Args({100, 2000});
BENCHMARK(BM_Distances<true>)->Args({100, 2000});

BENCHMARK_MAIN();
