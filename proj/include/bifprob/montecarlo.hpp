#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "bifprob/distributions.hpp"
#include "bifprob/models.hpp"
#include "bifprob/moments.hpp"

namespace bifprob::montecarlo {

struct McOptions {
    std::size_t n_samples = 1000000;
    std::uint64_t seed = 1;
    int n_moms = 5;
    int hist_bins = 100;
    /// 0 = one worker per hardware thread.
    unsigned workers = 0;
};

struct Histogram {
    std::vector<double> edges;
    std::vector<std::uint64_t> counts;
};

struct McResult {
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
    std::size_t subcritical_count = 0;
    double sign_probability = 0.0;
    MomentSequence moments;
    /// Standard errors of the sample moments, from the power sums up to 2n.
    std::vector<double> moment_stderr;
    Histogram histogram;
    /// Sorted coefficient values backing the empirical CDF.
    std::vector<double> sorted;

    double ecdf(double y) const;
    void write_histogram_csv(std::ostream& os) const;
    void write_ecdf_csv(std::ostream& os, std::size_t points = 1000) const;
};

/// Sample block size; every block owns an independent RNG stream.
constexpr std::size_t kBlock = 16384;

McResult mc_run(const models::BifurcationModel& model, const std::vector<Distribution>& inputs,
                const McOptions& opt);

/// [lo, hi] quantile range of a pilot sample of the model coefficient.
Support pilot_support(const models::BifurcationModel& model, const std::vector<Distribution>& inputs,
                      std::uint64_t seed, std::size_t n = 10000, double tail = 1e-4);

}  // namespace bifprob::montecarlo
