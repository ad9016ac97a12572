#include "bifprob/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

#include "bifprob/errors.hpp"
#include "bifprob/kernels.hpp"

namespace bifprob::montecarlo {
namespace {

struct BlockStats {
    std::vector<double> sums;
    std::size_t sub = 0;
};

double sorted_quantile(const std::vector<double>& s, double p) {
    const double pos = p * static_cast<double>(s.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    if (i + 1 >= s.size()) return s.back();
    const double t = pos - static_cast<double>(i);
    return s[i] + t * (s[i + 1] - s[i]);
}

}  // namespace

double McResult::ecdf(double y) const {
    if (sorted.empty()) return 0.0;
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), y);
    return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

void McResult::write_histogram_csv(std::ostream& os) const {
    // bin centers with density values, overlayable on a PiecewisePdf
    os << "x,density\n";
    os.precision(17);
    for (std::size_t i = 0; i < histogram.counts.size(); ++i) {
        const double w = histogram.edges[i + 1] - histogram.edges[i];
        const double c = 0.5 * (histogram.edges[i] + histogram.edges[i + 1]);
        os << c << ',' << static_cast<double>(histogram.counts[i]) / (static_cast<double>(n_samples) * w)
           << '\n';
    }
}

void McResult::write_ecdf_csv(std::ostream& os, std::size_t points) const {
    os << "x,cumulative\n";
    os.precision(17);
    if (sorted.empty()) return;
    const double lo = sorted.front(), hi = sorted.back();
    for (std::size_t i = 0; i < points; ++i) {
        const double x = points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (points - 1);
        os << x << ',' << ecdf(x) << '\n';
    }
}

McResult mc_run(const models::BifurcationModel& model, const std::vector<Distribution>& inputs,
                const McOptions& opt) {
    if (opt.n_samples < 1) throw DomainError("mc_run: n_samples must be >= 1");
    if (inputs.size() != model.dim()) {
        throw ConfigError("mc_run: model \"" + model.name + "\" expects " + std::to_string(model.dim()) +
                          " inputs, got " + std::to_string(inputs.size()));
    }
    if (opt.n_moms < 1 || 2 * opt.n_moms > kernels::kMaxPowerSums)
        throw DomainError("mc_run: n_moms must lie in [1, 12]");
    if (opt.hist_bins < 1) throw DomainError("mc_run: hist_bins must be >= 1");

    const std::size_t n = opt.n_samples;
    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    const int K = 2 * opt.n_moms;
    const std::size_t d = inputs.size();
    const kernels::Table& kt = kernels::active();
    const bool below = model.subcritical_when == models::Subcritical::WhenNegative;

    std::vector<double> values(n);
    std::vector<BlockStats> stats(nblocks);

    auto run_block = [&](std::size_t b) {
        const std::size_t begin = b * kBlock;
        const std::size_t len = std::min(kBlock, n - begin);
        std::vector<std::vector<double>> cols(d, std::vector<double>(len));
        for (std::size_t i = 0; i < d; ++i) {
            CounterRng rng(opt.seed, b * 64 + i);
            for (std::size_t j = 0; j < len; ++j) cols[i][j] = inputs[i].sample(rng);
        }
        double* out = values.data() + begin;
        if (model.kernel && d == 2) {
            kt.model_eval(*model.kernel, cols[0].data(), cols[1].data(), len, out);
        } else {
            std::vector<double> row(d);
            for (std::size_t j = 0; j < len; ++j) {
                for (std::size_t i = 0; i < d; ++i) row[i] = cols[i][j];
                out[j] = model.eval(row);
            }
        }
        BlockStats& st = stats[b];
        st.sums.assign(K, 0.0);
        kt.power_sums(out, len, K, st.sums.data());
        st.sub = kt.count_strict(out, len, 0.0, below);
    };

    unsigned workers = opt.workers ? opt.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, nblocks));
    if (workers <= 1) {
        for (std::size_t b = 0; b < nblocks; ++b) run_block(b);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t b; (b = next.fetch_add(1)) < nblocks;) run_block(b);
            });
        }
        for (auto& t : pool) t.join();
    }

    McResult r;
    r.n_samples = n;
    r.seed = opt.seed;
    std::vector<double> sums(K, 0.0);
    for (const auto& st : stats) {
        for (int k = 0; k < K; ++k) sums[k] += st.sums[k];
        r.subcritical_count += st.sub;
    }
    const double nd = static_cast<double>(n);
    r.sign_probability = static_cast<double>(r.subcritical_count) / nd;
    r.moments.provenance = Provenance::MonteCarlo;
    for (int k = 1; k <= opt.n_moms; ++k) {
        const double m = sums[k - 1] / nd;
        const double m2 = sums[2 * k - 1] / nd;
        r.moments.mu.push_back(m);
        r.moment_stderr.push_back(std::sqrt(std::max(0.0, m2 - m * m) / nd));
    }

    r.sorted = std::move(values);
    std::sort(r.sorted.begin(), r.sorted.end());
    double lo = r.sorted.front(), hi = r.sorted.back();
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    const int nb = opt.hist_bins;
    r.histogram.edges.resize(nb + 1);
    for (int i = 0; i <= nb; ++i) r.histogram.edges[i] = lo + (hi - lo) * i / nb;
    r.histogram.counts.assign(nb, 0);
    for (double v : r.sorted) {
        int bin = static_cast<int>((v - lo) / (hi - lo) * nb);
        r.histogram.counts[std::clamp(bin, 0, nb - 1)]++;
    }
    return r;
}

Support pilot_support(const models::BifurcationModel& model, const std::vector<Distribution>& inputs,
                      std::uint64_t seed, std::size_t n, double tail) {
    McOptions opt;
    opt.n_samples = n;
    opt.seed = seed;
    opt.n_moms = 1;
    opt.hist_bins = 1;
    const McResult r = mc_run(model, inputs, opt);
    return {sorted_quantile(r.sorted, tail), sorted_quantile(r.sorted, 1.0 - tail)};
}

}  // namespace bifprob::montecarlo
