#include "gpsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include "gpsim/predict.hpp"

namespace gpsim {

namespace {

struct ScoredCase {
    Eigen::MatrixXd X_train;
    Eigen::VectorXd y_train;
    Eigen::MatrixXd X_test;
    Eigen::VectorXd y_truth;
};

// Fit one method on standardized responses and score the held-out block.
double fit_and_score(const ScoredCase& c, KernelFamily family, const ExperimentConfig& config,
                     std::uint64_t chain_seed) {
    const double ybar = c.y_train.mean();
    double ysd = std::sqrt((c.y_train.array() - ybar).square().sum() /
                           std::max<Eigen::Index>(c.y_train.size() - 1, 1));
    if (!(ysd > 1e-300)) ysd = 1.0;
    const Eigen::VectorXd y_fit = (c.y_train.array() - ybar) / ysd;

    MCMCConfig mc = config.mcmc;
    mc.family = family;
    mc.seed = chain_seed;
    const Chain chain = run_chain(y_fit, c.X_train, config.priors, mc);

    MixtureMoments mm = mixture_joint_moments(c.X_test, y_fit, c.X_train, chain, config.priors);
    const Eigen::VectorXd mu = mm.mean * ysd + Eigen::VectorXd::Constant(mm.mean.size(), ybar);
    const Eigen::MatrixXd Sigma = mm.cov * (ysd * ysd);
    return std::sqrt(mahalanobis(c.y_truth, mu, Sigma));
}

ScoredCase generate_case(const ExperimentConfig& config, Rng& rng) {
    ScoredCase c;
    switch (config.generator) {
        case Generator::Sinusoid: {
            const Dataset train = gen_sinusoid(config.n_train, rng, config.noise_sd);
            const Dataset test = gen_sinusoid(config.n_test, rng, config.noise_sd);
            c.X_train = drop_columns(train.X, config.drop_columns);
            c.y_train = train.y;
            c.X_test = drop_columns(test.X, config.drop_columns);
            c.y_truth = test.f_true;  // compare against the noise-free response
            break;
        }
        case Generator::Borehole: {
            const ScaleTransform t = borehole_bounds();
            const Eigen::MatrixXd U_train = latin_hypercube(config.n_train, 8, rng);
            const Eigen::MatrixXd U_test = latin_hypercube(config.n_test, 8, rng);
            const Eigen::MatrixXd P_train = t.inverse(U_train);
            const Eigen::MatrixXd P_test = t.inverse(U_test);
            Eigen::VectorXd y_train(config.n_train), y_test(config.n_test);
            for (int i = 0; i < config.n_train; ++i) y_train(i) = borehole(P_train.row(i));
            for (int i = 0; i < config.n_test; ++i) y_test(i) = borehole(P_test.row(i));
            c.X_train = drop_columns(U_train, config.drop_columns);
            c.y_train = y_train;
            c.X_test = drop_columns(U_test, config.drop_columns);
            c.y_truth = y_test;
            break;
        }
        case Generator::ExternalCsv: {
            const Dataset& d = config.external;
            const Eigen::Index n = d.n();
            if (config.n_train + config.n_test > n) {
                throw std::invalid_argument(
                    "monte_carlo_compare: n_train + n_test exceeds the external dataset size");
            }
            std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
            std::iota(idx.begin(), idx.end(), 0);
            for (std::size_t i = idx.size() - 1; i > 0; --i) {
                const std::size_t j = static_cast<std::size_t>(rng.uniform() * double(i + 1));
                std::swap(idx[i], idx[std::min(j, i)]);
            }
            const Eigen::MatrixXd Xd = drop_columns(d.X, config.drop_columns);
            c.X_train.resize(config.n_train, Xd.cols());
            c.y_train.resize(config.n_train);
            c.X_test.resize(config.n_test, Xd.cols());
            c.y_truth.resize(config.n_test);
            for (int i = 0; i < config.n_train; ++i) {
                c.X_train.row(i) = Xd.row(idx[static_cast<std::size_t>(i)]);
                c.y_train(i) = d.y(idx[static_cast<std::size_t>(i)]);
            }
            for (int i = 0; i < config.n_test; ++i) {
                const Eigen::Index r = idx[static_cast<std::size_t>(config.n_train + i)];
                c.X_test.row(i) = Xd.row(r);
                c.y_truth(i) = d.y(r);
            }
            break;
        }
    }
    return c;
}

// canonical reporting order: iso, sep, sim
std::vector<KernelFamily> ordered_methods(const std::vector<KernelFamily>& methods) {
    std::vector<KernelFamily> out;
    for (KernelFamily f :
         {KernelFamily::Isotropic, KernelFamily::Separable, KernelFamily::SIM}) {
        if (std::find(methods.begin(), methods.end(), f) != methods.end()) out.push_back(f);
    }
    return out;
}

struct ReplicateOutcome {
    std::vector<double> distances;  // per method
    bool failed = false;
    std::string error;
};

ComparisonSummary collect(const std::vector<KernelFamily>& methods,
                          std::vector<ReplicateOutcome>&& outcomes) {
    ComparisonSummary out;
    for (KernelFamily f : methods) out.methods.push_back(family_name(f));
    out.sqrt_mah.resize(methods.size());
    for (auto& o : outcomes) {
        if (o.failed) {
            ++out.failed_replicates;
            warn("replicate excluded: " + o.error);
            continue;
        }
        for (std::size_t m = 0; m < methods.size(); ++m) {
            out.sqrt_mah[m].push_back(o.distances[m]);
        }
    }
    if (!out.sqrt_mah.empty() && out.sqrt_mah.front().empty()) {
        throw std::runtime_error("comparison run: every replicate failed");
    }
    out.finalize();
    return out;
}

void run_parallel(int n_jobs, int threads, const std::function<void(int)>& work) {
    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    int n_threads = threads > 0 ? threads : (hw > 0 ? hw : 1);
    n_threads = std::min(n_threads, n_jobs);
    if (n_threads <= 1) {
        for (int i = 0; i < n_jobs; ++i) work(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n_jobs) return;
                work(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

double sinusoid_link(double t) {
    return std::sin(std::numbers::pi * t / 5.0) + 0.2 * std::cos(4.0 * std::numbers::pi * t / 5.0);
}

Eigen::Vector4d sinusoid_index() {
    return Eigen::Vector4d(2.85, 0.70, 0.99, -0.78);
}

Dataset gen_sinusoid(int n, Rng& rng, double noise_sd) {
    if (n < 1) throw std::invalid_argument("gen_sinusoid: n must be positive");
    if (noise_sd < 0.0) throw std::invalid_argument("gen_sinusoid: negative noise sd");
    Dataset d;
    d.X.resize(n, 4);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < 4; ++j) d.X(i, j) = rng.uniform();
    }
    d.transform = ScaleTransform::identity(4);
    const Eigen::VectorXd idx = d.X * sinusoid_index();
    d.f_true = idx.unaryExpr([](double t) { return sinusoid_link(t); });
    d.y = d.f_true;
    for (int i = 0; i < n; ++i) d.y(i) += noise_sd * rng.normal();
    return d;
}

ScaleTransform borehole_bounds() {
    Eigen::VectorXd lo(8), hi(8);
    lo << 0.05, 100.0, 63070.0, 63.1, 990.0, 700.0, 1120.0, 9855.0;
    hi << 0.15, 5000.0, 115600.0, 116.0, 1110.0, 820.0, 1680.0, 12045.0;
    return ScaleTransform::from_bounds(lo, hi);
}

double borehole(const Eigen::VectorXd& x, bool strict_bounds) {
    if (x.size() != 8) throw std::invalid_argument("borehole: expected 8 inputs");
    const double r_w = x(0), r = x(1), T_u = x(2), T_l = x(3);
    const double H_u = x(4), H_l = x(5), L = x(6), K_w = x(7);
    const ScaleTransform b = borehole_bounds();
    for (Eigen::Index j = 0; j < 8; ++j) {
        if (x(j) < b.lo(j) || x(j) > b.hi(j)) {
            const std::string msg = "borehole: input " + std::to_string(j + 1) +
                                    " outside its domain [" + std::to_string(b.lo(j)) + ", " +
                                    std::to_string(b.hi(j)) + "]";
            if (strict_bounds) throw std::invalid_argument(msg);
            warn(msg);
        }
    }
    if (r <= r_w) throw std::invalid_argument("borehole: r must exceed r_w");
    const double lg = std::log(r / r_w);
    return 2.0 * std::numbers::pi * T_u * (H_u - H_l) /
           (lg * (1.0 + 2.0 * L * T_u / (lg * r_w * r_w * K_w) + T_u / T_l));
}

Eigen::MatrixXd latin_hypercube(int n, int p, Rng& rng) {
    if (n < 1 || p < 1) throw std::invalid_argument("latin_hypercube: n and p must be positive");
    Eigen::MatrixXd X(n, p);
    std::vector<int> strata(static_cast<std::size_t>(n));
    for (int j = 0; j < p; ++j) {
        std::iota(strata.begin(), strata.end(), 0);
        for (std::size_t i = strata.size() - 1; i > 0; --i) {
            const std::size_t k = static_cast<std::size_t>(rng.uniform() * double(i + 1));
            std::swap(strata[i], strata[std::min(k, i)]);
        }
        for (int i = 0; i < n; ++i) {
            X(i, j) = (static_cast<double>(strata[static_cast<std::size_t>(i)]) + rng.uniform()) /
                      static_cast<double>(n);
        }
    }
    return X;
}

void ExperimentConfig::validate() const {
    if (n_reps < 1) throw std::invalid_argument("ExperimentConfig: n_reps must be >= 1");
    if (methods.empty()) throw std::invalid_argument("ExperimentConfig: need at least one method");
    if (n_train < 2) throw std::invalid_argument("ExperimentConfig: n_train must be >= 2");
    if (n_test < 1) throw std::invalid_argument("ExperimentConfig: n_test must be >= 1");
    priors.validate();
}

ComparisonSummary monte_carlo_compare(const ExperimentConfig& config) {
    config.validate();
    const std::vector<KernelFamily> methods = ordered_methods(config.methods);
    std::vector<ReplicateOutcome> outcomes(static_cast<std::size_t>(config.n_reps));
    const Rng master(config.seed);

    run_parallel(config.n_reps, config.threads, [&](int rep) {
        ReplicateOutcome& o = outcomes[static_cast<std::size_t>(rep)];
        try {
            Rng rep_rng = master.substream(0x52455000ULL + static_cast<std::uint64_t>(rep));
            const ScoredCase c = generate_case(config, rep_rng);
            o.distances.reserve(methods.size());
            for (std::size_t m = 0; m < methods.size(); ++m) {
                const std::uint64_t chain_seed =
                    mix64(config.seed ^ mix64(0xC4A1'0000ULL + 257ULL * rep + m));
                o.distances.push_back(fit_and_score(c, methods[m], config, chain_seed));
            }
        } catch (const std::exception& e) {
            o.failed = true;
            o.error = "replicate " + std::to_string(rep) + ": " + e.what();
        }
    });
    return collect(methods, std::move(outcomes));
}

ComparisonSummary inverted_cv(const Dataset& data, int k, const ExperimentConfig& config) {
    config.validate();
    if (k < 2) throw std::invalid_argument("inverted_cv: k must be >= 2");
    const Eigen::Index n = data.n();
    if (n < 2 * k) throw std::invalid_argument("inverted_cv: need n >= 2k");
    const std::vector<KernelFamily> methods = ordered_methods(config.methods);
    const Eigen::MatrixXd Xd = drop_columns(data.X, config.drop_columns);

    const int jobs = config.n_reps * k;
    std::vector<ReplicateOutcome> outcomes(static_cast<std::size_t>(jobs));
    const Rng master(config.seed);

    // fold assignments per partition, fixed up front for determinism
    std::vector<std::vector<int>> assignment(static_cast<std::size_t>(config.n_reps));
    for (int part = 0; part < config.n_reps; ++part) {
        Rng prng = master.substream(0xF01D'0000ULL + static_cast<std::uint64_t>(part));
        std::vector<int> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = perm.size() - 1; i > 0; --i) {
            const std::size_t j = static_cast<std::size_t>(prng.uniform() * double(i + 1));
            std::swap(perm[i], perm[std::min(j, i)]);
        }
        std::vector<int> fold_of(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) {
            fold_of[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] =
                static_cast<int>(i % k);
        }
        assignment[static_cast<std::size_t>(part)] = std::move(fold_of);
    }

    run_parallel(jobs, config.threads, [&](int job) {
        ReplicateOutcome& o = outcomes[static_cast<std::size_t>(job)];
        const int part = job / k;
        const int fold = job % k;
        try {
            const std::vector<int>& fold_of = assignment[static_cast<std::size_t>(part)];
            std::vector<Eigen::Index> in, out_idx;
            for (Eigen::Index i = 0; i < n; ++i) {
                (fold_of[static_cast<std::size_t>(i)] == fold ? in : out_idx).push_back(i);
            }
            if (in.size() <= 1) {
                throw std::invalid_argument("fold too small to fit (n <= 1)");
            }
            ScoredCase c;
            c.X_train.resize(static_cast<Eigen::Index>(in.size()), Xd.cols());
            c.y_train.resize(static_cast<Eigen::Index>(in.size()));
            for (std::size_t i = 0; i < in.size(); ++i) {
                c.X_train.row(static_cast<Eigen::Index>(i)) = Xd.row(in[i]);
                c.y_train(static_cast<Eigen::Index>(i)) = data.y(in[i]);
            }
            c.X_test.resize(static_cast<Eigen::Index>(out_idx.size()), Xd.cols());
            c.y_truth.resize(static_cast<Eigen::Index>(out_idx.size()));
            for (std::size_t i = 0; i < out_idx.size(); ++i) {
                c.X_test.row(static_cast<Eigen::Index>(i)) = Xd.row(out_idx[i]);
                c.y_truth(static_cast<Eigen::Index>(i)) = data.y(out_idx[i]);
            }
            o.distances.reserve(methods.size());
            for (std::size_t m = 0; m < methods.size(); ++m) {
                const std::uint64_t chain_seed =
                    mix64(config.seed ^ mix64(0xC4A2'0000ULL + 1031ULL * job + m));
                o.distances.push_back(fit_and_score(c, methods[m], config, chain_seed));
            }
        } catch (const std::exception& e) {
            o.failed = true;
            o.error = "partition " + std::to_string(part) + " fold " + std::to_string(fold) +
                      ": " + e.what();
        }
    });
    return collect(methods, std::move(outcomes));
}

}  // namespace gpsim
