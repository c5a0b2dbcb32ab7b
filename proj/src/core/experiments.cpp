#include "core/experiments.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "core/parallel.hpp"

namespace garchm {

void ExperimentSpec::validate() const {
    theta0.validate();
    dist.validate();
    if (R < 1) throw InvalidArgumentError("experiment requires R >= 1");
    if (n < 1) throw InvalidArgumentError("experiment requires n >= 1");
    if (estimators.empty()) throw InvalidArgumentError("experiment requires an estimator");
    const GarchOrder fo = effective_fit_order();
    fo.validate();
    if (fo.p < theta0.order.p || fo.q < theta0.order.q) {
        throw InvalidArgumentError("fit_order must dominate the DGP order componentwise");
    }
}

namespace {

// Seed plan: every replication r owns the stream derive_seed(master, r+1);
// within it, sub-stream 0 simulates the path and sub-stream 1+e*8+s drives
// the bootstrap of estimator e under scheme s.
std::uint64_t replication_seed(std::uint64_t master, int r) {
    return derive_seed(master, static_cast<std::uint64_t>(r) + 1);
}

}  // namespace

ReplicateTable run_replications(const ExperimentSpec& spec) {
    spec.validate();
    const GarchOrder fit_order = spec.effective_fit_order();
    const int k = fit_order.dim();
    const std::size_t n_est = spec.estimators.size();

    ReplicateTable table;
    table.fit_order = fit_order;
    table.n = spec.n;
    table.R = spec.R;
    table.estimators.resize(n_est);
    for (std::size_t e = 0; e < n_est; ++e) {
        auto& est = table.estimators[e];
        est.score = spec.estimators[e];
        est.ch = solve_ch_quadrature(est.score, spec.dist);
        est.estimates.resize(spec.R, k);
        est.converged.assign(static_cast<std::size_t>(spec.R), 0);
    }

    parallel_for(static_cast<std::size_t>(spec.R), spec.threads, [&](std::size_t r) {
        const std::uint64_t rseed = replication_seed(spec.seed, static_cast<int>(r));
        const SeriesData data =
            simulate_path(spec.theta0, spec.dist, static_cast<std::size_t>(spec.n),
                          static_cast<std::size_t>(spec.burn_in), derive_seed(rseed, 0));
        for (std::size_t e = 0; e < n_est; ++e) {
            FitConfig config;
            config.score = spec.estimators[e];
            const FitResult fr = fit(data, fit_order, config);
            table.estimators[e].estimates.row(static_cast<Eigen::Index>(r)) =
                fr.theta_hat.to_vector().transpose();
            table.estimators[e].converged[r] = fr.converged ? 1 : 0;
        }
    });

    for (auto& est : table.estimators) {
        est.n_converged = 0;
        for (char c : est.converged) est.n_converged += c;
    }
    return table;
}

namespace {

BiasMse reduce_bias_mse(const EstimatorReplicates& reps,
                        const Eigen::VectorXd& reference,
                        const Eigen::VectorXd& scale_divisor, double sqrt_n) {
    const Eigen::Index k = reps.estimates.cols();
    BiasMse out;
    out.bias = Eigen::VectorXd::Zero(k);
    out.mse = Eigen::VectorXd::Zero(k);
    out.used = 0;
    for (Eigen::Index r = 0; r < reps.estimates.rows(); ++r) {
        if (!reps.converged[static_cast<std::size_t>(r)]) continue;
        ++out.used;
        for (Eigen::Index j = 0; j < k; ++j) {
            const double err =
                sqrt_n * (reps.estimates(r, j) / scale_divisor[j] - reference[j]);
            out.bias[j] += err;
            out.mse[j] += err * err;
        }
    }
    if (out.used > 0) {
        out.bias /= out.used;
        out.mse /= out.used;
    }
    out.present = 2 * out.used >= reps.estimates.rows();
    return out;
}

}  // namespace

BiasMse standardized_bias_mse(const EstimatorReplicates& reps, const ParameterVector& theta0,
                              double ch) {
    if (!(ch > 0.0)) throw InvalidArgumentError("standardized_bias_mse: c_H must be > 0");
    const int p = theta0.order.p;
    const Eigen::VectorXd ref = theta0.to_vector();
    Eigen::VectorXd divisor = Eigen::VectorXd::Ones(ref.size());
    for (int j = 0; j <= p; ++j) divisor[j] = ch;  // omega and alpha block
    return reduce_bias_mse(reps, ref, divisor, 1.0);
}

BiasMse normalized_bias_mse(const EstimatorReplicates& reps, const ParameterVector& theta0h,
                            int n) {
    const Eigen::VectorXd ref = theta0h.to_vector();
    const Eigen::VectorXd divisor = Eigen::VectorXd::Ones(ref.size());
    return reduce_bias_mse(reps, ref, divisor, std::sqrt(static_cast<double>(n)));
}

BiasMseReport bias_mse_study(const ExperimentSpec& spec) {
    BiasMseReport report;
    report.table = run_replications(spec);
    report.theta0 = embed(spec.theta0, report.table.fit_order);
    for (const auto& est : report.table.estimators) {
        report.standardized.push_back(
            standardized_bias_mse(est, report.theta0, est.ch));
        const ParameterVector theta0h = scale_by_ch(report.theta0, est.ch);
        report.normalized.push_back(normalized_bias_mse(est, theta0h, spec.n));
    }
    return report;
}

double coverage_percent(const std::vector<char>& covered, int eligible) {
    if (eligible <= 0) return 0.0;
    int hits = 0;
    for (char c : covered) hits += c;
    return 100.0 * static_cast<double>(hits) / static_cast<double>(eligible);
}

CoverageReport coverage_study(const ExperimentSpec& spec, double level) {
    spec.validate();
    if (!(level > 0.0 && level < 1.0)) {
        throw InvalidArgumentError("coverage level must lie in (0,1)");
    }
    if (spec.B < 100 && !spec.schemes.empty()) {
        throw InvalidArgumentError("coverage bootstrap arms require B >= 100");
    }
    const GarchOrder fit_order = spec.effective_fit_order();
    const int k = fit_order.dim();
    const std::size_t n_est = spec.estimators.size();
    const std::size_t n_methods = spec.schemes.size() + 1;  // + asymptotic

    CoverageReport report;
    report.level = level;
    report.R = spec.R;
    report.table.fit_order = fit_order;
    report.table.n = spec.n;
    report.table.R = spec.R;
    report.table.estimators.resize(n_est);

    // flat result slots, written per replication index
    struct Slot {
        std::vector<char> covered;  // n_methods * k entries, -1 marks "no CI"
    };
    std::vector<Slot> slots(static_cast<std::size_t>(spec.R) * n_est);

    std::vector<double> ch(n_est);
    std::vector<ParameterVector> truth(n_est);
    for (std::size_t e = 0; e < n_est; ++e) {
        auto& est = report.table.estimators[e];
        est.score = spec.estimators[e];
        est.ch = solve_ch_quadrature(est.score, spec.dist);
        est.estimates.resize(spec.R, k);
        est.converged.assign(static_cast<std::size_t>(spec.R), 0);
        ch[e] = est.ch;
        truth[e] = scale_by_ch(embed(spec.theta0, fit_order), est.ch);
    }

    parallel_for(static_cast<std::size_t>(spec.R), spec.threads, [&](std::size_t r) {
        const std::uint64_t rseed = replication_seed(spec.seed, static_cast<int>(r));
        const SeriesData data =
            simulate_path(spec.theta0, spec.dist, static_cast<std::size_t>(spec.n),
                          static_cast<std::size_t>(spec.burn_in), derive_seed(rseed, 0));
        for (std::size_t e = 0; e < n_est; ++e) {
            auto& slot = slots[r * n_est + e];
            slot.covered.assign(n_methods * static_cast<std::size_t>(k), -1);
            FitConfig config;
            config.score = spec.estimators[e];
            const FitResult fr = fit(data, fit_order, config);
            report.table.estimators[e].estimates.row(static_cast<Eigen::Index>(r)) =
                fr.theta_hat.to_vector().transpose();
            report.table.estimators[e].converged[r] = fr.converged ? 1 : 0;
            if (!fr.converged) continue;

            const Eigen::VectorXd gamma = truth[e].to_vector();
            for (std::size_t s = 0; s < spec.schemes.size(); ++s) {
                try {
                    const BootstrapRun run = bootstrap_fit(
                        data, fr, config, spec.schemes[s], spec.B,
                        derive_seed(rseed, 1 + e * 8 + s));
                    const auto cis = bootstrap_ci(run, level);
                    for (int j = 0; j < k; ++j) {
                        slot.covered[s * k + j] =
                            cis[static_cast<std::size_t>(j)].contains(gamma[j]) ? 1 : 0;
                    }
                } catch (const GarchError&) {
                    // replication contributes no CI for this scheme
                }
            }
            try {
                const AsymptoticCovariance cov =
                    estimate_covariance(data, fr, config.score);
                const auto cis = normal_ci(fr, cov, level);
                for (int j = 0; j < k; ++j) {
                    slot.covered[spec.schemes.size() * k + j] =
                        cis[static_cast<std::size_t>(j)].contains(gamma[j]) ? 1 : 0;
                }
            } catch (const GarchError&) {
            }
        }
    });

    for (std::size_t e = 0; e < n_est; ++e) {
        auto& est = report.table.estimators[e];
        est.n_converged = 0;
        for (char c : est.converged) est.n_converged += c;

        CoverageEstimatorReport er;
        er.score = est.score;
        er.ch = ch[e];
        er.n_converged = est.n_converged;
        for (std::size_t m = 0; m < n_methods; ++m) {
            CoverageCell cell;
            cell.method = (m < spec.schemes.size())
                              ? "scheme-" + scheme_name(spec.schemes[m])
                              : "asymptotic";
            cell.coverage_pct = Eigen::VectorXd::Zero(k);
            for (int j = 0; j < k; ++j) {
                int eligible = 0, hits = 0;
                for (int r = 0; r < spec.R; ++r) {
                    const char c = slots[static_cast<std::size_t>(r) * n_est + e]
                                       .covered[m * static_cast<std::size_t>(k) +
                                                static_cast<std::size_t>(j)];
                    if (c < 0) continue;
                    ++eligible;
                    hits += c;
                }
                cell.eligible = eligible;
                cell.coverage_pct[j] =
                    eligible > 0 ? 100.0 * hits / static_cast<double>(eligible) : 0.0;
            }
            er.cells.push_back(std::move(cell));
        }
        report.estimators.push_back(std::move(er));
    }
    return report;
}

MisspecReport misspecification_study(const ExperimentSpec& spec) {
    spec.validate();
    if (!spec.fit_order.has_value()) {
        throw InvalidArgumentError("misspecification study requires fit_order");
    }
    if (spec.fit_order->p <= spec.theta0.order.p &&
        spec.fit_order->q <= spec.theta0.order.q) {
        throw InvalidArgumentError("misspecification study requires a strictly larger order");
    }
    MisspecReport report;
    report.table = run_replications(spec);
    report.theta0_embedded = embed(spec.theta0, report.table.fit_order);
    for (const auto& est : report.table.estimators) {
        report.standardized.push_back(
            standardized_bias_mse(est, report.theta0_embedded, est.ch));
    }
    return report;
}

ChTable compute_ch_table(const std::vector<ErrorDistribution>& dists,
                         const std::vector<ScoreFunction>& scores, std::size_t samples,
                         std::uint64_t seed) {
    ChTable table;
    table.dists = dists;
    table.scores = scores;
    table.samples = samples;
    table.seed = seed;
    table.values.resize(static_cast<Eigen::Index>(dists.size()),
                        static_cast<Eigen::Index>(scores.size()));
    for (std::size_t i = 0; i < dists.size(); ++i) {
        for (std::size_t j = 0; j < scores.size(); ++j) {
            table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                samples == 0
                    ? solve_ch_quadrature(scores[j], dists[i])
                    : solve_ch_mc(scores[j], dists[i], samples,
                                  derive_seed(seed, i * 97 + j + 1));
        }
    }
    return table;
}

}  // namespace garchm
