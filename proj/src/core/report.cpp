#include "core/report.hpp"

#include "core/errors.hpp"

namespace garchm {

namespace {

Json vector_json(const Eigen::VectorXd& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Json matrix_json(const Eigen::MatrixXd& m) {
    Json out = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(std::move(row));
    }
    return out;
}

Json flags_json(const std::vector<char>& flags) {
    Json out = Json::array();
    for (char c : flags) out.push_back(static_cast<int>(c));
    return out;
}

Json bias_mse_json(const BiasMse& b) {
    Json out;
    out["present"] = b.present;
    out["used"] = b.used;
    if (b.present) {
        out["bias"] = vector_json(b.bias);
        out["mse"] = vector_json(b.mse);
    } else {
        out["bias"] = nullptr;
        out["mse"] = nullptr;
    }
    return out;
}

}  // namespace

Json order_json(GarchOrder order) { return Json{{"p", order.p}, {"q", order.q}}; }

Json score_json(const ScoreFunction& score) {
    Json out;
    out["kind"] = score.name();
    if (score.kind == ScoreKind::Huber || score.kind == ScoreKind::Mu) {
        out["tuning"] = score.tuning;
    } else {
        out["tuning"] = nullptr;
    }
    return out;
}

Json dist_json(const ErrorDistribution& dist) {
    Json out;
    switch (dist.kind) {
        case DistKind::Normal: out["kind"] = "normal"; break;
        case DistKind::DoubleExponential: out["kind"] = "de"; break;
        case DistKind::Logistic: out["kind"] = "logistic"; break;
        case DistKind::StudentT: out["kind"] = "t"; break;
    }
    if (dist.kind == DistKind::StudentT) {
        out["df"] = dist.df;
    } else {
        out["df"] = nullptr;
    }
    out["standardized"] = dist.standardized;
    return out;
}

Json theta_json(const ParameterVector& theta) {
    Json out;
    out["omega"] = theta.omega;
    out["alpha"] = theta.alpha;
    out["beta"] = theta.beta;
    return out;
}

GarchOrder order_from_json(const Json& j) {
    GarchOrder order{j.at("p").get<int>(), j.at("q").get<int>()};
    order.validate();
    return order;
}

ScoreFunction score_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    double tuning = 0.0;
    if (j.contains("tuning") && !j.at("tuning").is_null()) {
        tuning = j.at("tuning").get<double>();
    }
    return parse_score(kind, tuning);
}

ErrorDistribution dist_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    ErrorDistribution d;
    if (kind == "normal") {
        d = ErrorDistribution::normal();
    } else if (kind == "de") {
        d = ErrorDistribution::double_exponential();
    } else if (kind == "logistic") {
        d = ErrorDistribution::logistic();
    } else if (kind == "t") {
        d = ErrorDistribution::student_t(j.at("df").get<double>());
    } else {
        throw InvalidArgumentError("unknown distribution kind '" + kind + "'");
    }
    if (j.contains("standardized")) d.standardized = j.at("standardized").get<bool>();
    d.validate();
    return d;
}

ParameterVector theta_from_json(const Json& j, GarchOrder order) {
    ParameterVector theta;
    theta.order = order;
    theta.omega = j.at("omega").get<double>();
    theta.alpha = j.at("alpha").get<std::vector<double>>();
    theta.beta = j.at("beta").get<std::vector<double>>();
    theta.validate();
    return theta;
}

ExperimentSpec experiment_spec_from_json(const Json& j) {
    ExperimentSpec spec;
    const GarchOrder order = order_from_json(j.at("order"));
    spec.theta0 = theta_from_json(j.at("theta0"), order);
    spec.dist = dist_from_json(j.at("dist"));
    spec.n = j.value("n", 1000);
    spec.burn_in = j.value("burn_in", 500);
    for (const auto& s : j.at("estimators")) spec.estimators.push_back(score_from_json(s));
    spec.R = j.value("R", 200);
    spec.B = j.value("B", 0);
    if (j.contains("schemes")) {
        for (const auto& s : j.at("schemes")) {
            spec.schemes.push_back(parse_scheme(s.get<std::string>()));
        }
    }
    if (j.contains("fit_order") && !j.at("fit_order").is_null()) {
        spec.fit_order = order_from_json(j.at("fit_order"));
    }
    spec.seed = j.value("seed", std::uint64_t{1});
    spec.threads = j.value("threads", 0);
    spec.validate();
    return spec;
}

Json experiment_spec_json(const ExperimentSpec& spec) {
    Json out;
    out["order"] = order_json(spec.theta0.order);
    out["theta0"] = theta_json(spec.theta0);
    out["dist"] = dist_json(spec.dist);
    out["n"] = spec.n;
    out["burn_in"] = spec.burn_in;
    Json est = Json::array();
    for (const auto& s : spec.estimators) est.push_back(score_json(s));
    out["estimators"] = est;
    out["R"] = spec.R;
    out["B"] = spec.B;
    Json schemes = Json::array();
    for (const auto& s : spec.schemes) schemes.push_back(scheme_name(s));
    out["schemes"] = schemes;
    out["fit_order"] =
        spec.fit_order.has_value() ? order_json(*spec.fit_order) : Json(nullptr);
    out["seed"] = spec.seed;
    out["threads"] = spec.threads;
    return out;
}

Json bias_mse_report_json(const ExperimentSpec& spec, const BiasMseReport& report) {
    Json out;
    out["schema"] = "garchm.bias-mse.v1";
    out["spec"] = experiment_spec_json(spec);
    out["fit_order"] = order_json(report.table.fit_order);
    out["theta0_embedded"] = theta_json(report.theta0);
    Json estimators = Json::array();
    for (std::size_t e = 0; e < report.table.estimators.size(); ++e) {
        const auto& est = report.table.estimators[e];
        Json je;
        je["score"] = score_json(est.score);
        je["ch"] = est.ch;
        je["n_converged"] = est.n_converged;
        je["standardized"] = bias_mse_json(report.standardized[e]);
        je["normalized"] = bias_mse_json(report.normalized[e]);
        je["estimates"] = matrix_json(est.estimates);
        je["converged"] = flags_json(est.converged);
        estimators.push_back(std::move(je));
    }
    out["estimators"] = estimators;
    return out;
}

Json coverage_report_json(const ExperimentSpec& spec, double level,
                          const CoverageReport& report) {
    Json out;
    out["schema"] = "garchm.coverage.v1";
    out["spec"] = experiment_spec_json(spec);
    out["level"] = level;
    Json estimators = Json::array();
    for (std::size_t e = 0; e < report.estimators.size(); ++e) {
        const auto& er = report.estimators[e];
        const auto& est = report.table.estimators[e];
        Json je;
        je["score"] = score_json(er.score);
        je["ch"] = er.ch;
        je["n_converged"] = er.n_converged;
        Json cells = Json::array();
        for (const auto& cell : er.cells) {
            cells.push_back(Json{{"method", cell.method},
                                 {"eligible", cell.eligible},
                                 {"coverage_pct", vector_json(cell.coverage_pct)}});
        }
        je["cells"] = cells;
        je["estimates"] = matrix_json(est.estimates);
        je["converged"] = flags_json(est.converged);
        estimators.push_back(std::move(je));
    }
    out["estimators"] = estimators;
    return out;
}

Json misspec_report_json(const ExperimentSpec& spec, const MisspecReport& report) {
    Json out;
    out["schema"] = "garchm.misspec.v1";
    out["spec"] = experiment_spec_json(spec);
    out["fit_order"] = order_json(report.table.fit_order);
    out["theta0_embedded"] = theta_json(report.theta0_embedded);
    Json estimators = Json::array();
    for (std::size_t e = 0; e < report.table.estimators.size(); ++e) {
        const auto& est = report.table.estimators[e];
        Json je;
        je["score"] = score_json(est.score);
        je["ch"] = est.ch;
        je["n_converged"] = est.n_converged;
        je["standardized"] = bias_mse_json(report.standardized[e]);
        je["estimates"] = matrix_json(est.estimates);
        je["converged"] = flags_json(est.converged);
        estimators.push_back(std::move(je));
    }
    out["estimators"] = estimators;
    return out;
}

Json ch_table_json(const ChTable& table) {
    Json out;
    out["schema"] = "garchm.ch-table.v1";
    out["samples"] = table.samples;
    out["seed"] = table.seed;
    out["method"] = table.samples == 0 ? "quadrature" : "monte-carlo";
    Json scores = Json::array();
    for (const auto& s : table.scores) scores.push_back(score_json(s));
    out["scores"] = scores;
    Json rows = Json::array();
    for (std::size_t i = 0; i < table.dists.size(); ++i) {
        Json row;
        row["dist"] = dist_json(table.dists[i]);
        Json values = Json::array();
        for (std::size_t j = 0; j < table.scores.size(); ++j) {
            values.push_back(table.values(static_cast<Eigen::Index>(i),
                                          static_cast<Eigen::Index>(j)));
        }
        row["values"] = values;
        rows.push_back(std::move(row));
    }
    out["rows"] = rows;
    return out;
}

}  // namespace garchm
