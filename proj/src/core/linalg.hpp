#pragma once

#include <Eigen/Dense>

#include "core/errors.hpp"

namespace garchm {

// Condition-number guard shared by the IRLS Gram solves and the covariance
// inversion: numerical singularity becomes a typed error.
constexpr double kConditionLimit = 1e12;

// Gram/information matrices here mix coordinates of wildly different units
// (omega is in variance units, beta is dimensionless), so the raw condition
// number is dominated by scaling. The guard and the solve therefore apply to
// the diagonally equilibrated matrix D G D with D = diag(1/sqrt(G_jj)), which
// has unit diagonal; true collinearity still trips the limit.
struct SpdFactor {
    Eigen::VectorXd d;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;

    explicit SpdFactor(const Eigen::MatrixXd& g, const char* what) {
        const Eigen::Index k = g.rows();
        d.resize(k);
        for (Eigen::Index j = 0; j < k; ++j) {
            d[j] = g(j, j) > 0.0 ? 1.0 / std::sqrt(g(j, j)) : 1.0;
        }
        es.compute(d.asDiagonal() * g * d.asDiagonal());
        const auto& ev = es.eigenvalues();
        const double lmin = ev.minCoeff();
        const double lmax = ev.maxCoeff();
        if (!(lmax > 0.0) || !(lmin > lmax / kConditionLimit)) {
            throw SingularMatrixError(std::string(what) +
                                      ": matrix is singular at condition limit 1e12");
        }
    }

    Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
        const Eigen::VectorXd scaled =
            es.eigenvectors() *
            (es.eigenvalues().array().inverse().matrix().asDiagonal() *
             (es.eigenvectors().transpose() * (d.asDiagonal() * b)));
        return d.asDiagonal() * scaled;
    }

    Eigen::MatrixXd inverse() const {
        const Eigen::MatrixXd inner = es.eigenvectors() *
                                      es.eigenvalues().array().inverse().matrix().asDiagonal() *
                                      es.eigenvectors().transpose();
        return d.asDiagonal() * inner * d.asDiagonal();
    }
};

}  // namespace garchm
