#pragma once

#include <Eigen/Dense>

#include "plof/dataset.hpp"

namespace plof {

struct Projection2PC {
    std::vector<double> coords;  // N x 2, row-major
    double explained_variance[2] = {0.0, 0.0};

    double x(std::size_t i) const { return coords[2 * i]; }
    double y(std::size_t i) const { return coords[2 * i + 1]; }
};

/// Centers the data and projects onto the top-2 eigenvectors of the sample
/// covariance. Sign convention: the first nonzero loading of each component
/// is positive, so output is deterministic.
inline Projection2PC project_2pc(const PointSet& data) {
    const std::size_t n = data.size();
    const std::size_t m = data.dims();
    if (m < 2)
        throw std::invalid_argument("project_2pc: need at least 2 feature dimensions");
    if (n < 3)
        throw std::invalid_argument("project_2pc: need at least 3 points");

    Eigen::MatrixXd x(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = data.row(i);
        for (std::size_t d = 0; d < m; ++d)
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = row[d];
    }
    x.rowwise() -= x.colwise().mean();

    const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("project_2pc: eigendecomposition failed");

    // Eigenvalues come back ascending; the top component is the last column.
    const Eigen::Index top = static_cast<Eigen::Index>(m) - 1;
    if (solver.eigenvalues()(top) <= 0.0)
        throw std::invalid_argument("project_2pc: rank-deficient input (all points identical)");

    Projection2PC proj;
    proj.coords.resize(n * 2);
    for (int comp = 0; comp < 2; ++comp) {
        Eigen::VectorXd v = solver.eigenvectors().col(top - comp);
        for (Eigen::Index d = 0; d < v.size(); ++d) {
            if (std::abs(v(d)) > 1e-12) {
                if (v(d) < 0.0)
                    v = -v;
                break;
            }
        }
        const Eigen::VectorXd projected = x * v;
        for (std::size_t i = 0; i < n; ++i)
            proj.coords[2 * i + static_cast<std::size_t>(comp)] =
                projected(static_cast<Eigen::Index>(i));
        proj.explained_variance[comp] = solver.eigenvalues()(top - comp);
    }
    return proj;
}

}  // namespace plof
