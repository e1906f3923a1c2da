#include "gccf/error.hpp"
#include "gccf/optimize.hpp"

#include <algorithm>
#include <cmath>

namespace gccf {

namespace {

struct GramSchmidt {
    Eigen::MatrixXd mu;       // mu(i, j) for j < i
    Eigen::VectorXd norms;    // squared norms of the orthogonalized vectors
};

GramSchmidt gram_schmidt(const Eigen::MatrixXd& b) {
    const auto n = b.cols();
    GramSchmidt gs{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n)};
    Eigen::MatrixXd star = b;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < i; ++j) {
            gs.mu(i, j) = gs.norms(j) > 0.0 ? b.col(i).dot(star.col(j)) / gs.norms(j) : 0.0;
            star.col(i) -= gs.mu(i, j) * star.col(j);
        }
        gs.norms(i) = star.col(i).squaredNorm();
    }
    return gs;
}

// The i-th orthogonalized vector must keep a non-negligible share of b_i.
void check_independent(const GramSchmidt& gs, const Eigen::MatrixXd& b) {
    for (Eigen::Index i = 0; i < gs.norms.size(); ++i) {
        if (!(gs.norms(i) > 1e-20 * b.col(i).squaredNorm())) {
            throw Error(ErrorCode::DependentBasis, "basis vectors are linearly dependent");
        }
    }
}

} // namespace

LllResult lll_reduce(const Eigen::MatrixXd& basis, double delta) {
    if (!(delta > 0.25 && delta <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "LLL delta must lie in (0.25, 1]");
    }
    const auto n = basis.cols();
    LllResult r{basis, IntMatrixE::Identity(n, n)};
    if (n == 0) return r;
    auto gs = gram_schmidt(r.basis);
    check_independent(gs, basis);

    Eigen::Index k = 1;
    std::size_t guard = 0;
    while (k < n && ++guard < 100000) {
        for (Eigen::Index j = k - 1; j >= 0; --j) {
            const double q = std::round(gs.mu(k, j));
            if (q == 0.0) continue;
            r.basis.col(k) -= q * r.basis.col(j);
            r.U.col(k) -= static_cast<long long>(q) * r.U.col(j);
            for (Eigen::Index i = 0; i < j; ++i) gs.mu(k, i) -= q * gs.mu(j, i);
            gs.mu(k, j) -= q;
        }
        const double m = gs.mu(k, k - 1);
        if (gs.norms(k) >= (delta - m * m) * gs.norms(k - 1)) {
            ++k;
        } else {
            r.basis.col(k).swap(r.basis.col(k - 1));
            r.U.col(k).swap(r.U.col(k - 1));
            gs = gram_schmidt(r.basis);
            k = std::max<Eigen::Index>(k - 1, 1);
        }
    }
    return r;
}

bool is_lll_reduced(const Eigen::MatrixXd& basis, double delta, double tol) {
    const auto gs = gram_schmidt(basis);
    for (Eigen::Index i = 0; i < basis.cols(); ++i) {
        for (Eigen::Index j = 0; j < i; ++j) {
            if (std::abs(gs.mu(i, j)) > 0.5 + tol) return false;
        }
        if (i > 0) {
            const double m = gs.mu(i, i - 1);
            if (gs.norms(i) < (delta - m * m) * gs.norms(i - 1) - tol * gs.norms(i - 1)) return false;
        }
    }
    return true;
}

} // namespace gccf
