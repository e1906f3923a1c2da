#include "gccf/error.hpp"
#include "gccf/optimize.hpp"

#include <cmath>
#include <limits>

namespace gccf {

std::string_view to_string(LpStatus s) noexcept {
    switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    }
    return "unknown";
}

namespace {

constexpr double kEps = 1e-9;

// Dense tableau: rows 0..m-1 are constraints, row m holds reduced costs d_j = c_B B^-1 A_j - c_j.
class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols)
        : m_(rows), w_(cols + 1), t_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0) {}

    double& at(std::size_t i, std::size_t j) { return t_[i * w_ + j]; }
    double at(std::size_t i, std::size_t j) const { return t_[i * w_ + j]; }
    double& rhs(std::size_t i) { return t_[i * w_ + w_ - 1]; }
    std::size_t cols() const { return w_ - 1; }
    std::size_t rows() const { return m_; }
    std::vector<std::size_t>& basis() { return basis_; }

    void pivot(std::size_t r, std::size_t c) {
        double* pr = &t_[r * w_];
        const double inv = 1.0 / pr[c];
        for (std::size_t j = 0; j < w_; ++j) pr[j] *= inv;
        pr[c] = 1.0;
        for (std::size_t i = 0; i <= m_; ++i) {
            if (i == r) continue;
            double* pi = &t_[i * w_];
            const double f = pi[c];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < w_; ++j) pi[j] -= f * pr[j];
            pi[c] = 0.0;
        }
        basis_[r] = c;
    }

    // Sets the reduced-cost row for cost vector c.
    void price(const std::vector<double>& c) {
        for (std::size_t j = 0; j < w_; ++j) at(m_, j) = j < c.size() ? -c[j] : 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            const double cb = c[basis_[i]];
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j < w_; ++j) at(m_, j) += cb * at(i, j);
        }
    }

    // Bland's rule iterations over columns [0, allowed). Returns false when unbounded.
    bool optimize(std::size_t allowed) {
        for (std::size_t iter = 0; iter < 100000; ++iter) {
            std::size_t enter = allowed;
            for (std::size_t j = 0; j < allowed; ++j) {
                if (at(m_, j) < -kEps) {
                    enter = j;
                    break;
                }
            }
            if (enter == allowed) return true;
            std::size_t leave = m_;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = at(i, enter);
                if (a <= kEps) continue;
                const double ratio = rhs(i) / a;
                if (ratio < best - 1e-12 ||
                    (std::abs(ratio - best) <= 1e-12 && leave < m_ && basis_[i] < basis_[leave])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave == m_) return false;
            pivot(leave, enter);
        }
        return true;
    }

private:
    std::size_t m_;
    std::size_t w_;
    std::vector<double> t_;
    std::vector<std::size_t> basis_;
};

} // namespace

LpResult solve_lp(const LpProblem& lp) {
    const std::size_t n = lp.variables;
    const std::size_t m = lp.constraints.size();
    if (lp.objective.size() != n) throw Error(ErrorCode::DimensionMismatch, "objective length");

    std::vector<double> sign(m, 1.0);
    std::vector<Sense> sense(m);
    std::size_t slacks = 0, artificials = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& c = lp.constraints[i];
        if (c.coef.size() != n) throw Error(ErrorCode::DimensionMismatch, "constraint length");
        if (!std::isfinite(c.rhs)) throw Error(ErrorCode::InvalidArgument, "constraint bound must be finite");
        sense[i] = c.sense;
        if (c.rhs < 0.0) {
            sign[i] = -1.0;
            if (c.sense == Sense::LessEqual) sense[i] = Sense::GreaterEqual;
            else if (c.sense == Sense::GreaterEqual) sense[i] = Sense::LessEqual;
        }
        if (sense[i] != Sense::Equal) ++slacks;
        if (sense[i] != Sense::LessEqual) ++artificials;
    }

    const std::size_t art0 = n + slacks;
    const std::size_t total = art0 + artificials;
    Tableau T(m, total);
    std::vector<std::size_t> initial_col(m);
    double bmax = 0.0;
    for (std::size_t i = 0, s = n, a = art0; i < m; ++i) {
        const auto& c = lp.constraints[i];
        for (std::size_t j = 0; j < n; ++j) T.at(i, j) = sign[i] * c.coef[j];
        T.rhs(i) = sign[i] * c.rhs;
        bmax = std::max(bmax, T.rhs(i));
        if (sense[i] == Sense::LessEqual) {
            T.at(i, s) = 1.0;
            initial_col[i] = s++;
        } else {
            if (sense[i] == Sense::GreaterEqual) T.at(i, s++) = -1.0;
            T.at(i, a) = 1.0;
            initial_col[i] = a++;
        }
        T.basis()[i] = initial_col[i];
    }

    LpResult res;
    if (artificials > 0) {
        std::vector<double> c1(total, 0.0);
        for (std::size_t j = art0; j < total; ++j) c1[j] = -1.0;
        T.price(c1);
        T.optimize(total);
        if (T.at(m, total) < -kEps * (1.0 + bmax)) {
            res.status = LpStatus::Infeasible;
            return res;
        }
        // Drive remaining zero-level artificials out of the basis where possible.
        for (std::size_t i = 0; i < m; ++i) {
            if (T.basis()[i] < art0) continue;
            for (std::size_t j = 0; j < art0; ++j) {
                if (std::abs(T.at(i, j)) > kEps) {
                    T.pivot(i, j);
                    break;
                }
            }
        }
    }

    std::vector<double> c2(total, 0.0);
    for (std::size_t j = 0; j < n; ++j) c2[j] = lp.objective[j];
    T.price(c2);
    if (!T.optimize(art0)) {
        res.status = LpStatus::Unbounded;
        return res;
    }

    res.status = LpStatus::Optimal;
    res.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (T.basis()[i] < n) res.x[T.basis()[i]] = std::max(0.0, T.rhs(i));
    }
    res.value = 0.0;
    for (std::size_t j = 0; j < n; ++j) res.value += lp.objective[j] * res.x[j];
    res.duals.resize(m);
    for (std::size_t i = 0; i < m; ++i) res.duals[i] = sign[i] * T.at(m, initial_col[i]);
    return res;
}

} // namespace gccf
