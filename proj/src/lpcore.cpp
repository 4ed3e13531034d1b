#include "homcover/lpcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace homcover::lp {

namespace {

constexpr double kPivotTolerance = 1e-9;
constexpr double kReducedCostTolerance = 1e-10;

enum class RowKind { LessEqual, GreaterEqual, Equal };

struct StandardRow {
    std::vector<double> coeffs;  // over the nonnegative z columns
    RowKind kind;
    double rhs;
};

// x_j = shift + sign * z[col] - z[neg_col]  (neg_col < 0 when absent)
struct VariableMap {
    double shift = 0.0;
    double sign = 1.0;
    int col = -1;
    int neg_col = -1;
};

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
    double& rhs(std::size_t r) { return at(r, cols_); }
    double rhs(std::size_t r) const { return at(r, cols_); }
    double& cost(std::size_t c) { return at(rows_, c); }
    double cost(std::size_t c) const { return at(rows_, c); }
    double& value() { return at(rows_, cols_); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    void pivot(std::size_t pr, std::size_t pc) {
        const double inv = 1.0 / at(pr, pc);
        for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) *= inv;
        at(pr, pc) = 1.0;
        for (std::size_t r = 0; r <= rows_; ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0.0) continue;
            for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
            at(r, pc) = 0.0;
        }
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

class SimplexRun {
public:
    SimplexRun(Tableau& t, std::vector<int>& basis, std::vector<bool>& row_active,
               std::vector<bool>& col_enabled, std::size_t limit)
        : t_(t), basis_(basis), row_active_(row_active), col_enabled_(col_enabled), limit_(limit) {}

    // Returns false when the objective is unbounded along an improving column.
    bool run() {
        for (;;) {
            if (++iterations_ > limit_) {
                throw NumericFailure("lp::solve: iteration limit exceeded (" +
                                     std::to_string(limit_) + ")");
            }
            // Bland: lowest-index improving column.
            int enter = -1;
            for (std::size_t c = 0; c < t_.cols(); ++c) {
                if (col_enabled_[c] && t_.cost(c) < -kReducedCostTolerance) {
                    enter = static_cast<int>(c);
                    break;
                }
            }
            if (enter < 0) return true;

            int leave = -1;
            double best = 0.0;
            for (std::size_t r = 0; r < t_.rows(); ++r) {
                if (!row_active_[r]) continue;
                const double a = t_.at(r, enter);
                if (a <= kPivotTolerance) continue;
                const double ratio = std::max(0.0, t_.rhs(r)) / a;
                if (leave < 0 || ratio < best - 1e-15 ||
                    (std::abs(ratio - best) <= 1e-15 && basis_[r] < basis_[leave])) {
                    leave = static_cast<int>(r);
                    best = ratio;
                }
            }
            if (leave < 0) return false;
            t_.pivot(static_cast<std::size_t>(leave), static_cast<std::size_t>(enter));
            basis_[leave] = enter;
        }
    }

private:
    Tableau& t_;
    std::vector<int>& basis_;
    std::vector<bool>& row_active_;
    std::vector<bool>& col_enabled_;
    std::size_t limit_;
    std::size_t iterations_ = 0;
};

void validate(const LinearProgram& lp) {
    const std::size_t n = lp.dim();
    if (n == 0) throw InputError("lp::solve: dimension must be >= 1");
    for (double c : lp.objective) {
        if (!std::isfinite(c)) throw InputError("lp::solve: non-finite objective coefficient");
    }
    for (const auto& con : lp.constraints) {
        if (con.coeffs.size() != n) {
            throw InputError("lp::solve: constraint has " + std::to_string(con.coeffs.size()) +
                             " coefficients, problem dimension is " + std::to_string(n));
        }
        for (double a : con.coeffs) {
            if (!std::isfinite(a)) throw InputError("lp::solve: non-finite constraint coefficient");
        }
        if (!std::isfinite(con.bound)) throw InputError("lp::solve: non-finite constraint bound");
    }
    if (!lp.bounds.empty() && lp.bounds.size() != n) {
        throw InputError("lp::solve: bounds size does not match dimension");
    }
    for (const auto& b : lp.bounds) {
        if (std::isnan(b.lo) || std::isnan(b.hi) || b.lo > b.hi) {
            throw InputError("lp::solve: invalid variable bound interval");
        }
    }
}

double residual_scale(const std::vector<double>& a, const std::vector<double>& x, double b) {
    double s = std::max(1.0, std::abs(b));
    for (std::size_t j = 0; j < a.size(); ++j) s = std::max(s, std::abs(a[j] * x[j]));
    return s;
}

}  // namespace

LpOutcome solve(const LinearProgram& lp) {
    validate(lp);
    const std::size_t n = lp.dim();

    // Map original variables onto nonnegative columns.
    std::vector<VariableMap> vars(n);
    std::vector<StandardRow> rows;
    int ncols = 0;
    std::vector<std::pair<int, double>> upper_rows;  // (col, width) for bounded intervals
    for (std::size_t j = 0; j < n; ++j) {
        const VariableBound b = lp.bounds.empty() ? VariableBound{} : lp.bounds[j];
        VariableMap& m = vars[j];
        if (std::isfinite(b.lo)) {
            m.shift = b.lo;
            m.col = ncols++;
            if (std::isfinite(b.hi)) upper_rows.emplace_back(m.col, b.hi - b.lo);
        } else if (std::isfinite(b.hi)) {
            m.shift = b.hi;
            m.sign = -1.0;
            m.col = ncols++;
        } else {
            m.col = ncols++;
            m.neg_col = ncols++;
        }
    }

    auto to_standard = [&](const std::vector<double>& a, Relation rel, double bound) {
        StandardRow row{std::vector<double>(static_cast<std::size_t>(ncols), 0.0),
                        rel == Relation::Equal ? RowKind::Equal : RowKind::LessEqual, bound};
        for (std::size_t j = 0; j < n; ++j) {
            const VariableMap& m = vars[j];
            row.rhs -= a[j] * m.shift;
            row.coeffs[static_cast<std::size_t>(m.col)] += a[j] * m.sign;
            if (m.neg_col >= 0) row.coeffs[static_cast<std::size_t>(m.neg_col)] -= a[j];
        }
        if (row.rhs < 0.0) {
            for (double& c : row.coeffs) c = -c;
            row.rhs = -row.rhs;
            if (row.kind == RowKind::LessEqual) row.kind = RowKind::GreaterEqual;
        }
        return row;
    };

    for (const auto& con : lp.constraints) rows.push_back(to_standard(con.coeffs, con.relation, con.bound));
    for (auto [col, width] : upper_rows) {
        StandardRow row{std::vector<double>(static_cast<std::size_t>(ncols), 0.0), RowKind::LessEqual,
                        width};
        row.coeffs[static_cast<std::size_t>(col)] = 1.0;
        rows.push_back(std::move(row));
    }

    const std::size_t m = rows.size();
    std::size_t n_slack = 0;
    std::size_t n_art = 0;
    for (const auto& r : rows) {
        if (r.kind != RowKind::Equal) ++n_slack;
        if (r.kind != RowKind::LessEqual) ++n_art;
    }
    const std::size_t zc = static_cast<std::size_t>(ncols);
    const std::size_t total_cols = zc + n_slack + n_art;
    const std::size_t art_begin = zc + n_slack;

    Tableau t(m, total_cols);
    std::vector<int> basis(m, -1);
    std::vector<bool> row_active(m, true);
    std::vector<bool> col_enabled(total_cols, true);

    std::size_t next_slack = zc;
    std::size_t next_art = art_begin;
    for (std::size_t i = 0; i < m; ++i) {
        const StandardRow& r = rows[i];
        for (std::size_t c = 0; c < zc; ++c) t.at(i, c) = r.coeffs[c];
        t.rhs(i) = r.rhs;
        switch (r.kind) {
            case RowKind::LessEqual:
                t.at(i, next_slack) = 1.0;
                basis[i] = static_cast<int>(next_slack++);
                break;
            case RowKind::GreaterEqual:
                t.at(i, next_slack++) = -1.0;
                t.at(i, next_art) = 1.0;
                basis[i] = static_cast<int>(next_art++);
                break;
            case RowKind::Equal:
                t.at(i, next_art) = 1.0;
                basis[i] = static_cast<int>(next_art++);
                break;
        }
    }

    const std::size_t limit = 20000 + 200 * (m + total_cols);
    double rhs_scale = 1.0;
    for (std::size_t i = 0; i < m; ++i) rhs_scale = std::max(rhs_scale, std::abs(t.rhs(i)));

    // Phase 1: maximize -sum(artificials).
    if (n_art > 0) {
        for (std::size_t c = art_begin; c < total_cols; ++c) t.cost(c) = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (static_cast<std::size_t>(basis[i]) >= art_begin) {
                for (std::size_t c = 0; c <= total_cols; ++c) t.at(m, c) -= t.at(i, c);
            }
        }
        SimplexRun(t, basis, row_active, col_enabled, limit).run();
        if (t.value() < -kFeasibilityTolerance * rhs_scale) {
            return LpOutcome{Status::Infeasible, std::nullopt, std::nullopt};
        }
        // Drive remaining (zero-level) artificials out of the basis.
        for (std::size_t i = 0; i < m; ++i) {
            if (static_cast<std::size_t>(basis[i]) < art_begin) continue;
            int pc = -1;
            double best = kPivotTolerance;
            for (std::size_t c = 0; c < art_begin; ++c) {
                if (std::abs(t.at(i, c)) > best) {
                    best = std::abs(t.at(i, c));
                    pc = static_cast<int>(c);
                }
            }
            if (pc >= 0) {
                t.pivot(i, static_cast<std::size_t>(pc));
                basis[i] = pc;
            } else {
                row_active[i] = false;  // redundant equality
            }
        }
        for (std::size_t c = art_begin; c < total_cols; ++c) col_enabled[c] = false;
    }

    // Phase 2.
    std::vector<double> cz(total_cols, 0.0);
    const double sense = lp.sense == Sense::Maximize ? 1.0 : -1.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double c = sense * lp.objective[j];
        const VariableMap& vm = vars[j];
        cz[static_cast<std::size_t>(vm.col)] += c * vm.sign;
        if (vm.neg_col >= 0) cz[static_cast<std::size_t>(vm.neg_col)] -= c;
    }
    for (std::size_t c = 0; c <= total_cols; ++c) t.at(m, c) = 0.0;
    for (std::size_t c = 0; c < total_cols; ++c) t.cost(c) = -cz[c];
    for (std::size_t i = 0; i < m; ++i) {
        if (!row_active[i]) continue;
        const double cb = cz[static_cast<std::size_t>(basis[i])];
        if (cb == 0.0) continue;
        for (std::size_t c = 0; c <= total_cols; ++c) t.at(m, c) += cb * t.at(i, c);
    }
    if (!SimplexRun(t, basis, row_active, col_enabled, limit).run()) {
        return LpOutcome{Status::Unbounded, std::nullopt, std::nullopt};
    }

    std::vector<double> z(total_cols, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (row_active[i]) z[static_cast<std::size_t>(basis[i])] = std::max(0.0, t.rhs(i));
    }
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; ++j) {
        const VariableMap& vm = vars[j];
        x[j] = vm.shift + vm.sign * z[static_cast<std::size_t>(vm.col)];
        if (vm.neg_col >= 0) x[j] -= z[static_cast<std::size_t>(vm.neg_col)];
    }

    // Never hand back a point that violates the model beyond tolerance.
    for (const auto& con : lp.constraints) {
        const double ax = dot(con.coeffs, x);
        const double viol = con.relation == Relation::Equal ? std::abs(ax - con.bound)
                                                            : std::max(0.0, ax - con.bound);
        if (viol > kFeasibilityTolerance * residual_scale(con.coeffs, x, con.bound)) {
            throw NumericFailure("lp::solve: primal residual " + std::to_string(viol) +
                                 " exceeds tolerance");
        }
    }
    for (std::size_t j = 0; j < lp.bounds.size(); ++j) {
        const auto& b = lp.bounds[j];
        const double tol = kFeasibilityTolerance * std::max(1.0, std::abs(x[j]));
        if (x[j] < b.lo - tol || x[j] > b.hi + tol) {
            throw NumericFailure("lp::solve: variable bound violated beyond tolerance");
        }
        x[j] = std::clamp(x[j], b.lo, b.hi);
    }

    const double obj = dot(lp.objective, x);
    return LpOutcome{Status::Optimal, std::move(x), obj};
}

bool feasible(const LinearProgram& lp) { return solve(lp).status != Status::Infeasible; }

ChebyshevBall chebyshev_center(const HalfspaceSet& h) {
    const std::size_t n = h.dim;
    if (n == 0) throw InputError("chebyshev_center: dimension must be >= 1");
    LinearProgram lp;
    lp.objective.assign(n + 1, 0.0);
    lp.objective[n] = 1.0;
    lp.bounds.assign(n + 1, VariableBound{});
    lp.bounds[n].lo = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        require_dim(h.normals[i], n, "chebyshev_center");
        std::vector<double> row(h.normals[i]);
        row.push_back(norm2(h.normals[i]));
        lp.add(std::move(row), Relation::LessEqual, h.offsets[i]);
    }
    const LpOutcome out = solve(lp);
    if (out.status == Status::Unbounded) throw InputError("chebyshev_center: polytope is unbounded");
    if (out.status == Status::Infeasible) throw InradiusZero("chebyshev_center: polytope is empty");
    const auto& s = *out.solution;
    const double r = s[n];
    if (r <= kOptimalityTolerance) throw InradiusZero("chebyshev_center: polytope has empty interior");
    return ChebyshevBall{Point(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(n)), r};
}

double ray_max(const HalfspaceSet& h, ConstVec origin, ConstVec direction) {
    require_dim(origin, h.dim, "ray_max origin");
    require_dim(direction, h.dim, "ray_max direction");
    if (norm2(direction) == 0.0) throw InputError("ray_max: zero direction");
    double t = kInfinity;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double slack = h.offsets[i] - dot(h.normals[i], origin);
        const double scale = std::max(1.0, std::abs(h.offsets[i]));
        if (slack < -kFeasibilityTolerance * scale) {
            throw InputError("ray_max: origin lies outside the body");
        }
        const double rate = dot(h.normals[i], direction);
        if (rate > 0.0) t = std::min(t, std::max(0.0, slack) / rate);
    }
    if (!std::isfinite(t)) throw InputError("ray_max: ray is unbounded");
    return t;
}

}  // namespace homcover::lp
