#include "tvar/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tvar/errors.hpp"

namespace tvar::lp {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kFeasTol = 1e-9;
constexpr double kTieTol = 1e-9;
constexpr double kCoefTol = 1e-7;

void validate(const Problem& p) {
    const std::size_t m = p.vars();
    if (m == 0) {
        throw std::invalid_argument("lp: empty objective");
    }
    if (p.rows.size() != p.rhs.size()) {
        throw std::invalid_argument("lp: rows/rhs size mismatch");
    }
    if (p.rows.size() < m) {
        throw std::invalid_argument("lp: need at least d+1 constraint rows");
    }
    for (double v : p.objective) {
        if (!std::isfinite(v)) throw std::invalid_argument("lp: non-finite objective");
    }
    for (std::size_t k = 0; k < p.rows.size(); ++k) {
        if (p.rows[k].size() != m) {
            throw std::invalid_argument("lp: row width mismatch");
        }
        for (double v : p.rows[k]) {
            if (!std::isfinite(v)) throw std::invalid_argument("lp: non-finite row entry");
        }
        if (!std::isfinite(p.rhs[k])) throw std::invalid_argument("lp: non-finite rhs");
    }
}

// Solves M b = r (square) by Gaussian elimination with partial pivoting.
// Returns false when the matrix is numerically singular. Shared by the
// simplex recovery step and the enumeration oracle so both produce identical
// floating-point results for the same subsystem.
bool solve_square(std::vector<std::vector<double>> m, std::vector<double> r,
                  std::vector<double>& out) {
    const std::size_t n = r.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t row = col + 1; row < n; ++row) {
            if (std::abs(m[row][col]) > std::abs(m[piv][col])) piv = row;
        }
        if (std::abs(m[piv][col]) < kPivotTol) {
            return false;
        }
        std::swap(m[piv], m[col]);
        std::swap(r[piv], r[col]);
        for (std::size_t row = col + 1; row < n; ++row) {
            const double factor = m[row][col] / m[col][col];
            if (factor == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) m[row][j] -= factor * m[col][j];
            r[row] -= factor * r[col];
        }
    }
    out.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = r[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= m[i][j] * out[j];
        out[i] = s / m[i][i];
    }
    return true;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::vector<std::size_t> binding_rows(const Problem& p, const std::vector<double>& b,
                                      const std::vector<std::size_t>& basis = {}) {
    std::vector<std::size_t> act;
    for (std::size_t k = 0; k < p.rows.size(); ++k) {
        if (p.rhs[k] - dot(p.rows[k], b) <= kFeasTol) act.push_back(k);
    }
    // Basis rows are tight by construction; keep them in even when round-off
    // in the recovery solve pushes a computed slack past the tolerance.
    for (std::size_t k : basis) {
        if (std::find(act.begin(), act.end(), k) == act.end()) act.push_back(k);
    }
    std::sort(act.begin(), act.end());
    return act;
}

// Rank of a small set of rows, with pivot tolerance.
std::size_t row_rank(std::vector<std::vector<double>> rows) {
    const std::size_t m = rows.empty() ? 0 : rows[0].size();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m && rank < rows.size(); ++col) {
        std::size_t piv = rank;
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            if (std::abs(rows[r][col]) > std::abs(rows[piv][col])) piv = r;
        }
        if (std::abs(rows[piv][col]) < kPivotTol) continue;
        std::swap(rows[piv], rows[rank]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            const double factor = rows[r][col] / rows[rank][col];
            for (std::size_t j = col; j < m; ++j) rows[r][j] -= factor * rows[rank][j];
        }
        ++rank;
    }
    return rank;
}

// Free-variable basis of the null space of the given rows (small sizes).
std::vector<std::vector<double>> null_space(std::vector<std::vector<double>> rows,
                                            std::size_t m) {
    std::vector<std::size_t> pivot_cols;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m && rank < rows.size(); ++col) {
        std::size_t piv = rank;
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            if (std::abs(rows[r][col]) > std::abs(rows[piv][col])) piv = r;
        }
        if (rows.empty() || std::abs(rows[piv][col]) < kPivotTol) continue;
        std::swap(rows[piv], rows[rank]);
        const double inv = 1.0 / rows[rank][col];
        for (std::size_t j = 0; j < m; ++j) rows[rank][j] *= inv;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank) continue;
            const double factor = rows[r][col];
            if (factor == 0.0) continue;
            for (std::size_t j = 0; j < m; ++j) rows[r][j] -= factor * rows[rank][j];
        }
        pivot_cols.push_back(col);
        ++rank;
    }
    std::vector<std::vector<double>> basis;
    for (std::size_t col = 0; col < m; ++col) {
        if (std::find(pivot_cols.begin(), pivot_cols.end(), col) != pivot_cols.end()) continue;
        std::vector<double> w(m, 0.0);
        w[col] = 1.0;
        for (std::size_t r = 0; r < rank; ++r) {
            w[pivot_cols[r]] = -rows[r][col];
        }
        basis.push_back(std::move(w));
    }
    return basis;
}

// ----------------------------------------------------------------------------
// Two-phase tableau simplex on the dual
//
//   minimize rhs . lambda   s.t.   A^T lambda = objective,  lambda >= 0,
//
// whose reduced costs at optimality are exactly the primal slacks. Bland's
// rule everywhere: smallest eligible column enters, smallest basic index
// leaves among minimum-ratio ties.
// ----------------------------------------------------------------------------

enum class DualStatus { Optimal, DualInfeasible, DualUnbounded };

struct DualResult {
    DualStatus status = DualStatus::DualInfeasible;
    std::vector<std::size_t> basis_rows;  // primal constraint indices, by tableau row
    std::vector<double> lambda;           // basic dual values, by tableau row
    double objective = 0.0;               // dual objective = primal optimum
};

class DualSimplex {
public:
    explicit DualSimplex(const Problem& p)
        : n_(p.constraints()), m_(p.vars()), costs_(p.rhs) {
        // Tableau columns: n real (lambda_k) + m artificial; rows: m equalities.
        tab_.assign(m_, std::vector<double>(n_ + m_ + 1, 0.0));
        for (std::size_t i = 0; i < m_; ++i) {
            const double sign = (p.objective[i] < 0.0) ? -1.0 : 1.0;
            for (std::size_t k = 0; k < n_; ++k) {
                tab_[i][k] = sign * p.rows[k][i];
            }
            tab_[i][n_ + i] = 1.0;
            tab_[i][n_ + m_] = sign * p.objective[i];
            rhs_scale_ += std::abs(p.objective[i]);
        }
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) basis_[i] = n_ + i;
        live_rows_ = m_;
    }

    DualResult run() {
        // Phase 1: minimize the sum of artificials.
        std::vector<double> phase1_cost(n_ + m_, 0.0);
        for (std::size_t j = n_; j < n_ + m_; ++j) phase1_cost[j] = 1.0;
        if (!iterate(phase1_cost, /*allow_artificial=*/true)) {
            throw std::runtime_error("lp: phase-1 iteration limit exceeded");
        }
        if (objective_value(phase1_cost) > 1e-9 * (1.0 + rhs_scale_)) {
            return DualResult{DualStatus::DualInfeasible, {}, {}, 0.0};
        }
        drop_artificials();

        // Phase 2: minimize the true dual cost.
        std::vector<double> phase2_cost(n_ + m_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) phase2_cost[j] = costs_[j];
        if (!iterate(phase2_cost, /*allow_artificial=*/false)) {
            return DualResult{DualStatus::DualUnbounded, {}, {}, 0.0};
        }

        DualResult res;
        res.status = DualStatus::Optimal;
        res.objective = objective_value(phase2_cost);
        for (std::size_t r = 0; r < live_rows_; ++r) {
            if (basis_[r] < n_) {
                res.basis_rows.push_back(basis_[r]);
                res.lambda.push_back(tab_[r][n_ + m_]);
            }
        }
        return res;
    }

private:
    double objective_value(const std::vector<double>& cost) const {
        double v = 0.0;
        for (std::size_t r = 0; r < live_rows_; ++r) {
            v += cost[basis_[r]] * tab_[r][n_ + m_];
        }
        return v;
    }

    // Reduced cost of column j under the given cost vector.
    double reduced_cost(const std::vector<double>& cost, std::size_t j) const {
        double z = 0.0;
        for (std::size_t r = 0; r < live_rows_; ++r) {
            z += cost[basis_[r]] * tab_[r][j];
        }
        return cost[j] - z;
    }

    bool is_basic(std::size_t j) const {
        for (std::size_t r = 0; r < live_rows_; ++r) {
            if (basis_[r] == j) return true;
        }
        return false;
    }

    void pivot(std::size_t row, std::size_t col) {
        const double inv = 1.0 / tab_[row][col];
        for (double& v : tab_[row]) v *= inv;
        tab_[row][col] = 1.0;  // cut round-off drift on the pivot itself
        for (std::size_t r = 0; r < live_rows_; ++r) {
            if (r == row) continue;
            const double factor = tab_[r][col];
            if (factor == 0.0) continue;
            for (std::size_t j = 0; j <= n_ + m_; ++j) {
                tab_[r][j] -= factor * tab_[row][j];
            }
            tab_[r][col] = 0.0;
        }
        basis_[row] = col;
    }

    // Returns false on unboundedness; true at optimality.
    bool iterate(const std::vector<double>& cost, bool allow_artificial) {
        const std::size_t col_limit = allow_artificial ? n_ + m_ : n_;
        for (long iter = 0; iter < 200000; ++iter) {
            std::size_t enter = col_limit;
            for (std::size_t j = 0; j < col_limit; ++j) {
                if (is_basic(j)) continue;
                if (reduced_cost(cost, j) < -kPivotTol) {
                    enter = j;
                    break;  // Bland: smallest improving index
                }
            }
            if (enter == col_limit) {
                return true;
            }
            std::size_t leave = live_rows_;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < live_rows_; ++r) {
                if (tab_[r][enter] > kPivotTol) {
                    const double ratio = tab_[r][n_ + m_] / tab_[r][enter];
                    if (ratio < best_ratio - kPivotTol ||
                        (ratio <= best_ratio + kPivotTol &&
                         (leave == live_rows_ || basis_[r] < basis_[leave]))) {
                        best_ratio = std::min(ratio, best_ratio);
                        leave = r;
                    }
                }
            }
            if (leave == live_rows_) {
                return false;  // cost unbounded below
            }
            pivot(leave, enter);
        }
        throw std::runtime_error("lp: simplex iteration limit exceeded");
    }

    // After phase 1: pivot zero-level artificials onto real columns, or drop
    // the row entirely when it is redundant.
    void drop_artificials() {
        for (std::size_t r = 0; r < live_rows_;) {
            if (basis_[r] < n_) {
                ++r;
                continue;
            }
            std::size_t col = n_;
            for (std::size_t j = 0; j < n_; ++j) {
                if (!is_basic(j) && std::abs(tab_[r][j]) > kPivotTol) {
                    col = j;
                    break;
                }
            }
            if (col < n_) {
                pivot(r, col);
                ++r;
            } else {
                tab_.erase(tab_.begin() + static_cast<std::ptrdiff_t>(r));
                basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
                --live_rows_;
            }
        }
    }

    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::vector<double> costs_;
    std::vector<std::vector<double>> tab_;
    std::vector<std::size_t> basis_;
    std::size_t live_rows_ = 0;
    double rhs_scale_ = 0.0;
};

struct PlainSolve {
    DualStatus dual_status;
    double objective = 0.0;
    std::vector<double> point;            // defined when dual_status == Optimal
    std::vector<std::size_t> basis_rows;  // ascending
    std::vector<double> lambda;           // aligned with basis_rows
    bool point_valid = false;
};

PlainSolve solve_plain(const Problem& p) {
    DualSimplex simplex(p);
    DualResult dual = simplex.run();
    PlainSolve out;
    out.dual_status = dual.status;
    if (dual.status != DualStatus::Optimal) {
        return out;
    }
    out.objective = dual.objective;

    // Sort the basis ascending; keep lambda aligned.
    std::vector<std::size_t> order(dual.basis_rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return dual.basis_rows[a] < dual.basis_rows[b];
    });
    for (std::size_t i : order) {
        out.basis_rows.push_back(dual.basis_rows[i]);
        out.lambda.push_back(dual.lambda[i]);
    }

    if (out.basis_rows.size() == p.vars()) {
        std::vector<std::vector<double>> rows;
        std::vector<double> rhs;
        for (std::size_t k : out.basis_rows) {
            rows.push_back(p.rows[k]);
            rhs.push_back(p.rhs[k]);
        }
        out.point_valid = solve_square(std::move(rows), std::move(rhs), out.point);
    }
    return out;
}

// Is the primal feasible at all? Decides between Infeasible and Unbounded
// when the dual is infeasible: minimizes the uniform constraint violation.
bool primal_feasible(const Problem& p) {
    Problem relaxed;
    const std::size_t m = p.vars();
    relaxed.objective.assign(m + 1, 0.0);
    relaxed.objective[m] = -1.0;  // maximize -t, i.e. minimize violation t
    relaxed.rows.reserve(p.rows.size());
    for (std::size_t k = 0; k < p.rows.size(); ++k) {
        std::vector<double> row = p.rows[k];
        row.push_back(-1.0);
        relaxed.rows.push_back(std::move(row));
    }
    relaxed.rhs = p.rhs;
    // t bounded below keeps the relaxation's optimum finite when the original
    // problem is feasible with slack to spare.
    std::vector<double> bound(m + 1, 0.0);
    bound[m] = -1.0;
    relaxed.rows.push_back(std::move(bound));
    relaxed.rhs.push_back(0.0);

    PlainSolve sol = solve_plain(relaxed);
    if (sol.dual_status == DualStatus::DualInfeasible) {
        // The relaxation is always primal-feasible, so this cannot occur for
        // well-formed input; treat conservatively as infeasible.
        return false;
    }
    if (sol.dual_status == DualStatus::DualUnbounded) {
        return false;
    }
    return -sol.objective <= kFeasTol;  // min violation t* <= tol
}

// Greedy lexicographic search for the smallest optimal basis: grow the index
// set one constraint at a time, keeping only sets that stay active on the
// optimal face and linearly independent. Every probe is itself a small LP.
struct FaceProbe {
    const Problem& p;
    double optimum;
    std::vector<std::size_t> pinned;

    Problem build(const std::vector<double>& objective) const {
        Problem q;
        q.objective = objective;
        q.rows = p.rows;
        q.rhs = p.rhs;
        std::vector<double> opt_row(p.vars());
        for (std::size_t i = 0; i < p.vars(); ++i) opt_row[i] = -p.objective[i];
        q.rows.push_back(std::move(opt_row));
        q.rhs.push_back(-optimum + kTieTol);  // stay on the optimal face
        for (std::size_t k : pinned) {
            std::vector<double> row(p.vars());
            for (std::size_t i = 0; i < p.vars(); ++i) row[i] = -p.rows[k][i];
            q.rows.push_back(std::move(row));
            q.rhs.push_back(-p.rhs[k] + kTieTol);
        }
        return q;
    }

    // Largest achievable value of `direction . b` on the pinned face.
    double face_max(const std::vector<double>& direction) const {
        PlainSolve sol = solve_plain(build(direction));
        if (sol.dual_status != DualStatus::Optimal) {
            // Unbounded probes cannot occur for directions that are
            // themselves constrained rows; signal with +inf.
            return std::numeric_limits<double>::infinity();
        }
        return sol.objective;
    }
};

bool face_has_dimension(const Problem& p, double optimum,
                        const std::vector<std::vector<double>>& null_dirs) {
    FaceProbe probe{p, optimum, {}};
    for (const auto& w : null_dirs) {
        const double hi = probe.face_max(w);
        std::vector<double> neg(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) neg[i] = -w[i];
        const double lo = -probe.face_max(neg);
        if (hi == std::numeric_limits<double>::infinity() ||
            lo == -std::numeric_limits<double>::infinity() || hi - lo > kCoefTol) {
            return true;
        }
    }
    return false;
}

bool lex_smallest_optimal_basis(const Problem& p, double optimum,
                                std::vector<std::size_t>& chosen_out,
                                std::vector<double>& point_out) {
    const std::size_t m = p.vars();
    FaceProbe probe{p, optimum, {}};
    std::vector<std::vector<double>> chosen_rows;
    for (std::size_t level = 0; level < m; ++level) {
        bool advanced = false;
        for (std::size_t i = 0; i < p.rows.size(); ++i) {
            if (std::find(probe.pinned.begin(), probe.pinned.end(), i) != probe.pinned.end()) {
                continue;
            }
            chosen_rows.push_back(p.rows[i]);
            if (row_rank(chosen_rows) != level + 1) {
                chosen_rows.pop_back();
                continue;
            }
            const double reach = probe.face_max(p.rows[i]);
            if (reach >= p.rhs[i] - kFeasTol) {
                probe.pinned.push_back(i);
                advanced = true;
                break;
            }
            chosen_rows.pop_back();
        }
        if (!advanced) {
            return false;
        }
    }
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (std::size_t k : probe.pinned) {
        rows.push_back(p.rows[k]);
        rhs.push_back(p.rhs[k]);
    }
    if (!solve_square(std::move(rows), std::move(rhs), point_out)) {
        return false;
    }
    chosen_out = probe.pinned;
    std::sort(chosen_out.begin(), chosen_out.end());
    return true;
}

}  // namespace

std::string to_string(Status s) {
    switch (s) {
        case Status::Optimal: return "Optimal";
        case Status::Infeasible: return "Infeasible";
        case Status::Unbounded: return "Unbounded";
        case Status::DegenerateTie: return "DegenerateTie";
    }
    return "?";
}

Solution solve(const Problem& p) {
    validate(p);
    const std::size_t m = p.vars();
    Solution sol;

    PlainSolve plain = solve_plain(p);
    if (plain.dual_status == DualStatus::DualUnbounded) {
        sol.status = Status::Infeasible;
        return sol;
    }
    if (plain.dual_status == DualStatus::DualInfeasible) {
        sol.status = primal_feasible(p) ? Status::Unbounded : Status::Infeasible;
        return sol;
    }

    sol.objective = plain.objective;

    // Support rows: basic dual variables bounded away from zero. Every
    // optimal primal point keeps these rows tight, so the optimal face lies
    // inside their intersection.
    std::vector<std::vector<double>> support_rows;
    for (std::size_t i = 0; i < plain.basis_rows.size(); ++i) {
        if (plain.lambda[i] > kTieTol) {
            support_rows.push_back(p.rows[plain.basis_rows[i]]);
        }
    }
    const std::size_t support_rank = row_rank(support_rows);

    if (support_rank == m && plain.point_valid) {
        sol.status = Status::Optimal;
        sol.coefficients = plain.point;
        sol.basis = plain.basis_rows;
        sol.active_set = binding_rows(p, sol.coefficients, sol.basis);
        return sol;
    }

    const auto null_dirs = null_space(support_rows, m);
    const bool tie = face_has_dimension(p, plain.objective, null_dirs);

    if (!tie && plain.point_valid) {
        sol.status = Status::Optimal;
        sol.coefficients = plain.point;
        sol.basis = plain.basis_rows;
        sol.active_set = binding_rows(p, sol.coefficients, sol.basis);
        return sol;
    }

    std::vector<std::size_t> basis;
    std::vector<double> point;
    if (lex_smallest_optimal_basis(p, plain.objective, basis, point)) {
        sol.status = Status::DegenerateTie;
        sol.coefficients = point;
        sol.basis = basis;
        sol.objective = dot(p.objective, point);
        sol.active_set = binding_rows(p, sol.coefficients, sol.basis);
        return sol;
    }

    // No vertex exists (constraint matrix not of full column rank). Return a
    // deterministic optimal point with unpinned directions zeroed out.
    sol.status = Status::DegenerateTie;
    if (plain.point_valid) {
        sol.coefficients = plain.point;
    } else {
        // Rank-revealing solve of the basis system, free variables pinned
        // to zero.
        std::vector<std::vector<double>> rows;
        std::vector<double> rhs;
        for (std::size_t k : plain.basis_rows) {
            rows.push_back(p.rows[k]);
            rhs.push_back(p.rhs[k]);
        }
        std::vector<double> b(m, 0.0);
        // Forward elimination with column pivoting on the rectangular system.
        std::size_t rank = 0;
        std::vector<std::size_t> pivot_cols;
        for (std::size_t col = 0; col < m && rank < rows.size(); ++col) {
            std::size_t piv = rank;
            for (std::size_t r = rank + 1; r < rows.size(); ++r) {
                if (std::abs(rows[r][col]) > std::abs(rows[piv][col])) piv = r;
            }
            if (std::abs(rows[piv][col]) < kPivotTol) continue;
            std::swap(rows[piv], rows[rank]);
            std::swap(rhs[piv], rhs[rank]);
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (r == rank) continue;
                const double factor = rows[r][col] / rows[rank][col];
                if (factor == 0.0) continue;
                for (std::size_t j = 0; j < m; ++j) rows[r][j] -= factor * rows[rank][j];
                rhs[r] -= factor * rhs[rank];
            }
            pivot_cols.push_back(col);
            ++rank;
        }
        for (std::size_t r = 0; r < rank; ++r) {
            b[pivot_cols[r]] = rhs[r] / rows[r][pivot_cols[r]];
        }
        sol.coefficients = b;
    }
    sol.basis = plain.basis_rows;
    sol.objective = dot(p.objective, sol.coefficients);
    sol.active_set = binding_rows(p, sol.coefficients, sol.basis);
    return sol;
}

Solution enumerate_vertices(const Problem& p) {
    validate(p);
    const std::size_t n = p.constraints();
    const std::size_t m = p.vars();
    if (n > 20 || m > 5) {
        throw oracle_size_error("enumerate_vertices: guarded to n <= 20 and d <= 4");
    }

    struct Candidate {
        double objective;
        std::vector<double> point;
        std::vector<std::size_t> basis;
    };
    std::vector<Candidate> feasible;

    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    const auto advance = [&]() {
        std::size_t i = m;
        while (i-- > 0) {
            if (idx[i] + (m - i) < n) {
                ++idx[i];
                for (std::size_t j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
                return true;
            }
        }
        return false;
    };

    do {
        std::vector<std::vector<double>> rows;
        std::vector<double> rhs;
        for (std::size_t i : idx) {
            rows.push_back(p.rows[i]);
            rhs.push_back(p.rhs[i]);
        }
        std::vector<double> b;
        if (!solve_square(std::move(rows), std::move(rhs), b)) continue;
        bool ok = true;
        for (std::size_t k = 0; k < n && ok; ++k) {
            ok = dot(p.rows[k], b) <= p.rhs[k] + kFeasTol;
        }
        if (!ok) continue;
        feasible.push_back({dot(p.objective, b), std::move(b), idx});
    } while (advance());

    Solution sol;
    if (feasible.empty()) {
        sol.status = Status::Infeasible;
        return sol;
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& c : feasible) best = std::max(best, c.objective);

    const Candidate* winner = nullptr;
    for (const auto& c : feasible) {
        if (c.objective >= best - kTieTol) {
            winner = &c;
            break;  // subsets visited in lexicographic order
        }
    }
    bool tie = false;
    for (const auto& c : feasible) {
        if (c.objective < best - kTieTol) continue;
        for (std::size_t i = 0; i < m; ++i) {
            if (std::abs(c.point[i] - winner->point[i]) > kCoefTol) {
                tie = true;
                break;
            }
        }
        if (tie) break;
    }

    sol.status = tie ? Status::DegenerateTie : Status::Optimal;
    sol.coefficients = winner->point;
    sol.objective = winner->objective;
    sol.basis = winner->basis;
    sol.active_set = binding_rows(p, sol.coefficients, sol.basis);
    return sol;
}

}  // namespace tvar::lp
