#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace tvar::lp {

// Dense linear program
//
//   maximize objective . b   subject to   rows[k] . b <= rhs[k],  k = 1..n,
//
// with free variables b of length d+1 (at most a handful). The constraint
// count n may be large (local fitting windows), so the solver works on the
// dual, which has only d+1 equality rows.
struct Problem {
    std::vector<double> objective;            // length d+1
    std::vector<std::vector<double>> rows;    // n x (d+1)
    std::vector<double> rhs;                  // length n

    std::size_t vars() const { return objective.size(); }
    std::size_t constraints() const { return rows.size(); }
};

enum class Status { Optimal, Infeasible, Unbounded, DegenerateTie };

std::string to_string(Status s);

// DegenerateTie marks an optimal face of dimension >= 1; the returned point
// is then the vertex owning the lexicographically smallest optimal basis, so
// the solution is still a deterministic function of the input.
struct Solution {
    Status status = Status::Infeasible;
    std::vector<double> coefficients;
    double objective = 0.0;
    std::vector<std::size_t> active_set;  // binding constraints at the solution
    std::vector<std::size_t> basis;       // defining constraint subset, ascending
};

// Simplex with Bland's anti-cycling rule (lowest eligible index enters and
// leaves). Pivot tolerance 1e-11, feasibility tolerance 1e-9.
Solution solve(const Problem& p);

// Exhaustive test oracle: visits every (d+1)-subset of constraints in
// lexicographic order, keeps feasible vertices, returns the best one; ties
// resolve to the first (lexicographically smallest) basis, matching solve().
// Guarded to n <= 20, d <= 4.
Solution enumerate_vertices(const Problem& p);

}  // namespace tvar::lp
