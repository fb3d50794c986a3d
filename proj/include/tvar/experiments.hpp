#pragma once

#include "tvar/config.hpp"
#include "tvar/report.hpp"

namespace tvar::studies {

// Monte Carlo studies. Each one reads its keys from the flat config (missing
// keys fall back to documented defaults), echoes the fully resolved
// configuration, including derived bandwidths, truncation levels and local
// sample sizes, into the report, and derives every replication seed from the
// master seed via the documented mixing rule, so reruns and thread-count
// changes reproduce identical tables.
//
// Shared keys: f, dist, n (comma list), reps, x, a (defaults to the
// innovation shape), beta, h (bandwidth override), seed, threads.

// Decay of |f_hat^tau(x) - f(x)| across N; estimator = qmle | baseline | both.
Report rate_study(const KeyValueConfig& cfg);

// Tail frequencies of the error against calibrated thresholds on a v grid.
Report concentration_study(const KeyValueConfig& cfg);

// One-step-ahead mean squared error against the innovation variance.
Report prediction_study(const KeyValueConfig& cfg);

// Pooled CDF of the normalized residuals eps_k / X_{k-1} near the origin.
Report sharpness_study(const KeyValueConfig& cfg);

// Joint small-threshold probabilities at index gaps j.
Report pair_minimum_study(const KeyValueConfig& cfg);

// Two-hypothesis testing battery (likelihood-ratio identities, moments,
// indicator and truncation frequencies, test risk across N).
Report lower_bound_battery(const KeyValueConfig& cfg);

}  // namespace tvar::studies
