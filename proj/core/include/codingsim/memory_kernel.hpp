#pragma once

#include "codingsim/types.hpp"

// Memory-trace kernel: reinforcement to a peak, exponential forgetting and a
// survival threshold below which a trace reads as zero. All functions are
// pure; bookkeeping of last-update times is the caller's job.

namespace codingsim {

/// exp(-lambda * dt). Throws std::domain_error for dt < 0 or lambda <= 0.
double forgetting_factor(Hours dt, double lambda);

/// Weight of a trace stored as `w_last` at `t_last`, read at `t_now`.
/// Returns w_last * f(t_now - t_last), or 0 if that falls strictly below theta.
double decayed_weight(double w_last, Hours t_last, Hours t_now,
                      const MemoryParams& params);

/// New stored weight after an event at `t_event`.
///
/// With d = w_last * f(t_event - t_last): returns mu when d < theta (the old
/// trace is forgotten and a fresh one starts at the peak), else
/// mu + d * (1 - mu). The result always lies in [mu, 1].
double reinforce(double w_last, Hours t_last, Hours t_event,
                 const MemoryParams& params);

/// Time for an unreinforced trace to fall from mu to theta:
/// ln(mu / theta) / lambda.
Hours trace_lifetime(const MemoryParams& params);

/// Inverse of trace_lifetime: the lambda that gives `lifetime` for mu, theta.
double lambda_for_lifetime(double mu, double theta, Hours lifetime);

}  // namespace codingsim
