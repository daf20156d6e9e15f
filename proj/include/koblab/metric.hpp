#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "koblab/estimator.hpp"

namespace koblab {

struct OracleOptions {
  OptimizerBudget budget;
  /// Rounding quanta of the memo key: canonical base point (absolute) and unit direction.
  double point_quantum = 1e-3;
  double direction_quantum = 1e-2;
  bool memoize = true;
};

/// Budget used for tube and generic domains, where every length needs many
/// infinitesimal evaluations.
OptimizerBudget light_budget();

/// Kobayashi-Royden length at scale 1: closed form where one exists, the
/// polynomial-disc estimator otherwise. Estimates are memoized by the base point
/// and direction after reduction by the symmetries of the domain; the stored value
/// is computed at the rounded representative, so results do not depend on call order.
class KobayashiMetric {
 public:
  explicit KobayashiMetric(Domain d, OracleOptions opt = {});

  const Domain& domain() const { return d_; }
  const OracleOptions& options() const { return opt_; }
  bool closed() const { return d_.has_closed_metric(); }

  double operator()(std::span<const cplx> p, std::span<const cplx> v) const;

  long estimator_calls() const { return calls_.load(); }
  long memo_hits() const { return hits_.load(); }

  /// The canonical representative (p', v') with F(p, v) = |v| F(p', v'), |v'| = 1.
  std::pair<CVec, CVec> canonicalize(std::span<const cplx> p, std::span<const cplx> v) const;

 private:
  double estimate(std::span<const cplx> p, std::span<const cplx> v) const;

  Domain d_;
  OracleOptions opt_;
  mutable std::mutex mu_;
  mutable std::map<std::vector<long long>, double> memo_;
  mutable std::atomic<long> calls_{0};
  mutable std::atomic<long> hits_{0};
};

}  // namespace koblab
