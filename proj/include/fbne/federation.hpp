#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fbne/data_table.hpp"

namespace fbne {

// One simulated party: which columns and rows of the source table it
// holds. The class column is always present ("enriched with the class
// label"); train_rows widens local_rows only in the hybrid
// shared-overlap mode, where a party may train on rows another party
// holds for the same attributes.
struct PartyView {
  int party_id = 0;
  std::vector<int> local_columns;  // non-class columns sorted, class last
  std::vector<int> local_rows;
  std::vector<int> train_rows;
  int class_column = -1;
};

enum class SplitKind { kVertical, kHorizontal, kHybrid, kManual };

enum class HybridMode { kLocalOnly, kSharedOverlap };

struct SplitPlan {
  SplitKind kind = SplitKind::kVertical;
  int n_parties = 2;
  double bias = 0.5;            // horizontal only; 0.5 means unbiased
  int biased_state = 1;         // class state routed toward party 1
  HybridMode hybrid_mode = HybridMode::kLocalOnly;
  std::uint64_t seed = 0;
  // kManual: party -> non-class column names (the class column is
  // implied everywhere).
  std::vector<std::vector<std::string>> manual_columns;
};

// Random partition of the non-class columns, at least 2 per party; all
// parties hold all rows.
std::vector<PartyView> split_vertical(const DataTable& table, int class_column,
                                      int n_parties, std::uint64_t seed);

// Random partition of the rows, at least 50 per party; all parties hold
// all columns. With bias b > 0.5, rows whose class equals biased_state
// go to party 1 with probability b (others spread uniformly over the
// rest), while remaining rows reach party 1 with probability
// (1-b)/(n_parties-1). A rebalancing pass moves random rows out of the
// largest party until every party meets the 50-row minimum.
std::vector<PartyView> split_horizontal(const DataTable& table,
                                        int class_column, int n_parties,
                                        double bias, int biased_state,
                                        std::uint64_t seed);

// Three parties: party 1 holds one random attribute half over all rows;
// parties 2 and 3 share the other half over disjoint random row halves.
// In kSharedOverlap mode parties 2 and 3 train on all rows of their
// columns instead of just their own half.
std::vector<PartyView> split_hybrid(const DataTable& table, int class_column,
                                    HybridMode mode, std::uint64_t seed);

// Explicit column assignment (party -> non-class column names); the
// names must partition the non-class columns.
std::vector<PartyView> split_manual(
    const DataTable& table, int class_column,
    const std::vector<std::vector<std::string>>& party_columns);

std::vector<PartyView> make_split(const DataTable& table, int class_column,
                                  const SplitPlan& plan);

// What the aggregator saw during a secure-sum round: masked shares per
// party, then the decoded totals (party_id -1). Raw weighted
// probabilities never appear here.
struct AuditRecord {
  int party_id = -1;
  std::vector<std::uint64_t> values;
};

// One additive-masking aggregation round. Each party fixed-point
// encodes weight * probability, adds a mask; the masks sum to zero mod
// the modulus, so the aggregator recovers only the total. Arithmetic
// stand-in for the additively homomorphic scheme; no cryptography.
class SecureSumSession {
 public:
  static constexpr std::uint64_t kDefaultModulus = (1ULL << 61) - 1;  // prime
  static constexpr double kDefaultScale = 1e12;

  SecureSumSession(int n_parties, std::uint64_t seed,
                   std::uint64_t modulus = kDefaultModulus,
                   double fixed_point_scale = kDefaultScale);

  int n_parties() const { return n_parties_; }
  std::uint64_t modulus() const { return modulus_; }
  double fixed_point_scale() const { return scale_; }

  const std::vector<AuditRecord>& audit_log() const { return audit_; }
  // Masks of the completed round, one row per party.
  const std::vector<std::vector<std::uint64_t>>& masks() const {
    return masks_;
  }

 private:
  friend std::vector<double> secure_weighted_sum(
      SecureSumSession& session, const std::vector<std::vector<double>>& vecs,
      const std::vector<double>& weights);

  int n_parties_;
  std::uint64_t modulus_;
  double scale_;
  std::uint64_t seed_;
  bool used_ = false;
  std::vector<AuditRecord> audit_;
  std::vector<std::vector<std::uint64_t>> masks_;
};

// Weighted average of per-party probability vectors through the masked
// fixed-point pipeline. Matches the plaintext weighted mean within
// 1/fixed_point_scale per entry. The session is consumed.
std::vector<double> secure_weighted_sum(
    SecureSumSession& session, const std::vector<std::vector<double>>& vecs,
    const std::vector<double>& weights);

}  // namespace fbne
