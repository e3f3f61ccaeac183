#include "fbne/federation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "fbne/errors.hpp"
#include "fbne/rng.hpp"

namespace fbne {

namespace {

void check_class_column(const DataTable& table, int class_column) {
  if (class_column < 0 || class_column >= table.n_cols()) {
    throw Error("class column index out of range");
  }
  if (table.column(class_column).continuous) {
    throw Error("class column must be categorical");
  }
}

std::vector<int> non_class_columns(const DataTable& table, int class_column) {
  std::vector<int> cols;
  for (int c = 0; c < table.n_cols(); ++c) {
    if (c != class_column) cols.push_back(c);
  }
  return cols;
}

std::vector<int> all_rows(const DataTable& table) {
  std::vector<int> rows(table.n_rows());
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

PartyView make_party(int id, std::vector<int> attr_cols, std::vector<int> rows,
                     int class_column) {
  PartyView party;
  party.party_id = id;
  std::sort(attr_cols.begin(), attr_cols.end());
  attr_cols.push_back(class_column);
  party.local_columns = std::move(attr_cols);
  party.train_rows = rows;
  party.local_rows = std::move(rows);
  party.class_column = class_column;
  return party;
}

}  // namespace

std::vector<PartyView> split_vertical(const DataTable& table, int class_column,
                                      int n_parties, std::uint64_t seed) {
  check_class_column(table, class_column);
  if (n_parties < 2) throw InfeasibleSplitError("need at least 2 parties");
  std::vector<int> cols = non_class_columns(table, class_column);
  if (static_cast<int>(cols.size()) < 2 * n_parties) {
    throw InfeasibleSplitError(
        "vertical split needs at least 2 attributes per party (" +
        std::to_string(cols.size()) + " available for " +
        std::to_string(n_parties) + " parties)");
  }

  Rng rng(seed);
  rng.shuffle(cols);
  // Guarantee the 2-attribute floor, then place the surplus at random.
  std::vector<int> sizes(n_parties, 2);
  for (std::size_t extra = 2 * n_parties; extra < cols.size(); ++extra) {
    ++sizes[rng.next_below(n_parties)];
  }

  std::vector<PartyView> parties;
  std::size_t next = 0;
  for (int p = 0; p < n_parties; ++p) {
    std::vector<int> own(cols.begin() + next, cols.begin() + next + sizes[p]);
    next += sizes[p];
    parties.push_back(
        make_party(p, std::move(own), all_rows(table), class_column));
  }
  return parties;
}

std::vector<PartyView> split_horizontal(const DataTable& table,
                                        int class_column, int n_parties,
                                        double bias, int biased_state,
                                        std::uint64_t seed) {
  check_class_column(table, class_column);
  if (n_parties < 2) throw InfeasibleSplitError("need at least 2 parties");
  if (table.n_rows() < 50 * n_parties) {
    throw InfeasibleSplitError(
        "horizontal split needs at least 50 rows per party (" +
        std::to_string(table.n_rows()) + " available for " +
        std::to_string(n_parties) + " parties)");
  }
  if (bias < 0.5 || bias >= 1.0) {
    throw Error("bias must lie in [0.5, 1)");
  }

  Rng rng(seed);
  std::vector<std::vector<int>> rows_of(n_parties);
  for (int r = 0; r < table.n_rows(); ++r) {
    int party;
    if (bias == 0.5) {
      party = static_cast<int>(rng.next_below(n_parties));
    } else {
      const bool targeted = table.code(r, class_column) == biased_state;
      const double to_first = targeted ? bias : (1.0 - bias) / (n_parties - 1);
      if (rng.next_double() < to_first) {
        party = 0;
      } else {
        party = 1 + static_cast<int>(rng.next_below(n_parties - 1));
      }
    }
    rows_of[party].push_back(r);
  }

  // Top up any party below the floor from whichever is largest.
  while (true) {
    int smallest = 0, largest = 0;
    for (int p = 1; p < n_parties; ++p) {
      if (rows_of[p].size() < rows_of[smallest].size()) smallest = p;
      if (rows_of[p].size() > rows_of[largest].size()) largest = p;
    }
    if (rows_of[smallest].size() >= 50) break;
    auto& from = rows_of[largest];
    const std::size_t pick = rng.next_below(from.size());
    rows_of[smallest].push_back(from[pick]);
    from.erase(from.begin() + pick);
  }

  std::vector<PartyView> parties;
  for (int p = 0; p < n_parties; ++p) {
    std::sort(rows_of[p].begin(), rows_of[p].end());
    parties.push_back(make_party(p, non_class_columns(table, class_column),
                                 std::move(rows_of[p]), class_column));
  }
  return parties;
}

std::vector<PartyView> split_hybrid(const DataTable& table, int class_column,
                                    HybridMode mode, std::uint64_t seed) {
  check_class_column(table, class_column);
  std::vector<int> cols = non_class_columns(table, class_column);
  if (cols.size() < 4) {
    throw InfeasibleSplitError(
        "hybrid split needs at least 4 non-class attributes");
  }
  if (table.n_rows() < 100) {
    throw InfeasibleSplitError("hybrid split needs at least 100 rows");
  }

  Rng rng(seed);
  rng.shuffle(cols);
  std::size_t half = cols.size() / 2;
  if (rng.next_below(2) == 1) half = cols.size() - half;  // random odd column
  std::vector<int> attrs_a(cols.begin(), cols.begin() + half);
  std::vector<int> attrs_b(cols.begin() + half, cols.end());

  std::vector<int> rows = all_rows(table);
  rng.shuffle(rows);
  const std::size_t row_half = rows.size() / 2;
  std::vector<int> rows_2(rows.begin(), rows.begin() + row_half);
  std::vector<int> rows_3(rows.begin() + row_half, rows.end());
  std::sort(rows_2.begin(), rows_2.end());
  std::sort(rows_3.begin(), rows_3.end());

  std::vector<PartyView> parties;
  parties.push_back(make_party(0, attrs_a, all_rows(table), class_column));
  parties.push_back(make_party(1, attrs_b, std::move(rows_2), class_column));
  parties.push_back(make_party(2, attrs_b, std::move(rows_3), class_column));
  if (mode == HybridMode::kSharedOverlap) {
    // Parties 2 and 3 pool the rows they jointly cover for training.
    parties[1].train_rows = all_rows(table);
    parties[2].train_rows = all_rows(table);
  }
  return parties;
}

std::vector<PartyView> split_manual(
    const DataTable& table, int class_column,
    const std::vector<std::vector<std::string>>& party_columns) {
  check_class_column(table, class_column);
  if (party_columns.size() < 2) {
    throw InfeasibleSplitError("manual split needs at least 2 parties");
  }
  std::set<int> assigned;
  std::vector<PartyView> parties;
  for (std::size_t p = 0; p < party_columns.size(); ++p) {
    std::vector<int> own;
    for (const std::string& name : party_columns[p]) {
      const int c = table.column_index(name);
      if (c < 0) throw Error("manual split names unknown column '" + name + "'");
      if (c == class_column) continue;  // implied everywhere
      if (!assigned.insert(c).second) {
        throw InfeasibleSplitError("column '" + name +
                                   "' assigned to more than one party");
      }
      own.push_back(c);
    }
    if (own.empty()) {
      throw InfeasibleSplitError("party " + std::to_string(p) +
                                 " has no attributes");
    }
    parties.push_back(make_party(static_cast<int>(p), std::move(own),
                                 all_rows(table), class_column));
  }
  if (static_cast<int>(assigned.size()) != table.n_cols() - 1) {
    throw InfeasibleSplitError(
        "manual split must cover every non-class column");
  }
  return parties;
}

std::vector<PartyView> make_split(const DataTable& table, int class_column,
                                  const SplitPlan& plan) {
  switch (plan.kind) {
    case SplitKind::kVertical:
      return split_vertical(table, class_column, plan.n_parties, plan.seed);
    case SplitKind::kHorizontal:
      return split_horizontal(table, class_column, plan.n_parties, plan.bias,
                              plan.biased_state, plan.seed);
    case SplitKind::kHybrid:
      return split_hybrid(table, class_column, plan.hybrid_mode, plan.seed);
    case SplitKind::kManual:
      return split_manual(table, class_column, plan.manual_columns);
  }
  throw Error("unknown split kind");
}

SecureSumSession::SecureSumSession(int n_parties, std::uint64_t seed,
                                   std::uint64_t modulus,
                                   double fixed_point_scale)
    : n_parties_(n_parties),
      modulus_(modulus),
      scale_(fixed_point_scale),
      seed_(seed) {
  if (n_parties < 1) throw SessionConfigError("need at least one party");
  if (fixed_point_scale < 1e6) {
    throw SessionConfigError("fixed-point scale must be at least 1e6");
  }
  if (modulus < 3 || modulus % 2 == 0) {
    throw SessionConfigError("modulus must be an odd prime");
  }
}

std::vector<double> secure_weighted_sum(
    SecureSumSession& session, const std::vector<std::vector<double>>& vecs,
    const std::vector<double>& weights) {
  if (session.used_) {
    throw SessionConfigError("secure-sum session already consumed");
  }
  if (static_cast<int>(vecs.size()) != session.n_parties_ ||
      weights.size() != vecs.size()) {
    throw SessionConfigError("one vector and one weight per party required");
  }
  if (vecs.empty() || vecs[0].empty()) {
    throw SessionConfigError("nothing to aggregate");
  }
  const std::size_t width = vecs[0].size();
  double total_weight = 0.0;
  double max_total_encoded = 0.0;
  for (std::size_t p = 0; p < vecs.size(); ++p) {
    if (vecs[p].size() != width) {
      throw SessionConfigError("contribution vectors differ in length");
    }
    if (!(weights[p] > 0.0)) {
      throw SessionConfigError("weights must be positive");
    }
    for (double v : vecs[p]) {
      if (v < 0.0 || v > 1.0 + 1e-9) {
        throw SessionConfigError("probabilities must lie in [0, 1]");
      }
    }
    total_weight += weights[p];
    max_total_encoded += weights[p] * session.scale_ + 1.0;
  }
  // Overflow check up front: the decoded sum must fit below the modulus
  // even if every probability were 1.
  if (max_total_encoded >= static_cast<double>(session.modulus_)) {
    throw SessionConfigError(
        "weights too large for the modulus at this fixed-point scale");
  }
  session.used_ = true;

  const std::uint64_t mod = session.modulus_;
  Rng rng(session.seed_);
  // Masks for parties 0..n-2 are uniform; the last party's mask is the
  // negation of their sum, so the round total carries no mask at all.
  session.masks_.assign(vecs.size(), std::vector<std::uint64_t>(width, 0));
  for (std::size_t e = 0; e < width; ++e) {
    std::uint64_t mask_sum = 0;
    for (std::size_t p = 0; p + 1 < vecs.size(); ++p) {
      const std::uint64_t m = rng.next_below(mod);
      session.masks_[p][e] = m;
      mask_sum = (mask_sum + m) % mod;
    }
    session.masks_.back()[e] = (mod - mask_sum) % mod;
  }

  std::vector<std::uint64_t> sums(width, 0);
  for (std::size_t p = 0; p < vecs.size(); ++p) {
    AuditRecord seen;
    seen.party_id = static_cast<int>(p);
    seen.values.resize(width);
    for (std::size_t e = 0; e < width; ++e) {
      const auto encoded = static_cast<std::uint64_t>(
          std::llround(weights[p] * vecs[p][e] * session.scale_));
      const std::uint64_t share = (encoded + session.masks_[p][e]) % mod;
      seen.values[e] = share;
      sums[e] = (sums[e] + share) % mod;
    }
    session.audit_.push_back(std::move(seen));
  }

  AuditRecord decoded;
  decoded.party_id = -1;
  decoded.values = sums;
  session.audit_.push_back(std::move(decoded));

  std::vector<double> result(width);
  for (std::size_t e = 0; e < width; ++e) {
    result[e] =
        static_cast<double>(sums[e]) / (session.scale_ * total_weight);
  }
  return result;
}

}  // namespace fbne
