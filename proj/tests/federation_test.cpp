#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include <doctest.h>

#include "fbne/bif.hpp"
#include "fbne/csv.hpp"
#include "fbne/errors.hpp"
#include "fbne/federation.hpp"
#include "fbne/inference.hpp"
#include "fbne/rng.hpp"

#include "oracles.hpp"

using namespace fbne;

namespace {

constexpr int kAsiaClass = 3;  // "lung"

DataTable asia_rows(int n, std::uint64_t seed = 8) {
  return forward_sample(builtin_asia(), n, seed);
}

// n rows over one binary attribute plus a binary class with the given
// per-row class codes.
DataTable tiny_classed(const std::vector<int>& class_codes) {
  DataTable t;
  std::vector<int> attr(class_codes.size());
  for (std::size_t i = 0; i < attr.size(); ++i) attr[i] = i % 2;
  t.add_categorical_column(Variable{"a", {"f", "t"}}, std::move(attr));
  t.add_categorical_column(Variable{"cls", {"f", "t"}},
                           std::vector<int>(class_codes));
  return t;
}

// Non-class columns across the parties form a partition of the table's
// non-class columns, and the class column sits last everywhere.
void check_column_partition(const std::vector<PartyView>& parties,
                            const DataTable& table, int class_column) {
  std::set<int> seen;
  for (const PartyView& party : parties) {
    REQUIRE(!party.local_columns.empty());
    CHECK(party.local_columns.back() == class_column);
    CHECK(party.class_column == class_column);
    for (std::size_t i = 0; i + 1 < party.local_columns.size(); ++i) {
      const int c = party.local_columns[i];
      CHECK(c != class_column);
      CHECK(seen.insert(c).second);
      if (i > 0) CHECK(party.local_columns[i - 1] < c);
    }
  }
  CHECK(static_cast<int>(seen.size()) == table.n_cols() - 1);
}

void check_row_partition(const std::vector<PartyView>& parties,
                         const DataTable& table) {
  std::set<int> seen;
  for (const PartyView& party : parties) {
    for (int r : party.local_rows) CHECK(seen.insert(r).second);
  }
  CHECK(static_cast<int>(seen.size()) == table.n_rows());
}

}  // namespace

TEST_SUITE("federation") {

TEST_CASE("vertical split partitions the attributes") {
  const DataTable t = asia_rows(300);
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const std::vector<PartyView> parties =
        split_vertical(t, kAsiaClass, 2, seed);
    REQUIRE(parties.size() == 2);
    check_column_partition(parties, t, kAsiaClass);
    for (const PartyView& party : parties) {
      CHECK(party.local_columns.size() >= 3);  // 2 attributes + class
      CHECK(static_cast<int>(party.local_rows.size()) == t.n_rows());
      CHECK(party.train_rows == party.local_rows);
    }
  }
}

TEST_CASE("vertical split with no slack is forced") {
  std::istringstream in("a,b,c,d,cls\n1,1,1,1,x\n2,2,2,2,y\n");
  const DataTable t = parse_csv(in, "tiny.csv");
  const std::vector<PartyView> parties = split_vertical(t, 4, 2, 5);
  CHECK(parties[0].local_columns.size() == 3);
  CHECK(parties[1].local_columns.size() == 3);
}

TEST_CASE("three vertical parties do not fit five attributes") {
  const DataTable iris = load_csv("fixtures/iris.csv");
  CHECK_THROWS_AS(split_vertical(iris, 4, 3, 1), InfeasibleSplitError);
}

TEST_CASE("vertical split is seed-stable and seed-diverse") {
  const DataTable t = asia_rows(100);
  const std::vector<PartyView> a = split_vertical(t, kAsiaClass, 2, 9);
  const std::vector<PartyView> b = split_vertical(t, kAsiaClass, 2, 9);
  CHECK(a[0].local_columns == b[0].local_columns);

  std::set<std::vector<int>> first_party_columns;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    first_party_columns.insert(
        split_vertical(t, kAsiaClass, 2, seed)[0].local_columns);
  }
  CHECK(first_party_columns.size() >= 2);
}

TEST_CASE("unbiased horizontal split is near-even") {
  const DataTable t = asia_rows(10000);
  const std::vector<PartyView> parties =
      split_horizontal(t, kAsiaClass, 2, 0.5, 1, 13);
  REQUIRE(parties.size() == 2);
  check_row_partition(parties, t);
  for (const PartyView& party : parties) {
    CHECK(std::fabs(static_cast<double>(party.local_rows.size()) - 5000.0) <=
          3.0 * std::sqrt(2500.0));
    CHECK(static_cast<int>(party.local_columns.size()) == t.n_cols());
  }
}

TEST_CASE("bias routes the targeted label to the first party") {
  const DataTable t = asia_rows(10000);
  for (int biased_state : {0, 1}) {
    const std::vector<PartyView> parties =
        split_horizontal(t, kAsiaClass, 2, 0.95, biased_state, 17);
    check_row_partition(parties, t);

    const std::set<int> first(parties[0].local_rows.begin(),
                              parties[0].local_rows.end());
    int targeted = 0, targeted_at_first = 0;
    for (int r = 0; r < t.n_rows(); ++r) {
      if (t.code(r, kAsiaClass) != biased_state) continue;
      ++targeted;
      targeted_at_first += first.count(r);
    }
    const double rate = static_cast<double>(targeted_at_first) / targeted;
    CHECK(std::fabs(rate - 0.95) <= 0.02);
  }
}

TEST_CASE("horizontal split floors and validation") {
  CHECK_THROWS_AS(
      split_horizontal(tiny_classed(std::vector<int>(99, 0)), 1, 2, 0.5, 1, 1),
      InfeasibleSplitError);
  CHECK_THROWS_AS(split_horizontal(asia_rows(200), kAsiaClass, 2, 0.3, 1, 1),
                  Error);
  CHECK_THROWS_AS(split_horizontal(asia_rows(200), kAsiaClass, 2, 1.0, 1, 1),
                  Error);
}

TEST_CASE("rebalancing pass enforces the row minimum") {
  // Every row carries the biased label, so the raw routing starves the
  // second party.
  std::vector<int> labels(120, 1);
  const DataTable t = tiny_classed(labels);
  const std::vector<PartyView> parties =
      split_horizontal(t, 1, 2, 0.95, 1, 23);
  check_row_partition(parties, t);
  for (const PartyView& party : parties) {
    CHECK(party.local_rows.size() >= 50);
  }
}

TEST_CASE("hybrid split shape on a full-size table") {
  const DataTable t = asia_rows(10000);
  const std::vector<PartyView> parties =
      split_hybrid(t, kAsiaClass, HybridMode::kLocalOnly, 31);
  REQUIRE(parties.size() == 3);

  CHECK(static_cast<int>(parties[0].local_rows.size()) == t.n_rows());
  CHECK(parties[0].local_columns.size() >= 3);
  CHECK(parties[1].local_columns == parties[2].local_columns);
  CHECK(parties[1].local_columns.size() >= 3);

  // Parties 2 and 3 split the rows exactly in half, disjointly.
  std::set<int> rows_2(parties[1].local_rows.begin(),
                       parties[1].local_rows.end());
  for (int r : parties[2].local_rows) CHECK(rows_2.count(r) == 0);
  CHECK(parties[1].local_rows.size() + parties[2].local_rows.size() ==
        static_cast<std::size_t>(t.n_rows()));
  CHECK(parties[1].local_rows.size() == 5000);

  // Attribute halves partition the non-class columns.
  std::set<int> attrs;
  for (std::size_t i = 0; i + 1 < parties[0].local_columns.size(); ++i) {
    attrs.insert(parties[0].local_columns[i]);
  }
  for (std::size_t i = 0; i + 1 < parties[1].local_columns.size(); ++i) {
    CHECK(attrs.insert(parties[1].local_columns[i]).second);
  }
  CHECK(static_cast<int>(attrs.size()) == t.n_cols() - 1);

  // Local-only mode trains each party on its own rows.
  for (const PartyView& party : parties) {
    CHECK(party.train_rows == party.local_rows);
  }
}

TEST_CASE("hybrid shared-overlap mode widens the training rows") {
  const DataTable t = asia_rows(400);
  const std::vector<PartyView> parties =
      split_hybrid(t, kAsiaClass, HybridMode::kSharedOverlap, 31);
  CHECK(static_cast<int>(parties[1].train_rows.size()) == t.n_rows());
  CHECK(static_cast<int>(parties[2].train_rows.size()) == t.n_rows());
  CHECK(parties[1].local_rows.size() == 200);
}

TEST_CASE("hybrid split at the feasibility boundary") {
  std::ostringstream body;
  body << "a,b,c,d,cls\n";
  for (int r = 0; r < 100; ++r) {
    body << r % 3 << ',' << r % 5 << ',' << r % 2 << ',' << r % 7 << ','
         << (r % 2 ? "t" : "f") << '\n';
  }
  std::istringstream in(body.str());
  const DataTable t = parse_csv(in, "boundary.csv");
  const std::vector<PartyView> parties =
      split_hybrid(t, 4, HybridMode::kLocalOnly, 37);
  CHECK(parties[0].local_columns.size() == 3);
  CHECK(parties[1].local_columns.size() == 3);
  CHECK(parties[1].local_rows.size() == 50);
  CHECK(parties[2].local_rows.size() == 50);

  const DataTable iris = load_csv("fixtures/iris.csv");
  CHECK_NOTHROW(split_hybrid(iris, 4, HybridMode::kLocalOnly, 1));
  CHECK_THROWS_AS(split_hybrid(tiny_classed(std::vector<int>(200, 0)), 1,
                               HybridMode::kLocalOnly, 1),
                  InfeasibleSplitError);
}

TEST_CASE("manual split follows the configured assignment") {
  const DataTable t = asia_rows(60);
  const std::vector<PartyView> parties = split_manual(
      t, kAsiaClass,
      {{"asia", "tub", "smoke"}, {"bronc", "either", "xray", "dysp"}});
  REQUIRE(parties.size() == 2);
  check_column_partition(parties, t, kAsiaClass);
  CHECK(parties[0].local_columns ==
        std::vector<int>{0, 1, 2, kAsiaClass});

  CHECK_THROWS_AS(split_manual(t, kAsiaClass, {{"asia"}, {"tub"}}),
                  InfeasibleSplitError);  // columns left over
  CHECK_THROWS_AS(
      split_manual(t, kAsiaClass,
                   {{"asia", "tub"}, {"tub", "smoke", "bronc", "either",
                                      "xray", "dysp"}}),
      InfeasibleSplitError);  // column claimed twice
  CHECK_THROWS_AS(split_manual(t, kAsiaClass, {{"asia", "nope"}, {"tub"}}),
                  Error);
}

TEST_CASE("plan dispatch covers every split kind") {
  const DataTable t = asia_rows(300);
  SplitPlan plan;
  plan.kind = SplitKind::kHorizontal;
  plan.n_parties = 3;
  plan.seed = 3;
  const std::vector<PartyView> parties = make_split(t, kAsiaClass, plan);
  CHECK(parties.size() == 3);
  check_row_partition(parties, t);
}

TEST_CASE("identical contributions aggregate to themselves") {
  SecureSumSession session(2, 101);
  const std::vector<double> out = secure_weighted_sum(
      session, {{0.6, 0.4}, {0.6, 0.4}}, {1.0, 1.0});
  CHECK(std::fabs(out[0] - 0.6) <= 1e-9);
  CHECK(std::fabs(out[1] - 0.4) <= 1e-9);
}

TEST_CASE("weights steer the aggregate") {
  SecureSumSession session(2, 102);
  const std::vector<double> out =
      secure_weighted_sum(session, {{1.0, 0.0}, {0.0, 1.0}}, {1.0, 3.0});
  CHECK(std::fabs(out[0] - 0.25) <= 1e-9);
  CHECK(std::fabs(out[1] - 0.75) <= 1e-9);
}

TEST_CASE("masked aggregation equals the plaintext mean") {
  Rng rng(103);
  for (int trial = 0; trial < 100; ++trial) {
    const int n_parties = 2 + static_cast<int>(rng.next_below(9));
    const int width = 1 + static_cast<int>(rng.next_below(6));
    std::vector<std::vector<double>> vecs(n_parties);
    std::vector<double> weights(n_parties);
    for (int p = 0; p < n_parties; ++p) {
      weights[p] = 0.25 + 4.0 * rng.next_double();
      for (int e = 0; e < width; ++e) {
        vecs[p].push_back(rng.next_double());
      }
    }

    SecureSumSession session(n_parties, rng.next_u64());
    const std::vector<double> got =
        secure_weighted_sum(session, vecs, weights);
    const std::vector<double> want = oracle::weighted_mean(vecs, weights);
    for (int e = 0; e < width; ++e) {
      CHECK(std::fabs(got[e] - want[e]) <= 1e-6);
    }

    // Masks cancel exactly: their column sums vanish mod the modulus.
    const auto& masks = session.masks();
    REQUIRE(static_cast<int>(masks.size()) == n_parties);
    for (int e = 0; e < width; ++e) {
      std::uint64_t sum = 0;
      for (int p = 0; p < n_parties; ++p) {
        sum = (sum + masks[p][e]) % session.modulus();
      }
      CHECK(sum == 0);
    }
  }
}

TEST_CASE("audit log shows masked shares and the decoded total only") {
  SecureSumSession session(3, 104);
  const std::vector<std::vector<double>> vecs{{0.2, 0.8}, {0.5, 0.5},
                                              {0.9, 0.1}};
  const std::vector<double> weights{1.0, 2.0, 1.0};
  const std::vector<double> out = secure_weighted_sum(session, vecs, weights);

  const std::vector<AuditRecord>& log = session.audit_log();
  REQUIRE(log.size() == 4);  // three shares plus the total
  for (int p = 0; p < 3; ++p) {
    CHECK(log[p].party_id == p);
    // What the aggregator saw is the share, not the plain encoding.
    const auto plain = static_cast<std::uint64_t>(
        std::llround(weights[p] * vecs[p][0] * session.fixed_point_scale()));
    CHECK(log[p].values[0] ==
          (plain + session.masks()[p][0]) % session.modulus());
  }
  CHECK(log[3].party_id == -1);
  // The decoded total reproduces the returned aggregate.
  const double total_weight = 4.0;
  CHECK(std::fabs(static_cast<double>(log[3].values[0]) /
                      (session.fixed_point_scale() * total_weight) -
                  out[0]) <= 1e-12);
}

TEST_CASE("sessions are single use and validate their inputs") {
  SecureSumSession session(2, 105);
  (void)secure_weighted_sum(session, {{0.5}, {0.5}}, {1.0, 1.0});
  CHECK_THROWS_AS(secure_weighted_sum(session, {{0.5}, {0.5}}, {1.0, 1.0}),
                  SessionConfigError);

  SecureSumSession fresh(2, 106);
  CHECK_THROWS_AS(secure_weighted_sum(fresh, {{0.5}}, {1.0}),
                  SessionConfigError);
  SecureSumSession lengths(2, 107);
  CHECK_THROWS_AS(
      secure_weighted_sum(lengths, {{0.5}, {0.5, 0.5}}, {1.0, 1.0}),
      SessionConfigError);
  SecureSumSession negative(2, 108);
  CHECK_THROWS_AS(secure_weighted_sum(negative, {{0.5}, {0.5}}, {1.0, -1.0}),
                  SessionConfigError);
  SecureSumSession range(2, 109);
  CHECK_THROWS_AS(secure_weighted_sum(range, {{1.5}, {0.5}}, {1.0, 1.0}),
                  SessionConfigError);
}

TEST_CASE("overflow risk is rejected at the start of the round") {
  SecureSumSession session(3, 110);
  CHECK_THROWS_AS(secure_weighted_sum(session, {{1.0}, {1.0}, {1.0}},
                                      {1e6, 1e6, 1e6}),
                  SessionConfigError);
  CHECK_THROWS_AS(SecureSumSession(0, 1), SessionConfigError);
  CHECK_THROWS_AS(SecureSumSession(2, 1, SecureSumSession::kDefaultModulus,
                                   1e3),
                  SessionConfigError);
  CHECK_THROWS_AS(SecureSumSession(2, 1, 100, 1e12), SessionConfigError);
}

}  // TEST_SUITE
