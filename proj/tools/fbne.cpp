#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fbne/bif.hpp"
#include "fbne/csv.hpp"
#include "fbne/harness.hpp"
#include "fbne/inference.hpp"

namespace {

void print_scenario(const fbne::ScenarioResult& result) {
  if (result.skipped) {
    std::printf("%s: skipped (%s)\n", result.scenario_id.c_str(),
                result.skip_reason.c_str());
    return;
  }
  std::printf("%s\n", result.scenario_id.c_str());
  double best = -1.0;
  for (const fbne::ModelSummary& m : result.models) {
    if (!std::isnan(m.mean_auc) && m.mean_auc > best) best = m.mean_auc;
  }
  for (const fbne::ModelSummary& m : result.models) {
    const char mark =
        (!std::isnan(m.mean_auc) && m.mean_auc == best) ? '*' : ' ';
    if (std::isnan(m.mean_auc)) {
      std::printf("%c %-24s n/a\n", mark, m.model.c_str());
    } else {
      std::printf("%c %-24s %.6f +/- %.6f\n", mark, m.model.c_str(),
                  m.mean_auc, m.stddev_auc);
    }
  }
}

void print_model(const fbne::BayesianNetwork& net) {
  std::printf("%d variables\n\n", net.node_count());
  for (int i = 0; i < net.node_count(); ++i) {
    const fbne::Variable& var = net.variable(i);
    std::printf("%s (", var.name.c_str());
    for (std::size_t s = 0; s < var.states.size(); ++s) {
      std::printf("%s%s", s ? " " : "", var.states[s].c_str());
    }
    std::printf(")");
    const std::vector<int>& parents = net.parents(i);
    if (parents.empty()) {
      std::printf(", no parents\n");
    } else {
      std::printf(", parents:");
      for (int p : parents) std::printf(" %s", net.variable(p).name.c_str());
      std::printf("\n");
    }
    const fbne::Cpt& cpt = net.cpt(i);
    for (std::size_t row = 0; row < cpt.rows.size(); ++row) {
      if (parents.empty()) {
        std::printf("  ");
      } else {
        // Decode the row index back into parent states, last parent
        // fastest.
        std::vector<int> states(parents.size());
        std::size_t rem = row;
        for (int d = static_cast<int>(parents.size()) - 1; d >= 0; --d) {
          const int card = net.variable(parents[d]).cardinality();
          states[d] = static_cast<int>(rem % card);
          rem /= card;
        }
        std::printf("  (");
        for (std::size_t d = 0; d < parents.size(); ++d) {
          std::printf("%s%s", d ? " " : "",
                      net.variable(parents[d]).states[states[d]].c_str());
        }
        std::printf(") ");
      }
      for (double v : cpt.rows[row]) std::printf(" %.6g", v);
      std::printf("\n");
    }
    std::printf("\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated Bayesian network ensemble simulator"};
  app.require_subcommand(1);

  std::string run_config;
  CLI::App* run = app.add_subcommand("run", "Run one scenario config");
  run->add_option("--config", run_config, "Scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);

  std::string grid_config;
  int jobs = 1;
  CLI::App* grid = app.add_subcommand("grid", "Run a scenario grid");
  grid->add_option("--config", grid_config, "Grid JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  grid->add_option("--jobs", jobs, "Concurrent grid cells")
      ->check(CLI::PositiveNumber);

  int gen_n = 10000;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  CLI::App* gen =
      app.add_subcommand("gen-asia", "Sample the chest-clinic network to CSV");
  gen->add_option("--n", gen_n, "Record count")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "Sampling seed");
  gen->add_option("--out", gen_out, "Output CSV path")->required();

  std::string model_path;
  CLI::App* inspect =
      app.add_subcommand("inspect-model", "Print a BIF model's structure");
  inspect->add_option("model", model_path, "BIF file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      print_scenario(fbne::run_scenario(fbne::load_scenario(run_config)));
    } else if (grid->parsed()) {
      const fbne::GridOutcome outcome = fbne::run_grid(grid_config, jobs);
      std::printf("grid: %d executed, %d resumed, %d skipped\n",
                  outcome.executed, outcome.resumed, outcome.skipped);
    } else if (gen->parsed()) {
      fbne::write_csv(fbne::forward_sample(fbne::builtin_asia(), gen_n,
                                           gen_seed),
                      gen_out);
      std::printf("wrote %d records to %s\n", gen_n, gen_out.c_str());
    } else if (inspect->parsed()) {
      print_model(fbne::load_bif(fbne::resolve_data_path(model_path)));
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
