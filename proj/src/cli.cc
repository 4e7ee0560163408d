// Copyright 2026 The minimax-agg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "minimax_agg/cli.h"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "minimax_agg/data.h"
#include "minimax_agg/errors.h"
#include "minimax_agg/game.h"
#include "minimax_agg/losses.h"
#include "minimax_agg/numeric.h"
#include "minimax_agg/optimize.h"
#include "minimax_agg/oracle.h"

namespace minimax_agg {
namespace {

std::string number(double v) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

using Value = std::variant<std::string, double, std::int64_t, bool>;
using Record = std::vector<std::pair<std::string, Value>>;

// Writes records as CSV (header from the first record) or JSON lines.
class Emitter {
 public:
  Emitter(std::ostream& out, std::string format)
      : out_(out), jsonl_(format == "jsonl") {}

  void emit(const Record& record) {
    if (jsonl_) {
      nlohmann::ordered_json doc = nlohmann::ordered_json::object();
      for (const auto& [key, value] : record) {
        std::visit([&, &k = key](const auto& v) { doc[k] = v; }, value);
      }
      out_ << doc.dump() << '\n';
      return;
    }
    if (!header_done_) {
      for (std::size_t k = 0; k < record.size(); ++k) {
        out_ << (k ? "," : "") << record[k].first;
      }
      out_ << '\n';
      header_done_ = true;
    }
    for (std::size_t k = 0; k < record.size(); ++k) {
      out_ << (k ? "," : "") << field(record[k].second);
    }
    out_ << '\n';
  }

 private:
  static std::string field(const Value& value) {
    if (const auto* s = std::get_if<std::string>(&value)) {
      if (s->find_first_of(",\"\n") == std::string::npos) return *s;
      std::string quoted = "\"";
      for (char ch : *s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
      }
      return quoted + "\"";
    }
    if (const auto* d = std::get_if<double>(&value)) return number(*d);
    if (const auto* i = std::get_if<std::int64_t>(&value)) {
      return std::to_string(*i);
    }
    return std::get<bool>(value) ? "true" : "false";
  }

  std::ostream& out_;
  bool jsonl_;
  bool header_done_ = false;
};

struct Config {
  std::string loss = "zero_one";
  double c = 0.5;
  bool c_given = false;
  std::string loss_file;
  std::string variant = "plain";
  double epsilon = 0.0;
  std::string weights;
  std::string b;
  std::string loss_bounds;
  std::string holdout;
  std::string stat_slack = "0";
  std::string predictions;
  std::string model;
  std::string out;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string format = "csv";
  std::string step_rule = "inv_sqrt";
  SolveOptions solve;
  std::vector<double> table;
};

// A vector given inline ("0.5,0.25") or as the path of a file.
std::vector<double> vector_argument(const std::string& text,
                                    const std::string& flag) {
  if (std::filesystem::is_regular_file(text)) return load_vector(text);
  return parse_vector(text, flag);
}

LossSpec resolve_loss(const Config& cfg) {
  if (!cfg.loss_file.empty()) {
    return make_tabulated_loss(load_loss_table(cfg.loss_file));
  }
  if (cfg.c_given) {
    if (cfg.loss != "cw") {
      throw UnknownLossError("--c applies only to the cw loss");
    }
    return make_cost_weighted_loss(cfg.c);
  }
  return LossRegistry::builtin().resolve(cfg.loss);
}

SolveOptions solve_options(const Config& cfg) {
  SolveOptions options = cfg.solve;
  options.seed = cfg.seed;
  options.step_rule =
      cfg.step_rule == "fixed" ? StepRule::kFixed : StepRule::kInvSqrt;
  return options;
}

void check_holdout_width(const Holdout& holdout, std::size_t p) {
  if (holdout.predictions.classifiers() != p) {
    std::ostringstream msg;
    msg << "holdout has " << holdout.predictions.classifiers()
        << " classifier columns; the predictions have " << p;
    throw DimensionError(msg.str());
  }
}

EnsembleProblem build_problem(const Config& cfg) {
  if (cfg.predictions.empty()) throw DimensionError("--predictions is required");
  LossSpec loss = resolve_loss(cfg);
  EnsembleMatrix raw = load_predictions(cfg.predictions, MatrixKind::kRaw);
  const std::size_t p = raw.classifiers();
  const std::vector<double> stat_slack =
      vector_argument(cfg.stat_slack, "--stat-slack");

  if (cfg.variant == "general") {
    std::vector<double> bounds;
    if (!cfg.loss_bounds.empty()) {
      bounds = vector_argument(cfg.loss_bounds, "--loss-bounds");
    } else if (!cfg.holdout.empty()) {
      const Holdout holdout = load_holdout(cfg.holdout);
      check_holdout_width(holdout, p);
      bounds = estimate_general_loss_bounds(holdout.predictions,
                                            holdout.labels, loss, stat_slack);
    } else {
      throw DimensionError(
          "the general variant needs --loss-bounds or --holdout");
    }
    EnsembleProblem problem =
        EnsembleProblem::general_loss(raw, std::move(bounds), std::move(loss));
    problem.set_threads(cfg.threads);
    return problem;
  }

  std::vector<double> b;
  if (!cfg.b.empty()) {
    b = vector_argument(cfg.b, "--b");
  } else if (!cfg.holdout.empty()) {
    const Holdout holdout = load_holdout(cfg.holdout);
    check_holdout_width(holdout, p);
    b = estimate_b(holdout.predictions, holdout.labels, stat_slack);
  } else {
    throw DimensionError("--b or --holdout is required");
  }
  Variant variant = PlainVariant{};
  if (cfg.variant == "weighted") {
    if (cfg.weights.empty()) {
      throw DimensionError("the weighted variant needs --weights");
    }
    variant = WeightedVariant{vector_argument(cfg.weights, "--weights")};
  } else if (cfg.variant == "uncertainty") {
    variant = UncertaintyVariant{cfg.epsilon};
  }
  EnsembleProblem problem(std::move(raw), std::move(b), std::move(variant),
                          std::move(loss));
  problem.set_threads(cfg.threads);
  return problem;
}

ModelFile make_model(const EnsembleProblem& problem,
                     const SolveReport& report) {
  ModelFile model;
  model.loss = problem.loss();
  model.variant = variant_name(problem.variant());
  model.sigma = report.sigma_star;
  model.b = problem.b();
  model.diagnostics = report;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, WeightedVariant>) model.weights = v.r;
        if constexpr (std::is_same_v<T, UncertaintyVariant>) {
          model.epsilon = v.epsilon;
        }
        if constexpr (std::is_same_v<T, GeneralLossVariant>) {
          model.loss_bounds = v.loss_bounds;
        }
      },
      problem.variant());
  return model;
}

Record report_record(const EnsembleProblem& problem,
                     const SolveReport& report) {
  return {{"loss", problem.loss().canonical_name()},
          {"variant", variant_name(problem.variant())},
          {"p", static_cast<std::int64_t>(problem.classifiers())},
          {"n", static_cast<std::int64_t>(problem.examples())},
          {"game_value", report.game_value},
          {"slack", report.slack_star},
          {"iterations", static_cast<std::int64_t>(report.iters_used)},
          {"converged", report.converged},
          {"infeasible_suspected", report.infeasible_suspected}};
}

int cmd_losses(const Config& cfg, std::ostream& out) {
  Emitter emit(out, cfg.format);
  if (!cfg.table.empty()) {
    const LossSpec loss = resolve_loss(cfg);
    const double lo = cfg.table[0];
    const double hi = cfg.table[1];
    const double steps = cfg.table[2];
    if (!(steps >= 2.0) || steps != std::floor(steps) || !(hi > lo)) {
      throw DomainError("--table needs m_lo < m_hi and an integer steps >= 2");
    }
    const auto count = static_cast<std::int64_t>(steps);
    for (std::int64_t k = 0; k < count; ++k) {
      // Symmetric in k so that a symmetric range gives exactly opposite m.
      const double t = static_cast<double>(k) / static_cast<double>(count - 1);
      const double m = k == count - 1 ? hi : lo + (hi - lo) * t;
      emit.emit({{"m", m},
                 {"psi", potential_well(loss, m)},
                 {"g", predict_one(loss, m)}});
    }
    return kExitSuccess;
  }
  const LossRegistry& registry = LossRegistry::builtin();
  auto row = [&](const std::string& name, const LossSpec& loss,
                 const std::string& alias_of) {
    emit.emit({{"name", name},
               {"gamma_lo", loss.gamma_lo},
               {"gamma_hi", loss.gamma_hi},
               {"closed_forms", loss.has_closed_forms()},
               {"symmetric", loss.symmetric},
               {"alias_of", alias_of}});
  };
  for (const auto& name : registry.names()) {
    row(name, registry.resolve(name), "");
  }
  for (const auto& [alias, target] : registry.aliases()) {
    row(alias, registry.resolve(alias), target);
  }
  return kExitSuccess;
}

int cmd_learn(const Config& cfg, std::ostream& out) {
  const EnsembleProblem problem = build_problem(cfg);
  const SolveReport report = minimize_slack(problem, solve_options(cfg));
  Record record = report_record(problem, report);
  if (!report.infeasible_suspected && !cfg.out.empty()) {
    save_model(cfg.out, make_model(problem, report));
    record.emplace_back("model", cfg.out);
  }
  Emitter(out, cfg.format).emit(record);
  return report.infeasible_suspected ? kExitInfeasible : kExitSuccess;
}

int cmd_predict(const Config& cfg, std::ostream& out) {
  if (cfg.model.empty()) throw DimensionError("--model is required");
  if (cfg.predictions.empty()) throw DimensionError("--predictions is required");
  const ModelFile model = load_model(cfg.model);
  std::vector<double> weights;
  if (model.variant == "weighted") {
    if (cfg.weights.empty()) {
      throw DimensionError("a weighted model needs --weights to predict");
    }
    weights = vector_argument(cfg.weights, "--weights");
  }
  const bool general = model.variant == "general";
  std::ifstream in(cfg.predictions);
  if (!in) throw ParseError("cannot open '" + cfg.predictions + "'");
  PredictionReader reader(in, cfg.predictions, MatrixKind::kRaw);
  const std::size_t p = model.sigma.size();
  if (reader.header().size() != p) {
    std::ostringstream msg;
    msg << "model expects " << p << " classifiers; '" << cfg.predictions
        << "' has " << reader.header().size();
    throw DimensionError(msg.str());
  }
  Emitter emit(out, cfg.format);
  std::vector<double> x;
  std::int64_t index = 0;
  while (reader.next(x)) {
    if (general) {
      for (std::size_t i = 0; i < p; ++i) {
        x[i] = score(model.loss, x[i]);
        if (!std::isfinite(x[i])) {
          throw DomainError("infinite score at example " +
                            std::to_string(index) + ", classifier " +
                            std::to_string(i));
        }
      }
    }
    double m = pairwise_dot(x, model.sigma);
    if (!weights.empty()) {
      if (static_cast<std::size_t>(index) >= weights.size()) {
        throw DimensionError("fewer weights than prediction rows");
      }
      const double r = weights[index];
      m = r == 0.0 ? 0.0 : m / r;
    }
    emit.emit({{"index", index}, {"margin", m}, {"g", predict_one(model.loss, m)}});
    ++index;
  }
  if (!weights.empty() && static_cast<std::size_t>(index) != weights.size()) {
    throw DimensionError("weights and prediction rows differ in count");
  }
  return kExitSuccess;
}

Record grid_record(const EnsembleProblem& problem, const SolveReport& report,
                   const GridResult& grid) {
  const double diff = std::abs(report.game_value - grid.value);
  return {{"property", std::string("oracle")},
          {"pass", diff <= grid.tolerance},
          {"solver_value", report.game_value},
          {"grid_value", grid.value},
          {"tolerance", grid.tolerance},
          {"difference", diff},
          {"loss", problem.loss().canonical_name()}};
}

bool grid_applicable(const EnsembleProblem& problem) {
  const GridSpec spec;
  return problem.examples() <= spec.max_n &&
         problem.classifiers() <= spec.max_p &&
         (std::holds_alternative<PlainVariant>(problem.variant()) ||
          std::holds_alternative<GeneralLossVariant>(problem.variant()));
}

int cmd_check(const Config& cfg, std::ostream& out) {
  const EnsembleProblem problem = build_problem(cfg);
  const SolveOptions options = solve_options(cfg);
  const SolveReport report = minimize_slack(problem, options);
  if (report.infeasible_suspected) {
    throw InfeasibleError("constraints appear infeasible");
  }
  const ConvexMinimizer minimizer = make_minimizer(options);
  Emitter emit(out, cfg.format);
  bool all = true;
  auto record = [&](const std::string& property, bool pass, double a,
                    double b, double c) {
    all = all && pass;
    emit.emit({{"property", property},
               {"pass", pass},
               {"lower", a},
               {"value", b},
               {"upper", c}});
  };

  for (const auto& z0 : feasible_z_sample(problem, 3, cfg.seed)) {
    const SandwichResult s = sandwich_check(problem, report, z0, minimizer);
    record("sandwich", s.pass, s.lower, s.value, s.upper);
  }
  std::mt19937_64 rng(cfg.seed);
  const double low = problem.sign_constrained() ? 0.0 : -2.0;
  std::uniform_real_distribution<double> draw(low, 2.0);
  for (int k = 0; k < 5; ++k) {
    std::vector<double> sigma0(problem.classifiers());
    for (double& v : sigma0) v = draw(rng);
    const ObservationResult o = observation_check(problem, sigma0, minimizer);
    record("observation", o.pass, o.best_response, o.best_response,
           o.half_slack);
  }
  if (std::holds_alternative<GeneralLossVariant>(problem.variant())) {
    const PropositionResult r = proposition_check(problem, report);
    record("proposition", r.pass, r.value, r.value, r.min_loss_bound);
  }
  if (grid_applicable(problem)) {
    const GridResult grid = grid_minimax(problem, GridSpec{});
    const double diff = std::abs(report.game_value - grid.value);
    record("oracle", diff <= grid.tolerance, grid.lower, report.game_value,
           grid.value);
  }
  return all ? kExitSuccess : kExitCheckFailed;
}

int cmd_oracle(const Config& cfg, std::ostream& out) {
  const EnsembleProblem problem = build_problem(cfg);
  GridSpec spec;
  const GridResult grid = grid_minimax(problem, spec);
  const SolveReport report = minimize_slack(problem, solve_options(cfg));
  const Record record = grid_record(problem, report, grid);
  Emitter(out, cfg.format).emit(record);
  return std::get<bool>(record[1].second) ? kExitSuccess : kExitCheckFailed;
}

int cmd_estimate(const Config& cfg, std::ostream& out) {
  if (cfg.holdout.empty()) throw DimensionError("--holdout is required");
  const Holdout holdout = load_holdout(cfg.holdout);
  const std::vector<double> stat_slack =
      vector_argument(cfg.stat_slack, "--stat-slack");
  const bool general = cfg.variant == "general";
  const std::vector<double> values =
      general ? estimate_general_loss_bounds(holdout.predictions,
                                             holdout.labels, resolve_loss(cfg),
                                             stat_slack)
              : estimate_b(holdout.predictions, holdout.labels, stat_slack);
  Emitter emit(out, cfg.format);
  for (std::size_t i = 0; i < values.size(); ++i) {
    emit.emit({{"classifier", holdout.classifiers[i]},
               {general ? "loss_bound" : "b", values[i]}});
  }
  if (!cfg.out.empty()) {
    std::ofstream file(cfg.out);
    if (!file) throw ParseError("cannot write '" + cfg.out + "'");
    for (double v : values) file << number(v) << '\n';
  }
  return kExitSuccess;
}

void add_output_flags(CLI::App* sub, Config& cfg) {
  sub->add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"csv", "jsonl"}));
}

void add_loss_flags(CLI::App* sub, Config& cfg) {
  sub->add_option("--loss", cfg.loss,
                  "Loss name; cw:<c> selects the cost-weighted loss");
  sub->add_option("--c", cfg.c, "Parameter c of the cw loss")
      ->each([&cfg](const std::string&) { cfg.c_given = true; });
  sub->add_option("--loss-file", cfg.loss_file,
                  "JSON table of a user-defined loss");
}

void add_problem_flags(CLI::App* sub, Config& cfg) {
  add_loss_flags(sub, cfg);
  add_output_flags(sub, cfg);
  sub->add_option("--predictions", cfg.predictions, "Prediction CSV");
  sub->add_option("--variant", cfg.variant, "Problem variant")
      ->check(CLI::IsMember({"plain", "weighted", "uncertainty", "general"}));
  sub->add_option("--epsilon", cfg.epsilon, "Uncertainty radius");
  sub->add_option("--weights", cfg.weights,
                  "Example weights, inline list or file");
  sub->add_option("--b", cfg.b, "Correlation bounds, inline list or file");
  sub->add_option("--loss-bounds", cfg.loss_bounds,
                  "Per-classifier loss bounds, inline list or file");
  sub->add_option("--holdout", cfg.holdout,
                  "Labeled holdout CSV with a 'label' column");
  sub->add_option("--stat-slack", cfg.stat_slack,
                  "Slack subtracted from estimated b (added to loss bounds)");
  sub->add_option("--seed", cfg.seed, "Seed for all randomness");
  sub->add_option("--threads", cfg.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  sub->add_option("--max-iters", cfg.solve.max_iters, "Iteration budget");
  sub->add_option("--step-rule", cfg.step_rule, "Step-size rule")
      ->check(CLI::IsMember({"inv_sqrt", "fixed"}));
  sub->add_option("--step-size", cfg.solve.step_size,
                  "eta (fixed) or eta_0 (inv_sqrt); 0 picks 1/max ||x_j||");
  sub->add_option("--stop-tol", cfg.solve.stop_tol,
                  "Best-value improvement per window below which to stop");
  sub->add_option("--sigma-cap", cfg.solve.sigma_cap,
                  "Norm beyond which a decreasing slack means infeasible");
  sub->add_flag("--stochastic", cfg.solve.stochastic,
                "Per-example stochastic subgradients");
  sub->add_option("--batch-size", cfg.solve.batch_size,
                  "Minibatch size for --stochastic");
}

int dispatch(int argc, const char* const* argv, std::ostream& out) {
  Config cfg;
  CLI::App app{"Minimax-optimal aggregation of binary classifier ensembles"};
  app.set_config("--config", "", "TOML or INI file of option values");
  app.require_subcommand(1);

  CLI::App* losses = app.add_subcommand("losses", "List the built-in losses");
  add_loss_flags(losses, cfg);
  add_output_flags(losses, cfg);
  losses->add_option("--table", cfg.table,
                     "Emit m, Psi(m), g(m) for m_lo m_hi steps")
      ->expected(3);

  CLI::App* learn = app.add_subcommand("learn", "Solve for the weights");
  add_problem_flags(learn, cfg);
  learn->add_option("--out", cfg.out, "Model file to write");

  CLI::App* predict_cmd =
      app.add_subcommand("predict", "Predict from a saved model");
  add_output_flags(predict_cmd, cfg);
  predict_cmd->add_option("--model", cfg.model, "Model file")->required();
  predict_cmd->add_option("--predictions", cfg.predictions, "Prediction CSV")
      ->required();
  predict_cmd->add_option("--weights", cfg.weights,
                          "Example weights for a weighted model");

  CLI::App* check = app.add_subcommand("check", "Certify a solved problem");
  add_problem_flags(check, cfg);

  CLI::App* oracle =
      app.add_subcommand("oracle", "Compare the solver with the grid oracle");
  add_problem_flags(oracle, cfg);

  CLI::App* estimate =
      app.add_subcommand("estimate", "Estimate b or loss bounds from a holdout");
  add_loss_flags(estimate, cfg);
  add_output_flags(estimate, cfg);
  estimate->add_option("--holdout", cfg.holdout, "Labeled holdout CSV")
      ->required();
  estimate->add_option("--stat-slack", cfg.stat_slack, "Statistical slack");
  estimate->add_option("--variant", cfg.variant, "plain or general")
      ->check(CLI::IsMember({"plain", "general"}));
  estimate->add_option("--out", cfg.out, "File for the estimates");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kExitSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitSuccess;
  }

  if (*losses) return cmd_losses(cfg, out);
  if (*learn) return cmd_learn(cfg, out);
  if (*predict_cmd) return cmd_predict(cfg, out);
  if (*check) return cmd_check(cfg, out);
  if (*oracle) return cmd_oracle(cfg, out);
  return cmd_estimate(cfg, out);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  try {
    return dispatch(argc, argv, out);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace minimax_agg
