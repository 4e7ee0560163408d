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


#include "minimax_agg/data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "minimax_agg/errors.h"
#include "minimax_agg/numeric.h"

namespace minimax_agg {

ParseError::ParseError(const std::string& what, std::size_t row,
                       std::size_t column)
    : Error(what), row_(row), column_(column) {}

namespace {

using nlohmann::json;

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(
        start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string where(const std::string& source, std::size_t row,
                  std::size_t column) {
  std::ostringstream out;
  out << source << ":" << row;
  if (column) out << ":" << column;
  return out.str();
}

// Parses a whole field as a finite real.
bool parse_real(const std::string& text, double& value) {
  if (text.empty()) return false;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  return ec == std::errc() && ptr == end && std::isfinite(value);
}

bool blank(const std::string& line) { return trim(line).empty(); }

std::vector<double> stat_slack_for(std::span<const double> stat_slack,
                                   std::size_t p) {
  for (double v : stat_slack) {
    if (!(v >= 0.0)) throw DomainError("stat_slack must be nonnegative");
  }
  if (stat_slack.size() == 1) return std::vector<double>(p, stat_slack[0]);
  if (stat_slack.size() != p) {
    std::ostringstream msg;
    msg << "stat_slack has " << stat_slack.size()
        << " entries; expected 1 or " << p;
    throw DimensionError(msg.str());
  }
  return {stat_slack.begin(), stat_slack.end()};
}

void check_labels(const EnsembleMatrix& holdout,
                  std::span<const double> labels) {
  if (labels.size() != holdout.examples()) {
    std::ostringstream msg;
    msg << "holdout has " << holdout.examples() << " examples but "
        << labels.size() << " labels";
    throw DimensionError(msg.str());
  }
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (labels[j] != 1.0 && labels[j] != -1.0) {
      std::ostringstream msg;
      msg << "label " << j << " is " << labels[j] << "; labels must be +1 or -1";
      throw DomainError(msg.str());
    }
  }
}

json diagnostics_to_json(const SolveReport& report) {
  return json{{"slack_star", report.slack_star},
              {"game_value", report.game_value},
              {"iters_used", report.iters_used},
              {"converged", report.converged},
              {"infeasible_suspected", report.infeasible_suspected}};
}

}  // namespace

PredictionReader::PredictionReader(std::istream& in, std::string source,
                                   MatrixKind kind)
    : in_(in), source_(std::move(source)), kind_(kind) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (blank(line)) continue;
    header_ = split_csv(line);
    for (std::size_t c = 0; c < header_.size(); ++c) {
      if (header_[c].empty()) {
        throw ParseError(where(source_, line_, c + 1) + ": empty column name",
                         line_, c + 1);
      }
    }
    return;
  }
  throw ParseError(source_ + ": empty file; a header row is required", 0, 0);
}

bool PredictionReader::next(std::vector<double>& row) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (blank(line)) continue;
    const auto fields = split_csv(line);
    if (fields.size() != header_.size()) {
      std::ostringstream msg;
      msg << where(source_, line_, 0) << ": expected " << header_.size()
          << " fields, found " << fields.size();
      throw ParseError(msg.str(), line_, 0);
    }
    row.resize(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (!parse_real(fields[c], row[c])) {
        throw ParseError(where(source_, line_, c + 1) + ": cannot parse '" +
                             fields[c] + "' as a finite real",
                         line_, c + 1);
      }
      if (kind_ == MatrixKind::kRaw && !(row[c] >= -1.0 && row[c] <= 1.0)) {
        std::ostringstream msg;
        msg << where(source_, line_, c + 1) << ": value " << fields[c]
            << " of column '" << header_[c] << "' is outside [-1, 1]";
        throw RangeError(msg.str());
      }
    }
    return true;
  }
  return false;
}

EnsembleMatrix read_predictions(std::istream& in, const std::string& source,
                                MatrixKind kind) {
  PredictionReader reader(in, source, kind);
  EnsembleMatrix matrix(reader.header().size(), 0);
  std::vector<double> row;
  while (reader.next(row)) matrix.push_example(row);
  if (matrix.examples() == 0) {
    throw ParseError(source + ": no data rows after the header", reader.line(),
                     0);
  }
  return matrix;
}

EnsembleMatrix load_predictions(const std::string& path, MatrixKind kind) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_predictions(in, path, kind);
}

Holdout read_holdout(std::istream& in, const std::string& source) {
  PredictionReader reader(in, source, MatrixKind::kTransformed);
  const auto& header = reader.header();
  const auto label_it = std::find(header.begin(), header.end(), "label");
  if (label_it == header.end()) {
    throw ParseError(source + ": holdout needs a 'label' column", 1, 0);
  }
  const std::size_t label_col = label_it - header.begin();
  Holdout out;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != label_col) out.classifiers.push_back(header[c]);
  }
  out.predictions = EnsembleMatrix(out.classifiers.size(), 0);
  std::vector<double> row;
  std::vector<double> x;
  while (reader.next(row)) {
    x.clear();
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c == label_col) continue;
      if (!(row[c] >= -1.0 && row[c] <= 1.0)) {
        std::ostringstream msg;
        msg << where(source, reader.line(), c + 1) << ": value " << row[c]
            << " of column '" << header[c] << "' is outside [-1, 1]";
        throw RangeError(msg.str());
      }
      x.push_back(row[c]);
    }
    if (row[label_col] != 1.0 && row[label_col] != -1.0) {
      throw ParseError(where(source, reader.line(), label_col + 1) +
                           ": label must be +1 or -1",
                       reader.line(), label_col + 1);
    }
    out.predictions.push_example(x);
    out.labels.push_back(row[label_col]);
  }
  if (out.labels.empty()) throw ParseError(source + ": holdout has no rows");
  if (out.classifiers.empty()) {
    throw ParseError(source + ": holdout has no classifier columns");
  }
  return out;
}

Holdout load_holdout(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_holdout(in, path);
}

std::vector<double> estimate_b(const EnsembleMatrix& holdout,
                               std::span<const double> labels,
                               std::span<const double> stat_slack) {
  check_labels(holdout, labels);
  const std::size_t p = holdout.classifiers();
  const std::vector<double> slack = stat_slack_for(stat_slack, p);
  std::vector<double> b(p);
  for (std::size_t i = 0; i < p; ++i) {
    const std::vector<double> h = holdout.classifier(i);
    const double correlation =
        pairwise_dot(h, labels) / static_cast<double>(labels.size());
    b[i] = std::max(-1.0, correlation - slack[i]);
  }
  return b;
}

std::vector<double> estimate_general_loss_bounds(
    const EnsembleMatrix& holdout, std::span<const double> labels,
    const LossSpec& loss, std::span<const double> stat_slack) {
  check_labels(holdout, labels);
  const std::size_t p = holdout.classifiers();
  const std::vector<double> slack = stat_slack_for(stat_slack, p);
  std::vector<double> bounds(p);
  std::vector<double> values(labels.size());
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < labels.size(); ++j) {
      values[j] = pointwise_loss(loss, labels[j], holdout(i, j));
      if (!std::isfinite(values[j])) {
        std::ostringstream msg;
        msg << "loss '" << loss.canonical_name()
            << "' is infinite for classifier " << i << " on holdout example "
            << j << " (prediction " << holdout(i, j) << ", label "
            << labels[j] << ")";
        throw DomainError(msg.str());
      }
    }
    bounds[i] = pairwise_sum(values) / static_cast<double>(labels.size()) +
                slack[i];
  }
  return bounds;
}

std::string model_to_json(const ModelFile& model) {
  json loss{{"name", model.loss.name}};
  if (model.loss.parameter) loss["c"] = *model.loss.parameter;
  if (model.loss.table) {
    const LossTable& t = *model.loss.table;
    loss["table"] = json{{"name", t.name},
                         {"grid", t.grid},
                         {"partial_minus", t.partial_minus},
                         {"partial_plus", t.partial_plus}};
  }
  json doc{{"format_version", model.format_version},
           {"loss", loss},
           {"variant", model.variant},
           {"sigma", model.sigma},
           {"b", model.b},
           {"epsilon", model.epsilon},
           {"weights", model.weights},
           {"loss_bounds", model.loss_bounds},
           {"diagnostics", diagnostics_to_json(model.diagnostics)}};
  return doc.dump(2) + "\n";
}

namespace {

LossTable table_from_json(const json& t) {
  LossTable table;
  table.name = t.at("name").get<std::string>();
  table.grid = t.at("grid").get<std::vector<double>>();
  table.partial_minus = t.at("partial_minus").get<std::vector<double>>();
  table.partial_plus = t.at("partial_plus").get<std::vector<double>>();
  return table;
}

}  // namespace

ModelFile model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("format_version")) {
    throw ParseError("model file lacks format_version");
  }
  ModelFile model;
  try {
    model.format_version = doc.at("format_version").get<int>();
  } catch (const json::exception&) {
    throw ParseError("format_version must be an integer");
  }
  if (model.format_version != ModelFile::kFormatVersion) {
    std::ostringstream msg;
    msg << "model format version " << model.format_version
        << " is not supported; this build reads version "
        << ModelFile::kFormatVersion;
    throw VersionError(msg.str());
  }
  try {
    const json& loss = doc.at("loss");
    const std::string name = loss.at("name").get<std::string>();
    if (loss.contains("table")) {
      model.loss = make_tabulated_loss(table_from_json(loss.at("table")));
    } else if (name == "cw" && loss.contains("c")) {
      model.loss = make_cost_weighted_loss(loss.at("c").get<double>());
    } else {
      model.loss = LossRegistry::builtin().resolve(name);
    }
    model.variant = doc.at("variant").get<std::string>();
    model.sigma = doc.at("sigma").get<std::vector<double>>();
    model.b = doc.at("b").get<std::vector<double>>();
    model.epsilon = doc.value("epsilon", 0.0);
    model.weights = doc.value("weights", std::vector<double>{});
    model.loss_bounds = doc.value("loss_bounds", std::vector<double>{});
    if (doc.contains("diagnostics")) {
      const json& d = doc.at("diagnostics");
      model.diagnostics.slack_star = d.value("slack_star", 0.0);
      model.diagnostics.game_value = d.value("game_value", 0.0);
      model.diagnostics.iters_used = d.value("iters_used", std::size_t{0});
      model.diagnostics.converged = d.value("converged", false);
      model.diagnostics.infeasible_suspected =
          d.value("infeasible_suspected", false);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed model file: ") + e.what());
  }
  model.diagnostics.sigma_star = model.sigma;
  if (model.sigma.size() != model.b.size()) {
    throw ParseError("model file: sigma and b differ in length");
  }
  return model;
}

void save_model(const std::string& path, const ModelFile& model) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << model_to_json(model);
  if (!out) throw ParseError("failed writing '" + path + "'");
}

ModelFile load_model(const std::string& path) {
  return model_from_json(read_file(path));
}

LossTable parse_loss_table(const std::string& text) {
  try {
    return table_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed loss table: ") + e.what());
  }
}

LossTable load_loss_table(const std::string& path) {
  return parse_loss_table(read_file(path));
}

std::vector<double> parse_vector(const std::string& text,
                                 const std::string& source) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::string field;
    std::size_t column = 0;
    while (fields >> field) {
      ++column;
      double v;
      if (!parse_real(field, v)) {
        throw ParseError(where(source, row, column) + ": cannot parse '" +
                             field + "' as a finite real",
                         row, column);
      }
      out.push_back(v);
    }
  }
  if (out.empty()) throw ParseError(source + ": no values found");
  return out;
}

std::vector<double> load_vector(const std::string& path) {
  return parse_vector(read_file(path), path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace minimax_agg
