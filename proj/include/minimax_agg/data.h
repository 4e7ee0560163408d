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


#ifndef MINIMAX_AGG_DATA_H_
#define MINIMAX_AGG_DATA_H_

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "minimax_agg/game.h"
#include "minimax_agg/losses.h"
#include "minimax_agg/solve_report.h"

namespace minimax_agg {

// Raw matrices hold predictions in [-1, 1]; transformed ones (already
// Gamma-mapped) may hold any finite value.
enum class MatrixKind { kRaw, kTransformed };

// Reads a prediction CSV one example at a time. The first line is a
// mandatory header naming the classifiers; each further line holds one
// example's p predictions. Blank lines are skipped.
class PredictionReader {
 public:
  PredictionReader(std::istream& in, std::string source, MatrixKind kind);

  const std::vector<std::string>& header() const { return header_; }
  // Reads the next example into row. Returns false at end of input.
  bool next(std::vector<double>& row);
  // 1-based line number of the last line read.
  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::string source_;
  MatrixKind kind_;
  std::vector<std::string> header_;
  std::size_t line_ = 0;
};

// Loads a whole prediction CSV (n rows of p values) as the p x n matrix.
EnsembleMatrix read_predictions(std::istream& in, const std::string& source,
                                MatrixKind kind);
EnsembleMatrix load_predictions(const std::string& path, MatrixKind kind);

// A labeled holdout set: a prediction CSV with an extra `label` column of
// +-1 values.
struct Holdout {
  std::vector<std::string> classifiers;
  EnsembleMatrix predictions;
  std::vector<double> labels;
};
Holdout read_holdout(std::istream& in, const std::string& source);
Holdout load_holdout(const std::string& path);

// b_i = (1/m) sum_j h_i(x_j) y_j - stat_slack_i, clamped below at -1.
// stat_slack holds one value for all classifiers or one per classifier.
std::vector<double> estimate_b(const EnsembleMatrix& holdout,
                               std::span<const double> labels,
                               std::span<const double> stat_slack);

// eps_i = (1/m) sum_j l(y_j, h_i(x_j)) + stat_slack_i. Throws DomainError
// naming the cell when a loss value is infinite.
std::vector<double> estimate_general_loss_bounds(
    const EnsembleMatrix& holdout, std::span<const double> labels,
    const LossSpec& loss, std::span<const double> stat_slack);

// A saved model: everything needed to predict, plus solve diagnostics.
struct ModelFile {
  static constexpr int kFormatVersion = 1;
  int format_version = kFormatVersion;
  LossSpec loss;
  std::string variant = "plain";
  std::vector<double> sigma;
  std::vector<double> b;
  double epsilon = 0.0;
  std::vector<double> weights;
  std::vector<double> loss_bounds;
  SolveReport diagnostics;
};

std::string model_to_json(const ModelFile& model);
// Throws VersionError for other format versions, ParseError for malformed
// documents and UnknownLossError for unknown loss names.
ModelFile model_from_json(const std::string& text);
void save_model(const std::string& path, const ModelFile& model);
ModelFile load_model(const std::string& path);

// JSON {"name": ..., "grid": [...], "partial_minus": [...],
// "partial_plus": [...]}.
LossTable parse_loss_table(const std::string& text);
LossTable load_loss_table(const std::string& path);

// Reals separated by commas, whitespace or newlines; '#' starts a comment.
std::vector<double> parse_vector(const std::string& text,
                                 const std::string& source);
std::vector<double> load_vector(const std::string& path);

std::string read_file(const std::string& path);

}  // namespace minimax_agg

#endif  // MINIMAX_AGG_DATA_H_
