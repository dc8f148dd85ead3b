#include "touchreplay/eval_harness.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "touchreplay/error.h"

namespace touchreplay {

namespace {

double safe_ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::map<std::string, std::size_t> bag(const ActionTypeSequence& sequence) {
  std::map<std::string, std::size_t> counts;
  for (const std::string& s : sequence) ++counts[s];
  return counts;
}

std::string format_fixed(double value, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

}  // namespace

ActionTypeSequence parse_symbols(std::string_view text) {
  ActionTypeSequence out;
  if (text == "-") return out;
  for (std::size_t i = 0; i < text.size();) {
    const char c = text[i];
    if (c != 'T' && c != 'L' && c != 'G') {
      throw Error(ErrorCode::kSchemaViolation,
                  "unknown action symbol '" + std::string(1, c) + "' in \"" +
                      std::string(text) + "\"");
    }
    std::size_t j = i + 1;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i + 1 && c != 'G') {
      throw Error(ErrorCode::kSchemaViolation,
                  "finger counts only apply to gestures in \"" + std::string(text) + "\"");
    }
    if (j > i + 1) {
      const std::string digits(text.substr(i + 1, j - i - 1));
      if (digits.size() > 2 || std::stoi(digits) < 2 || std::stoi(digits) > kMaxFingers) {
        throw Error(ErrorCode::kSchemaViolation,
                    "finger count must be 2 to 10 in \"" + std::string(text) + "\"");
      }
    }
    out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string join_symbols(const ActionTypeSequence& sequence) {
  return std::accumulate(sequence.begin(), sequence.end(), std::string());
}

ActionTypeSequence scenario_symbols(const ClassifiedScenario& scenario, bool extended) {
  ActionTypeSequence out;
  for (const ScenarioItem& item : scenario.items) {
    if (const auto* sfa = std::get_if<AtomicAction>(&item)) {
      out.push_back(action_symbol(sfa->kind, 1, extended));
    } else {
      const auto& mfa = std::get<MultiFingerAction>(item);
      out.push_back(extended ? "G" + std::to_string(mfa.finger_count) : "G");
    }
  }
  return out;
}

std::size_t levenshtein(const ActionTypeSequence& pred, const ActionTypeSequence& truth) {
  // Single-row DP; row[j] = distance(pred[0..i), truth[0..j)).
  std::vector<std::size_t> row(truth.size() + 1);
  std::iota(row.begin(), row.end(), 0);
  for (std::size_t i = 1; i <= pred.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= truth.size(); ++j) {
      const std::size_t above = row[j];
      const std::size_t substitute = diagonal + (pred[i - 1] == truth[j - 1] ? 0 : 1);
      row[j] = std::min({above + 1, row[j - 1] + 1, substitute});
      diagonal = above;
    }
  }
  return row.back();
}

std::size_t lcs_length(const ActionTypeSequence& a, const ActionTypeSequence& b) {
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t above = row[j];
      row[j] = a[i - 1] == b[j - 1] ? diagonal + 1 : std::max(above, row[j - 1]);
      diagonal = above;
    }
  }
  return row.back();
}

double lcs_ratio(const ActionTypeSequence& pred, const ActionTypeSequence& truth) {
  if (truth.empty()) {
    throw Error(ErrorCode::kEmptyGroundTruth, "ground-truth sequence is empty");
  }
  return safe_ratio(lcs_length(pred, truth), truth.size());
}

PrecisionRecall precision_recall(const ActionTypeSequence& pred,
                                 const ActionTypeSequence& truth) {
  const auto pred_counts = bag(pred);
  const auto truth_counts = bag(truth);
  std::set<std::string> types;
  for (const auto& [k, _] : pred_counts) types.insert(k);
  for (const auto& [k, _] : truth_counts) types.insert(k);

  PrecisionRecall out;
  if (types.empty()) {
    out.macro_precision = out.macro_recall = 1.0;
    return out;
  }
  for (const std::string& type : types) {
    const std::size_t p = pred_counts.count(type) ? pred_counts.at(type) : 0;
    const std::size_t t = truth_counts.count(type) ? truth_counts.at(type) : 0;
    TypeScore score;
    score.true_positives = std::min(p, t);
    score.false_positives = p - score.true_positives;
    score.false_negatives = t - score.true_positives;
    score.precision = safe_ratio(score.true_positives, p);
    score.recall = safe_ratio(score.true_positives, t);
    out.macro_precision += score.precision;
    out.macro_recall += score.recall;
    out.per_type.emplace(type, score);
  }
  out.macro_precision /= static_cast<double>(types.size());
  out.macro_recall /= static_cast<double>(types.size());
  return out;
}

MetricsReport evaluate_pair(const ActionTypeSequence& pred, const ActionTypeSequence& truth,
                            std::string id) {
  MetricsReport report;
  report.id = std::move(id);
  report.predicted = pred;
  report.truth = truth;
  report.levenshtein = levenshtein(pred, truth);
  report.lcs_ratio = lcs_ratio(pred, truth);
  report.precision_recall = precision_recall(pred, truth);
  return report;
}

BatchReport evaluate_batch(const std::vector<LabeledPair>& pairs) {
  if (pairs.empty()) throw Error(ErrorCode::kEmptyGroundTruth, "no sequences to evaluate");
  BatchReport batch;
  for (const LabeledPair& pair : pairs) {
    batch.pairs.push_back(evaluate_pair(pair.predicted, pair.truth, pair.id));
    const MetricsReport& r = batch.pairs.back();
    batch.mean_levenshtein += static_cast<double>(r.levenshtein);
    batch.mean_lcs_ratio += r.lcs_ratio;
    batch.mean_precision += r.precision_recall.macro_precision;
    batch.mean_recall += r.precision_recall.macro_recall;
  }
  const double n = static_cast<double>(pairs.size());
  batch.mean_levenshtein /= n;
  batch.mean_lcs_ratio /= n;
  batch.mean_precision /= n;
  batch.mean_recall /= n;
  return batch;
}

std::string report_to_json(const BatchReport& report) {
  using nlohmann::json;
  json pairs = json::array();
  for (const MetricsReport& r : report.pairs) {
    json per_type = json::object();
    for (const auto& [type, s] : r.precision_recall.per_type) {
      per_type[type] = {{"tp", s.true_positives},
                        {"fp", s.false_positives},
                        {"fn", s.false_negatives},
                        {"precision", s.precision},
                        {"recall", s.recall}};
    }
    pairs.push_back({{"id", r.id},
                     {"predicted", join_symbols(r.predicted)},
                     {"truth", join_symbols(r.truth)},
                     {"levenshtein", r.levenshtein},
                     {"lcs_ratio", r.lcs_ratio},
                     {"precision", r.precision_recall.macro_precision},
                     {"recall", r.precision_recall.macro_recall},
                     {"per_type", std::move(per_type)}});
  }
  json doc{{"pairs", std::move(pairs)},
           {"mean",
            {{"levenshtein", report.mean_levenshtein},
             {"lcs_ratio", report.mean_lcs_ratio},
             {"precision", report.mean_precision},
             {"recall", report.mean_recall}}}};
  return doc.dump(2) + "\n";
}

std::string report_to_table(const BatchReport& report) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"id", "levenshtein", "lcs_ratio", "precision", "recall"});
  for (const MetricsReport& r : report.pairs) {
    rows.push_back({r.id, std::to_string(r.levenshtein), format_fixed(r.lcs_ratio, 4),
                    format_fixed(r.precision_recall.macro_precision, 4),
                    format_fixed(r.precision_recall.macro_recall, 4)});
  }
  rows.push_back({"mean", format_fixed(report.mean_levenshtein, 4),
                  format_fixed(report.mean_lcs_ratio, 4),
                  format_fixed(report.mean_precision, 4),
                  format_fixed(report.mean_recall, 4)});

  std::vector<std::size_t> widths(rows.front().size(), 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      const std::string& cell = row[c];
      const std::string pad(widths[c] - cell.size(), ' ');
      // Left-align the id column, right-align numbers.
      out += c == 0 ? cell + pad : pad + cell;
      out += c + 1 == row.size() ? "\n" : "  ";
    }
  }
  return out;
}

std::vector<std::pair<std::string, ActionTypeSequence>> parse_sequence_file(
    std::string_view text) {
  std::vector<std::pair<std::string, ActionTypeSequence>> out;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
      line.remove_suffix(1);
    }
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) {
      line.remove_prefix(1);
    }
    if (line.empty() || line.front() == '#') continue;
    const std::size_t space = line.find_first_of(" \t");
    if (space == std::string_view::npos) {
      throw Error(ErrorCode::kSchemaViolation,
                  "line " + std::to_string(line_no) + ": expected '<id> <symbols>'");
    }
    std::string_view symbols = line.substr(space + 1);
    while (!symbols.empty() && std::isspace(static_cast<unsigned char>(symbols.front()))) {
      symbols.remove_prefix(1);
    }
    std::string id(line.substr(0, space));
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::kSchemaViolation,
                  "line " + std::to_string(line_no) + ": duplicate id '" + id + "'");
    }
    out.emplace_back(std::move(id), parse_symbols(symbols));
  }
  return out;
}

std::string format_sequence_line(const std::string& id, const ActionTypeSequence& sequence) {
  return id + " " + (sequence.empty() ? std::string("-") : join_symbols(sequence)) + "\n";
}

std::vector<LabeledPair> pair_by_id(
    const std::vector<std::pair<std::string, ActionTypeSequence>>& predicted,
    const std::vector<std::pair<std::string, ActionTypeSequence>>& truth) {
  std::unordered_map<std::string, const ActionTypeSequence*> by_id;
  for (const auto& [id, seq] : predicted) by_id[id] = &seq;
  std::vector<LabeledPair> pairs;
  for (const auto& [id, seq] : truth) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kSchemaViolation, "no prediction for scenario '" + id + "'");
    }
    pairs.push_back({id, *it->second, seq});
  }
  return pairs;
}

}  // namespace touchreplay
