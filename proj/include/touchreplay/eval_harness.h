#ifndef TOUCHREPLAY_EVAL_HARNESS_H_
#define TOUCHREPLAY_EVAL_HARNESS_H_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "touchreplay/action_classifier.h"

namespace touchreplay {

// Action types in order, one symbol each: "T", "L", "G", or "G2".."G10" for
// multi-finger actions in the extended alphabet.
using ActionTypeSequence = std::vector<std::string>;

// Splits "TTG2L" into {"T", "T", "G2", "L"}. Throws Error(kSchemaViolation)
// on characters outside the alphabet.
ActionTypeSequence parse_symbols(std::string_view text);
std::string join_symbols(const ActionTypeSequence& sequence);

ActionTypeSequence scenario_symbols(const ClassifiedScenario& scenario, bool extended);

std::size_t levenshtein(const ActionTypeSequence& pred, const ActionTypeSequence& truth);
std::size_t lcs_length(const ActionTypeSequence& a, const ActionTypeSequence& b);
// |LCS| / |truth|. Throws Error(kEmptyGroundTruth) for an empty truth.
double lcs_ratio(const ActionTypeSequence& pred, const ActionTypeSequence& truth);

struct TypeScore {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  double precision = 0.0;
  double recall = 0.0;
};

struct PrecisionRecall {
  std::map<std::string, TypeScore> per_type;
  // Averaged over every type seen in either sequence.
  double macro_precision = 0.0;
  double macro_recall = 0.0;
};

// Order-agnostic comparison of the two sequences as bags of action types.
PrecisionRecall precision_recall(const ActionTypeSequence& pred,
                                 const ActionTypeSequence& truth);

struct MetricsReport {
  std::string id;
  ActionTypeSequence predicted;
  ActionTypeSequence truth;
  std::size_t levenshtein = 0;
  double lcs_ratio = 0.0;
  PrecisionRecall precision_recall;
};

MetricsReport evaluate_pair(const ActionTypeSequence& pred, const ActionTypeSequence& truth,
                            std::string id = {});

struct BatchReport {
  std::vector<MetricsReport> pairs;
  double mean_levenshtein = 0.0;
  double mean_lcs_ratio = 0.0;
  double mean_precision = 0.0;
  double mean_recall = 0.0;
};

struct LabeledPair {
  std::string id;
  ActionTypeSequence predicted;
  ActionTypeSequence truth;
};

// Throws Error(kEmptyGroundTruth) for an empty batch or an empty truth.
BatchReport evaluate_batch(const std::vector<LabeledPair>& pairs);

std::string report_to_json(const BatchReport& report);
std::string report_to_table(const BatchReport& report);

// Sequence files hold one "<scenario id> <symbols>" entry per line; blank lines
// and lines starting with '#' are ignored. An empty sequence is written as "-".
std::vector<std::pair<std::string, ActionTypeSequence>> parse_sequence_file(
    std::string_view text);
std::string format_sequence_line(const std::string& id, const ActionTypeSequence& sequence);

// Matches predictions to truths by id, in truth-file order. Throws
// Error(kSchemaViolation) when a truth id has no prediction.
std::vector<LabeledPair> pair_by_id(
    const std::vector<std::pair<std::string, ActionTypeSequence>>& predicted,
    const std::vector<std::pair<std::string, ActionTypeSequence>>& truth);

}  // namespace touchreplay

#endif  // TOUCHREPLAY_EVAL_HARNESS_H_
