#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace tracemc {

enum class DistId { normal, gamma, discrete };

inline const char* dist_id_name(DistId id) {
  switch (id) {
    case DistId::normal: return "normal";
    case DistId::gamma: return "gamma";
    case DistId::discrete: return "discrete";
  }
  return "?";
}

// One recorded random choice. Replay feeds `value` back to the program
// instead of drawing fresh; dist_id (and, in debug builds, params) guard
// against the program taking a different path on re-execution.
struct ChoiceRecord {
  std::uint32_t index = 0;  // ordinal among the trace's choices, from 0
  DistId dist_id = DistId::normal;
  std::vector<double> params;
  double value = 0.0;

  friend bool operator==(const ChoiceRecord&, const ChoiceRecord&) = default;
};

// One predict output: the rendered text is frozen at emission time so every
// downstream consumer (CSV, evaluation) sees identical bytes.
struct PredictRecord {
  std::string name;
  std::string value;
  int observe_index = 0;  // observes passed when this predict was emitted

  friend bool operator==(const PredictRecord&, const PredictRecord&) = default;
};

// Complete record of one program execution: the random choices made, the
// per-observe log-likelihood increments, and the predict outputs.
//
// choices_at_observe[i] is the number of choices recorded at the moment
// observe i (0-based) contributed its increment; the prefix of `choices` of
// that length is the replayable checkpoint for the barrier after observe i.
struct ExecutionTrace {
  std::vector<ChoiceRecord> choices;
  int observe_count = 0;
  std::vector<double> observe_logw;
  std::vector<std::size_t> choices_at_observe;
  std::vector<PredictRecord> predicts;

  friend bool operator==(const ExecutionTrace&, const ExecutionTrace&) = default;
};

// Prefix length of the checkpoint at the barrier where `observes` observes
// have been passed (0 for the launch barrier).
inline std::size_t checkpoint_prefix_len(const ExecutionTrace& t, int observes) {
  return observes == 0 ? 0 : t.choices_at_observe.at(observes - 1);
}

}  // namespace tracemc
