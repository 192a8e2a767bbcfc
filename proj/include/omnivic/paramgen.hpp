#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "omnivic/impedance.hpp"
#include "omnivic/remote.hpp"
#include "omnivic/retrieval.hpp"

namespace omnivic {

// Assembled prompt: a fixed system preamble plus the rendered task context.
// exemplar_blocks hold the formatted reference-example sections in rank
// order, at most five.
struct PromptBundle {
  std::string system_preamble;
  std::string instruction;
  Phase phase{Phase::FreeMotion};
  std::array<double, 6> twist{};
  std::array<double, 6> wrench{};
  ImpedanceRange impedance_range;
  std::vector<std::string> exemplar_blocks;

  // The user-message body (everything after the preamble).
  std::string body() const;
  // Preamble + blank line + body; this is what golden tests pin down.
  std::string render() const;
};

enum class BackendTag { Remote, Heuristic };

struct GeneratorOutput {
  Vector3 k_trans{Vector3::Zero()};
  Vector3 d_trans{Vector3::Zero()};
  std::string raw_response;  // model text, fallback reason, or empty
  BackendTag backend_tag{BackendTag::Heuristic};
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what, std::string raw)
      : std::runtime_error(what), raw_response(std::move(raw)) {}
  std::string raw_response;
};

struct HeuristicConfig {
  double resistance_threshold_n{2.0};
  double increase{1.25};
  double decrease{0.85};
  double blend{0.5};  // weight of the rule value against the exemplar mean
};

// Renders the in-context prompt for one control step. Exemplars must be
// sorted by descending aggregate score and number at most five; violating
// either is a contract violation. Numeric fields are rendered at 4
// significant digits so renders are stable enough to pin with golden files.
PromptBundle build_prompt(const QueryContext& query,
                          const std::vector<Exemplar>& exemplars,
                          const ImpedanceRange& range);

// Extracts the first "K = [a, b, c]" and "D = [a, b, c]" patterns
// (whitespace-tolerant, plain decimal or scientific numbers) and clamps the
// values into the range. Throws ParseError, carrying the raw text, when
// either pattern is missing or malformed.
GeneratorOutput parse_response(const std::string& text,
                               const ImpedanceRange& range);

// Canonical text form of an output, chosen so that parse_response recovers
// the exact same values.
std::string render_output(const GeneratorOutput& output);

// Deterministic backend encoding the prompt's stated rules as a fixed
// numeric schedule: phase picks a base stiffness (free motion highest,
// contact lowest), the dominant motion axis is softened unless it is
// fighting a noticeable opposing force, and exemplar gains are blended in
// weighted by their aggregate similarity. Damping derives from the final
// stiffness. Pure function of its inputs.
GeneratorOutput heuristic_generate(const QueryContext& query,
                                   const std::vector<Exemplar>& exemplars,
                                   const ImpedanceRange& range,
                                   const HeuristicConfig& config = {});

// Sends the rendered prompt to a chat endpoint and parses the reply. On
// transport failure (after the endpoint's retry budget) or an unparseable
// reply, degrades to heuristic_generate, tagging the output Heuristic and
// recording the failure reason in raw_response. Never throws for backend
// trouble; an episode must always get gains.
GeneratorOutput remote_generate(const QueryContext& query,
                                const std::vector<Exemplar>& exemplars,
                                const ImpedanceRange& range,
                                const EndpointConfig& endpoint,
                                const std::optional<std::string>& image_b64 = {});

}  // namespace omnivic
