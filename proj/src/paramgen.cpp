#include "omnivic/paramgen.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

#include "omnivic/number_format.hpp"

namespace omnivic {

namespace {

constexpr const char* kPreamble =
    "You are an expert robotic impedance controller capable of analyzing "
    "visual scenes and physical interaction states.";

std::string render_six(const std::array<double, 6>& v) {
  std::string out = "[";
  for (int i = 0; i < 6; ++i) {
    if (i) out += ", ";
    out += format_sig(v[i], 4);
  }
  out += "]";
  return out;
}

std::string render_three(const Vector3& v) {
  std::string out = "[";
  for (int i = 0; i < 3; ++i) {
    if (i) out += ", ";
    out += format_sig(v[i], 4);
  }
  out += "]";
  return out;
}

std::array<double, 6> pack(const Vector3& a, const Vector3& b) {
  return {a.x(), a.y(), a.z(), b.x(), b.y(), b.z()};
}

}  // namespace

std::string PromptBundle::body() const {
  std::string s;
  s += "Given the instruction, current phase, twist, wrench, and impedance "
       "range below, determine optimal impedance parameters.\n\n";
  s += "Instruction: " + instruction + "\n";
  s += "Phase: ";
  s += to_string(phase);
  s += "\n";
  s += "Twist: " + render_six(twist) + "\n";
  s += "Wrench: " + render_six(wrench) + "\n";
  s += "Impedance range: stiffness [" + format_sig(impedance_range.k_min, 4) +
       ", " + format_sig(impedance_range.k_max, 4) + "] N/m, damping [" +
       format_sig(impedance_range.d_min, 4) + ", " +
       format_sig(impedance_range.d_max, 4) + "] N*s/m\n\n";
  s += "Apply phase-based impedance principles:\n"
       "- Highest for free motion (precise control)\n"
       "- Lowest for contact (maximum compliance)\n\n";
  s += "Consider motion direction adaptation:\n"
       "- Increase stiffness in the primary motion direction when overcoming "
       "resistance.\n"
       "- Decrease stiffness in the primary motion direction when maintaining "
       "accuracy.\n\n";
  for (const auto& block : exemplar_blocks) {
    s += block;
    s += "\n";
  }
  s += "Output: K = [K_x, K_y, K_z], D = [D_x, D_y, D_z]\n";
  return s;
}

std::string PromptBundle::render() const {
  return system_preamble + "\n\n" + body();
}

PromptBundle build_prompt(const QueryContext& query,
                          const std::vector<Exemplar>& exemplars,
                          const ImpedanceRange& range) {
  range.validate();
  if (exemplars.size() > 5) {
    throw std::invalid_argument("build_prompt: more than 5 exemplars");
  }
  for (std::size_t i = 1; i < exemplars.size(); ++i) {
    if (exemplars[i - 1].aggregate < exemplars[i].aggregate) {
      throw std::invalid_argument(
          "build_prompt: exemplars must be sorted by descending aggregate");
    }
  }

  PromptBundle p;
  p.system_preamble = kPreamble;
  p.instruction = query.instruction_text;
  p.phase = query.phase;
  p.twist = pack(query.twist.linear, query.twist.angular);
  p.wrench = pack(query.wrench.force, query.wrench.torque);
  p.impedance_range = range;

  for (const auto& e : exemplars) {
    std::string b;
    b += "Reference similar successful example with similarity score " +
         format_sig(e.aggregate, 4) + ":\n";
    b += "- Task: " + e.record.instruction_text + "\n";
    b += "- Phase: ";
    b += to_string(e.record.phase);
    b += "\n";
    b += "- Twist: " +
         render_six(pack(e.record.twist.linear, e.record.twist.angular)) + "\n";
    b += "- Wrench: " +
         render_six(pack(e.record.wrench.force, e.record.wrench.torque)) + "\n";
    b += "- Parameters: K = " + render_three(e.record.k_trans) +
         ", D = " + render_three(e.record.d_trans) + "\n";
    p.exemplar_blocks.push_back(std::move(b));
  }
  return p;
}

GeneratorOutput parse_response(const std::string& text,
                               const ImpedanceRange& range) {
  range.validate();
  static const std::regex k_pat(
      R"(K\s*=\s*\[\s*([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*,\s*([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*,\s*([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*\])");
  static const std::regex d_pat(
      R"(D\s*=\s*\[\s*([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*,\s*([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*,\s*([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*\])");

  std::smatch km, dm;
  if (!std::regex_search(text, km, k_pat)) {
    throw ParseError("parse_response: no K = [a, b, c] pattern", text);
  }
  if (!std::regex_search(text, dm, d_pat)) {
    throw ParseError("parse_response: no D = [a, b, c] pattern", text);
  }

  GeneratorOutput out;
  out.raw_response = text;
  out.backend_tag = BackendTag::Remote;
  try {
    for (int i = 0; i < 3; ++i) {
      out.k_trans[i] = std::stod(km[static_cast<std::size_t>(i + 1)].str());
      out.d_trans[i] = std::stod(dm[static_cast<std::size_t>(i + 1)].str());
    }
  } catch (const std::exception&) {
    throw ParseError("parse_response: number out of double range", text);
  }
  if (!out.k_trans.allFinite() || !out.d_trans.allFinite()) {
    throw ParseError("parse_response: non-finite value", text);
  }
  for (int i = 0; i < 3; ++i) {
    out.k_trans[i] = std::clamp(out.k_trans[i], range.k_min, range.k_max);
    out.d_trans[i] = std::clamp(out.d_trans[i], range.d_min, range.d_max);
  }
  return out;
}

std::string render_output(const GeneratorOutput& output) {
  std::string s = "K = [";
  for (int i = 0; i < 3; ++i) {
    if (i) s += ", ";
    s += format_sig(output.k_trans[i], 17);
  }
  s += "]\nD = [";
  for (int i = 0; i < 3; ++i) {
    if (i) s += ", ";
    s += format_sig(output.d_trans[i], 17);
  }
  s += "]";
  return s;
}

GeneratorOutput heuristic_generate(const QueryContext& query,
                                   const std::vector<Exemplar>& exemplars,
                                   const ImpedanceRange& range,
                                   const HeuristicConfig& config) {
  range.validate();
  const double span = range.k_max - range.k_min;
  double base = 0.0;
  switch (query.phase) {
    case Phase::FreeMotion: base = range.k_max; break;
    case Phase::Approaching: base = range.k_min + 0.6 * span; break;
    case Phase::Retreat: base = range.k_min + 0.4 * span; break;
    case Phase::Contact: base = range.k_min; break;
  }

  Vector3 k(base, base, base);

  // Dominant motion axis; ties go to the lowest index so the rule stays a
  // pure function even at rest.
  int axis = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(query.twist.linear[i]) > std::abs(query.twist.linear[axis])) {
      axis = i;
    }
  }
  const double f_a = query.wrench.force[axis];
  const double v_a = query.twist.linear[axis];
  const bool resisting =
      f_a * v_a < 0.0 && std::abs(f_a) > config.resistance_threshold_n;
  k[axis] *= resisting ? config.increase : config.decrease;

  for (int i = 0; i < 3; ++i) {
    k[i] = std::clamp(k[i], range.k_min, range.k_max);
  }

  if (!exemplars.empty()) {
    double wsum = 0.0;
    for (const auto& e : exemplars) {
      wsum += std::max(e.aggregate, 0.0);
    }
    Vector3 mean = Vector3::Zero();
    if (wsum > 0.0) {
      for (const auto& e : exemplars) {
        mean += (std::max(e.aggregate, 0.0) / wsum) * e.record.k_trans;
      }
    } else {
      for (const auto& e : exemplars) {
        mean += e.record.k_trans / static_cast<double>(exemplars.size());
      }
    }
    k = config.blend * k + (1.0 - config.blend) * mean;
    for (int i = 0; i < 3; ++i) {
      k[i] = std::clamp(k[i], range.k_min, range.k_max);
    }
  }

  GeneratorOutput out;
  out.k_trans = k;
  for (int i = 0; i < 3; ++i) {
    out.d_trans[i] =
        std::clamp(damping_from_stiffness(k[i]), range.d_min, range.d_max);
  }
  out.backend_tag = BackendTag::Heuristic;
  return out;
}

GeneratorOutput remote_generate(const QueryContext& query,
                                const std::vector<Exemplar>& exemplars,
                                const ImpedanceRange& range,
                                const EndpointConfig& endpoint,
                                const std::optional<std::string>& image_b64) {
  const PromptBundle prompt = build_prompt(query, exemplars, range);

  ChatRequest req;
  req.model = endpoint.model;
  req.messages = {{"system", prompt.system_preamble}, {"user", prompt.body()}};
  req.image_b64 = image_b64;

  std::string reply;
  try {
    reply = chat_complete_with_retry(endpoint, req);
  } catch (const BackendError& e) {
    GeneratorOutput out = heuristic_generate(query, exemplars, range);
    out.raw_response = std::string("fallback (transport): ") + e.what();
    return out;
  }
  try {
    return parse_response(reply, range);
  } catch (const ParseError& e) {
    GeneratorOutput out = heuristic_generate(query, exemplars, range);
    out.raw_response = std::string("fallback (parse): ") + e.what();
    return out;
  }
}

}  // namespace omnivic
