// SPDX-License-Identifier: Apache-2.0
//
// Report documents emitted by the CLI: a machine-readable JSON body plus a
// plain-text rendering. Every report embeds the tool version, the resolved
// configuration and the master seed, and contains nothing run-dependent
// beyond them, so identical inputs produce byte-identical files.
#pragma once

#include <sstream>
#include <string>

#include "spinnet/equivalence.hpp"
#include "spinnet/model_io.hpp"
#include "spinnet/version.hpp"

namespace spinnet {

inline Json report_envelope(const std::string& command, Json config, std::uint64_t seed) {
  Json j;
  j["tool"] = "spinnet";
  j["version"] = version_string;
  j["command"] = command;
  j["config"] = std::move(config);
  j["seed"] = seed;
  return j;
}

inline Json residuals_to_json(const std::map<std::string, double>& residuals) {
  Json j = Json::object();
  for (const auto& [k, v] : residuals) j[k] = v;
  return j;
}

inline std::string render_text(const Json& report) {
  std::ostringstream out;
  out << "spinnet " << report.at("version").get<std::string>() << " -- "
      << report.at("command").get<std::string>() << "\n";
  out << "seed: " << report.at("seed").dump() << "\n";
  std::function<void(const Json&, int)> walk = [&](const Json& node, int depth) {
    const std::string pad(2 * depth, ' ');
    for (const auto& [key, value] : node.items()) {
      if (value.is_object()) {
        out << pad << key << ":\n";
        walk(value, depth + 1);
      } else if (value.is_number_float()) {
        out << pad << key << ": " << fmt_double(value.get<double>()) << "\n";
      } else {
        out << pad << key << ": " << value.dump() << "\n";
      }
    }
  };
  for (const auto& [key, value] : report.items()) {
    if (key == "tool" || key == "version" || key == "command" || key == "seed") continue;
    if (value.is_object()) {
      out << key << ":\n";
      walk(value, 1);
    } else if (value.is_number_float()) {
      out << key << ": " << fmt_double(value.get<double>()) << "\n";
    } else {
      out << key << ": " << value.dump() << "\n";
    }
  }
  return out.str();
}

inline void write_report(const std::string& out_dir, const std::string& name, const Json& body) {
  write_file(out_dir + "/" + name + ".json", body.dump(2) + "\n");
  write_file(out_dir + "/" + name + ".txt", render_text(body));
}

inline Json split_report_json(const CartanSplit& split, const ClosureReport& closure) {
  Json j;
  j["dimension"] = split.dim;
  j["site_dims"] = split.site_dims;
  j["odd_count"] = split.odd_basis.size();
  j["even_count"] = split.even_basis.size();
  j["closure_residuals"] = Json{{"odd_odd_into_even", closure.odd_odd},
                                {"odd_even_into_odd", closure.odd_even},
                                {"even_even_into_even", closure.even_even}};
  Json elements = Json::array();
  for (size_t i = 0; i < split.odd_basis.size(); ++i)
    elements.push_back(Json{{"factors", split.odd_labels[i]}, {"parity", "odd"}});
  for (size_t i = 0; i < split.even_basis.size(); ++i)
    elements.push_back(Json{{"factors", split.even_labels[i]}, {"parity", "even"}});
  j["basis"] = elements;
  return j;
}

inline Json verdict_to_json(const EquivalenceVerdict& v) {
  Json j;
  j["verdict"] = to_string(v.verdict);
  if (!v.reason.empty()) j["reason"] = v.reason;
  if (!v.permutation.empty()) {
    Json p = Json::array();
    for (int site : v.permutation) p.push_back(site + 1);  // 1-based for reports
    j["permutation"] = p;
  }
  if (!v.residuals.empty()) j["residuals"] = residuals_to_json(v.residuals);
  if (v.proportional_exchange_possible) {
    j["proportional_exchange_possible"] = true;
    j["proportional_alpha"] = v.proportional_alpha;
  }
  if (v.witness) {
    j["witness"] = Json{{"trial", v.witness->trial},
                        {"gap", v.witness->gap},
                        {"schedule", schedule_to_json(v.witness->schedule)}};
  }
  return j;
}

inline Json witness_to_json(const std::optional<FalsifyWitness>& w, const FalsifyParams& params) {
  Json j;
  j["trials"] = params.trials;
  j["horizon"] = params.horizon;
  j["tolerance"] = params.tol;
  j["distribution"] = Json{{"segments", Json::array({params.min_segments, params.max_segments})},
                           {"duration", Json::array({params.min_duration, params.max_duration})},
                           {"amplitude", params.amplitude}};
  if (w) {
    j["witness_found"] = true;
    j["trial"] = w->trial;
    j["gap"] = w->gap;
    j["schedule"] = schedule_to_json(w->schedule);
  } else {
    j["witness_found"] = false;
  }
  return j;
}

}  // namespace spinnet
