// SPDX-License-Identifier: Apache-2.0
//
// Model and schedule files (JSON) and the delimited trace export. Spins are
// written as exact strings ("1/2", "1", "3/2") so half-integers never pass
// through a floating-point parse; all numeric output uses 17 significant
// digits.
#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "spinnet/dynamics.hpp"
#include "spinnet/network.hpp"

namespace spinnet {

using Json = nlohmann::ordered_json;

inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

inline CMatrix parse_matrix(const Json& rows) {
  if (!rows.is_array() || rows.empty())
    throw std::invalid_argument("matrix: expected a non-empty array of rows");
  const int n = static_cast<int>(rows.size());
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != n)
      throw std::invalid_argument("matrix: row " + std::to_string(i + 1) + " has wrong length");
    for (int j = 0; j < n; ++j) {
      const Json& e = rows[i][j];
      if (!e.is_array() || e.size() != 2)
        throw std::invalid_argument("matrix: entries must be [re, im] pairs");
      m(i, j) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

inline Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(row);
  }
  return rows;
}

/// Model config schema:
///   spins: ["1/2", "1", ...]
///   J:     [{"k": 1, "l": 2, "value": 1.0}, ...]   (1-based, k < l)
///   gamma: [1.0, ...]
///   rho0:  {"preset": "ground-z"} | {"preset": "thermal", "beta": b}
///          | {"preset": "maximally-mixed"} | {"matrix": [[[re,im],...],...]}
inline SpinNetworkModel parse_model(const Json& j) {
  if (!j.contains("spins")) throw std::invalid_argument("model: missing field 'spins'");
  if (!j.contains("gamma")) throw std::invalid_argument("model: missing field 'gamma'");
  std::vector<HalfInt> spins;
  for (const auto& s : j.at("spins")) spins.push_back(HalfInt::parse(s.get<std::string>()));
  const int n = static_cast<int>(spins.size());

  Eigen::MatrixXd exchange = Eigen::MatrixXd::Zero(n, n);
  for (const auto& entry : j.value("J", Json::array())) {
    const int k = entry.at("k").get<int>(), l = entry.at("l").get<int>();
    if (k < 1 || l < 1 || k > n || l > n || k >= l)
      throw std::invalid_argument("model: J entry requires 1 <= k < l <= n");
    exchange(k - 1, l - 1) = exchange(l - 1, k - 1) = entry.at("value").get<double>();
  }

  const auto& gj = j.at("gamma");
  if (static_cast<int>(gj.size()) != n)
    throw std::invalid_argument("model: field 'gamma' must list one value per site");
  Eigen::VectorXd gamma(n);
  for (int k = 0; k < n; ++k) gamma[k] = gj[k].get<double>();

  Rho0Spec rho0 = Rho0Spec::maximally_mixed();
  if (j.contains("rho0")) {
    const Json& r = j.at("rho0");
    if (r.contains("matrix")) {
      rho0 = Rho0Spec::explicit_state(parse_matrix(r.at("matrix")));
    } else {
      const std::string preset = r.at("preset").get<std::string>();
      if (preset == "ground-z")
        rho0 = Rho0Spec::ground_z();
      else if (preset == "thermal")
        rho0 = Rho0Spec::thermal(r.at("beta").get<double>());
      else if (preset == "maximally-mixed")
        rho0 = Rho0Spec::maximally_mixed();
      else
        throw std::invalid_argument("model: unknown rho0 preset '" + preset + "'");
    }
  }
  return build_network(std::move(spins), std::move(exchange), std::move(gamma), rho0);
}

inline SpinNetworkModel load_model(const std::string& path) {
  try {
    return parse_model(load_json_file(path));
  } catch (const std::exception& e) {
    throw std::runtime_error("model file " + path + ": " + e.what());
  }
}

inline Json model_to_json(const SpinNetworkModel& m, bool explicit_rho0 = false) {
  Json j;
  Json spins = Json::array();
  for (const HalfInt& l : m.spins) spins.push_back(l.str());
  j["spins"] = spins;
  Json jj = Json::array();
  for (int k = 0; k < m.n; ++k)
    for (int l = k + 1; l < m.n; ++l)
      if (m.exchange(k, l) != 0.0)
        jj.push_back({{"k", k + 1}, {"l", l + 1}, {"value", m.exchange(k, l)}});
  j["J"] = jj;
  Json gg = Json::array();
  for (int k = 0; k < m.n; ++k) gg.push_back(m.gyros[k]);
  j["gamma"] = gg;
  if (explicit_rho0 || m.rho0_preset == "explicit")
    j["rho0"] = Json{{"matrix", matrix_to_json(m.rho0)}};
  else if (m.rho0_preset.rfind("thermal", 0) == 0) {
    // preset string carries the beta value; store it back numerically
    const auto open = m.rho0_preset.find('=');
    j["rho0"] = Json{{"preset", "thermal"},
                     {"beta", std::stod(m.rho0_preset.substr(open + 1))}};
  } else
    j["rho0"] = Json{{"preset", m.rho0_preset}};
  return j;
}

/// Schedule schema: {"segments": [[duration, u_x, u_y, u_z], ...]}.
inline ControlSchedule parse_schedule(const Json& j) {
  if (!j.contains("segments")) throw std::invalid_argument("schedule: missing field 'segments'");
  ControlSchedule s;
  for (const auto& row : j.at("segments")) {
    if (!row.is_array() || row.size() != 4)
      throw std::invalid_argument("schedule: each segment must be [duration, u_x, u_y, u_z]");
    s.segments.push_back(
        {row[0].get<double>(), row[1].get<double>(), row[2].get<double>(), row[3].get<double>()});
  }
  if (s.segments.empty()) throw std::invalid_argument("schedule: no segments");
  return s;
}

inline ControlSchedule load_schedule(const std::string& path) {
  try {
    return parse_schedule(load_json_file(path));
  } catch (const std::exception& e) {
    throw std::runtime_error("schedule file " + path + ": " + e.what());
  }
}

inline Json schedule_to_json(const ControlSchedule& s) {
  Json rows = Json::array();
  for (const ControlSegment& seg : s.segments)
    rows.push_back(Json::array({seg.duration, seg.ux, seg.uy, seg.uz}));
  return Json{{"segments", rows}};
}

inline std::string trace_to_csv(const OutputTrace& t) {
  std::ostringstream out;
  out << "t,y_x,y_y,y_z\n";
  for (size_t i = 0; i < t.times.size(); ++i)
    out << fmt_double(t.times[i]) << ',' << fmt_double(t.y[i][0]) << ',' << fmt_double(t.y[i][1])
        << ',' << fmt_double(t.y[i][2]) << '\n';
  return out.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

}  // namespace spinnet
