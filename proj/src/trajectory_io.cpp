// Copyright 2026 The SphereBO Authors. All Rights Reserved.
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
// =============================================================================

#include "spherebo/trajectory_io.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "spherebo/errors.hpp"

namespace spherebo {

using nlohmann::json;

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  return fmt::format("{:.17g}", v);
}

std::string to_json_line(const TrajectoryRecord& r) {
  // Written by hand so that the float format and key order are fixed.
  std::string out = fmt::format("{{\"t\":{}", r.t);
  if (r.x_hash) {
    out += fmt::format(",\"x_hash\":\"{}\",\"x_sup_norm\":{}", *r.x_hash, format_double(r.x_sup_norm));
  } else {
    out += ",\"x\":[";
    for (Eigen::Index i = 0; i < r.x.size(); ++i) {
      if (i > 0) out += ',';
      out += format_double(r.x[i]);
    }
    out += ']';
  }
  out += fmt::format(",\"y\":{},\"incumbent\":{},\"boundary_fraction\":{},\"phase\":\"{}\"",
                     format_double(r.y), format_double(r.incumbent),
                     format_double(r.boundary_fraction), r.phase);
  if (r.fit) {
    out += fmt::format(",\"fit\":{{\"evidence\":{},\"jitter\":{},\"hyperparams_digest\":\"{}\"}}",
                       format_double(r.fit->evidence), format_double(r.fit->jitter),
                       r.fit->hyperparams_digest);
  }
  if (r.wall_ms) out += fmt::format(",\"wall_ms\":{}", format_double(*r.wall_ms));
  out += '}';
  return out;
}

namespace {

double number_or_nan(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

}  // namespace

TrajectoryRecord parse_json_line(const std::string& line) {
  try {
    const json j = json::parse(line);
    TrajectoryRecord r;
    r.t = j.at("t").get<int>();
    if (j.contains("x")) {
      const auto& xs = j.at("x");
      r.x.resize(static_cast<Eigen::Index>(xs.size()));
      for (std::size_t i = 0; i < xs.size(); ++i) r.x[static_cast<Eigen::Index>(i)] = xs[i].get<double>();
      r.x_sup_norm = r.x.size() ? r.x.lpNorm<Eigen::Infinity>() : 0.0;
    } else {
      r.x_hash = j.at("x_hash").get<std::string>();
      r.x_sup_norm = number_or_nan(j.at("x_sup_norm"));
    }
    r.y = number_or_nan(j.at("y"));
    r.incumbent = number_or_nan(j.at("incumbent"));
    r.boundary_fraction = number_or_nan(j.at("boundary_fraction"));
    r.phase = j.at("phase").get<std::string>();
    if (j.contains("fit")) {
      const auto& f = j.at("fit");
      r.fit = FitDiagnostics{number_or_nan(f.at("evidence")), number_or_nan(f.at("jitter")),
                             f.at("hyperparams_digest").get<std::string>()};
    }
    if (j.contains("wall_ms")) r.wall_ms = number_or_nan(j.at("wall_ms"));
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedInput, fmt::format("bad trajectory record: {}", e.what()));
  }
}

std::vector<TrajectoryRecord> read_trajectory(std::istream& in) {
  std::vector<TrajectoryRecord> out;
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < content.size()) {
    const std::size_t end = content.find('\n', pos);
    if (end == std::string::npos) break;  // torn final write
    ++line_no;
    const std::string line = content.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    try {
      out.push_back(parse_json_line(line));
    } catch (const Error& e) {
      throw Error(ErrorKind::MalformedInput, fmt::format("line {}: {}", line_no, e.what()));
    }
  }
  return out;
}

std::vector<TrajectoryRecord> read_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::MalformedInput, fmt::format("cannot read {}", path.string()));
  return read_trajectory(in);
}

void write_summary_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::InvalidConfig, fmt::format("cannot write {}", path.string()));
  out << "iteration,config_id,mean_incumbent,sem_incumbent,n_seeds\n";
  for (const auto& r : rows) {
    out << fmt::format("{},{},{},{},{}\n", r.iteration, r.config_id, format_double(r.mean_incumbent),
                       format_double(r.sem_incumbent), r.n_seeds);
  }
}

// ---------------------------------------------------------------------------
// Config documents

namespace {

[[noreturn]] void config_error(const std::string& msg) {
  throw Error(ErrorKind::InvalidConfig, msg);
}

template <typename T>
T field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    config_error(fmt::format("{}: wrong type", key));
  }
}

template <typename E, typename Parse>
E enum_field(const json& j, const char* key, Parse parse) {
  const auto name = field<std::string>(j, key);
  try {
    return parse(name);
  } catch (const Error&) {
    config_error(fmt::format("{}: unknown value '{}'", key, name));
  }
}

const std::set<std::string> kRunKeys = {
    "id", "objective", "dim", "objective_seed", "kernel", "kernel_order", "projection",
    "intercept", "acquisition", "ucb_lambda", "hyperprior", "centered", "ard_enabled",
    "learn_global_lengthscale", "global_lengthscale", "n_init", "budget", "seed",
    "refit_stride", "hyperfit", "acquisition_budget", "output", "record_wall_clock",
    "full_x_max_dim"};
const std::set<std::string> kSuiteKeys = {"runs", "seeds", "parallel", "out_dir"};
const std::set<std::string> kHyperfitKeys = {"num_starts", "max_iterations", "fd_step",
                                             "tolerance"};
const std::set<std::string> kAcqBudgetKeys = {"num_candidates", "num_refine", "num_steps",
                                              "fd_step"};

void reject_unknown(const json& j, const std::set<std::string>& a,
                    const std::set<std::string>& b, const std::string& where) {
  if (!j.is_object()) config_error(fmt::format("{}: expected an object", where));
  for (const auto& [key, value] : j.items()) {
    if (!a.count(key) && !b.count(key)) {
      config_error(fmt::format("{}{}: unknown key", where.empty() ? "" : where + ".", key));
    }
  }
}

RunConfig run_from_json(const json& j) {
  reject_unknown(j, kRunKeys, {}, "");
  if (!j.contains("objective")) config_error("objective: missing objective id");
  if (!j.contains("dim")) config_error("dim: missing dimension");
  RunConfig c;
  if (j.contains("id")) c.id = field<std::string>(j, "id");
  c.objective = field<std::string>(j, "objective");
  c.dim = field<int>(j, "dim");
  if (j.contains("objective_seed")) c.objective_seed = field<std::uint64_t>(j, "objective_seed");
  if (j.contains("kernel")) c.kernel = enum_field<KernelFamily>(j, "kernel", parse_kernel_family);
  if (j.contains("kernel_order")) c.kernel_order = field<int>(j, "kernel_order");
  if (j.contains("projection")) {
    c.projection = enum_field<SphericalMapKind>(j, "projection", parse_spherical_map);
  }
  if (j.contains("intercept")) c.intercept = field<bool>(j, "intercept");
  if (j.contains("acquisition")) {
    c.acquisition = enum_field<AcquisitionKind>(j, "acquisition", parse_acquisition);
  }
  if (j.contains("ucb_lambda")) c.ucb_lambda = field<double>(j, "ucb_lambda");
  if (j.contains("hyperprior")) {
    c.hyperprior = enum_field<HyperpriorKind>(j, "hyperprior", parse_hyperprior);
  }
  if (j.contains("centered")) c.centered = field<bool>(j, "centered");
  if (j.contains("ard_enabled")) c.ard_enabled = field<bool>(j, "ard_enabled");
  if (j.contains("learn_global_lengthscale")) {
    c.learn_global_lengthscale = field<bool>(j, "learn_global_lengthscale");
  }
  if (j.contains("global_lengthscale")) c.global_lengthscale = field<double>(j, "global_lengthscale");
  if (j.contains("n_init")) c.n_init = field<int>(j, "n_init");
  if (j.contains("budget")) c.budget = field<int>(j, "budget");
  if (j.contains("seed")) c.seed = field<std::uint64_t>(j, "seed");
  if (j.contains("refit_stride")) c.refit_stride = field<int>(j, "refit_stride");
  if (j.contains("hyperfit")) {
    const json& h = j.at("hyperfit");
    reject_unknown(h, kHyperfitKeys, {}, "hyperfit");
    if (h.contains("num_starts")) c.hyperfit.num_starts = field<int>(h, "num_starts");
    if (h.contains("max_iterations")) c.hyperfit.max_iterations = field<int>(h, "max_iterations");
    if (h.contains("fd_step")) c.hyperfit.fd_step = field<double>(h, "fd_step");
    if (h.contains("tolerance")) c.hyperfit.tolerance = field<double>(h, "tolerance");
  }
  if (j.contains("acquisition_budget")) {
    const json& a = j.at("acquisition_budget");
    reject_unknown(a, kAcqBudgetKeys, {}, "acquisition_budget");
    auto& b = c.acquisition_budget;
    if (a.contains("num_candidates")) b.num_candidates = field<int>(a, "num_candidates");
    if (a.contains("num_refine")) b.num_refine = field<int>(a, "num_refine");
    if (a.contains("num_steps")) b.num_steps = field<int>(a, "num_steps");
    if (a.contains("fd_step")) b.fd_step = field<double>(a, "fd_step");
  }
  if (j.contains("output")) c.output_path = field<std::string>(j, "output");
  if (j.contains("record_wall_clock")) c.record_wall_clock = field<bool>(j, "record_wall_clock");
  if (j.contains("full_x_max_dim")) c.full_x_max_dim = field<int>(j, "full_x_max_dim");
  c.validate();
  return c;
}

}  // namespace

ConfigDocument parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    config_error(fmt::format("config is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object()) config_error("config: top level must be an object");
  ConfigDocument out;
  reject_unknown(doc, kRunKeys, kSuiteKeys, "");
  if (doc.contains("parallel")) out.parallel = field<int>(doc, "parallel");
  if (out.parallel < 1) config_error("parallel: must be >= 1");
  if (doc.contains("out_dir")) out.out_dir = field<std::string>(doc, "out_dir");
  if (doc.contains("seeds")) {
    out.seeds = field<std::vector<std::uint64_t>>(doc, "seeds");
    if (out.seeds.empty()) config_error("seeds: empty seed list");
  }
  if (!doc.contains("runs")) {
    json run = doc;
    for (const auto& key : kSuiteKeys) run.erase(key);
    out.runs.push_back(run_from_json(run));
    out.is_suite = !out.seeds.empty();
    return out;
  }
  const json& runs = doc.at("runs");
  if (!runs.is_array() || runs.empty()) config_error("runs: expected a non-empty array");
  json shared = doc;
  for (const auto& key : kSuiteKeys) shared.erase(key);
  std::set<std::string> ids;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!runs[i].is_object()) config_error(fmt::format("runs[{}]: expected an object", i));
    json merged = shared;
    merged.update(runs[i]);
    if (!runs[i].contains("id")) merged["id"] = fmt::format("run{}", i);
    RunConfig c;
    try {
      c = run_from_json(merged);
    } catch (const Error& e) {
      config_error(fmt::format("runs[{}].{}", i, e.what()));
    }
    if (!ids.insert(c.id).second) config_error(fmt::format("runs[{}].id: duplicate id '{}'", i, c.id));
    out.runs.push_back(std::move(c));
  }
  out.is_suite = true;
  return out;
}

ConfigDocument load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error(fmt::format("cannot read config {}", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace spherebo
