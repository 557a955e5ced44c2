// Copyright 2026 The drbm Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "drbm/coding.hpp"
#include "drbm/dimension.hpp"
#include "drbm/divergence.hpp"
#include "drbm/geometry.hpp"
#include "drbm/json_io.hpp"
#include "drbm/tropical.hpp"
#include "drbm/version.hpp"

namespace {

using drbm::Json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitTooLarge = 3;
constexpr int kExitUndetermined = 4;

struct RunConfig {
  std::string command;
  std::string visible;
  std::string hidden;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  std::string format = "json";
  std::string out;
  // per-command extras
  std::size_t samples = 5;
  std::size_t restarts = 0;
  std::size_t targets = 10;
  bool empirical = false;
  std::string code_file;
  std::string words;
  int distance = 0;
  int covering = -1;
  std::string hamming;
  std::string gv;
  std::string model_file;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<int> parse_ints(const std::string& text, const char* what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError(std::string("cannot parse ") + what + ": '" + text + "'");
    }
  }
  if (out.empty()) throw UsageError(std::string("missing ") + what);
  return out;
}

drbm::StateSpace parse_space(const std::string& text, const char* what) {
  const auto cards = parse_ints(text, what);
  for (int c : cards)
    if (c < 1) throw UsageError(std::string(what) + " cardinalities must be positive");
  return drbm::StateSpace(cards);
}

Json config_json(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  if (!c.visible.empty()) j["visible"] = c.visible;
  if (!c.hidden.empty()) j["hidden"] = c.hidden;
  j["seed"] = c.seed;
  j["budget"] = c.budget;
  j["format"] = c.format;
  if (c.command == "dim") j["samples"] = c.samples;
  if (c.command == "universal") {
    j["empirical"] = c.empirical;
    j["restarts"] = c.restarts;
    j["targets"] = c.targets;
  }
  if (c.command == "modes") {
    j["restarts"] = c.restarts;
    if (!c.code_file.empty()) j["code"] = c.code_file;
    if (!c.words.empty()) j["words"] = c.words;
  }
  if (c.command == "code") {
    if (c.distance > 0) j["distance"] = c.distance;
    if (c.covering >= 0) j["covering"] = c.covering;
    if (!c.hamming.empty()) j["hamming"] = c.hamming;
    if (!c.gv.empty()) j["gv"] = c.gv;
  }
  if (c.command == "eval") j["model"] = c.model_file;
  return j;
}

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else {
    out.emplace_back(prefix, scalar_text(j));
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string render(const RunConfig& c, const Json& result, const std::string& csv_table) {
  Json doc;
  doc["tool"] = "drbm";
  doc["version"] = drbm::kVersion;
  doc["config"] = config_json(c);
  doc["result"] = result;
  std::ostringstream os;
  if (c.format == "json") {
    os << doc.dump(2) << "\n";
  } else if (c.format == "csv") {
    os << "# drbm " << drbm::kVersion << " " << doc["config"].dump() << "\n";
    if (!csv_table.empty()) {
      os << csv_table;
    } else {
      std::vector<std::pair<std::string, std::string>> rows;
      flatten(result, "", rows);
      os << "key,value\n";
      for (const auto& [k, v] : rows) os << csv_field(k) << "," << csv_field(v) << "\n";
    }
  } else {
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(doc, "", rows);
    for (const auto& [k, v] : rows) os << k << ": " << v << "\n";
  }
  return os.str();
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw UsageError("cannot open output file " + c.out);
  f << text;
}

Json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open " + path);
  try {
    return Json::parse(f);
  } catch (const Json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

int cmd_dim(const RunConfig& c) {
  const auto vis = parse_space(c.visible, "--visible");
  const auto hid = parse_space(c.hidden, "--hidden");
  drbm::DimensionOptions opt;
  opt.samples = c.samples;
  opt.seed = c.seed;
  opt.tropical_budget = c.budget == 0 ? 2000 : c.budget;
  const auto rep = drbm::dimension_certificate(vis, hid, opt);
  std::ostringstream table;
  table << "expected,parameters,tropical,jacobian,hadamard_upper,verdict\n"
        << rep.expected << "," << rep.exp_family << "," << rep.tropical.value << "," << rep.jacobian.rank << ","
        << rep.hadamard.bound << "," << drbm::to_string(rep.verdict) << "\n";
  emit(c, render(c, drbm::to_json(rep), table.str()));
  return rep.verdict == drbm::DimensionVerdict::kUndetermined ? kExitUndetermined : kExitOk;
}

int cmd_universal(const RunConfig& c) {
  const auto vis = parse_space(c.visible, "--visible");
  const auto hid = parse_space(c.hidden, "--hidden");
  const auto bound = drbm::kl_upper_bound(vis, hid);
  const auto verdict = drbm::universality_verdict(vis, hid);
  std::optional<drbm::EmpiricalDivergence> emp;
  if (c.empirical) {
    drbm::FitOptions opt;
    opt.seed = c.seed;
    if (c.restarts > 0) opt.restarts = c.restarts;
    if (c.budget > 0) opt.max_iterations = c.budget;
    emp = drbm::empirical_max_divergence(vis, hid, c.targets, opt);
  }
  emit(c, render(c, drbm::divergence_json(bound, verdict, emp), ""));
  return kExitOk;
}

int cmd_tropical(const RunConfig& c) {
  const auto vis = parse_space(c.visible, "--visible");
  const auto hid = parse_space(c.hidden, "--hidden");
  const auto t = drbm::tropical_dimension(vis, hid, c.budget == 0 ? 2000 : c.budget, c.seed);
  std::ostringstream table;
  table << "value,rank,upper_bound,label,family\n"
        << t.value << "," << t.rank << "," << t.upper_bound << "," << (t.exact ? "exact" : "lower bound") << ","
        << t.family << "\n";
  emit(c, render(c, drbm::to_json(t), table.str()));
  return kExitOk;
}

int cmd_modes(const RunConfig& c) {
  const auto hid = parse_space(c.hidden, "--hidden");
  std::optional<drbm::Code> code;
  if (!c.code_file.empty()) {
    code = drbm::code_from_json(read_json_file(c.code_file));
  } else {
    const auto vis = parse_space(c.visible, "--visible");
    std::vector<std::size_t> words;
    std::stringstream ss(c.words);
    std::string w;
    while (std::getline(ss, w, ',')) {
      if (w.size() != vis.num_vars()) throw UsageError("word '" + w + "' has the wrong length");
      drbm::State s;
      for (char ch : w) s.push_back(ch - '0');
      for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] < 0 || s[i] >= vis.card(i)) throw UsageError("word '" + w + "' out of range");
      words.push_back(vis.index(s));
    }
    if (words.empty()) throw UsageError("modes needs --code or --words");
    code.emplace(vis, std::move(words));
  }
  if (!c.visible.empty() && !(parse_space(c.visible, "--visible") == code->space()))
    throw UsageError("--visible does not match the code's space");
  const auto cert = drbm::strong_mode_certificate(code->space(), hid, *code, c.restarts == 0 ? 200 : c.restarts, c.seed);
  Json result;
  result["code"] = drbm::to_json(*code);
  result["found"] = cert.has_value();
  if (cert) {
    result["certificate"] = drbm::to_json(*cert);
    Json labels = Json::array();
    for (std::size_t x : cert->modes) labels.push_back(code->space().label(x));
    result["strong_modes"] = labels;
  }
  emit(c, render(c, result, ""));
  return cert ? kExitOk : kExitUndetermined;
}

int cmd_code(const RunConfig& c) {
  Json result;
  drbm::SearchBudget budget;
  if (c.budget > 0) budget.max_nodes = c.budget;
  if (!c.hamming.empty()) {
    const auto qr = parse_ints(c.hamming, "--hamming");
    if (qr.size() != 2) throw UsageError("--hamming expects q,r");
    result["hamming"] = drbm::to_json(drbm::hamming_code(qr[0], qr[1]));
  }
  if (!c.gv.empty()) {
    const auto qnd = parse_ints(c.gv, "--gv");
    if (qnd.size() != 3) throw UsageError("--gv expects q,n,d");
    result["gilbert_varshamov"] = drbm::gilbert_varshamov(qnd[0], qnd[1], qnd[2]);
  }
  if (c.distance > 0 || c.covering >= 0) {
    const auto vis = parse_space(c.visible, "--visible");
    if (c.distance > 0) {
      const auto r = drbm::max_code_size(vis, c.distance, budget);
      Json j;
      j["distance"] = c.distance;
      j["value"] = r.value;
      j["exact"] = r.exact;
      j["method"] = r.method;
      if (!r.witness.empty()) j["code"] = drbm::to_json(drbm::Code(vis, r.witness));
      result["max_code_size"] = j;
    }
    if (c.covering >= 0) {
      const auto r = drbm::min_covering_size(vis, c.covering, budget);
      Json j;
      j["radius"] = c.covering;
      j["value"] = r.value;
      j["exact"] = r.exact;
      if (!r.witness.empty()) j["code"] = drbm::to_json(drbm::Code(vis, r.witness));
      result["min_covering_size"] = j;
    }
  }
  if (result.empty()) throw UsageError("code needs --distance, --covering, --hamming or --gv");
  emit(c, render(c, result, ""));
  return kExitOk;
}

int cmd_eval(const RunConfig& c) {
  const auto rbm = drbm::model_from_json(read_json_file(c.model_file));
  const auto p = drbm::rbm_marginal_factorized(rbm);
  std::ostringstream table;
  drbm::write_csv(table, p);
  emit(c, render(c, drbm::to_json(p), table.str()));
  return kExitOk;
}

void common(CLI::App* sub, RunConfig& c, bool needs_visible, bool needs_hidden) {
  auto* v = sub->add_option("--visible", c.visible, "visible cardinalities, e.g. 2,2,3");
  if (needs_visible) v->required();
  auto* h = sub->add_option("--hidden", c.hidden, "hidden cardinalities, e.g. 3,2");
  if (needs_hidden) h->required();
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv", "text"}));
  sub->add_option("--budget", c.budget, "search budget");
  sub->add_option("--out", c.out, "output path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete restricted Boltzmann machine analysis"};
  app.set_version_flag("--version", drbm::kVersion);
  app.require_subcommand(1);
  RunConfig c;

  auto* dim = app.add_subcommand("dim", "dimension report");
  common(dim, c, true, true);
  dim->add_option("--samples", c.samples, "parameter draws for the jacobian rank");

  auto* uni = app.add_subcommand("universal", "universal approximation verdict and divergence bound");
  common(uni, c, true, true);
  uni->add_flag("--empirical", c.empirical, "also run the divergence optimiser");
  uni->add_option("--restarts", c.restarts, "optimiser restarts per target");
  uni->add_option("--targets", c.targets, "random Dirichlet targets");

  auto* tro = app.add_subcommand("tropical", "tropical dimension by slicing search");
  common(tro, c, true, true);

  auto* modes = app.add_subcommand("modes", "strong-mode certificate for a code");
  common(modes, c, false, true);
  modes->add_option("--code", c.code_file, "code JSON file");
  modes->add_option("--words", c.words, "comma-separated code words, e.g. 0000,1111");
  modes->add_option("--restarts", c.restarts, "assignment restarts");

  auto* code = app.add_subcommand("code", "coding-theory quantities");
  common(code, c, false, false);
  code->add_option("--distance", c.distance, "maximum code size at this minimum distance");
  code->add_option("--covering", c.covering, "minimum covering code size at this radius");
  code->add_option("--hamming", c.hamming, "q,r of a Hamming code");
  code->add_option("--gv", c.gv, "q,n,d for the Gilbert-Varshamov bound");

  auto* ev = app.add_subcommand("eval", "marginal distribution of a model file");
  common(ev, c, false, false);
  ev->add_option("--model", c.model_file, "model JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }
  try {
    if (*dim) return c.command = "dim", cmd_dim(c);
    if (*uni) return c.command = "universal", cmd_universal(c);
    if (*tro) return c.command = "tropical", cmd_tropical(c);
    if (*modes) return c.command = "modes", cmd_modes(c);
    if (*code) return c.command = "code", cmd_code(c);
    if (*ev) return c.command = "eval", cmd_eval(c);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const drbm::InstanceTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTooLarge;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
