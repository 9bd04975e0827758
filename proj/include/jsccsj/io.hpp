// Copyright 2026 The jsccsj Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef JSCCSJ_IO_HPP_
#define JSCCSJ_IO_HPP_

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "jsccsj/gaussian.hpp"
#include "jsccsj/model.hpp"
#include "jsccsj/prob.hpp"

namespace jsccsj {

using Json = nlohmann::ordered_json;

/// Numbers are serialized as decimal strings with 17 significant digits so
/// that emit -> parse -> emit round-trips exactly.
inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

struct Alphabets {
  std::vector<std::string> s, x, j, y, shat;
};

inline std::vector<std::string> default_symbols(std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

/// Parse/validation failure carrying one diagnostic per violation.
class SpecError : public std::runtime_error {
 public:
  explicit SpecError(std::vector<std::string> diagnostics)
      : std::runtime_error(join(diagnostics)),
        diagnostics_(std::move(diagnostics)) {}
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  static std::string join(const std::vector<std::string>& d) {
    std::string out;
    for (const auto& line : d) {
      if (!out.empty()) out += "\n";
      out += line;
    }
    return out;
  }
  std::vector<std::string> diagnostics_;
};

struct LoadedSpec {
  std::optional<Alphabets> alphabets;
  std::optional<JsccsjSystem> system;
  std::optional<StrategyProfile> profile;
  std::optional<GaussianSystem> gaussian;
  std::optional<LinearGaussianProfile> gaussian_profile;
  // Largest |row sum - 1| seen among parsed distributions; callers relax
  // verification tolerances when inputs arrived as rounded decimal text.
  double max_row_drift = 0.0;

  bool has_finite() const { return system.has_value(); }
};

namespace io_detail {

class Loader {
 public:
  LoadedSpec load(const Json& doc) {
    if (!doc.is_object()) {
      fail("document: expected a JSON object");
      throw_if_failed();
    }
    check_schema_version(doc);
    if (doc.contains("alphabets")) load_finite(doc);
    if (doc.contains("gaussian")) load_gaussian(doc.at("gaussian"));
    if (!spec_.system && !spec_.gaussian) {
      fail("document: neither 'alphabets' (finite system) nor 'gaussian' present");
    }
    throw_if_failed();
    return std::move(spec_);
  }

 private:
  void fail(const std::string& msg) { diagnostics_.push_back(msg); }

  void throw_if_failed() {
    if (!diagnostics_.empty()) throw SpecError(std::move(diagnostics_));
  }

  void check_schema_version(const Json& doc) {
    if (!doc.contains("schema_version")) {
      fail("schema_version: missing (expected 1)");
      return;
    }
    const Json& v = doc.at("schema_version");
    if (!v.is_number_integer() || v.get<long>() != 1) {
      fail("schema_version: unsupported (expected 1)");
    }
  }

  double parse_number(const Json& v, const std::string& ctx) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      char* end = nullptr;
      const double out = std::strtod(s.c_str(), &end);
      if (end == s.c_str() || *end != '\0') {
        fail(ctx + ": '" + s + "' is not a number");
        return 0.0;
      }
      return out;
    }
    fail(ctx + ": expected a number or a numeric string");
    return 0.0;
  }

  std::vector<std::string> parse_alphabet(const Json& alph,
                                          const std::string& name) {
    std::vector<std::string> out;
    if (!alph.contains(name)) {
      fail("alphabets: missing alphabet '" + name + "'");
      return out;
    }
    const Json& arr = alph.at(name);
    if (!arr.is_array() || arr.empty()) {
      fail("alphabets." + name + ": expected a non-empty array of symbols");
      return out;
    }
    for (const Json& sym : arr) {
      if (!sym.is_string()) {
        fail("alphabets." + name + ": symbols must be strings");
        return out;
      }
      out.push_back(sym.get<std::string>());
    }
    std::unordered_map<std::string, std::size_t> seen;
    for (const auto& sym : out) {
      if (!seen.emplace(sym, 0).second) {
        fail("alphabets." + name + ": duplicate symbol '" + sym + "'");
      }
    }
    return out;
  }

  std::unordered_map<std::string, std::size_t> index_of(
      const std::vector<std::string>& symbols) {
    std::unordered_map<std::string, std::size_t> map;
    for (std::size_t i = 0; i < symbols.size(); ++i) map[symbols[i]] = i;
    return map;
  }

  /// Reads an object keyed by alphabet symbols into a dense vector;
  /// missing symbols mean zero.
  std::vector<double> parse_table_row(const Json& obj,
                                      const std::vector<std::string>& symbols,
                                      const std::string& alphabet_name,
                                      const std::string& ctx) {
    std::vector<double> row(symbols.size(), 0.0);
    if (!obj.is_object()) {
      fail(ctx + ": expected an object keyed by " + alphabet_name + " symbols");
      return row;
    }
    const auto idx = index_of(symbols);
    for (const auto& [key, value] : obj.items()) {
      const auto it = idx.find(key);
      if (it == idx.end()) {
        fail(ctx + ": undeclared symbol '" + key + "' for alphabet " +
             alphabet_name);
        continue;
      }
      row[it->second] = parse_number(value, ctx + "['" + key + "']");
    }
    return row;
  }

  /// Validates and builds a probability row, recording drift and naming
  /// the offending row on failure.
  std::optional<Pmf> parse_pmf_row(const Json& obj,
                                   const std::vector<std::string>& symbols,
                                   const std::string& alphabet_name,
                                   const std::string& ctx) {
    const std::vector<double> row =
        parse_table_row(obj, symbols, alphabet_name, ctx);
    double sum = 0.0;
    for (double p : row) {
      if (p < -kPmfSumTol) {
        fail(ctx + ": negative probability " + format_number(p));
        return std::nullopt;
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kInputRenormTol) {
      fail(ctx + ": probabilities sum to " + format_number(sum) +
           " (must be within " + format_number(kInputRenormTol) + " of 1)");
      return std::nullopt;
    }
    spec_.max_row_drift = std::max(spec_.max_row_drift, std::abs(sum - 1.0));
    return Pmf(row);
  }

  std::optional<CondKernel> parse_kernel(
      const Json& obj, const std::vector<std::string>& in_symbols,
      const std::vector<std::string>& out_symbols,
      const std::string& in_name, const std::string& out_name,
      const std::string& ctx) {
    if (!obj.is_object()) {
      fail(ctx + ": expected an object keyed by " + in_name + " symbols");
      return std::nullopt;
    }
    for (const auto& [key, value] : obj.items()) {
      (void)value;
      bool known = false;
      for (const auto& sym : in_symbols) known |= (sym == key);
      if (!known) {
        fail(ctx + ": undeclared symbol '" + key + "' for alphabet " + in_name);
      }
    }
    std::vector<Pmf> rows;
    bool ok = true;
    for (const auto& sym : in_symbols) {
      if (!obj.contains(sym)) {
        fail(ctx + ": missing row for " + in_name + " symbol '" + sym + "'");
        ok = false;
        continue;
      }
      auto row = parse_pmf_row(obj.at(sym), out_symbols, out_name,
                               ctx + "[" + in_name + "=" + sym + "]");
      if (!row) {
        ok = false;
        continue;
      }
      rows.push_back(std::move(*row));
    }
    if (!ok) return std::nullopt;
    return CondKernel(std::move(rows));
  }

  void load_finite(const Json& doc) {
    Alphabets alph;
    const Json& a = doc.at("alphabets");
    alph.s = parse_alphabet(a, "S");
    alph.x = parse_alphabet(a, "X");
    alph.j = parse_alphabet(a, "J");
    alph.y = parse_alphabet(a, "Y");
    alph.shat = parse_alphabet(a, "Shat");
    if (!diagnostics_.empty()) return;
    spec_.alphabets = alph;

    JsccsjSystem sys;
    sys.num_x = alph.x.size();
    sys.num_j = alph.j.size();

    bool ok = true;
    if (!doc.contains("source")) {
      fail("source: missing");
      ok = false;
    } else if (auto pmf = parse_pmf_row(doc.at("source"), alph.s, "S", "source")) {
      sys.source = std::move(*pmf);
    } else {
      ok = false;
    }

    if (!doc.contains("channel")) {
      fail("channel: missing");
      ok = false;
    } else {
      const Json& chan = doc.at("channel");
      if (!chan.is_object()) {
        fail("channel: expected an object keyed by X symbols");
        ok = false;
      } else {
        for (const auto& [key, value] : chan.items()) {
          (void)value;
          bool known = false;
          for (const auto& sym : alph.x) known |= (sym == key);
          if (!known) {
            fail("channel: undeclared symbol '" + key + "' for alphabet X");
            ok = false;
          }
        }
        std::vector<Pmf> rows;
        for (const auto& xs : alph.x) {
          if (!chan.contains(xs)) {
            fail("channel: missing rows for X symbol '" + xs + "'");
            ok = false;
            continue;
          }
          const Json& by_j = chan.at(xs);
          if (!by_j.is_object()) {
            fail("channel[X=" + xs + "]: expected an object keyed by J symbols");
            ok = false;
            continue;
          }
          for (const auto& [key, value] : by_j.items()) {
            (void)value;
            bool known = false;
            for (const auto& sym : alph.j) known |= (sym == key);
            if (!known) {
              fail("channel[X=" + xs + "]: undeclared symbol '" + key +
                   "' for alphabet J");
              ok = false;
            }
          }
          for (const auto& js : alph.j) {
            if (!by_j.contains(js)) {
              fail("channel[X=" + xs + "]: missing row for J symbol '" + js +
                   "'");
              ok = false;
              continue;
            }
            auto row = parse_pmf_row(by_j.at(js), alph.y, "Y",
                                     "channel[X=" + xs + "][J=" + js + "]");
            if (!row) {
              ok = false;
              continue;
            }
            rows.push_back(std::move(*row));
          }
        }
        if (ok) sys.channel = CondKernel(std::move(rows));
      }
    }

    if (!doc.contains("user_cost")) {
      fail("user_cost: missing");
      ok = false;
    } else {
      sys.user_cost = parse_table_row(doc.at("user_cost"), alph.x, "X",
                                      "user_cost");
      for (double c : sys.user_cost) {
        if (c < 0.0) {
          fail("user_cost: negative entry " + format_number(c));
          ok = false;
        }
      }
    }

    if (!doc.contains("jammer_cost")) {
      fail("jammer_cost: missing");
      ok = false;
    } else {
      const Json& jc = doc.at("jammer_cost");
      if (!jc.is_object()) {
        fail("jammer_cost: expected an object keyed by X symbols");
        ok = false;
      } else {
        for (const auto& [key, value] : jc.items()) {
          (void)value;
          bool known = false;
          for (const auto& sym : alph.x) known |= (sym == key);
          if (!known) {
            fail("jammer_cost: undeclared symbol '" + key +
                 "' for alphabet X");
            ok = false;
          }
        }
        sys.jammer_cost.clear();
        for (const auto& xs : alph.x) {
          if (!jc.contains(xs)) {
            fail("jammer_cost: missing row for X symbol '" + xs + "'");
            ok = false;
            sys.jammer_cost.emplace_back(alph.j.size(), 0.0);
            continue;
          }
          sys.jammer_cost.push_back(parse_table_row(
              jc.at(xs), alph.j, "J", "jammer_cost[X=" + xs + "]"));
        }
      }
    }

    if (!doc.contains("distortion")) {
      fail("distortion: missing");
      ok = false;
    } else {
      const Json& dist = doc.at("distortion");
      if (!dist.is_object()) {
        fail("distortion: expected an object keyed by S symbols");
        ok = false;
      } else {
        sys.distortion.clear();
        for (const auto& ss : alph.s) {
          if (!dist.contains(ss)) {
            fail("distortion: missing row for S symbol '" + ss + "'");
            ok = false;
            sys.distortion.emplace_back(alph.shat.size(), 0.0);
            continue;
          }
          auto row = parse_table_row(dist.at(ss), alph.shat, "Shat",
                                     "distortion[S=" + ss + "]");
          for (double d : row) {
            if (d < 0.0) {
              fail("distortion[S=" + ss + "]: negative entry " +
                   format_number(d));
              ok = false;
            }
          }
          sys.distortion.push_back(std::move(row));
        }
      }
    }

    if (!doc.contains("budgets")) {
      fail("budgets: missing (need P_U and P_J)");
      ok = false;
    } else {
      const Json& budgets = doc.at("budgets");
      if (!budgets.is_object() || !budgets.contains("P_U") ||
          !budgets.contains("P_J")) {
        fail("budgets: expected an object with keys P_U and P_J");
        ok = false;
      } else {
        sys.user_budget = parse_number(budgets.at("P_U"), "budgets.P_U");
        sys.jammer_budget = parse_number(budgets.at("P_J"), "budgets.P_J");
      }
    }

    if (!ok || !diagnostics_.empty()) return;
    try {
      sys.validate();
    } catch (const std::exception& e) {
      fail(e.what());
      return;
    }
    spec_.system = std::move(sys);

    if (doc.contains("profile")) {
      const Json& prof = doc.at("profile");
      StrategyProfile sp;
      bool prof_ok = true;
      if (!prof.is_object() || !prof.contains("encoder") ||
          !prof.contains("decoder") || !prof.contains("jammer")) {
        fail("profile: expected an object with encoder, decoder, jammer");
        return;
      }
      if (auto k = parse_kernel(prof.at("encoder"), alph.s, alph.x, "S", "X",
                                "profile.encoder")) {
        sp.encoder = std::move(*k);
      } else {
        prof_ok = false;
      }
      if (auto k = parse_kernel(prof.at("decoder"), alph.y, alph.shat, "Y",
                                "Shat", "profile.decoder")) {
        sp.decoder = std::move(*k);
      } else {
        prof_ok = false;
      }
      if (auto k = parse_kernel(prof.at("jammer"), alph.x, alph.j, "X", "J",
                                "profile.jammer")) {
        sp.jammer = std::move(*k);
      } else {
        prof_ok = false;
      }
      if (!prof_ok) return;
      const double tol = std::max(1e-9, 10.0 * spec_.max_row_drift);
      const double uc = expected_user_cost(*spec_.system, sp.encoder);
      if (uc > spec_.system->user_budget + tol) {
        fail("profile: expected user cost " + format_number(uc) +
             " exceeds budget P_U = " +
             format_number(spec_.system->user_budget));
      }
      const double jc =
          expected_jammer_cost(*spec_.system, sp.encoder, sp.jammer);
      if (jc > spec_.system->jammer_budget + tol) {
        fail("profile: expected jammer cost " + format_number(jc) +
             " exceeds budget P_J = " +
             format_number(spec_.system->jammer_budget));
      }
      spec_.profile = std::move(sp);
    }
  }

  void load_gaussian(const Json& g) {
    if (!g.is_object()) {
      fail("gaussian: expected an object");
      return;
    }
    GaussianSystem sys;
    if (!g.contains("P_U") || !g.contains("sigma2") || !g.contains("P_J")) {
      fail("gaussian: expected keys P_U, sigma2, P_J");
      return;
    }
    sys.user_budget = parse_number(g.at("P_U"), "gaussian.P_U");
    sys.noise_var = parse_number(g.at("sigma2"), "gaussian.sigma2");
    sys.jammer_budget = parse_number(g.at("P_J"), "gaussian.P_J");
    if (g.contains("source_var")) {
      sys.source_var = parse_number(g.at("source_var"), "gaussian.source_var");
    }
    try {
      sys.validate();
    } catch (const std::exception& e) {
      fail(std::string("gaussian: ") + e.what());
      return;
    }
    spec_.gaussian = sys;
    if (g.contains("profile")) {
      const Json& p = g.at("profile");
      if (!p.is_object()) {
        fail("gaussian.profile: expected an object");
        return;
      }
      LinearGaussianProfile prof = reference_profile(sys);
      if (p.contains("alpha")) {
        prof.jammer_alpha = parse_number(p.at("alpha"), "gaussian.profile.alpha");
      }
      if (p.contains("sigma_R2")) {
        prof.jammer_noise_var =
            parse_number(p.at("sigma_R2"), "gaussian.profile.sigma_R2");
      }
      if (p.contains("kappa")) {
        prof.decoder_gain = parse_number(p.at("kappa"), "gaussian.profile.kappa");
      }
      try {
        check_gaussian_profile_feasible(sys, prof);
      } catch (const std::exception& e) {
        fail(std::string("gaussian.profile: ") + e.what());
        return;
      }
      spec_.gaussian_profile = prof;
    }
  }

  LoadedSpec spec_;
  std::vector<std::string> diagnostics_;
};

inline Json table_to_json(const std::vector<double>& row,
                          const std::vector<std::string>& symbols) {
  Json obj = Json::object();
  for (std::size_t i = 0; i < row.size(); ++i) {
    obj[symbols[i]] = format_number(row[i]);
  }
  return obj;
}

inline Json kernel_to_json(const CondKernel& kernel,
                           const std::vector<std::string>& in_symbols,
                           const std::vector<std::string>& out_symbols) {
  Json obj = Json::object();
  for (std::size_t i = 0; i < kernel.num_inputs(); ++i) {
    obj[in_symbols[i]] = table_to_json(kernel.row(i).probs(), out_symbols);
  }
  return obj;
}

}  // namespace io_detail

inline LoadedSpec load_spec_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const std::exception& e) {
    throw SpecError({std::string("parse error: ") + e.what()});
  }
  return io_detail::Loader().load(doc);
}

inline LoadedSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw SpecError({"cannot open file: " + path});
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_spec_text(buf.str());
}

inline Json spec_to_json(const JsccsjSystem& sys,
                         const StrategyProfile* profile,
                         const Alphabets& alph) {
  Json doc = Json::object();
  doc["schema_version"] = 1;
  Json alphabets = Json::object();
  alphabets["S"] = alph.s;
  alphabets["X"] = alph.x;
  alphabets["J"] = alph.j;
  alphabets["Y"] = alph.y;
  alphabets["Shat"] = alph.shat;
  doc["alphabets"] = std::move(alphabets);
  doc["source"] = io_detail::table_to_json(sys.source.probs(), alph.s);
  Json channel = Json::object();
  for (std::size_t x = 0; x < sys.num_x; ++x) {
    Json by_j = Json::object();
    for (std::size_t j = 0; j < sys.num_j; ++j) {
      by_j[alph.j[j]] =
          io_detail::table_to_json(sys.channel_row(x, j).probs(), alph.y);
    }
    channel[alph.x[x]] = std::move(by_j);
  }
  doc["channel"] = std::move(channel);
  doc["user_cost"] = io_detail::table_to_json(sys.user_cost, alph.x);
  Json jammer_cost = Json::object();
  for (std::size_t x = 0; x < sys.num_x; ++x) {
    jammer_cost[alph.x[x]] =
        io_detail::table_to_json(sys.jammer_cost[x], alph.j);
  }
  doc["jammer_cost"] = std::move(jammer_cost);
  Json distortion = Json::object();
  for (std::size_t s = 0; s < sys.num_s(); ++s) {
    distortion[alph.s[s]] =
        io_detail::table_to_json(sys.distortion[s], alph.shat);
  }
  doc["distortion"] = std::move(distortion);
  Json budgets = Json::object();
  budgets["P_U"] = format_number(sys.user_budget);
  budgets["P_J"] = format_number(sys.jammer_budget);
  doc["budgets"] = std::move(budgets);
  if (profile != nullptr) {
    Json prof = Json::object();
    prof["encoder"] = io_detail::kernel_to_json(profile->encoder, alph.s, alph.x);
    prof["decoder"] =
        io_detail::kernel_to_json(profile->decoder, alph.y, alph.shat);
    prof["jammer"] = io_detail::kernel_to_json(profile->jammer, alph.x, alph.j);
    doc["profile"] = std::move(prof);
  }
  return doc;
}

inline Json gaussian_spec_to_json(const GaussianSystem& sys,
                                  const LinearGaussianProfile* profile) {
  Json doc = Json::object();
  doc["schema_version"] = 1;
  Json g = Json::object();
  g["P_U"] = format_number(sys.user_budget);
  g["sigma2"] = format_number(sys.noise_var);
  g["P_J"] = format_number(sys.jammer_budget);
  if (sys.source_var != 1.0) g["source_var"] = format_number(sys.source_var);
  if (profile != nullptr) {
    Json p = Json::object();
    p["alpha"] = format_number(profile->jammer_alpha);
    p["sigma_R2"] = format_number(profile->jammer_noise_var);
    p["kappa"] = format_number(profile->decoder_gain);
    g["profile"] = std::move(p);
  }
  doc["gaussian"] = std::move(g);
  return doc;
}

inline std::string dump_spec(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace jsccsj

#endif  // JSCCSJ_IO_HPP_
