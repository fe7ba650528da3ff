#pragma once

// JSON experiment recipes and code definitions.
//
// Code object:
//   {"type": "block", "name": "golay24" | "qr48"}
//   {"type": "block", "name": ..., "n": 24, "k": 12, "generator_rows": ["hex", ...]}
//   {"type": "conv", "name": ..., "m": 6, "octal": ["634", "564"], "L": 100}
//   {"type": "conv", "name": ..., "m": 16, "taps": ["1110...", ...], "L": 100}
// Hex rows are read MSB-first: the leading bit of the first digit is
// codeword position 0; bits past n must be zero.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqdec/experiment.hpp"

namespace seqdec {

struct ATildeSpec {
  std::vector<double> d_over_n;
  std::vector<double> gamma_db;
  std::vector<std::uint64_t> n_grid;
};

struct RecipeFile {
  ExperimentConfig experiment;
  std::optional<ATildeSpec> atilde;
  std::string description;
};

inline std::uint64_t parse_hex_row(const std::string& hex, int n) {
  if (hex.empty()) throw ConfigError("generator row is empty");
  std::uint64_t row = 0;
  int pos = 0;
  for (char c : hex) {
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else throw ConfigError("generator row '" + hex + "' is not hex");
    for (int b = 3; b >= 0; --b, ++pos) {
      if (!((v >> b) & 1)) continue;
      if (pos >= n) throw ConfigError("generator row '" + hex + "' has bits beyond n");
      row |= 1ULL << pos;
    }
  }
  if (pos < n) throw ConfigError("generator row '" + hex + "' is shorter than n");
  return row;
}

namespace detail {

template <class T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

inline std::vector<double> parse_grid(const nlohmann::json& j) {
  if (j.is_array()) return j.get<std::vector<double>>();
  if (j.is_string()) return parse_snr_range(j.get<std::string>());
  if (j.is_object()) {
    const double start = j.at("start").get<double>();
    const double stop = j.at("stop").get<double>();
    const double step = j.at("step").get<double>();
    return parse_snr_range(format_g17(start) + ":" + format_g17(stop) + ":" + format_g17(step));
  }
  throw ConfigError("SNR grid must be a list, a start:stop:step string or an object");
}

}  // namespace detail

inline CodeRef parse_code(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("code must be an object");
  const auto type = detail::get_or<std::string>(j, "type", "");
  const auto name = detail::get_or<std::string>(j, "name", "");
  if (type == "block") {
    if (!j.contains("generator_rows")) {
      if (name == "golay24") return build_extended_golay();
      if (name == "qr48") return build_extended_qr48();
      throw ConfigError("unknown built-in block code '" + name + "'");
    }
    const int n = detail::get_or<int>(j, "n", 0);
    const int k = detail::get_or<int>(j, "k", 0);
    std::vector<std::uint64_t> rows;
    for (const auto& h : j.at("generator_rows")) rows.push_back(parse_hex_row(h.get<std::string>(), n));
    try {
      return BlockCode(name, n, k, reduce_to_systematic(rows, k));
    } catch (const Error& e) {
      throw ConfigError(std::string("block code: ") + e.what());
    }
  }
  if (type == "conv") {
    const int m = detail::get_or<int>(j, "m", 0);
    const int L = detail::get_or<int>(j, "L", 0);
    if (L < 1) throw ConfigError("conv code needs L >= 1");
    if (detail::get_or<int>(j, "k", 1) != 1) throw ConfigError("conv code: only k = 1 is supported");
    try {
      if (j.contains("taps")) {
        std::vector<std::vector<std::uint8_t>> taps;
        for (const auto& t : j.at("taps")) taps.push_back(bits_from_string(t.get<std::string>()));
        return build_trellis(ConvCode(name, m, std::move(taps)), L);
      }
      if (j.contains("octal")) {
        return build_trellis(parse_octal_generators(j.at("octal").get<std::vector<std::string>>(), m, name), L);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(std::string("conv code: ") + e.what());
    }
    throw ConfigError("conv code needs 'taps' or 'octal'");
  }
  throw ConfigError("code type must be 'block' or 'conv'");
}

inline VariantSelector parse_variant(const std::string& s) {
  if (s == "be") return VariantSelector::BerryEsseen;
  if (s == "chernoff") return VariantSelector::Chernoff;
  if (s == "both") return VariantSelector::Both;
  throw ConfigError("variant must be be, chernoff or both");
}

inline BoundKind parse_be_form(const std::string& s) {
  if (s == "leading") return BoundKind::BerryEsseen;
  if (s == "complete") return BoundKind::BerryEsseenComplete;
  throw ConfigError("be_form must be leading or complete");
}

inline Mode parse_mode(const std::string& s) {
  if (s == "bound") return Mode::Bound;
  if (s == "simulate") return Mode::Simulate;
  if (s == "both") return Mode::Both;
  throw ConfigError("mode must be bound, simulate or both");
}

inline RecipeFile parse_recipe(const nlohmann::json& j) {
  RecipeFile r;
  try {
    r.description = detail::get_or<std::string>(j, "description", "");
    auto& e = r.experiment;
    if (j.contains("code")) e.code = parse_code(j.at("code"));
    if (j.contains("snr_db")) e.snr_grid = detail::parse_grid(j.at("snr_db"));
    e.trials = detail::get_or<std::uint64_t>(j, "trials", e.trials);
    e.seed = detail::get_or<std::uint64_t>(j, "seed", e.seed);
    e.variant = parse_variant(detail::get_or<std::string>(j, "variant", "both"));
    e.be_kind = parse_be_form(detail::get_or<std::string>(j, "be_form", "leading"));
    e.mode = parse_mode(detail::get_or<std::string>(j, "mode", "both"));
    e.workers = detail::get_or<unsigned>(j, "workers", e.workers);
    e.all_zero = detail::get_or<bool>(j, "all_zero", e.all_zero);
    e.max_extensions = detail::get_or<std::uint64_t>(j, "max_extensions", e.max_extensions);
    if (j.contains("atilde")) {
      const auto& a = j.at("atilde");
      ATildeSpec spec;
      auto scalar_or_list = [](const nlohmann::json& v) {
        return v.is_array() ? v.get<std::vector<double>>() : std::vector<double>{v.get<double>()};
      };
      spec.d_over_n = scalar_or_list(a.at("d_over_n"));
      spec.gamma_db = scalar_or_list(a.at("gamma_db"));
      if (a.at("n").is_array()) {
        spec.n_grid = a.at("n").get<std::vector<std::uint64_t>>();
      } else {
        const auto lo = a.at("n").at("start").get<std::uint64_t>();
        const auto hi = a.at("n").at("stop").get<std::uint64_t>();
        const auto step = a.at("n").at("step").get<std::uint64_t>();
        if (step == 0) throw ConfigError("atilde n step must be positive");
        for (std::uint64_t n = lo; n <= hi; n += step) spec.n_grid.push_back(n);
      }
      r.atilde = std::move(spec);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return r;
}

inline RecipeFile load_recipe(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_recipe(j);
}

}  // namespace seqdec
