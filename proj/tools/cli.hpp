#pragma once

// Command-line front end: encrypt, decrypt, bounds, minrounds, mixlab, vectors.
//
// Exit codes: 0 success, 1 usage error, 2 parameter-domain error,
// 3 mixing-lab violation.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "swapornot/swapornot.hpp"

namespace swapornot::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitParameter = 2;
inline constexpr int kExitViolation = 3;

/// Decimal integer, or "base^exponent" (e.g. 2^30).
inline bounds::BigInt parse_bigint(const std::string& s) {
  auto digits = [](const std::string& part) {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) {
      throw ParameterError("not a non-negative integer: '" + part + "'");
    }
    return bounds::BigInt(part);
  };
  const auto caret = s.find('^');
  if (caret == std::string::npos) return digits(s);
  const auto base = digits(s.substr(0, caret));
  const auto exponent = digits(s.substr(caret + 1));
  if (exponent > 4096) throw ParameterError("exponent too large in '" + s + "'");
  return boost::multiprecision::pow(base, exponent.convert_to<unsigned>());
}

inline std::optional<std::uint32_t> parse_rounds(const std::string& s) {
  if (s == "auto") return std::nullopt;
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 9) {
    throw ParameterError("--rounds must be a positive integer or 'auto'");
  }
  return static_cast<std::uint32_t>(std::stoul(s));
}

struct CipherOptions {
  std::string key;
  unsigned radix = 10;
  unsigned length = 0;
  std::string tweak;
  std::string rounds = "auto";
  double target = 1e-10;
  std::string queries;
  bool xor_law = false;
  std::vector<std::string> inputs;
};

inline int run_cipher(const CipherOptions& o, bool encrypt, std::istream& in, std::ostream& out,
                      std::ostream& err) {
  const fpe::FormatSpec format{o.radix, o.length};
  const auto key = PrfKey::from_hex(o.key);
  const auto tweak = bytes_from_hex(o.tweak);
  std::uint32_t rounds = 0;
  if (const auto fixed = parse_rounds(o.rounds)) {
    rounds = *fixed;
  } else {
    fpe::AutoRounds plan{o.target, std::nullopt};
    if (!o.queries.empty()) plan.queries = parse_bigint(o.queries);
    const auto planned = fpe::plan_rounds(format, !tweak.empty(), plan);
    if (!planned) {
      err << "error: no round count up to 65536 meets target " << o.target
          << " for this domain and query budget; lower --queries or raise --target-adv\n";
      return kExitParameter;
    }
    rounds = std::max(*planned, fpe::kMinRounds);
  }
  const fpe::FpeCipher cipher(key, format, rounds,
                              o.xor_law ? GroupLaw::xor_bits : GroupLaw::mod_add);
  auto process = [&](const std::string& text) {
    out << (encrypt ? cipher.encrypt(text, tweak) : cipher.decrypt(text, tweak)) << "\n";
  };
  if (!o.inputs.empty()) {
    for (const auto& text : o.inputs) process(text);
  } else {
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) process(line);
    }
  }
  return kExitOk;
}

struct BoundsOptions {
  std::string n;
  std::vector<std::uint64_t> rounds;
  std::vector<std::string> q;
  std::string model = "cca";
  bool csv = false;
};

inline int run_bounds(const BoundsOptions& o, std::ostream& out) {
  const auto n = parse_bigint(o.n);
  const auto model = bounds::parse_model(o.model);
  std::vector<bounds::BigInt> qs;
  for (const auto& q : o.q) qs.push_back(parse_bigint(q));
  std::ostringstream buffer;  // nothing is printed if any query fails
  if (o.csv) buffer << "N,rounds,q,model,advantage\n";
  for (std::uint64_t r : o.rounds) {
    for (const auto& q : qs) {
      const auto value = bounds::format_advantage(bounds::evaluate({n, r, q, model}));
      if (o.csv) {
        buffer << n << "," << r << "," << q << "," << bounds::model_name(model) << "," << value << "\n";
      } else {
        buffer << value << "\n";
      }
    }
  }
  out << buffer.str();
  return kExitOk;
}

struct MinRoundsOptions {
  std::string n;
  std::string q;
  double target = 1e-10;
  std::string model = "cca";
};

inline int run_minrounds(const MinRoundsOptions& o, std::ostream& out, std::ostream& err) {
  const auto result = bounds::min_rounds(parse_bigint(o.n), parse_bigint(o.q),
                                         bounds::Real(o.target), bounds::parse_model(o.model));
  if (!result) {
    err << "error: target not reachable within 65536 rounds (cap exceeded)\n";
    return kExitParameter;
  }
  out << *result << "\n";
  return kExitOk;
}

struct MixlabOptions {
  std::uint64_t min_n = 3;
  std::uint64_t max_n = 8;
  unsigned max_q = 3;
  std::uint32_t max_r = 12;
  bool csv = false;
  bool canonical_start = false;
};

inline int run_mixlab(const MixlabOptions& o, std::ostream& out) {
  const auto rows = mixing::validate_grid(o.min_n, o.max_n, o.max_q, o.max_r, !o.canonical_start);
  std::size_t failures = 0;
  if (o.csv) out << "law,N,q,r,tvd,bound,pass\n";
  for (const auto& row : rows) {
    if (!row.pass) ++failures;
    if (o.csv) {
      char line[160];
      std::snprintf(line, sizeof line, "%s,%llu,%u,%u,%.12g,%.12g,%s\n", law_name(row.law).c_str(),
                    static_cast<unsigned long long>(row.n), row.q, row.r, row.tvd, row.bound,
                    row.pass ? "pass" : "fail");
      out << line;
    }
  }
  if (!o.csv) out << "checked " << rows.size() << " grid points, " << failures << " violations\n";
  return failures == 0 ? kExitOk : kExitViolation;
}

struct VectorOptions {
  std::string out_path;
  std::string check_path;
};

inline int run_vectors(const VectorOptions& o, std::ostream& out, std::ostream& err) {
  const std::string rendered = fpe::render_golden(fpe::generate_golden());
  if (!o.check_path.empty()) {
    std::ifstream f(o.check_path, std::ios::binary);
    if (!f) throw ParameterError("cannot read " + o.check_path);
    std::ostringstream stored;
    stored << f.rdbuf();
    if (stored.str() != rendered) {
      err << "golden vectors in " << o.check_path << " differ from this build\n";
      return kExitParameter;
    }
    out << "golden vectors match\n";
    return kExitOk;
  }
  if (!o.out_path.empty()) {
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) throw ParameterError("cannot write " + o.out_path);
    f << rendered;
    return kExitOk;
  }
  out << rendered;
  return kExitOk;
}

inline int cli_main(int argc, const char* const* argv, std::istream& in, std::ostream& out,
                    std::ostream& err) {
  CLI::App app{"Swap-or-not small-domain cipher, bound calculator and mixing lab", "swapornot"};
  app.require_subcommand(1);

  CipherOptions cipher_opts;
  auto add_cipher = [&](const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--key", cipher_opts.key, "32-byte PRF key as 64 hex characters")->required();
    sub->add_option("--radix", cipher_opts.radix, "Digit radix in [2, 36]")->capture_default_str();
    sub->add_option("--length", cipher_opts.length, "Digits per message")->required();
    sub->add_option("--tweak", cipher_opts.tweak, "Tweak as hex bytes (default empty)");
    sub->add_option("--rounds", cipher_opts.rounds, "Round count, or 'auto'")->capture_default_str();
    sub->add_option("--target-adv", cipher_opts.target, "Target CCA advantage for auto rounds")
        ->capture_default_str();
    sub->add_option("--queries", cipher_opts.queries,
                    "Query budget for auto rounds (default: half the domain)");
    sub->add_flag("--xor", cipher_opts.xor_law, "Use the xor law (radix^length must be 2^n)");
    sub->add_option("inputs", cipher_opts.inputs, "Messages (default: one per line on stdin)");
    return sub;
  };
  auto* encrypt = add_cipher("encrypt", "Encipher digit strings");
  auto* decrypt = add_cipher("decrypt", "Decipher digit strings");

  BoundsOptions bounds_opts;
  auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate a provable-security bound");
  bounds_cmd->add_option("--N", bounds_opts.n, "Domain size (decimal or a^b)")->required();
  bounds_cmd->add_option("--rounds", bounds_opts.rounds, "Total rounds (passes for thorp)")
      ->required();
  bounds_cmd->add_option("--q", bounds_opts.q, "Query budget(s)")->required();
  bounds_cmd->add_option("--model", bounds_opts.model, "ncpa, cca, ncpa-tweak, cca-tweak, thorp")
      ->capture_default_str();
  bounds_cmd->add_flag("--csv", bounds_opts.csv, "Emit N,rounds,q,model,advantage rows");

  MinRoundsOptions min_opts;
  auto* min_cmd = app.add_subcommand("minrounds", "Smallest round count meeting a target advantage");
  min_cmd->add_option("--N", min_opts.n, "Domain size")->required();
  min_cmd->add_option("--q", min_opts.q, "Query budget")->required();
  min_cmd->add_option("--target-adv", min_opts.target, "Target advantage in (0, 1)")
      ->capture_default_str();
  min_cmd->add_option("--model", min_opts.model, "ncpa, cca, ncpa-tweak, cca-tweak, thorp")
      ->capture_default_str();

  MixlabOptions mix_opts;
  auto* mix_cmd = app.add_subcommand("mixlab", "Exact TVD of the projected shuffle vs. its bound");
  mix_cmd->add_option("--min-n", mix_opts.min_n, "Smallest deck size")->capture_default_str();
  mix_cmd->add_option("--max-n", mix_opts.max_n, "Largest deck size")->capture_default_str();
  mix_cmd->add_option("--max-q", mix_opts.max_q, "Largest tracked-card count")->capture_default_str();
  mix_cmd->add_option("--max-r", mix_opts.max_r, "Largest round count")->capture_default_str();
  mix_cmd->add_flag("--csv", mix_opts.csv, "Emit law,N,q,r,tvd,bound,pass rows");
  mix_cmd->add_flag("--canonical-start", mix_opts.canonical_start,
                    "Start only from (0, 1, ..., q-1) instead of every tuple");

  VectorOptions vec_opts;
  auto* vec_cmd = app.add_subcommand("vectors", "Regenerate the golden test vectors");
  vec_cmd->add_option("--out", vec_opts.out_path, "Write to this file instead of stdout");
  vec_cmd->add_option("--check", vec_opts.check_path, "Compare against a stored file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const auto* failed = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << "error: " << e.what() << "\n" << failed->help();
    return kExitUsage;
  }

  try {
    if (encrypt->parsed()) return run_cipher(cipher_opts, true, in, out, err);
    if (decrypt->parsed()) return run_cipher(cipher_opts, false, in, out, err);
    if (bounds_cmd->parsed()) return run_bounds(bounds_opts, out);
    if (min_cmd->parsed()) return run_minrounds(min_opts, out, err);
    if (mix_cmd->parsed()) return run_mixlab(mix_opts, out);
    if (vec_cmd->parsed()) return run_vectors(vec_opts, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitParameter;
  }
  return kExitUsage;
}

}  // namespace swapornot::cli
