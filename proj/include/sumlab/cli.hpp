#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sumlab/generators.hpp"
#include "sumlab/report.hpp"

namespace sumlab::cli {

// Usage errors carry the offending flag; run() maps them to exit code 2.
class UsageError : public std::invalid_argument {
public:
  UsageError(std::string flag, const std::string& what)
      : std::invalid_argument(flag + ": " + what), flag_(std::move(flag)) {}
  const std::string& flag() const { return flag_; }

private:
  std::string flag_;
};

// Exit codes: 0 success, 1 failed check or runtime error, 2 usage error.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);  // args exclude the program name

// Inserts `--key value` for each config key whose flag is absent from args.
std::vector<std::string> merge_config(const std::vector<std::string>& args, const Json& config);

FamilySpec family_spec_from_json(const Json& j);

struct VerifyOptions {
  std::uint64_t seed = 1;
  unsigned workers = 1;
  double check_constant = 8.0;  // δ-covering Ruzsa and Plünnecke envelope
  int ruzsa_triples = 200;
};

// The corpus-wide invariant suite.  The returned JSON has no timings and is
// byte-stable for a given seed.  `failed` counts failed checks.
Json verify_corpus(const VerifyOptions& options, std::size_t& failed);

}  // namespace sumlab::cli
