#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace flagattr::cli {

// Parsed invocation of one subcommand.  `run` is pure: identical configs
// produce identical output.
struct RunConfig {
    enum class Command { Projective, Flag, Bruhat, Network, Verify };
    enum class Format { Text, Json, Dot };

    Command command = Command::Verify;
    int n = 0;
    std::vector<int> dims;      // empty means the full flag signature
    std::vector<double> diag;   // empty means powers of two
    std::uint64_t seed = 42;
    int budget = 200;
    int samples = 1000;
    double tol = 1e-9;
    Format format = Format::Text;
    std::string output_path;    // empty means stdout
    int threads = 1;
};

struct RunResult {
    int code = 0;        // 0 ok, 1 validation failure, 2 verification failure
    std::string out;
    std::string err;
};

RunResult run(const RunConfig& config);

}  // namespace flagattr::cli
