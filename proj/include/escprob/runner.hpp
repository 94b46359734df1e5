#ifndef ESCPROB_RUNNER_HPP
#define ESCPROB_RUNNER_HPP

#include "escprob/rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace escprob {

enum class Method { recinvert, powerseries, oracle, simulate };
enum class OutputFormat { tsv, jsonl };

struct RunConfig {
    std::string graph_path;
    std::string graph_text; // used instead of graph_path when non-empty
    int t = -1;
    int p = -1;
    Rational eps = Rational(1, 1000000);
    Method method = Method::recinvert;
    std::optional<std::uint64_t> h_override;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    OutputFormat format = OutputFormat::tsv;
};

// Exit codes: 0 success, 2 singular system, 3 input error.
constexpr int kExitOk = 0;
constexpr int kExitSingular = 2;
constexpr int kExitInput = 3;

Method method_from_name(const std::string& name);

// Emits one row per vertex: vertex, tag in {generic, one, zero, undefined},
// decimal probability (ceil(-log10 eps)+2 significant digits), lossless
// hex form. Diagnostics go to err.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

struct BenchConfig {
    Method method = Method::recinvert;
    Rational eps = Rational(1, 1000000);
    std::vector<int> sizes; // n=3 is the 3-path, n>=4 the hub-path family
    OutputFormat format = OutputFormat::tsv;
};

struct BenchRow {
    int n = 0;
    int m = 0; // generic system dimension
    std::uint64_t adds = 0, muls = 0, divs = 0;
    std::uint64_t total_ops = 0;
    std::uint64_t bit_work = 0;
    std::uint64_t max_bits = 0;
    std::uint64_t predicted_max_bits = 0; // from precision_schedule
};

std::vector<BenchRow> bench_rows(const BenchConfig& config);
int bench(const BenchConfig& config, std::ostream& out, std::ostream& err);

} // namespace escprob

#endif
