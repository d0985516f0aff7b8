#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace seqent::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

extern const char* const kVersion;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Locale-independent real parser. Accepts plain decimals plus multiples of
/// pi such as "pi", "pi/4", "3pi/8", "0.5*pi".
double parse_real(std::string_view text);
std::size_t parse_count(std::string_view text);
std::uint64_t parse_seed(std::string_view text);
/// Comma-separated list of reals.
std::vector<double> parse_real_list(std::string_view text);

/// 17 significant digits, '.' separator.
std::string format_real(double v);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

using Config = std::map<std::string, std::string>;

/// Flat key = value lines; '#' starts a comment; blank lines ignored.
Config parse_config_text(std::string_view text);
Config read_config_file(const std::filesystem::path& path);

/// Runs one invocation, e.g. {"count", "--lambda", "0.1", "--x", "1,2", "--out", "n.csv"}.
/// Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace seqent::cli
