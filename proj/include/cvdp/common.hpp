#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cvdp {

enum class ErrorKind {
    InvalidArgument,
    Parse,
    Io,
    Config,
    State,
    Internal,
};

/// Error thrown by the core library. `kind()` maps onto the C API status codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

enum class Severity { Info, Warning, Fatal };

struct Diagnostic {
    Severity severity = Severity::Warning;
    std::string file;
    int line = 0;
    std::string message;
};

const char* severity_name(Severity s);

/// One text line per diagnostic: "severity[ file[:line]]: message".
std::string format_diagnostic(const Diagnostic& d);
void write_diagnostics(const std::vector<Diagnostic>& diags, const std::string& path);

/// Derives an independent stream seed from a base seed and a label, so stages
/// of a run (walk sampling, SGD init, bootstrap, ...) never share RNG streams.
std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag);
std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index);

/// Shortest decimal form that round-trips through parsing. Locale independent;
/// used everywhere a double is written to a file.
std::string format_double(double v);

double parse_double(std::string_view text, const std::string& what);
long long parse_int(std::string_view text, const std::string& what);
std::uint64_t parse_uint64(std::string_view text, const std::string& what);

/// Runs fn(0..n-1). With workers <= 1 runs inline in index order; otherwise
/// indices are distributed over `workers` threads. fn must be safe to call
/// concurrently for distinct indices.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

std::vector<std::string> split_ws(std::string_view line);

}  // namespace cvdp
