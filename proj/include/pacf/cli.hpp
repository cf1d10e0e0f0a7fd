#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pacf/arma_model.hpp"
#include "pacf/decay_analysis.hpp"
#include "pacf/scalar.hpp"

namespace pacf::cli {

/// Process exit codes.
enum ExitCode : int {
    kPass = 0,
    kTheoremFailed = 1,
    kInputError = 2,
    kNumericError = 3,
};

enum class Command { Analyze, Verify, Sweep, Export };
enum class Format { Json, Csv };

struct RunConfig {
    Command command = Command::Analyze;
    std::optional<std::string> model_path;
    std::optional<std::string> ar;
    std::optional<std::string> ma;
    std::optional<std::string> sigma2;
    std::size_t n = 100;
    Mode mode = Mode::Rational;
    unsigned precision_bits = ScalarContext::kDefaultPrecision;
    std::size_t bit_cap = ScalarContext::kDefaultBitCap;
    Estimator estimator = Estimator::NthRootTail;
    double window = 0.1;
    std::optional<std::pair<std::size_t, std::size_t>> range;
    std::optional<Format> format;  // default: csv for export, json otherwise
    std::optional<std::string> out;
    std::vector<std::string> grid;  // sweep axes, e.g. "ma1=1/10:9/10:1/10"
    unsigned threads = 0;           // 0: hardware concurrency

    [[nodiscard]] ScalarContext context() const { return {mode, precision_bits, bit_cap}; }
    [[nodiscard]] Format output_format() const {
        return format.value_or(command == Command::Export ? Format::Csv : Format::Json);
    }
};

/// Reads the model from --model or the inline --ar/--ma/--sigma2 flags.
/// Exactly one source is allowed; --sigma2 defaults to 1 inline.
[[nodiscard]] ArmaModel load_model(const RunConfig& config);

/// One sweep axis: parameter name and its values in ascending order.
struct GridAxis {
    std::string parameter;  // "ar<i>", "ma<i>" or "sigma2"
    std::vector<Scalar> values;
};

/// "ma1=1/10:9/10:1/10" (inclusive start:stop:step) or "ma1=1/10,1/2".
[[nodiscard]] GridAxis parse_grid_axis(const std::string& text);

/// Writes the command's document to `out`; returns the exit code.
int cmd_analyze(const RunConfig& config, std::ostream& out);
int cmd_verify(const RunConfig& config, std::ostream& out);
int cmd_sweep(const RunConfig& config, std::ostream& out);
int cmd_export(const RunConfig& config, std::ostream& out);

/// Parses argv (argv[0] is the program name), dispatches, and maps errors to
/// exit codes. Results go to `out` (or --out); a JSON error object is written
/// to `out` on failure and a short message to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pacf::cli
