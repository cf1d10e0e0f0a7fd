#include "pacf/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "pacf/error.hpp"
#include "pacf/model_io.hpp"
#include "pacf/pacf_engine.hpp"

namespace pacf::cli {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------- formatting

std::string dec17(double x) {
    if (std::isinf(x)) {
        return x < 0 ? "-inf" : "inf";
    }
    if (x == 0.0) {
        return "0";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

std::string dec17(const BigFloat& x) { return x.to_decimal(17); }

std::string nth_root_cell(const Scalar& a, std::size_t n, mpfr_prec_t bits) {
    if (n == 0 || a.is_zero()) {
        return "";
    }
    return abs_nth_root(a.to_float(bits), n).to_decimal(17);
}

std::string log10_cell(const Scalar& a, mpfr_prec_t bits) {
    if (a.is_zero()) {
        return "";
    }
    BigFloat out(bits);
    mpfr_log10(out.get(), abs(a.to_float(bits)).get(), MPFR_RNDN);
    return out.to_decimal(17);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') {
            out += '"';
        }
    }
    return out + "\"";
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

void write_csv(const Table& table, std::ostream& out) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out << (i ? "," : "") << csv_field(table.columns[i]);
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << csv_field(row[i]);
        }
        out << '\n';
    }
}

json table_rows_json(const Table& table) {
    json rows = json::array();
    for (const auto& row : table.rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            obj[table.columns[i]] = row[i];
        }
        rows.push_back(std::move(obj));
    }
    return rows;
}

json roots_json(const std::vector<ComplexRoot>& roots) {
    json arr = json::array();
    for (const auto& r : roots) {
        arr.push_back({{"re", dec17(r.re)}, {"im", dec17(r.im)}, {"modulus", dec17(r.modulus)}});
    }
    return arr;
}

json rates_json(const RateInfo& rates) {
    return {{"min_root_modulus_ar", dec17(rates.min_root_modulus_ar)},
            {"min_root_modulus_ma", dec17(rates.min_root_modulus_ma)},
            {"rate_psi", dec17(rates.rate_psi)},
            {"rate_pi", dec17(rates.rate_pi)},
            {"ar_roots", roots_json(rates.ar_roots)},
            {"ma_roots", roots_json(rates.ma_roots)}};
}

// ---------------------------------------------------------------- parsing helpers

std::optional<std::pair<std::size_t, std::size_t>> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw Error(ErrorCode::InvalidInput, "--range must look like first:last");
    }
    try {
        const std::size_t first = std::stoul(text.substr(0, colon));
        const std::size_t last = std::stoul(text.substr(colon + 1));
        if (first > last) {
            throw Error(ErrorCode::InvalidInput, "--range first must not exceed last");
        }
        return std::make_pair(first, last);
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::InvalidInput, "--range must look like first:last");
    }
}

void set_parameter(ArmaModel& model, const std::string& parameter, const Scalar& value) {
    if (parameter == "sigma2") {
        model = ArmaModel(model.ar(), model.ma(), value);
        return;
    }
    const bool is_ar = parameter.rfind("ar", 0) == 0;
    const bool is_ma = parameter.rfind("ma", 0) == 0;
    std::size_t index = 0;
    try {
        index = std::stoul(parameter.substr(2));
    } catch (const std::logic_error&) {
        index = 0;
    }
    if ((!is_ar && !is_ma) || index == 0 || index > 64) {
        throw Error(ErrorCode::InvalidInput, "unknown grid parameter '" + parameter + "' (use ar<i>, ma<i> or sigma2)");
    }
    auto coeffs = is_ar ? model.ar() : model.ma();
    if (coeffs.size() < index) {
        coeffs.resize(index, Scalar(0));
    }
    coeffs[index - 1] = value;
    model = is_ar ? ArmaModel(coeffs, model.ma(), model.sigma2()) : ArmaModel(model.ar(), coeffs, model.sigma2());
}

class OutputTarget {
public:
    OutputTarget(const RunConfig& config, std::ostream& fallback) : stream_(&fallback) {
        if (config.out) {
            file_.open(*config.out, std::ios::binary);
            if (!file_) {
                throw Error(ErrorCode::InvalidInput, "cannot open output file '" + *config.out + "'");
            }
            stream_ = &file_;
        }
    }
    std::ostream& stream() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

// ---------------------------------------------------------------- reports

const std::vector<std::string> kReportColumns = {
    "key",          "model",       "n",           "mode",          "precision_bits",       "fell_back",
    "estimator",    "rate_pacf",   "rate_pi",     "rate_theoretical", "gap_pacf_pi",       "gap_pacf_theoretical",
    "gap_pi_theoretical", "tolerance", "pass",    "error",         "pacf_last",            "pi_last"};

std::vector<std::string> report_row(const std::string& key, const TheoremReport& r) {
    return {key,
            r.model.describe(),
            std::to_string(r.n),
            std::string(mode_name(r.mode)),
            std::to_string(r.precision_bits),
            r.fell_back ? "true" : "false",
            std::string(estimator_name(r.rate_pacf.method)),
            dec17(r.rate_pacf.value),
            dec17(r.rate_pi.value),
            dec17(r.rate_theoretical),
            dec17(r.gap_pacf_pi),
            dec17(r.gap_pacf_theoretical),
            dec17(r.gap_pi_theoretical),
            dec17(r.tolerance),
            r.pass ? "true" : "false",
            "",
            r.pacf_last.to_string(),
            r.pi_last.to_string()};
}

std::vector<std::string> error_row(const std::string& key, const ArmaModel& model, const RunConfig& config,
                                   const Error& e) {
    std::vector<std::string> row(kReportColumns.size());
    row[0] = key;
    row[1] = model.describe();
    row[2] = std::to_string(config.n);
    row[3] = std::string(mode_name(config.mode));
    row[4] = std::to_string(config.precision_bits);
    row[6] = std::string(estimator_name(config.estimator));
    row[14] = "false";
    row[15] = std::string(error_code_name(e.code()));
    return row;
}

json estimate_json(const RateEstimate& e) {
    return {{"method", std::string(estimator_name(e.method))},
            {"value", dec17(e.value)},
            {"window", {e.window_first, e.window_last}},
            {"n_used", e.n_used},
            {"r_squared", dec17(e.r_squared)},
            {"spread", dec17(e.spread)}};
}

VerifyConfig verify_config(const RunConfig& config) {
    VerifyConfig vc;
    vc.ctx = config.context();
    vc.estimator = config.estimator;
    vc.window = config.window;
    vc.range = config.range;
    return vc;
}

}  // namespace

// ---------------------------------------------------------------- model loading

namespace {

ArmaModel load_model_impl(const RunConfig& config, bool allow_default) {
    const bool inline_given = config.ar || config.ma || config.sigma2;
    if (config.model_path && inline_given) {
        throw Error(ErrorCode::InvalidInput, "give either --model or --ar/--ma/--sigma2, not both");
    }
    if (config.model_path) {
        std::ifstream in(*config.model_path, std::ios::binary);
        if (!in) {
            throw Error(ErrorCode::InvalidInput, "cannot read model file '" + *config.model_path + "'");
        }
        std::stringstream buffer;
        buffer << in.rdbuf();
        return parse_model_spec(buffer.str());
    }
    if (!inline_given && !allow_default) {
        throw Error(ErrorCode::InvalidInput, "no model given: use --model <path> or --ar/--ma/--sigma2");
    }
    return {parse_coefficient_list(config.ar.value_or("")), parse_coefficient_list(config.ma.value_or("")),
            Scalar::parse(config.sigma2.value_or("1"))};
}

}  // namespace

ArmaModel load_model(const RunConfig& config) { return load_model_impl(config, false); }

GridAxis parse_grid_axis(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw Error(ErrorCode::InvalidInput, "grid axis must look like ma1=1/10:9/10:1/10 or ma1=1/10,1/2");
    }
    GridAxis axis{text.substr(0, eq), {}};
    const std::string spec = text.substr(eq + 1);
    if (spec.find(':') != std::string::npos) {
        const auto c1 = spec.find(':');
        const auto c2 = spec.find(':', c1 + 1);
        if (c2 == std::string::npos) {
            throw Error(ErrorCode::InvalidInput, "grid range must be start:stop:step");
        }
        const Scalar start = Scalar::parse(spec.substr(0, c1));
        const Scalar stop = Scalar::parse(spec.substr(c1 + 1, c2 - c1 - 1));
        const Scalar step = Scalar::parse(spec.substr(c2 + 1));
        if (step.sign() <= 0) {
            throw Error(ErrorCode::InvalidInput, "grid step must be positive");
        }
        for (Scalar v = start; v <= stop; v += step) {
            if (axis.values.size() >= 100000) {
                throw Error(ErrorCode::InvalidInput, "grid axis has too many points");
            }
            axis.values.push_back(v);
        }
    } else if (spec.find_first_not_of(" \t") != std::string::npos) {
        axis.values = parse_coefficient_list(spec);
    }
    std::sort(axis.values.begin(), axis.values.end());
    axis.values.erase(std::unique(axis.values.begin(), axis.values.end()), axis.values.end());
    return axis;
}

// ---------------------------------------------------------------- commands

int cmd_analyze(const RunConfig& config, std::ostream& out) {
    if (config.n < 1) {
        throw Error(ErrorCode::TooShort, "analyze needs N >= 1");
    }
    const ScalarContext ctx = config.context();
    const auto bits = static_cast<mpfr_prec_t>(ctx.precision_bits);
    const ArmaModel model = load_model(config);
    const ValidatedModel vm = validate(model, ctx.precision_bits);

    const std::size_t n = config.n;
    const WeightSeq psi = psi_weights(model, n, ctx);
    const WeightSeq pi = pi_weights(model, n, ctx);
    const WeightSeq gamma = autocovariances(model, n, ctx);
    const WeightSeq phi = pacf(gamma, n, ctx);

    Table table;
    table.columns = {"n"};
    for (const char* name : {"psi", "pi", "gamma", "pacf"}) {
        table.columns.push_back(name);
        table.columns.push_back(std::string(name) + "_decimal");
        table.columns.push_back(std::string(name) + "_root");
    }
    for (std::size_t k = 0; k <= n; ++k) {
        std::vector<std::string> row{std::to_string(k)};
        for (const WeightSeq* seq : {&psi, &pi, &gamma, &phi}) {
            if (k < seq->first_index()) {
                row.insert(row.end(), {"", "", ""});
                continue;
            }
            const Scalar& a = seq->at(k);
            row.push_back(a.to_string());
            row.push_back(a.to_decimal(17));
            row.push_back(nth_root_cell(a, k, bits));
        }
        table.rows.push_back(std::move(row));
    }

    if (config.output_format() == Format::Csv) {
        out << "# model=" << model.describe() << '\n';
        out << "# mode=" << mode_name(ctx.mode) << " precision_bits=" << ctx.precision_bits << '\n';
        out << "# min_root_modulus_ar=" << dec17(vm.rates.min_root_modulus_ar)
            << " min_root_modulus_ma=" << dec17(vm.rates.min_root_modulus_ma) << '\n';
        out << "# rate_psi=" << dec17(vm.rates.rate_psi) << " rate_pi=" << dec17(vm.rates.rate_pi) << '\n';
        write_csv(table, out);
    } else {
        json doc = {{"command", "analyze"},
                    {"model", model_to_json(model)},
                    {"description", model.describe()},
                    {"n", n},
                    {"mode", std::string(mode_name(ctx.mode))},
                    {"precision_bits", ctx.precision_bits},
                    {"rates", rates_json(vm.rates)},
                    {"columns", table.columns},
                    {"rows", table_rows_json(table)}};
        out << doc.dump(2) << '\n';
    }
    return kPass;
}

int cmd_verify(const RunConfig& config, std::ostream& out) {
    const ArmaModel model = load_model(config);
    const TheoremReport report = verify_theorem(model, config.n, verify_config(config));
    const auto row = report_row("", report);

    if (config.output_format() == Format::Csv) {
        write_csv({kReportColumns, {row}}, out);
    } else {
        json doc = {{"command", "verify"}, {"model_spec", model_to_json(model)}};
        for (std::size_t i = 0; i < kReportColumns.size(); ++i) {
            doc[kReportColumns[i]] = row[i];
        }
        doc["rate_pacf_estimate"] = estimate_json(report.rate_pacf);
        doc["rate_pi_estimate"] = estimate_json(report.rate_pi);
        doc["n"] = report.n;
        doc["precision_bits"] = report.precision_bits;
        doc["pass"] = report.pass;
        doc["fell_back"] = report.fell_back;
        doc["terminating"] = report.terminating;
        doc["min_root_modulus_ma"] = dec17(report.min_root_modulus_ma);
        out << doc.dump(2) << '\n';
    }
    return report.pass ? kPass : kTheoremFailed;
}

int cmd_sweep(const RunConfig& config, std::ostream& out) {
    std::vector<GridAxis> axes;
    for (const auto& g : config.grid) {
        axes.push_back(parse_grid_axis(g));
    }
    std::size_t total = axes.empty() ? 0 : 1;
    for (const auto& a : axes) {
        total *= a.values.size();
    }
    if (total == 0) {
        throw Error(ErrorCode::EmptyGrid, "sweep grid has no points");
    }
    const ArmaModel base = load_model_impl(config, true);

    // Odometer order with the last axis varying fastest; axes are sorted, so
    // this is ascending order of the grid key.
    struct Point {
        std::string key;
        ArmaModel model;
    };
    std::vector<Point> points;
    points.reserve(total);
    std::vector<std::size_t> idx(axes.size(), 0);
    for (std::size_t count = 0; count < total; ++count) {
        ArmaModel m = base;
        std::string key;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            const Scalar& v = axes[a].values[idx[a]];
            set_parameter(m, axes[a].parameter, v);
            key += (a ? ";" : "") + axes[a].parameter + "=" + v.to_string();
        }
        points.push_back({std::move(key), std::move(m)});
        for (std::size_t a = axes.size(); a-- > 0;) {
            if (++idx[a] < axes[a].values.size()) {
                break;
            }
            idx[a] = 0;
        }
    }

    struct Outcome {
        std::vector<std::string> row;
        std::optional<TheoremReport> report;
    };
    std::vector<Outcome> outcomes(points.size());
    const VerifyConfig vc = verify_config(config);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            try {
                TheoremReport r = verify_theorem(points[i].model, config.n, vc);
                outcomes[i].row = report_row(points[i].key, r);
                outcomes[i].report = std::move(r);
            } catch (const Error& e) {
                outcomes[i].row = error_row(points[i].key, points[i].model, config, e);
            }
        }
    };
    const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
    const unsigned n_threads =
        static_cast<unsigned>(std::min<std::size_t>(config.threads ? config.threads : hw, points.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }

    Table table{kReportColumns, {}};
    std::size_t passed = 0;
    double max_gap_theoretical = 0.0;
    double max_gap_pi = 0.0;
    for (const auto& o : outcomes) {
        table.rows.push_back(o.row);
        if (o.report) {
            passed += o.report->pass ? 1 : 0;
            max_gap_theoretical = std::max(max_gap_theoretical, o.report->gap_pacf_theoretical);
            max_gap_pi = std::max(max_gap_pi, o.report->gap_pacf_pi);
        }
    }
    const std::size_t failed = outcomes.size() - passed;

    if (config.output_format() == Format::Csv) {
        write_csv(table, out);
        out << "# summary rows=" << outcomes.size() << " passed=" << passed << " failed=" << failed
            << " max_gap_pacf_theoretical=" << dec17(max_gap_theoretical) << " max_gap_pacf_pi=" << dec17(max_gap_pi)
            << '\n';
    } else {
        json doc = {{"command", "sweep"},
                    {"n", config.n},
                    {"columns", table.columns},
                    {"rows", table_rows_json(table)},
                    {"summary",
                     {{"rows", outcomes.size()},
                      {"passed", passed},
                      {"failed", failed},
                      {"max_gap_pacf_theoretical", dec17(max_gap_theoretical)},
                      {"max_gap_pacf_pi", dec17(max_gap_pi)}}}};
        out << doc.dump(2) << '\n';
    }
    return failed == 0 ? kPass : kTheoremFailed;
}

int cmd_export(const RunConfig& config, std::ostream& out) {
    if (config.n < 1) {
        throw Error(ErrorCode::TooShort, "export needs N >= 1");
    }
    const ScalarContext ctx = config.context();
    const auto bits = static_cast<mpfr_prec_t>(ctx.precision_bits);
    const ArmaModel model = load_model(config);
    const ValidatedModel vm = validate(model, ctx.precision_bits);
    const std::size_t n = config.n;
    const WeightSeq pi = pi_weights(model, n, ctx);
    const WeightSeq phi = pacf(autocovariances(model, n, ctx), n, ctx);

    BigFloat log10_rate(bits);
    const bool has_rate = !vm.rates.rate_pi.is_zero();
    if (has_rate) {
        mpfr_log10(log10_rate.get(), vm.rates.rate_pi.rounded(bits).get(), MPFR_RNDN);
    }

    Table table{{"n", "log10_abs_pacf", "log10_abs_pi", "n_log10_rate"}, {}};
    for (std::size_t k = 1; k <= n; ++k) {
        std::string rate_cell;
        if (has_rate) {
            BigFloat v = log10_rate * BigFloat(static_cast<double>(k), bits);
            rate_cell = v.to_decimal(17);
        }
        table.rows.push_back({std::to_string(k), log10_cell(phi.at(k), bits), log10_cell(pi.at(k), bits), rate_cell});
    }
    if (config.output_format() == Format::Csv) {
        write_csv(table, out);
    } else {
        json doc = {{"command", "export"},
                    {"model", model_to_json(model)},
                    {"columns", table.columns},
                    {"rows", table_rows_json(table)}};
        out << doc.dump(2) << '\n';
    }
    return kPass;
}

// ---------------------------------------------------------------- entry point

namespace {

void write_error(std::ostream& out, std::ostream& err, std::string_view code, const std::string& message) {
    json doc = {{"error", {{"code", std::string(code)}, {"message", message}}}};
    out << doc.dump(2) << '\n';
    err << "error: " << code << ": " << message << '\n';
}

void add_common_options(CLI::App& sub, RunConfig& config, std::string& mode, std::string& estimator,
                        std::string& format, std::string& range) {
    sub.add_option("--model", config.model_path, "Model spec file (JSON with ar, ma, sigma2)");
    sub.add_option("--ar", config.ar, "Comma-separated AR coefficients, e.g. \"1/2,-1/4\"");
    sub.add_option("--ma", config.ma, "Comma-separated MA coefficients");
    sub.add_option("--sigma2", config.sigma2, "Innovation variance (default 1)");
    sub.add_option("--n", config.n, "Number of terms / maximum order")->check(CLI::Range(1UL, 1000000UL));
    sub.add_option("--mode", mode, "Arithmetic mode")->check(CLI::IsMember({"rational", "float"}));
    sub.add_option("--precision", config.precision_bits, "Float / root-finding precision in bits")
        ->envname("PACF_PRECISION_BITS")
        ->check(CLI::Range(53U, 1U << 20));
    sub.add_option("--bit-cap", config.bit_cap, "Largest rational bit length before BitGrowthCap");
    sub.add_option("--estimator", estimator, "Decay-rate estimator")->check(CLI::IsMember({"tail", "regress"}));
    sub.add_option("--window", config.window, "Trailing fraction used by the tail estimator")
        ->check(CLI::Range(1e-9, 1.0));
    sub.add_option("--range", range, "Index range first:last for the regression estimator");
    sub.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub.add_option("--out", config.out, "Write output to this path instead of stdout");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig config;
    std::string mode = "rational";
    std::string estimator = "tail";
    std::string format;
    std::string range;

    CLI::App app{"Partial autocorrelation and AR(inf) decay-rate analysis for ARMA models", "pacf"};
    app.require_subcommand(1, 1);
    CLI::App* analyze = app.add_subcommand("analyze", "Emit psi, pi, gamma and PACF prefixes with decay columns");
    CLI::App* verify = app.add_subcommand("verify", "Compare PACF and pi-weight decay rates (exit 1 on failure)");
    CLI::App* sweep = app.add_subcommand("sweep", "Run verify over a parameter grid");
    CLI::App* exporter = app.add_subcommand("export", "Plot-ready log10 columns");
    for (CLI::App* sub : {analyze, verify, sweep, exporter}) {
        add_common_options(*sub, config, mode, estimator, format, range);
    }
    sweep->add_option("--grid", config.grid, "Axis such as ma1=1/10:9/10:1/10 or ma1=1/10,1/2 (repeatable)");
    sweep->add_option("--threads", config.threads, "Worker threads (default: hardware concurrency)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kPass;
    } catch (const CLI::ParseError& e) {
        write_error(out, err, error_code_name(ErrorCode::InvalidInput), e.what());
        return kInputError;
    }

    try {
        config.mode = mode == "float" ? Mode::Float : Mode::Rational;
        config.estimator = estimator == "regress" ? Estimator::LogRegression : Estimator::NthRootTail;
        if (format == "csv") {
            config.format = Format::Csv;
        } else if (format == "json") {
            config.format = Format::Json;
        }
        if (!range.empty()) {
            config.range = parse_range(range);
        }
        OutputTarget target(config, out);
        if (analyze->parsed()) {
            config.command = Command::Analyze;
            return cmd_analyze(config, target.stream());
        }
        if (verify->parsed()) {
            config.command = Command::Verify;
            return cmd_verify(config, target.stream());
        }
        if (sweep->parsed()) {
            config.command = Command::Sweep;
            return cmd_sweep(config, target.stream());
        }
        config.command = Command::Export;
        return cmd_export(config, target.stream());
    } catch (const Error& e) {
        write_error(out, err, error_code_name(e.code()), e.what());
        return is_input_error(e.code()) ? kInputError : kNumericError;
    } catch (const std::exception& e) {
        write_error(out, err, "InternalError", e.what());
        return kNumericError;
    }
}

}  // namespace pacf::cli
