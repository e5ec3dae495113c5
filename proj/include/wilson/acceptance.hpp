#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace wilson::acceptance {

enum class Scale { Full, Reduced };

enum class Fault { None, CliffordSign };

struct Options {
    Scale scale = Scale::Full;
    /// Multiplies the zero-classification tolerance and every numeric
    /// comparison threshold.
    double tolerance_scale = 1.0;
    Fault fault = Fault::None;
};

/// One measured quantity. `status` is "pass", "fail" or "info"; info rows are
/// supplementary and do not affect the verdict.
struct Row {
    std::string item;
    std::string quantity;
    std::string value;
    std::string expected;
    std::string status;
};

struct Criterion {
    std::string id;       // "A1" ... "A10"
    std::string title;
    bool pass = true;
    std::string summary;  // measured values in one line
    std::vector<std::string> notes;
    std::vector<Row> rows;
    double seconds = 0.0;  // wall time; never written to CSV
};

inline constexpr int kCriteria = 10;

/// Runs criterion `id` (1-based).
Criterion run_criterion(int id, const Options& opts);

/// Runs all criteria in order, calling `report` after each one.
std::vector<Criterion> run_all(const Options& opts, const std::function<void(const Criterion&)>& report = {});

/// "A1 PASS  title: summary  [1.2 s]" followed by indented note lines.
void print_criterion(std::ostream& out, const Criterion& c);

/// Versioned CSV of every row, in criterion order. Deterministic for fixed
/// options: timings are excluded and numbers are printed with %.12g.
void write_csv(std::ostream& out, const std::vector<Criterion>& results);

} // namespace wilson::acceptance
