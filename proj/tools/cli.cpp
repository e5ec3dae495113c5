#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wilson/acceptance.hpp"
#include "wilson/io.hpp"
#include "wilson/ktheory.hpp"
#include "wilson/parallel.hpp"

namespace wilson::cli {
namespace {

// Dimensionless gap (a * smallest |eigenvalue|) below which a sweep row is
// flagged as collapsing.
constexpr double kGapCollapse = 0.05;

// Largest operator dimension for --dump-eigenvalues (dense diagonalization).
constexpr index_t kDumpLimit = 4096;

const char* const kSingularHint = "decrease a (increase N) or adjust m";

class UsageError : public Error {
public:
    using Error::Error;
};

std::string num(double v, const char* f = "%.12g")
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

struct FieldConfig {
    int d = 2;
    int n = 16;
    int rank = 1;
    std::vector<std::string> flux;
    std::string input;
    double perturb = 0.0;
    std::uint64_t seed = 1;
};

struct MassConfig {
    double m = 1.0;
    std::string mode = "cutoff";
    double tol = 0.0;
    double tol_scale = 1.0;
    std::string method = "auto";
};

void add_field_options(CLI::App* app, FieldConfig& c)
{
    app->add_option("--d", c.d, "dimension (even)")->capture_default_str()->check(CLI::Range(2, 8));
    app->add_option("--N", c.n, "sites per direction, a = 1/N")->capture_default_str()->check(CLI::Range(2, 1 << 16));
    app->add_option("--rank", c.rank, "tensor the line bundle with a trivial bundle of this rank")
        ->capture_default_str()
        ->check(CLI::Range(1, 64));
    app->add_option("--flux", c.flux, "flux entry j,l=k (1-based, repeatable); unset entries are 0")
        ->take_all()
        ->allow_extra_args(false);
    app->add_option("--input", c.input, "read the gauge field from a WGF1 file instead")->check(CLI::ExistingFile);
    app->add_option("--perturb", c.perturb, "multiply links by exp(iH) with ||H|| <= strength")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    app->add_option("--seed", c.seed, "seed for --perturb")->capture_default_str();
}

void add_mass_options(CLI::App* app, MassConfig& c)
{
    app->add_option("--m", c.m, "mass")->capture_default_str();
    app->add_option("--mode", c.mode, "cutoff (mu = m) or constant (mu = m/N)")
        ->capture_default_str()
        ->check(CLI::IsMember({"cutoff", "constant"}));
    app->add_option("--tol", c.tol, "zero band half-width; 0 picks 1e-8 ||H||")->capture_default_str();
    app->add_option("--tol-scale", c.tol_scale, "multiplies the default zero band")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--method", c.method, "inertia path")
        ->capture_default_str()
        ->check(CLI::IsMember({"auto", "dense", "sparse"}));
}

FluxMatrix parse_flux(int d, const std::vector<std::string>& entries)
{
    static const std::regex re(R"(\s*(\d+)\s*,\s*(\d+)\s*=\s*([+-]?\d+)\s*)");
    FluxMatrix k(d);
    for (const auto& e : entries) {
        std::smatch m;
        if (!std::regex_match(e, m, re))
            throw UsageError("bad --flux '" + e + "': expected j,l=k");
        const int j = std::stoi(m[1]);
        const int l = std::stoi(m[2]);
        if (j < 1 || l < 1 || j > d || l > d || j == l)
            throw UsageError("bad --flux '" + e + "': need 1 <= j != l <= " + std::to_string(d));
        k.set(j - 1, l - 1, std::stol(m[3]));
    }
    return k;
}

std::pair<int, int> parse_entry(const std::string& s, int d)
{
    static const std::regex re(R"(\s*(\d+)\s*,\s*(\d+)\s*)");
    std::smatch m;
    if (!std::regex_match(s, m, re))
        throw UsageError("bad --entry '" + s + "': expected j,l");
    const int j = std::stoi(m[1]);
    const int l = std::stoi(m[2]);
    if (j < 1 || l < 1 || j > d || l > d || j == l)
        throw UsageError("bad --entry '" + s + "'");
    return {j - 1, l - 1};
}

GaugeField build_field(const FieldConfig& c)
{
    GaugeField f;
    if (!c.input.empty()) {
        f = load_gauge_field(c.input);
    } else {
        const auto geom = make_geometry(c.d, c.n);
        f = constant_flux_field(geom, parse_flux(c.d, c.flux));
        if (c.rank > 1)
            f = tensor_field(f, trivial_field(geom, c.rank));
    }
    if (c.perturb > 0.0)
        f = perturb_field(f, c.perturb, c.seed);
    return f;
}

MassMode parse_mode(const std::string& s) { return s == "constant" ? MassMode::Constant : MassMode::Cutoff; }

IndexOptions index_options(const MassConfig& c)
{
    IndexOptions o;
    o.tol = c.tol;
    o.tol_scale = c.tol_scale;
    o.method = c.method == "dense" ? InertiaMethod::Dense
               : c.method == "sparse" ? InertiaMethod::Sparse
                                      : InertiaMethod::Auto;
    return o;
}

std::string flux_label(const FieldConfig& c)
{
    if (!c.input.empty())
        return "from " + c.input;
    const auto k = parse_flux(c.d, c.flux);
    std::string s;
    for (int j = 0; j < k.dim(); ++j)
        for (int l = j + 1; l < k.dim(); ++l)
            if (k(j, l) != 0)
                s += (s.empty() ? "" : " ") + ("K" + std::to_string(j + 1) + std::to_string(l + 1)) + "=" +
                     std::to_string(k(j, l));
    return s.empty() ? "trivial" : s;
}

// ---- sweep rows --------------------------------------------------------

struct SweepRow {
    int d = 0;
    int n = 0;
    std::optional<FluxMatrix> flux;  // empty for fields read from disk
    double m = 0.0;
    MassMode mode = MassMode::Cutoff;
    std::optional<long long> invariant;
    double gap = 0.0;
    double curvature = 0.0;
    std::optional<long long> continuum;
    std::optional<bool> agrees;
    std::string status;
};

void write_sweep_header(std::ostream& out, int d)
{
    out << "# wilson-sweep-csv v1\n";
    out << "d,N";
    for (int j = 0; j < d; ++j)
        for (int l = j + 1; l < d; ++l)
            out << ",K" << j + 1 << l + 1;
    out << ",m,mode,I,gap,curvature,continuum,agrees,status\n";
}

void write_sweep_row(std::ostream& out, const SweepRow& r)
{
    out << r.d << ',' << r.n;
    for (int j = 0; j < r.d; ++j)
        for (int l = j + 1; l < r.d; ++l) {
            out << ',';
            if (r.flux)
                out << (*r.flux)(j, l);
        }
    out << ',' << num(r.m) << ',' << to_string(r.mode) << ',';
    if (r.invariant)
        out << *r.invariant;
    out << ',';
    if (r.invariant)
        out << num(r.gap);
    out << ',' << num(r.curvature) << ',';
    if (r.continuum)
        out << *r.continuum;
    out << ',';
    if (r.agrees)
        out << (*r.agrees ? "true" : "false");
    out << ',' << r.status << '\n';
}

SweepRow compute_row(const FieldConfig& fc, double m, MassMode mode, IndexOptions opts)
{
    SweepRow row;
    const auto f = build_field(fc);
    row.d = f.geometry().dim();
    row.n = f.geometry().extent();
    if (fc.input.empty())
        row.flux = parse_flux(fc.d, fc.flux);
    row.m = m;
    row.mode = mode;
    row.continuum = continuum_index(f);
    row.curvature = estimate_curvature_norm(f);
    const double mu = mode == MassMode::Cutoff ? m : m / row.n;
    std::vector<std::string> flags;
    if (!(mu > 0.0 && mu < 2.0))
        flags.emplace_back("outside-window");
    opts.enforce_range = false;
    try {
        const auto rep = lattice_index(f, m, mode, opts);
        row.invariant = rep.invariant;
        row.gap = rep.inertia.gap;
        row.agrees = rep.agrees;
        if (rep.inertia.gap < kGapCollapse)
            flags.emplace_back("gap-collapse");
    } catch (const SingularOperatorError&) {
        flags.emplace_back("singular");
    }
    if (flags.empty())
        flags.emplace_back("ok");
    for (const auto& s : flags)
        row.status += (row.status.empty() ? "" : "+") + s;
    return row;
}

// ---- commands ----------------------------------------------------------

struct IndexArgs {
    FieldConfig field;
    MassConfig mass;
    std::string export_mtx;
    std::string save_field;
    std::string dump_eigenvalues;
    std::string csv;
};

int cmd_index(const IndexArgs& a, std::ostream& out)
{
    const auto f = build_field(a.field);
    const auto& g = f.geometry();
    const auto mode = parse_mode(a.mass.mode);
    if (!a.save_field.empty())
        save_gauge_field(a.save_field, f, "d=" + std::to_string(g.dim()) + " N=" + std::to_string(g.extent()));
    if (!a.export_mtx.empty() || !a.dump_eigenvalues.empty()) {
        const double mu = mode == MassMode::Cutoff ? a.mass.m : a.mass.m / g.extent();
        const auto h = assemble(f, clifford_rep(g.dim()), mu, mode);
        if (!a.export_mtx.empty()) {
            std::ofstream mtx(a.export_mtx);
            if (!mtx)
                throw Error("cannot write " + a.export_mtx);
            write_matrix_market(mtx, h);
        }
        if (!a.dump_eigenvalues.empty()) {
            if (h.dim() > kDumpLimit)
                throw UsageError("--dump-eigenvalues needs dim <= " + std::to_string(kDumpLimit) + " (got " +
                                 std::to_string(h.dim()) + ")");
            std::ofstream ev(a.dump_eigenvalues);
            if (!ev)
                throw Error("cannot write " + a.dump_eigenvalues);
            for (double v : dense_eigenvalues(h.to_dense()))
                ev << num(v, "%.17g") << '\n';
        }
    }

    out << "field: d=" << g.dim() << " N=" << g.extent() << " rank=" << f.rank() << " " << flux_label(a.field)
        << '\n';
    const auto rep = lattice_index(f, a.mass.m, mode, index_options(a.mass));
    const auto& in = rep.inertia;
    out << "mass: mode=" << to_string(mode) << " m=" << num(rep.m) << " mu=" << num(rep.mu) << '\n';
    out << "I = " << rep.invariant << '\n';
    out << "inertia: n+=" << in.n_plus << " n-=" << in.n_minus << " n0=" << in.n_zero << " tol=" << num(in.tol, "%.3g")
        << " method=" << to_string(in.method) << '\n';
    out << "gap = " << num(in.gap, "%.9g") << (in.method == InertiaMethod::Sparse ? " (estimate)" : "") << '\n';
    out << "curvature = " << num(rep.curvature_estimate, "%.9g") << '\n';
    if (rep.bound_margin)
        out << "bound margin = " << num(*rep.bound_margin, "%.9g") << '\n';
    if (rep.continuum_index) {
        out << "continuum index = " << *rep.continuum_index << '\n';
        out << "agrees = " << (*rep.agrees ? "true" : "false") << '\n';
    } else {
        out << "continuum index = unknown\n";
    }
    for (const auto& w : rep.warnings)
        out << "warning: " << w << '\n';

    if (!a.csv.empty()) {
        std::ofstream csv(a.csv);
        if (!csv)
            throw Error("cannot write " + a.csv);
        SweepRow row;
        row.d = g.dim();
        row.n = g.extent();
        if (a.field.input.empty())
            row.flux = parse_flux(a.field.d, a.field.flux);
        row.m = rep.m;
        row.mode = mode;
        row.invariant = rep.invariant;
        row.gap = in.gap;
        row.curvature = rep.curvature_estimate;
        row.continuum = rep.continuum_index;
        row.agrees = rep.agrees;
        row.status = rep.mu > 0.0 && rep.mu < 2.0 ? "ok" : "outside-window";
        write_sweep_header(csv, g.dim());
        write_sweep_row(csv, row);
    }
    return kExitOk;
}

struct SweepArgs {
    FieldConfig field;
    MassConfig mass;
    std::string var = "m";
    std::vector<double> values;
    std::string entry;
    std::string out;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out)
{
    if (a.values.empty())
        throw UsageError("--values is empty");
    auto values = a.values;
    std::sort(values.begin(), values.end());
    auto as_int = [](double v) {
        if (v != std::floor(v) || std::abs(v) > 1e9)
            throw UsageError("sweep value " + num(v) + " must be an integer");
        return static_cast<long>(v);
    };
    if (a.var != "m" && !a.field.input.empty())
        throw UsageError("--input fixes N and the flux; only --var m can be swept");
    std::pair<int, int> entry{0, 1};
    if (a.var == "flux") {
        if (a.entry.empty())
            throw UsageError("--var flux needs --entry j,l");
        entry = parse_entry(a.entry, a.field.d);
    }
    parse_flux(a.field.d, a.field.flux);  // validate once before fanning out

    std::vector<FieldConfig> fields(values.size(), a.field);
    std::vector<double> masses(values.size(), a.mass.m);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (a.var == "m") {
            masses[i] = values[i];
        } else if (a.var == "N") {
            const long n = as_int(values[i]);
            if (n < 2)
                throw UsageError("lattice too coarse: N = " + std::to_string(n));
            fields[i].n = static_cast<int>(n);
        } else {
            const long k = as_int(values[i]);
            auto& fl = fields[i].flux;
            fl.push_back(std::to_string(entry.first + 1) + "," + std::to_string(entry.second + 1) + "=" +
                         std::to_string(k));
        }
    }
    const auto mode = parse_mode(a.mass.mode);
    const auto opts = index_options(a.mass);
    std::vector<SweepRow> rows(values.size());
    parallel_for(values.size(), [&](std::size_t i) { rows[i] = compute_row(fields[i], masses[i], mode, opts); });

    std::ofstream file;
    std::ostream* sink = &out;
    if (!a.out.empty()) {
        file.open(a.out);
        if (!file)
            throw Error("cannot write " + a.out);
        sink = &file;
    }
    write_sweep_header(*sink, rows.front().d);
    for (const auto& r : rows)
        write_sweep_row(*sink, r);
    return kExitOk;
}

struct AcmArgs {
    std::string builtin;
    index_t n = 8;
    std::string input;
    double m = 1.0;
};

int cmd_acm(const AcmArgs& a, std::ostream& out)
{
    UnitaryTuple t;
    if (!a.input.empty())
        t = load_unitary_tuple(a.input);
    else if (a.builtin == "clock-shift")
        t = clock_shift(a.n);
    else
        throw UsageError("acm needs --builtin clock-shift or --input FILE");
    out << "tuple: d=" << t.d << " n=" << t.n << " epsilon=" << num(t.epsilon, "%.9g") << '\n';
    out << "I = " << acm_invariant(t, a.m) << '\n';
    if (t.d == 2) {
        out << "bott = " << loring_bott_index(t, a.m) << '\n';
        if (t.epsilon < 2.0)
            out << "exel-loring = " << exel_loring_invariant(t) << '\n';
    }
    return kExitOk;
}

struct BoundArgs {
    FieldConfig field;
    double m = 1.0;
    double kappa = 0.0;
};

int cmd_verify_bound(const BoundArgs& a, std::ostream& out)
{
    const auto f = build_field(a.field);
    const double kappa = a.kappa > 0.0 ? a.kappa : f.geometry().extent();
    const auto r = verify_gap_bound(f, clifford_rep(f.geometry().dim()), a.m, kappa);
    out << "kappa = " << num(kappa) << "  m = " << num(a.m) << '\n';
    out << "lambda_min = " << num(r.lambda_min, "%.9g") << '\n';
    out << "lambda_min^2 = " << num(r.lambda_min_sq, "%.9g") << '\n';
    out << "curvature = " << num(r.curvature, "%.9g") << '\n';
    out << "m^2 - 4 d^2 ||R|| = " << num(r.rhs, "%.9g") << '\n';
    out << "margin = " << num(r.margin, "%.9g") << '\n';
    out << "status = " << to_string(r.status) << '\n';
    return kExitOk;
}

struct SelftestArgs {
    std::string csv;
    std::string fault = "none";
    double tolerance_scale = 1.0;
    std::vector<int> only;
    bool full = false;
};

int cmd_selftest(const SelftestArgs& a, std::ostream& out)
{
    using namespace acceptance;
    Options o;
    o.scale = a.full ? Scale::Full : Scale::Reduced;
    o.tolerance_scale = a.tolerance_scale;
    o.fault = a.fault == "clifford-sign" ? Fault::CliffordSign : Fault::None;
    out << "selftest (" << (a.full ? "full" : "reduced") << " scale, tolerance x" << num(o.tolerance_scale)
        << (o.fault == Fault::None ? "" : ", fault " + a.fault) << ")\n";
    auto report = [&](const Criterion& c) {
        print_criterion(out, c);
        out.flush();
    };
    std::vector<Criterion> results;
    if (a.only.empty()) {
        results = run_all(o, report);
    } else {
        auto ids = a.only;
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        for (int id : ids) {
            results.push_back(run_criterion(id, o));
            report(results.back());
        }
    }
    std::size_t passed = 0;
    for (const auto& c : results)
        passed += c.pass;
    out << passed << "/" << results.size() << " criteria pass\n";
    if (!a.csv.empty()) {
        std::ofstream csv(a.csv);
        if (!csv)
            throw Error("cannot write " + a.csv);
        write_csv(csv, results);
    }
    return passed == results.size() ? kExitOk : kExitSelftest;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Index of lattice hermitian Wilson-Dirac operators", "wilson"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from a TOML/INI file");
    app.set_version_flag("--version", "wilson 1.0");

    IndexArgs ia;
    auto* index = app.add_subcommand("index", "lattice index I of a gauge field");
    add_field_options(index, ia.field);
    add_mass_options(index, ia.mass);
    index->add_option("--export-mtx", ia.export_mtx, "write the operator in Matrix Market format");
    index->add_option("--save-field", ia.save_field, "write the gauge field as WGF1");
    index->add_option("--dump-eigenvalues", ia.dump_eigenvalues, "write all eigenvalues, one per line");
    index->add_option("--csv", ia.csv, "write the result as a one-row sweep CSV");

    int gap_d = 2;
    double gap_mu = 1.0;
    int gap_grid = 512;
    auto* gap = app.add_subcommand("gap", "minimum of the symbol modulus over a Brillouin grid");
    gap->add_option("--d", gap_d, "dimension")->capture_default_str()->check(CLI::Range(2, 8));
    gap->add_option("--m", gap_mu, "dimensionless mass mu")->capture_default_str();
    gap->add_option("--grid", gap_grid, "grid points per axis")->capture_default_str()->check(CLI::Range(1, 1 << 16));

    int deg_d = 2;
    double deg_mu = 1.0;
    int deg_grid = 8;
    bool deg_verbose = false;
    auto* degree = app.add_subcommand("degree", "degree of the normalized symbol map T^d -> S^d");
    degree->add_option("--d", deg_d, "dimension")->capture_default_str()->check(CLI::Range(2, 8));
    degree->add_option("--m", deg_mu, "dimensionless mass mu")->capture_default_str();
    degree->add_option("--grid", deg_grid, "Newton seeding resolution per axis")
        ->capture_default_str()
        ->check(CLI::Range(2, 256));
    degree->add_flag("--verbose", deg_verbose, "also print preimages and the corner count");

    AcmArgs aa;
    auto* acm = app.add_subcommand("acm", "invariant of a tuple of almost commuting unitaries");
    auto* builtin = acm->add_option("--builtin", aa.builtin, "generated tuple")->check(CLI::IsMember({"clock-shift"}));
    acm->add_option("--n", aa.n, "matrix size of the builtin tuple")->capture_default_str()->check(CLI::Range(2, 4096));
    acm->add_option("--input", aa.input, "read a WUT1 tuple")->check(CLI::ExistingFile)->excludes(builtin);
    acm->add_option("--m", aa.m, "mass, 0 < m < 2")->capture_default_str();

    BoundArgs ba;
    auto* bound = app.add_subcommand("verify-bound", "check lambda_min^2 >= m^2 - 4 d^2 ||R||");
    add_field_options(bound, ba.field);
    bound->add_option("--m", ba.m, "mass")->capture_default_str();
    bound->add_option("--kappa", ba.kappa, "hopping scale in [m, N]; default N");

    SweepArgs sa;
    auto* sweep = app.add_subcommand("sweep", "index over a list of masses, lattice sizes or flux values");
    add_field_options(sweep, sa.field);
    add_mass_options(sweep, sa.mass);
    sweep->add_option("--var", sa.var, "swept variable")->capture_default_str()->check(CLI::IsMember({"m", "N", "flux"}));
    sweep->add_option("--values", sa.values, "comma-separated values")->delimiter(',')->required();
    sweep->add_option("--entry", sa.entry, "flux entry j,l swept by --var flux");
    sweep->add_option("--out", sa.out, "CSV path (default stdout)");

    SelftestArgs st;
    auto* selftest = app.add_subcommand("selftest", "acceptance suite at reduced sizes");
    selftest->add_option("--csv", st.csv, "write every measured row");
    selftest->add_option("--inject-fault", st.fault, "negative control")
        ->capture_default_str()
        ->check(CLI::IsMember({"none", "clifford-sign"}));
    selftest->add_option("--tolerance-scale", st.tolerance_scale, "multiplies all tolerances")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    selftest->add_option("--only", st.only, "criterion numbers to run (1-10)")->delimiter(',')->check(CLI::Range(1, 10));
    selftest->add_flag("--full", st.full, "full problem sizes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*index)
            return cmd_index(ia, out);
        if (*gap) {
            out << num(symbol_gap(gap_d, gap_mu, gap_grid), "%.6f") << '\n';
            return kExitOk;
        }
        if (*degree) {
            const auto r = symbol_degree(deg_d, deg_mu, deg_grid);
            out << r.degree << '\n';
            if (deg_verbose) {
                out << "resolution = " << r.resolution << '\n';
                out << "preimages = " << r.preimages << '\n';
                out << "perturbations = " << r.perturbations << '\n';
                out << "corner count = " << corner_degree(deg_d, deg_mu) << '\n';
            }
            return kExitOk;
        }
        if (*acm)
            return cmd_acm(aa, out);
        if (*bound)
            return cmd_verify_bound(ba, out);
        if (*sweep)
            return cmd_sweep(sa, out);
        if (*selftest)
            return cmd_selftest(st, out);
    } catch (const SingularOperatorError& e) {
        err << "error: " << e.what() << '\n' << "hint: " << kSingularHint << '\n';
        return kExitSingular;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace wilson::cli
