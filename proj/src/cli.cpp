#include "treesic/cli.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "CLI11.hpp"
#include "json.hpp"
#include "treesic/arrivals.hpp"
#include "treesic/asymptotics.hpp"
#include "treesic/bounds.hpp"
#include "treesic/cri.hpp"
#include "treesic/sim.hpp"

namespace treesic::cli {

namespace {

using nlohmann::json;

enum class Format { Csv, Json };

// Column-ordered rows that print either as CSV (floats with 6 significant
// digits, or a fixed decimal count for published-table targets) or as a
// JSON array of objects at full precision.
class Table {
  public:
    explicit Table(std::vector<std::string> cols, int decimals = -1)
        : cols_(std::move(cols)), decimals_(decimals) {}

    void add(std::vector<json> row) {
        if (row.size() != cols_.size()) throw std::logic_error("Table: row arity mismatch");
        rows_.push_back(std::move(row));
    }

    void write(Format fmt, std::ostream& out) const {
        if (fmt == Format::Csv) {
            for (size_t i = 0; i < cols_.size(); ++i)
                out << (i ? "," : "") << cols_[i];
            out << "\n";
            for (const auto& row : rows_) {
                for (size_t i = 0; i < row.size(); ++i)
                    out << (i ? "," : "") << cell(row[i]);
                out << "\n";
            }
        } else {
            json arr = json::array();
            for (const auto& row : rows_) {
                json obj = json::object();
                for (size_t i = 0; i < row.size(); ++i) obj[cols_[i]] = row[i];
                arr.push_back(std::move(obj));
            }
            out << arr.dump(2) << "\n";
        }
    }

  private:
    std::string cell(const json& v) const {
        if (v.is_null()) return "";
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_float()) {
            char buf[64];
            if (decimals_ >= 0)
                std::snprintf(buf, sizeof buf, "%.*f", decimals_, v.get<double>());
            else
                std::snprintf(buf, sizeof buf, "%.6g", v.get<double>());
            return buf;
        }
        return v.dump();
    }

    std::vector<std::string> cols_;
    int decimals_;
    std::vector<std::vector<json>> rows_;
};

constexpr int kTableK[] = {1, 2, 4, 8, 16, 32, 64};

void run_cri(int K, int n_max, double p, bool no_sic, const std::string& method,
             Format fmt, std::ostream& out) {
    const bool sic = !no_sic;
    std::vector<double> L;
    const char* label = nullptr;
    if (method == "series" || (method == "auto" && p == 0.5)) {
        if (p != 0.5) throw std::invalid_argument("cri: the series method requires --p 0.5");
        L = cri_table_series(n_max, K, sic);
        label = to_string(sic ? CriMethod::Series : CriMethod::NoSicSeries);
    } else if (method == "recursive" || method == "auto") {
        L = cri_table_recursive(n_max, K, p, sic);
        label = to_string(sic ? CriMethod::Recursive : CriMethod::NoSicRecursive);
    } else {
        if (!sic)
            throw std::invalid_argument("cri: the closed method is defined with cancellation only");
        L.resize(n_max + 1);
        for (int n = 0; n <= n_max; ++n) L[n] = expected_cri_closed_form(n, K, p).value;
        label = to_string(CriMethod::ClosedForm);
    }
    Table t({"n", "K", "p", "sic", "method", "L_n", "T_n"});
    for (int n = 0; n <= n_max; ++n)
        t.add({n, K, p, sic ? 1 : 0, label, L[n], conditional_throughput(n, K, L[n])});
    t.write(fmt, out);
}

void run_asym(int K, double n, Format fmt, std::ostream& out) {
    const auto [L_ns, T_ns] = asymptotic_no_sic(n, K);
    Table t({"n", "K", "L_hat", "T_hat", "L_hat_no_sic", "T_hat_no_sic"});
    t.add({n, K, asymptotic_cri(n, K), asymptotic_throughput(n, K), L_ns, T_ns});
    t.write(fmt, out);
}

void run_amplitude(int K_max, Format fmt, std::ostream& out) {
    Table t({"K", "amplitude", "phase"});
    for (int K = 1; K <= K_max; ++K) {
        const AsymptoticModel model = asymptotic_model(K);
        t.add({K, model.amplitude, model.phase});
    }
    t.write(fmt, out);
}

void resolve_anchor(int K, bool sic, int* m, int* n_eval) {
    const WindowedAnchor a = canonical_windowed_anchor(K, sic);
    if (*m == 0) {
        *m = a.m;
        if (*n_eval == 0) *n_eval = a.n_eval;
    }
    if (*n_eval == 0) *n_eval = 2 * *m;
}

void run_bounds(int K, int m, int n_eval, Format fmt, std::ostream& out,
                std::ostream& err) {
    resolve_anchor(K, true, &m, &n_eval);
    const BoundsResult res = compute_bounds(m, K, n_eval);
    if (!res.plateaued)
        err << "warning: ratio sequence still moving at n_eval = " << n_eval
            << "; bounds may be loose\n";
    Table t({"K", "m", "n_eval", "alpha", "beta", "A", "B"});
    t.add({res.K, res.m, res.n_eval, res.alpha_m, res.beta_m, res.A_m, res.B_m});
    t.write(fmt, out);
}

void add_stability_row(Table& t, const StabilityReport& rep) {
    t.add({rep.K, to_string(rep.access), rep.lambda_S, rep.lambda_U,
           rep.lambda_S_norm, rep.lambda_U_norm,
           rep.argmax_z ? json(*rep.argmax_z) : json()});
}

const std::vector<std::string> kStabilityCols = {
    "K", "access", "lambda_S", "lambda_U", "lambda_S_norm", "lambda_U_norm", "argmax_z"};

void run_gated(int K, Format fmt, std::ostream& out) {
    Table t(kStabilityCols);
    add_stability_row(t, gated_bounds(K));
    t.write(fmt, out);
}

void run_windowed(int K, int m, int n_eval, bool no_sic, Format fmt, std::ostream& out) {
    resolve_anchor(K, !no_sic, &m, &n_eval);
    Table t(kStabilityCols);
    add_stability_row(t, no_sic ? windowed_bounds_no_sic(K, m, n_eval)
                                : windowed_bounds(K, m, n_eval));
    t.write(fmt, out);
}

std::vector<double> make_grid(double z_max, double z_step) {
    if (!(z_step > 0.0)) throw std::invalid_argument("sensitivity: --z-step must be > 0");
    if (!(z_max >= z_step)) throw std::invalid_argument("sensitivity: --z-max must be >= --z-step");
    const int N = static_cast<int>(z_max / z_step + 1e-9);
    std::vector<double> grid(N);
    for (int i = 0; i < N; ++i) grid[i] = (i + 1) * z_step;
    return grid;
}

void run_sensitivity(int K, int m, double z_max, double z_step, Format fmt,
                     std::ostream& out) {
    if (m == 0) m = canonical_windowed_anchor(K, true).m;
    if (z_max == 0.0) z_max = 8.0 * m;
    const auto curve = sensitivity_curve(K, m, make_grid(z_max, z_step));
    Table t({"z", "F", "F_no_sic"});
    for (const auto& pt : curve) t.add({pt.z, pt.F, pt.F_no_sic});
    t.write(fmt, out);
}

json trace_slot(const SlotEvent& ev) {
    const bool counted = ev.kind == SlotKind::Idle || ev.kind == SlotKind::Success ||
                         ev.kind == SlotKind::Collision;
    return counted ? json(ev.index) : json();
}

void run_simulate(int K, int d, int n, std::uint64_t trials, std::uint64_t seed,
                  double p, bool no_sic, bool trace, Format fmt, std::ostream& out) {
    const bool sic = !no_sic;
    if (d != 2 && p != 0.5)
        throw std::invalid_argument("simulate: d-ary runs are fair split; drop --p");
    if (d != 2) p = 1.0 / d;
    const ProtocolConfig config =
        d == 2 ? ProtocolConfig::binary(K, p, sic) : ProtocolConfig::dary(K, d, sic);
    if (trace) {
        const auto [outcome, events] = simulate_cri_trace(config, n, seed);
        (void)outcome;
        Table t({"slot", "kind", "count", "depth"});
        for (const auto& ev : events)
            t.add({trace_slot(ev), to_string(ev.kind), ev.count, ev.depth});
        t.write(fmt, out);
        return;
    }
    const MonteCarloStats stats = monte_carlo(config, n, trials, seed);
    Table t({"n", "K", "d", "p", "sic", "trials", "seed", "mean_slots", "std_dev",
             "ci95", "throughput"});
    t.add({n, K, d, p, sic ? 1 : 0, trials, seed, stats.mean_slots, stats.std_dev,
           stats.ci95_half_width, stats.throughput});
    t.write(fmt, out);
}

void run_simulate_windowed(int K, double lambda, double delta, std::uint64_t windows,
                           std::uint64_t seed, Format fmt, std::ostream& out) {
    const WindowedSimStats stats =
        simulate_windowed(ProtocolConfig::binary(K), lambda, delta, windows, seed);
    Table t({"K", "lambda", "delta", "windows", "seed", "mean_cri", "mean_wait", "drift"});
    t.add({K, lambda, delta, windows, seed, stats.mean_cri, stats.mean_wait, stats.drift});
    t.write(fmt, out);
}

Table make_table1() {
    Table t({"K", "m", "n_eval", "alpha", "beta", "A", "B"}, 4);
    for (int K : kTableK) {
        const WindowedAnchor a = canonical_windowed_anchor(K, true);
        const BoundsResult res = compute_bounds(a.m, K, a.n_eval);
        t.add({res.K, res.m, res.n_eval, res.alpha_m, res.beta_m, res.A_m, res.B_m});
    }
    return t;
}

Table make_table2() {
    Table t({"K", "lambda_S_norm", "lambda_U_norm"}, 4);
    for (int K : kTableK) {
        const StabilityReport rep = gated_bounds(K);
        t.add({K, rep.lambda_S_norm, rep.lambda_U_norm});
    }
    return t;
}

Table make_table3() {
    Table t({"K", "sic_lambda_S_norm", "sic_lambda_U_norm", "no_sic_lambda_S_norm"}, 4);
    for (int K : kTableK) {
        const WindowedAnchor a = canonical_windowed_anchor(K, true);
        const StabilityReport sic = windowed_bounds(K, a.m, a.n_eval);
        const WindowedAnchor an = canonical_windowed_anchor(K, false);
        const StabilityReport ns = windowed_bounds_no_sic(K, an.m, an.n_eval);
        t.add({K, sic.lambda_S_norm, sic.lambda_U_norm, ns.lambda_S_norm});
    }
    return t;
}

Table make_figcri(bool throughput) {
    Table t(throughput ? std::vector<std::string>{"n", "K", "T_n", "T_hat"}
                       : std::vector<std::string>{"n", "K", "L_n", "L_hat"});
    for (int K : kTableK) {
        const std::vector<double> L = cri_table_series(1000, K, true);
        for (int n = 1; n <= 1000; ++n) {
            if (throughput)
                t.add({n, K, conditional_throughput(n, K, L[n]),
                       asymptotic_throughput(n, K)});
            else
                t.add({n, K, L[n], asymptotic_cri(n, K)});
        }
    }
    return t;
}

Table make_figamplitude() {
    Table t({"K", "amplitude", "phase"});
    for (int K = 1; K <= 64; ++K) {
        const AsymptoticModel model = asymptotic_model(K);
        t.add({K, model.amplitude, model.phase});
    }
    return t;
}

Table make_figsensitivity() {
    Table t({"z", "F", "F_no_sic"});
    for (const auto& pt : sensitivity_curve(1, 50, make_grid(2048.0, 0.5)))
        t.add({pt.z, pt.F, pt.F_no_sic});
    return t;
}

Table make_figdarymst() {
    Table t({"n", "K", "d", "p", "sic", "trials", "seed", "mean_slots", "std_dev",
             "ci95", "throughput"});
    for (int d = 2; d <= 8; ++d) {
        const MonteCarloStats s = monte_carlo(ProtocolConfig::dary(1, d), 1000, 10000, 42);
        t.add({1000, 1, d, 1.0 / d, 1, 10000, 42, s.mean_slots, s.std_dev,
               s.ci95_half_width, s.throughput});
    }
    return t;
}

Table make_figdarythroughput() {
    Table t({"n", "K", "d", "p", "sic", "trials", "seed", "mean_slots", "std_dev",
             "ci95", "throughput"});
    constexpr int grid[] = {10, 14, 20, 28, 40, 57, 80, 113, 160, 226, 320, 453, 640, 905, 1000};
    for (int d : {3, 8}) {
        for (int n : grid) {
            const MonteCarloStats s = monte_carlo(ProtocolConfig::dary(1, d), n, 10000, 42);
            t.add({n, 1, d, 1.0 / d, 1, 10000, 42, s.mean_slots, s.std_dev,
                   s.ci95_half_width, s.throughput});
        }
    }
    return t;
}

const char* gnuplot_script(ReproduceTarget target) {
    switch (target) {
        case ReproduceTarget::FigCri:
            return "set datafile separator \",\"\n"
                   "set logscale xy 10\n"
                   "set xlabel \"n\"\nset ylabel \"expected CRI length (slots)\"\n"
                   "plot for [k in \"1 2 4 8 16 32 64\"] \"figcri.csv\" every ::1 "
                   "using 1:($2 == real(k) ? $3 : 1/0) with lines title \"K=\".k\n";
        case ReproduceTarget::FigThroughput:
            return "set datafile separator \",\"\n"
                   "set logscale x 10\n"
                   "set xlabel \"n\"\nset ylabel \"conditional throughput\"\n"
                   "plot for [k in \"1 2 4 8 16 32 64\"] \"figthroughput.csv\" every ::1 "
                   "using 1:($2 == real(k) ? $3 : 1/0) with lines title \"K=\".k\n";
        case ReproduceTarget::FigAmplitude:
            return "set datafile separator \",\"\n"
                   "set logscale y 10\n"
                   "set xlabel \"K\"\nset ylabel \"oscillation amplitude\"\n"
                   "plot \"figamplitude.csv\" every ::1 using 1:2 with linespoints notitle\n";
        case ReproduceTarget::FigSensitivity:
            return "set datafile separator \",\"\n"
                   "set xlabel \"mean window load z\"\nset ylabel \"F(z)\"\n"
                   "plot \"figsensitivity.csv\" every ::1 using 1:2 with lines title \"SIC\", "
                   "\"\" every ::1 using 1:3 with lines title \"no SIC\"\n";
        case ReproduceTarget::FigDaryMst:
            return "set datafile separator \",\"\n"
                   "set xlabel \"d\"\nset ylabel \"throughput\"\n"
                   "plot \"figdarymst.csv\" every ::1 using 3:11 with linespoints notitle\n";
        case ReproduceTarget::FigDaryThroughput:
            return "set datafile separator \",\"\n"
                   "set logscale x 10\n"
                   "set xlabel \"n\"\nset ylabel \"throughput\"\n"
                   "plot for [dd in \"3 8\"] \"figdarythroughput.csv\" every ::1 "
                   "using 1:($3 == real(dd) ? $11 : 1/0) with linespoints title \"d=\".dd\n";
        default:
            return nullptr;
    }
}

struct TargetSpec {
    const char* name;
    ReproduceTarget target;
};

constexpr TargetSpec kTargets[] = {
    {"table1", ReproduceTarget::Table1},
    {"table2", ReproduceTarget::Table2},
    {"table3", ReproduceTarget::Table3},
    {"figcri", ReproduceTarget::FigCri},
    {"figthroughput", ReproduceTarget::FigThroughput},
    {"figamplitude", ReproduceTarget::FigAmplitude},
    {"figsensitivity", ReproduceTarget::FigSensitivity},
    {"figdarymst", ReproduceTarget::FigDaryMst},
    {"figdarythroughput", ReproduceTarget::FigDaryThroughput},
};

void run_reproduce(const std::string& name, const std::string& out_dir, bool gnuplot,
                   std::ostream& out) {
    ReproduceTarget target{};
    bool found = false;
    for (const auto& spec : kTargets) {
        if (name == spec.name) {
            target = spec.target;
            found = true;
        }
    }
    if (!found) throw std::invalid_argument("reproduce: unknown target " + name);

    Table table = [&] {
        switch (target) {
            case ReproduceTarget::Table1: return make_table1();
            case ReproduceTarget::Table2: return make_table2();
            case ReproduceTarget::Table3: return make_table3();
            case ReproduceTarget::FigCri: return make_figcri(false);
            case ReproduceTarget::FigThroughput: return make_figcri(true);
            case ReproduceTarget::FigAmplitude: return make_figamplitude();
            case ReproduceTarget::FigSensitivity: return make_figsensitivity();
            case ReproduceTarget::FigDaryMst: return make_figdarymst();
            case ReproduceTarget::FigDaryThroughput: return make_figdarythroughput();
        }
        throw std::logic_error("reproduce: unhandled target");
    }();

    const std::filesystem::path dir(out_dir);
    const std::filesystem::path csv = dir / (name + ".csv");
    std::ofstream file(csv);
    if (!file) throw std::invalid_argument("reproduce: cannot write " + csv.string());
    table.write(Format::Csv, file);
    out << "wrote " << csv.string() << "\n";

    if (gnuplot) {
        if (const char* script = gnuplot_script(target)) {
            const std::filesystem::path gp = dir / (name + ".gp");
            std::ofstream gpf(gp);
            if (!gpf) throw std::invalid_argument("reproduce: cannot write " + gp.string());
            gpf << script;
            out << "wrote " << gp.string() << "\n";
        }
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{
        "Tree splitting random access on a K-packet reception channel: exact "
        "analysis, asymptotics, stability bounds, and slot-exact simulation"};
    app.require_subcommand(1);

    std::string format = "csv";
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    struct {
        int K = 1;
        int n_max = 10;
        double p = 0.5;
        bool no_sic = false;
        std::string method = "auto";
    } cri;
    auto* sub_cri = app.add_subcommand("cri", "Expected CRI length L_n and throughput T_n");
    sub_cri->add_option("--K", cri.K, "Reception capability")->check(CLI::Range(1, 1024));
    sub_cri->add_option("--n-max", cri.n_max, "Tabulate n = 0..n_max")
        ->check(CLI::Range(0, 1000000));
    sub_cri->add_option("--p", cri.p, "Left-branch probability")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9));
    sub_cri->add_flag("--no-sic", cri.no_sic, "Disable interference cancellation");
    sub_cri->add_option("--method", cri.method, "recursive|closed|series|auto")
        ->check(CLI::IsMember({"recursive", "closed", "series", "auto"}));

    struct {
        int K = 1;
        double n = 1000;
    } asym;
    auto* sub_asym = app.add_subcommand("asym", "First-harmonic asymptotic L_n and T_n");
    sub_asym->add_option("--K", asym.K, "Reception capability")->check(CLI::Range(1, 1024));
    sub_asym->add_option("--n", asym.n, "Initial multiplicity")->check(CLI::Range(1.0, 1e15));

    struct {
        int K_max = 64;
    } amp;
    auto* sub_amp = app.add_subcommand("amplitude", "Oscillation amplitude and phase vs K");
    sub_amp->add_option("--K-max", amp.K_max, "Largest K")->check(CLI::Range(1, 1024));

    struct {
        int K = 1;
        int m = 0;
        int n_eval = 0;
    } bnd;
    auto* sub_bounds = app.add_subcommand("bounds", "Linear envelope alpha/beta and A/B");
    sub_bounds->add_option("--K", bnd.K, "Reception capability")->check(CLI::Range(1, 1024));
    sub_bounds->add_option("--m", bnd.m, "Envelope order (0 = canonical)")
        ->check(CLI::Range(0, 100000));
    sub_bounds->add_option("--n-eval", bnd.n_eval, "Ratio horizon (0 = canonical)")
        ->check(CLI::Range(0, 10000000));

    struct {
        int K = 1;
    } gated;
    auto* sub_gated = app.add_subcommand("gated", "Gated-access stability rates");
    sub_gated->add_option("--K", gated.K, "Reception capability")->check(CLI::Range(1, 1024));

    struct {
        int K = 1;
        int m = 0;
        int n_eval = 0;
        bool no_sic = false;
    } win;
    auto* sub_win = app.add_subcommand("windowed", "Windowed-access stability rates");
    sub_win->add_option("--K", win.K, "Reception capability")->check(CLI::Range(1, 1024));
    sub_win->add_option("--m", win.m, "Envelope order (0 = canonical)")
        ->check(CLI::Range(0, 100000));
    sub_win->add_option("--n-eval", win.n_eval, "Ratio horizon (0 = canonical)")
        ->check(CLI::Range(0, 10000000));
    sub_win->add_flag("--no-sic", win.no_sic, "Disable interference cancellation");

    struct {
        int K = 1;
        int m = 0;
        double z_max = 0;
        double z_step = 0.25;
    } sens;
    auto* sub_sens = app.add_subcommand("sensitivity", "Window objective F(z) curves");
    sub_sens->add_option("--K", sens.K, "Reception capability")->check(CLI::Range(1, 1024));
    sub_sens->add_option("--m", sens.m, "Envelope order (0 = canonical)")
        ->check(CLI::Range(0, 100000));
    sub_sens->add_option("--z-max", sens.z_max, "Grid end (0 = 8m)")
        ->check(CLI::Range(0.0, 1e7));
    sub_sens->add_option("--z-step", sens.z_step, "Grid step")->check(CLI::Range(1e-6, 1e6));

    struct {
        int K = 1;
        int d = 2;
        int n = 100;
        std::uint64_t trials = 10000;
        std::uint64_t seed = 1;
        double p = 0.5;
        bool no_sic = false;
        bool trace = false;
    } simo;
    auto* sub_sim = app.add_subcommand("simulate", "Monte Carlo CRI statistics or one trace");
    sub_sim->add_option("--K", simo.K, "Reception capability")->check(CLI::Range(1, 1024));
    sub_sim->add_option("--d", simo.d, "Splitting degree")->check(CLI::Range(2, 64));
    sub_sim->add_option("--n", simo.n, "Initial multiplicity")->check(CLI::Range(0, 1000000));
    sub_sim->add_option("--trials", simo.trials, "Trial count")
        ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1000000000}));
    sub_sim->add_option("--seed", simo.seed, "Master seed");
    sub_sim->add_option("--p", simo.p, "Left-branch probability (binary only)")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9));
    sub_sim->add_flag("--no-sic", simo.no_sic, "Disable interference cancellation");
    sub_sim->add_flag("--trace", simo.trace, "Emit the slot-by-slot event log of one trial");

    struct {
        int K = 1;
        double lambda = 0.5;
        double delta = 100;
        std::uint64_t windows = 1000;
        std::uint64_t seed = 1;
    } winsim;
    auto* sub_winsim =
        app.add_subcommand("simulate-windowed", "Windowed-access queue simulation");
    sub_winsim->add_option("--K", winsim.K, "Reception capability")->check(CLI::Range(1, 1024));
    sub_winsim->add_option("--lambda", winsim.lambda, "Arrival rate (packets per slot)")
        ->check(CLI::Range(1e-9, 1e9));
    sub_winsim->add_option("--delta", winsim.delta, "Window length (slots)")
        ->check(CLI::Range(1e-9, 1e9));
    sub_winsim->add_option("--windows", winsim.windows, "Window count")
        ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1000000000}));
    sub_winsim->add_option("--seed", winsim.seed, "Master seed");

    struct {
        std::string target;
        std::string out_dir = ".";
        bool gnuplot = false;
    } rep;
    auto* sub_rep = app.add_subcommand("reproduce", "Regenerate a published table or figure");
    sub_rep->add_option("--target", rep.target, "What to regenerate")
        ->required()
        ->check(CLI::IsMember({"table1", "table2", "table3", "figcri", "figthroughput",
                               "figamplitude", "figsensitivity", "figdarymst",
                               "figdarythroughput"}));
    sub_rep->add_option("--out-dir", rep.out_dir, "Output directory")->capture_default_str();
    sub_rep->add_flag("--gnuplot", rep.gnuplot, "Also write a gnuplot script");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    const Format fmt = format == "json" ? Format::Json : Format::Csv;
    try {
        if (sub_cri->parsed())
            run_cri(cri.K, cri.n_max, cri.p, cri.no_sic, cri.method, fmt, out);
        else if (sub_asym->parsed())
            run_asym(asym.K, asym.n, fmt, out);
        else if (sub_amp->parsed())
            run_amplitude(amp.K_max, fmt, out);
        else if (sub_bounds->parsed())
            run_bounds(bnd.K, bnd.m, bnd.n_eval, fmt, out, err);
        else if (sub_gated->parsed())
            run_gated(gated.K, fmt, out);
        else if (sub_win->parsed())
            run_windowed(win.K, win.m, win.n_eval, win.no_sic, fmt, out);
        else if (sub_sens->parsed())
            run_sensitivity(sens.K, sens.m, sens.z_max, sens.z_step, fmt, out);
        else if (sub_sim->parsed())
            run_simulate(simo.K, simo.d, simo.n, simo.trials, simo.seed, simo.p,
                         simo.no_sic, simo.trace, fmt, out);
        else if (sub_winsim->parsed())
            run_simulate_windowed(winsim.K, winsim.lambda, winsim.delta, winsim.windows,
                                  winsim.seed, fmt, out);
        else if (sub_rep->parsed())
            run_reproduce(rep.target, rep.out_dir, rep.gnuplot, out);
        return 0;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "numerical error: " << e.what() << "\n";
        return 2;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("treesic");
    for (const auto& arg : args) argv.push_back(arg.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace treesic::cli
