#include "medrisk/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "medrisk/asymptotics.hpp"
#include "medrisk/distributions.hpp"
#include "medrisk/errors.hpp"
#include "medrisk/exact_risk.hpp"
#include "medrisk/montecarlo.hpp"

namespace medrisk::cli {

namespace {

// Shortest representation that reads back to the same double.
std::string num(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string join(const std::vector<std::string>& parts, char sep = ',') {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += sep;
        s += parts[i];
    }
    return s;
}

template <typename T>
std::string join_nums(const std::vector<T>& xs) {
    std::vector<std::string> parts;
    for (T x : xs) parts.push_back(num(static_cast<double>(x)));
    return join(parts);
}

std::string utc_timestamp() {
    std::time_t const now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct Common {
    std::string out_path;
    double tol = 1e-10;
    std::uint64_t seed = 20100101;
    int runs = 10000;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::string side = "right";
};

struct Manifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params;

    void write(std::ostream& os, const Common& c) const {
        os << "# command: medrisk " << command << '\n';
        os << "# params:";
        for (auto const& [k, v] : params) os << " --" << k << ' ' << v;
        os << " --tol " << num(c.tol) << " --side " << c.side << '\n';
        os << "# seed: " << c.seed << '\n';
        os << "# version: " << kVersion << '\n';
        os << "# timestamp: " << utc_timestamp() << '\n';
    }
};

QuadratureSpec quad_from(const Common& c) {
    QuadratureSpec q;
    q.rel_tol = c.tol;
    return q;
}

enum class SideChoice { Left, Right, Worst };

SideChoice parse_side(const std::string& s) {
    if (s == "left") return SideChoice::Left;
    if (s == "right") return SideChoice::Right;
    if (s == "worst") return SideChoice::Worst;
    throw UsageError("--side must be left, right or worst");
}

RiskResult exact_value(const IdealDistribution& d, double r, int n, MedianVariant v,
                       const Common& c) {
    ContaminationConfig cfg;
    cfg.r = r;
    SideChoice const side = parse_side(c.side);
    if (side == SideChoice::Worst) return exact_mse_worst_side(d, cfg, n, v, quad_from(c), c.threads);
    cfg.side = side == SideChoice::Left ? ContaminationSide::Left : ContaminationSide::Right;
    return exact_mse(d, cfg, n, v, quad_from(c), c.threads);
}

EmpiricalRisk simulate(const IdealDistribution& d, double r, int n, MedianVariant v,
                       std::uint64_t seed, int runs, double point, const Common& c) {
    SimConfig cfg;
    cfg.n = n;
    cfg.r = r;
    cfg.runs = runs;
    cfg.seed = seed;
    cfg.threads = c.threads;
    cfg.variant_rule = [v](int) { return v; };
    SideChoice const side = parse_side(c.side);
    cfg.contamination_point = side == SideChoice::Left ? -point : point;
    return empirical_mse(d, cfg);
}

MedianVariant variant_or_throw(const std::string& name) {
    auto v = parse_variant(name);
    if (!v) throw UsageError("unknown variant '" + name + "'");
    return *v;
}

AsyOrder order_or_throw(const std::string& name) {
    auto o = parse_order(name);
    if (!o) throw UsageError("unknown order '" + name + "' (use zero, half or one)");
    return *o;
}

std::string_view order_name(AsyOrder o) {
    switch (o) {
        case AsyOrder::Zero: return "zero";
        case AsyOrder::Half: return "half";
        case AsyOrder::One: return "one";
    }
    return "?";
}

// Sink that is either the caller's stream or a file named by --out.
class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (path.empty() || path == "-") return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw UsageError("cannot open output file '" + path + "'");
        os_ = file_.get();
    }
    std::ostream& stream() { return *os_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_;
};

struct RiskArgs {
    int n = 0;
    double r = 0.0;
    std::string variant;
    std::string method = "exact";
    double point = 100.0;
};

int cmd_risk(const RiskArgs& a, const Common& c, std::ostream& out) {
    IdealDistribution const d = make_normal();
    MedianVariant const v = a.variant.empty() ? default_variant_for(a.n) : variant_or_throw(a.variant);
    check_parity(a.n, v);
    if (!(a.r >= 0.0)) throw NegativeRadius(a.r);

    std::optional<EmpiricalRisk> sim;
    double value = 0.0;
    if (a.method == "exact") {
        value = exact_value(d, a.r, a.n, v, c).value;
    } else if (a.method == "sim") {
        sim = simulate(d, a.r, a.n, v, c.seed, c.runs, a.point, c);
        value = sim->value;
    } else {
        auto o = parse_order(a.method);
        if (!o) throw UsageError("--method must be asy0, asy-half, asy1, exact or sim");
        value = asy_mse(d, a.r, a.n, v, *o).value;
    }

    Output o(c.out_path, out);
    Manifest m{"risk", {{"n", std::to_string(a.n)}, {"r", num(a.r)}, {"variant", std::string(to_string(v))},
                        {"method", a.method}, {"runs", std::to_string(c.runs)}, {"point", num(a.point)}}};
    m.write(o.stream(), c);
    o.stream() << "n,r,variant,method,value,ci_lo,ci_hi\n";
    o.stream() << a.n << ',' << num(a.r) << ',' << to_string(v) << ',' << a.method << ','
               << num(value) << ',' << (sim ? num(sim->ci_lo) : "") << ','
               << (sim ? num(sim->ci_hi) : "") << '\n';
    return kOk;
}

struct Table1Args {
    std::vector<int> n_list;
    std::vector<std::string> variants{"odd", "lower", "biascorrected", "midpoint"};
};

int cmd_table1(const Table1Args& a, const Common& c, std::ostream& out) {
    IdealDistribution const d = make_normal();
    std::vector<std::pair<MedianVariant, std::vector<int>>> blocks;
    for (auto const& name : a.variants) {
        MedianVariant const v = variant_or_throw(name);
        std::vector<int> ns = a.n_list;
        if (ns.empty()) ns = requires_odd_n(v) ? std::vector<int>{5, 11, 101} : std::vector<int>{6, 10, 100};
        for (int n : ns) check_parity(n, v);
        blocks.emplace_back(v, ns);
    }

    std::ostringstream body;
    body << "variant,n,exact,err12_abs,err12_rel,err3_abs,err3_rel\n";
    ContaminationConfig ideal;
    for (auto const& [v, ns] : blocks) {
        for (int n : ns) {
            double const exact = exact_mse(d, ideal, n, v, quad_from(c), c.threads).value;
            double const e12 = asy_mse(d, 0.0, n, v, AsyOrder::Half).value - exact;
            double const e3 = asy_mse(d, 0.0, n, v, AsyOrder::One).value - exact;
            body << to_string(v) << ',' << n << ',' << num(exact) << ',' << num(e12) << ','
                 << num(e12 / exact) << ',' << num(e3) << ',' << num(e3 / exact) << '\n';
        }
    }

    Output o(c.out_path, out);
    Manifest m{"table1", {{"n-list", a.n_list.empty() ? "default" : join_nums(a.n_list)},
                          {"variants", join(a.variants)}}};
    m.write(o.stream(), c);
    o.stream() << body.str();
    return kOk;
}

struct Table2Args {
    std::vector<int> n_list{5, 10, 30, 100};
    std::vector<double> r_list{0.0, 0.1, 0.5, 1.0};
    double point = 100.0;
};

int cmd_table2(const Table2Args& a, const Common& c, std::ostream& out) {
    IdealDistribution const d = make_normal();
    if (c.runs < 0) throw UsageError("--runs must be >= 0");
    std::ostringstream body;
    body << "n,r,sim,ci_lo,ci_hi,num,asy0,asy_half,asy1\n";
    std::uint64_t cell = 0;
    for (int n : a.n_list) {
        for (double r : a.r_list) {
            MedianVariant const v = default_variant_for(n);
            ++cell;
            std::string sim_cols = ",,";
            if (c.runs > 0) {
                // Each cell gets its own stream family derived from the seed.
                auto const e = simulate(d, r, n, v, c.seed + 0x9E3779B97F4A7C15ULL * cell, c.runs,
                                        a.point, c);
                sim_cols = num(e.value) + ',' + num(e.ci_lo) + ',' + num(e.ci_hi);
            }
            double const exact = exact_value(d, r, n, v, c).value;
            body << n << ',' << num(r) << ',' << sim_cols << ',' << num(exact) << ','
                 << num(asy_mse(d, r, n, v, AsyOrder::Zero).value) << ','
                 << num(asy_mse(d, r, n, v, AsyOrder::Half).value) << ','
                 << num(asy_mse(d, r, n, v, AsyOrder::One).value) << '\n';
        }
    }
    Output o(c.out_path, out);
    Manifest m{"table2", {{"n-list", join_nums(a.n_list)},
                          {"r-list", join_nums(a.r_list)},
                          {"runs", std::to_string(c.runs)},
                          {"point", num(a.point)}}};
    m.write(o.stream(), c);
    o.stream() << body.str();
    return kOk;
}

struct Table2nArgs {
    std::vector<double> thresholds{0.01, 0.05};
    std::vector<double> r_list{0.0, 0.1, 0.25, 0.5, 1.0};
    std::vector<std::string> orders{"one"};
    int n_cap = 400;
    int n_min = 2;
};

int cmd_table2n(const Table2nArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
    IdealDistribution const d = make_normal();
    std::vector<MinimalNQuery> queries;
    for (double t : a.thresholds)
        for (auto const& name : a.orders) queries.push_back({t, order_or_throw(name)});

    std::ostringstream body;
    body << "threshold,order,r,n0\n";
    bool missing = false;
    for (double r : a.r_list) {
        ContaminationConfig cfg;
        cfg.r = r;
        auto const res = minimal_n_search_many(d, cfg, queries, a.n_cap, a.n_min, default_variant_for,
                                               quad_from(c), c.threads);
        for (std::size_t i = 0; i < queries.size(); ++i) {
            body << num(queries[i].threshold) << ',' << order_name(queries[i].order) << ',' << num(r)
                 << ',';
            if (res[i]) {
                body << *res[i];
            } else {
                body << "NA";
                missing = true;
                err << "warning: threshold " << num(queries[i].threshold) << ", order "
                    << order_name(queries[i].order) << ", r = " << num(r)
                    << " not reached below n-cap " << a.n_cap << '\n';
            }
            body << '\n';
        }
    }
    Output o(c.out_path, out);
    Manifest m{"table2n", {{"thresholds", join_nums(a.thresholds)},
                           {"r-list", join_nums(a.r_list)},
                           {"orders", join(a.orders)},
                           {"n-cap", std::to_string(a.n_cap)},
                           {"n-min", std::to_string(a.n_min)}}};
    m.write(o.stream(), c);
    o.stream() << body.str();
    return missing ? kNotReached : kOk;
}

struct Figure1Args {
    std::vector<double> r_list{0.0, 0.1, 0.25, 1.0};
    int n_min = 3;
    int n_max = 50;
    std::string order = "one";
};

int cmd_figure1(const Figure1Args& a, const Common& c, std::ostream& out) {
    IdealDistribution const d = make_normal();
    if (a.n_min < 3 || a.n_max < a.n_min) throw UsageError("need 3 <= n-min <= n-max");
    AsyOrder const order = order_or_throw(a.order);
    std::vector<int> ns;
    for (int n = a.n_min; n <= a.n_max; ++n) ns.push_back(n);
    std::ostringstream body;
    body << "r,n,rel_error\n";
    for (double r : a.r_list) {
        ContaminationConfig cfg;
        cfg.r = r;
        for (auto const& [n, rel] :
             relative_error_curve(d, cfg, ns, order, default_variant_for, quad_from(c), c.threads))
            body << num(r) << ',' << n << ',' << num(rel) << '\n';
    }
    Output o(c.out_path, out);
    Manifest m{"figure1", {{"r-list", join_nums(a.r_list)},
                           {"n-min", std::to_string(a.n_min)},
                           {"n-max", std::to_string(a.n_max)},
                           {"order", a.order}}};
    m.write(o.stream(), c);
    o.stream() << body.str();
    return kOk;
}

void add_common(CLI::App* sub, Common& c, bool with_sim) {
    sub->add_option("--out", c.out_path, "Output file (default: stdout)");
    sub->add_option("--tol", c.tol, "Relative quadrature tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--side", c.side, "Contamination side for exact values")
        ->check(CLI::IsMember({"left", "right", "worst"}));
    if (with_sim) {
        sub->add_option("--seed", c.seed, "Simulation seed");
        sub->add_option("--runs", c.runs, "Simulation runs per cell");
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite-sample and asymptotic risk of the median on shrinking neighborhoods",
                 "medrisk"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    Common common;
    RiskArgs risk;
    Table1Args t1;
    Table2Args t2;
    Table2nArgs t2n;
    Figure1Args f1;

    auto* s_risk = app.add_subcommand("risk", "One n * MSE value");
    s_risk->add_option("--n", risk.n, "Sample size")->required()->check(CLI::PositiveNumber);
    s_risk->add_option("--r", risk.r, "Contamination radius");
    s_risk->add_option("--variant", risk.variant,
                       "odd, lower, upper, randomized, midpoint, biascorrected");
    s_risk->add_option("--method", risk.method, "asy0, asy-half, asy1, exact or sim");
    s_risk->add_option("--point", risk.point, "Dirac contamination point for sim");
    add_common(s_risk, common, true);

    auto* s_t1 = app.add_subcommand("table1", "Ideal-model exact values and expansion errors");
    s_t1->add_option("--n-list", t1.n_list, "Sample sizes (default 5,11,101 odd; 6,10,100 even)")
        ->delimiter(',');
    s_t1->add_option("--variants", t1.variants, "Variants")->delimiter(',');
    add_common(s_t1, common, false);

    auto* s_t2 = app.add_subcommand("table2", "Simulation, exact and asymptotic risks");
    s_t2->add_option("--n-list", t2.n_list, "Sample sizes")->delimiter(',');
    s_t2->add_option("--r-list", t2.r_list, "Radii")->delimiter(',');
    s_t2->add_option("--point", t2.point, "Dirac contamination point for sim");
    add_common(s_t2, common, true);

    auto* s_t2n = app.add_subcommand("table2n", "Minimal n0 for a given relative accuracy");
    s_t2n->add_option("--thresholds", t2n.thresholds, "Relative error thresholds")->delimiter(',');
    s_t2n->add_option("--r-list", t2n.r_list, "Radii")->delimiter(',');
    s_t2n->add_option("--orders", t2n.orders, "Expansion orders: zero, half, one")->delimiter(',');
    s_t2n->add_option("--n-cap", t2n.n_cap, "Largest n scanned");
    s_t2n->add_option("--n-min", t2n.n_min, "Smallest n scanned");
    add_common(s_t2n, common, false);

    auto* s_f1 = app.add_subcommand("figure1", "Relative error curve n -> (asy - exact)/exact");
    s_f1->add_option("--r-list", f1.r_list, "Radii")->delimiter(',');
    s_f1->add_option("--n-min", f1.n_min, "Smallest n");
    s_f1->add_option("--n-max", f1.n_max, "Largest n");
    s_f1->add_option("--order", f1.order, "Expansion order: zero, half, one");
    add_common(s_f1, common, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        if (*s_risk) return cmd_risk(risk, common, out);
        if (*s_t1) return cmd_table1(t1, common, out);
        if (*s_t2) return cmd_table2(t2, common, out);
        if (*s_t2n) return cmd_table2n(t2n, common, out, err);
        if (*s_f1) return cmd_figure1(f1, common, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kNumerical;
    }
    return kUsage;
}

}  // namespace medrisk::cli
