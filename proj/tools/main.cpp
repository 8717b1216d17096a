#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#include <json.hpp>

#include "coxasep/config.hpp"
#include "coxasep/exact.hpp"
#include "coxasep/hydro.hpp"
#include "coxasep/verify.hpp"

using namespace coxasep;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void write_table(const Table& table, const std::string& format, std::ostream& os) {
    if (format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& row : table.rows) {
            nlohmann::json obj;
            for (size_t c = 0; c < table.header.size(); ++c) obj[table.header[c]] = row[c];
            arr.push_back(obj);
        }
        os << arr.dump(2) << '\n';
        return;
    }
    for (size_t c = 0; c < table.header.size(); ++c)
        os << table.header[c] << (c + 1 < table.header.size() ? "," : "");
    os << '\n';
    for (const auto& row : table.rows) {
        for (size_t c = 0; c < row.size(); ++c)
            os << row[c] << (c + 1 < row.size() ? "," : "");
        os << '\n';
    }
}

struct Output {
    std::ofstream file;
    std::ostream* os = &std::cout;
    void open(const std::string& path) {
        if (path.empty()) return;
        file.open(path, std::ios::binary);
        if (!file) throw ConfigError("out", "cannot open output file '" + path + "'");
        os = &file;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coxasep: multi-species ASEP(q,m) dynamics over Coxeter double cosets"};
    app.require_subcommand(1);

    std::string config_path, out_path, format = "csv";
    uint64_t seed = 1;
    int jobs = 0;
    app.add_option("--config", config_path, "flat key = value configuration file");
    app.add_option("--seed", seed, "base RNG seed (default 1)");
    app.add_option("--out", out_path, "output file (default stdout)");
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--jobs", jobs, "worker threads (default all)");

    auto* verify_cmd = app.add_subcommand(
        "verify", "exact verification suites; records are check,instance,residual,eps,ms");
    std::string suite = "all";
    int rank = 4;
    verify_cmd->add_option("--suite", suite,
                           "coxeter|diagrams|colpos|associativity|stationarity|"
                           "factorization|colpos-dynamic|all");
    verify_cmd->add_option("--rank", rank, "largest type-A rank for the random suites");

    auto* simulate_cmd =
        app.add_subcommand("simulate", "raw trajectories of the double-coset process");
    long sim_traj = 1;
    double sim_t = 1.0;
    bool sim_record = false;
    simulate_cmd->add_option("--trajectories", sim_traj);
    simulate_cmd->add_option("--t", sim_t, "time horizon");
    simulate_cmd->add_flag("--record", sim_record, "emit full clock records");

    auto* hydro_cmd =
        app.add_subcommand("hydro", "density profile against the rarefaction fan");
    hydro::HydroConfig hc;
    bool hydro_reference = false;
    hydro_cmd->add_option("--q", hc.q);
    hydro_cmd->add_option("--m", hc.m);
    hydro_cmd->add_option("--t", hc.t);
    hydro_cmd->add_option("--trajectories", hc.trajectories);
    hydro_cmd->add_option("--window", hc.window, "half-width; default from the design rule");
    hydro_cmd->add_option("--bins", hc.bin_width, "bin width in y (default 0.05(1-q))");
    hydro_cmd->add_option("--ymax", hc.y_max);
    hydro_cmd->add_flag("--reference-engine", hydro_reference,
                        "use the serial reference scheduler");

    auto* second_cmd = app.add_subcommand(
        "secondclass", "second-class particle counts against the shifted step density");
    hydro::SecondClassConfig sc;
    std::string thresholds_text;
    second_cmd->add_option("--q", sc.q);
    second_cmd->add_option("--m", sc.m);
    second_cmd->add_option("--t", sc.t);
    second_cmd->add_option("--trajectories", sc.trajectories);
    second_cmd->add_option("--window", sc.window);
    second_cmd->add_option("--thresholds", thresholds_text, "comma-separated site list");

    auto* duality_cmd = app.add_subcommand("duality", "observable duality identity");
    hydro::DualityConfig dc;
    bool duality_mc = false;
    duality_cmd->add_option("--q", dc.q);
    duality_cmd->add_option("--m", dc.m);
    duality_cmd->add_option("--t", dc.t);
    duality_cmd->add_option("--window", dc.window);
    duality_cmd->add_option("--i", dc.i, "site index of the counted tail");
    duality_cmd->add_option("--trajectories", dc.trajectories);
    duality_cmd->add_flag("--montecarlo", duality_mc, "two-sided Monte Carlo estimate");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        ConfigMap cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (app.count("--seed") == 0) seed = static_cast<uint64_t>(config_long(cfg, "seed", 1));
        if (app.count("--jobs") == 0) jobs = static_cast<int>(config_long(cfg, "jobs", 0));

        Output output;
        output.open(out_path);
        std::ostream& os = *output.os;

        if (*verify_cmd) {
            auto records = run_verify_suite(suite, seed, rank);
            Table table{{"check", "instance", "residual", "eps", "ms"}, {}};
            bool all_pass = true;
            for (const auto& rec : records) {
                table.rows.push_back({rec.check, rec.instance, fmt(rec.residual),
                                      fmt(rec.eps), std::to_string(rec.ms)});
                all_pass = all_pass && rec.pass;
                std::cerr << (rec.pass ? "PASS " : "FAIL ") << rec.check << " "
                          << rec.instance << "\n";
            }
            write_table(table, format, os);
            return all_pass ? 0 : 1;
        }

        if (*simulate_cmd) {
            std::string family = config_string(cfg, "ctype", "A");
            CoxeterType t{family == "BC" ? Family::BC : Family::A,
                          static_cast<int>(config_long(cfg, "rank", 3))};
            std::vector<int> caps =
                config_int_list(cfg, "m", std::vector<int>(static_cast<size_t>(t.rank), 1));
            std::vector<int> blocks = config_int_list(
                cfg, "blocks", std::vector<int>(static_cast<size_t>(t.rank), 1));
            std::string boundary_text = config_string(cfg, "boundary", "none");
            Boundary boundary = boundary_text == "case1"   ? Boundary::Case1
                                : boundary_text == "case2" ? Boundary::Case2
                                                           : Boundary::None;
            if (boundary_text != "none" && boundary_text != "case1" && boundary_text != "case2")
                throw ConfigError("boundary", "config: key 'boundary' must be none|case1|case2");
            bool zero = config_long(cfg, "zero", 0) != 0;
            if (simulate_cmd->count("--t") == 0) sim_t = config_double(cfg, "t", sim_t);
            if (simulate_cmd->count("--trajectories") == 0)
                sim_traj = config_long(cfg, "trajectories", sim_traj);
            double q = config_double(cfg, "q", 0.5);
            long qden = 1000000;
            ParabolicSpec hp(t, caps, boundary == Boundary::Case2);
            ParabolicSpec h(t, blocks, zero);
            ProcessSpec p{dcoset_space(hp, h),
                          Rational(static_cast<long>(q * static_cast<double>(qden)), qden),
                          boundary, false};
            p.validate();
            auto init = dcoset_to_config(SignedPermutation::identity(t), hp, h,
                                         ThetaVariant::One);
            Table table{{"traj", "final"}, {}};
            for (long traj = 0; traj < sim_traj; ++traj) {
                Rng rng(seed, static_cast<uint64_t>(traj));
                auto [final, rec] = simulate(p, init, sim_t, rng);
                table.rows.push_back({std::to_string(traj), final.to_string()});
                if (sim_record) os << "# traj " << traj << "\n" << rec.serialize();
            }
            if (!sim_record) write_table(table, format, os);
            return 0;
        }

        if (*hydro_cmd) {
            if (hydro_cmd->count("--q") == 0) hc.q = config_double(cfg, "q", hc.q);
            if (hydro_cmd->count("--m") == 0)
                hc.m = static_cast<int>(config_long(cfg, "m", hc.m));
            if (hydro_cmd->count("--t") == 0) hc.t = config_double(cfg, "t", hc.t);
            if (hydro_cmd->count("--trajectories") == 0)
                hc.trajectories = config_long(cfg, "trajectories", hc.trajectories);
            if (hydro_cmd->count("--window") == 0)
                hc.window = static_cast<int>(config_long(cfg, "window", hc.window));
            if (hydro_cmd->count("--bins") == 0) hc.bin_width = config_double(cfg, "bins", -1);
            hc.seed = seed;
            hc.jobs = jobs;
            hc.use_reference_engine = hydro_reference;
            auto profile = hydro::run_hydro(hc);
            Table table{{"y", "rho_hat", "stderr", "rho_limit", "n_traj"}, {}};
            for (size_t b = 0; b < profile.y.size(); ++b)
                table.rows.push_back({fmt(profile.y[b]), fmt(profile.rho_hat[b]),
                                      fmt(profile.std_err[b]), fmt(profile.rho_limit[b]),
                                      std::to_string(profile.trajectories)});
            write_table(table, format, os);
            return 0;
        }

        if (*second_cmd) {
            if (second_cmd->count("--q") == 0) sc.q = config_double(cfg, "q", sc.q);
            if (second_cmd->count("--m") == 0)
                sc.m = static_cast<int>(config_long(cfg, "m", sc.m));
            if (second_cmd->count("--t") == 0) sc.t = config_double(cfg, "t", sc.t);
            if (second_cmd->count("--trajectories") == 0)
                sc.trajectories = config_long(cfg, "trajectories", sc.trajectories);
            if (second_cmd->count("--window") == 0)
                sc.window = static_cast<int>(config_long(cfg, "window", sc.window));
            if (!thresholds_text.empty()) {
                ConfigMap one{{"thresholds", thresholds_text}};
                sc.thresholds = config_int_list(one, "thresholds", {});
            } else {
                sc.thresholds = config_int_list(cfg, "thresholds", sc.thresholds);
            }
            sc.seed = seed;
            sc.jobs = jobs;
            auto stats = hydro::second_class_counts(sc);
            Table table{{"x", "count_direct", "stderr_direct", "rho0_shifted",
                         "stderr_shifted"},
                        {}};
            for (size_t k = 0; k < stats.x.size(); ++k)
                table.rows.push_back({std::to_string(stats.x[k]), fmt(stats.count_direct[k]),
                                      fmt(stats.stderr_direct[k]), fmt(stats.rho0_shifted[k]),
                                      fmt(stats.stderr_shifted[k])});
            write_table(table, format, os);
            return 0;
        }

        if (*duality_cmd) {
            if (duality_cmd->count("--q") == 0) dc.q = config_double(cfg, "q", dc.q);
            if (duality_cmd->count("--m") == 0)
                dc.m = static_cast<int>(config_long(cfg, "m", dc.m));
            if (duality_cmd->count("--t") == 0) dc.t = config_double(cfg, "t", dc.t);
            if (duality_cmd->count("--window") == 0)
                dc.window = static_cast<int>(config_long(cfg, "window", dc.window));
            if (duality_cmd->count("--trajectories") == 0)
                dc.trajectories = config_long(cfg, "trajectories", dc.trajectories);
            dc.exact = !duality_mc;
            dc.seed = seed;
            dc.jobs = jobs;
            auto report = hydro::check_duality(dc);
            Table table{{"lhs", "rhs", "lhs_err", "rhs_err", "exact", "eps"}, {}};
            table.rows.push_back({fmt(report.lhs), fmt(report.rhs), fmt(report.lhs_err),
                                  fmt(report.rhs_err), report.exact ? "1" : "0",
                                  fmt(report.eps)});
            write_table(table, format, os);
            double gap = std::abs(report.lhs - report.rhs);
            double tol = report.exact
                             ? 1e-10
                             : 3 * std::hypot(report.lhs_err, report.rhs_err) + 1e-12;
            return gap <= tol ? 0 : 1;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error (" << e.key << "): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
