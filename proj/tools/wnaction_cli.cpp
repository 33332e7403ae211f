// Command-line front end: simulate runs and analyze them.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wnaction/error.hpp"
#include "wnaction/harness.hpp"
#include "wnaction/oracle_suite.hpp"
#include "wnaction/solver.hpp"
#include "wnaction/stats.hpp"
#include "wnaction/svg.hpp"

namespace fs = std::filesystem;
using namespace wnaction;
using json = nlohmann::ordered_json;

namespace {

// Run parameters exposed as --flags; given flags override the config file.
const std::vector<std::pair<std::string, std::string>> kRunFlags = {
    {"L", "system sizes, comma separated"},
    {"m", "sub-columns per unit x"},
    {"dy", "height grid step (e.g. 1/4)"},
    {"y_cap", "sampled half-height; 0 derives 8 sqrt(L)"},
    {"window", "boundary window; 0 derives L/2"},
    {"db", "boundary step; 0 derives max(dy, L dy/32)"},
    {"db_tilde", "boundary step of the 2L sweep; 0 derives L/8"},
    {"cap_retries", "cap doublings on saturation"},
    {"replicas", "replicas per L"},
    {"seed", "master seed"},
    {"zero_noise", "debug: zero every noise path"},
    {"threads", "worker threads; 0 uses all cores"},
};

struct RunFlags {
    std::string config_file;
    std::map<std::string, std::string> values;
};

void add_run_flags(CLI::App* app, RunFlags& f) {
    app->add_option("--config", f.config_file, "key = value configuration file")->check(CLI::ExistingFile);
    for (const auto& [key, help] : kRunFlags) {
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        app->add_option(flag, f.values[key], help);
    }
}

RunConfig resolve(CLI::App* app, const RunFlags& f, RunConfig base = {}) {
    RunConfig cfg = f.config_file.empty() ? base : load_config_file(f.config_file, base);
    for (const auto& [key, help] : kRunFlags) {
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        if (app->count(flag) > 0) set_config_value(cfg, key, f.values.at(key));
    }
    cfg.validate();
    return cfg;
}

void emit(const json& j, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << '\n';
    } else {
        write_text_file(path, j.dump(2) + "\n");
    }
}

std::string run_hash(const fs::path& dir) {
    const fs::path p = dir / "config.json";
    if (!fs::exists(p)) return "";
    return json::parse(read_text_file(p)).value("config_hash", "");
}

SvgSeries fit_line(const ScalingFit& fit) {
    SvgSeries line{"fit", {}, {}, {}, true};
    for (const ScalingPoint& p : fit.points) {
        const double x = std::log(static_cast<double>(p.L));
        line.x.push_back(x);
        line.y.push_back(fit.intercept + fit.a_star * x);
    }
    return line;
}

json run_summary(const std::map<int, RunTable>& runs, const ScalingFit& fit, const std::string& hash) {
    json j = fit_scaling_json(fit, hash);
    const RunTable& top = runs.rbegin()->second;
    const BandReport bands = equipartition(coarse_action_table(top), fit.a_star);
    j["bands"] = equipartition_json(bands)["bands"];
    j["band_L"] = top.L;
    j["common_slope"] = bands.common_slope;
    j["common_slope_se"] = bands.common_slope_se;
    json orlicz = json::object();
    for (const auto& [L, t] : runs) {
        if (t.rows.empty()) continue;
        const ConcentrationRow c = concentration(t);
        json e;
        e["A_L_centered"] = {{"s", 1.5}, {"norm", c.centered_A_32}};
        e["H_L"] = {{"s", 3.0}, {"norm", c.H_3}};
        e["m40"] = {{"s", 2.0}, {"norm", c.m40_2}};
        e["Dmax"] = {{"s", 1.0}, {"norm", c.D_1}};
        orlicz["L" + std::to_string(L)] = e;
    }
    j["orlicz"] = orlicz;
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact action maximization against discretized white noise"};
    app.require_subcommand(1);

    // simulate
    RunFlags sim_flags;
    std::string sim_out;
    auto* sim = app.add_subcommand("simulate", "run replicas and write run_L<L>.csv files");
    add_run_flags(sim, sim_flags);
    sim->add_option("--out-dir", sim_out, "output directory (default $WNACTION_OUT_DIR or ./wnaction_out)");

    // boundary-sweep
    RunFlags bs_flags;
    std::uint64_t bs_replica = 0;
    std::string bs_csv, bs_json;
    auto* bs = app.add_subcommand("boundary-sweep", "sweep boundary pairs on one replica");
    add_run_flags(bs, bs_flags);
    bs->add_option("--replica", bs_replica, "replica id");
    bs->add_option("--csv", bs_csv, "per-pair CSV output");
    bs->add_option("--json", bs_json, "summary JSON output (default stdout)");

    // fit-scaling
    std::string fs_dir, fs_points, fs_json, fs_svg;
    auto* fsc = app.add_subcommand("fit-scaling", "weighted fit of mean A_L on ln L");
    auto* fs_dir_opt = fsc->add_option("--run-dir", fs_dir, "directory of run_L*.csv files");
    fsc->add_option("--points", fs_points, "CSV with columns L,mean,se")->excludes(fs_dir_opt);
    fsc->add_option("--json", fs_json, "summary JSON output (default stdout)");
    fsc->add_option("--svg", fs_svg, "plot of mean A_L against ln L");

    // equipartition
    std::string eq_dir, eq_json, eq_svg;
    int eq_L = 0;
    double eq_a = NAN;
    auto* eq = app.add_subcommand("equipartition", "dyadic band increments of the coarse actions");
    eq->add_option("--run-dir", eq_dir, "directory of run_L*.csv files")->required();
    eq->add_option("--size", eq_L, "system length (default: largest in the run)");
    eq->add_option("--a-star", eq_a, "slope to compare against (default: fitted from the run)");
    eq->add_option("--json", eq_json, "JSON output (default stdout)");
    eq->add_option("--svg", eq_svg, "plot of band increments");

    // count-net
    std::vector<int> cn_ratios{2, 4, 8};
    std::vector<double> cn_nus{3, 9, 27};
    int cn_l = 1;
    std::string cn_csv, cn_svg;
    auto* cn = app.add_subcommand("count-net", "exact cardinalities of the net ball");
    cn->add_option("--ratios", cn_ratios, "values of L/l")->delimiter(',');
    cn->add_option("--nu", cn_nus, "energy levels (>= e)")->delimiter(',');
    cn->add_option("--l", cn_l, "coarse scale l");
    cn->add_option("--csv", cn_csv, "CSV output (default stdout)");
    cn->add_option("--svg", cn_svg, "ratio table");

    // orlicz
    std::string or_input, or_column = "A_L", or_json;
    double or_s = 1.5;
    int or_boot = 200;
    bool or_center = false;
    auto* orl = app.add_subcommand("orlicz", "plug-in Orlicz norm and tail diagnostics of one column");
    orl->add_option("--input", or_input, "run_L<L>.csv file")->required()->check(CLI::ExistingFile);
    orl->add_option("--column", or_column, "column name");
    orl->add_option("--s", or_s, "exponent s >= 1");
    orl->add_option("--bootstrap", or_boot, "bootstrap resamples");
    orl->add_flag("--center", or_center, "subtract the sample mean first");
    orl->add_option("--json", or_json, "JSON output (default stdout)");

    // validate
    std::string va_profile = "quick", va_json;
    bool va_flip = false;
    auto* va = app.add_subcommand("validate", "run the per-realization verification battery");
    va->add_option("--profile", va_profile, "quick or full")->check(CLI::IsMember({"quick", "full"}));
    va->add_option("--json", va_json, "JSON report path");
    va->add_flag("--flip-tie-break", va_flip, "negative control: reverse the DP tie-break");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) {
            const RunConfig cfg = resolve(sim, sim_flags);
            const fs::path out = sim_out.empty() ? default_out_dir() : fs::path(sim_out);
            const SimulateReport rep = simulate(cfg, out);
            for (const auto& f : rep.files) std::cout << "wrote " << f.string() << '\n';
            for (const auto& [L, n] : rep.saturated_rows)
                if (n > 0) std::cerr << "warning: L=" << L << ": " << n << " rows cap-saturated after retries\n";
            return 0;
        }
        if (*bs) {
            RunConfig base;
            base.Ls = {16};
            RunConfig cfg = resolve(bs, bs_flags, base);
            const int L = cfg.Ls.front();
            cfg.Ls = {L};
            const FieldConfig fc = cfg.field_for(L, bs_replica);
            const NoiseField field = generate_field(fc);
            SweepOptions so;
            so.window = cfg.window_for(L);
            so.db = cfg.db_for(L);
            const SweepResult sw = boundary_sweep(field, so);
            if (!bs_csv.empty()) {
                std::string csv = "y0,y1,value,linear_action,M,midpoint,saturated\n";
                char buf[256];
                for (std::size_t i0 = 0; i0 < sw.side(); ++i0)
                    for (std::size_t i1 = 0; i1 < sw.side(); ++i1) {
                        const std::size_t p = sw.pair(i0, i1);
                        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", sw.grid[i0], sw.grid[i1],
                                      sw.value[p], sw.linear_action[p], sw.M[p], sw.midpoint[p], sw.saturated[p]);
                        csv += buf;
                    }
                write_text_file(bs_csv, csv);
            }
            const ExtremalActions ex = extremal_actions(sw);
            json j;
            j["L"] = L;
            j["replica"] = bs_replica;
            j["window"] = sw.window;
            j["db"] = sw.db;
            j["pairs"] = sw.M.size();
            j["A_L"] = sw.M_at(0.0, 0.0);
            j["A_plus"] = ex.a_plus;
            j["A_minus"] = ex.a_minus;
            j["H_L"] = midpoint_deviation(sw);
            j["m40"] = linear_action_statistic(sw);
            j["cap_saturated"] = sw.cap_saturated;
            j["config_hash"] = config_hash(cfg);
            emit(j, bs_json);
            return 0;
        }
        if (*fsc) {
            if (fs_dir.empty() && fs_points.empty()) throw Error(ErrorKind::MissingData, "need --run-dir or --points");
            json j;
            ScalingFit fit;
            if (!fs_dir.empty()) {
                const auto runs = load_run_dir(fs_dir);
                fit = fit_scaling(scaling_points(runs));
                j = run_summary(runs, fit, run_hash(fs_dir));
            } else {
                fit = fit_scaling(read_points_csv(fs_points));
                j = fit_scaling_json(fit, "");
            }
            emit(j, fs_json);
            if (!fs_svg.empty()) {
                SvgSeries pts{"mean A_L", {}, {}, {}, false};
                for (const ScalingPoint& p : fit.points) {
                    pts.x.push_back(std::log(static_cast<double>(p.L)));
                    pts.y.push_back(p.mean);
                    pts.err.push_back(p.se);
                }
                write_text_file(fs_svg, svg_plot("mean A_L vs ln L", "ln L", "mean A_L", {pts, fit_line(fit)}));
            }
            return 0;
        }
        if (*eq) {
            const auto runs = load_run_dir(eq_dir);
            const int L = eq_L > 0 ? eq_L : runs.rbegin()->first;
            if (!runs.count(L)) throw Error(ErrorKind::MissingData, "no run for L=" + std::to_string(L));
            const double a = std::isnan(eq_a) ? fit_scaling(scaling_points(runs)).a_star : eq_a;
            const BandReport rep = equipartition(coarse_action_table(runs.at(L)), a);
            json j = equipartition_json(rep);
            j["L"] = L;
            j["a_star"] = a;
            j["config_hash"] = run_hash(eq_dir);
            emit(j, eq_json);
            if (!eq_svg.empty()) {
                SvgSeries inc{"band increment", {}, {}, {}, false};
                SvgSeries pred{"a* ln(l'/l)", {}, {}, {}, true};
                for (const Band& b : rep.bands) {
                    inc.x.push_back(std::log2(static_cast<double>(b.l_fine)));
                    inc.y.push_back(b.mean);
                    inc.err.push_back(b.se);
                    pred.x.push_back(std::log2(static_cast<double>(b.l_fine)));
                    pred.y.push_back(b.predicted);
                }
                write_text_file(eq_svg, svg_plot("dyadic band increments, L = " + std::to_string(L), "log2 l (band l -> 2l)",
                                                 "mean increment", {inc, pred}));
            }
            return 0;
        }
        if (*cn) {
            const std::vector<CountRow> rows = count_net_grid(cn_ratios, cn_nus, cn_l);
            const std::string csv = count_net_csv(rows);
            if (cn_csv.empty() || cn_csv == "-") {
                std::cout << csv;
            } else {
                write_text_file(cn_csv, csv);
            }
            if (!cn_svg.empty()) {
                std::vector<std::vector<std::string>> cells;
                double c0 = 0.0;
                for (const CountRow& r : rows) {
                    char ratio[32], nu[32];
                    std::snprintf(ratio, sizeof ratio, "%.4f", r.ratio);
                    std::snprintf(nu, sizeof nu, "%g", r.nu);
                    cells.push_back({std::to_string(r.L / r.l), nu, to_string(r.count), ratio});
                    c0 = std::max(c0, r.ratio);
                }
                char title[64];
                std::snprintf(title, sizeof title, "net ball counts, C0 = %.4f", c0);
                write_text_file(cn_svg, svg_table(title, {"L/l", "nu", "count", "ratio"}, cells));
            }
            return 0;
        }
        if (*orl) {
            const RunTable t = read_run_csv(or_input);
            std::vector<double> x = t.column(or_column);
            if (or_center) {
                const double mean = moments(x).mean;
                for (double& v : x) v -= mean;
            }
            const OrliczEstimate est = orlicz_norm(x, or_s);
            json j;
            j["column"] = or_column;
            j["L"] = t.L;
            j["s"] = or_s;
            j["norm"] = est.norm;
            j["bracket"] = {est.lower, est.upper};
            j["sample_size"] = est.sample_size;
            j["bootstrap_se"] = orlicz_bootstrap_se(x, or_s, or_boot);
            if (x.size() >= 1000) {
                const TailReport tail = tail_consistency(x, or_s);
                j["tail"] = {{"vacuous", tail.vacuous}, {"fitted_c", tail.fitted_c}, {"tail_exponent", tail.tail_exponent},
                             {"consistent", tail.consistent}, {"note", tail.note}};
                if (tail.largest_violating_nu) j["tail"]["largest_violating_nu"] = *tail.largest_violating_nu;
            } else {
                j["tail"] = "skipped: fewer than 1000 samples";
            }
            emit(j, or_json);
            return 0;
        }
        if (*va) {
            const ValidationProfile profile = va_profile == "full" ? ValidationProfile::Full : ValidationProfile::Quick;
            SuiteOptions opt = suite_options(profile);
            opt.flip_dp_tie_break = va_flip;
            const ValidationReport rep = run_suite(opt, va_profile);
            std::cout << rep.to_text();
            if (!va_json.empty()) write_text_file(va_json, rep.to_json() + "\n");
            return rep.all_pass() ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
