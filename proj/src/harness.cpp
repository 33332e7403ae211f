#include "wnaction/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <regex>
#include <sstream>
#include <thread>

#include "wnaction/action.hpp"
#include "wnaction/error.hpp"
#include "wnaction/solver.hpp"

namespace wnaction {

namespace fs = std::filesystem;

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    const auto slash = t.find('/');
    try {
        std::size_t used = 0;
        if (slash != std::string::npos) {
            const double num = std::stod(t.substr(0, slash), &used);
            if (used != slash) throw std::invalid_argument(t);
            const std::string den_text = t.substr(slash + 1);
            const double den = std::stod(den_text, &used);
            if (used != den_text.size() || den == 0.0) throw std::invalid_argument(t);
            return num / den;
        }
        const double v = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::logic_error&) {
        throw Error(ErrorKind::InvalidConfig, key + ": not a number: '" + text + "'");
    }
}

long long parse_integer(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    try {
        std::size_t used = 0;
        const long long v = std::stoll(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::logic_error&) {
        throw Error(ErrorKind::InvalidConfig, key + ": not an integer: '" + text + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
    if (t == "0" || t == "false" || t == "no" || t == "off") return false;
    throw Error(ErrorKind::InvalidConfig, key + ": not a boolean: '" + text + "'");
}

bool on_grid(double y, double dy) {
    const double u = y / dy;
    return std::isfinite(u) && u == std::round(u);
}

int steps(double y, double dy) { return static_cast<int>(std::llround(y / dy)); }

std::string timestamp() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", std::localtime(&t));
    return buf;
}

// Writes rows in replica order as they complete.
class OrderedSink {
public:
    OrderedSink(std::ostream& csv, std::ostream& log, int L) : csv_(csv), log_(log), L_(L) {}

    void put(std::size_t index, ReplicaRow row) {
        std::lock_guard lock(mu_);
        pending_.emplace(index, std::move(row));
        for (auto it = pending_.find(next_); it != pending_.end(); it = pending_.find(next_)) {
            csv_ << run_csv_line(it->second, L_) << '\n';
            log_ << "L=" << L_ << " replica=" << it->second.replica << " seconds=" << it->second.seconds
                 << (it->second.cap_saturated ? " cap_saturated" : "") << '\n';
            if (it->second.cap_saturated) ++saturated_;
            pending_.erase(it);
            ++next_;
        }
        csv_.flush();
    }
    std::size_t saturated() const { return saturated_; }

private:
    std::ostream& csv_;
    std::ostream& log_;
    int L_;
    std::mutex mu_;
    std::map<std::size_t, ReplicaRow> pending_;
    std::size_t next_ = 0;
    std::size_t saturated_ = 0;
};

} // namespace

void RunConfig::validate() const {
    if (Ls.empty()) throw Error(ErrorKind::InvalidConfig, "no system sizes");
    for (int L : Ls) {
        if (L < 2 || !is_power_of_two(L)) throw Error(ErrorKind::InvalidConfig, "L must be a power of two >= 2");
        field_for(L, 0).validate();
        if (!on_grid(window_for(L), dy) || !on_grid(db_for(L), dy) || !on_grid(db_tilde_for(L), dy))
            throw Error(ErrorKind::InvalidConfig, "window, db and db_tilde must be multiples of dy");
        if (db_for(L) <= 0.0 || db_tilde_for(L) <= 0.0) throw Error(ErrorKind::InvalidConfig, "db must be positive");
        if (window_for(L) > y_cap_for(L)) throw Error(ErrorKind::InvalidConfig, "window exceeds y_cap");
    }
    if (replicas < 0) throw Error(ErrorKind::InvalidConfig, "replicas must be >= 0");
    if (cap_retries < 0) throw Error(ErrorKind::InvalidConfig, "cap_retries must be >= 0");
    if (threads < 0) throw Error(ErrorKind::InvalidConfig, "threads must be >= 0");
}

double RunConfig::y_cap_for(int L) const {
    return y_cap > 0.0 ? y_cap : round_up_to_grid(8.0 * std::sqrt(static_cast<double>(L)), dy);
}
double RunConfig::window_for(int L) const { return window > 0.0 ? window : L / 2.0; }
double RunConfig::db_for(int L) const { return db > 0.0 ? db : std::max(dy, L * dy / 32.0); }
double RunConfig::db_tilde_for(int L) const { return db_tilde > 0.0 ? db_tilde : std::max(dy, L / 8.0); }
double RunConfig::tilde_cap_for(int L) const { return round_up_to_grid(2.0 * L + y_cap_for(L) / 2.0, dy); }

FieldConfig RunConfig::field_for(int L, std::uint64_t replica) const {
    FieldConfig c;
    c.L = L;
    c.m = m;
    c.dy = dy;
    c.y_cap = y_cap_for(L);
    c.seed = seed;
    c.replica = (static_cast<std::uint64_t>(L) << 32) | (replica & 0xffffffffULL);
    c.zero_noise = zero_noise;
    return c;
}

void set_config_value(RunConfig& cfg, const std::string& key_in, const std::string& value) {
    std::string key = trim(key_in);
    std::replace(key.begin(), key.end(), '-', '_');
    if (key == "L" || key == "Ls") {
        cfg.Ls.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (trim(item).empty()) continue;
            cfg.Ls.push_back(static_cast<int>(parse_integer(key, item)));
        }
    } else if (key == "m") {
        cfg.m = static_cast<int>(parse_integer(key, value));
    } else if (key == "dy") {
        cfg.dy = parse_real(key, value);
    } else if (key == "y_cap") {
        cfg.y_cap = parse_real(key, value);
    } else if (key == "window") {
        cfg.window = parse_real(key, value);
    } else if (key == "db") {
        cfg.db = parse_real(key, value);
    } else if (key == "db_tilde") {
        cfg.db_tilde = parse_real(key, value);
    } else if (key == "cap_retries") {
        cfg.cap_retries = static_cast<int>(parse_integer(key, value));
    } else if (key == "replicas") {
        cfg.replicas = static_cast<int>(parse_integer(key, value));
    } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(parse_integer(key, value));
    } else if (key == "zero_noise") {
        cfg.zero_noise = parse_bool(key, value);
    } else if (key == "threads") {
        cfg.threads = static_cast<int>(parse_integer(key, value));
    } else {
        throw Error(ErrorKind::InvalidConfig, "unknown key '" + key + "'");
    }
}

RunConfig parse_config_text(const std::string& text, RunConfig base) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::InvalidConfig, "line " + std::to_string(lineno) + ": expected key = value");
        set_config_value(base, line.substr(0, eq), line.substr(eq + 1));
    }
    return base;
}

RunConfig load_config_file(const fs::path& path, RunConfig base) {
    return parse_config_text(read_text_file(path), std::move(base));
}

std::string canonical_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "schema=" << kRunSchema << ',' << kRunSchemaVersion << '\n';
    os << "L=";
    for (std::size_t i = 0; i < cfg.Ls.size(); ++i) os << (i ? "," : "") << cfg.Ls[i];
    os << "\nm=" << cfg.m << "\ndy=" << fmt_double(cfg.dy) << "\ny_cap=" << fmt_double(cfg.y_cap)
       << "\nwindow=" << fmt_double(cfg.window) << "\ndb=" << fmt_double(cfg.db)
       << "\ndb_tilde=" << fmt_double(cfg.db_tilde) << "\ncap_retries=" << cfg.cap_retries
       << "\nreplicas=" << cfg.replicas << "\nseed=" << cfg.seed << "\nzero_noise=" << (cfg.zero_noise ? 1 : 0) << '\n';
    return os.str();
}

std::string config_hash(const RunConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical_config(cfg)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

nlohmann::ordered_json config_json(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["schema"] = kRunSchema;
    j["schema_version"] = kRunSchemaVersion;
    j["config_hash"] = config_hash(cfg);
    j["L"] = cfg.Ls;
    j["m"] = cfg.m;
    j["dy"] = cfg.dy;
    j["y_cap"] = cfg.y_cap;
    j["window"] = cfg.window;
    j["db"] = cfg.db;
    j["db_tilde"] = cfg.db_tilde;
    j["cap_retries"] = cfg.cap_retries;
    j["replicas"] = cfg.replicas;
    j["seed"] = cfg.seed;
    j["zero_noise"] = cfg.zero_noise;
    nlohmann::ordered_json per_L = nlohmann::ordered_json::object();
    for (int L : cfg.Ls) {
        nlohmann::ordered_json e;
        e["y_cap"] = cfg.y_cap_for(L);
        e["window"] = cfg.window_for(L);
        e["db"] = cfg.db_for(L);
        e["tilde_window"] = 2.0 * L;
        e["db_tilde"] = cfg.db_tilde_for(L);
        e["tilde_cap"] = cfg.tilde_cap_for(L);
        e["replica_stream"] = L;
        per_L[std::to_string(L)] = e;
    }
    j["effective"] = per_L;
    return j;
}

ReplicaRow run_replica(const RunConfig& cfg, int L, std::uint64_t replica) {
    const auto t0 = std::chrono::steady_clock::now();
    const double dy = cfg.dy;
    const FieldConfig base = cfg.field_for(L, replica);
    double cap = cfg.y_cap_for(L);
    double tcap = cfg.tilde_cap_for(L);
    NoiseField field = generate_field(base.with_cap(std::max(cap, tcap)));
    const auto ensure = [&](double c) {
        if (c > field.config().y_cap) field = generate_field(base.with_cap(c));
    };

    ReplicaRow row;
    row.replica = replica;

    SweepOptions so;
    so.window = cfg.window_for(L);
    so.db = cfg.db_for(L);
    SweepResult sw;
    for (int attempt = 0;; ++attempt) {
        ensure(cap);
        so.solver.working_cap = steps(cap, dy);
        sw = boundary_sweep(field, so);
        if (!sw.cap_saturated || attempt == cfg.cap_retries) break;
        cap *= 2.0;
    }
    row.cap_saturated = sw.cap_saturated;
    row.y_cap_used = cap;

    const ExtremalActions ex = extremal_actions(sw);
    row.A_L = sw.M_at(0.0, 0.0);
    row.A_plus = ex.a_plus;
    row.A_minus = ex.a_minus;
    row.H_L = midpoint_deviation(sw);
    row.m40 = linear_action_statistic(sw);
    row.D_max = sw.per_scale_D_max;

    const HeightProfile& h = *sw.zero_bc_argmax;
    for (int l = 1; l <= L; l *= 2) row.coarse[l] = action_of(field, coarsen(h, l)).action_per_length;

    SolverOptions inner;
    inner.working_cap = steps(cap, dy);
    for (int l = 2; l < L; l *= 2) {
        SolverOptions coarse = inner;
        coarse.node_scale = l;
        const DPSolution hc = maximize_fixed_bc(field, 0.0, 0.0, coarse);
        row.paste[l] = action_of(field, paste_conditional_maximizers(field, hc.argmax, inner)).action_per_length;
    }

    SweepOptions st;
    st.window = 2.0 * L;
    st.db = cfg.db_tilde_for(L);
    SweepResult tilde;
    for (int attempt = 0;; ++attempt) {
        ensure(tcap);
        st.solver.working_cap = steps(tcap, dy);
        tilde = boundary_sweep(field, st);
        if (!tilde.cap_saturated || attempt == cfg.cap_retries) break;
        tcap *= 2.0;
    }
    row.A_tilde_minus = tilde_minus(row.A_minus, tilde);
    row.cap_saturated = row.cap_saturated || tilde.cap_saturated;

    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

std::vector<std::string> run_columns(int L) {
    std::vector<std::string> c = {"replica", "A_L", "A_plus", "A_minus", "A_tilde_minus"};
    for (int l = 1; l <= L; l *= 2) c.push_back("coarse_l" + std::to_string(l));
    for (int l = 2; l < L; l *= 2) c.push_back("paste_l" + std::to_string(l));
    c.push_back("H_L");
    for (int rho = 1; rho <= L; rho *= 2) c.push_back("Dmax_rho" + std::to_string(rho));
    c.push_back("m40");
    c.push_back("cap_saturated");
    c.push_back("y_cap_used");
    return c;
}

std::string run_csv_header(int L) {
    std::string out;
    for (const std::string& c : run_columns(L)) out += (out.empty() ? "" : ",") + c;
    return out;
}

std::string run_csv_line(const ReplicaRow& row, int L) {
    std::string out = std::to_string(row.replica);
    const auto add = [&](double v) { out += ',' + fmt_double(v); };
    add(row.A_L);
    add(row.A_plus);
    add(row.A_minus);
    add(row.A_tilde_minus);
    for (int l = 1; l <= L; l *= 2) add(row.coarse.at(l));
    for (int l = 2; l < L; l *= 2) add(row.paste.at(l));
    add(row.H_L);
    for (int rho = 1; rho <= L; rho *= 2) add(row.D_max.at(rho));
    add(row.m40);
    out += row.cap_saturated ? ",1" : ",0";
    add(row.y_cap_used);
    return out;
}

std::vector<double> RunTable::column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw Error(ErrorKind::MissingData, "run table has no column '" + name + "'");
    const auto k = static_cast<std::size_t>(it - columns.begin());
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[k]);
    return out;
}

bool RunTable::has(const std::string& name) const {
    return std::find(columns.begin(), columns.end(), name) != columns.end();
}

RunTable read_run_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    const std::string where = path.filename().string();
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::SchemaMismatch, where + " row 1: empty file");
    {
        std::stringstream ss(line);
        std::string tag, name, version;
        std::getline(ss, tag, ',');
        std::getline(ss, name, ',');
        std::getline(ss, version, ',');
        if (tag != "#schema" || name != kRunSchema)
            throw Error(ErrorKind::SchemaMismatch, where + " row 1: expected '#schema," + kRunSchema + ",<version>'");
        if (trim(version) != std::to_string(kRunSchemaVersion))
            throw Error(ErrorKind::SchemaMismatch, where + " row 1: unsupported schema version '" + version + "'");
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line[0] == '#') continue;
        break;
    }
    RunTable t;
    {
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) t.columns.push_back(trim(c));
    }
    // L is the largest dyadic coarse scale present.
    for (const std::string& c : t.columns)
        if (c.rfind("coarse_l", 0) == 0) t.L = std::max(t.L, std::stoi(c.substr(8)));
    if (t.L == 0 || t.columns != run_columns(t.L))
        throw Error(ErrorKind::SchemaMismatch, where + " row " + std::to_string(lineno) + ": unexpected column set");
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::vector<double> r;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            const std::size_t col = r.size();
            if (col >= t.columns.size())
                throw Error(ErrorKind::SchemaMismatch, where + " row " + std::to_string(lineno) + ": too many cells");
            try {
                std::size_t used = 0;
                const std::string c = trim(cell);
                r.push_back(std::stod(c, &used));
                if (used != c.size()) throw std::invalid_argument(c);
            } catch (const std::logic_error&) {
                throw Error(ErrorKind::SchemaMismatch, where + " row " + std::to_string(lineno) + " column '" +
                                                           t.columns[col] + "': not a number '" + cell + "'");
            }
        }
        if (r.size() != t.columns.size())
            throw Error(ErrorKind::SchemaMismatch, where + " row " + std::to_string(lineno) + " column '" +
                                                       t.columns[std::min(r.size(), t.columns.size() - 1)] + "': missing cell");
        t.rows.push_back(std::move(r));
    }
    return t;
}

SimulateReport simulate(const RunConfig& cfg, const fs::path& out_dir) {
    cfg.validate();
    fs::create_directories(out_dir);
    SimulateReport rep;
    const fs::path echo = out_dir / "config.json";
    write_text_file(echo, config_json(cfg).dump(2) + "\n");
    rep.files.push_back(echo);

    std::ofstream log(out_dir / "timing.log", std::ios::app);
    log << "# start " << timestamp() << " config_hash=" << config_hash(cfg) << '\n';
    const int workers = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));

    for (int L : cfg.Ls) {
        const fs::path csv_path = out_dir / ("run_L" + std::to_string(L) + ".csv");
        std::ofstream csv(csv_path, std::ios::trunc);
        if (!csv) throw Error(ErrorKind::Io, "cannot write " + csv_path.string());
        csv << "#schema," << kRunSchema << ',' << kRunSchemaVersion << '\n';
        csv << "#config_hash," << config_hash(cfg) << '\n';
        csv << run_csv_header(L) << '\n';

        OrderedSink sink(csv, log, L);
        std::atomic<int> next{0};
        std::atomic<bool> failed{false};
        std::exception_ptr error;
        std::mutex error_mu;
        const auto work = [&] {
            for (;;) {
                const int r = next.fetch_add(1);
                if (r >= cfg.replicas || failed) return;
                try {
                    sink.put(static_cast<std::size_t>(r), run_replica(cfg, L, static_cast<std::uint64_t>(r)));
                } catch (...) {
                    std::lock_guard lock(error_mu);
                    if (!error) error = std::current_exception();
                    failed = true;
                    return;
                }
            }
        };
        const int n = std::min(workers, std::max(cfg.replicas, 1));
        if (n <= 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            for (int i = 0; i < n; ++i) pool.emplace_back(work);
            for (auto& t : pool) t.join();
        }
        if (error) std::rethrow_exception(error);
        rep.saturated_rows[L] = sink.saturated();
        rep.files.push_back(csv_path);
    }
    log << "# end " << timestamp() << '\n';
    return rep;
}

fs::path default_out_dir() {
    if (const char* env = std::getenv("WNACTION_OUT_DIR"); env && *env) return env;
    return "wnaction_out";
}

std::map<int, RunTable> load_run_dir(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw Error(ErrorKind::Io, "not a directory: " + dir.string());
    static const std::regex name(R"(run_L(\d+)\.csv)");
    std::map<int, RunTable> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        std::smatch m;
        const std::string fn = e.path().filename().string();
        if (!std::regex_match(fn, m, name)) continue;
        RunTable t = read_run_csv(e.path());
        if (t.L != std::stoi(m[1].str())) throw Error(ErrorKind::SchemaMismatch, fn + ": columns do not match L");
        out.emplace(t.L, std::move(t));
    }
    if (out.empty()) throw Error(ErrorKind::MissingData, "no run_L*.csv files in " + dir.string());
    return out;
}

std::vector<ScalingPoint> scaling_points(const std::map<int, RunTable>& runs) {
    std::vector<ScalingPoint> pts;
    for (const auto& [L, t] : runs) {
        if (t.rows.empty()) continue;
        const Moments m = moments(t.column("A_L"));
        pts.push_back({L, m.mean, m.stderr_mean});
    }
    return pts;
}

std::vector<ScalingPoint> read_points_csv(const fs::path& path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    std::vector<ScalingPoint> pts;
    std::size_t lineno = 0;
    bool header = false;
    static const char* names[] = {"L", "mean", "se"};
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cells.push_back(trim(c));
        if (!header) {
            if (cells != std::vector<std::string>{"L", "mean", "se"})
                throw Error(ErrorKind::SchemaMismatch, "row " + std::to_string(lineno) + ": expected header L,mean,se");
            header = true;
            continue;
        }
        if (cells.size() != 3)
            throw Error(ErrorKind::SchemaMismatch, "row " + std::to_string(lineno) + ": expected 3 cells");
        double v[3];
        for (int k = 0; k < 3; ++k) {
            try {
                std::size_t used = 0;
                v[k] = std::stod(cells[static_cast<std::size_t>(k)], &used);
                if (used != cells[static_cast<std::size_t>(k)].size()) throw std::invalid_argument("");
            } catch (const std::logic_error&) {
                throw Error(ErrorKind::SchemaMismatch,
                            "row " + std::to_string(lineno) + " column '" + names[k] + "': not a number");
            }
        }
        pts.push_back({static_cast<int>(v[0]), v[1], v[2]});
    }
    return pts;
}

nlohmann::ordered_json fit_scaling_json(const ScalingFit& fit, const std::string& hash) {
    nlohmann::ordered_json j;
    j["a_star"] = fit.a_star;
    j["a_star_se"] = fit.a_star_se;
    j["intercept"] = fit.intercept;
    j["intercept_se"] = fit.intercept_se;
    j["residuals"] = fit.residuals;
    nlohmann::ordered_json pts = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < fit.points.size(); ++i) {
        nlohmann::ordered_json p;
        p["L"] = fit.points[i].L;
        p["ln_L"] = std::log(static_cast<double>(fit.points[i].L));
        p["mean"] = fit.points[i].mean;
        p["se"] = fit.points[i].se;
        p["residual"] = fit.residuals[i];
        p["residual_se"] = fit.residual_se[i];
        if (i < fit.jackknife_slopes.size()) p["jackknife_slope"] = fit.jackknife_slopes[i];
        pts.push_back(p);
    }
    j["points"] = pts;
    j["max_residual_ratio"] = fit.max_residual_ratio;
    j["max_jackknife_ratio"] = fit.max_jackknife_ratio;
    j["bands"] = nlohmann::ordered_json::array();
    j["orlicz"] = nlohmann::ordered_json::object();
    j["config_hash"] = hash;
    return j;
}

std::map<int, std::vector<double>> coarse_action_table(const RunTable& run) {
    std::map<int, std::vector<double>> out;
    for (int l = 1; l <= run.L; l *= 2) out[l] = run.column("coarse_l" + std::to_string(l));
    return out;
}

nlohmann::ordered_json equipartition_json(const BandReport& rep) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json bands = nlohmann::ordered_json::array();
    for (const Band& b : rep.bands) {
        nlohmann::ordered_json e;
        e["l_fine"] = b.l_fine;
        e["l_coarse"] = b.l_coarse;
        e["mean"] = b.mean;
        e["se"] = b.se;
        e["predicted"] = b.predicted;
        bands.push_back(e);
    }
    j["bands"] = bands;
    j["common_slope"] = rep.common_slope;
    j["common_slope_se"] = rep.common_slope_se;
    j["max_band_z"] = rep.max_band_z;
    j["max_telescoping_error"] = rep.max_telescoping_error;
    j["consistent"] = rep.consistent;
    return j;
}

ConcentrationRow concentration(const RunTable& run) {
    ConcentrationRow c;
    c.L = run.L;
    std::vector<double> a = run.column("A_L");
    const double mean = moments(a).mean;
    for (double& v : a) v -= mean;
    c.centered_A_32 = orlicz_norm(a, 1.5).norm;
    c.H_3 = orlicz_norm(run.column("H_L"), 3.0).norm;
    c.m40_2 = orlicz_norm(run.column("m40"), 2.0).norm;
    for (int rho = 1; rho <= run.L; rho *= 2)
        c.D_1 = std::max(c.D_1, orlicz_norm(run.column("Dmax_rho" + std::to_string(rho)), 1.0).norm);
    return c;
}

std::vector<CountRow> count_net_grid(const std::vector<int>& ratios, const std::vector<double>& nus, int l) {
    std::vector<CountRow> out;
    for (int N : ratios)
        for (double nu : nus) {
            const NetBallSpec spec{N * l, l, nu};
            spec.validate();
            const BigCount n = enumerate_net_ball(spec);
            out.push_back({spec.L, l, nu, n, static_cast<double>(log_count(n)) / (N * std::log(nu))});
        }
    return out;
}

std::string count_net_csv(const std::vector<CountRow>& rows) {
    std::string out = "L,l,nu,count,ratio\n";
    for (const CountRow& r : rows)
        out += std::to_string(r.L) + ',' + std::to_string(r.l) + ',' + fmt_double(r.nu) + ',' + to_string(r.count) +
               ',' + fmt_double(r.ratio) + '\n';
    return out;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorKind::Io, "write failed: " + path.string());
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace wnaction
