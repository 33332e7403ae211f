#pragma once

// Experiment orchestration: configuration, per-replica pipeline, run files,
// and the drivers behind the CLI subcommands.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "wnaction/net.hpp"
#include "wnaction/noise.hpp"
#include "wnaction/stats.hpp"

namespace wnaction {

inline constexpr const char* kRunSchema = "wnaction-run";
inline constexpr int kRunSchemaVersion = 1;

// Zero-valued numeric fields mean "derive from L".
struct RunConfig {
    std::vector<int> Ls{4, 8, 16, 32, 64};
    int m = 4;
    double dy = 0.25;
    double y_cap = 0.0;     // 8 sqrt(L), rounded up to the grid
    double window = 0.0;    // L/2
    double db = 0.0;        // max(dy, L dy / 32)
    double db_tilde = 0.0;  // L/8, sweep of the enlarged window 2L
    int cap_retries = 4;
    int replicas = 200;
    std::uint64_t seed = 20240601;
    bool zero_noise = false;
    // Execution only; not part of the hash.
    int threads = 0;  // 0: hardware concurrency

    void validate() const;

    double y_cap_for(int L) const;
    double window_for(int L) const;
    double db_for(int L) const;
    double db_tilde_for(int L) const;
    double tilde_cap_for(int L) const;  // covers the 2L window

    // Field configuration of one replica; each L draws an independent stream.
    FieldConfig field_for(int L, std::uint64_t replica) const;
};

// Sets one parameter from its textual form; throws Error(InvalidConfig).
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);
// "key = value" lines; '#' starts a comment.
RunConfig parse_config_text(const std::string& text, RunConfig base = {});
RunConfig load_config_file(const std::filesystem::path& path, RunConfig base = {});

// Canonical key=value listing of every hashed parameter, one per line.
std::string canonical_config(const RunConfig& cfg);
// FNV-1a of the canonical listing, 16 hex digits.
std::string config_hash(const RunConfig& cfg);
nlohmann::ordered_json config_json(const RunConfig& cfg);

struct ReplicaRow {
    std::uint64_t replica = 0;
    double A_L = 0.0;
    double A_plus = 0.0;
    double A_minus = 0.0;
    double A_tilde_minus = 0.0;
    std::map<int, double> coarse;    // l = 1, 2, ..., L: (W - D)(h*_{>=l})/L
    std::map<int, double> paste;     // l = 2, ..., L/2: action of the pasted competitor
    double H_L = 0.0;
    std::map<int, double> D_max;     // rho -> max over pairs of D(h*_rho)/L
    double m40 = 0.0;
    bool cap_saturated = false;
    double y_cap_used = 0.0;
    double seconds = 0.0;            // wall time, sidecar only
};

ReplicaRow run_replica(const RunConfig& cfg, int L, std::uint64_t replica);

std::vector<std::string> run_columns(int L);
std::string run_csv_header(int L);
std::string run_csv_line(const ReplicaRow& row, int L);

struct RunTable {
    int L = 0;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::vector<double> column(const std::string& name) const;
    bool has(const std::string& name) const;
};

// Rejects unknown schema versions and malformed cells, naming row and column.
RunTable read_run_csv(const std::filesystem::path& path);

struct SimulateReport {
    std::vector<std::filesystem::path> files;
    std::map<int, std::size_t> saturated_rows;
};

// Writes config.json, run_L<L>.csv per L, and timing.log into out_dir.
SimulateReport simulate(const RunConfig& cfg, const std::filesystem::path& out_dir);

// Default output directory: $WNACTION_OUT_DIR or ./wnaction_out.
std::filesystem::path default_out_dir();

// run_L*.csv files of a directory, by L.
std::map<int, RunTable> load_run_dir(const std::filesystem::path& dir);

std::vector<ScalingPoint> scaling_points(const std::map<int, RunTable>& runs);
// CSV with columns L,mean,se.
std::vector<ScalingPoint> read_points_csv(const std::filesystem::path& path);

nlohmann::ordered_json fit_scaling_json(const ScalingFit& fit, const std::string& config_hash);

std::map<int, std::vector<double>> coarse_action_table(const RunTable& run);
nlohmann::ordered_json equipartition_json(const BandReport& rep);

struct ConcentrationRow {
    int L = 0;
    double centered_A_32 = 0.0;   // Orlicz-3/2 of A_L - mean
    double H_3 = 0.0;             // Orlicz-3 of H_L
    double m40_2 = 0.0;           // Orlicz-2 of m40
    double D_1 = 0.0;             // max over rho of Orlicz-1 of D_max(rho)
};

ConcentrationRow concentration(const RunTable& run);

struct CountRow {
    int L = 0;
    int l = 1;
    double nu = 0.0;
    BigCount count = 0;
    double ratio = 0.0;  // ln count / ((L/l) ln nu)
};

std::vector<CountRow> count_net_grid(const std::vector<int>& ratios, const std::vector<double>& nus, int l = 1);
std::string count_net_csv(const std::vector<CountRow>& rows);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

} // namespace wnaction
