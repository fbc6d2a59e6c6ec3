#pragma once

// File formats. Every CSV starts with one comment line
//   # mrwbandit <version> <parameters as compact JSON>
// followed by a header row. Readers skip lines starting with '#'.
//
//   trajectory:  t,w                 (t = 0..T)
//   losses:      t,x,loss            (1-based, T*k rows, t-major)
//   results:     trial,seed,T,k,c,policy,R,R_prime,M,best_fixed_loss,N_chi
//   actions:     trial,T,c,policy,t,action
//
// Sidecars hold the same parameters as pretty-printed JSON next to the CSV
// (<stem>.meta.json). Numbers are written in shortest round-trip form, so
// rewriting a parsed file reproduces it byte for byte.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mrwbandit/adversary.hpp"
#include "mrwbandit/engine.hpp"
#include "mrwbandit/process.hpp"

namespace mrwb {

inline constexpr std::string_view kToolName = "mrwbandit";
inline constexpr std::string_view kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string format_number(double v);
double parse_double(std::string_view text);
std::uint64_t parse_u64(std::string_view text);

std::string metadata_line(const Json& params);
std::filesystem::path sidecar_path(const std::filesystem::path& csv);
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

Json trajectory_metadata(const ProcessTrajectory& traj);
std::string trajectory_csv(const ProcessTrajectory& traj);

struct TrajectoryPoint {
    Round t = 0;
    double w = 0.0;
};
std::vector<TrajectoryPoint> parse_trajectory_csv(std::string_view text);

Json loss_metadata(const LossSequence& seq);
std::string loss_csv(const LossSequence& seq);
// Dense sequence from a loss CSV. The grid must be complete. `metadata`, if
// given, supplies chi for N_chi accounting.
LossSequence parse_loss_csv(std::string_view text, const std::optional<Json>& metadata = std::nullopt);
LossSequence read_loss_file(const std::filesystem::path& csv);

struct ResultRow {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    Round horizon = 0;
    std::size_t arms = 0;
    double switch_cost = 0.0;
    std::string policy;
    double regret = 0.0;
    std::optional<double> regret_unclipped;
    std::size_t switches = 0;
    double best_fixed_loss = 0.0;
    std::optional<std::size_t> plays_of_best_arm;
};

ResultRow to_row(std::size_t trial, const GameResult& result);
std::string_view results_header();
std::string results_csv(const Json& params, const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_results_csv(std::string_view text);

std::string actions_header();
void append_actions(std::string& out, std::size_t trial, const GameResult& result);

}  // namespace mrwb
