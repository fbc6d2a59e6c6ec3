#include "mrwbandit/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace mrwb {
namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        parts.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

// Non-comment, non-empty lines with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::string_view>> data_lines(std::string_view text) {
    std::vector<std::pair<std::size_t, std::string_view>> out;
    std::size_t number = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++number;
        if (!line.empty() && line.front() != '#') out.emplace_back(number, line);
        start = end + 1;
    }
    return out;
}

[[noreturn]] void fail_at(std::size_t line, const std::string& why) {
    throw FormatError("line " + std::to_string(line) + ": " + why);
}

void expect_header(const std::vector<std::pair<std::size_t, std::string_view>>& lines, std::string_view header) {
    if (lines.empty()) throw FormatError("missing header '" + std::string(header) + "'");
    if (lines.front().second != header) {
        fail_at(lines.front().first, "expected header '" + std::string(header) + "', got '" +
                                         std::string(lines.front().second) + "'");
    }
}

}  // namespace

std::string format_number(double v) {
    if (v == 0.0) return "0";  // folds -0
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw std::runtime_error("cannot format number");
    return std::string(buf.data(), ptr);
}

double parse_double(std::string_view text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw FormatError("not a number: '" + std::string(text) + "'");
    }
    return v;
}

std::uint64_t parse_u64(std::string_view text) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw FormatError("not an unsigned integer: '" + std::string(text) + "'");
    }
    return v;
}

std::string metadata_line(const Json& params) {
    return "# " + std::string(kToolName) + " " + std::string(kToolVersion) + " " + params.dump() + "\n";
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
    auto p = csv;
    p.replace_extension(".meta.json");
    return p;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// --- trajectories -----------------------------------------------------------

Json trajectory_metadata(const ProcessTrajectory& traj) {
    Json j;
    j["tool"] = std::string(kToolName);
    j["version"] = std::string(kToolVersion);
    j["kind"] = traj.parent.name();
    j["T"] = traj.horizon;
    j["sigma"] = traj.sigma;
    j["seed"] = traj.seed;
    return j;
}

std::string trajectory_csv(const ProcessTrajectory& traj) {
    std::string out = metadata_line(trajectory_metadata(traj));
    out += "t,w\n";
    for (Round t = 0; t < traj.values.size(); ++t) {
        out += std::to_string(t);
        out += ',';
        out += format_number(traj.values[t]);
        out += '\n';
    }
    return out;
}

std::vector<TrajectoryPoint> parse_trajectory_csv(std::string_view text) {
    const auto lines = data_lines(text);
    expect_header(lines, "t,w");
    std::vector<TrajectoryPoint> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split(lines[i].second, ',');
        if (f.size() != 2) fail_at(lines[i].first, "expected 2 fields");
        try {
            out.push_back({parse_u64(f[0]), parse_double(f[1])});
        } catch (const FormatError& e) {
            fail_at(lines[i].first, e.what());
        }
    }
    return out;
}

// --- losses -----------------------------------------------------------------

Json loss_metadata(const LossSequence& seq) {
    Json j;
    j["tool"] = std::string(kToolName);
    j["version"] = std::string(kToolVersion);
    j["T"] = seq.horizon();
    j["k"] = seq.arms();
    if (const auto& cfg = seq.config()) {
        j["c"] = cfg->switch_cost;
        j["epsilon"] = seq.epsilon();
        j["sigma"] = seq.sigma();
        j["chi"] = *seq.best_arm();
        j["variant"] = std::string(to_string(cfg->variant));
        j["process"] = std::string(to_string(cfg->process));
        j["seed"] = cfg->seed;
        j["overridden"] = cfg->overridden();
        if (cfg->overridden()) {
            Json o = Json::object();
            if (cfg->epsilon_override) o["epsilon"] = *cfg->epsilon_override;
            if (cfg->sigma_override) o["sigma"] = *cfg->sigma_override;
            if (cfg->baseline_override) o["baseline"] = *cfg->baseline_override;
            if (cfg->forced_best_arm) o["chi"] = *cfg->forced_best_arm;
            j["overrides"] = o;
        }
    } else if (seq.best_arm()) {
        j["chi"] = *seq.best_arm();
    }
    return j;
}

std::string loss_csv(const LossSequence& seq) {
    std::string out = metadata_line(loss_metadata(seq));
    out += "t,x,loss\n";
    for (Round t = 1; t <= seq.horizon(); ++t) {
        for (Action x = 1; x <= seq.arms(); ++x) {
            out += std::to_string(t);
            out += ',';
            out += std::to_string(x);
            out += ',';
            out += format_number(seq.loss(t, x));
            out += '\n';
        }
    }
    return out;
}

LossSequence parse_loss_csv(std::string_view text, const std::optional<Json>& metadata) {
    const auto lines = data_lines(text);
    expect_header(lines, "t,x,loss");
    struct Entry {
        std::size_t line;
        Round t;
        Action x;
        double v;
    };
    std::vector<Entry> entries;
    entries.reserve(lines.size());
    Round T = 0;
    std::size_t k = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto [line, content] = lines[i];
        const auto f = split(content, ',');
        if (f.size() != 3) fail_at(line, "expected 3 fields (t,x,loss)");
        Entry e{line, 0, 0, 0.0};
        try {
            e.t = parse_u64(f[0]);
            e.x = parse_u64(f[1]);
            e.v = parse_double(f[2]);
        } catch (const FormatError& err) {
            fail_at(line, err.what());
        }
        if (e.t < 1 || e.x < 1) fail_at(line, "indices are 1-based");
        if (!(e.v >= 0.0 && e.v <= 1.0)) fail_at(line, "loss " + std::string(f[2]) + " outside [0, 1]");
        T = std::max(T, e.t);
        k = std::max(k, e.x);
        entries.push_back(e);
    }
    if (entries.empty()) throw FormatError("loss file has no rows");
    if (entries.size() != T * k) {
        throw FormatError("loss grid incomplete: " + std::to_string(entries.size()) + " rows for T=" +
                          std::to_string(T) + ", k=" + std::to_string(k));
    }
    std::vector<double> dense(T * k, -1.0);
    for (const auto& e : entries) {
        double& slot = dense[(e.t - 1) * k + (e.x - 1)];
        if (slot >= 0.0) fail_at(e.line, "duplicate entry");
        slot = e.v;
    }
    std::optional<Action> chi;
    if (metadata && metadata->contains("chi")) chi = metadata->at("chi").get<Action>();
    return LossSequence::from_matrix(T, k, std::move(dense), chi);
}

LossSequence read_loss_file(const std::filesystem::path& csv) {
    std::optional<Json> meta;
    const auto side = sidecar_path(csv);
    if (std::filesystem::exists(side)) meta = Json::parse(read_text(side));
    return parse_loss_csv(read_text(csv), meta);
}

// --- results ----------------------------------------------------------------

ResultRow to_row(std::size_t trial, const GameResult& r) {
    ResultRow row;
    row.trial = trial;
    row.seed = r.adversary_seed;
    row.horizon = r.horizon;
    row.arms = r.arms;
    row.switch_cost = r.switch_cost;
    row.policy = r.policy;
    row.regret = r.regret;
    row.regret_unclipped = r.regret_unclipped;
    row.switches = r.switches;
    row.best_fixed_loss = r.best_fixed_loss;
    row.plays_of_best_arm = r.plays_of_best_arm();
    return row;
}

std::string_view results_header() { return "trial,seed,T,k,c,policy,R,R_prime,M,best_fixed_loss,N_chi"; }

std::string results_csv(const Json& params, const std::vector<ResultRow>& rows) {
    std::string out = metadata_line(params);
    out += results_header();
    out += '\n';
    for (const auto& r : rows) {
        out += std::to_string(r.trial) + ',' + std::to_string(r.seed) + ',' + std::to_string(r.horizon) + ',' +
               std::to_string(r.arms) + ',' + format_number(r.switch_cost) + ',' + r.policy + ',' +
               format_number(r.regret) + ',' + (r.regret_unclipped ? format_number(*r.regret_unclipped) : "") +
               ',' + std::to_string(r.switches) + ',' + format_number(r.best_fixed_loss) + ',' +
               (r.plays_of_best_arm ? std::to_string(*r.plays_of_best_arm) : "") + '\n';
    }
    return out;
}

std::vector<ResultRow> parse_results_csv(std::string_view text) {
    const auto lines = data_lines(text);
    expect_header(lines, results_header());
    std::vector<ResultRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split(lines[i].second, ',');
        if (f.size() != 11) fail_at(lines[i].first, "expected 11 fields");
        try {
            ResultRow r;
            r.trial = parse_u64(f[0]);
            r.seed = parse_u64(f[1]);
            r.horizon = parse_u64(f[2]);
            r.arms = parse_u64(f[3]);
            r.switch_cost = parse_double(f[4]);
            r.policy = std::string(f[5]);
            r.regret = parse_double(f[6]);
            if (!f[7].empty()) r.regret_unclipped = parse_double(f[7]);
            r.switches = parse_u64(f[8]);
            r.best_fixed_loss = parse_double(f[9]);
            if (!f[10].empty()) r.plays_of_best_arm = parse_u64(f[10]);
            rows.push_back(std::move(r));
        } catch (const FormatError& e) {
            fail_at(lines[i].first, e.what());
        }
    }
    return rows;
}

std::string actions_header() { return "trial,T,c,policy,t,action\n"; }

void append_actions(std::string& out, std::size_t trial, const GameResult& r) {
    const std::string prefix = std::to_string(trial) + ',' + std::to_string(r.horizon) + ',' +
                               format_number(r.switch_cost) + ',' + r.policy + ',';
    for (std::size_t t = 0; t < r.actions.size(); ++t) {
        out += prefix;
        out += std::to_string(t + 1);
        out += ',';
        out += std::to_string(r.actions[t]);
        out += '\n';
    }
}

}  // namespace mrwb
