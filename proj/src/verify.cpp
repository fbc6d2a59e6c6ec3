#include "mrwbandit/verify.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <random>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>

#include "mrwbandit/adversary.hpp"
#include "mrwbandit/analysis.hpp"
#include "mrwbandit/engine.hpp"
#include "mrwbandit/parallel.hpp"
#include "mrwbandit/players.hpp"

namespace mrwb {
namespace {

CheckResult pass(std::string name, std::string detail = {}) { return {std::move(name), true, std::move(detail)}; }
CheckResult fail(std::string name, std::string detail) { return {std::move(name), false, std::move(detail)}; }

template <typename... Args>
std::string cat(const Args&... args) {
    std::ostringstream os;
    (os << ... << args);
    return os.str();
}

CheckResult check_small_mrw() {
    const auto pf = ParentFunction::mrw();
    const Round expected[] = {0, 0, 2, 0, 4, 4, 6};
    for (Round t = 1; t <= 7; ++t) {
        if (parent(pf, t, 7) != expected[t - 1]) return fail("mrw7-edges", cat("rho(", t, ") = ", parent(pf, t, 7)));
    }
    const auto w = width(pf, 7);
    const auto c = cut(pf, 1, 7);
    if (w != 3 || c != std::vector<Round>{1, 2, 4}) return fail("mrw7-edges", cat("width(7) = ", w));
    return pass("mrw7-edges", "width(MRW, 7) = 3, cut(1) = {1, 2, 4}");
}

CheckResult check_partition(const ParentFunction& pf, Round max_horizon) {
    try {
        for (Round T = 1; T <= max_horizon; ++T) {
            const auto sizes = cut_sizes(pf, T);
            for (Round t = 1; t <= T; ++t) {
                const auto c = cut(pf, t, T);
                if (c.size() != sizes[t] || std::find(c.begin(), c.end(), t) == c.end()) {
                    return fail("cut-partition", cat("T=", T, " t=", t));
                }
                for (Round s = 1; s <= T; ++s) {
                    const bool member = std::binary_search(c.begin(), c.end(), s);
                    if (member != (pf(s) < t && t <= s)) return fail("cut-partition", cat("T=", T, " t=", t, " s=", s));
                }
            }
        }
    } catch (const std::exception& e) {
        return fail("cut-partition", e.what());
    }
    return pass("cut-partition", cat("all T <= ", max_horizon));
}

CheckResult check_streaming(std::uint64_t seed) {
    const Round T = 1024;
    const auto pf = ParentFunction::mrw();
    const auto traj = sample_trajectory(pf, T, 0.1, seed);
    StreamingWalk walk(pf, T, 0.1, seed);
    for (Round t = 1; t <= T; ++t) {
        const double w = walk.next();
        if (w != traj.values[t]) return fail("streaming-equals-materialized", cat("seed=", seed, " t=", t));
        if (walk.live_slots() > bit_length(T)) return fail("streaming-equals-materialized", cat("slots at t=", t));
    }
    return pass("streaming-equals-materialized", cat("T=", T, " slots=", walk.slot_count()));
}

CheckResult check_audit_fuzz(const ParentFunction& pf, std::size_t runs, std::uint64_t seed, std::size_t jobs) {
    const Round T = 1024;
    std::size_t w = 0;
    try {
        w = width(pf, T);
    } catch (const std::exception& e) {
        return fail("cut-switch-inequality", e.what());
    }
    std::vector<std::string> violations(runs);
    parallel_for(runs, jobs, [&](std::size_t n) {
        const std::uint64_t run_seed = derive_seed(seed, n);
        Engine rng = make_stream(run_seed, 0);
        const std::size_t k = n % 2 == 0 ? 2 : 4;
        const double switch_prob = std::pow(10.0, std::uniform_real_distribution<double>(-3.0, 0.0)(rng));
        std::bernoulli_distribution flip(switch_prob);
        std::uniform_int_distribution<Action> arm(1, k);
        std::vector<Action> actions(T);
        Action cur = arm(rng);
        for (auto& a : actions) {
            if (flip(rng)) cur = arm(rng);
            a = cur;
        }
        for (Action i = 1; i <= k; ++i) {
            const auto audit = audit_cut_switch(actions, pf, i, kNoAction, w);
            if (!audit.holds) {
                violations[n] = cat("seed=", run_seed, " arm=", i, " odd=", audit.odd_rounds, " bound=", audit.bound);
                return;
            }
        }
    });
    for (const auto& v : violations) {
        if (!v.empty()) return fail("cut-switch-inequality", v);
    }
    return pass("cut-switch-inequality", cat(runs, " fuzzed traces, T=", T, ", k in {2, 4}"));
}

CheckResult check_accounting(std::uint64_t seed) {
    const char* policies[] = {"const:1", "etc:rpa=16", "exp3:auto", "betc:tau=auto"};
    for (const char* spec : policies) {
        for (bool free_first : {false, true}) {
            for (std::size_t n = 0; n < 5; ++n) {
                AdversaryConfig cfg;
                cfg.horizon = 512;
                cfg.arms = 3;
                cfg.seed = derive_seed(seed, n);
                const auto seq = generate(cfg);
                auto policy = make_policy(spec);
                GameOptions opts;
                opts.record_actions = true;
                opts.first_round_free = free_first;
                const auto r = run_game(seq, *policy, derive_seed(seed, n, 1), opts);
                const double again = recompute_regret(seq, r.actions, opts.switch_cost, r.initial_action);
                if (!accounting_identities_hold(r) || std::abs(again - r.regret) > 1e-9) {
                    return fail("accounting-identities", cat(spec, " seed=", cfg.seed));
                }
            }
        }
    }
    return pass("accounting-identities", "sum N_i = T, sum M_i (+ sentinel) = 2M, R recomputed");
}

CheckResult check_drift(ParentKind kind, std::uint64_t seed, std::size_t jobs) {
    const auto pf = ParentFunction::of_kind(kind);
    const std::size_t trials = 2000;
    const double delta = 0.1;
    const auto d = verify_drift(pf, 4096, 0.05, delta, trials, seed, jobs);
    const double limit = delta + 3.0 * binomial_se(delta, trials);
    const std::string name = cat("drift-bound-", to_string(kind));
    const std::string detail = cat("rate=", d.rate(), " limit=", limit, " seed=", seed);
    return d.rate() <= limit ? pass(name, detail) : fail(name, detail);
}

CheckResult check_clipping(Round T, std::uint64_t seed, std::size_t jobs) {
    const std::size_t seeds = 2000;
    std::vector<char> holds(seeds, 0);
    parallel_for(seeds, jobs, [&](std::size_t n) {
        AdversaryConfig cfg;
        cfg.horizon = T;
        cfg.seed = derive_seed(seed, n);
        holds[n] = clipping_event_holds(generate(cfg));
    });
    const double p = static_cast<double>(std::count(holds.begin(), holds.end(), 1)) / seeds;
    const double limit = 5.0 / 6.0 - 3.0 * binomial_se(5.0 / 6.0, seeds);
    const std::string name = cat("clipping-event-T", T);
    const std::string detail = cat("Pr(no clip)=", p, " floor=", limit, " seed=", seed);
    return p >= limit ? pass(name, detail) : fail(name, detail);
}

CheckResult check_variance(std::uint64_t seed, std::size_t jobs) {
    const Round T = 1024;
    const double sigma = 0.1;
    const std::size_t n = 10000;
    const Round probes[] = {1, 7, 255, 768, 1023, 1024};
    const auto pf = ParentFunction::mrw();
    std::vector<std::array<double, 6>> samples(n);
    parallel_for(n, jobs, [&](std::size_t i) {
        const auto traj = sample_trajectory(pf, T, sigma, derive_seed(seed, i));
        for (std::size_t j = 0; j < std::size(probes); ++j) samples[i][j] = traj.values[probes[j]];
    });
    const double rse = std::sqrt(2.0 / static_cast<double>(n - 1));
    for (std::size_t j = 0; j < std::size(probes); ++j) {
        double mean = 0.0;
        for (const auto& s : samples) mean += s[j];
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (const auto& s : samples) ss += (s[j] - mean) * (s[j] - mean);
        const double var = ss / static_cast<double>(n - 1);
        const double expected = static_cast<double>(ancestor_count(pf, probes[j])) * sigma * sigma;
        if (std::abs(var / expected - 1.0) > 5.0 * rse) {
            return fail("variance-identity", cat("t=", probes[j], " var=", var, " expected=", expected, " seed=", seed));
        }
    }
    return pass("variance-identity", cat(n, " trajectories, T=", T));
}

CheckResult check_chi_uniform(std::uint64_t seed, std::size_t jobs) {
    const std::size_t k = 4;
    const std::size_t n = 10000;
    std::vector<Action> chi(n);
    parallel_for(n, jobs, [&](std::size_t i) {
        AdversaryConfig cfg;
        cfg.horizon = 64;
        cfg.arms = k;
        cfg.seed = derive_seed(seed, i);
        chi[i] = *generate(cfg).best_arm();
    });
    std::vector<double> counts(k, 0.0);
    for (Action a : chi) counts[a - 1] += 1.0;
    const double expected = static_cast<double>(n) / static_cast<double>(k);
    double stat = 0.0;
    for (double c : counts) stat += (c - expected) * (c - expected) / expected;
    const boost::math::chi_squared dist(static_cast<double>(k - 1));
    const double critical = boost::math::quantile(boost::math::complement(dist, 0.001));
    const std::string detail = cat("chi2=", stat, " critical=", critical, " seed=", seed);
    return stat <= critical ? pass("best-arm-uniform", detail) : fail("best-arm-uniform", detail);
}

}  // namespace

std::vector<CheckResult> check_bit_combinatorics(const ParentFunction& pf, Round max_horizon) {
    std::vector<CheckResult> out;
    std::vector<std::size_t> counts;
    try {
        counts = ancestor_counts(pf, max_horizon);
        out.push_back(pass("parent-precedes", cat("rho(t) < t for t <= ", max_horizon)));
    } catch (const std::exception& e) {
        out.push_back(fail("parent-precedes", e.what()));
        return out;
    }

    CheckResult pop = pass("ancestors-popcount", cat("t <= ", max_horizon));
    for (Round t = 1; t <= max_horizon; ++t) {
        if (counts[t] != static_cast<std::size_t>(std::popcount(t))) {
            pop = fail("ancestors-popcount", cat("t=", t, " |rho*(t)|=", counts[t], " popcount=", std::popcount(t)));
            break;
        }
    }
    out.push_back(pop);

    CheckResult zeros = pass("cut-zero-bits", cat("all T <= ", max_horizon));
    for (unsigned bits = 1; bits <= bit_length(max_horizon) && zeros.passed; ++bits) {
        const Round top = std::min<Round>((Round{1} << bits) - 1, max_horizon);
        const auto sizes = cut_sizes(pf, top);
        for (Round t = 1; t <= top; ++t) {
            if (sizes[t] > zero_bits(t, bits) + 1) {
                zeros = fail("cut-zero-bits", cat("T=", top, " t=", t, " |cut|=", sizes[t], " bound=", zero_bits(t, bits) + 1));
                break;
            }
        }
    }
    out.push_back(zeros);

    // Depth and width for every horizon, maintained incrementally.
    CheckResult dw = pass("depth-width-log-bound", cat("all T <= ", max_horizon));
    std::vector<std::size_t> running(max_horizon + 1, 0);
    std::size_t d = 0, w = 0;
    for (Round T = 1; T <= max_horizon; ++T) {
        d = std::max(d, counts[T]);
        for (Round u = pf(T) + 1; u <= T; ++u) w = std::max(w, ++running[u]);
        if (d > bit_length(T) || w > bit_length(T)) {
            dw = fail("depth-width-log-bound", cat("T=", T, " depth=", d, " width=", w, " bound=", bit_length(T)));
            break;
        }
    }
    out.push_back(dw);
    return out;
}

ParentFunction corrupted_mrw() {
    return ParentFunction::custom("mrw-corrupted", [](Round t) { return t == 12 ? Round{11} : t & (t - 1); });
}

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
    const bool full = options.level == VerifyLevel::Full;
    const Round max_horizon = full ? Round{1} << 16 : Round{1} << 12;
    std::vector<CheckResult> out = check_bit_combinatorics(options.parent, max_horizon);
    out.push_back(check_small_mrw());
    out.push_back(check_partition(options.parent, full ? 128 : 48));
    out.push_back(check_streaming(options.seed));
    out.push_back(check_audit_fuzz(options.parent, full ? 10000 : 1000, options.seed, options.jobs));
    out.push_back(check_accounting(options.seed));
    if (full) {
        for (auto kind : {ParentKind::Iid, ParentKind::SimpleWalk, ParentKind::Mrw}) {
            out.push_back(check_drift(kind, options.seed, options.jobs));
        }
        for (Round T : {Round{64}, Round{1024}, Round{16384}}) out.push_back(check_clipping(T, options.seed, options.jobs));
        out.push_back(check_variance(options.seed, options.jobs));
        out.push_back(check_chi_uniform(options.seed, options.jobs));
    }
    return out;
}

}  // namespace mrwb
