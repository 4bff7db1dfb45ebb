#include "mdpgeom/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace mdpgeom {

using ojson = nlohmann::ordered_json;

std::uint64_t policy_hash(const Policy& pi) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::uint64_t idx : pi.choice) {
        for (int b = 0; b < 8; ++b) {
            h ^= (idx >> (8 * b)) & 0xffu;
            h *= 0x100000001b3ull;
        }
    }
    return h;
}

Vector basis_v0(std::size_t n) {
    Vector v = Vector::Zero(n);
    v(0) = 1.0;
    return v;
}

Vector random_v0(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) v(i) = rng.uniform(-1.0, 1.0);
    return v;
}

namespace {

template <class T>
ojson opt_json(const std::optional<T>& v) {
    return v ? ojson(*v) : ojson(nullptr);
}

ojson real_json(double x) {
    return std::isfinite(x) ? ojson(x) : ojson(nullptr);
}

ojson vec_json(const std::vector<double>& v) {
    ojson out = ojson::array();
    for (double x : v) out.push_back(real_json(x));
    return out;
}

std::string hex64(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[i] = digits[h & 0xf];
    return out;
}

std::string opt_bool_csv(const std::optional<bool>& b) {
    return b ? (*b ? "true" : "false") : "";
}

} // namespace

ojson report_to_json(const ConvergenceReport& r) {
    ojson out;
    out["n"] = r.n;
    out["gamma"] = r.gamma;
    out["diagnostics"] = {{"unique", r.diagnostics.unique},
                          {"unichain", r.diagnostics.unichain},
                          {"aperiodic", r.diagnostics.aperiodic},
                          {"note", r.diagnostics.note}};
    out["optimal_policy"] = r.optimal ? ojson(r.optimal->choice) : ojson(nullptr);
    if (r.constants) {
        const auto& c = *r.constants;
        out["constants"] = {{"delta", real_json(c.delta)},
                            {"omega", c.omega},
                            {"N", c.exponent_N},
                            {"phi", c.phi},
                            {"tau", c.tau},
                            {"phi_stated", opt_json(c.phi_stated)},
                            {"tau_stated", opt_json(c.tau_stated)},
                            {"degenerate", c.degenerate},
                            {"converged_before_N", c.converged_before_N}};
    } else {
        out["constants"] = nullptr;
    }
    out["span_v0"] = opt_json(r.span_v0);
    out["span_vN"] = opt_json(r.span_vN);
    out["bound_satisfied"] = opt_json(r.bound_satisfied);
    out["sanity_bound_satisfied"] = opt_json(r.sanity_bound_satisfied);
    out["stated_bound_satisfied"] = opt_json(r.stated_bound_satisfied);
    out["greedy_stable_from"] = opt_json(r.greedy_stable_from);
    out["span_trace"] = vec_json(r.span_trace);
    out["per_step_ratios"] = vec_json(r.per_step_ratios);
    out["unnormalized_span_trace"] = vec_json(r.unnormalized_span_trace);
    return out;
}

std::string trace_csv(const ConvergenceReport& r) {
    std::string out = "t,span,ratio,greedy_policy_hash\n";
    for (std::size_t t = 0; t < r.span_trace.size(); ++t) {
        out += std::to_string(t) + "," + format_real(r.span_trace[t]) + ",";
        if (t > 0) out += format_real(r.per_step_ratios[t - 1]) + "," + hex64(policy_hash(r.greedy_policies[t - 1]));
        else out += ",";
        out += "\n";
    }
    return out;
}

std::size_t sweep_threads_from_env() {
    if (const char* env = std::getenv("MDP_GEOM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

SweepResult run_sweep(const GeneratorSpec& spec, std::size_t trials, std::uint64_t seed, std::size_t threads,
                      std::size_t steps) {
    check_generator_spec(spec);
    SweepResult result{spec, seed, std::vector<SweepTrial>(trials)};
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};

    auto worker = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < trials && !failed;) {
            try {
                GeneratorSpec trial_spec = spec;
                trial_spec.seed = seed + k;
                auto gen = generate_model(trial_spec);
                const Vector v0 = random_v0(spec.n, trial_spec.seed + kV0SeedOffset);
                VerifyOptions opts;
                opts.steps = steps;
                result.trials[k] = {k, trial_spec.seed, gen.repaired_rows, verify_theorem(gen.model, v0, opts)};
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::max<std::size_t>(1, std::min(threads, trials));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return result;
}

void write_sweep(const SweepResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    std::string summary =
        "trial,seed,repaired_rows,unique,unichain,aperiodic,N,delta,omega,phi,tau,span_v0,span_vN,bound_satisfied,"
        "stated_bound_satisfied\n";
    std::string traces = "trial,t,span,ratio,greedy_policy_hash\n";
    ojson trials = ojson::array();
    std::size_t passing = 0, satisfied = 0;

    for (const auto& tr : result.trials) {
        const auto& r = tr.report;
        const auto& c = r.constants;
        summary += std::to_string(tr.trial) + "," + std::to_string(tr.seed) + "," + std::to_string(tr.repaired_rows) +
                   "," + (r.diagnostics.unique ? "true" : "false") + "," + (r.diagnostics.unichain ? "true" : "false") +
                   "," + (r.diagnostics.aperiodic ? "true" : "false") + ",";
        if (c)
            summary += std::to_string(c->exponent_N) + "," + format_real(c->delta) + "," + format_real(c->omega) + "," +
                       format_real(c->phi) + "," + format_real(c->tau) + "," + format_real(*r.span_v0) + "," +
                       format_real(*r.span_vN) + ",";
        else
            summary += ",,,,,,,";
        summary += opt_bool_csv(r.bound_satisfied) + "," + opt_bool_csv(r.stated_bound_satisfied) + "\n";

        const auto per_trial = trace_csv(r);
        std::size_t pos = per_trial.find('\n') + 1;
        while (pos < per_trial.size()) {
            const auto end = per_trial.find('\n', pos);
            traces += std::to_string(tr.trial) + "," + per_trial.substr(pos, end - pos + 1);
            pos = end + 1;
        }

        if (r.diagnostics.all_pass()) ++passing;
        if (r.bound_satisfied.value_or(false)) ++satisfied;
        ojson entry = report_to_json(r);
        entry.erase("span_trace");
        entry.erase("per_step_ratios");
        entry.erase("unnormalized_span_trace");
        trials.push_back({{"trial", tr.trial}, {"seed", tr.seed}, {"repaired_rows", tr.repaired_rows}, {"report", entry}});
    }

    ojson spec = nlohmann::ordered_json::parse(emit_generator_spec(result.spec));
    spec.erase("seed");
    ojson report;
    report["provenance"] = {{"tool", "mdpgeom"},
                            {"version", kVersion},
                            {"rng", kRngName},
                            {"seed", result.seed},
                            {"trial_seed_rule", "seed + trial"},
                            {"v0_rule", "uniform [-1,1] from seed + trial + 0x9e3779b97f4a7c15"},
                            {"spec", spec}};
    report["trials"] = result.trials.size();
    report["diagnostics_passing"] = passing;
    report["bound_satisfied"] = satisfied;
    report["results"] = trials;

    write_text_file(dir / "summary.csv", summary);
    write_text_file(dir / "traces.csv", traces);
    write_text_file(dir / "report.json", report.dump(2) + "\n");
}

} // namespace mdpgeom
