// mdpgeom command-line front end.
//
// Exit codes: 0 ok, 1 internal error, 2 input error, 3 assumption violated
// under --strict.

#include "mdpgeom/chain.hpp"
#include "mdpgeom/classic.hpp"
#include "mdpgeom/convergence.hpp"
#include "mdpgeom/experiment.hpp"
#include "mdpgeom/geometry.hpp"
#include "mdpgeom/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <sstream>

using namespace mdpgeom;
using ojson = nlohmann::ordered_json;

namespace {

enum ExitCode { kOk = 0, kInternal = 1, kInput = 2, kAssumption = 3 };

ojson to_json(const Vector& v) {
    ojson out = ojson::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Policy parse_policy_list(const std::string& text) {
    Policy pi;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            pi.choice.push_back(v);
        } catch (const std::exception&) {
            throw InvalidPolicyError("--policy expects comma-separated SAP indices, got \"" + item + "\"");
        }
    }
    return pi;
}

MdpModel load(const std::string& path) { return parse_model(read_text_file(path)); }

int cmd_validate(const std::string& path) {
    const auto text = read_text_file(path);
    try {
        const auto model = parse_model(text);
        std::cout << "valid: n=" << model.num_states() << " saps=" << model.num_saps()
                  << " gamma=" << format_real(model.gamma()) << "\n";
        return kOk;
    } catch (const ValidationError& e) {
        for (const auto& v : e.violations()) std::cerr << path << ": " << v << "\n";
        return kInput;
    }
}

int cmd_solve(const std::string& path, const std::string& criterion, std::size_t anchor) {
    const auto model = load(path);
    const bool average = criterion == "average" || (criterion == "auto" && model.is_average_reward());
    if (average != model.is_average_reward())
        throw CriterionMismatchError("criterion " + criterion + " does not match gamma " + format_real(model.gamma()));
    if (anchor >= model.num_states()) throw DomainError("--anchor out of range");

    const auto opt = optimal_policy(model);
    ojson out;
    out["criterion"] = average ? "average" : "discounted";
    out["optimal_policy"] = opt.policy.choice;
    out["unique"] = opt.unique;
    out["margin"] = opt.margin;
    const Matrix P = policy_kernel(model, opt.policy);
    if (average && !classify_chain(P).is_unichain) {
        out["unichain"] = false;
        out["gain_vector"] = to_json(gain_vector(P, policy_rewards(model, opt.policy)));
    } else {
        const auto eval = evaluate_policy_new(model, opt.policy);
        out["C"] = eval.constants.C;
        out["v_sigma"] = eval.constants.v_sigma;
        out["new_values"] = to_json(eval.vector.values);
        if (average) {
            out["unichain"] = true;
            out["gain"] = gain_from_new(eval.constants);
            out["bias"] = to_json(bias_from_new(eval.vector, eval.constants, anchor).values);
        } else {
            out["values"] = to_json(classical_from_new(eval.vector, eval.constants, model).values);
        }
    }
    std::cout << out.dump(2) << "\n";
    return kOk;
}

int cmd_analyze(const std::string& path, const std::string& policy_text) {
    const auto model = load(path);
    const auto pi = parse_policy_list(policy_text);
    const Matrix P = policy_kernel(model, pi);
    const auto cls = classify_chain(P);

    ojson out;
    out["policy"] = pi.choice;
    out["closed_classes"] = cls.closed_classes;
    out["transient_states"] = cls.transient_states;
    out["unichain"] = cls.is_unichain;
    out["unichain_by_invertibility"] = unichain_by_invertibility(P);
    out["stationary_distribution"] = cls.is_unichain ? to_json(stationary_distribution(P)) : ojson(nullptr);
    try {
        const auto cert = primitivity_certificate(P);
        out["primitivity"] = {{"N", cert.exponent}, {"omega", cert.omega}};
    } catch (const NotPrimitiveError&) {
        out["primitivity"] = nullptr;
    }
    if (cls.is_unichain || !model.is_average_reward()) {
        const auto eval = evaluate_policy_new(model, pi);
        out["new_values"] = to_json(eval.vector.values);
        if (model.is_average_reward()) out["gain"] = gain_from_new(eval.constants);
    }
    std::cout << out.dump(2) << "\n";
    return kOk;
}

int cmd_normalize(const std::string& path, const std::string& out_path) {
    const auto model = load(path);
    const auto opt = optimal_policy(model);
    const auto normalized = normalize_mdp(model, opt.policy);
    write_text_file(out_path, emit_model(normalized));
    std::cerr << "normalized with respect to policy " << to_string(opt.policy)
              << (opt.unique ? "" : " (optimum not unique)") << "\n";
    return kOk;
}

int cmd_converge(const std::string& path, const std::string& v0_kind, std::uint64_t seed, std::size_t steps,
                 bool strict, const std::string& out_dir) {
    const auto model = load(path);
    const Vector v0 = v0_kind == "random" ? random_v0(model.num_states(), seed) : basis_v0(model.num_states());
    VerifyOptions opts;
    opts.steps = steps;
    const auto report = verify_theorem(model, v0, opts);

    ojson doc;
    doc["provenance"] = {{"tool", "mdpgeom"}, {"version", kVersion}, {"model", path}, {"v0", v0_kind}};
    if (v0_kind == "random") doc["provenance"]["seed"] = seed;
    doc["report"] = report_to_json(report);
    if (out_dir.empty()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        std::filesystem::create_directories(out_dir);
        write_text_file(std::filesystem::path(out_dir) / "report.json", doc.dump(2) + "\n");
        write_text_file(std::filesystem::path(out_dir) / "trace.csv", trace_csv(report));
    }
    if (!report.diagnostics.all_pass()) {
        std::cerr << "assumptions not met: " << report.diagnostics.note << "\n";
        if (strict) return kAssumption;
    }
    return kOk;
}

int cmd_generate(GeneratorSpec spec, const std::string& out_path) {
    const auto gen = generate_model(spec);
    write_text_file(out_path, emit_model(gen.model));
    if (gen.repaired_rows) std::cerr << "repaired " << gen.repaired_rows << " all-zero rows with a self-loop\n";
    return kOk;
}

int cmd_sweep(const std::string& spec_path, std::size_t trials, std::uint64_t seed, std::size_t steps,
              const std::string& out_dir) {
    const auto spec = parse_generator_spec(read_text_file(spec_path));
    const auto result = run_sweep(spec, trials, seed, sweep_threads_from_env(), steps);
    write_sweep(result, out_dir);
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geometric analysis of discounted and average-reward MDPs"};
    app.require_subcommand(1);

    std::string file, out, criterion = "auto", policy, v0_kind = "basis", spec_file;
    std::size_t anchor = 0, steps = 0, trials = 1;
    std::uint64_t seed = 0;
    bool strict = false;
    GeneratorSpec gen;

    auto* validate = app.add_subcommand("validate", "Check a model file");
    validate->add_option("file", file, "Model file")->required();

    auto* solve = app.add_subcommand("solve", "Optimal policy and its values");
    solve->add_option("file", file, "Model file")->required();
    solve->add_option("--criterion", criterion, "auto|discounted|average")
        ->check(CLI::IsMember({"auto", "discounted", "average"}));
    solve->add_option("--anchor", anchor, "Bias anchor state");

    auto* analyze = app.add_subcommand("analyze", "Chain structure of a policy");
    analyze->add_option("file", file, "Model file")->required();
    analyze->add_option("--policy", policy, "Comma-separated SAP indices, one per state")->required();

    auto* normalize = app.add_subcommand("normalize", "Normalize rewards with respect to the optimal policy");
    normalize->add_option("file", file, "Model file")->required();
    normalize->add_option("-o", out, "Output model file")->required();

    auto* converge = app.add_subcommand("converge", "Run VI on new values and check the span bound");
    converge->add_option("file", file, "Model file")->required();
    converge->add_option("--v0", v0_kind, "basis|random")->check(CLI::IsMember({"basis", "random"}));
    converge->add_option("--seed", seed, "Seed for --v0 random");
    converge->add_option("--steps", steps, "Trace length (at least the primitivity exponent)");
    converge->add_flag("--strict", strict, "Exit 3 when assumptions fail");
    converge->add_option("-o", out, "Output directory for report.json and trace.csv");

    auto* generate = app.add_subcommand("generate", "Generate a random model");
    generate->add_option("--n", gen.n, "States")->required();
    generate->add_option("--saps", gen.saps_per_state, "SAPs per state")->required();
    generate->add_option("--gamma", gen.gamma, "Discount in (0,1]")->required();
    generate->add_option("--sparsity", gen.sparsity, "Fraction of zeroed transition entries")->required();
    generate->add_option("--seed", gen.seed, "Seed")->required();
    generate->add_option("--reward-lo", gen.reward_lo, "Lower reward bound");
    generate->add_option("--reward-hi", gen.reward_hi, "Upper reward bound");
    generate->add_option("-o", out, "Output model file")->required();

    auto* sweep = app.add_subcommand("sweep", "Theorem check over generated models");
    sweep->add_option("--spec", spec_file, "Generator spec file")->required();
    sweep->add_option("--trials", trials, "Number of trials")->required();
    sweep->add_option("--seed", seed, "Base seed")->required();
    sweep->add_option("--steps", steps, "Trace length per trial");
    sweep->add_option("-o", out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kOk : kInput;
    }

    try {
        if (*validate) return cmd_validate(file);
        if (*solve) return cmd_solve(file, criterion, anchor);
        if (*analyze) return cmd_analyze(file, policy);
        if (*normalize) return cmd_normalize(file, out);
        if (*converge) return cmd_converge(file, v0_kind, seed, steps, strict, out);
        if (*generate) return cmd_generate(gen, out);
        if (*sweep) return cmd_sweep(spec_file, trials, seed, steps, out);
    } catch (const AssumptionViolatedError& e) {
        std::cerr << "assumption violated: " << e.what() << "\n";
        return kAssumption;
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    } catch (const MdpError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}
