#include "mdpgeom/io.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace mdpgeom {

using json = nlohmann::json;

std::string format_real(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {

std::string json_real(double x) {
    return json(x).dump();
}

const json& require_field(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SyntaxError(where + ": missing field \"" + key + "\"");
    return *it;
}

std::uint64_t require_unsigned(const json& obj, const char* key, const std::string& where) {
    const auto& v = require_field(obj, key, where);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw SyntaxError(where + ": field \"" + key + "\" must be a nonnegative integer");
    return v.get<std::uint64_t>();
}

double require_real(const json& v, const std::string& where) {
    if (!v.is_number()) throw SyntaxError(where + " must be a number");
    return v.get<double>();
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw SyntaxError(e.what());
    }
}

} // namespace

MdpModel parse_model(std::string_view text) {
    const json doc = parse_json(text);
    if (!doc.is_object()) throw SyntaxError("model document must be a JSON object");
    const auto version = require_unsigned(doc, "schema_version", "model");
    if (version != kModelSchemaVersion)
        throw UnsupportedVersionError("unsupported schema_version " + std::to_string(version) + " (expected " +
                                      std::to_string(kModelSchemaVersion) + ")");
    const auto n = require_unsigned(doc, "n", "model");
    const double gamma = require_real(require_field(doc, "gamma", "model"), "model: gamma");
    const auto& saps_json = require_field(doc, "saps", "model");
    if (!saps_json.is_array()) throw SyntaxError("model: field \"saps\" must be an array");

    std::vector<Sap> saps;
    saps.reserve(saps_json.size());
    for (std::size_t i = 0; i < saps_json.size(); ++i) {
        const std::string where = "sap " + std::to_string(i);
        const auto& s = saps_json[i];
        if (!s.is_object()) throw SyntaxError(where + " must be an object");
        Sap sap;
        sap.state = require_unsigned(s, "state", where);
        sap.reward = require_real(require_field(s, "reward", where), where + ": reward");
        const auto& probs = require_field(s, "probs", where);
        if (!probs.is_array()) throw SyntaxError(where + ": probs must be an array");
        for (std::size_t j = 0; j < probs.size(); ++j)
            sap.probs.push_back(require_real(probs[j], where + ": probs[" + std::to_string(j) + "]"));
        saps.push_back(std::move(sap));
    }
    MdpModel model(n, std::move(saps), gamma);
    require_valid(model);
    return model;
}

std::string emit_model(const MdpModel& model) {
    std::string out = "{\n  \"schema_version\": " + std::to_string(kModelSchemaVersion) +
                      ",\n  \"n\": " + std::to_string(model.num_states()) + ",\n  \"gamma\": " +
                      json_real(model.gamma()) + ",\n  \"saps\": [";
    for (std::size_t i = 0; i < model.num_saps(); ++i) {
        const auto& a = model.sap(i);
        out += i ? ",\n    " : "\n    ";
        out += "{\"state\": " + std::to_string(a.state) + ", \"reward\": " + json_real(a.reward) + ", \"probs\": [";
        for (std::size_t j = 0; j < a.probs.size(); ++j) {
            if (j) out += ", ";
            out += json_real(a.probs[j]);
        }
        out += "]}";
    }
    out += model.num_saps() ? "\n  ]\n}\n" : "]\n}\n";
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SyntaxError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw MdpError("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw MdpError("write failed for " + path.string());
}

void check_generator_spec(const GeneratorSpec& spec) {
    if (spec.n == 0) throw SyntaxError("generator: n must be positive");
    if (spec.saps_per_state == 0) throw SyntaxError("generator: saps_per_state must be positive");
    if (!(spec.gamma > 0.0 && spec.gamma <= 1.0)) throw SyntaxError("generator: gamma must lie in (0,1]");
    if (!(spec.reward_lo <= spec.reward_hi)) throw SyntaxError("generator: reward_range must satisfy lo <= hi");
    if (!(spec.sparsity >= 0.0 && spec.sparsity <= 1.0)) throw SyntaxError("generator: sparsity must lie in [0,1]");
}

GeneratorSpec parse_generator_spec(std::string_view text) {
    const json doc = parse_json(text);
    if (!doc.is_object()) throw SyntaxError("generator spec must be a JSON object");
    GeneratorSpec spec;
    spec.n = require_unsigned(doc, "n", "generator");
    spec.saps_per_state = require_unsigned(doc, "saps_per_state", "generator");
    spec.gamma = require_real(require_field(doc, "gamma", "generator"), "generator: gamma");
    const auto& range = require_field(doc, "reward_range", "generator");
    if (!range.is_array() || range.size() != 2) throw SyntaxError("generator: reward_range must be [lo, hi]");
    spec.reward_lo = require_real(range[0], "generator: reward_range[0]");
    spec.reward_hi = require_real(range[1], "generator: reward_range[1]");
    spec.sparsity = require_real(require_field(doc, "sparsity", "generator"), "generator: sparsity");
    if (doc.contains("seed")) spec.seed = require_unsigned(doc, "seed", "generator");
    check_generator_spec(spec);
    return spec;
}

std::string emit_generator_spec(const GeneratorSpec& spec) {
    nlohmann::ordered_json doc;
    doc["n"] = spec.n;
    doc["saps_per_state"] = spec.saps_per_state;
    doc["gamma"] = spec.gamma;
    doc["reward_range"] = {spec.reward_lo, spec.reward_hi};
    doc["sparsity"] = spec.sparsity;
    doc["seed"] = spec.seed;
    return doc.dump(2) + "\n";
}

} // namespace mdpgeom
