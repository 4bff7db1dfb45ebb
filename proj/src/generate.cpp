#include "mdpgeom/io.hpp"

namespace mdpgeom {

GeneratedModel generate_model(const GeneratorSpec& spec) {
    check_generator_spec(spec);
    Rng rng(spec.seed);
    const auto n = spec.n;
    GeneratedModel out;
    std::vector<Sap> saps;
    saps.reserve(n * spec.saps_per_state);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t k = 0; k < spec.saps_per_state; ++k) {
            Sap sap;
            sap.state = s;
            sap.probs.resize(n);
            for (std::size_t j = 0; j < n; ++j) {
                const double w = 1.0 - rng.uniform();
                sap.probs[j] = rng.uniform() < spec.sparsity ? 0.0 : w;
            }
            sap.reward = rng.uniform(spec.reward_lo, spec.reward_hi);

            double sum = 0.0;
            for (double w : sap.probs) sum += w;
            if (sum == 0.0) {
                sap.probs[s] = 1.0;
                sum = 1.0;
                ++out.repaired_rows;
            }
            for (double& w : sap.probs) w /= sum;
            saps.push_back(std::move(sap));
        }
    }
    out.model = MdpModel(n, std::move(saps), spec.gamma);
    return out;
}

} // namespace mdpgeom
