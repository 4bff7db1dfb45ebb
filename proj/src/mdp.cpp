#include "mdpgeom/mdp.hpp"
#include "mdpgeom/linalg.hpp"

#include <cmath>
#include <limits>
#include <charconv>

namespace mdpgeom {

namespace {

std::string fmt_real(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

} // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : MdpError([&] {
          std::string msg = "model validation failed";
          for (const auto& v : violations) msg += "\n  " + v;
          return msg;
      }()),
      violations_(std::move(violations)) {}

MdpModel::MdpModel(std::size_t n, std::vector<Sap> saps, double gamma)
    : n_(n), saps_(std::move(saps)), gamma_(gamma), by_state_(n) {
    for (std::size_t i = 0; i < saps_.size(); ++i)
        if (saps_[i].state < n_) by_state_[saps_[i].state].push_back(i);
}

MdpModel MdpModel::with_rewards(const std::vector<double>& rewards) const {
    if (rewards.size() != saps_.size())
        throw DomainError("with_rewards: expected " + std::to_string(saps_.size()) + " rewards");
    auto saps = saps_;
    for (std::size_t i = 0; i < saps.size(); ++i) saps[i].reward = rewards[i];
    return MdpModel(n_, std::move(saps), gamma_);
}

bool Policy::contains(std::size_t sap_index) const {
    for (auto c : choice)
        if (c == sap_index) return true;
    return false;
}

std::vector<std::string> validate_model(const MdpModel& model) {
    std::vector<std::string> out;
    const auto n = model.num_states();
    if (n == 0) out.emplace_back("model has no states");
    const double g = model.gamma();
    if (!(g > 0.0 && g <= 1.0)) out.push_back("gamma " + fmt_real(g) + " not in (0,1]");

    for (std::size_t i = 0; i < model.num_saps(); ++i) {
        const auto& a = model.sap(i);
        const std::string tag = "sap " + std::to_string(i) + ": ";
        if (a.state >= n)
            out.push_back(tag + "state " + std::to_string(a.state) + " out of range [0, " + std::to_string(n) + ")");
        if (!std::isfinite(a.reward)) out.push_back(tag + "reward is not finite");
        if (a.probs.size() != n) {
            out.push_back(tag + "transition row has " + std::to_string(a.probs.size()) + " entries, expected " +
                          std::to_string(n));
            continue;
        }
        double sum = 0.0;
        bool entries_ok = true;
        for (std::size_t j = 0; j < n; ++j) {
            const double p = a.probs[j];
            if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
                out.push_back(tag + "probability " + fmt_real(p) + " at column " + std::to_string(j) +
                              " not in [0,1]");
                entries_ok = false;
            }
            sum += p;
        }
        if (entries_ok && std::abs(sum - 1.0) > kStochasticTolerance)
            out.push_back(tag + "row sum " + fmt_real(sum) + " != 1");
    }

    for (std::size_t s = 0; s < n; ++s)
        if (model.saps_at(s).empty()) out.push_back("state " + std::to_string(s) + " without SAP");
    return out;
}

void require_valid(const MdpModel& model) {
    auto violations = validate_model(model);
    if (!violations.empty()) throw ValidationError(std::move(violations));
}

void check_policy(const MdpModel& model, const Policy& pi) {
    if (pi.size() != model.num_states())
        throw InvalidPolicyError("policy has " + std::to_string(pi.size()) + " entries, model has " +
                                 std::to_string(model.num_states()) + " states");
    for (std::size_t s = 0; s < pi.size(); ++s) {
        const auto idx = pi.choice[s];
        if (idx >= model.num_saps())
            throw InvalidPolicyError("policy entry " + std::to_string(s) + ": SAP index " + std::to_string(idx) +
                                     " out of range");
        if (model.sap(idx).state != s)
            throw InvalidPolicyError("policy entry " + std::to_string(s) + ": SAP " + std::to_string(idx) +
                                     " belongs to state " + std::to_string(model.sap(idx).state));
    }
}

Matrix policy_kernel(const MdpModel& model, const Policy& pi) {
    check_policy(model, pi);
    const auto n = model.num_states();
    Matrix P(n, n);
    for (std::size_t s = 0; s < n; ++s) {
        const auto& row = model.sap(pi.choice[s]).probs;
        for (std::size_t j = 0; j < n; ++j) P(s, j) = row[j];
    }
    return P;
}

Vector policy_rewards(const MdpModel& model, const Policy& pi) {
    check_policy(model, pi);
    Vector R(model.num_states());
    for (std::size_t s = 0; s < pi.size(); ++s) R(s) = model.sap(pi.choice[s]).reward;
    return R;
}

double span(const Eigen::Ref<const Vector>& v) {
    if (v.size() == 0) throw DomainError("span of an empty vector");
    return v.maxCoeff() - v.minCoeff();
}

void check_stochastic(const Matrix& P, double tolerance) {
    if (P.rows() != P.cols() || P.rows() == 0) throw DomainError("kernel must be a nonempty square matrix");
    for (Eigen::Index i = 0; i < P.rows(); ++i) {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < P.cols(); ++j) {
            if (!(P(i, j) >= 0.0)) throw DomainError("kernel entry (" + std::to_string(i) + "," + std::to_string(j) + ") is negative");
            sum += P(i, j);
        }
        if (std::abs(sum - 1.0) > tolerance)
            throw DomainError("kernel row " + std::to_string(i) + " sums to " + fmt_real(sum));
    }
}

std::uint64_t policy_count(const MdpModel& model) {
    std::uint64_t count = 1;
    for (std::size_t s = 0; s < model.num_states(); ++s) {
        const std::uint64_t k = model.saps_at(s).size();
        if (k == 0) return 0;
        if (count > std::numeric_limits<std::uint64_t>::max() / k) return std::numeric_limits<std::uint64_t>::max();
        count *= k;
    }
    return count;
}

PolicyRange::iterator::iterator(const MdpModel* model, bool done) : model_(model), done_(done) {
    if (done_) return;
    const auto n = model_->num_states();
    digits_.assign(n, 0);
    current_.choice.resize(n);
    for (std::size_t s = 0; s < n; ++s) current_.choice[s] = model_->saps_at(s).front();
}

PolicyRange::iterator& PolicyRange::iterator::operator++() {
    if (done_) return *this;
    for (std::size_t s = digits_.size(); s-- > 0;) {
        const auto& options = model_->saps_at(s);
        if (++digits_[s] < options.size()) {
            current_.choice[s] = options[digits_[s]];
            return *this;
        }
        digits_[s] = 0;
        current_.choice[s] = options.front();
    }
    done_ = true;
    return *this;
}

PolicyRange enumerate_policies(const MdpModel& model, std::uint64_t cap) {
    const auto count = policy_count(model);
    if (count > cap)
        throw EnumerationTooLargeError("model has " + std::to_string(count) + " policies, cap is " + std::to_string(cap));
    return PolicyRange(model, count);
}

Matrix geometric_system_matrix(const Matrix& P, double gamma) {
    const auto n = P.rows();
    return Matrix::Identity(n, n) + gamma * (Matrix::Ones(n, n) - P);
}

std::string to_string(const Policy& pi) {
    std::string out;
    for (std::size_t s = 0; s < pi.size(); ++s) {
        if (s) out += ',';
        out += std::to_string(pi.choice[s]);
    }
    return out;
}

PivotedLu::PivotedLu(const Matrix& A, double ratio) : lu_(A) {
    if (A.rows() == 0 || A.rows() != A.cols()) throw DomainError("PivotedLu: matrix must be square and nonempty");
    const Vector pivots = lu_.matrixLU().diagonal().cwiseAbs();
    min_pivot_ = pivots.minCoeff();
    max_pivot_ = pivots.maxCoeff();
    singular_ = !(max_pivot_ > 0.0) || min_pivot_ <= ratio * max_pivot_;
}

double residual_inf(const Matrix& A, const Vector& x, const Vector& b) {
    return (A * x - b).cwiseAbs().maxCoeff();
}

} // namespace mdpgeom
