#pragma once

#include "mdpgeom/errors.hpp"

#include <Eigen/Dense>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <string>
#include <vector>

namespace mdpgeom {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Tolerance for row sums of transition rows.
inline constexpr double kStochasticTolerance = 1e-12;

/// A state-action pair: the state it belongs to, a deterministic reward and a
/// transition row over all states.
struct Sap {
    std::size_t state = 0;
    double reward = 0.0;
    std::vector<double> probs;

    bool operator==(const Sap&) const = default;
};

/**
 * Finite MDP given as a flat list of SAPs.
 *
 * The SAP order is the file order; every tie-break in the library resolves to
 * the lowest SAP index. gamma = 1 selects the average-reward criterion.
 *
 * Construction does not reject malformed data. Use validate_model() to obtain
 * the list of violations, or require_valid() to throw on the first problem.
 */
class MdpModel {
public:
    MdpModel() = default;
    MdpModel(std::size_t n, std::vector<Sap> saps, double gamma);

    std::size_t num_states() const noexcept { return n_; }
    std::size_t num_saps() const noexcept { return saps_.size(); }
    double gamma() const noexcept { return gamma_; }
    bool is_average_reward() const noexcept { return gamma_ == 1.0; }

    const std::vector<Sap>& saps() const noexcept { return saps_; }
    const Sap& sap(std::size_t index) const { return saps_.at(index); }

    /// SAP indices attached to state s, in ascending order.
    const std::vector<std::size_t>& saps_at(std::size_t s) const { return by_state_.at(s); }

    /// Same states, transitions and gamma with rewards replaced.
    MdpModel with_rewards(const std::vector<double>& rewards) const;

    bool operator==(const MdpModel& other) const {
        return n_ == other.n_ && gamma_ == other.gamma_ && saps_ == other.saps_;
    }

private:
    std::size_t n_ = 0;
    std::vector<Sap> saps_;
    double gamma_ = 1.0;
    std::vector<std::vector<std::size_t>> by_state_;
};

/// Deterministic stationary policy: choice[s] is a SAP index with state s.
struct Policy {
    std::vector<std::size_t> choice;

    std::size_t size() const noexcept { return choice.size(); }
    bool contains(std::size_t sap_index) const;

    auto operator<=>(const Policy&) const = default;
};

enum class Criterion { DiscountedClassical, AverageBias, GeometricNew };

struct ValueVector {
    Vector values;
    Criterion criterion = Criterion::DiscountedClassical;
};

/// Returns every invariant violation of the model; empty when valid.
std::vector<std::string> validate_model(const MdpModel& model);

/// Throws ValidationError when validate_model reports anything.
void require_valid(const MdpModel& model);

/// Throws InvalidPolicyError unless pi picks one SAP of the right state per state.
void check_policy(const MdpModel& model, const Policy& pi);

/// The n x n kernel whose row s is the transition row of pi.choice[s].
Matrix policy_kernel(const MdpModel& model, const Policy& pi);

/// Reward vector R^pi.
Vector policy_rewards(const MdpModel& model, const Policy& pi);

/// max - min of the entries; throws DomainError on an empty vector.
double span(const Eigen::Ref<const Vector>& v);

/// Throws DomainError unless P is square with nonnegative rows summing to 1.
void check_stochastic(const Matrix& P, double tolerance = kStochasticTolerance);

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

/// Product of per-state SAP counts, saturating at UINT64_MAX.
std::uint64_t policy_count(const MdpModel& model);

/// Range over all deterministic stationary policies in lexicographic order of
/// SAP indices (the last state varies fastest).
class PolicyRange {
public:
    class iterator {
    public:
        using iterator_category = std::input_iterator_tag;
        using value_type = Policy;
        using difference_type = std::ptrdiff_t;
        using pointer = const Policy*;
        using reference = const Policy&;

        iterator() = default;
        reference operator*() const { return current_; }
        pointer operator->() const { return &current_; }
        iterator& operator++();
        iterator operator++(int) {
            auto copy = *this;
            ++*this;
            return copy;
        }
        bool operator==(const iterator& other) const { return done_ == other.done_ && (done_ || current_ == other.current_); }

    private:
        friend class PolicyRange;
        iterator(const MdpModel* model, bool done);

        const MdpModel* model_ = nullptr;
        std::vector<std::size_t> digits_;
        Policy current_;
        bool done_ = true;
    };

    PolicyRange(const MdpModel& model, std::uint64_t count) : model_(&model), count_(count) {}

    iterator begin() const { return iterator(model_, count_ == 0); }
    iterator end() const { return iterator(model_, true); }
    std::uint64_t size() const noexcept { return count_; }

private:
    const MdpModel* model_;
    std::uint64_t count_;
};

/// Throws EnumerationTooLargeError when policy_count exceeds cap. The model
/// must outlive the range.
PolicyRange enumerate_policies(const MdpModel& model, std::uint64_t cap = kDefaultEnumerationCap);

/// I + gamma (E - P), E the all-ones matrix; the new-value system matrix.
Matrix geometric_system_matrix(const Matrix& P, double gamma);

std::string to_string(const Policy& pi);

} // namespace mdpgeom
