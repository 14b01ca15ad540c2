#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace dial {

/// Class distributions from repeated stochastic forward passes, stored
/// row-major as [point][pass][class]. Each (point, pass) row is a probability
/// vector over `class_count` classes.
class PassStack {
public:
    PassStack() = default;
    PassStack(std::size_t point_count, std::size_t pass_count, std::size_t class_count,
              std::vector<double> data);

    std::size_t point_count() const noexcept { return point_count_; }
    std::size_t pass_count() const noexcept { return pass_count_; }
    std::size_t class_count() const noexcept { return class_count_; }

    std::span<const double> row(std::size_t point, std::size_t pass) const {
        return {data_.data() + (point * pass_count_ + pass) * class_count_, class_count_};
    }
    std::span<const double> flat() const noexcept { return data_; }

    /// Checks shape and that every row is a probability vector: entries in
    /// [0,1] and sum 1, both within `tol`. Throws InvalidInputError.
    void validate(double tol = 1e-6) const;

private:
    std::size_t point_count_ = 0;
    std::size_t pass_count_ = 0;
    std::size_t class_count_ = 0;
    std::vector<double> data_;
};

enum class Metric { MutualInformation, Entropy, Confidence, Margin };

Metric metric_from_name(std::string_view name);
const char* to_string(Metric metric) noexcept;

/// Per-point scalar uncertainty, tagged with the metric that produced it.
struct UncertaintyField {
    Metric metric = Metric::MutualInformation;
    std::vector<double> scores;
};

/// Shannon entropy in nats; 0*log(0) contributes 0.
double entropy(std::span<const double> distribution);

/// Monte-Carlo mean over passes for one point; output is on the simplex.
std::vector<double> mean_predictive(const PassStack& stack, std::size_t point);

/// Epistemic uncertainty: H(mean over passes) - mean over passes of H.
/// Nonnegative by construction (tiny negative cancellation residue clamps
/// to zero). One value per point, in nats.
std::vector<double> mutual_information(const PassStack& stack);

/// Entropy of the mean predictive distribution, in nats. In [0, ln C].
std::vector<double> softmax_entropy(const PassStack& stack);

/// 1 - max class probability of the mean predictive. In [0, 1].
std::vector<double> softmax_confidence(const PassStack& stack);

/// 1 - (p1 - p2) over the two largest mean-predictive entries, so that
/// larger means more uncertain, like the other metrics. In [0, 1].
std::vector<double> softmax_margin(const PassStack& stack);

UncertaintyField compute_uncertainty(const PassStack& stack, Metric metric);

}  // namespace dial
