#include "dial/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dial/error.hpp"

namespace dial {

namespace {

constexpr double kProbTol = 1e-6;

void check_probability(double p, std::size_t point) {
    if (!(p >= -kProbTol && p <= 1.0 + kProbTol)) {
        throw InvalidInputError("probability outside [0,1] at point " + std::to_string(point));
    }
}

}  // namespace

PassStack::PassStack(std::size_t point_count, std::size_t pass_count, std::size_t class_count,
                     std::vector<double> data)
    : point_count_(point_count),
      pass_count_(pass_count),
      class_count_(class_count),
      data_(std::move(data)) {
    if (data_.size() != point_count_ * pass_count_ * class_count_) {
        throw InvalidInputError("PassStack: data size does not match dimensions");
    }
}

void PassStack::validate(double tol) const {
    if (point_count_ == 0 || pass_count_ < 1 || class_count_ < 2) {
        throw InvalidInputError("PassStack: need point_count >= 1, pass_count >= 1, classes >= 2");
    }
    for (std::size_t p = 0; p < point_count_; ++p) {
        for (std::size_t n = 0; n < pass_count_; ++n) {
            double sum = 0.0;
            for (double v : row(p, n)) {
                if (!(v >= -tol && v <= 1.0 + tol)) {
                    throw InvalidInputError("PassStack: entry outside [0,1] at point " +
                                            std::to_string(p));
                }
                sum += v;
            }
            if (std::abs(sum - 1.0) > tol) {
                throw InvalidInputError("PassStack: row does not sum to 1 at point " +
                                        std::to_string(p));
            }
        }
    }
}

Metric metric_from_name(std::string_view name) {
    if (name == "mi") return Metric::MutualInformation;
    if (name == "ent") return Metric::Entropy;
    if (name == "conf") return Metric::Confidence;
    if (name == "mar") return Metric::Margin;
    throw InvalidConfigError("unknown uncertainty metric: " + std::string(name));
}

const char* to_string(Metric metric) noexcept {
    switch (metric) {
        case Metric::MutualInformation: return "mi";
        case Metric::Entropy: return "ent";
        case Metric::Confidence: return "conf";
        case Metric::Margin: return "mar";
    }
    return "mi";
}

double entropy(std::span<const double> distribution) {
    double h = 0.0;
    for (double p : distribution) {
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

std::vector<double> mean_predictive(const PassStack& stack, std::size_t point) {
    if (stack.pass_count() == 0 || stack.class_count() == 0) {
        throw InvalidInputError("mean_predictive: empty pass stack");
    }
    std::vector<double> mean(stack.class_count(), 0.0);
    for (std::size_t n = 0; n < stack.pass_count(); ++n) {
        const auto r = stack.row(point, n);
        for (std::size_t c = 0; c < mean.size(); ++c) mean[c] += r[c];
    }
    const double inv = 1.0 / static_cast<double>(stack.pass_count());
    for (double& v : mean) v *= inv;
    return mean;
}

std::vector<double> mutual_information(const PassStack& stack) {
    if (stack.point_count() == 0 || stack.pass_count() == 0) {
        throw InvalidInputError("mutual_information: empty pass stack");
    }
    std::vector<double> out(stack.point_count());
    for (std::size_t p = 0; p < stack.point_count(); ++p) {
        double pass_entropy_sum = 0.0;
        for (std::size_t n = 0; n < stack.pass_count(); ++n) {
            for (double v : stack.row(p, n)) check_probability(v, p);
            pass_entropy_sum += entropy(stack.row(p, n));
        }
        const std::vector<double> mean = mean_predictive(stack, p);
        double mi = entropy(mean) - pass_entropy_sum / static_cast<double>(stack.pass_count());
        if (mi < 0.0) mi = 0.0;  // cancellation residue only
        out[p] = mi;
    }
    return out;
}

std::vector<double> softmax_entropy(const PassStack& stack) {
    if (stack.point_count() == 0 || stack.pass_count() == 0) {
        throw InvalidInputError("softmax_entropy: empty pass stack");
    }
    std::vector<double> out(stack.point_count());
    for (std::size_t p = 0; p < stack.point_count(); ++p) {
        const std::vector<double> mean = mean_predictive(stack, p);
        for (double v : mean) check_probability(v, p);
        out[p] = entropy(mean);
    }
    return out;
}

std::vector<double> softmax_confidence(const PassStack& stack) {
    if (stack.point_count() == 0 || stack.pass_count() == 0) {
        throw InvalidInputError("softmax_confidence: empty pass stack");
    }
    std::vector<double> out(stack.point_count());
    for (std::size_t p = 0; p < stack.point_count(); ++p) {
        const std::vector<double> mean = mean_predictive(stack, p);
        for (double v : mean) check_probability(v, p);
        out[p] = 1.0 - *std::max_element(mean.begin(), mean.end());
    }
    return out;
}

std::vector<double> softmax_margin(const PassStack& stack) {
    if (stack.point_count() == 0 || stack.pass_count() == 0) {
        throw InvalidInputError("softmax_margin: empty pass stack");
    }
    std::vector<double> out(stack.point_count());
    for (std::size_t p = 0; p < stack.point_count(); ++p) {
        std::vector<double> mean = mean_predictive(stack, p);
        for (double v : mean) check_probability(v, p);
        std::partial_sort(mean.begin(), mean.begin() + 2, mean.end(), std::greater<>());
        out[p] = 1.0 - (mean[0] - mean[1]);
    }
    return out;
}

UncertaintyField compute_uncertainty(const PassStack& stack, Metric metric) {
    UncertaintyField field;
    field.metric = metric;
    switch (metric) {
        case Metric::MutualInformation: field.scores = mutual_information(stack); break;
        case Metric::Entropy: field.scores = softmax_entropy(stack); break;
        case Metric::Confidence: field.scores = softmax_confidence(stack); break;
        case Metric::Margin: field.scores = softmax_margin(stack); break;
    }
    return field;
}

}  // namespace dial
