#include "dial/ssl.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "dial/error.hpp"

namespace dial {

double cross_entropy(std::span<const double> pred, std::size_t label) {
    if (label >= pred.size()) {
        throw InvalidInputError("cross_entropy: label " + std::to_string(label) +
                                " out of range for " + std::to_string(pred.size()) + " classes");
    }
    return -std::log(pred[label]);
}

std::vector<double> ema_update(std::span<const double> teacher, std::span<const double> student,
                               double beta) {
    if (teacher.size() != student.size()) {
        throw InvalidInputError("ema_update: weight vectors must have equal length");
    }
    if (!(beta >= 0.0 && beta < 1.0)) {
        throw InvalidInputError("ema_update: beta must be in [0, 1)");
    }
    std::vector<double> out(teacher.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = beta * teacher[i] + (1.0 - beta) * student[i];
    }
    return out;
}

double kl_consistency(std::span<const double> student, std::span<const double> teacher) {
    if (student.size() != teacher.size()) {
        throw InvalidInputError("kl_consistency: distributions must have equal length");
    }
    double kl = 0.0;
    for (std::size_t c = 0; c < student.size(); ++c) {
        const double s = student[c];
        if (s <= 0.0) continue;
        const double t = std::max(teacher[c], 1e-12);
        kl += s * std::log(s / t);
    }
    return kl;
}

double mean_cross_entropy(std::span<const double> student_rows, std::size_t class_count,
                          std::span<const std::int64_t> labels) {
    if (class_count == 0 || student_rows.size() != labels.size() * class_count) {
        throw InvalidInputError("mean_cross_entropy: rows/labels shape mismatch");
    }
    double sum = 0.0;
    std::size_t labeled = 0;
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (labels[k] < 0) continue;
        sum += cross_entropy(student_rows.subspan(k * class_count, class_count),
                             static_cast<std::size_t>(labels[k]));
        ++labeled;
    }
    return labeled == 0 ? 0.0 : sum / static_cast<double>(labeled);
}

double mean_kl(std::span<const double> student_rows, std::span<const double> teacher_rows,
               std::size_t class_count) {
    if (class_count == 0 || student_rows.size() != teacher_rows.size() ||
        student_rows.size() % class_count != 0) {
        throw InvalidInputError("mean_kl: rows shape mismatch");
    }
    const std::size_t points = student_rows.size() / class_count;
    double sum = 0.0;
    for (std::size_t k = 0; k < points; ++k) {
        sum += kl_consistency(student_rows.subspan(k * class_count, class_count),
                              teacher_rows.subspan(k * class_count, class_count));
    }
    return points == 0 ? 0.0 : sum / static_cast<double>(points);
}

double total_loss(std::span<const double> student_rows, std::span<const double> teacher_rows,
                  std::size_t class_count, std::span<const std::int64_t> labels) {
    return mean_cross_entropy(student_rows, class_count, labels) +
           mean_kl(student_rows, teacher_rows, class_count);
}

std::vector<Vec3> perturb(std::span<const Vec3> points, std::uint64_t seed,
                          const PerturbParams& params) {
    if (params.jitter_sigma < 0.0) {
        throw InvalidConfigError("perturb: jitter sigma must be >= 0");
    }
    if (params.max_rotation_rad < 0.0) {
        throw InvalidConfigError("perturb: rotation range must be >= 0");
    }
    if (!(params.scale_min <= params.scale_max)) {
        throw InvalidConfigError("perturb: empty scale range");
    }
    if (params.translation_range.x < 0.0 || params.translation_range.y < 0.0 ||
        params.translation_range.z < 0.0) {
        throw InvalidConfigError("perturb: translation range must be >= 0");
    }

    std::mt19937_64 rng(seed);
    auto uniform = [&rng](double lo, double hi) {
        if (lo == hi) return lo;  // keep zero-magnitude settings exact
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };

    const double angle = uniform(-params.max_rotation_rad, params.max_rotation_rad);
    const Mat3 rotation = Mat3::rotation_z(angle);

    std::vector<Vec3> out(points.begin(), points.end());
    for (Vec3& p : out) p = rotation * p;

    if (params.jitter_sigma > 0.0) {
        std::normal_distribution<double> jitter(0.0, params.jitter_sigma);
        for (Vec3& p : out) {
            p.x += jitter(rng);
            p.y += jitter(rng);
            p.z += jitter(rng);
        }
    }

    const Vec3 shift = {uniform(-params.translation_range.x, params.translation_range.x),
                        uniform(-params.translation_range.y, params.translation_range.y),
                        uniform(-params.translation_range.z, params.translation_range.z)};
    const double scale = uniform(params.scale_min, params.scale_max);
    for (Vec3& p : out) p = scale * (p + shift);
    return out;
}

}  // namespace dial
