#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dial/geometry.hpp"

namespace dial {

/// Supervised loss for one prediction: -ln pred[label].
double cross_entropy(std::span<const double> pred, std::size_t label);

/// Teacher update: beta * teacher + (1 - beta) * student, elementwise.
/// Requires 0 <= beta < 1 and equal lengths.
std::vector<double> ema_update(std::span<const double> teacher, std::span<const double> student,
                               double beta);

/// KL(student || teacher) = sum_c s_c ln(s_c / t_c) with 0 ln(0/.) := 0.
/// Teacher entries are clamped to >= 1e-12 before the log.
double kl_consistency(std::span<const double> student, std::span<const double> teacher);

/// Mean supervised loss over the labeled subset: labels[k] < 0 marks point k
/// unlabeled and excluded. Rows are [point][class]. Returns 0 when no point
/// is labeled.
double mean_cross_entropy(std::span<const double> student_rows, std::size_t class_count,
                          std::span<const std::int64_t> labels);

/// Mean consistency loss over all points.
double mean_kl(std::span<const double> student_rows, std::span<const double> teacher_rows,
               std::size_t class_count);

/// Supervised plus consistency loss.
double total_loss(std::span<const double> student_rows, std::span<const double> teacher_rows,
                  std::size_t class_count, std::span<const std::int64_t> labels);

/// Geometric input perturbation, applied in a fixed order: global z-axis
/// rotation, per-point Gaussian jitter, global translation, global uniform
/// scaling. All draws come from one seeded generator.
struct PerturbParams {
    double max_rotation_rad = 0.0;  // angle ~ U[-max, max]
    double jitter_sigma = 0.0;      // per point, per axis
    Vec3 translation_range;         // per axis ~ U[-range, range]
    double scale_min = 1.0;         // scale ~ U[scale_min, scale_max]
    double scale_max = 1.0;
};

std::vector<Vec3> perturb(std::span<const Vec3> points, std::uint64_t seed,
                          const PerturbParams& params);

}  // namespace dial
