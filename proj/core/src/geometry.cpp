#include "dial/geometry.hpp"

#include <string>

#include "dial/error.hpp"

namespace dial {

Mat3 Mat3::rotation_z(double angle_rad) {
    const double c = std::cos(angle_rad);
    const double s = std::sin(angle_rad);
    Mat3 r;
    r.m[0] = c;
    r.m[1] = -s;
    r.m[3] = s;
    r.m[4] = c;
    return r;
}

Mat3 Mat3::operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k) acc += at(i, k) * o.at(k, j);
            r.at(i, j) = acc;
        }
    return r;
}

Mat3 Mat3::transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.at(i, j) = at(j, i);
    return r;
}

double Mat3::determinant() const {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
}

bool Pose::is_valid(double tol) const {
    const Mat3 gram = rotation * rotation.transposed();
    const Mat3 eye = Mat3::identity();
    for (int i = 0; i < 9; ++i) {
        if (!std::isfinite(rotation.m[i])) return false;
        if (std::abs(gram.m[i] - eye.m[i]) > tol) return false;
    }
    if (std::abs(rotation.determinant() - 1.0) > tol) return false;
    return std::isfinite(translation.x) && std::isfinite(translation.y) &&
           std::isfinite(translation.z);
}

const char* to_string(LabelStatus status) noexcept {
    switch (status) {
        case LabelStatus::FullyLabeled: return "fully-labeled";
        case LabelStatus::WeaklyLabeled: return "weakly-labeled";
        case LabelStatus::Unlabeled: return "unlabeled";
    }
    return "unlabeled";
}

bool in_disc(const Vec3& point, const DiscCandidate& disc, DistanceMode mode) {
    const double dx = point.x - disc.center.x;
    const double dy = point.y - disc.center.y;
    double d2 = dx * dx + dy * dy;
    if (mode == DistanceMode::Euclidean3d) {
        const double dz = point.z - disc.center.z;
        d2 += dz * dz;
    }
    // Squared comparison keeps the boundary case exact.
    return d2 <= disc.radius * disc.radius;
}

std::vector<Vec3> register_frame(const Frame& frame) {
    if (!frame.pose.is_valid()) {
        throw InvalidInputError("frame " + std::to_string(frame.frame_id) +
                                ": pose rotation is not orthonormal");
    }
    std::vector<Vec3> out;
    out.reserve(frame.points.size());
    for (const Vec3& p : frame.points) out.push_back(frame.pose.apply(p));
    return out;
}

GlobalCloud build_global_cloud(std::span<const Frame> frames) {
    GlobalCloud cloud;
    std::size_t total = 0;
    for (const Frame& f : frames) total += f.points.size();
    cloud.points.reserve(total);
    for (const Frame& f : frames) {
        const std::vector<Vec3> registered = register_frame(f);
        for (std::uint32_t k = 0; k < registered.size(); ++k) {
            cloud.points.push_back({registered[k], f.frame_id, k});
        }
    }
    return cloud;
}

std::vector<std::uint8_t> disc_mask(const DiscCandidate& candidate,
                                    std::span<const Vec3> voxel_centers, DistanceMode mode) {
    for (const Vec3& c : voxel_centers) {
        if (!std::isfinite(c.x) || !std::isfinite(c.y) || !std::isfinite(c.z)) {
            throw InvalidInputError("disc_mask: non-finite voxel center");
        }
    }
    std::vector<std::uint8_t> mask(voxel_centers.size(), 0);
    for (std::size_t j = 0; j < voxel_centers.size(); ++j) {
        mask[j] = in_disc(voxel_centers[j], candidate, mode) ? 1 : 0;
    }
    return mask;
}

std::vector<FrameLabelStatus> classify_frames(std::span<const Frame> frames,
                                              std::span<const DiscCandidate> labeled_discs,
                                              DistanceMode mode) {
    std::vector<FrameLabelStatus> out;
    out.reserve(frames.size());
    for (const Frame& frame : frames) {
        FrameLabelStatus status;
        status.frame_id = frame.frame_id;
        if (frame.points.empty()) {
            out.push_back(status);
            continue;
        }
        const std::vector<Vec3> registered = register_frame(frame);
        std::size_t labeled = 0;
        for (const Vec3& p : registered) {
            for (const DiscCandidate& disc : labeled_discs) {
                if (in_disc(p, disc, mode)) {
                    ++labeled;
                    break;
                }
            }
        }
        status.labeled_point_fraction =
            static_cast<double>(labeled) / static_cast<double>(registered.size());
        if (labeled == registered.size()) {
            status.status = LabelStatus::FullyLabeled;
        } else if (labeled > 0) {
            status.status = LabelStatus::WeaklyLabeled;
        }
        out.push_back(status);
    }
    return out;
}

std::vector<DiscCandidate> candidate_centers(std::span<const Pose> trajectory, int stride,
                                             double radius) {
    if (stride < 1) throw InvalidInputError("candidate_centers: stride must be >= 1");
    if (radius <= 0.0) throw InvalidInputError("candidate_centers: radius must be > 0");
    std::vector<DiscCandidate> out;
    std::uint32_t id = 0;
    for (std::size_t i = 0; i < trajectory.size(); i += static_cast<std::size_t>(stride)) {
        out.push_back({id++, trajectory[i].translation, radius, static_cast<int>(i)});
    }
    return out;
}

}  // namespace dial
