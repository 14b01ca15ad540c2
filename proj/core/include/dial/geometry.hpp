#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace dial {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
    friend bool operator==(const Vec3& a, const Vec3& b) = default;

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double squared_norm() const { return dot(*this); }
    double norm() const { return std::sqrt(squared_norm()); }
};

/// Row-major 3x3 matrix. Only what rigid transforms need.
struct Mat3 {
    double m[9] = {1, 0, 0, 0, 1, 0, 0, 0, 1};

    static Mat3 identity() { return {}; }
    static Mat3 rotation_z(double angle_rad);

    double at(int row, int col) const { return m[3 * row + col]; }
    double& at(int row, int col) { return m[3 * row + col]; }

    Vec3 operator*(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }
    Mat3 operator*(const Mat3& o) const;
    Mat3 transposed() const;
    double determinant() const;

    friend bool operator==(const Mat3& a, const Mat3& b) {
        for (int i = 0; i < 9; ++i)
            if (a.m[i] != b.m[i]) return false;
        return true;
    }
};

/// Rigid-body transform from sensor into global coordinates.
struct Pose {
    Mat3 rotation;
    Vec3 translation;

    /// True when rotation is orthonormal with determinant +1 within `tol`.
    bool is_valid(double tol = 1e-6) const;

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
};

/// One LiDAR scan: points in sensor coordinates plus its pose.
struct Frame {
    int frame_id = 0;
    std::vector<Vec3> points;
    Pose pose;
};

/// A point of the concatenated sequence, traceable to its source scan.
struct GlobalPoint {
    Vec3 position;
    int frame_id = 0;
    std::uint32_t point_index = 0;
};

struct GlobalCloud {
    std::vector<GlobalPoint> points;
};

/// Candidate circular query region in global coordinates.
struct DiscCandidate {
    std::uint32_t candidate_id = 0;
    Vec3 center;
    double radius = 0.0;
    /// Index of the trajectory pose this candidate was spawned from
    /// (provenance for point-count baselines); -1 when synthetic.
    int source_pose = -1;
};

enum class LabelStatus { FullyLabeled, WeaklyLabeled, Unlabeled };

const char* to_string(LabelStatus status) noexcept;

struct FrameLabelStatus {
    int frame_id = 0;
    LabelStatus status = LabelStatus::Unlabeled;
    double labeled_point_fraction = 0.0;
};

/// Disc membership test mode. Planar ignores z and treats the disc as a
/// region of the global x-y plane; Euclidean3d uses the full distance.
enum class DistanceMode { Planar, Euclidean3d };

/// True iff `point` lies in the disc (boundary inclusive).
bool in_disc(const Vec3& point, const DiscCandidate& disc,
             DistanceMode mode = DistanceMode::Planar);

/// Transforms a frame's points into global coordinates.
/// Throws InvalidInputError when the pose rotation is not orthonormal.
std::vector<Vec3> register_frame(const Frame& frame);

/// Builds the concatenated global cloud; point k of frame f maps to exactly
/// one entry carrying (f, k).
GlobalCloud build_global_cloud(std::span<const Frame> frames);

/// Binary mask over `voxel_centers`: 1 iff the center lies in the disc.
std::vector<std::uint8_t> disc_mask(const DiscCandidate& candidate,
                                    std::span<const Vec3> voxel_centers,
                                    DistanceMode mode = DistanceMode::Planar);

/// Per-frame label coverage against the union of labeled discs. A frame is
/// FullyLabeled iff every registered point falls inside the union, Unlabeled
/// iff none does (empty frames are Unlabeled with fraction 0).
std::vector<FrameLabelStatus> classify_frames(std::span<const Frame> frames,
                                              std::span<const DiscCandidate> labeled_discs,
                                              DistanceMode mode = DistanceMode::Planar);

/// One candidate per stride-th trajectory pose; center = pose translation.
std::vector<DiscCandidate> candidate_centers(std::span<const Pose> trajectory,
                                             int stride, double radius);

}  // namespace dial
