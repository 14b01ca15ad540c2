#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "dial/error.hpp"
#include "dial/geometry.hpp"

using namespace dial;

namespace {

Pose yaw_pose(double angle, Vec3 translation = {}) {
    return {Mat3::rotation_z(angle), translation};
}

// Composition of axis rotations; orthonormal by construction.
Mat3 random_rotation(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(-3.1, 3.1);
    const Mat3 rz = Mat3::rotation_z(angle(rng));
    const double a = angle(rng);
    Mat3 rx;
    rx.at(1, 1) = std::cos(a);
    rx.at(1, 2) = -std::sin(a);
    rx.at(2, 1) = std::sin(a);
    rx.at(2, 2) = std::cos(a);
    return rz * rx;
}

}  // namespace

TEST_CASE("register_frame applies the rigid transform") {
    Frame frame;
    frame.frame_id = 0;
    frame.points = {{1, 2, 3}};

    SUBCASE("identity") {
        frame.pose = {};
        const auto out = register_frame(frame);
        CHECK(out[0] == Vec3{1, 2, 3});
    }
    SUBCASE("pure translation") {
        frame.pose = {Mat3::identity(), {10, 0, 0}};
        const auto out = register_frame(frame);
        CHECK(out[0] == Vec3{11, 2, 3});
    }
    SUBCASE("90 degree yaw maps x onto y") {
        frame.points = {{1, 0, 0}};
        frame.pose = yaw_pose(3.14159265358979323846 / 2.0);
        const auto out = register_frame(frame);
        CHECK(out[0].x == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(out[0].y == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(out[0].z == doctest::Approx(0.0));
    }
}

TEST_CASE("register_frame rejects a non-orthonormal pose") {
    Frame frame;
    frame.points = {{1, 1, 1}};
    frame.pose.rotation.at(0, 0) = 2.0;
    CHECK_THROWS_AS(register_frame(frame), InvalidInputError);
}

TEST_CASE("registration is rigid: pairwise distances preserved") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> coord(-50.0, 50.0);
    for (int trial = 0; trial < 20; ++trial) {
        Frame frame;
        frame.pose = {random_rotation(rng), {coord(rng), coord(rng), coord(rng)}};
        REQUIRE(frame.pose.is_valid());
        for (int k = 0; k < 12; ++k) frame.points.push_back({coord(rng), coord(rng), coord(rng)});
        const auto out = register_frame(frame);
        for (std::size_t a = 0; a < frame.points.size(); ++a) {
            for (std::size_t b = a + 1; b < frame.points.size(); ++b) {
                const double before = (frame.points[a] - frame.points[b]).norm();
                const double after = (out[a] - out[b]).norm();
                CHECK(std::abs(before - after) <= 1e-9 * std::max(1.0, before));
            }
        }
    }
}

TEST_CASE("disc_mask boundary and membership") {
    const DiscCandidate disc{0, {0, 0, 0}, 50.0, -1};

    SUBCASE("distance exactly R is inside") {
        const std::vector<Vec3> centers = {{30, 40, 7}};  // planar distance exactly 50
        CHECK(disc_mask(disc, centers)[0] == 1);
    }
    SUBCASE("just outside") {
        const std::vector<Vec3> centers = {{30, 40.1, 0}};
        CHECK(disc_mask(disc, centers)[0] == 0);
    }
    SUBCASE("center point") {
        const std::vector<Vec3> centers = {{0, 0, 0}};
        CHECK(disc_mask(disc, centers)[0] == 1);
    }
    SUBCASE("planar ignores height, 3d does not") {
        const std::vector<Vec3> centers = {{0, 0, 100}};
        CHECK(disc_mask(disc, centers, DistanceMode::Planar)[0] == 1);
        CHECK(disc_mask(disc, centers, DistanceMode::Euclidean3d)[0] == 0);
    }
    SUBCASE("non-finite center rejected") {
        const std::vector<Vec3> centers = {{std::nan(""), 0, 0}};
        CHECK_THROWS_AS(disc_mask(disc, centers), InvalidInputError);
    }
}

TEST_CASE("disc_mask is monotone in the radius") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coord(-20.0, 20.0);
    std::vector<Vec3> centers;
    for (int k = 0; k < 200; ++k) centers.push_back({coord(rng), coord(rng), coord(rng)});
    for (int trial = 0; trial < 10; ++trial) {
        const double r1 = 1.0 + 10.0 * std::uniform_real_distribution<double>()(rng);
        const double r2 = r1 + 5.0 * std::uniform_real_distribution<double>()(rng);
        const DiscCandidate small{0, {coord(rng), coord(rng), 0}, r1, -1};
        DiscCandidate big = small;
        big.radius = r2;
        const auto m1 = disc_mask(small, centers);
        const auto m2 = disc_mask(big, centers);
        for (std::size_t j = 0; j < centers.size(); ++j) CHECK(m1[j] <= m2[j]);
    }
}

TEST_CASE("classify_frames splits fully, weakly and unlabeled") {
    std::vector<Frame> frames(1);
    frames[0].frame_id = 3;
    frames[0].points = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {8, 8, 0}};
    frames[0].pose = {};

    SUBCASE("all points inside one disc") {
        const std::vector<DiscCandidate> discs = {{0, {0, 0, 0}, 20.0, -1}};
        const auto out = classify_frames(frames, discs);
        CHECK(out[0].status == LabelStatus::FullyLabeled);
        CHECK(out[0].labeled_point_fraction == 1.0);
    }
    SUBCASE("no labeled discs") {
        const auto out = classify_frames(frames, {});
        CHECK(out[0].status == LabelStatus::Unlabeled);
        CHECK(out[0].labeled_point_fraction == 0.0);
    }
    SUBCASE("three of four points covered") {
        const std::vector<DiscCandidate> discs = {{0, {0, 0, 0}, 2.0, -1}};
        const auto out = classify_frames(frames, discs);
        CHECK(out[0].status == LabelStatus::WeaklyLabeled);
        CHECK(out[0].labeled_point_fraction == doctest::Approx(0.75));
    }
    SUBCASE("empty frame is unlabeled with fraction zero") {
        frames[0].points.clear();
        const std::vector<DiscCandidate> discs = {{0, {0, 0, 0}, 2.0, -1}};
        const auto out = classify_frames(frames, discs);
        CHECK(out[0].status == LabelStatus::Unlabeled);
        CHECK(out[0].labeled_point_fraction == 0.0);
    }
    SUBCASE("fractions invariant under disc order") {
        const std::vector<DiscCandidate> a = {{0, {0, 0, 0}, 2.0, -1}, {1, {8, 8, 0}, 1.0, -1}};
        const std::vector<DiscCandidate> b = {{1, {8, 8, 0}, 1.0, -1}, {0, {0, 0, 0}, 2.0, -1}};
        CHECK(classify_frames(frames, a)[0].labeled_point_fraction ==
              classify_frames(frames, b)[0].labeled_point_fraction);
    }
}

TEST_CASE("candidate_centers walks the trajectory by stride") {
    std::vector<Pose> trajectory(10);
    for (int k = 0; k < 10; ++k) trajectory[static_cast<std::size_t>(k)].translation = {2.0 * k, 0, 0};

    SUBCASE("stride 1 keeps every pose") {
        const auto out = candidate_centers(trajectory, 1, 50.0);
        REQUIRE(out.size() == 10);
        CHECK(out[4].center.x == 8.0);
        CHECK(out[4].candidate_id == 4);
        CHECK(out[4].source_pose == 4);
    }
    SUBCASE("stride 3 keeps poses 0,3,6,9") {
        const auto out = candidate_centers(trajectory, 3, 50.0);
        REQUIRE(out.size() == 4);
        CHECK(out[3].source_pose == 9);
        CHECK(out[3].center.x == 18.0);
    }
    SUBCASE("empty trajectory") {
        CHECK(candidate_centers({}, 1, 50.0).empty());
    }
    SUBCASE("invalid stride") {
        CHECK_THROWS_AS(candidate_centers(trajectory, 0, 50.0), InvalidInputError);
    }
}

TEST_CASE("consecutive centers at 50 km/h and 10 Hz are 1.389 m apart") {
    const double step = 50.0 / 3.6 / 10.0;
    std::vector<Pose> trajectory(5);
    for (int k = 0; k < 5; ++k) trajectory[static_cast<std::size_t>(k)].translation = {step * k, 0, 0};
    const auto out = candidate_centers(trajectory, 1, 50.0);
    const double spacing = (out[1].center - out[0].center).norm();
    CHECK(spacing == doctest::Approx(1.3888888888888889).epsilon(1e-9));
}

TEST_CASE("global cloud keeps every point traceable") {
    std::vector<Frame> frames(3);
    std::size_t total = 0;
    for (int k = 0; k < 3; ++k) {
        frames[static_cast<std::size_t>(k)].frame_id = k;
        frames[static_cast<std::size_t>(k)].pose = yaw_pose(0.1 * k, {5.0 * k, 0, 0});
        for (int p = 0; p <= k; ++p) {
            frames[static_cast<std::size_t>(k)].points.push_back({1.0 * p, 2.0, 3.0});
            ++total;
        }
    }
    const GlobalCloud cloud = build_global_cloud(frames);
    CHECK(cloud.points.size() == total);
    std::set<std::pair<int, std::uint32_t>> seen;
    for (const GlobalPoint& gp : cloud.points) {
        CHECK(seen.emplace(gp.frame_id, gp.point_index).second);
        const Frame& frame = frames[static_cast<std::size_t>(gp.frame_id)];
        const Vec3 expect = frame.pose.apply(frame.points[gp.point_index]);
        CHECK(gp.position == expect);
    }
}
