#include <doctest.h>

#include "support.hpp"

using namespace teleassist;
using namespace testsupport;

namespace {

SceneDescription one_block_scene() {
  SceneDescription s;
  BlockSpec b;
  b.id = "cube";
  b.pose.p = Vec3(0.0, 0.0, 0.02);
  s.blocks.push_back(b);
  return s;
}

}  // namespace

TEST_SUITE("scene") {
  TEST_CASE("box mesh has outward normals") {
    TriMesh mesh;
    const Pose pose{Vec3(0.1, 0.2, 0.3), Quat(Eigen::AngleAxisd(0.7, Vec3(1, 1, 0).normalized()))};
    append_box(mesh, Vec3(0.1, 0.2, 0.3), pose, 3);
    REQUIRE(mesh.size() == 12);
    for (std::size_t f = 0; f < mesh.size(); ++f) {
      const Vec3 centroid = (mesh.vertex(f, 0) + mesh.vertex(f, 1) + mesh.vertex(f, 2)) / 3.0;
      CHECK(mesh.face_normals[f].dot(centroid - pose.p) > 0.0);
      CHECK(mesh.face_object[f] == 3);
    }
  }

  TEST_CASE("Moller-Trumbore on a fixed triangle") {
    const Vec3 a(0, 0, 0), b(1, 0, 0), c(0, 1, 0);
    auto t = intersect_triangle(Vec3(0.25, 0.25, 1.0), Vec3(0, 0, -1), a, b, c);
    REQUIRE(t);
    CHECK(*t == doctest::Approx(1.0));
    CHECK_FALSE(intersect_triangle(Vec3(0.75, 0.75, 1.0), Vec3(0, 0, -1), a, b, c));
    CHECK_FALSE(intersect_triangle(Vec3(0.25, 0.25, 1.0), Vec3(1, 0, 0), a, b, c));  // parallel
    auto behind = intersect_triangle(Vec3(0.25, 0.25, 1.0), Vec3(0, 0, 1), a, b, c);
    CHECK((!behind || *behind < 0.0));
  }

  TEST_CASE("BVH raycast matches brute force on bundled scenes") {
    std::mt19937_64 rng(21);
    for (const auto& name : clutter_names()) {
      const SceneModel scene = SceneModel::build(bundled_scene(name));
      int hits = 0;
      for (int i = 0; i < 1000; ++i) {
        const Vec3 o = random_in_box(rng, Vec3(-0.4, -0.3, 0.05), Vec3(0.4, 0.3, 0.4));
        Vec3 d = random_unit(rng);
        if (i % 2 == 0) d.z() = -std::abs(d.z());
        const auto hit = raycast(scene, o, d);
        const OracleHit oracle = brute_force_raycast(scene, o, d);
        REQUIRE(hit.has_value() == std::isfinite(oracle.t));
        if (!hit) continue;
        ++hits;
        CHECK(std::abs(hit->distance - oracle.t) < 1e-9);
        CHECK(std::find(oracle.faces.begin(), oracle.faces.end(), hit->face) != oracle.faces.end());
        CHECK(hit->normal.dot(d) <= 0.0);
        CHECK(hit->object == scene.mesh().face_object[hit->face]);
      }
      CHECK(hits > 300);
    }
  }

  TEST_CASE("raycast exclusion skips the excluded object") {
    const SceneModel scene = SceneModel::build(one_block_scene());
    const auto hit = raycast(scene, Vec3(0, 0, 0.5), Vec3(0, 0, -1));
    REQUIRE(hit);
    CHECK(hit->object_id == std::optional<std::string>("cube"));
    CHECK(hit->point.z() == doctest::Approx(0.04));
    const auto below = raycast(scene, Vec3(0, 0, 0.5), Vec3(0, 0, -1), std::optional<std::string_view>("cube"));
    REQUIRE(below);
    CHECK(below->object_id == std::optional<std::string>("table"));
    CHECK(below->point.z() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_FALSE(raycast(scene, Vec3(0, 0, 0.5), Vec3(0, 0, 1)));
  }

  TEST_CASE("BVH build is deterministic") {
    for (const auto& name : clutter_names()) {
      const SceneDescription desc = bundled_scene(name);
      const std::string a = SceneModel::build(desc).bvh().serialize();
      const std::string b = SceneModel::build(desc).bvh().serialize();
      CHECK(a == b);
      CHECK(!a.empty());
    }
  }

  TEST_CASE("BVH nodes bound their triangles") {
    const SceneModel scene = SceneModel::build(bundled_scene("clutter_c"));
    const auto& nodes = scene.bvh().nodes();
    const auto& order = scene.bvh().order();
    for (const BvhNode& n : nodes) {
      if (!n.is_leaf()) {
        CHECK(n.box.contains(nodes[n.first].box));
        CHECK(n.box.contains(nodes[n.first + 1].box));
        continue;
      }
      CHECK(n.count <= Bvh::kLeafSize);
      for (std::uint32_t i = n.first; i < n.first + n.count; ++i) {
        for (int c = 0; c < 3; ++c) {
          const Vec3& v = scene.mesh().vertex(order[i], c);
          CHECK((v.array() >= n.box.lo.array()).all());
          CHECK((v.array() <= n.box.hi.array()).all());
        }
      }
    }
  }

  TEST_CASE("box-triangle SAT agrees with a clipping oracle") {
    std::mt19937_64 rng(22);
    int overlapping = 0, checked = 0;
    for (int i = 0; i < 20000; ++i) {
      const Vec3 center = random_in_box(rng, Vec3::Constant(-0.5), Vec3::Constant(0.5));
      const Mat3 axes = random_quat(rng).toRotationMatrix();
      const Vec3 half = random_in_box(rng, Vec3::Constant(0.05), Vec3::Constant(0.4));
      const Vec3 a = random_in_box(rng, Vec3::Constant(-1), Vec3::Constant(1));
      const Vec3 b = a + 0.6 * random_unit(rng);
      const Vec3 c = a + 0.6 * random_unit(rng);
      const bool grown = clip_overlap(center, axes, half, a, b, c, 1e-6);
      const bool shrunk = clip_overlap(center, axes, half, a, b, c, -1e-6);
      if (grown != shrunk) continue;  // within rounding of touching
      ++checked;
      overlapping += shrunk;
      CHECK(box_triangle_overlap(center, axes, half, a, b, c) == shrunk);
    }
    CHECK(checked > 19000);
    CHECK(overlapping > 1000);
  }

  TEST_CASE("touching is not colliding; penetration and containment are") {
    const SceneModel scene = SceneModel::build(one_block_scene());
    GripperProxy probe;
    probe.boxes.push_back({Vec3::Constant(0.01), Pose{}});
    // Resting exactly on the cube top.
    CHECK_FALSE(overlaps(scene, probe, Pose{Vec3(0, 0, 0.05), Quat::Identity()}));
    CHECK(overlaps(scene, probe, Pose{Vec3(0, 0, 0.0499), Quat::Identity()}));
    // Entirely inside the cube: no triangle is touched but it is still a collision.
    CHECK(overlaps(scene, probe, Pose{Vec3(0, 0, 0.02), Quat::Identity()}));
    CHECK_FALSE(overlaps(scene, probe, Pose{Vec3(0, 0, 0.02), Quat::Identity()}, std::optional<std::string_view>("cube")));
    CHECK_FALSE(overlaps(scene, probe, Pose{Vec3(0.2, 0.2, 0.2), Quat::Identity()}));
  }

  TEST_CASE("batch overlaps equal the sequential reference for any worker count") {
    const SceneModel scene = SceneModel::build(bundled_scene("clutter_b"));
    const GripperProxy proxy = GripperProxy::panda_like();
    std::mt19937_64 rng(23);
    std::vector<Pose> poses;
    for (int i = 0; i < 3000; ++i) {
      poses.push_back(Pose{random_in_box(rng, Vec3(0.0, -0.05, -0.02), Vec3(0.3, 0.25, 0.15)), random_quat(rng)});
    }
    const OverlapMask serial = batch_overlaps_serial(scene, proxy, poses);
    for (int w : {1, 2, 8}) CHECK(batch_overlaps(scene, proxy, poses, kNoObject, w) == serial);
    for (std::size_t i = 0; i < poses.size(); i += 97) CHECK(serial[i] == overlaps(scene, proxy, poses[i]));
    const auto colliding = std::count(serial.begin(), serial.end(), 1);
    CHECK(colliding > 100);
    CHECK(colliding < 2900);
  }

  TEST_CASE("scene validation") {
    SceneDescription s = one_block_scene();
    s.blocks.push_back(s.blocks.front());
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = one_block_scene();
    s.blocks.front().id = "table";
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = one_block_scene();
    s.blocks.front().size = Vec3(0.04, 0.0, 0.04);
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    CHECK_NOTHROW(one_block_scene().validate());
  }
}
