#include <doctest.h>

#include "swarmsched/encoding.hpp"

using namespace swarmsched;

TEST_CASE("random_one_hot emits one set row per column") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto bits = random_one_hot(4, 9, rng);
    CHECK(is_one_hot(bits));
  }
}

TEST_CASE("repair keeps a single already-valid bit") {
  BitMatrix bits(3, 1, 0);
  bits(0, 0) = 1;
  RealMatrix prob(3, 1, 0.5);
  repair_one_hot_columns(bits, prob);
  CHECK(bits(0, 0) == 1);
  CHECK(bits(1, 0) == 0);
  CHECK(bits(2, 0) == 0);
}

TEST_CASE("repair keeps the highest-probability set bit") {
  BitMatrix bits(3, 1, 0);
  bits(0, 0) = 1;
  bits(1, 0) = 1;
  RealMatrix prob(3, 1);
  prob(0, 0) = 0.9;
  prob(1, 0) = 0.6;
  prob(2, 0) = 0.1;
  repair_one_hot_columns(bits, prob);
  CHECK(bits(0, 0) == 1);
  CHECK(bits(1, 0) == 0);
}

TEST_CASE("repair fills an empty column at the lowest index on ties") {
  BitMatrix bits(3, 1, 0);
  RealMatrix prob(3, 1, 0.2);
  repair_one_hot_columns(bits, prob);
  CHECK(bits(0, 0) == 1);
  CHECK(bits(1, 0) == 0);
  CHECK(bits(2, 0) == 0);
}

TEST_CASE("repair prefers a set bit even when an unset bit has higher probability") {
  BitMatrix bits(3, 1, 0);
  bits(2, 0) = 1;
  bits(1, 0) = 1;
  RealMatrix prob(3, 1);
  prob(0, 0) = 0.99;  // unset, must not win
  prob(1, 0) = 0.3;
  prob(2, 0) = 0.7;
  repair_one_hot_columns(bits, prob);
  CHECK(bits(2, 0) == 1);
  CHECK(bits(0, 0) == 0);
  CHECK(bits(1, 0) == 0);
}

TEST_CASE("decode_mapping reads the set row per column") {
  const std::vector<VmSpec> vms{{10, 2, 128.0}, {11, 2, 128.0}, {12, 2, 128.0}};
  BitMatrix bits(3, 2, 0);
  bits(1, 0) = 1;
  bits(2, 1) = 1;
  const Mapping mapping = decode_mapping(bits, vms);
  CHECK(mapping.vm_ids == std::vector<int>{11, 12});
}

TEST_CASE("clamp_velocity saturates at the range edges") {
  const VelocityClamp clamp;
  CHECK(clamp_velocity(12.0, clamp) == 8.0);
  CHECK(clamp_velocity(-9.5, clamp) == -8.0);
  CHECK(clamp_velocity(3.25, clamp) == 3.25);
}
