#pragma once

#include <vector>

namespace fastron {

// A point in configuration space: one joint angle (radians) per DOF,
// each kept within [-pi, pi).
using Configuration = std::vector<double>;

// Collision status of a configuration. +1 means in collision, -1 means free.
enum class Label : int {
    kFree = -1,
    kCollision = +1,
};

constexpr int label_sign(Label l) { return static_cast<int>(l); }

constexpr Label label_from_sign(double v) {
    // sign 0 resolves to collision: when in doubt, report the unsafe status.
    return v < 0.0 ? Label::kFree : Label::kCollision;
}

}  // namespace fastron
