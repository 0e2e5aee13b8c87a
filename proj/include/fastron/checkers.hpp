#pragma once

#include "fastron/kcd.hpp"
#include "fastron/model.hpp"
#include "fastron/planner.hpp"

namespace fastron {

// Ground-truth checker: FK + GJK against the workspace.
class KcdChecker final : public CollisionChecker {
public:
    KcdChecker(const ArmModel& arm, const Workspace& w, KcdStats* stats = nullptr)
        : arm_(arm), workspace_(w), stats_(stats) {}

    Label classify(const Configuration& q) override {
        return kcd_check(arm_, q, workspace_, stats_);
    }

private:
    const ArmModel& arm_;
    const Workspace& workspace_;
    KcdStats* stats_;
};

// Proxy checker: sign of the learned kernel expansion.
class FcdChecker final : public CollisionChecker {
public:
    FcdChecker(const FastronModel& model, const Dataset& d) : model_(model), dataset_(d) {}

    Label classify(const Configuration& q) override { return fastron::classify(model_, dataset_, q); }

private:
    const FastronModel& model_;
    const Dataset& dataset_;
};

}  // namespace fastron
