#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "rootsim/environment.hpp"
#include "rootsim/growth_engine.hpp"
#include "rootsim/scenario_config.hpp"

namespace rootsim {

struct LogHeader {
    std::string scenario;
    double ds{0.0};
    GrowthMode mode{GrowthMode::Flexible};
    std::vector<Obstacle> obstacles;
    TargetSpec target;
    std::vector<Vec3> initial_nodes;

    bool operator==(const LogHeader&) const = default;
};

/// State after one step. `step` counts steps over the whole run, starting at 1.
struct StepRecord {
    std::size_t step{0};
    int attempt{0};
    Vec3 control{};
    double tip_turn{0.0};
    double omega_l2{0.0};
    double penetration{0.0};
    int solver_iterations{0};
    double tangent_change_h1{0.0};
    std::vector<Vec3> omega;
    std::vector<Vec3> nodes;

    bool operator==(const StepRecord&) const = default;
};

enum class EventKind { AttemptStart, Stop, Breakdown, Restart, TargetReached, Exhausted, Error };
std::string_view to_string(EventKind k);
EventKind event_kind_from_string(std::string_view s);

/// Something that happened after `step` steps.
struct EventRecord {
    std::size_t step{0};
    EventKind kind{EventKind::AttemptStart};
    int attempt{0};
    /// Curve length when the event fired.
    double length{0.0};
    /// Restart only: exploration density at the abandoned tip and the unclamped / applied lengths.
    double psi{0.0};
    double raw_length{0.0};
    double restart_length{0.0};
    std::string message;
    /// Curve at the event (stop, breakdown, terminal events).
    std::vector<Vec3> nodes;

    bool operator==(const EventRecord&) const = default;
};

struct LogSummary {
    GrowthStatus status{GrowthStatus::Growing};
    std::size_t steps{0};
    int attempts{0};
    double wall_time{0.0};

    bool operator==(const LogSummary&) const = default;
};

struct SimulationLog {
    LogHeader header;
    std::vector<StepRecord> steps;
    std::vector<EventRecord> events;
    LogSummary summary;

    bool operator==(const SimulationLog&) const = default;

    std::size_t count(EventKind kind) const;
    /// Final curve of each attempt, in attempt order.
    std::vector<std::vector<Vec3>> attempt_curves() const;
    /// Tip position after every step of one attempt, preceded by its starting tip.
    std::vector<Vec3> tip_path(int attempt) const;
};

/// Receives records as they are produced.
class LogSink {
public:
    virtual ~LogSink() = default;
    virtual void header(const LogHeader& h) = 0;
    virtual void step(const StepRecord& s) = 0;
    virtual void event(const EventRecord& e) = 0;
    virtual void summary(const LogSummary& s) = 0;
};

/// Feeds a finished log to a sink in the order the records were produced.
void replay(const SimulationLog& log, LogSink& sink);

}  // namespace rootsim
