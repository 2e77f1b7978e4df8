#include "rootsim/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <map>

namespace rootsim {

std::string_view to_string(EventKind k) {
    switch (k) {
        case EventKind::AttemptStart: return "attempt_start";
        case EventKind::Stop: return "stop";
        case EventKind::Breakdown: return "breakdown";
        case EventKind::Restart: return "restart";
        case EventKind::TargetReached: return "target_reached";
        case EventKind::Exhausted: return "exhausted";
        case EventKind::Error: return "error";
    }
    return "unknown";
}

EventKind event_kind_from_string(std::string_view s) {
    for (auto k : {EventKind::AttemptStart, EventKind::Stop, EventKind::Breakdown, EventKind::Restart,
                   EventKind::TargetReached, EventKind::Exhausted, EventKind::Error})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown event kind '" + std::string(s) + "'");
}

std::size_t SimulationLog::count(EventKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(events.begin(), events.end(), [kind](const EventRecord& e) { return e.kind == kind; }));
}

std::vector<std::vector<Vec3>> SimulationLog::attempt_curves() const {
    std::map<int, std::vector<Vec3>> last;
    for (const auto& e : events)
        if (e.kind == EventKind::AttemptStart && !e.nodes.empty()) last[e.attempt] = e.nodes;
    for (const auto& s : steps) last[s.attempt] = s.nodes;
    // A stop event carries the exact curve the attempt ended with.
    std::map<int, bool> closed;
    for (const auto& e : events) {
        if (e.kind == EventKind::AttemptStart || e.kind == EventKind::Restart || e.nodes.empty()) continue;
        if (closed[e.attempt]) continue;
        last[e.attempt] = e.nodes;
        closed[e.attempt] = true;
    }
    std::vector<std::vector<Vec3>> out;
    for (auto& [attempt, nodes] : last) out.push_back(std::move(nodes));
    return out;
}

std::vector<Vec3> SimulationLog::tip_path(int attempt) const {
    std::vector<Vec3> path;
    for (const auto& e : events)
        if (e.kind == EventKind::AttemptStart && e.attempt == attempt && !e.nodes.empty()) path.push_back(e.nodes.back());
    for (const auto& s : steps)
        if (s.attempt == attempt && !s.nodes.empty()) path.push_back(s.nodes.back());
    return path;
}

void replay(const SimulationLog& log, LogSink& sink) {
    sink.header(log.header);
    // Events fired after step s follow step record s.
    auto ev = log.events.begin();
    for (const auto& s : log.steps) {
        while (ev != log.events.end() && ev->step < s.step) sink.event(*ev++);
        sink.step(s);
    }
    while (ev != log.events.end()) sink.event(*ev++);
    sink.summary(log.summary);
}

namespace {

class Recorder {
public:
    Recorder(SimulationLog& log, LogSink* sink) : log_(log), sink_(sink) {}

    void header(LogHeader h) {
        log_.header = std::move(h);
        if (sink_) sink_->header(log_.header);
    }
    void step(StepRecord s) {
        log_.steps.push_back(std::move(s));
        if (sink_) sink_->step(log_.steps.back());
    }
    void event(EventRecord e) {
        log_.events.push_back(std::move(e));
        if (sink_) sink_->event(log_.events.back());
    }
    void summary(const LogSummary& s) {
        log_.summary = s;
        if (sink_) sink_->summary(s);
    }

private:
    SimulationLog& log_;
    LogSink* sink_;
};

EventRecord make_event(const GrowthState& s, EventKind kind, bool with_nodes) {
    EventRecord e;
    e.step = s.step;
    e.kind = kind;
    e.attempt = s.attempt_index;
    e.length = s.curve.length();
    if (with_nodes) e.nodes = s.curve.nodes();
    return e;
}

}  // namespace

SimulationLog run_simulation(const ScenarioConfig& config, LogSink* sink) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const CostParams cost = config.cost_params();
    const ControlParams ctrl = config.control_params();
    const RestartParams rp = config.restart_params();
    const BreakdownTol btol = config.breakdown_tol();

    SimulationLog log;
    Recorder rec(log, sink);
    GrowthState state = GrowthState::initial(config.initial_curve(), config.environment());

    rec.header({config.name, config.ds, config.mode, config.obstacles, config.target, state.curve.nodes()});
    rec.event(make_event(state, EventKind::AttemptStart, true));

    const double length_slack = 1e-9 * config.ds;
    try {
        for (;;) {
            if (target_potential(state.env, state.curve.tip()).value <= rp.target_tol) {
                state.status = GrowthStatus::TargetReached;
                rec.event(make_event(state, EventKind::TargetReached, true));
                break;
            }
            if (state.curve.length() >= rp.max_length - length_slack) {
                state.status = GrowthStatus::Exhausted;
                auto e = make_event(state, EventKind::Exhausted, true);
                e.message = "maximum length reached";
                rec.event(std::move(e));
                break;
            }
            if (config.mode == GrowthMode::Flexible && stopping_rule(state, rp, btol)) {
                rec.event(make_event(
                    state, state.status == GrowthStatus::Breakdown ? EventKind::Breakdown : EventKind::Stop, true));
                RestartInfo info;
                state = restart(state, rp, ctrl, &info);
                if (state.status == GrowthStatus::Exhausted) {
                    auto e = make_event(state, EventKind::Exhausted, false);
                    e.psi = info.psi;
                    e.message = "maximum number of attempts reached";
                    rec.event(std::move(e));
                    break;
                }
                auto e = make_event(state, EventKind::Restart, false);
                e.psi = info.psi;
                e.raw_length = info.raw_length;
                e.restart_length = info.length;
                rec.event(std::move(e));
                rec.event(make_event(state, EventKind::AttemptStart, true));
                continue;
            }

            StepDiagnostics diag;
            state = config.mode == GrowthMode::Flexible ? grow_step(state, cost, ctrl, &diag)
                                                        : rigid_step(state, ctrl, &diag);
            StepRecord s;
            s.step = state.step;
            s.attempt = state.attempt_index;
            s.control = diag.control;
            s.tip_turn = diag.tip_turn;
            s.omega_l2 = diag.omega_l2;
            s.penetration = diag.penetration;
            s.solver_iterations = diag.solver_iterations;
            s.tangent_change_h1 = diag.tangent_change_h1;
            s.omega = std::move(diag.omega.values);
            s.nodes = state.curve.nodes();
            rec.step(std::move(s));
        }
    } catch (const std::exception& err) {
        state.status = GrowthStatus::Failed;
        auto e = make_event(state, EventKind::Error, true);
        e.message = err.what();
        rec.event(std::move(e));
    }

    LogSummary summary;
    summary.status = state.status;
    summary.steps = state.step;
    summary.attempts = state.attempt_index + 1;
    summary.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.summary(summary);
    return log;
}

}  // namespace rootsim
