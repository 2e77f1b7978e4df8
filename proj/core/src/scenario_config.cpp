#include "rootsim/scenario_config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace rootsim {

std::string_view to_string(GrowthMode m) { return m == GrowthMode::Flexible ? "flexible" : "rigid"; }

GrowthMode growth_mode_from_string(std::string_view s) {
    if (s == "flexible") return GrowthMode::Flexible;
    if (s == "rigid") return GrowthMode::Rigid;
    throw ConfigError("mode", "expected 'flexible' or 'rigid', got '" + std::string(s) + "'");
}

namespace {

std::string join(const std::string& prefix, const std::string& key) { return prefix.empty() ? key : prefix + "." + key; }

void check_keys(const YAML::Node& node, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!node.IsMap()) throw ConfigError(where, "expected a mapping");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!ok.count(key)) throw ConfigError(join(where, key), "unknown key");
    }
}

template <typename T>
T read_scalar(const YAML::Node& node, const std::string& field) {
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError(field, "could not read value '" + (node.IsScalar() ? node.Scalar() : std::string("<non-scalar>")) + "'");
    }
}

template <typename T>
void read_opt(const YAML::Node& parent, const char* key, const std::string& where, T& out) {
    if (const auto n = parent[key]) out = read_scalar<T>(n, join(where, key));
}

template <typename T>
void read_opt(const YAML::Node& parent, const char* key, const std::string& where, std::optional<T>& out) {
    if (const auto n = parent[key]) out = read_scalar<T>(n, join(where, key));
}

Vec3 read_vec(const YAML::Node& node, const std::string& field) {
    if (!node.IsSequence() || (node.size() != 2 && node.size() != 3))
        throw ConfigError(field, "expected [x, y] or [x, y, z]");
    Vec3 v{read_scalar<double>(node[0], field), read_scalar<double>(node[1], field), 0.0};
    if (node.size() == 3) v.z = read_scalar<double>(node[2], field);
    return v;
}

YAML::Node require(const YAML::Node& parent, const char* key, const std::string& where) {
    const auto n = parent[key];
    if (!n) throw ConfigError(join(where, key), "missing required field");
    return n;
}

void emit_vec(YAML::Emitter& out, const Vec3& v) {
    out << YAML::Flow << YAML::BeginSeq << v.x << v.y << v.z << YAML::EndSeq;
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw ConfigError("", std::string("malformed document: ") + e.what());
    }
    if (!root.IsMap()) throw ConfigError("", "top level must be a mapping");
    check_keys(root, "",
               {"name", "mode", "ds", "kappa0", "alpha", "reg_eps", "smooth_eps", "seed", "exploration_rate",
                "obstacles", "initial_curve", "hardness", "target", "restart", "limits", "breakdown", "solver"});

    ScenarioConfig c;
    read_opt(root, "name", "", c.name);
    if (const auto m = root["mode"]) c.mode = growth_mode_from_string(read_scalar<std::string>(m, "mode"));
    c.ds = read_scalar<double>(require(root, "ds", ""), "ds");
    read_opt(root, "kappa0", "", c.kappa0);
    read_opt(root, "alpha", "", c.alpha);
    read_opt(root, "reg_eps", "", c.reg_eps);
    read_opt(root, "smooth_eps", "", c.smooth_eps);
    read_opt(root, "seed", "", c.seed);
    read_opt(root, "exploration_rate", "", c.exploration_rate);

    if (const auto obs = root["obstacles"]) {
        if (!obs.IsSequence()) throw ConfigError("obstacles", "expected a list");
        for (std::size_t i = 0; i < obs.size(); ++i) {
            const std::string where = "obstacles[" + std::to_string(i) + "]";
            check_keys(obs[i], where, {"shape", "center", "radius"});
            Obstacle o;
            if (const auto s = obs[i]["shape"]) {
                const auto name = read_scalar<std::string>(s, where + ".shape");
                if (name == "disc") o.shape = ObstacleShape::Disc;
                else if (name == "sphere") o.shape = ObstacleShape::Sphere;
                else throw ConfigError(where + ".shape", "expected 'disc' or 'sphere'");
            }
            o.center = read_vec(require(obs[i], "center", where), where + ".center");
            o.radius = read_scalar<double>(require(obs[i], "radius", where), where + ".radius");
            c.obstacles.push_back(o);
        }
    }

    const auto init = require(root, "initial_curve", "");
    check_keys(init, "initial_curve", {"line", "nodes"});
    if (const auto line = init["line"]) {
        check_keys(line, "initial_curve.line", {"from", "to"});
        c.initial_line = LineSpec{read_vec(require(line, "from", "initial_curve.line"), "initial_curve.line.from"),
                                  read_vec(require(line, "to", "initial_curve.line"), "initial_curve.line.to")};
    }
    if (const auto nodes = init["nodes"]) {
        if (!nodes.IsSequence()) throw ConfigError("initial_curve.nodes", "expected a list of points");
        for (std::size_t i = 0; i < nodes.size(); ++i)
            c.initial_nodes.push_back(read_vec(nodes[i], "initial_curve.nodes[" + std::to_string(i) + "]"));
    }

    if (const auto h = root["hardness"]) {
        check_keys(h, "hardness", {"constant", "bumps"});
        read_opt(h, "constant", "hardness", c.hardness.constant);
        if (const auto bumps = h["bumps"]) {
            if (!bumps.IsSequence()) throw ConfigError("hardness.bumps", "expected a list");
            for (std::size_t i = 0; i < bumps.size(); ++i) {
                const std::string where = "hardness.bumps[" + std::to_string(i) + "]";
                check_keys(bumps[i], where, {"center", "radius", "value"});
                HardnessBump b;
                b.center = read_vec(require(bumps[i], "center", where), where + ".center");
                b.radius = read_scalar<double>(require(bumps[i], "radius", where), where + ".radius");
                b.value = read_scalar<double>(require(bumps[i], "value", where), where + ".value");
                c.hardness.bumps.push_back(b);
            }
        }
    }

    if (const auto t = root["target"]) {
        check_keys(t, "target", {"kind", "normal", "offset", "point", "tol"});
        const auto kind = t["kind"] ? read_scalar<std::string>(t["kind"], "target.kind") : std::string("plane");
        if (kind == "plane") {
            c.target.kind = TargetKind::Plane;
            if (const auto n = t["normal"]) c.target.normal = read_vec(n, "target.normal");
            read_opt(t, "offset", "target", c.target.offset);
        } else if (kind == "point") {
            c.target.kind = TargetKind::Point;
            c.target.point = read_vec(require(t, "point", "target"), "target.point");
        } else {
            throw ConfigError("target.kind", "expected 'plane' or 'point'");
        }
        read_opt(t, "tol", "target", c.target_tol);
    }

    if (const auto r = root["restart"]) {
        check_keys(r, "restart", {"strategy", "c", "rho", "h0", "turn_angle"});
        if (const auto s = r["strategy"]) {
            try {
                c.strategy = restart_strategy_from_string(read_scalar<std::string>(s, "restart.strategy"));
            } catch (const std::invalid_argument& e) {
                throw ConfigError("restart.strategy", e.what());
            }
        }
        read_opt(r, "c", "restart", c.c);
        read_opt(r, "rho", "restart", c.rho);
        read_opt(r, "h0", "restart", c.h0);
        read_opt(r, "turn_angle", "restart", c.turn_angle);
    }

    if (const auto l = root["limits"]) {
        check_keys(l, "limits", {"max_attempts", "max_length"});
        read_opt(l, "max_attempts", "limits", c.max_attempts);
        read_opt(l, "max_length", "limits", c.max_length);
    }

    if (const auto b = root["breakdown"]) {
        check_keys(b, "breakdown", {"contact_tol", "angle_tol", "curvature_tol"});
        read_opt(b, "contact_tol", "breakdown", c.contact_tol);
        read_opt(b, "angle_tol", "breakdown", c.angle_tol);
        read_opt(b, "curvature_tol", "breakdown", c.curvature_tol);
    }

    if (const auto s = root["solver"]) {
        check_keys(s, "solver", {"penalty_schedule", "grad_tol", "max_iters"});
        if (const auto ps = s["penalty_schedule"]) {
            if (!ps.IsSequence()) throw ConfigError("solver.penalty_schedule", "expected a list");
            c.penalty_schedule.clear();
            for (const auto& v : ps) c.penalty_schedule.push_back(read_scalar<double>(v, "solver.penalty_schedule"));
        }
        read_opt(s, "grad_tol", "solver", c.grad_tol);
        read_opt(s, "max_iters", "solver", c.max_iters);
    }

    c.validate();
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ScenarioConfig& c) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << c.name;
    out << YAML::Key << "mode" << YAML::Value << std::string(to_string(c.mode));
    out << YAML::Key << "ds" << YAML::Value << c.ds;
    out << YAML::Key << "kappa0" << YAML::Value << c.kappa0;
    out << YAML::Key << "alpha" << YAML::Value << c.alpha;
    out << YAML::Key << "reg_eps" << YAML::Value << c.reg_eps;
    out << YAML::Key << "smooth_eps" << YAML::Value << c.smooth_eps;
    out << YAML::Key << "seed" << YAML::Value << c.seed;
    out << YAML::Key << "exploration_rate" << YAML::Value << c.exploration_rate;

    out << YAML::Key << "obstacles" << YAML::Value << YAML::BeginSeq;
    for (const auto& o : c.obstacles) {
        out << YAML::BeginMap;
        out << YAML::Key << "shape" << YAML::Value << (o.shape == ObstacleShape::Disc ? "disc" : "sphere");
        out << YAML::Key << "center" << YAML::Value;
        emit_vec(out, o.center);
        out << YAML::Key << "radius" << YAML::Value << o.radius;
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;

    out << YAML::Key << "initial_curve" << YAML::Value << YAML::BeginMap;
    if (c.initial_line) {
        out << YAML::Key << "line" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "from" << YAML::Value;
        emit_vec(out, c.initial_line->from);
        out << YAML::Key << "to" << YAML::Value;
        emit_vec(out, c.initial_line->to);
        out << YAML::EndMap;
    }
    if (!c.initial_nodes.empty()) {
        out << YAML::Key << "nodes" << YAML::Value << YAML::BeginSeq;
        for (const auto& p : c.initial_nodes) emit_vec(out, p);
        out << YAML::EndSeq;
    }
    out << YAML::EndMap;

    out << YAML::Key << "hardness" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "constant" << YAML::Value << c.hardness.constant;
    out << YAML::Key << "bumps" << YAML::Value << YAML::BeginSeq;
    for (const auto& b : c.hardness.bumps) {
        out << YAML::BeginMap;
        out << YAML::Key << "center" << YAML::Value;
        emit_vec(out, b.center);
        out << YAML::Key << "radius" << YAML::Value << b.radius;
        out << YAML::Key << "value" << YAML::Value << b.value;
        out << YAML::EndMap;
    }
    out << YAML::EndSeq << YAML::EndMap;

    out << YAML::Key << "target" << YAML::Value << YAML::BeginMap;
    if (c.target.kind == TargetKind::Plane) {
        out << YAML::Key << "kind" << YAML::Value << "plane";
        out << YAML::Key << "normal" << YAML::Value;
        emit_vec(out, c.target.normal);
        out << YAML::Key << "offset" << YAML::Value << c.target.offset;
    } else {
        out << YAML::Key << "kind" << YAML::Value << "point";
        out << YAML::Key << "point" << YAML::Value;
        emit_vec(out, c.target.point);
    }
    if (c.target_tol) out << YAML::Key << "tol" << YAML::Value << *c.target_tol;
    out << YAML::EndMap;

    out << YAML::Key << "restart" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "strategy" << YAML::Value << std::string(to_string(c.strategy));
    out << YAML::Key << "c" << YAML::Value << c.c;
    out << YAML::Key << "rho" << YAML::Value << c.rho;
    out << YAML::Key << "h0" << YAML::Value << c.h0;
    out << YAML::Key << "turn_angle" << YAML::Value << c.turn_angle;
    out << YAML::EndMap;

    out << YAML::Key << "limits" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "max_attempts" << YAML::Value << c.max_attempts;
    out << YAML::Key << "max_length" << YAML::Value << c.max_length;
    out << YAML::EndMap;

    if (c.contact_tol || c.angle_tol || c.curvature_tol) {
        out << YAML::Key << "breakdown" << YAML::Value << YAML::BeginMap;
        if (c.contact_tol) out << YAML::Key << "contact_tol" << YAML::Value << *c.contact_tol;
        if (c.angle_tol) out << YAML::Key << "angle_tol" << YAML::Value << *c.angle_tol;
        if (c.curvature_tol) out << YAML::Key << "curvature_tol" << YAML::Value << *c.curvature_tol;
        out << YAML::EndMap;
    }

    out << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "penalty_schedule" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double m : c.penalty_schedule) out << m;
    out << YAML::EndSeq;
    out << YAML::Key << "grad_tol" << YAML::Value << c.grad_tol;
    out << YAML::Key << "max_iters" << YAML::Value << c.max_iters;
    out << YAML::EndMap;

    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

void ScenarioConfig::validate() const {
    if (!finite_positive(ds)) throw ConfigError("ds", "must be > 0");
    if (!finite_positive(kappa0)) throw ConfigError("kappa0", "must be > 0");
    if (!finite_positive(alpha)) throw ConfigError("alpha", "must be > 0");
    if (!finite_positive(reg_eps)) throw ConfigError("reg_eps", "must be > 0");
    if (!finite_positive(smooth_eps)) throw ConfigError("smooth_eps", "must be > 0");
    if (!finite_positive(exploration_rate)) throw ConfigError("exploration_rate", "must be > 0");
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
        const std::string where = "obstacles[" + std::to_string(i) + "]";
        if (!finite_positive(obstacles[i].radius)) throw ConfigError(where + ".radius", "must be > 0");
        if (!is_finite(obstacles[i].center)) throw ConfigError(where + ".center", "must be finite");
    }
    if (initial_line.has_value() == !initial_nodes.empty())
        throw ConfigError("initial_curve", "give exactly one of 'line' or 'nodes'");
    if (initial_line) {
        const double len = norm(initial_line->to - initial_line->from);
        if (!(len >= 0.5 * ds)) throw ConfigError("initial_curve.line", "shorter than half a segment");
    } else {
        if (initial_nodes.size() < 2) throw ConfigError("initial_curve.nodes", "need at least two nodes");
        for (std::size_t i = 0; i + 1 < initial_nodes.size(); ++i) {
            const double d = norm(initial_nodes[i + 1] - initial_nodes[i]);
            if (!(std::abs(d - ds) <= 1e-6))
                throw ConfigError("initial_curve.nodes[" + std::to_string(i + 1) + "]",
                                  "not ds away from the previous node (within 1e-6)");
        }
    }
    if (hardness.constant < 0.0) throw ConfigError("hardness.constant", "must be >= 0");
    for (std::size_t i = 0; i < hardness.bumps.size(); ++i) {
        const std::string where = "hardness.bumps[" + std::to_string(i) + "]";
        if (!finite_positive(hardness.bumps[i].radius)) throw ConfigError(where + ".radius", "must be > 0");
        if (hardness.bumps[i].value < 0.0) throw ConfigError(where + ".value", "must be >= 0");
    }
    if (target.kind == TargetKind::Plane && !(norm(target.normal) > 0.0))
        throw ConfigError("target.normal", "must be nonzero");
    if (target_tol && !(*target_tol >= 0.0)) throw ConfigError("target.tol", "must be >= 0");
    if (!(c > 1.0)) throw ConfigError("restart.c", "must be > 1");
    if (!(rho > 0.0)) throw ConfigError("restart.rho", "must be > 0");
    if (!std::isfinite(h0)) throw ConfigError("restart.h0", "must be finite");
    if (!(turn_angle >= 0.0)) throw ConfigError("restart.turn_angle", "must be >= 0");
    if (max_attempts < 1) throw ConfigError("limits.max_attempts", "must be >= 1");
    if (!finite_positive(max_length)) throw ConfigError("limits.max_length", "must be > 0");
    if (contact_tol && !finite_positive(*contact_tol)) throw ConfigError("breakdown.contact_tol", "must be > 0");
    if (angle_tol && !(*angle_tol >= 0.0)) throw ConfigError("breakdown.angle_tol", "must be >= 0");
    if (curvature_tol && !finite_positive(*curvature_tol)) throw ConfigError("breakdown.curvature_tol", "must be > 0");
    try {
        cost_params().validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("solver", e.what());
    }
}

RootCurve ScenarioConfig::initial_curve() const {
    if (!initial_line) return RootCurve(initial_nodes, ds);
    const Vec3 d = initial_line->to - initial_line->from;
    const double len = norm(d);
    const auto segs = static_cast<std::size_t>(std::max(1.0, std::round(len / ds)));
    return RootCurve::straight(initial_line->from, d / len, segs, ds);
}

std::string ScenarioConfig::initial_curve_note() const {
    std::ostringstream out;
    out.precision(17);
    const RootCurve curve = initial_curve();
    if (initial_line) {
        const double len = norm(initial_line->to - initial_line->from);
        out << "initial curve: line of length " << len << " resampled to " << curve.segment_count()
            << " segments of ds " << ds << "; end point moved from (" << initial_line->to.x << ", "
            << initial_line->to.y << ", " << initial_line->to.z << ") to (" << curve.tip().x << ", " << curve.tip().y
            << ", " << curve.tip().z << ")";
    } else {
        out << "initial curve: " << curve.node_count() << " explicit nodes, max spacing error "
            << curve.max_spacing_error() * ds;
    }
    return out.str();
}

Environment ScenarioConfig::environment() const {
    Environment env;
    env.obstacles = obstacles;
    env.hardness = hardness;
    env.target = target;
    env.explored.kernel_rate = exploration_rate;
    return env;
}

CostParams ScenarioConfig::cost_params() const {
    CostParams p = CostParams::for_spacing(ds);
    p.alpha = alpha;
    p.smooth_eps = smooth_eps;
    if (contact_tol) p.contact_tol = *contact_tol;
    p.penalty_schedule = penalty_schedule;
    p.grad_tol = grad_tol;
    p.max_iters = max_iters;
    p.init_seed = seed;
    return p;
}

ControlParams ScenarioConfig::control_params() const { return {kappa0, reg_eps}; }

RestartParams ScenarioConfig::restart_params() const {
    RestartParams r;
    r.strategy = strategy;
    r.c = c;
    r.rho = rho;
    r.h0 = h0;
    r.target_tol = target_tol.value_or(ds);
    r.max_attempts = max_attempts;
    r.max_length = max_length;
    r.turn_angle = turn_angle;
    r.seed = seed;
    return r;
}

BreakdownTol ScenarioConfig::breakdown_tol() const {
    BreakdownTol t = BreakdownTol::defaults(ds, kappa0);
    if (contact_tol) t.contact = *contact_tol;
    if (angle_tol) t.angle = *angle_tol;
    if (curvature_tol) t.curvature = *curvature_tol;
    return t;
}

bool ScenarioConfig::is_planar() const {
    auto flat = [](const Vec3& p) { return p.z == 0.0; };
    for (const auto& o : obstacles)
        if (o.shape != ObstacleShape::Disc && !flat(o.center)) return false;
    if (initial_line && !(flat(initial_line->from) && flat(initial_line->to))) return false;
    for (const auto& p : initial_nodes)
        if (!flat(p)) return false;
    if (target.kind == TargetKind::Plane ? target.normal.z != 0.0 : !flat(target.point)) return false;
    return true;
}

}  // namespace rootsim
