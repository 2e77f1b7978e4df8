#include "rootsim/log_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include <nlohmann/json.hpp>

namespace rootsim {

using nlohmann::json;

std::string format_double(double x) {
    if (!std::isfinite(x)) return "null";
    if (x == 0.0) return std::signbit(x) ? "-0.0" : "0";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

class Line {
public:
    Line& raw(std::string_view s) {
        s_ += s;
        return *this;
    }
    Line& key(std::string_view k) {
        if (s_.size() > 1) s_ += ',';
        s_ += json(std::string(k)).dump();
        s_ += ':';
        return *this;
    }
    Line& num(double x) { return raw(format_double(x)); }
    Line& integer(long long x) { return raw(std::to_string(x)); }
    Line& str(std::string_view v) { return raw(json(std::string(v)).dump()); }
    Line& vec(const Vec3& v) {
        s_ += '[';
        num(v.x).raw(",").num(v.y).raw(",").num(v.z);
        s_ += ']';
        return *this;
    }
    Line& vecs(const std::vector<Vec3>& vs) {
        s_ += '[';
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (i) s_ += ',';
            vec(vs[i]);
        }
        s_ += ']';
        return *this;
    }
    std::string done() { return s_ + "}"; }

private:
    std::string s_{"{"};
};

double get_num(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw LogError(std::string("log record missing '") + key + "'");
    if (it->is_null()) return std::numeric_limits<double>::quiet_NaN();
    if (!it->is_number()) throw LogError(std::string("log field '") + key + "' is not a number");
    return it->get<double>();
}

double as_num(const json& j) {
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    if (!j.is_number()) throw LogError("expected a number in log");
    return j.get<double>();
}

Vec3 get_vec(const json& j) {
    if (!j.is_array() || j.size() != 3) throw LogError("expected a 3-vector in log");
    return {as_num(j[0]), as_num(j[1]), as_num(j[2])};
}

std::vector<Vec3> get_vecs(const json& j, const char* key) {
    std::vector<Vec3> out;
    const auto it = j.find(key);
    if (it == j.end()) return out;
    if (!it->is_array()) throw LogError(std::string("log field '") + key + "' is not a list");
    out.reserve(it->size());
    for (const auto& v : *it) out.push_back(get_vec(v));
    return out;
}

template <typename T>
T get_int(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_number_integer()) throw LogError(std::string("log field '") + key + "' is not an integer");
    return it->get<T>();
}

std::string get_str(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_string()) throw LogError(std::string("log field '") + key + "' is not a string");
    return it->get<std::string>();
}

}  // namespace

void JsonlLogWriter::finish_line(const std::string& line) {
    out_ << line << '\n';
    out_.flush();
    if (!out_) throw LogError("failed writing log record");
}

void JsonlLogWriter::header(const LogHeader& h) {
    Line l;
    l.key("type").str("header").key("format").str(kLogFormat).key("version").integer(kLogVersion);
    l.key("scenario").str(h.scenario).key("ds").num(h.ds).key("mode").str(to_string(h.mode));
    l.key("obstacles").raw("[");
    for (std::size_t i = 0; i < h.obstacles.size(); ++i) {
        const auto& o = h.obstacles[i];
        if (i) l.raw(",");
        Line ol;
        ol.key("shape").str(o.shape == ObstacleShape::Disc ? "disc" : "sphere");
        ol.key("center").vec(o.center).key("radius").num(o.radius);
        l.raw(ol.done());
    }
    l.raw("]");
    Line tl;
    tl.key("kind").str(h.target.kind == TargetKind::Plane ? "plane" : "point");
    tl.key("normal").vec(h.target.normal).key("offset").num(h.target.offset).key("point").vec(h.target.point);
    l.key("target").raw(tl.done());
    l.key("initial_nodes").vecs(h.initial_nodes);
    finish_line(l.done());
}

void JsonlLogWriter::step(const StepRecord& s) {
    Line l;
    l.key("type").str("step").key("step").integer(static_cast<long long>(s.step)).key("attempt").integer(s.attempt);
    l.key("control").vec(s.control).key("tip_turn").num(s.tip_turn).key("omega_l2").num(s.omega_l2);
    l.key("penetration").num(s.penetration).key("solver_iterations").integer(s.solver_iterations);
    l.key("tangent_change_h1").num(s.tangent_change_h1);
    l.key("omega").vecs(s.omega).key("nodes").vecs(s.nodes);
    finish_line(l.done());
}

void JsonlLogWriter::event(const EventRecord& e) {
    Line l;
    l.key("type").str("event").key("kind").str(to_string(e.kind));
    l.key("step").integer(static_cast<long long>(e.step)).key("attempt").integer(e.attempt);
    l.key("length").num(e.length).key("psi").num(e.psi).key("raw_length").num(e.raw_length);
    l.key("restart_length").num(e.restart_length).key("message").str(e.message);
    l.key("nodes").vecs(e.nodes);
    finish_line(l.done());
}

void JsonlLogWriter::summary(const LogSummary& s) {
    Line l;
    l.key("type").str("summary").key("status").str(to_string(s.status));
    l.key("steps").integer(static_cast<long long>(s.steps)).key("attempts").integer(s.attempts);
    l.key("wall_time").num(s.wall_time);
    finish_line(l.done());
}

void write_log(const SimulationLog& log, std::ostream& out) {
    JsonlLogWriter w(out);
    replay(log, w);
}

void write_log(const SimulationLog& log, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw LogError("cannot open '" + path.string() + "' for writing");
    write_log(log, out);
}

SimulationLog read_log(std::istream& in, bool require_summary) {
    SimulationLog log;
    std::string text;
    std::size_t lineno = 0;
    bool have_header = false;
    bool have_summary = false;
    while (std::getline(in, text)) {
        ++lineno;
        if (text.empty()) continue;
        if (have_summary) throw LogError("record after summary on line " + std::to_string(lineno));
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw LogError("line " + std::to_string(lineno) + ": " + e.what());
        }
        try {
            const std::string type = get_str(j, "type");
            if (!have_header) {
                if (type != "header") throw LogError("first record must be the header");
                if (get_str(j, "format") != kLogFormat) throw LogError("not a rootsim log");
                if (get_int<int>(j, "version") != kLogVersion) throw LogError("unsupported log version");
                auto& h = log.header;
                h.scenario = get_str(j, "scenario");
                h.ds = get_num(j, "ds");
                h.mode = growth_mode_from_string(get_str(j, "mode"));
                for (const auto& o : j.at("obstacles")) {
                    Obstacle ob;
                    ob.shape = get_str(o, "shape") == "disc" ? ObstacleShape::Disc : ObstacleShape::Sphere;
                    ob.center = get_vec(o.at("center"));
                    ob.radius = get_num(o, "radius");
                    h.obstacles.push_back(ob);
                }
                const auto& t = j.at("target");
                h.target.kind = get_str(t, "kind") == "plane" ? TargetKind::Plane : TargetKind::Point;
                h.target.normal = get_vec(t.at("normal"));
                h.target.offset = get_num(t, "offset");
                h.target.point = get_vec(t.at("point"));
                h.initial_nodes = get_vecs(j, "initial_nodes");
                have_header = true;
            } else if (type == "step") {
                StepRecord s;
                s.step = get_int<std::size_t>(j, "step");
                s.attempt = get_int<int>(j, "attempt");
                s.control = get_vec(j.at("control"));
                s.tip_turn = get_num(j, "tip_turn");
                s.omega_l2 = get_num(j, "omega_l2");
                s.penetration = get_num(j, "penetration");
                s.solver_iterations = get_int<int>(j, "solver_iterations");
                s.tangent_change_h1 = get_num(j, "tangent_change_h1");
                s.omega = get_vecs(j, "omega");
                s.nodes = get_vecs(j, "nodes");
                log.steps.push_back(std::move(s));
            } else if (type == "event") {
                EventRecord e;
                e.kind = event_kind_from_string(get_str(j, "kind"));
                e.step = get_int<std::size_t>(j, "step");
                e.attempt = get_int<int>(j, "attempt");
                e.length = get_num(j, "length");
                e.psi = get_num(j, "psi");
                e.raw_length = get_num(j, "raw_length");
                e.restart_length = get_num(j, "restart_length");
                e.message = get_str(j, "message");
                e.nodes = get_vecs(j, "nodes");
                log.events.push_back(std::move(e));
            } else if (type == "summary") {
                log.summary.status = growth_status_from_string(get_str(j, "status"));
                log.summary.steps = get_int<std::size_t>(j, "steps");
                log.summary.attempts = get_int<int>(j, "attempts");
                log.summary.wall_time = get_num(j, "wall_time");
                have_summary = true;
            } else {
                throw LogError("unknown record type '" + type + "'");
            }
        } catch (const LogError& e) {
            throw LogError("line " + std::to_string(lineno) + ": " + e.what());
        } catch (const std::exception& e) {
            throw LogError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!have_header) throw LogError("log has no header");
    if (require_summary && !have_summary) throw LogError("log has no summary record");
    return log;
}

SimulationLog read_log(const std::filesystem::path& path, bool require_summary) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LogError("cannot open '" + path.string() + "'");
    return read_log(in, require_summary);
}

}  // namespace rootsim
