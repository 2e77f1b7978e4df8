#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "rootsim/simulation_log.hpp"

namespace rootsim {

class LogError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kLogFormat = "rootsim-log";
inline constexpr int kLogVersion = 1;

/// Writes one JSON object per line and flushes after each, so an interrupted run
/// still leaves a readable prefix. Floats use 17 significant digits.
class JsonlLogWriter : public LogSink {
public:
    explicit JsonlLogWriter(std::ostream& out) : out_(out) {}

    void header(const LogHeader& h) override;
    void step(const StepRecord& s) override;
    void event(const EventRecord& e) override;
    void summary(const LogSummary& s) override;

private:
    void finish_line(const std::string& line);
    std::ostream& out_;
};

void write_log(const SimulationLog& log, std::ostream& out);
void write_log(const SimulationLog& log, const std::filesystem::path& path);

/// With require_summary = false a log cut short by a crash is accepted.
SimulationLog read_log(std::istream& in, bool require_summary = true);
SimulationLog read_log(const std::filesystem::path& path, bool require_summary = true);

/// Decimal text of a double with 17 significant digits ("null" for non-finite values).
std::string format_double(double x);

}  // namespace rootsim
