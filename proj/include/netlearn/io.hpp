#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "netlearn/learning.hpp"
#include "netlearn/model.hpp"
#include "netlearn/optimize.hpp"
#include "netlearn/simulate.hpp"

namespace netlearn::io {

/// Malformed input; the message names the file and the line or field.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kFormatVersion = 1;

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

/// "%.17g"; non-finite values print as inf, -inf and nan.
std::string format_number(double x);

Topology parse_instance(const std::string& text, const std::string& source = "<instance>");
std::string emit_instance(const Topology& t);
Topology load_instance(const std::string& path);

LearningProfile parse_profile(const std::string& text, const std::string& source = "<profile>");
std::string emit_profile(const LearningProfile& p, std::optional<double> mse = std::nullopt);

struct SolutionRecord {
    std::string algorithm;
    std::optional<Solution> solution;
    EvaluationResult result;  // of the returned selection, or the last explored one if infeasible
};

std::string emit_solution(const Topology& t, const SolutionRecord& r);
/// Selection stored in a solution file, mapped back onto candidate indices.
Selection parse_solution(const Topology& t, const std::string& text, const std::string& source = "<solution>");

std::string emit_simstats(const SimStats& s);

std::string trace_csv(const std::vector<TraceEntry>& trace);
std::string gantt_csv(const std::vector<GanttEvent>& events);
std::vector<ProfileObservation> parse_observations(const std::string& text, const std::string& source = "<csv>");
std::string observations_csv(const std::vector<ProfileObservation>& obs);

}  // namespace netlearn::io
