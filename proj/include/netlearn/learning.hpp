#pragma once

#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "netlearn/epoch_time.hpp"
#include "netlearn/model.hpp"

namespace netlearn {

/// Coefficients of the error law eps = c1 + c2 ln(c3 + X) / sqrt(K gamma)
/// (natural logarithm) and the two constraint limits.
struct LearningProfile {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double eps_max = 1.0;
    double t_max = std::numeric_limits<double>::infinity();
};

void validate_profile(const LearningProfile& p);

inline constexpr long kDefaultEpochCap = 1'000'000;

/// Error after K epochs; +infinity when gamma <= 0 (disconnected cooperation graph).
double predicted_error(long K, double gamma, double X, const LearningProfile& p);

enum class EpochVerdict { found, error_floor, cap_exceeded, disconnected };

struct EpochSearch {
    EpochVerdict verdict = EpochVerdict::found;
    long epochs = 0;  // valid when verdict == found
    int law_evaluations = 0;
    bool found() const { return verdict == EpochVerdict::found; }
};

/// Smallest K >= 1 whose predicted error meets eps_max, with X = X(K).
EpochSearch min_epochs(const Topology& t, const EdgeSet& ll_edges, const EdgeSet& il_edges,
                       const LearningProfile& p, long cap = kDefaultEpochCap);

struct CostSplit {
    double ll = 0.0;  // l-node operation plus l-l links
    double il = 0.0;  // i-l links plus operation of every i-node in use
    double total() const { return ll + il; }
};

CostSplit per_epoch_cost_split(const Topology& t, const EdgeSet& ll_edges, const EdgeSet& il_edges);
double per_epoch_cost(const Topology& t, const EdgeSet& ll_edges, const EdgeSet& il_edges);
double total_cost(const Topology& t, const Selection& s);

struct EvaluationResult {
    double error = std::numeric_limits<double>::infinity();
    double time = std::numeric_limits<double>::quiet_NaN();
    double cost = std::numeric_limits<double>::infinity();
    double per_epoch_cost = 0.0;
    CostSplit split;  // per epoch
    long epochs = 0;
    bool feasible = false;
    double margin = 0.0;
    double g1 = 0.0;
    double g2 = std::numeric_limits<double>::quiet_NaN();
    double gamma = 0.0;
    EpochVerdict verdict = EpochVerdict::found;
};

struct EvaluateOptions {
    EngineOptions engine;
    long epoch_cap = kDefaultEpochCap;
};

EvaluationResult evaluate(const Topology& t, const EdgeSet& ll_edges, const EdgeSet& il_edges,
                          const LearningProfile& p, const EvaluateOptions& opt = {});

// Profiling fit

struct ProfileObservation {
    double X = 0.0;
    double K = 0.0;
    double gamma = 0.0;
    double error = 0.0;
};

struct ProfileFit {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double mse = 0.0;
};

class FitError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

ProfileFit fit_profile(std::span<const ProfileObservation> obs);

/// Mean squared error of the law with the given coefficients.
double profile_mse(std::span<const ProfileObservation> obs, double c1, double c2, double c3);

}  // namespace netlearn
