#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "decdyn/model.hpp"

namespace decdyn {

// One synthetic household. Income is strictly positive; expenditures are
// non-negative.
struct HouseholdRecord {
    double income = 0.0;
    double expenditure_gross = 0.0;
    double expenditure_disposable = 0.0;

    bool operator==(const HouseholdRecord&) const = default;
};

// Parametric income models from the statistical-mechanics literature on
// income distributions.
struct ExponentialIncome {
    double temperature = 1.0;  // mean income
};
struct LognormalIncome {
    double mu = 0.0;
    double sigma = 1.0;
};
struct ParetoIncome {
    double alpha = 2.0;
    double xmin = 1.0;
};
using IncomeModel = std::variant<ExponentialIncome, LognormalIncome, ParetoIncome>;

// How expenditures are derived from income. This is test scaffolding for the
// gross-vs-disposable plumbing, not an economic model:
//   disposable = propensity * income * (1 + u),  u uniform in [-noise, +noise]
//   gross      = disposable * (1 + tax_wedge)
struct ExpenditureRule {
    double propensity = 0.8;   // in (0, 1]
    double noise_scale = 0.1;  // in [0, 1)
    double tax_wedge = 0.2;    // >= 0
};

// Name of the deterministic random source, recorded in exported metadata so
// runs are reproducible across builds.
std::string generator_name();

// Draws n households with incomes from the model and expenditures from the
// rule. Fully reproducible from the seed; uniform variates come from the
// standardized mt19937_64 stream, transformed by inversion (exponential,
// Pareto) or Box-Muller (lognormal), so results do not depend on the
// platform's distribution implementations. Throws ValidationError
// "InvalidParameter".
std::vector<HouseholdRecord> sample_households(const IncomeModel& model, int n,
                                               const ExpenditureRule& rule, std::uint64_t seed);

// Ranks households by income ascending (ties keep list order), splits them
// into ten equal-count groups, and reduces each group to one value of the
// selected variable: group mean, or group minimum for the lower-limit
// measure. The record count must be divisible by ten. Throws
// ValidationError: "NotDivisibleByTen", "EmptyInput", "InvalidParameter"
// (expenditure with unspecified flow).
DecileSeries deciles_from_microdata(std::span<const HouseholdRecord> records,
                                    const VariableKind& kind, Measure measure, std::string label,
                                    std::string unit, Period period);

// A small multi-year panel: per year, a fresh sample whose incomes (and with
// them expenditures) are scaled by (1 + growth)^year. Labels count up from
// first_year. Convenience composition used by the command line front end.
std::vector<DecileSeries> generate_panel(const IncomeModel& model, int households, int years,
                                         double growth, const ExpenditureRule& rule,
                                         std::uint64_t seed, const VariableKind& kind,
                                         Measure measure, int first_year, const std::string& unit,
                                         Period period);

}  // namespace decdyn
