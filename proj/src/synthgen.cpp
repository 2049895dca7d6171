#include "decdyn/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace decdyn {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Uniform draw in the open interval (0, 1); never returns an endpoint, so
// log() and pow() stay finite.
class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed) : gen_(seed) {}

    double next() { return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53; }

private:
    std::mt19937_64 gen_;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError("InvalidParameter", what);
}

void validate_model(const IncomeModel& model) {
    std::visit(
        [](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ExponentialIncome>) {
                require(std::isfinite(m.temperature) && m.temperature > 0.0,
                        "exponential temperature must be positive");
            } else if constexpr (std::is_same_v<T, LognormalIncome>) {
                require(std::isfinite(m.mu), "lognormal mu must be finite");
                require(std::isfinite(m.sigma) && m.sigma > 0.0,
                        "lognormal sigma must be positive");
            } else {
                require(std::isfinite(m.alpha) && m.alpha > 0.0, "pareto alpha must be positive");
                require(std::isfinite(m.xmin) && m.xmin > 0.0, "pareto xmin must be positive");
            }
        },
        model);
}

void validate_rule(const ExpenditureRule& rule) {
    require(std::isfinite(rule.propensity) && rule.propensity > 0.0 && rule.propensity <= 1.0,
            "propensity must be in (0, 1]");
    require(std::isfinite(rule.noise_scale) && rule.noise_scale >= 0.0 && rule.noise_scale < 1.0,
            "noise scale must be in [0, 1)");
    require(std::isfinite(rule.tax_wedge) && rule.tax_wedge >= 0.0,
            "tax wedge must be non-negative");
}

double draw_income(const IncomeModel& model, UniformStream& u) {
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ExponentialIncome>) {
                return -m.temperature * std::log(u.next());
            } else if constexpr (std::is_same_v<T, LognormalIncome>) {
                const double z = std::sqrt(-2.0 * std::log(u.next())) * std::cos(kTwoPi * u.next());
                return std::exp(m.mu + m.sigma * z);
            } else {
                return m.xmin * std::pow(u.next(), -1.0 / m.alpha);
            }
        },
        model);
}

}  // namespace

std::string generator_name() { return "mt19937_64"; }

std::vector<HouseholdRecord> sample_households(const IncomeModel& model, int n,
                                               const ExpenditureRule& rule, std::uint64_t seed) {
    validate_model(model);
    validate_rule(rule);
    require(n >= 1, "household count must be >= 1");

    UniformStream u(seed);
    std::vector<HouseholdRecord> records;
    records.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        HouseholdRecord r;
        r.income = draw_income(model, u);
        const double noise = rule.noise_scale * (2.0 * u.next() - 1.0);
        r.expenditure_disposable = rule.propensity * r.income * (1.0 + noise);
        r.expenditure_gross = r.expenditure_disposable * (1.0 + rule.tax_wedge);
        records.push_back(r);
    }
    return records;
}

DecileSeries deciles_from_microdata(std::span<const HouseholdRecord> records,
                                    const VariableKind& kind, Measure measure, std::string label,
                                    std::string unit, Period period) {
    if (records.empty()) {
        throw ValidationError("EmptyInput", "no household records to aggregate");
    }
    if (records.size() % kDecileCount != 0) {
        throw ValidationError("NotDivisibleByTen",
                              "record count " + std::to_string(records.size()) +
                                  " is not divisible by " + std::to_string(kDecileCount));
    }
    if (auto msg = variable_kind_violation(kind)) {
        throw ValidationError("InvalidParameter", *msg);
    }

    auto select = [&](const HouseholdRecord& r) {
        if (kind.variable == Variable::income) return r.income;
        return kind.flow == Flow::gross ? r.expenditure_gross : r.expenditure_disposable;
    };

    // Rank by income; ties keep original list order.
    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return records[a].income < records[b].income;
    });

    const std::size_t group_size = records.size() / kDecileCount;
    std::array<double, kDecileCount> values{};
    for (std::size_t g = 0; g < kDecileCount; ++g) {
        const std::size_t begin = g * group_size;
        if (measure == Measure::mean) {
            double sum = 0.0;
            for (std::size_t i = begin; i < begin + group_size; ++i) sum += select(records[order[i]]);
            values[g] = sum / static_cast<double>(group_size);
        } else {
            double lo = select(records[order[begin]]);
            for (std::size_t i = begin + 1; i < begin + group_size; ++i) {
                lo = std::min(lo, select(records[order[i]]));
            }
            values[g] = lo;
        }
    }

    SeriesMeta meta{kind, measure, Basis::nominal(), period, std::move(unit)};
    return make_series(std::move(label), meta, values);
}

std::vector<DecileSeries> generate_panel(const IncomeModel& model, int households, int years,
                                         double growth, const ExpenditureRule& rule,
                                         std::uint64_t seed, const VariableKind& kind,
                                         Measure measure, int first_year, const std::string& unit,
                                         Period period) {
    require(years >= 1, "panel needs at least one year");
    require(std::isfinite(growth) && growth > -1.0, "growth must be > -1");

    std::vector<DecileSeries> panel;
    panel.reserve(static_cast<std::size_t>(years));
    double factor = 1.0;
    for (int t = 0; t < years; ++t) {
        // One seed per year keeps each year's draw independent of the panel
        // length, so extending a panel never rewrites its early years.
        auto records = sample_households(model, households, rule,
                                         seed + static_cast<std::uint64_t>(t));
        for (auto& r : records) {
            r.income *= factor;
            r.expenditure_gross *= factor;
            r.expenditure_disposable *= factor;
        }
        panel.push_back(deciles_from_microdata(records, kind, measure,
                                               std::to_string(first_year + t), unit, period));
        factor *= 1.0 + growth;
    }
    return panel;
}

}  // namespace decdyn
