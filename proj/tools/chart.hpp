#pragma once

#include "kellybet/metrics.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace kellybet::cli {

struct NamedCurve {
    std::string name;
    EquityCurve curve;
};

/// Line chart of bankroll against time, log-scaled when every value is positive.
/// Output depends only on the curves: fixed palette, fixed size, fixed number formatting.
void write_equity_svg(std::ostream& out, const std::vector<NamedCurve>& curves, const std::string& title);

/// CSV twin of the chart: `timestamp,<name>...` over the union of timestamps, blanks where a
/// curve has no point.
void write_equity_chart_csv(std::ostream& out, const std::vector<NamedCurve>& curves);

}  // namespace kellybet::cli
