#pragma once

#include "singode/criteria.hpp"
#include "singode/numerics.hpp"
#include "singode/series.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace singode {

using Json = nlohmann::ordered_json;

/// 17 significant digits ("%.17g"); enough to reproduce any double exactly.
std::string format_double(double value);

/// Serializes with every floating-point number rendered by format_double and
/// non-finite values as null. Keys keep insertion order, so output is reproducible.
std::string dump_json(const Json& value, int indent = 2);

Json to_json(const SingularityWeight& weight);
Json to_json(const CriteriaReport& report);
CriteriaReport criteria_report_from_json(const Json& j);

/// [[exponent, "numerator", "denominator"], ...] for the nonzero coefficients.
/// The exponent is a JSON integer when integral and a "p/q" string otherwise.
Json series_to_json(const RationalSeries& s);

/// Header row, then one row per record; numbers via format_double.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Columns x, y0..y{n-1}, error.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

/// Columns x, ratio.
void write_scan_csv(std::ostream& out, const MinimalCScan& scan);

/// Parses a CSV produced by write_csv back into its header and numeric rows.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};
CsvTable read_csv(std::istream& in);

}  // namespace singode
