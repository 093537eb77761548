#pragma once

#include <string>
#include <vector>

#include "qcont/integral.hpp"
#include "qcont/io.hpp"
#include "qcont/lab.hpp"

namespace qcont {

/// 12 significant digits; infinities and NaN become the strings "inf", "-inf", "nan".
json number_json(double v);
/// Inverse of number_json. Throws ParseError on anything else.
double number_from_json(const json& j, const std::string& where);
std::string format_number(double v);

/// Wraps a body with tool, version, schema_version and kind.
json envelope(const std::string& kind, json body);
/// Checks tool and schema_version of an emitted document and returns its kind.
std::string check_envelope(const json& doc, const std::string& where);

json to_json(const BoundReport& r);
json to_json(const FuzzReport& r);
json to_json(const QuadratureResult& r);
json to_json(const DegradabilityReport& r);
json to_json(const RegionSplit& r);

BoundReport bound_report_from_json(const json& j, const std::string& where);
FuzzReport fuzz_report_from_json(const json& j, const std::string& where);

/// One CSV row per report. Columns are fixed per report type.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string str() const;
};

CsvTable csv_bound(const std::vector<BoundReport>& reports);
CsvTable csv_fuzz(const FuzzReport& r);
CsvTable csv_quadrature(const QuadratureResult& r);
CsvTable csv_degradability(const DegradabilityReport& r);

}  // namespace qcont
