#pragma once

#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

namespace ncsymp {

using json = nlohmann::ordered_json;

/// One verified relation: residual against tolerance.
struct Check {
  std::string name;
  std::string relation;  // the identity being instantiated, written out
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;
};

Check make_check(std::string name, std::string relation, double residual, double tol,
                 std::string note = {});
/// Boolean check; residual is 0 on success and 1 otherwise.
Check make_flag(std::string name, std::string relation, bool ok, std::string note = {});

struct Report {
  std::string title;
  std::vector<Check> checks;
  json data = json::object();

  bool ok() const;
  void add(Check c) { checks.push_back(std::move(c)); }
  void append(const Report& other, const std::string& prefix = {});
};

enum class Format { Text, Json, Csv };

Format parse_format(const std::string& s);
json to_json(const Report& r);
std::string render(const Report& r, Format f);
/// Deterministic fixed-width rendering of a double for reports.
std::string fmt_double(double x);
/// Number rounded to 12 significant digits; magnitudes below `floor` become 0.
double clean(double x, double floor = 1e-12);
/// clean(re) when the imaginary part vanishes, otherwise [re, im].
json scalar_json(std::complex<double> c, double floor = 1e-12);

}  // namespace ncsymp
