#include "ncsymp/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "ncsymp/types.hpp"

namespace ncsymp {

Check make_check(std::string name, std::string relation, double residual, double tol,
                 std::string note) {
  Check c;
  c.name = std::move(name);
  c.relation = std::move(relation);
  c.residual = residual;
  c.tolerance = tol;
  c.passed = residual <= tol;
  c.note = std::move(note);
  return c;
}

Check make_flag(std::string name, std::string relation, bool ok, std::string note) {
  Check c = make_check(std::move(name), std::move(relation), ok ? 0.0 : 1.0, 0.0, std::move(note));
  c.passed = ok;
  return c;
}

bool Report::ok() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

void Report::append(const Report& other, const std::string& prefix) {
  for (auto c : other.checks) {
    if (!prefix.empty()) c.name = prefix + "." + c.name;
    checks.push_back(std::move(c));
  }
}

Format parse_format(const std::string& s) {
  if (s == "text") return Format::Text;
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  throw SpecError("unknown output format '" + s + "' (expected text, json or csv)");
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

double clean(double x, double floor) {
  if (std::abs(x) < floor) return 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

json scalar_json(std::complex<double> c, double floor) {
  const double re = clean(c.real(), floor);
  const double im = clean(c.imag(), floor);
  if (im == 0.0) return re;
  return json::array({re, im});
}

json to_json(const Report& r) {
  json j;
  j["title"] = r.title;
  j["passed"] = r.ok();
  json arr = json::array();
  for (const auto& c : r.checks) {
    json e;
    e["name"] = c.name;
    e["relation"] = c.relation;
    e["residual"] = fmt_double(c.residual);
    e["tolerance"] = fmt_double(c.tolerance);
    e["passed"] = c.passed;
    if (!c.note.empty()) e["note"] = c.note;
    arr.push_back(std::move(e));
  }
  j["checks"] = std::move(arr);
  if (!r.data.empty()) j["data"] = r.data;
  return j;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string render(const Report& r, Format f) {
  std::ostringstream os;
  switch (f) {
    case Format::Json:
      os << to_json(r).dump(2) << "\n";
      break;
    case Format::Csv:
      os << "name,relation,residual,tolerance,passed,note\n";
      for (const auto& c : r.checks)
        os << csv_escape(c.name) << ',' << csv_escape(c.relation) << ',' << fmt_double(c.residual)
           << ',' << fmt_double(c.tolerance) << ',' << (c.passed ? "true" : "false") << ','
           << csv_escape(c.note) << "\n";
      break;
    case Format::Text:
      os << r.title << "\n";
      for (const auto& c : r.checks) {
        os << (c.passed ? "  [pass] " : "  [FAIL] ") << c.name << "  residual=" << fmt_double(c.residual)
           << " tol=" << fmt_double(c.tolerance);
        if (!c.relation.empty()) os << "  (" << c.relation << ")";
        if (!c.note.empty()) os << "  " << c.note;
        os << "\n";
      }
      if (!r.data.empty()) os << r.data.dump(2) << "\n";
      os << (r.ok() ? "result: pass" : "result: FAIL") << "\n";
      break;
  }
  return os.str();
}

}  // namespace ncsymp
