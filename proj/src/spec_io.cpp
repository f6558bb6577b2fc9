#include "ncsymp/spec_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace ncsymp::spec {

namespace {

// Already carries its location; passed through unchanged by outer handlers.
struct Located : SpecError {
  using SpecError::SpecError;
};

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw Located((where.empty() ? std::string("spec") : where) + ": " + msg);
}

std::string at(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string at(const std::string& where, size_t i) { return where + "/" + std::to_string(i); }

const json& field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, "missing field '" + key + "'");
  return *it;
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

double real(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

cplx scalar(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  fail(where, "expected a number or [re, im]");
}

void check_index(int i, int n, const std::string& where) {
  if (i < 0 || i >= n) fail(where, "index " + std::to_string(i) + " out of range 0.." + std::to_string(n - 1));
}

AlgebraPtr explicit_algebra(const json& j, const std::string& where) {
  const int n = integer(field(j, "dim", where), at(where, "dim"));
  if (n < 1) fail(at(where, "dim"), "dimension must be positive");
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    const auto& l = j["labels"];
    if (!l.is_array() || static_cast<int>(l.size()) != n) fail(at(where, "labels"), "expected dim labels");
    for (size_t i = 0; i < l.size(); ++i) {
      if (!l[i].is_string()) fail(at(at(where, "labels"), i), "expected a string");
      labels.push_back(l[i].get<std::string>());
    }
  }
  std::vector<int> parity(n, 0);
  if (j.contains("parity")) {
    const auto& p = j["parity"];
    if (!p.is_array() || static_cast<int>(p.size()) != n) fail(at(where, "parity"), "expected dim parities");
    for (int i = 0; i < n; ++i) {
      parity[i] = integer(p[i], at(at(where, "parity"), i));
      if (parity[i] != 0 && parity[i] != 1) fail(at(at(where, "parity"), i), "parity must be 0 or 1");
    }
  }
  const int unit = j.contains("unit") ? integer(j["unit"], at(where, "unit")) : 0;
  check_index(unit, n, at(where, "unit"));
  std::vector<Mat> left(n, Mat::Zero(n, n));
  const auto& sc = field(j, "structure", where);
  if (!sc.is_array()) fail(at(where, "structure"), "expected an array of [i, j, k, re, im]");
  for (size_t e = 0; e < sc.size(); ++e) {
    const std::string w = at(at(where, "structure"), e);
    const auto& t = sc[e];
    if (!t.is_array() || (t.size() != 4 && t.size() != 5)) fail(w, "expected [i, j, k, re, im]");
    const int a = integer(t[0], at(w, 0)), b = integer(t[1], at(w, 1)), k = integer(t[2], at(w, 2));
    check_index(a, n, at(w, 0));
    check_index(b, n, at(w, 1));
    check_index(k, n, at(w, 2));
    const double re = real(t[3], at(w, 3));
    const double im = t.size() == 5 ? real(t[4], at(w, 4)) : 0.0;
    left[a](k, b) += cplx(re, im);
  }
  Mat star = Mat::Identity(n, n);
  if (j.contains("involution")) {
    star = Mat::Zero(n, n);
    const auto& inv = j["involution"];
    if (!inv.is_array()) fail(at(where, "involution"), "expected an array of [i, j, re, im]");
    for (size_t e = 0; e < inv.size(); ++e) {
      const std::string w = at(at(where, "involution"), e);
      const auto& t = inv[e];
      if (!t.is_array() || (t.size() != 3 && t.size() != 4)) fail(w, "expected [i, j, re, im]");
      const int a = integer(t[0], at(w, 0)), b = integer(t[1], at(w, 1));
      check_index(a, n, at(w, 0));
      check_index(b, n, at(w, 1));
      star(a, b) += cplx(real(t[2], at(w, 2)), t.size() == 4 ? real(t[3], at(w, 3)) : 0.0);
    }
  }
  const std::string name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "custom";
  try {
    return std::make_shared<const Superalgebra>(name, labels, parity, unit, left, star);
  } catch (const SpecError& e) {
    fail(where, e.what());
  }
}

}  // namespace

json parse(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    if (const auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw SpecError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
}

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

json load_argument(const std::string& arg, const std::string& what) {
  const auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[' || arg[first] == '"'))
    return parse(arg, what);
  if (std::ifstream(arg).good()) return load_file(arg);
  if (!arg.empty() && (std::isdigit(static_cast<unsigned char>(arg[0])) || arg[0] == '-')) {
    try {
      return parse(arg, what);
    } catch (const SpecError&) {
    }
  }
  return arg;
}

AlgebraPtr algebra(const json& j, const std::string& where) {
  if (j.is_string()) {
    try {
      return build_algebra(j.get<std::string>());
    } catch (const SpecError& e) {
      fail(where, e.what());
    }
  }
  if (!j.is_object()) fail(where, "expected a builder name or an algebra object");
  if (j.contains("builder")) return algebra(j["builder"], at(where, "builder"));
  if (j.contains("tensor")) {
    const auto& t = j["tensor"];
    if (!t.is_array() || t.size() != 2) fail(at(where, "tensor"), "expected two algebra specs");
    return tensor_product(algebra(t[0], at(at(where, "tensor"), 0)), algebra(t[1], at(at(where, "tensor"), 1)));
  }
  return explicit_algebra(j, where);
}

Vec element(const Superalgebra& alg, const json& j, const std::string& where) {
  Vec v = Vec::Zero(alg.dim());
  if (j.is_string()) {
    try {
      v(alg.index_of(j.get<std::string>())) = 1.0;
    } catch (const SpecError& e) {
      fail(where, e.what());
    }
    return v;
  }
  if (j.is_number() || (j.is_array() && j.size() == 2 && j[0].is_number())) {
    return scalar(j, where) * alg.unit_vector();
  }
  if (!j.is_object()) fail(where, "expected a label, a scalar or {label: coefficient}");
  for (auto it = j.begin(); it != j.end(); ++it) {
    int i = -1;
    try {
      i = alg.index_of(it.key());
    } catch (const SpecError& e) {
      fail(at(where, it.key()), e.what());
    }
    v(i) += scalar(it.value(), at(where, it.key()));
  }
  return v;
}

json element_json(const Superalgebra& alg, const Vec& v, double floor) {
  json out = json::object();
  for (int i = 0; i < alg.dim(); ++i)
    if (std::abs(v(i)) >= floor) out[alg.label(i)] = scalar_json(v(i), floor);
  return out;
}

std::vector<Vec> polynomial(const Superalgebra& alg, const json& j, const std::string& where) {
  if (!j.is_array() || (j.size() == 2 && j[0].is_number())) return {element(alg, j, where)};
  std::vector<Vec> out;
  for (size_t k = 0; k < j.size(); ++k) out.push_back(element(alg, j[k], at(where, k)));
  if (out.empty()) fail(where, "empty polynomial");
  return out;
}

Mat matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array of rows");
  const size_t n = j.size();
  Mat m(n, n);
  for (size_t r = 0; r < n; ++r) {
    if (!j[r].is_array() || j[r].size() != n) fail(at(where, r), "expected a row of length " + std::to_string(n));
    for (size_t c = 0; c < n; ++c) m(r, c) = scalar(j[r][c], at(at(where, r), c));
  }
  return m;
}

SystemSpec system(const json& j, double tol, const std::string& where) {
  SystemSpec out;
  if (!j.is_object()) fail(where, "expected {\"algebra\": ..., \"form\": ...}");
  out.alg = algebra(field(j, "algebra", where), at(where, "algebra"));
  const std::string fw = at(where, "form");
  const auto& f = field(j, "form", where);
  if (!f.is_object()) fail(fw, "expected an object");
  if (!f.contains("kind") || !f["kind"].is_string()) fail(fw, "missing string field 'kind'");
  out.form_kind = f["kind"].get<std::string>();
  try {
    if (out.form_kind == "canonical") {
      out.omega = canonical_form(out.alg, tol);
    } else if (out.form_kind == "quantum") {
      const double hbar = f.contains("hbar") ? real(f["hbar"], at(fw, "hbar")) : 1.0;
      if (hbar <= 0.0) fail(at(fw, "hbar"), "hbar must be positive");
      out.omega = quantum_form(out.alg, hbar, tol);
    } else if (out.form_kind == "scaled") {
      out.omega = scaled_canonical_form(out.alg, scalar(field(f, "b", fw), at(fw, "b")), tol);
    } else if (out.form_kind == "fermionic") {
      out.omega = fermionic_form(out.alg, matrix(field(f, "g", fw), at(fw, "g")), tol);
    } else if (out.form_kind == "explicit") {
      const std::string sp = f.contains("space") ? f["space"].get<std::string>() : "full";
      SpacePtr space;
      if (sp == "full") {
        space = DerivationSpace::full(out.alg, tol);
      } else if (sp == "inner") {
        space = DerivationSpace::inner(out.alg, tol);
      } else {
        fail(at(fw, "space"), "expected \"full\" or \"inner\"");
      }
      const int degree = f.contains("degree") ? integer(f["degree"], at(fw, "degree")) : 2;
      const int parity = f.contains("parity") ? integer(f["parity"], at(fw, "parity")) : 0;
      Form w(space, degree, parity);
      const auto& comps = field(f, "components", fw);
      if (!comps.is_array()) fail(at(fw, "components"), "expected an array");
      for (size_t e = 0; e < comps.size(); ++e) {
        const std::string cw = at(at(fw, "components"), e);
        const auto& args = field(comps[e], "args", cw);
        if (!args.is_array() || static_cast<int>(args.size()) != degree) fail(at(cw, "args"), "wrong number of arguments");
        std::vector<int> idx;
        for (size_t k = 0; k < args.size(); ++k) {
          idx.push_back(integer(args[k], at(at(cw, "args"), k)));
          check_index(idx.back(), space->size(), at(at(cw, "args"), k));
        }
        const auto loc = w.layout().locate(idx.data());
        if (loc.sign == 0) fail(cw, "argument tuple is identically zero by antisymmetry");
        w.comps().col(loc.slot) = double(loc.sign) * element(*out.alg, field(comps[e], "value", cw), at(cw, "value"));
      }
      out.omega = w;
    } else {
      fail(at(fw, "kind"), "unknown form kind '" + out.form_kind + "'");
    }
  } catch (const Located&) {
    throw;
  } catch (const SpecError& e) {
    fail(fw, e.what());
  }
  return out;
}

LieSpec lie(const json& j, const std::string& where) {
  LieSpec out;
  if (!j.is_object()) fail(where, "expected a Lie algebra object");
  if (j.contains("builder")) {
    const auto& b = j["builder"];
    if (!b.is_string()) fail(at(where, "builder"), "expected a string");
    const std::string name = b.get<std::string>();
    if (name == "su2") {
      out.g = LieAlgebra::su2(1.0);
    } else if (name == "su2-pauli") {
      out.g = LieAlgebra::su2(-1.0);
      out.pauli = true;
      if (j.contains("hbar")) out.hbar = real(j["hbar"], at(where, "hbar"));
    } else if (name.rfind("abelian:", 0) == 0) {
      int n = 0;
      try {
        n = std::stoi(name.substr(8));
      } catch (const std::exception&) {
        fail(at(where, "builder"), "bad dimension in '" + name + "'");
      }
      if (n < 1) fail(at(where, "builder"), "dimension must be positive");
      out.g = LieAlgebra::abelian(n);
    } else {
      fail(at(where, "builder"), "unknown Lie algebra builder '" + name + "'");
    }
  } else {
    const int n = integer(field(j, "dim", where), at(where, "dim"));
    if (n < 1) fail(at(where, "dim"), "dimension must be positive");
    out.g = LieAlgebra(n);
    const auto& sc = field(j, "structure", where);
    if (!sc.is_array()) fail(at(where, "structure"), "expected an array of [a, b, c, re, im]");
    for (size_t e = 0; e < sc.size(); ++e) {
      const std::string w = at(at(where, "structure"), e);
      const auto& t = sc[e];
      if (!t.is_array() || (t.size() != 4 && t.size() != 5)) fail(w, "expected [a, b, c, re, im]");
      const int a = integer(t[0], at(w, 0)), b = integer(t[1], at(w, 1)), c = integer(t[2], at(w, 2));
      check_index(a, n, at(w, 0));
      check_index(b, n, at(w, 1));
      check_index(c, n, at(w, 2));
      if (a == b) fail(w, "C_aa^c is zero by antisymmetry");
      out.g.set(a, b, c, cplx(real(t[3], at(w, 3)), t.size() == 5 ? real(t[4], at(w, 4)) : 0.0));
    }
  }
  if (j.contains("hamiltonians")) {
    const auto& h = j["hamiltonians"];
    if (!h.is_array() || static_cast<int>(h.size()) != out.g.dim)
      fail(at(where, "hamiltonians"), "expected one element per basis element");
    out.hamiltonians.assign(h.begin(), h.end());
  }
  if (j.contains("generators")) {
    const auto& g = j["generators"];
    if (!g.is_array() || static_cast<int>(g.size()) != out.g.dim)
      fail(at(where, "generators"), "expected one generator per basis element");
    out.generators.assign(g.begin(), g.end());
  }
  if (!out.pauli && out.hamiltonians.empty() && out.generators.empty())
    fail(where, "an action needs 'hamiltonians' or 'generators'");
  return out;
}

LieAlgebraAction action(const LieSpec& l, const SymplecticStructure& s) {
  if (l.pauli) return su2_pauli_action(s, l.hbar);
  const auto& alg = s.algebra();
  LieAlgebraAction act{l.g, {}, std::nullopt};
  if (!l.hamiltonians.empty()) {
    act.hamiltonians.emplace();
    for (size_t a = 0; a < l.hamiltonians.size(); ++a) {
      const Vec h = element(alg, l.hamiltonians[a], at("/hamiltonians", a));
      act.hamiltonians->push_back(h);
      if (l.generators.empty()) act.generators.push_back(s.hamiltonian(h));
    }
  }
  for (size_t a = 0; a < l.generators.size(); ++a) {
    const std::string w = at("/generators", a);
    const auto& g = l.generators[a];
    if (g.is_object() && g.contains("inner")) {
      act.generators.push_back(inner(s.space()->algebra(), element(alg, g["inner"], at(w, "inner")), s.tol()));
    } else if (g.is_object() && g.contains("matrix")) {
      const Mat m = matrix(g["matrix"], at(w, "matrix"));
      if (m.rows() != alg.dim()) fail(at(w, "matrix"), "matrix size does not match the algebra");
      act.generators.push_back({s.space()->algebra(), m, 0});
    } else {
      fail(w, "expected {\"inner\": element} or {\"matrix\": rows}");
    }
  }
  return act;
}

State state(const AlgebraPtr& alg, const json& j, const std::string& where) {
  try {
    if (j.is_string() && j.get<std::string>() == "mixed") return maximally_mixed(alg);
    if (j.is_object() && j.contains("pure")) {
      const auto& p = j["pure"];
      if (!p.is_array() || p.empty()) fail(at(where, "pure"), "expected an amplitude array");
      Vec v(p.size());
      for (size_t i = 0; i < p.size(); ++i) v(i) = scalar(p[i], at(at(where, "pure"), i));
      return pure_state(alg, v);
    }
    if (j.is_object() && j.contains("density")) return state_from_density(alg, matrix(j["density"], at(where, "density")));
    if (j.is_object() && j.contains("values")) return State{alg, element(*alg, j["values"], at(where, "values"))};
  } catch (const Located&) {
    throw;
  } catch (const SpecError& e) {
    fail(where, e.what());
  }
  fail(where, "expected \"mixed\", {\"pure\": ...}, {\"density\": ...} or {\"values\": ...}");
}

}  // namespace ncsymp::spec
