#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ncsymp/dynamics.hpp"
#include "ncsymp/extended.hpp"
#include "ncsymp/lie.hpp"
#include "ncsymp/report.hpp"
#include "ncsymp/symplectic.hpp"

namespace ncsymp::spec {

/// Parses JSON text; errors carry "<source>:line:column".
json parse(const std::string& text, const std::string& source);
/// Reads and parses a file.
json load_file(const std::string& path);
/// A string that looks like JSON is parsed, a readable path is loaded, anything
/// else is returned as a JSON string (a builder name or basis label).
json load_argument(const std::string& arg, const std::string& what);

/// "matrix:n" | "supermatrix:p|q" | "grassmann:n", {"builder": ...},
/// {"tensor": [a, b]} or an explicit algebra:
///   {"dim", "labels", "parity", "unit", "structure": [[i, j, k, re, im], ...],
///    "involution": [[i, j, re, im], ...]}
/// with e_i e_j = sum c_ij^k e_k and a* = S conj(a), S(i, j) from the involution list.
AlgebraPtr algebra(const json& j, const std::string& where = "");

/// Number, [re, im], a basis label, or {"label": coefficient, ...}.
Vec element(const Superalgebra& alg, const json& j, const std::string& where = "");
/// Array of element specs, coefficient k multiplying t^k; a single element is degree zero.
std::vector<Vec> polynomial(const Superalgebra& alg, const json& j, const std::string& where = "");
/// {label: coefficient} with negligible coefficients dropped.
json element_json(const Superalgebra& alg, const Vec& v, double floor = 1e-12);

/// Square complex matrix from nested arrays of numbers or [re, im].
Mat matrix(const json& j, const std::string& where = "");

/// {"algebra": ..., "form": {"kind": "canonical" | "quantum" | "scaled" | "fermionic" | "explicit", ...}}
///   quantum: "hbar"; scaled: "b"; fermionic: "g" (matrix);
///   explicit: "space": "full" | "inner", "degree" (default 2), "parity" (default 0),
///             "components": [{"args": [a, b], "value": element}, ...].
struct SystemSpec {
  AlgebraPtr alg;
  Form omega;
  std::string form_kind;
};
SystemSpec system(const json& j, double tol, const std::string& where = "");

/// {"builder": "su2" | "su2-pauli" | "abelian:n"} or {"dim", "structure": [[a, b, c, re, im], ...]},
/// plus optional "hamiltonians": [element, ...] and "generators": [{"inner": element} | {"matrix": ...}].
/// "su2-pauli" uses h_a = (hbar/2) sigma_a on the given structure.
struct LieSpec {
  LieAlgebra g;
  std::vector<json> hamiltonians;
  std::vector<json> generators;
  bool pauli = false;
  double hbar = 1.0;
};
LieSpec lie(const json& j, const std::string& where = "");
/// Resolves the action of a Lie spec on a symplectic structure.
LieAlgebraAction action(const LieSpec& l, const SymplecticStructure& s);

/// {"pure": [amplitudes]}, {"density": matrix}, "mixed", or {"values": element}.
State state(const AlgebraPtr& alg, const json& j, const std::string& where = "");

}  // namespace ncsymp::spec
