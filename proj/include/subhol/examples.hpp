#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "subhol/contact.hpp"

namespace subhol {

class ManifestError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Text form of a contact structure. Expressions are strings in the chart
/// grammar; after parsing they are stored in canonical printed form, so
/// emit(parse(emit(m))) reproduces emit(m) byte for byte.
struct Manifest {
  std::vector<std::string> coords;
  std::vector<std::string> theta;
  std::vector<std::vector<std::string>> frame;
  std::vector<std::vector<std::string>> gram;
  std::vector<std::string> basepoint;
  bool expect_K_contact = true;
  std::string note;  // optional, free text

  std::size_t n() const { return coords.size(); }
};

Manifest parse_manifest(std::string_view json_text);
std::string emit_manifest(const Manifest& m);
/// Parses every expression and validates the structure; throws ManifestError
/// for malformed input and StructureError and its subclasses for invalid geometry.
ContactStructure to_structure(const Manifest& m);
Manifest to_manifest(const ContactStructure& s, bool expect_K_contact, std::string note = {});

/// Cahen-Wallach pp-wave frame on R x R^{1,2s+1}, coordinates t, v, x1..x2s, u.
Manifest build_example1(int s);
/// Complex hyperbolic ball of complex dimension s in place of N_0, with
/// theta_0 = (1/2) sum (x dy - y dx)/(1 - |z|^2), H = sum x_i^2. Coordinates
/// t, v, x1..x2s, u. Throws std::logic_error if d theta_0 differs from the
/// Kaehler form.
Manifest build_example2(int s);
/// Complex structure of the ball on the frame V, X_1..X_2s, U (zero on V, U).
FunctionMatrix example2_complex_structure(int s);
/// Flat Heisenberg-type structure theta = dt + sum x_{2i-1} dx_{2i}, identity gram.
Manifest build_heisenberg(int m);
/// Heisenberg frame with a t-independent polynomial perturbation of the gram,
/// so the structure stays K-contact. Variant 1 is Lorentzian.
Manifest build_perturbed_heisenberg(int m, std::uint64_t seed, int variant);

}  // namespace subhol
