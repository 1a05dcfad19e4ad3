#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "resosc/rational.hpp"
#include "resosc/weyl.hpp"

namespace resosc {

/// Perturbative energy expansion E_n(g) = sum_k coeffs[k] g^k, exact.
struct EnergySeries {
  int level = 0;
  std::vector<Rational> coeffs;  // index k = 0..K

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// Wavefunction coefficient table c_m^{(n,k)} in the unnormalized monomial
/// basis; entries with order k above retained_order are dropped.
struct WavefunctionTable {
  int level = 0;
  int retained_order = 0;
  std::map<std::pair<int, int>, Rational> entries;  // (degree m, order k)

  Rational coeff(int degree, int order) const;
};

struct RsOptions {
  // Orders above the cap keep only energies; the full table stays below it.
  int table_cap = 200;
};

struct RsResult {
  EnergySeries energy;
  WavefunctionTable table;
};

/// Rayleigh-Schrodinger recursion for level n through order K, solving
///   (H0 - E^{(0)}) c^{(k)} = sum_{j=1..k} E^{(j)} c^{(k-j)} - V c^{(k-1)}
/// degree by degree. The m = n component fixes E^{(k)}; every other degree
/// divides by (m - n). Intermediate normalization: c_n^{(n,k)} = delta_{k0}.
RsResult rs_recursion(int level, int order, const RsOptions& opts = {});

/// Exact residual of the order-by-order eigenvalue system; true iff the
/// defining equations hold identically at every retained order.
bool check_eigen_residual(const RsResult& r);

struct CellCheck {
  int level = 0;
  int order = 0;
  bool match = false;
};

struct VerificationReport {
  std::vector<CellCheck> cells;  // 49 entries, (n, k) for n,k = 0..6
  int matched = 0;
  bool pass = false;
};

/// Compares against the embedded reference coefficients for levels 0..6,
/// orders 0..6. Throws MissingLevel / InsufficientOrder on bad input.
VerificationReport verify_table(const std::vector<EnergySeries>& series);

/// The 7x7 reference table of exact coefficients (rows n = 0..6, k = 0..6).
const std::array<std::array<Rational, 7>, 7>& reference_energy_table();

/// One "p/q" line per coefficient, '\n'-terminated. ASCII only.
std::string serialize_series(const EnergySeries& s);

/// Inverse of serialize_series; throws ParseError with line/column.
std::vector<Rational> parse_series(std::string_view text);

inline constexpr const char* kConventionTag = "table1-v1";

/// Cache file format: header "level=<n> order=<K> convention=table1-v1",
/// then one "E k p/q" line per energy coefficient, then optional
/// "c m k p/q" wavefunction lines.
std::string serialize_cache(const RsResult& r, bool include_wavefunction = false);

/// Throws ParseError (with line/column) on any corruption, including a
/// convention tag mismatch.
RsResult parse_cache(std::string_view text);

}  // namespace resosc
