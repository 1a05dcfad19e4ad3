#include "resosc/series.hpp"

#include <cassert>
#include <charconv>
#include <sstream>

#include "resosc/errors.hpp"

namespace resosc {

Rational WavefunctionTable::coeff(int degree, int order) const {
  auto it = entries.find({degree, order});
  return it == entries.end() ? Rational() : it->second;
}

RsResult rs_recursion(int level, int order, const RsOptions& opts) {
  if (level < 0) throw std::invalid_argument("rs_recursion: negative level");
  if (order < 0) throw std::invalid_argument("rs_recursion: negative order");

  const Hamiltonian ham = build_hamiltonian();
  const int n = level;

  std::vector<MonomialVector> c(static_cast<std::size_t>(order) + 1);
  std::vector<Rational> energy(static_cast<std::size_t>(order) + 1);

  c[0] = MonomialVector::monomial(n);
  energy[0] = Rational(2 * n + 1, 2);

  for (int k = 1; k <= order; ++k) {
    // Known part of the right-hand side at this order:
    //   sum_{j=1..k-1} E^{(j)} c^{(k-j)} - V c^{(k-1)}.
    MonomialVector rhs = weyl_apply(ham.v, c[k - 1]);
    rhs *= Rational(-1);
    for (int j = 1; j < k; ++j) {
      MonomialVector scaled = c[k - j];
      scaled *= energy[j];
      rhs += scaled;
    }

    // Solvability at m = n (where the left side vanishes) fixes E^{(k)}.
    energy[k] = -rhs.coeff(n);

    MonomialVector ck;
    for (const auto& [m, val] : rhs.coeffs()) {
      if (m == n) continue;  // gauge: c_n^{(n,k)} = 0 for k >= 1
      assert(m - n != 0 && "zero denominator away from m = n");
      ck.add(m, val / Rational(m - n));
    }
    c[k] = std::move(ck);
  }

  RsResult result;
  result.energy.level = n;
  result.energy.coeffs = std::move(energy);
  result.table.level = n;
  result.table.retained_order = std::min(order, opts.table_cap);
  for (int k = 0; k <= result.table.retained_order; ++k)
    for (const auto& [m, val] : c[k].coeffs())
      result.table.entries.emplace(std::make_pair(m, k), val);
  return result;
}

bool check_eigen_residual(const RsResult& r) {
  const Hamiltonian ham = build_hamiltonian();
  const int kmax = r.table.retained_order;

  std::vector<MonomialVector> c(static_cast<std::size_t>(kmax) + 1);
  for (const auto& [key, val] : r.table.entries) {
    if (key.second <= kmax) c[key.second].add(key.first, val);
  }

  for (int k = 1; k <= kmax; ++k) {
    // (H0 - E^{(0)}) c^{(k)} + V c^{(k-1)} - sum_{j=1..k} E^{(j)} c^{(k-j)}
    MonomialVector residual = weyl_apply(ham.h0, c[k]);
    MonomialVector shift = c[k];
    shift *= r.energy.coeffs[0];
    residual -= shift;
    residual += weyl_apply(ham.v, c[k - 1]);
    for (int j = 1; j <= k; ++j) {
      MonomialVector scaled = c[k - j];
      scaled *= r.energy.coeffs[j];
      residual -= scaled;
    }
    if (!residual.empty()) return false;
  }
  return true;
}

const std::array<std::array<Rational, 7>, 7>& reference_energy_table() {
  static const std::array<std::array<Rational, 7>, 7> table = [] {
    const char* rows[7][7] = {
        {"1/2", "3/4", "-21/8", "333/16", "-30885/128", "916731/256",
         "-65518401/1024"},
        {"3/2", "15/4", "-165/8", "3585/16", "-408765/128", "14036355/256",
         "-1102501125/1024"},
        {"5/2", "39/4", "-567/8", "15561/16", "-2235795/128", "88733079/256",
         "-7928041569/1024"},
        {"7/2", "75/4", "-1269/8", "42375/16", "-7146225/128", "326056275/256",
         "-32402055375/1024"},
        {"9/2", "123/4", "-2331/8", "92313/16", "-17802045/128",
         "905732019/256", "-99842432409/1024"},
        {"11/2", "183/4", "-3819/8", "174345/16", "-38044245/128",
         "2165447079/256", "-262564394475/1024"},
        {"13/2", "255/4", "-5805/8", "299325/16", "-72274845/128",
         "4445205075/256", "-593254422225/1024"},
    };
    std::array<std::array<Rational, 7>, 7> t;
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) t[i][j] = *Rational::parse(rows[i][j]);
    return t;
  }();
  return table;
}

VerificationReport verify_table(const std::vector<EnergySeries>& series) {
  const auto& golden = reference_energy_table();

  std::array<const EnergySeries*, 7> by_level{};
  for (const auto& s : series) {
    if (s.level >= 0 && s.level <= 6) by_level[s.level] = &s;
  }
  for (int n = 0; n <= 6; ++n) {
    if (by_level[n] == nullptr) throw MissingLevel(n);
    if (by_level[n]->order() < 6)
      throw InsufficientOrder("verify_table: level " + std::to_string(n) +
                              " has order " +
                              std::to_string(by_level[n]->order()) +
                              ", need at least 6");
  }

  VerificationReport report;
  for (int n = 0; n <= 6; ++n) {
    for (int k = 0; k <= 6; ++k) {
      CellCheck cell;
      cell.level = n;
      cell.order = k;
      cell.match = (by_level[n]->coeffs[k] == golden[n][k]);
      if (cell.match) ++report.matched;
      report.cells.push_back(cell);
    }
  }
  report.pass = (report.matched == 49);
  return report;
}

std::string serialize_series(const EnergySeries& s) {
  std::string out;
  for (const auto& c : s.coeffs) {
    out += c.str();
    out += '\n';
  }
  return out;
}

namespace {

// Splits into lines, tracking 1-based line numbers; the final line may be
// unterminated.
struct LineReader {
  std::string_view text;
  std::size_t pos = 0;
  int line = 0;

  bool next(std::string_view& out) {
    if (pos >= text.size()) return false;
    ++line;
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      out = text.substr(pos);
      pos = text.size();
    } else {
      out = text.substr(pos, end - pos);
      pos = end + 1;
    }
    return true;
  }
};

Rational parse_rational_or_throw(std::string_view token, int line, int col) {
  auto q = Rational::parse(token);
  if (!q) throw ParseError("malformed rational '" + std::string(token) + "'",
                           line, col);
  return *q;
}

std::vector<std::string_view> split_fields(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

int parse_int_field(std::string_view tok, int line, int col) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || value < 0)
    throw ParseError("malformed integer '" + std::string(tok) + "'", line, col);
  return value;
}

}  // namespace

std::vector<Rational> parse_series(std::string_view text) {
  std::vector<Rational> coeffs;
  LineReader reader{text};
  std::string_view line;
  while (reader.next(line)) {
    if (line.empty()) continue;
    coeffs.push_back(parse_rational_or_throw(line, reader.line, 1));
  }
  return coeffs;
}

std::string serialize_cache(const RsResult& r, bool include_wavefunction) {
  std::ostringstream out;
  out << "level=" << r.energy.level << " order=" << r.energy.order()
      << " convention=" << kConventionTag << "\n";
  for (int k = 0; k <= r.energy.order(); ++k)
    out << "E " << k << " " << r.energy.coeffs[k].str() << "\n";
  if (include_wavefunction) {
    for (const auto& [key, val] : r.table.entries)
      out << "c " << key.first << " " << key.second << " " << val.str() << "\n";
  }
  return out.str();
}

RsResult parse_cache(std::string_view text) {
  LineReader reader{text};
  std::string_view header;
  if (!reader.next(header)) throw ParseError("empty cache file", 1, 1);

  auto fields = split_fields(header);
  if (fields.size() != 3) throw ParseError("malformed cache header", 1, 1);

  auto expect_kv = [&](std::string_view field, std::string_view key) {
    if (field.substr(0, key.size()) != key)
      throw ParseError("expected '" + std::string(key) + "' in header", 1, 1);
    return field.substr(key.size());
  };
  const int level = parse_int_field(expect_kv(fields[0], "level="), 1, 1);
  const int order = parse_int_field(expect_kv(fields[1], "order="), 1, 1);
  const std::string_view tag = expect_kv(fields[2], "convention=");
  if (tag != kConventionTag)
    throw ParseError("unknown convention tag '" + std::string(tag) + "'", 1, 1);

  RsResult r;
  r.energy.level = level;
  r.energy.coeffs.assign(static_cast<std::size_t>(order) + 1, Rational());
  r.table.level = level;
  r.table.retained_order = 0;
  std::vector<bool> seen(static_cast<std::size_t>(order) + 1, false);

  std::string_view line;
  while (reader.next(line)) {
    if (line.empty()) continue;
    auto f = split_fields(line);
    if (f[0] == "E") {
      if (f.size() != 3) throw ParseError("malformed E line", reader.line, 1);
      const int k = parse_int_field(f[1], reader.line, 3);
      if (k > order) throw ParseError("E order out of range", reader.line, 3);
      r.energy.coeffs[k] = parse_rational_or_throw(f[2], reader.line, 5);
      seen[k] = true;
    } else if (f[0] == "c") {
      if (f.size() != 4) throw ParseError("malformed c line", reader.line, 1);
      const int m = parse_int_field(f[1], reader.line, 3);
      const int k = parse_int_field(f[2], reader.line, 5);
      r.table.entries[{m, k}] = parse_rational_or_throw(f[3], reader.line, 7);
      r.table.retained_order = std::max(r.table.retained_order, k);
    } else {
      throw ParseError("unknown record '" + std::string(f[0]) + "'",
                       reader.line, 1);
    }
  }
  for (int k = 0; k <= order; ++k)
    if (!seen[k])
      throw ParseError("missing energy coefficient k=" + std::to_string(k),
                       reader.line, 1);
  return r;
}

}  // namespace resosc
