#include "bakerlab/format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace bakerlab {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
  out << "re,im,modulus,arg\n";
  for (auto z : s.values) {
    out << format_double(z.real()) << ',' << format_double(z.imag()) << ',' << format_double(std::abs(z)) << ','
        << format_double(canonical_arg(z)) << '\n';
  }
}

std::vector<cplx> read_spectrum_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("re,im", 0) != 0) throw DomainError("spectrum CSV: missing header");
  std::vector<cplx> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string re, im;
    if (!std::getline(row, re, ',') || !std::getline(row, im, ',')) throw DomainError("spectrum CSV: bad row");
    out.emplace_back(std::stod(re), std::stod(im));
  }
  return out;
}

void write_counts_csv(std::ostream& out, const std::vector<CountRow>& rows) {
  out << "N,r,count\n";
  for (const auto& r : rows) out << r.n << ',' << format_double(r.r) << ',' << r.count << '\n';
}

void write_profile_csv(std::ostream& out, const std::vector<ProfileRow>& rows) {
  out << "N,r,count,rescaled\n";
  for (const auto& r : rows)
    out << r.n << ',' << format_double(r.r) << ',' << r.count << ',' << format_double(r.rescaled) << '\n';
}

void write_transmissions_csv(std::ostream& out, const TransportResult& r) {
  out << "T\n";
  for (double t : r.transmissions) out << format_double(t) << '\n';
}

}  // namespace bakerlab
