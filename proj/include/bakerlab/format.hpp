#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bakerlab/spectral.hpp"
#include "bakerlab/transport.hpp"

namespace bakerlab {

/// Shortest round-trip decimal form ("nan", "inf", "-inf" for non-finite values).
std::string format_double(double x);

/// `re,im,modulus,arg` with arg in [0, 2 pi), in the spectrum's (canonical) order.
void write_spectrum_csv(std::ostream& out, const Spectrum& s);
/// Parses what write_spectrum_csv writes; the header row is required.
std::vector<cplx> read_spectrum_csv(std::istream& in);

struct CountRow {
  std::int64_t n;
  double r;
  int count;
};

/// `N,r,count`
void write_counts_csv(std::ostream& out, const std::vector<CountRow>& rows);
/// `N,r,count,rescaled`
void write_profile_csv(std::ostream& out, const std::vector<ProfileRow>& rows);
/// single column `T`
void write_transmissions_csv(std::ostream& out, const TransportResult& r);

}  // namespace bakerlab
