#pragma once

// Text form of grid sets:
//
//   gridset <dim> m=<int> lo=<p/q> hi=<p/q>
//   <hex digits>
//
// The membership array (row-major in 2D) is packed four cells per hex digit, first cell in
// the most significant bit; trailing pad bits are zero. Lowercase on output, either case on input.

#include "tubekit/grid.hpp"

#include <iosfwd>
#include <string>
#include <variant>

namespace tubekit {

void write_gridset(std::ostream& out, const GridSet1D& s);
void write_gridset(std::ostream& out, const GridSet2D& s);

std::string to_text(const GridSet1D& s);
std::string to_text(const GridSet2D& s);

using AnyGridSet = std::variant<GridSet1D, GridSet2D>;

/// Reads one grid-set block (header plus hex line). Throws ParseError on malformed input.
AnyGridSet read_gridset(std::istream& in);
GridSet1D read_gridset_1d(std::istream& in);
GridSet2D read_gridset_2d(std::istream& in);

GridSet1D gridset_1d_from_text(const std::string& text);
GridSet2D gridset_2d_from_text(const std::string& text);

/// Splits "key=value" header tokens; throws ParseError when the key differs.
std::string header_value(const std::string& token, const std::string& key);

}  // namespace tubekit
