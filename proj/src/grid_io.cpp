#include "tubekit/grid_io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace tubekit {

namespace {

constexpr char kHex[] = "0123456789abcdef";

std::string encode(const BitVector& bits) {
  std::string out;
  out.reserve((bits.size() + 3) / 4);
  for (std::size_t i = 0; i < bits.size(); i += 4) {
    unsigned digit = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      digit <<= 1;
      if (i + b < bits.size() && bits.test(i + b)) digit |= 1;
    }
    out.push_back(kHex[digit]);
  }
  return out;
}

void decode(const std::string& hex, BitVector& bits) {
  const std::size_t expected = (bits.size() + 3) / 4;
  if (hex.size() != expected)
    throw ParseError("hex payload has " + std::to_string(hex.size()) + " digits, expected " + std::to_string(expected));
  for (std::size_t d = 0; d < hex.size(); ++d) {
    const char c = hex[d];
    unsigned digit;
    if (c >= '0' && c <= '9')
      digit = static_cast<unsigned>(c - '0');
    else if (c >= 'a' && c <= 'f')
      digit = static_cast<unsigned>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F')
      digit = static_cast<unsigned>(c - 'A' + 10);
    else
      throw ParseError(std::string("invalid hex digit '") + c + "'");
    for (std::size_t b = 0; b < 4; ++b) {
      const bool on = (digit >> (3 - b)) & 1u;
      const std::size_t idx = d * 4 + b;
      if (idx >= bits.size()) {
        if (on) throw ParseError("nonzero padding bits in hex payload");
        continue;
      }
      bits.set(idx, on);
    }
  }
}

struct Header {
  int dim = 0;
  int m = 0;
  Rational lo, hi;
};

Header read_header(std::istream& in) {
  std::string line;
  while (std::getline(in, line) && line.find_first_not_of(" \t\r") == std::string::npos) {
  }
  if (!in && line.empty()) throw ParseError("missing gridset header");
  std::istringstream ls(line);
  std::string tag, dim, m, lo, hi, extra;
  ls >> tag >> dim >> m >> lo >> hi;
  if (tag != "gridset" || hi.empty() || (ls >> extra)) throw ParseError("bad gridset header: '" + line + "'");
  Header h;
  if (dim != "1" && dim != "2") throw ParseError("gridset dimension must be 1 or 2");
  h.dim = dim[0] - '0';
  try {
    h.m = std::stoi(header_value(m, "m"));
  } catch (const std::logic_error&) {
    throw ParseError("bad resolution in header: '" + line + "'");
  }
  h.lo = parse_rational(header_value(lo, "lo"));
  h.hi = parse_rational(header_value(hi, "hi"));
  return h;
}

std::string read_payload(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing hex payload");
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
  return line;
}

}  // namespace

std::string header_value(const std::string& token, const std::string& key) {
  const auto eq = token.find('=');
  if (eq == std::string::npos || token.substr(0, eq) != key)
    throw ParseError("expected '" + key + "=...' but found '" + token + "'");
  return token.substr(eq + 1);
}

void write_gridset(std::ostream& out, const GridSet1D& s) {
  out << "gridset 1 m=" << s.m() << " lo=" << format_rational(s.lo()) << " hi=" << format_rational(s.hi()) << "\n"
      << encode(s.bits()) << "\n";
}

void write_gridset(std::ostream& out, const GridSet2D& s) {
  out << "gridset 2 m=" << s.m() << " lo=" << format_rational(s.lo()) << " hi=" << format_rational(s.hi()) << "\n"
      << encode(s.bits()) << "\n";
}

std::string to_text(const GridSet1D& s) {
  std::ostringstream os;
  write_gridset(os, s);
  return os.str();
}

std::string to_text(const GridSet2D& s) {
  std::ostringstream os;
  write_gridset(os, s);
  return os.str();
}

AnyGridSet read_gridset(std::istream& in) {
  const Header h = read_header(in);
  const std::string payload = read_payload(in);
  try {
    if (h.dim == 1) {
      GridSet1D s = GridSet1D::on(h.m, h.lo, h.hi);
      decode(payload, s.bits());
      return s;
    }
    GridSet2D s = GridSet2D::on(h.m, h.lo, h.hi);
    decode(payload, s.bits());
    return s;
  } catch (const DomainError& e) {
    throw ParseError(std::string("bad gridset domain: ") + e.what());
  }
}

GridSet1D read_gridset_1d(std::istream& in) {
  auto any = read_gridset(in);
  if (auto* s = std::get_if<GridSet1D>(&any)) return std::move(*s);
  throw ParseError("expected a 1D grid set");
}

GridSet2D read_gridset_2d(std::istream& in) {
  auto any = read_gridset(in);
  if (auto* s = std::get_if<GridSet2D>(&any)) return std::move(*s);
  throw ParseError("expected a 2D grid set");
}

GridSet1D gridset_1d_from_text(const std::string& text) {
  std::istringstream is(text);
  return read_gridset_1d(is);
}

GridSet2D gridset_2d_from_text(const std::string& text) {
  std::istringstream is(text);
  return read_gridset_2d(is);
}

}  // namespace tubekit
