#include "hc2/region.hpp"

#include <sstream>
#include <stdexcept>

#include "hc2/errors.hpp"

namespace hc2 {

Region::Region(int w, int h, Boundary b) : width(w), height(h), boundary(b) {
  if (w < 1 || h < 1) throw std::invalid_argument("region dimensions must be positive");
  if (b == Boundary::Toroidal && (w % 2 != 0 || h % 2 != 0))
    throw std::invalid_argument("toroidal regions need even width and height");
  if (w * h > 64)
    throw resource_cap_error("regions are limited to 64 cells");
}

Region Region::parse(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw format_error("region spec must be grid:WxH or torus:N");
  std::string kind = spec.substr(0, colon);
  std::string rest = spec.substr(colon + 1);
  try {
    if (kind == "torus") {
      auto x = rest.find('x');
      if (x == std::string::npos) return Region::torus(std::stoi(rest));
      return Region(std::stoi(rest.substr(0, x)),
                    std::stoi(rest.substr(x + 1)), Boundary::Toroidal);
    }
    if (kind == "grid") {
      auto x = rest.find('x');
      if (x == std::string::npos) throw format_error("grid spec needs WxH");
      return Region::grid(std::stoi(rest.substr(0, x)),
                          std::stoi(rest.substr(x + 1)));
    }
  } catch (const std::invalid_argument& e) {
    throw format_error(std::string("bad region spec: ") + e.what());
  }
  throw format_error("unknown region kind: " + kind);
}

std::string Region::to_string() const {
  std::ostringstream out;
  if (toroidal() && width == height) {
    out << "torus:" << width;
  } else {
    out << (toroidal() ? "torus:" : "grid:") << width << 'x' << height;
  }
  return out.str();
}

Configuration::Configuration(Region r) : region(r) {}

std::string Configuration::to_grid() const {
  std::string out;
  for (int y = region.height - 1; y >= 0; --y) {
    for (int x = 0; x < region.width; ++x)
      out.push_back(occupied(x, y) ? 'o' : '.');
    out.push_back('\n');
  }
  return out;
}

Configuration Configuration::from_grid(const std::string& text,
                                       Boundary boundary) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) throw format_error("empty grid literal");
  std::size_t w = lines[0].size();
  for (const std::string& l : lines)
    if (l.size() != w) throw format_error("ragged grid literal");
  Configuration c(Region(static_cast<int>(w), static_cast<int>(lines.size()),
                         boundary));
  for (std::size_t row = 0; row < lines.size(); ++row) {
    int y = static_cast<int>(lines.size() - 1 - row);
    for (std::size_t x = 0; x < w; ++x) {
      char ch = lines[row][x];
      if (ch == 'o' || ch == 'O')
        c.set(static_cast<int>(x), y);
      else if (ch != '.')
        throw format_error(std::string("bad grid character: ") + ch);
    }
  }
  return c;
}

bool is_independent(const Configuration& c) {
  const Region& r = c.region;
  for (int y = 0; y < r.height; ++y)
    for (int x = 0; x < r.width; ++x) {
      if (!c.occupied(x, y)) continue;
      // Right and up cover each adjacency once; wrap adds the seam pairs.
      int nx = x + 1;
      if (nx < r.width ? c.occupied(nx, y)
                       : (r.toroidal() && r.width > 1 && c.occupied(0, y)))
        return false;
      int ny = y + 1;
      if (ny < r.height ? c.occupied(x, ny)
                        : (r.toroidal() && r.height > 1 && c.occupied(x, 0)))
        return false;
    }
  return true;
}

Configuration checkerboard(Region r, int parity) {
  Configuration c(r);
  for (int v = 0; v < r.cells(); ++v)
    if (r.parity(v) == parity) c.set(v);
  return c;
}

}  // namespace hc2
