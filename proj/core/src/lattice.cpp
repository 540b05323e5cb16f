#include "ghsc/lattice.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "ghsc/errors.hpp"

namespace ghsc {

const char* to_string(LinkKind k) {
  switch (k) {
    case LinkKind::kTopDangling: return "top";
    case LinkKind::kHorizontal: return "horizontal";
    case LinkKind::kVertical: return "vertical";
    case LinkKind::kBottomDangling: return "bottom";
  }
  return "?";
}

const char* to_string(LinkClass c) {
  switch (c) {
    case LinkClass::kBulk: return "bulk";
    case LinkClass::kRough: return "rough";
    case LinkClass::kSmooth: return "smooth";
    case LinkClass::kCorner: return "corner";
  }
  return "?";
}

LinkClass Link::link_class() const {
  if (rough() && smooth()) return LinkClass::kCorner;
  if (rough()) return LinkClass::kRough;
  if (smooth()) return LinkClass::kSmooth;
  return LinkClass::kBulk;
}

LatticeGeometry::LatticeGeometry(std::size_t lx, std::size_t ly) : lx_(lx), ly_(ly) {
  if (lx < 2) throw GeometryError("lx must be at least 2 (no plaquette column otherwise), got " + std::to_string(lx));
  if (ly < 1) throw GeometryError("ly must be at least 1, got " + std::to_string(ly));

  // Plaquettes in plaquette row pr flanking a vertical line at column c.
  auto flanking = [this](std::size_t pr, std::size_t c) {
    std::vector<std::size_t> ps;
    if (c >= 1) ps.push_back(plaquette_id(pr, c - 1));
    if (c + 1 < lx_) ps.push_back(plaquette_id(pr, c));
    return ps;
  };
  auto push = [this](LinkKind kind, std::size_t r, std::size_t c, std::vector<std::size_t> vs,
                     std::vector<std::size_t> ps) {
    Link l;
    l.id = links_.size();
    l.kind = kind;
    l.row = r;
    l.col = c;
    l.vertices = std::move(vs);
    l.plaquettes = std::move(ps);
    links_.push_back(std::move(l));
  };

  for (std::size_t c = 0; c < lx; ++c) push(LinkKind::kTopDangling, 0, c, {vertex_id(0, c)}, flanking(0, c));
  for (std::size_t r = 0; r < ly; ++r) {
    for (std::size_t c = 0; c + 1 < lx; ++c) {
      push(LinkKind::kHorizontal, r, c, {vertex_id(r, c), vertex_id(r, c + 1)},
           {plaquette_id(r, c), plaquette_id(r + 1, c)});
    }
    if (r + 1 < ly) {
      for (std::size_t c = 0; c < lx; ++c) {
        push(LinkKind::kVertical, r, c, {vertex_id(r, c), vertex_id(r + 1, c)}, flanking(r + 1, c));
      }
    }
  }
  for (std::size_t c = 0; c < lx; ++c) {
    push(LinkKind::kBottomDangling, ly - 1, c, {vertex_id(ly - 1, c)}, flanking(ly, c));
  }

  stars_.assign(num_vertices(), {});
  boundaries_.assign(num_plaquettes(), {});
  for (const auto& l : links_) {
    for (auto v : l.vertices) stars_[v].push_back(l.id);
    for (auto p : l.plaquettes) boundaries_[p].push_back(l.id);
  }
}

std::vector<std::pair<std::size_t, std::size_t>> LatticeGeometry::dual_adjacency() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& l : links_)
    if (l.plaquettes.size() == 2) out.emplace_back(l.plaquettes[0], l.plaquettes[1]);
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> LatticeGeometry::vertex_adjacency() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& l : links_)
    if (l.vertices.size() == 2) out.emplace_back(l.vertices[0], l.vertices[1]);
  return out;
}

namespace {

template <class Pred>
std::vector<std::size_t> select(const std::vector<Link>& links, Pred pred) {
  std::vector<std::size_t> out;
  for (const auto& l : links)
    if (pred(l)) out.push_back(l.id);
  return out;
}

}  // namespace

std::vector<std::size_t> LatticeGeometry::non_smooth_links() const {
  return select(links_, [](const Link& l) { return !l.smooth(); });
}
std::vector<std::size_t> LatticeGeometry::non_rough_links() const {
  return select(links_, [](const Link& l) { return !l.rough(); });
}
std::vector<std::size_t> LatticeGeometry::smooth_links() const {
  return select(links_, [](const Link& l) { return l.smooth(); });
}
std::vector<std::size_t> LatticeGeometry::rough_links() const {
  return select(links_, [](const Link& l) { return l.rough(); });
}
std::vector<std::size_t> LatticeGeometry::top_links() const {
  return select(links_, [](const Link& l) { return l.kind == LinkKind::kTopDangling; });
}
std::vector<std::size_t> LatticeGeometry::bottom_links() const {
  return select(links_, [](const Link& l) { return l.kind == LinkKind::kBottomDangling; });
}

std::vector<std::size_t> LatticeGeometry::column_path(std::size_t c) const {
  if (c >= lx_) throw GeometryError("column " + std::to_string(c) + " out of range");
  return select(links_, [c](const Link& l) { return l.kind != LinkKind::kHorizontal && l.col == c; });
}

std::vector<std::size_t> LatticeGeometry::interior_vertices() const {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < ly_; ++r)
    for (std::size_t c = 1; c + 1 < lx_; ++c) out.push_back(vertex_id(r, c));
  return out;
}

LatticeGeometry build_geometry(std::size_t lx, std::size_t ly) { return LatticeGeometry(lx, ly); }

LogicalSupports logical_supports(const LatticeGeometry& geom) { return {geom.top_links(), geom.column_path(0)}; }

SymmetrySupports symmetry_supports(const LatticeGeometry& geom) {
  auto smooth = geom.column_path(0);
  const auto right = geom.column_path(geom.lx() - 1);
  smooth.insert(smooth.end(), right.begin(), right.end());
  std::sort(smooth.begin(), smooth.end());
  return {geom.rough_links(), smooth};
}

std::string render_ascii(const LatticeGeometry& geom) {
  constexpr int kCell = 8;
  const std::size_t lx = geom.lx(), ly = geom.ly();
  // Index links by kind and position.
  std::vector<std::size_t> top, bottom, horiz((lx - 1) * ly), vert(lx * (ly > 0 ? ly - 1 : 0));
  for (const auto& l : geom.links()) {
    switch (l.kind) {
      case LinkKind::kTopDangling: top.push_back(l.id); break;
      case LinkKind::kBottomDangling: bottom.push_back(l.id); break;
      case LinkKind::kHorizontal: horiz[l.row * (lx - 1) + l.col] = l.id; break;
      case LinkKind::kVertical: vert[l.row * lx + l.col] = l.id; break;
    }
  }
  std::ostringstream os;
  auto id_row = [&](const std::vector<std::size_t>& ids) {
    for (std::size_t c = 0; c < lx; ++c) os << std::setw(c == 0 ? 3 : kCell) << ids[c];
    os << '\n';
  };
  auto bar_row = [&] {
    for (std::size_t c = 0; c < lx; ++c) os << std::setw(c == 0 ? 3 : kCell) << '|';
    os << '\n';
  };
  id_row(top);
  bar_row();
  for (std::size_t r = 0; r < ly; ++r) {
    os << "  o";
    for (std::size_t c = 0; c + 1 < lx; ++c) {
      std::ostringstream label;
      label << horiz[r * (lx - 1) + c];
      std::string s = label.str();
      const std::size_t left = (kCell - 1 - s.size()) / 2;
      os << std::string(left, '-') << s << std::string(kCell - 1 - s.size() - left, '-') << 'o';
    }
    os << '\n';
    bar_row();
    if (r + 1 < ly) {
      id_row(std::vector<std::size_t>(vert.begin() + r * lx, vert.begin() + (r + 1) * lx));
      bar_row();
    }
  }
  id_row(bottom);
  return os.str();
}

}  // namespace ghsc
