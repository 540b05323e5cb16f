#pragma once

// Square lattice with rough (top/bottom, dangling links) and smooth
// (left/right) boundaries. lx counts vertex columns, ly vertex rows; row 0 is
// the top row.
//
// Link ids, raster order:
//   top dangling links (lx), then for each vertex row r the horizontal links
//   (lx-1) followed, if r < ly-1, by the vertical links down to row r+1 (lx),
//   then the bottom dangling links (lx).
// Vertex (r, c) has id r*lx + c. Plaquette rows run 0..ly (row 0 sits above
// vertex row 0, between the top dangling links) with lx-1 columns; plaquette
// (pr, pc) has id pr*(lx-1) + pc.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace ghsc {

enum class LinkKind { kTopDangling, kHorizontal, kVertical, kBottomDangling };
enum class LinkClass { kBulk, kRough, kSmooth, kCorner };

const char* to_string(LinkKind k);
const char* to_string(LinkClass c);

struct Link {
  std::size_t id = 0;
  LinkKind kind = LinkKind::kHorizontal;
  // Vertex row/column of the upper (vertical, dangling) or left (horizontal) end.
  std::size_t row = 0;
  std::size_t col = 0;
  std::vector<std::size_t> vertices;    // one entry for dangling links
  std::vector<std::size_t> plaquettes;  // one entry on the smooth boundary
  bool rough() const { return vertices.size() < 2; }
  bool smooth() const { return plaquettes.size() < 2; }
  LinkClass link_class() const;
};

class LatticeGeometry {
 public:
  LatticeGeometry(std::size_t lx, std::size_t ly);

  std::size_t lx() const { return lx_; }
  std::size_t ly() const { return ly_; }
  std::size_t num_links() const { return links_.size(); }
  std::size_t num_vertices() const { return lx_ * ly_; }
  std::size_t num_plaquettes() const { return (lx_ - 1) * (ly_ + 1); }

  std::size_t vertex_id(std::size_t r, std::size_t c) const { return r * lx_ + c; }
  std::size_t plaquette_id(std::size_t pr, std::size_t pc) const { return pr * (lx_ - 1) + pc; }

  const std::vector<Link>& links() const { return links_; }
  const Link& link(std::size_t id) const { return links_.at(id); }
  const std::vector<std::size_t>& star(std::size_t v) const { return stars_.at(v); }
  const std::vector<std::size_t>& boundary(std::size_t p) const { return boundaries_.at(p); }
  LinkClass link_class(std::size_t id) const { return links_.at(id).link_class(); }

  // Links with two plaquettes (the decoherence support) with their plaquette
  // pair, and links with two vertices with their vertex pair.
  std::vector<std::pair<std::size_t, std::size_t>> dual_adjacency() const;
  std::vector<std::pair<std::size_t, std::size_t>> vertex_adjacency() const;

  std::vector<std::size_t> non_smooth_links() const;
  std::vector<std::size_t> non_rough_links() const;
  std::vector<std::size_t> smooth_links() const;
  std::vector<std::size_t> rough_links() const;

  // Column path from the top dangling link at column c down to the bottom one.
  std::vector<std::size_t> column_path(std::size_t c) const;
  std::vector<std::size_t> top_links() const;
  std::vector<std::size_t> bottom_links() const;

  // Vertices off the left and right columns.
  std::vector<std::size_t> interior_vertices() const;

 private:
  std::size_t lx_;
  std::size_t ly_;
  std::vector<Link> links_;
  std::vector<std::vector<std::size_t>> stars_;
  std::vector<std::vector<std::size_t>> boundaries_;
};

// Throws GeometryError for lx < 2 or ly < 1.
LatticeGeometry build_geometry(std::size_t lx, std::size_t ly);

struct LogicalSupports {
  std::vector<std::size_t> lx_support;  // top dangling links
  std::vector<std::size_t> lz_support;  // left column path
};
LogicalSupports logical_supports(const LatticeGeometry& geom);

struct SymmetrySupports {
  std::vector<std::size_t> rough_all;   // every dangling link
  std::vector<std::size_t> smooth_all;  // left and right column paths
};
SymmetrySupports symmetry_supports(const LatticeGeometry& geom);

// Text drawing with link ids; vertices are 'o'.
std::string render_ascii(const LatticeGeometry& geom);

}  // namespace ghsc
