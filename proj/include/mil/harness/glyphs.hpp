#pragma once

#include <cstdint>
#include <vector>

namespace mil::harness {

// Binary stencil standing in for one class's visual template. Glyph shapes
// depend only on (num_classes, size) — never on the experiment seed — so a
// checkpoint plus its class count always reproduces the same symbols.
struct GlyphTemplate {
  int label = 0;  // 1-based class
  int size = 0;   // side length G
  std::vector<std::uint8_t> cells;  // row-major, 0/1

  bool at(int r, int c) const { return cells[std::size_t(r) * size + c] != 0; }
  bool operator==(const GlyphTemplate&) const = default;
};

inline constexpr int kDefaultGlyphSize = 8;

// Procedurally generated stencils for classes 1..num_classes: a fixed
// family of periodic textures (stripes, checkerboards, dot grids) first,
// then random thick-stroke arrangements for any further classes. Every
// stencil has at least 25% of cells set and differs from every other in at
// least 25% of cells.
std::vector<GlyphTemplate> make_glyph_set(int num_classes, int size = kDefaultGlyphSize);

}  // namespace mil::harness
