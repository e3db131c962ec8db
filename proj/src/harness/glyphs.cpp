#include "mil/harness/glyphs.hpp"

#include <functional>

#include "mil/errors.hpp"
#include "mil/rng.hpp"

namespace mil::harness {

namespace {

// Fixed internal seed: glyph identity is part of the task definition, not of
// any particular experiment.
constexpr std::uint64_t kGlyphSeed = 0x91f57a3d0c2eb461ull;

using Pattern = std::function<bool(int r, int c)>;

// Periodic textures, ordered so consecutive classes differ in orientation.
// Texture families are deliberately separable by small oriented kernels; a
// stencil made of sparse random strokes needs stroke *arrangements* to be
// told apart, which a two-layer net learns far more slowly.
const Pattern kTextures[] = {
    [](int, int c) { return c % 2 == 0; },                    // vertical stripes
    [](int r, int) { return r % 2 == 0; },                    // horizontal stripes
    [](int r, int c) { return (r / 2 + c / 2) % 2 == 0; },    // checkerboard
    [](int r, int c) { return (r + c) % 4 < 2; },             // diagonal stripes
    [](int r, int c) { return (r - c + 64) % 4 < 2; },        // anti-diagonal stripes
    [](int r, int c) { return r % 3 < 2 && c % 3 < 2; },      // dot grid
    [](int r, int c) { return (r / 2 + c / 2) % 3 == 0; },    // sparse checker
    [](int, int) { return true; },                            // solid block
};

void draw_stroke(GlyphTemplate& g, Rng& rng) {
  const int size = g.size;
  auto set = [&](int r, int c) {
    if (r >= 0 && r < size && c >= 0 && c < size) g.cells[std::size_t(r) * size + c] = 1;
  };
  switch (rng.below(4)) {
    case 0: {  // horizontal bar, 2 rows thick
      int r = int(rng.below(size - 1));
      for (int c = 0; c < size; ++c) {
        set(r, c);
        set(r + 1, c);
      }
      break;
    }
    case 1: {  // vertical bar
      int c = int(rng.below(size - 1));
      for (int r = 0; r < size; ++r) {
        set(r, c);
        set(r, c + 1);
      }
      break;
    }
    case 2:  // diagonal
      for (int r = 0; r < size; ++r) {
        set(r, r);
        set(r, r + 1);
      }
      break;
    default:  // anti-diagonal
      for (int r = 0; r < size; ++r) {
        set(r, size - 1 - r);
        set(r, size - 2 - r);
      }
      break;
  }
}

int filled(const GlyphTemplate& g) {
  int n = 0;
  for (auto cell : g.cells) n += cell;
  return n;
}

int hamming(const GlyphTemplate& a, const GlyphTemplate& b) {
  int d = 0;
  for (std::size_t i = 0; i < a.cells.size(); ++i) d += a.cells[i] != b.cells[i];
  return d;
}

bool admissible(const GlyphTemplate& g, const std::vector<GlyphTemplate>& set,
                int min_set, int min_distance) {
  if (filled(g) < min_set) return false;
  for (const GlyphTemplate& other : set)
    if (hamming(other, g) < min_distance) return false;
  return true;
}

}  // namespace

std::vector<GlyphTemplate> make_glyph_set(int num_classes, int size) {
  if (num_classes < 1 || size < 4)
    throw Error("glyph set needs num_classes >= 1 and size >= 4");
  const int cells = size * size;
  const int min_set = cells / 4;       // at least a quarter of the stencil lit
  const int min_distance = cells / 4;  // well separated, not merely distinct

  Rng rng = Rng(kGlyphSeed).split(std::uint64_t(size));
  std::vector<GlyphTemplate> set;
  set.reserve(num_classes);
  std::size_t next_texture = 0;
  for (int label = 1; label <= num_classes; ++label) {
    GlyphTemplate g{label, size, std::vector<std::uint8_t>(std::size_t(cells))};

    bool accepted = false;
    while (!accepted && next_texture < std::size(kTextures)) {
      const Pattern& pattern = kTextures[next_texture++];
      for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c)
          g.cells[std::size_t(r) * size + c] = pattern(r, c) ? 1 : 0;
      accepted = admissible(g, set, min_set, min_distance);
    }
    // classes beyond the texture list: random thick-stroke arrangements
    for (int attempt = 0; !accepted; ++attempt) {
      if (attempt == 10000) throw Error("could not draw a distinct glyph stencil");
      g.cells.assign(std::size_t(cells), 0);
      const int strokes = 2 + int(rng.below(2));
      for (int s = 0; s < strokes; ++s) draw_stroke(g, rng);
      accepted = admissible(g, set, min_set, min_distance);
    }
    set.push_back(std::move(g));
  }
  return set;
}

}  // namespace mil::harness
