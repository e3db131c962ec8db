#pragma once

#include <vector>

#include "mil/exec.hpp"
#include "mil/harness/glyphs.hpp"
#include "mil/label_set.hpp"
#include "mil/rng.hpp"
#include "mil/tensor.hpp"

namespace mil::harness {

// One weakly labeled training example: a grayscale canvas and the set of
// distinct classes placed on it (positions and counts are not recorded —
// that is the point of the supervision).
struct SceneSample {
  Tensor3 image;  // (1, H, W), values in [0, 1]
  LabelSet label;
};

inline constexpr double kNoiseAmplitude = 0.1;

// One stamped glyph: class and top-left corner. Only tests ask for these;
// the label set is the sole supervision the trainer sees.
struct GlyphPlacement {
  int label = 0;
  int row = 0;
  int col = 0;
};

// Stamps num_glyphs uniformly chosen glyphs (with replacement across
// classes) at uniform non-clipping positions, intensity 1.0 merged by max,
// then adds uniform [0, kNoiseAmplitude) noise and clips to [0, 1].
// Placing one class twice still yields a single label. When placements is
// non-null it receives the stamped glyph list in stamp order.
SceneSample generate_scene(Rng& rng, const std::vector<GlyphTemplate>& glyphs,
                           int num_glyphs, int height, int width,
                           std::vector<GlyphPlacement>* placements = nullptr);

// count scenes from per-index split streams of base; sample i is the same
// whether generated serially, in parallel, or alone.
std::vector<SceneSample> generate_scenes(const Rng& base, int count,
                                         const std::vector<GlyphTemplate>& glyphs,
                                         int num_glyphs, int height, int width,
                                         Exec exec = Exec::serial);

}  // namespace mil::harness
