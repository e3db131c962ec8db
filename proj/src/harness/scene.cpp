#include "mil/harness/scene.hpp"

#include <algorithm>

#include "mil/errors.hpp"

namespace mil::harness {

SceneSample generate_scene(Rng& rng, const std::vector<GlyphTemplate>& glyphs,
                           int num_glyphs, int height, int width,
                           std::vector<GlyphPlacement>* placements) {
  if (glyphs.empty()) throw Error("generate_scene needs a nonempty glyph set");
  const int g = glyphs.front().size;
  if (g > height || g > width) throw GlyphTooLargeForCanvasError(g, height, width);

  SceneSample sample;
  sample.image = Tensor3(1, height, width, 0.0);
  std::vector<int> placed;
  for (int n = 0; n < num_glyphs; ++n) {
    const GlyphTemplate& glyph = glyphs[rng.below(glyphs.size())];
    const int r0 = int(rng.below(height - g + 1));
    const int c0 = int(rng.below(width - g + 1));
    for (int r = 0; r < g; ++r)
      for (int c = 0; c < g; ++c)
        if (glyph.at(r, c)) sample.image.at(0, r0 + r, c0 + c) = 1.0;
    placed.push_back(glyph.label);
    if (placements) placements->push_back({glyph.label, r0, c0});
  }
  for (double& v : sample.image.data())
    v = std::clamp(v + kNoiseAmplitude * rng.uniform(), 0.0, 1.0);
  sample.label = LabelSet(std::move(placed));
  return sample;
}

std::vector<SceneSample> generate_scenes(const Rng& base, int count,
                                         const std::vector<GlyphTemplate>& glyphs,
                                         int num_glyphs, int height, int width, Exec exec) {
  std::vector<SceneSample> scenes(count);
  parallel_for(exec, std::size_t(count), [&](std::size_t i) {
    Rng rng = base.split(i);
    scenes[i] = generate_scene(rng, glyphs, num_glyphs, height, width);
  });
  return scenes;
}

}  // namespace mil::harness
