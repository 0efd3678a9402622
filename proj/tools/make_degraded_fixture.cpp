// Writes the degraded-text PGM used by the enhancement tests: four glyphs with
// ink dropouts and salt-and-pepper speckle.
//
//   make_degraded_fixture OUT.pgm

#include <iostream>

#include "captchalab/glyphs/atlas.hpp"
#include "captchalab/imgcore/filter.hpp"
#include "captchalab/imgcore/pgm.hpp"

using namespace captchalab;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_degraded_fixture OUT.pgm\n";
    return 2;
  }
  imgcore::RasterImage img(160, 52);
  glyphs::render_text(glyphs::default_atlas(), "HZNF", 0, {10, 10}, 36, 2, 0, img);
  imgcore::Rng rng(1);
  for (auto& p : img.pixels()) {
    if (p == 0 && rng.next_float() < 0.1) p = 255;
  }
  img = imgcore::add_salt_pepper(img, 0.1, rng);
  imgcore::write_pgm(argv[1], img);
  return 0;
}
