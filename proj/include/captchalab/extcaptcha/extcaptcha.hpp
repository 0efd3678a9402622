#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "captchalab/glyphs/atlas.hpp"
#include "captchalab/imgcore/image.hpp"

namespace captchalab::extcaptcha {

struct Sprite {
  std::string label;
  imgcore::BinaryImage bitmap;
};

// Object bitmaps the scene draws from. Labels are unique and non-empty;
// bitmaps carry at least one ink cell.
class SpriteDb {
 public:
  explicit SpriteDb(std::vector<Sprite> entries);
  const std::vector<Sprite>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::vector<Sprite> entries_;
};

// Reads `manifest.json` (array of {"label", "file"}) from `dir`; each file is
// a P5 PGM thresholded at 128. Throws InputError.
SpriteDb load_sprite_db(const std::filesystem::path& dir);

// One word per line; blank lines skipped. Words must be ASCII letters.
std::vector<std::string> parse_wordlist(std::string_view text);
std::vector<std::string> load_wordlist(const std::filesystem::path& path);

// P(all) = (1/n)^l: chance of guessing l questioned characters drawn from n
// distinct characters. Throws DomainError for n < 1 or l < 0.
double guess_probability(int n, int l);

// (1/m)^l: the same guess when the attacker only has to pick which of m
// words each question targets.
double word_guess_probability(int m, int l);

struct GuessModel {
  int n = 1;  // distinct characters across placed words
  int l = 0;  // questioned characters
  int m = 1;  // placed words
};

enum class Template {
  NearestToObject,
  FarthestFromObject,
  TopmostWord,
  BottommostWord,
  LeftmostWord,
  RightmostWord,
  BetweenObjects,
};
inline constexpr int kTemplateCount = 7;

std::string_view template_name(Template t);

struct QuestionSpec {
  Template template_id = Template::TopmostWord;
  std::string object_a;  // NearestToObject, FarthestFromObject, BetweenObjects
  std::string object_b;  // BetweenObjects
  int ordinal = 1;       // 1-based character position; 0 means last character
  std::string rendered_text;
  char answer_char = 0;
};

struct PlacedObject {
  std::string label;
  imgcore::Rect bbox;
};

struct PlacedWord {
  std::string word;
  imgcore::Rect bbox;
};

// Geometry the questions are resolved against.
struct Scene {
  std::vector<PlacedObject> objects;
  std::vector<PlacedWord> words;
};

struct ExtChallenge {
  imgcore::RasterImage image;
  Scene scene;
  std::vector<QuestionSpec> questions;
  std::string expected_answer;
  GuessModel guess;
  double char_prob = 0.0;
  double word_prob = 0.0;
  std::uint64_t seed = 0;
};

struct ExtOptions {
  int k_objects = 4;
  int m_words = 8;
  int l_questions = 5;
  int width = 320;
  int height = 240;
  int object_scale = 2;
};

// Index into scene.words of the word a question refers to. Distances are
// centre-to-centre Euclidean; ties go to the earlier placement. Throws
// InputError when a referenced object is not in the scene.
std::size_t resolve_word(const Scene& scene, const QuestionSpec& q);
// The character a question selects, or InputError when the ordinal falls
// outside the resolved word.
char resolve_answer(const Scene& scene, const QuestionSpec& q);

// Question wording for the given parameters.
std::string render_question(const QuestionSpec& q);

// Number of distinct characters (case-sensitive) across the scene's words.
int distinct_characters(const Scene& scene);

// Places k objects and m words without overlap (rejection sampling, at most
// 1000 attempts each), then asks l questions. Throws InputError when the
// inputs are too small and GenerationError when placement is exhausted.
ExtChallenge generate_challenge(const SpriteDb& db, const std::vector<std::string>& wordlist,
                                const glyphs::GlyphAtlas& atlas, std::uint64_t seed,
                                const ExtOptions& opts = {});

// Case-sensitive exact match.
bool check_answer(const ExtChallenge& ch, std::string_view submitted);

// Challenge description for clients; the answer and the scene layout are
// included only when `reveal` is set.
nlohmann::json to_json(const ExtChallenge& ch, bool reveal);

}  // namespace captchalab::extcaptcha
