#include "captchalab/extcaptcha/extcaptcha.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "captchalab/error.hpp"
#include "captchalab/imgcore/draw.hpp"
#include "captchalab/imgcore/pgm.hpp"
#include "captchalab/imgcore/rng.hpp"

namespace captchalab::extcaptcha {

using imgcore::Rect;
using imgcore::Rng;

namespace {

constexpr int kMaxPlacementAttempts = 1000;
constexpr int kMaxQuestionAttempts = 100;
constexpr int kMargin = 4;
constexpr std::uint8_t kObjectIntensity = 64;
constexpr std::uint8_t kWordIntensity = 0;

struct Center {
  double x;
  double y;
};

Center center(const Rect& r) { return {r.left + r.width / 2.0, r.top + r.height / 2.0}; }

double dist(Center a, Center b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

const PlacedObject& find_object(const Scene& scene, const std::string& label) {
  for (const auto& o : scene.objects) {
    if (o.label == label) return o;
  }
  throw InputError("question refers to object '" + label + "' not in the scene");
}

// Index minimising `score`, earliest index on ties.
template <typename Score>
std::size_t argmin_word(const Scene& scene, Score score) {
  if (scene.words.empty()) throw InputError("scene has no words");
  std::size_t best = 0;
  double best_score = score(scene.words[0]);
  for (std::size_t i = 1; i < scene.words.size(); ++i) {
    const double s = score(scene.words[i]);
    if (s < best_score) {
      best = i;
      best_score = s;
    }
  }
  return best;
}

std::string ordinal_word(int ordinal) {
  static constexpr std::string_view kWords[] = {"last",  "first",  "second", "third",
                                                "fourth", "fifth", "sixth",  "seventh",
                                                "eighth", "ninth", "tenth"};
  if (ordinal >= 0 && ordinal < static_cast<int>(std::size(kWords))) {
    return std::string(kWords[ordinal]);
  }
  return std::to_string(ordinal) + "th";
}

// Picks `count` distinct indices from [0, n) by partial Fisher-Yates.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count, Rng& rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next_below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  return idx;
}

Rect inflate(const Rect& r, int by) {
  return {r.left - by, r.top - by, r.width + 2 * by, r.height + 2 * by};
}

Rect place(int w, int h, const ExtOptions& opts, const std::vector<Rect>& taken, Rng& rng,
           const std::string& what) {
  if (w > opts.width || h > opts.height) {
    throw GenerationError("'" + what + "' does not fit the canvas");
  }
  for (int attempt = 0; attempt < kMaxPlacementAttempts; ++attempt) {
    const Rect r{rng.uniform_int(0, opts.width - w), rng.uniform_int(0, opts.height - h), w, h};
    const Rect padded = inflate(r, kMargin);
    if (std::none_of(taken.begin(), taken.end(),
                     [&](const Rect& t) { return padded.intersects(t); })) {
      return r;
    }
  }
  throw GenerationError("could not place '" + what + "' after " +
                        std::to_string(kMaxPlacementAttempts) + " attempts");
}

bool is_letters(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
  });
}

}  // namespace

SpriteDb::SpriteDb(std::vector<Sprite> entries) : entries_(std::move(entries)) {
  std::set<std::string> seen;
  for (const auto& s : entries_) {
    if (s.label.empty()) throw InputError("sprite with empty label");
    if (!seen.insert(s.label).second) throw InputError("duplicate sprite label '" + s.label + "'");
    if (s.bitmap.ink_count() == 0) throw InputError("sprite '" + s.label + "' has no ink");
  }
}

SpriteDb load_sprite_db(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw InputError("cannot open " + (dir / "manifest.json").string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed sprite manifest: ") + e.what());
  }
  if (!manifest.is_array()) throw InputError("sprite manifest must be a JSON array");
  std::vector<Sprite> entries;
  for (const auto& item : manifest) {
    if (!item.is_object() || !item.contains("label") || !item.contains("file") ||
        !item["label"].is_string() || !item["file"].is_string()) {
      throw InputError("sprite manifest entries need string 'label' and 'file'");
    }
    try {
      const auto img = imgcore::read_pgm(dir / item["file"].get<std::string>());
      entries.push_back({item["label"].get<std::string>(), imgcore::threshold_below(img, 128)});
    } catch (const CodecError& e) {
      throw InputError("sprite '" + item["label"].get<std::string>() + "': " + e.what());
    }
  }
  return SpriteDb(std::move(entries));
}

std::vector<std::string> parse_wordlist(std::string_view text) {
  std::vector<std::string> words;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    if (line.empty()) continue;
    if (!is_letters(line)) {
      throw InputError("word on line " + std::to_string(line_no) + " is not ASCII letters: '" + line + "'");
    }
    words.push_back(line);
  }
  return words;
}

std::vector<std::string> load_wordlist(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open wordlist " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_wordlist(ss.str());
}

double guess_probability(int n, int l) {
  if (n < 1) throw DomainError("guess_probability needs n >= 1");
  if (l < 0) throw DomainError("guess_probability needs l >= 0");
  return std::pow(1.0 / n, l);
}

double word_guess_probability(int m, int l) {
  if (m < 1) throw DomainError("word_guess_probability needs m >= 1");
  if (l < 0) throw DomainError("word_guess_probability needs l >= 0");
  return std::pow(1.0 / m, l);
}

std::string_view template_name(Template t) {
  switch (t) {
    case Template::NearestToObject: return "nearest_to_object";
    case Template::FarthestFromObject: return "farthest_from_object";
    case Template::TopmostWord: return "topmost_word";
    case Template::BottommostWord: return "bottommost_word";
    case Template::LeftmostWord: return "leftmost_word";
    case Template::RightmostWord: return "rightmost_word";
    case Template::BetweenObjects: return "between_objects";
  }
  return "unknown";
}

std::size_t resolve_word(const Scene& scene, const QuestionSpec& q) {
  switch (q.template_id) {
    case Template::NearestToObject: {
      const Center c = center(find_object(scene, q.object_a).bbox);
      return argmin_word(scene, [&](const PlacedWord& w) { return dist(center(w.bbox), c); });
    }
    case Template::FarthestFromObject: {
      const Center c = center(find_object(scene, q.object_a).bbox);
      return argmin_word(scene, [&](const PlacedWord& w) { return -dist(center(w.bbox), c); });
    }
    case Template::TopmostWord:
      return argmin_word(scene, [](const PlacedWord& w) { return center(w.bbox).y; });
    case Template::BottommostWord:
      return argmin_word(scene, [](const PlacedWord& w) { return -center(w.bbox).y; });
    case Template::LeftmostWord:
      return argmin_word(scene, [](const PlacedWord& w) { return center(w.bbox).x; });
    case Template::RightmostWord:
      return argmin_word(scene, [](const PlacedWord& w) { return -center(w.bbox).x; });
    case Template::BetweenObjects: {
      const Center a = center(find_object(scene, q.object_a).bbox);
      const Center b = center(find_object(scene, q.object_b).bbox);
      const Center mid{(a.x + b.x) / 2.0, (a.y + b.y) / 2.0};
      return argmin_word(scene, [&](const PlacedWord& w) { return dist(center(w.bbox), mid); });
    }
  }
  throw InputError("unknown question template");
}

char resolve_answer(const Scene& scene, const QuestionSpec& q) {
  const std::string& word = scene.words[resolve_word(scene, q)].word;
  if (q.ordinal == 0) return word.back();
  if (q.ordinal < 1 || q.ordinal > static_cast<int>(word.size())) {
    throw InputError("ordinal " + std::to_string(q.ordinal) + " outside word '" + word + "'");
  }
  return word[static_cast<std::size_t>(q.ordinal - 1)];
}

std::string render_question(const QuestionSpec& q) {
  const std::string head = "Type the " + ordinal_word(q.ordinal) + " letter of the word ";
  switch (q.template_id) {
    case Template::NearestToObject: return head + "closest to the " + q.object_a + ".";
    case Template::FarthestFromObject: return head + "farthest from the " + q.object_a + ".";
    case Template::TopmostWord: return head + "nearest the top of the picture.";
    case Template::BottommostWord: return head + "nearest the bottom of the picture.";
    case Template::LeftmostWord: return head + "furthest to the left.";
    case Template::RightmostWord: return head + "furthest to the right.";
    case Template::BetweenObjects:
      return head + "lying between the " + q.object_a + " and the " + q.object_b + ".";
  }
  return head;
}

int distinct_characters(const Scene& scene) {
  std::set<char> chars;
  for (const auto& w : scene.words) chars.insert(w.word.begin(), w.word.end());
  return static_cast<int>(chars.size());
}

ExtChallenge generate_challenge(const SpriteDb& db, const std::vector<std::string>& wordlist,
                                const glyphs::GlyphAtlas& atlas, std::uint64_t seed,
                                const ExtOptions& opts) {
  if (opts.k_objects < 0 || opts.m_words < 1 || opts.l_questions < 0) {
    throw InputError("need k_objects >= 0, m_words >= 1, l_questions >= 0");
  }
  if (db.size() < static_cast<std::size_t>(opts.k_objects)) {
    throw InputError("sprite database has " + std::to_string(db.size()) + " entries, need " +
                     std::to_string(opts.k_objects));
  }
  const std::set<std::string> unique_words(wordlist.begin(), wordlist.end());
  if (unique_words.size() != wordlist.size()) throw InputError("wordlist has duplicate words");
  if (wordlist.size() < static_cast<std::size_t>(opts.m_words)) {
    throw InputError("wordlist has " + std::to_string(wordlist.size()) + " words, need " +
                     std::to_string(opts.m_words));
  }
  for (const auto& w : wordlist) {
    if (!is_letters(w)) throw InputError("word '" + w + "' is not ASCII letters");
  }

  Rng rng(seed);
  ExtChallenge ch;
  ch.seed = seed;
  ch.image = imgcore::RasterImage(opts.width, opts.height, imgcore::kWhite);

  const auto object_idx = sample_indices(db.size(), static_cast<std::size_t>(opts.k_objects), rng);
  const auto word_idx = sample_indices(wordlist.size(), static_cast<std::size_t>(opts.m_words), rng);

  std::vector<Rect> taken;
  for (std::size_t i : object_idx) {
    const Sprite& s = db.entries()[i];
    const Rect r = place(s.bitmap.width() * opts.object_scale, s.bitmap.height() * opts.object_scale,
                         opts, taken, rng, s.label);
    taken.push_back(r);
    imgcore::blit_bitmap(ch.image, s.bitmap, {r.left, r.top}, kObjectIntensity, opts.object_scale);
    ch.scene.objects.push_back({s.label, r});
  }
  for (std::size_t i : word_idx) {
    const std::string& word = wordlist[i];
    const int font = static_cast<int>(rng.next_below(glyphs::kFontCount));
    const Rect r = place(static_cast<int>(word.size()) * glyphs::kGlyphWidth, glyphs::kGlyphHeight,
                         opts, taken, rng, word);
    taken.push_back(r);
    glyphs::render_text(atlas, word, font, {r.left, r.top}, glyphs::kGlyphWidth, 1, kWordIntensity,
                        ch.image);
    ch.scene.words.push_back({word, r});
  }

  const int k = static_cast<int>(ch.scene.objects.size());
  for (int qi = 0; qi < opts.l_questions; ++qi) {
    bool done = false;
    for (int attempt = 0; attempt < kMaxQuestionAttempts && !done; ++attempt) {
      QuestionSpec q;
      q.template_id = static_cast<Template>(rng.next_below(kTemplateCount));
      const bool needs_one = q.template_id == Template::NearestToObject ||
                             q.template_id == Template::FarthestFromObject;
      const bool needs_two = q.template_id == Template::BetweenObjects;
      if ((needs_one && k < 1) || (needs_two && k < 2)) continue;
      if (needs_one || needs_two) {
        const auto picks = sample_indices(static_cast<std::size_t>(k), needs_two ? 2 : 1, rng);
        q.object_a = ch.scene.objects[picks[0]].label;
        if (needs_two) q.object_b = ch.scene.objects[picks[1]].label;
      }
      const std::string& word = ch.scene.words[resolve_word(ch.scene, q)].word;
      q.ordinal = needs_two ? 0 : rng.uniform_int(1, static_cast<int>(word.size()));
      q.rendered_text = render_question(q);
      if (lower(q.rendered_text).find(lower(word)) != std::string::npos) continue;
      q.answer_char = resolve_answer(ch.scene, q);
      ch.expected_answer.push_back(q.answer_char);
      ch.questions.push_back(std::move(q));
      done = true;
    }
    if (!done) throw GenerationError("could not phrase question " + std::to_string(qi + 1));
  }

  ch.guess = {distinct_characters(ch.scene), static_cast<int>(ch.questions.size()),
              static_cast<int>(ch.scene.words.size())};
  ch.char_prob = guess_probability(ch.guess.n, ch.guess.l);
  ch.word_prob = word_guess_probability(ch.guess.m, ch.guess.l);
  return ch;
}

bool check_answer(const ExtChallenge& ch, std::string_view submitted) {
  return submitted == ch.expected_answer;
}

nlohmann::json to_json(const ExtChallenge& ch, bool reveal) {
  nlohmann::json questions = nlohmann::json::array();
  for (const auto& q : ch.questions) {
    nlohmann::json jq = {{"template", template_name(q.template_id)},
                         {"ordinal", q.ordinal},
                         {"text", q.rendered_text}};
    if (!q.object_a.empty()) jq["object_a"] = q.object_a;
    if (!q.object_b.empty()) jq["object_b"] = q.object_b;
    if (reveal) jq["answer_char"] = std::string(1, q.answer_char);
    questions.push_back(std::move(jq));
  }
  nlohmann::json j = {
      {"seed", ch.seed},
      {"width", ch.image.width()},
      {"height", ch.image.height()},
      {"questions", std::move(questions)},
      {"n", ch.guess.n},
      {"l", ch.guess.l},
      {"m", ch.guess.m},
      {"char_prob", ch.char_prob},
      {"word_prob", ch.word_prob},
  };
  if (reveal) {
    j["expected_answer"] = ch.expected_answer;
    auto box = [](const Rect& r) { return nlohmann::json{r.left, r.top, r.width, r.height}; };
    nlohmann::json objects = nlohmann::json::array();
    for (const auto& o : ch.scene.objects) objects.push_back({{"label", o.label}, {"bbox", box(o.bbox)}});
    nlohmann::json words = nlohmann::json::array();
    for (const auto& w : ch.scene.words) words.push_back({{"word", w.word}, {"bbox", box(w.bbox)}});
    j["placed_objects"] = std::move(objects);
    j["placed_words"] = std::move(words);
  }
  return j;
}

}  // namespace captchalab::extcaptcha
