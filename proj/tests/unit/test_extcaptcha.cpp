#include <doctest.h>

#include <cctype>
#include <cmath>
#include <set>
#include <string>

#include "captchalab/error.hpp"
#include "captchalab/extcaptcha/extcaptcha.hpp"
#include "captchalab/imgcore/pgm.hpp"

using namespace captchalab;
using namespace captchalab::extcaptcha;
using imgcore::Rect;

namespace {

const SpriteDb& sprites() {
  static const auto db = load_sprite_db(std::string(CAPTCHALAB_DATA_DIR) + "/sprites");
  return db;
}

const std::vector<std::string>& words19() {
  static const auto w = load_wordlist(std::string(CAPTCHALAB_FIXTURE_DIR) + "/words19.txt");
  return w;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// The fixture words laid out by hand on a 320x240 canvas.
Scene fixture_scene() {
  Scene s;
  s.objects = {{"star", {140, 100, 32, 32}}, {"moon", {10, 200, 32, 32}},
               {"tree", {280, 10, 32, 32}}};
  s.words = {{"Comet", {10, 10, 60, 16}},   {"Moth", {120, 40, 48, 16}},
             {"Harp", {250, 120, 48, 16}},  {"salt", {200, 210, 48, 16}},
             {"jump", {100, 150, 48, 16}},  {"ember", {60, 90, 60, 16}},
             {"night", {20, 130, 60, 16}},  {"metal", {180, 70, 60, 16}}};
  return s;
}

}  // namespace

TEST_CASE("guess probabilities") {
  CHECK(rel(guess_probability(19, 5), 4.03861e-7) <= 1e-5);
  CHECK(rel(word_guess_probability(8, 5), 3.05176e-5) <= 1e-5);
  CHECK(guess_probability(19, 5) == doctest::Approx(4.0386107340619247e-07).epsilon(1e-12));
  CHECK(word_guess_probability(8, 5) == 3.0517578125e-05);
  for (int n : {1, 2, 7, 100}) CHECK(guess_probability(n, 0) == 1.0);
  CHECK(guess_probability(2, 3) == 0.125);
  CHECK(word_guess_probability(4, 2) == 0.0625);
  for (int l : {0, 1, 9}) CHECK(word_guess_probability(1, l) == 1.0);
  CHECK_THROWS_AS(guess_probability(0, 1), DomainError);
  CHECK_THROWS_AS(word_guess_probability(0, 1), DomainError);
  CHECK_THROWS_AS(guess_probability(3, -1), DomainError);
}

TEST_CASE("guess probability is strictly decreasing") {
  for (int l = 1; l <= 6; ++l)
    for (int n = 1; n < 40; ++n) CHECK(guess_probability(n + 1, l) < guess_probability(n, l));
  for (int n = 2; n < 30; ++n)
    for (int l = 0; l < 8; ++l) CHECK(guess_probability(n, l + 1) < guess_probability(n, l));
}

TEST_CASE("inputs load and validate") {
  CHECK(sprites().size() >= 4);
  CHECK(words19().size() == 8);
  CHECK(parse_wordlist("a\n\nBc \n") == std::vector<std::string>{"a", "Bc"});
  CHECK_THROWS_AS(parse_wordlist("ok\nno way\n"), InputError);
  CHECK_THROWS_AS(SpriteDb({{"a", imgcore::BinaryImage(2, 2, true)}, {"a", imgcore::BinaryImage(2, 2, true)}}),
                  InputError);
  CHECK_THROWS_AS(SpriteDb({{"", imgcore::BinaryImage(2, 2, true)}}), InputError);
  CHECK_THROWS_AS(SpriteDb({{"x", imgcore::BinaryImage(2, 2)}}), InputError);
  CHECK_THROWS_AS(load_sprite_db("/nonexistent"), InputError);

  ExtOptions too_many;
  too_many.k_objects = 50;
  CHECK_THROWS_AS(generate_challenge(sprites(), words19(), glyphs::default_atlas(), 1, too_many),
                  InputError);
  ExtOptions words;
  words.m_words = 9;
  CHECK_THROWS_AS(generate_challenge(sprites(), words19(), glyphs::default_atlas(), 1, words),
                  InputError);
  ExtOptions tiny;
  tiny.width = 40;
  tiny.height = 40;
  CHECK_THROWS_AS(generate_challenge(sprites(), words19(), glyphs::default_atlas(), 1, tiny),
                  GenerationError);
}

TEST_CASE("single word challenge") {
  ExtOptions o;
  o.k_objects = 1;
  o.m_words = 1;
  o.l_questions = 1;
  const auto ch = generate_challenge(sprites(), {"Zebra"}, glyphs::default_atlas(), 5, o);
  REQUIRE(ch.expected_answer.size() == 1);
  CHECK(std::string("Zebra").find(ch.expected_answer[0]) != std::string::npos);
  CHECK(ch.guess.n == 5);
  CHECK(ch.char_prob == doctest::Approx(0.2));
}

TEST_CASE("fixture wordlist gives the nineteen character probability") {
  const auto ch = generate_challenge(sprites(), words19(), glyphs::default_atlas(), 2024);
  CHECK(ch.guess.n == 19);
  CHECK(ch.guess.l == 5);
  CHECK(ch.guess.m == 8);
  CHECK(rel(ch.char_prob, 4.03861e-7) <= 1e-5);
  CHECK(rel(ch.word_prob, 3.05176e-5) <= 1e-5);
}

TEST_CASE("hand-placed scene resolves to Comlt") {
  const Scene s = fixture_scene();
  CHECK(distinct_characters(s) == 19);
  const std::vector<QuestionSpec> qs = {
      {Template::TopmostWord, "", "", 1, "", 0},          // Comet -> C
      {Template::NearestToObject, "star", "", 2, "", 0},  // jump, checked below
      {Template::LeftmostWord, "", "", 3, "", 0},         // Comet -> m
      {Template::BottommostWord, "", "", 3, "", 0},       // salt -> l
      {Template::RightmostWord, "", "", 0, "", 0},        // Harp -> p
  };
  CHECK(s.words[resolve_word(s, qs[0])].word == "Comet");
  CHECK(resolve_answer(s, qs[0]) == 'C');
  CHECK(s.words[resolve_word(s, qs[2])].word == "Comet");
  CHECK(resolve_answer(s, qs[2]) == 'm');
  CHECK(resolve_answer(s, qs[3]) == 'l');
  CHECK(s.words[resolve_word(s, qs[4])].word == "Harp");

  // Star centre (156,116); word centres by hand: jump (124,158) d=52.8,
  // ember (90,98) d=68.4, Moth (144,48) d=69.0.
  CHECK(s.words[resolve_word(s, qs[1])].word == "jump");
  QuestionSpec o{Template::FarthestFromObject, "tree", "", 2, "", 0};
  // Tree centre (296,26); night centre (50,138) is farthest.
  CHECK(s.words[resolve_word(s, o)].word == "night");
  QuestionSpec t{Template::BetweenObjects, "moon", "tree", 0, "", 0};
  // Midpoint (161,121); jump centre (124,158) is closest.
  CHECK(resolve_answer(s, t) == 'p');

  QuestionSpec second_o = qs[0];
  second_o.ordinal = 2;
  std::string answer;
  answer += resolve_answer(s, qs[0]);
  answer += resolve_answer(s, second_o);
  answer += resolve_answer(s, qs[2]);
  answer += resolve_answer(s, qs[3]);
  QuestionSpec last_of_salt = qs[3];
  last_of_salt.ordinal = 0;
  answer += resolve_answer(s, last_of_salt);
  CHECK(answer == "Comlt");
  CHECK(guess_probability(distinct_characters(s), 5) == doctest::Approx(4.03861e-7).epsilon(1e-5));

  QuestionSpec missing{Template::NearestToObject, "whale", "", 1, "", 0};
  CHECK_THROWS_AS(resolve_word(s, missing), InputError);
  QuestionSpec past{Template::TopmostWord, "", "", 9, "", 0};
  CHECK_THROWS_AS(resolve_answer(s, past), InputError);
}

TEST_CASE("ties go to the earlier placement") {
  Scene s;
  s.objects = {{"dot", {50, 50, 10, 10}}};
  s.words = {{"left", {20, 50, 10, 10}}, {"right", {80, 50, 10, 10}}};
  CHECK(resolve_word(s, {Template::NearestToObject, "dot", "", 1, "", 0}) == 0);
  CHECK(resolve_word(s, {Template::FarthestFromObject, "dot", "", 1, "", 0}) == 0);
  CHECK(resolve_word(s, {Template::TopmostWord, "", "", 1, "", 0}) == 0);
}

TEST_CASE("generated challenges are consistent") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto ch = generate_challenge(sprites(), words19(), glyphs::default_atlas(), seed);
    CHECK(ch.expected_answer.size() == ch.questions.size());
    CHECK(ch.image.width() == 320);
    CHECK(ch.image.height() == 240);

    std::vector<Rect> boxes;
    for (const auto& o : ch.scene.objects) boxes.push_back(o.bbox);
    for (const auto& w : ch.scene.words) boxes.push_back(w.bbox);
    for (std::size_t i = 0; i < boxes.size(); ++i)
      for (std::size_t j = i + 1; j < boxes.size(); ++j) CHECK(!boxes[i].intersects(boxes[j]));

    std::string replay;
    for (const auto& q : ch.questions) {
      replay += resolve_answer(ch.scene, q);
      CHECK(q.answer_char == replay.back());
      CHECK(q.rendered_text == render_question(q));
      auto lower = [](std::string x) {
        for (char& c : x) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return x;
      };
      const auto& word = ch.scene.words[resolve_word(ch.scene, q)].word;
      CHECK(lower(q.rendered_text).find(lower(word)) == std::string::npos);
    }
    CHECK(replay == ch.expected_answer);
    if (ch.guess.n >= ch.guess.m) {
      CHECK(ch.char_prob > 0.0);
      CHECK(ch.char_prob <= ch.word_prob);
      CHECK(ch.word_prob <= 1.0);
    }
  }
}

TEST_CASE("generation is deterministic") {
  const auto a = generate_challenge(sprites(), words19(), glyphs::default_atlas(), 77);
  const auto b = generate_challenge(sprites(), words19(), glyphs::default_atlas(), 77);
  CHECK(a.image == b.image);
  CHECK(a.expected_answer == b.expected_answer);
  CHECK(to_json(a, true) == to_json(b, true));
  const auto c = generate_challenge(sprites(), words19(), glyphs::default_atlas(), 78);
  CHECK(!(a.image == c.image));
}

TEST_CASE("answers and json") {
  ExtChallenge ch;
  ch.expected_answer = "Comlt";
  CHECK(check_answer(ch, "Comlt"));
  CHECK(!check_answer(ch, "comlt"));
  CHECK(!check_answer(ch, "Coml"));

  const auto g = generate_challenge(sprites(), words19(), glyphs::default_atlas(), 3);
  const auto hidden = to_json(g, false);
  CHECK(!hidden.contains("expected_answer"));
  CHECK(!hidden.contains("placed_words"));
  for (const auto& q : hidden.at("questions")) CHECK(!q.contains("answer_char"));
  const auto shown = to_json(g, true);
  CHECK(shown.at("expected_answer") == g.expected_answer);
  CHECK(shown.at("questions").size() == 5);
}
