#include "captchalab/cli/cli.hpp"

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "captchalab/breaker/breaker.hpp"
#include "captchalab/captcha/captcha.hpp"
#include "captchalab/error.hpp"
#include "captchalab/extcaptcha/extcaptcha.hpp"
#include "captchalab/glyphs/atlas.hpp"
#include "captchalab/harness/server.hpp"
#include "captchalab/harness/store.hpp"
#include "captchalab/imgcore/pgm.hpp"
#include "captchalab/ocrnet/net.hpp"

namespace captchalab::cli {

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw InputError("cannot write " + path);
}

// Spec knobs shared by `generate` and `serve`.
struct SpecFlags {
  std::optional<double> noise;
  std::optional<int> min_lines;
  std::optional<int> max_lines;
  std::optional<int> font;

  void add(CLI::App* app) {
    app->add_option("--noise", noise, "salt-and-pepper density in [0, 1]");
    app->add_option("--min-lines", min_lines, "fewest random lines");
    app->add_option("--max-lines", max_lines, "most random lines");
    app->add_option("--font", font, "glyph font id (0 or 1)");
  }

  captcha::CaptchaSpec apply(captcha::CaptchaSpec s) const {
    if (noise) s.noise_density = *noise;
    if (min_lines) s.line_count_range.lo = *min_lines;
    if (max_lines) s.line_count_range.hi = *max_lines;
    if (font) s.font_id = *font;
    return s;
  }
};

harness::HarnessServer* g_server = nullptr;

extern "C" void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"CAPTCHA generation, breaking and human-vs-machine trials", "captchalab"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "print one JSON object on stdout");

  SpecFlags gen_flags;
  std::uint64_t gen_seed = 0;
  std::string gen_text, gen_out;
  auto* gen = app.add_subcommand("generate", "render a degraded CAPTCHA to PGM");
  gen->add_option("--seed", gen_seed, "generation seed")->required();
  gen->add_option("--text", gen_text, "uppercase text (default: drawn from the seed)");
  gen->add_option("--out", gen_out, "output .pgm path")->required();
  gen_flags.add(gen);

  std::string train_atlas, train_out;
  ocrnet::TrainConfig train_cfg;
  auto* train = app.add_subcommand("train", "train the character classifier");
  train->add_option("--atlas", train_atlas, "GAF atlas file (default: bundled atlas)");
  train->add_option("--out", train_out, "output model path")->required();
  train->add_option("--seed", train_cfg.seed, "weight initialisation seed");
  train->add_option("--epochs", train_cfg.max_epochs, "maximum epochs");

  std::string brk_model, brk_in;
  std::optional<std::string> brk_expect;
  breaker::BreakerConfig brk_cfg;
  auto* brk = app.add_subcommand("break", "read a CAPTCHA image");
  brk->add_option("--model", brk_model, "trained model")->required();
  brk->add_option("--in", brk_in, "input .pgm")->required();
  brk->add_option("--expect", brk_expect, "exit 0 only if the result matches");
  brk->add_option("--chars", brk_cfg.expected_chars, "characters to segment");

  std::string ext_sprites, ext_words, ext_prefix;
  std::uint64_t ext_seed = 0;
  bool ext_reveal = false;
  extcaptcha::ExtOptions ext_opts;
  auto* ext = app.add_subcommand("extgen", "generate an extended object+word CAPTCHA");
  ext->add_option("--sprites", ext_sprites, "sprite directory with manifest.json")->required();
  ext->add_option("--words", ext_words, "wordlist, one word per line")->required();
  ext->add_option("--seed", ext_seed, "generation seed")->required();
  ext->add_option("--out-prefix", ext_prefix, "writes <prefix>.pgm and <prefix>.json")->required();
  ext->add_flag("--reveal", ext_reveal, "include the expected answer and layout");
  ext->add_option("--objects", ext_opts.k_objects, "objects to place");
  ext->add_option("--word-count", ext_opts.m_words, "words to place");
  ext->add_option("--questions", ext_opts.l_questions, "questions to ask");

  int serve_port = 8080;
  std::string serve_store, serve_host = "0.0.0.0";
  std::optional<std::string> serve_ui;
  SpecFlags serve_flags;
  auto* serve = app.add_subcommand("serve", "run the interrogator HTTP service");
  serve->add_option("--port", serve_port, "listen port (0 = any)");
  serve->add_option("--host", serve_host, "listen address");
  serve->add_option("--store", serve_store, "trials.jsonl event log")->required();
  serve->add_option("--ui-dir", serve_ui, "static files served under /ui/");
  serve_flags.add(serve);

  std::string report_store;
  auto* report = app.add_subcommand("report", "print the four headline metrics");
  report->add_option("--store", report_store, "trials.jsonl event log")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) {
      captcha::CaptchaSpec spec = gen_flags.apply(captcha::spec_for_seed(gen_seed));
      if (!gen_text.empty()) spec.text = gen_text;
      const auto inst = captcha::generate(spec);
      imgcore::write_pgm(gen_out, inst.image);
      if (json) {
        out << nlohmann::json{{"out", gen_out}, {"spec", captcha::to_json(spec)}}.dump() << '\n';
      } else {
        out << gen_out << '\n';
      }
      return kExitOk;
    }

    if (*train) {
      const auto atlas = train_atlas.empty() ? glyphs::default_atlas()
                                             : glyphs::load_atlas(read_text(train_atlas));
      ocrnet::TrainStats stats;
      const auto model = ocrnet::train(atlas, train_cfg, &stats);
      write_text(train_out, ocrnet::save_model(model));
      int correct = 0;
      const auto set = ocrnet::training_set(atlas);
      for (const auto& ex : set) correct += ocrnet::classify(model, ex.features).letter == 'A' + ex.label;
      if (json) {
        out << nlohmann::json{{"out", train_out},
                              {"epochs", stats.epochs},
                              {"final_mse", stats.epoch_mse.back()},
                              {"train_correct", correct},
                              {"train_total", set.size()}}
                   .dump()
            << '\n';
      } else {
        out << "epochs=" << stats.epochs << " mse=" << stats.epoch_mse.back() << " train_acc="
            << correct << "/" << set.size() << '\n';
      }
      return kExitOk;
    }

    if (*brk) {
      const auto model = ocrnet::load_model(read_text(brk_model));
      const auto img = imgcore::read_pgm(brk_in);
      const auto result = breaker::break_captcha(img, model, brk_cfg);
      const bool match = !brk_expect || *brk_expect == result.text;
      if (json) {
        nlohmann::json j{{"text", result.text}, {"per_char_confidence", result.per_char_confidence}};
        if (brk_expect) j["match"] = match;
        out << j.dump() << '\n';
      } else {
        out << result.text << '\n';
      }
      return match ? kExitOk : kExitFailure;
    }

    if (*ext) {
      const auto db = extcaptcha::load_sprite_db(ext_sprites);
      const auto words = extcaptcha::load_wordlist(ext_words);
      const auto ch = extcaptcha::generate_challenge(db, words, glyphs::default_atlas(), ext_seed, ext_opts);
      imgcore::write_pgm(ext_prefix + ".pgm", ch.image);
      const auto j = extcaptcha::to_json(ch, ext_reveal);
      write_text(ext_prefix + ".json", j.dump(2) + "\n");
      if (json) {
        out << j.dump() << '\n';
      } else {
        for (const auto& q : ch.questions) out << q.rendered_text << '\n';
      }
      return kExitOk;
    }

    if (*serve) {
      harness::TrialStore store{std::filesystem::path(serve_store)};
      harness::ServerOptions opts;
      opts.host = serve_host;
      opts.spec_base = serve_flags.apply({});
      if (serve_ui) opts.ui_dir = *serve_ui;
      harness::HarnessServer server(store, opts);
      const int port = server.bind(serve_port);
      if (port < 0) {
        err << "cannot bind " << serve_host << ":" << serve_port << '\n';
        return kExitFailure;
      }
      if (json) {
        out << nlohmann::json{{"port", port}, {"store", serve_store}}.dump() << std::endl;
      } else {
        out << "listening on " << serve_host << ":" << port << std::endl;
      }
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      const bool ok = server.listen();
      g_server = nullptr;
      return ok ? kExitOk : kExitFailure;
    }

    if (*report) {
      if (!std::filesystem::exists(report_store)) throw InputError("no such store " + report_store);
      harness::TrialStore store{std::filesystem::path(report_store)};
      const auto r = store.aggregate_report();
      if (json) {
        out << harness::to_json(r).dump() << '\n';
      } else {
        out << harness::summary_line(r) << '\n';
      }
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace captchalab::cli
