// Copyright 2026 The totr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "totr/cli.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <thread>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "totr/analysis.hpp"
#include "totr/core/errors.hpp"
#include "totr/core/jsonl.hpp"
#include "totr/core/text.hpp"
#include "totr/curation.hpp"
#include "totr/retrieval_eval.hpp"
#include "totr/service.hpp"
#include "totr/textgen_metrics.hpp"
#include "totr/video.hpp"

namespace totr::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop = true; }

std::optional<std::string> opt(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return s;
}

std::ifstream open_in(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw Error(Errc::Io, "cannot open " + p.string());
    return in;
}

embedding::EmbeddingMatrix load_normalized(const fs::path& p) {
    auto m = embedding::load_store(p);
    return m.normalized() ? m : embedding::normalize(m);
}

// ---------------------------------------------------------------------------

struct CurateArgs {
    std::string posts, comments, out, judge_url, tagger_url, prefer;
    std::size_t workers = 1;
};

int cmd_curate(const CurateArgs& a) {
    auto posts_in = open_in(a.posts);
    auto comments_in = open_in(a.comments);
    const auto posts = curation::read_posts(posts_in);
    const auto comments = curation::read_comments(comments_in);

    std::unique_ptr<clients::HttpJudgeClient> judge, tagger;
    curation::CurationOptions options;
    options.workers = a.workers;
    if (a.prefer == "op-reply") options.resolve.prefer_op_reply = true;
    if (!a.judge_url.empty()) {
        judge = std::make_unique<clients::HttpJudgeClient>(a.judge_url);
        options.judge = judge.get();
    }
    if (!a.tagger_url.empty()) {
        tagger = std::make_unique<clients::HttpJudgeClient>(a.tagger_url);
        options.tagger = tagger.get();
    }
    const auto result = curation::run_curation(posts, comments, options);

    fs::create_directories(a.out);
    {
        std::ofstream out(fs::path(a.out) / "records.jsonl");
        for (const auto& r : result.records) jsonl::write_line(out, curation::to_json(r));
    }
    {
        std::ofstream out(fs::path(a.out) / "resolutions.jsonl");
        for (const auto& r : result.resolutions) jsonl::write_line(out, curation::to_json(r));
    }
    jsonl::write_json_file(fs::path(a.out) / "stats.json", curation::to_json(result.stats));
    spdlog::info("curate: {} posts, {} solved, {} unsolved, {} conflict, {} records", result.stats.total_posts,
                 result.stats.solved, result.stats.unsolved, result.stats.conflict, result.stats.records);
    return 0;
}

struct AssetsArgs {
    std::string root, out, ner_url, report;
    std::size_t cap = video::kDefaultSceneCap;
    bool mask = false;
    std::size_t workers = 1;
};

int cmd_assets(const AssetsArgs& a) {
    video::LoadReport load;
    const auto loaded = video::load_asset_root(a.root, a.workers, load);
    for (const auto& [dir, err] : load.failures) spdlog::warn("assets: skipped {}: {}", dir, err);
    video::AssetFilterReport filter;
    auto kept = video::filter_video_assets(loaded, filter);

    std::unique_ptr<clients::HttpNerClient> ner;
    if (a.mask && !a.ner_url.empty()) ner = std::make_unique<clients::HttpNerClient>(a.ner_url);

    std::size_t fallbacks = 0;
    std::ofstream out(a.out);
    if (!out) throw Error(Errc::Io, "cannot write " + a.out);
    for (auto& asset : kept) {
        asset.deduped_scene_indices = video::dedup_scenes(asset.scenes, a.cap);
        if (a.mask) {
            auto masked = video::mask_proper_nouns(asset, ner.get());
            if (masked.used_fallback) ++fallbacks;
            jsonl::write_line(out, video::to_index_json(masked.asset, true, masked.used_fallback));
        } else {
            jsonl::write_line(out, video::to_index_json(asset));
        }
    }
    if (a.mask && fallbacks) spdlog::warn("assets: {} assets masked with the heuristic fallback", fallbacks);
    json report{{"directories", load.directories}, {"loaded", load.loaded}, {"filter", video::to_json(filter)},
                {"written", kept.size()}, {"mask_fallbacks", fallbacks}};
    if (!a.report.empty()) jsonl::write_json_file(a.report, report);
    spdlog::info("assets: {} loaded, {} kept", load.loaded, kept.size());
    return 0;
}

struct EmbedArgs {
    std::string in, out, embedder_url, instruction_file;
    std::size_t batch_size = 32;
};

int cmd_embed(const EmbedArgs& a) {
    clients::HttpEmbedderClient embedder(a.embedder_url);
    std::optional<std::string> instruction;
    if (!a.instruction_file.empty()) instruction = std::string(text::trim(jsonl::read_text_file(a.instruction_file)));
    const auto m = eval::embed_source(a.in, instruction, embedder, a.batch_size);
    embedding::save_store(embedding::normalize(m), a.out);
    spdlog::info("embed: {} rows of dim {} -> {}", m.rows(), m.dim(), a.out);
    return 0;
}

struct MineArgs {
    std::string corpus, out, records, videos, pairs_out;
    std::size_t pool = 50, per_sample = 1, workers = 1;
    std::uint64_t seed = 7;
};

int cmd_mine(const MineArgs& a) {
    const auto recalls = load_normalized(a.corpus);
    contrastive::MiningOptions options;
    options.pool_size = a.pool;
    options.per_sample = a.per_sample;
    options.seed = a.seed;
    options.workers = a.workers;
    const auto mined = contrastive::mine_hard_negatives(recalls, options);
    for (const auto& w : mined.warnings) spdlog::warn("mine: {}", w);
    {
        std::ofstream out(a.out);
        if (!out) throw Error(Errc::Io, "cannot write " + a.out);
        for (const auto& [id, negs] : mined.negatives) jsonl::write_line(out, json{{"id", id}, {"hard_negative_ids", negs}});
    }
    spdlog::info("mine: {} anchors -> {}", mined.negatives.size(), a.out);
    if (a.pairs_out.empty()) return 0;
    if (a.records.empty()) throw Error(Errc::InvalidArgument, "--pairs-out needs --records");

    // record -> its first YouTube video that exists in the video index
    std::optional<embedding::EmbeddingMatrix> videos;
    if (!a.videos.empty()) videos = embedding::load_store(a.videos);
    std::map<std::string, std::string> video_of;
    jsonl::for_each_file(a.records, [&](const json& j, std::size_t) {
        const auto r = curation::record_from_json(j);
        for (const auto& link : r.answer_links) {
            auto vid = curation::youtube_video_id(link);
            if (vid && (!videos || videos->find(*vid))) {
                video_of[r.record_id] = *vid;
                break;
            }
        }
    });
    std::size_t written = 0;
    std::ofstream out(a.pairs_out);
    if (!out) throw Error(Errc::Io, "cannot write " + a.pairs_out);
    for (const auto& [record_id, vid] : video_of) {
        if (!recalls.find(record_id)) continue;
        contrastive::TrainingPair p{vid, record_id, {}};
        if (auto it = mined.negatives.find(record_id); it != mined.negatives.end()) {
            for (const auto& n : it->second) {
                auto other = video_of.find(n);
                if (other != video_of.end() && other->second == vid) continue;  // same answer, not a negative
                p.hard_negative_ids.push_back(n);
            }
        }
        jsonl::write_line(out, contrastive::to_json(p));
        ++written;
    }
    spdlog::info("mine: {} training pairs -> {}", written, a.pairs_out);
    return 0;
}

struct TrainArgs {
    std::string pairs, queries, docs, out, trace;
    contrastive::TrainConfig config;
};

int cmd_train(const TrainArgs& a) {
    std::vector<contrastive::TrainingPair> pairs;
    jsonl::for_each_file(a.pairs, [&](const json& j, std::size_t) { pairs.push_back(contrastive::pair_from_json(j)); });
    const auto queries = load_normalized(a.queries);
    const auto docs = load_normalized(a.docs);
    const auto result = contrastive::train_adapter(pairs, queries, docs, a.config);
    contrastive::save_adapter(result.state, a.out);
    for (std::size_t e = 0; e < result.epoch_mean_losses.size(); ++e) {
        spdlog::info("train: epoch {} mean loss {:.6f}", e + 1, result.epoch_mean_losses[e]);
    }
    if (!a.trace.empty()) {
        jsonl::write_json_file(a.trace, json{{"step_losses", result.step_losses},
                                             {"epoch_mean_losses", result.epoch_mean_losses},
                                             {"diverged", result.diverged}});
    }
    if (result.diverged) {
        spdlog::error("train: loss became non-finite; saved the last good state to {}", a.out);
        return 1;
    }
    return 0;
}

struct EvalArgs {
    std::string config, out, embedder_url;
    std::size_t workers = 0;
};

int cmd_eval(const EvalArgs& a, std::optional<std::uint64_t> seed) {
    auto config = eval::load_eval_config(a.config);
    if (!a.embedder_url.empty()) config.embedder_url = a.embedder_url;
    if (a.workers) config.workers = a.workers;
    if (seed) config.seed = *seed;
    const auto result = eval::run_eval(config);
    const auto j = eval::to_json(result);
    jsonl::write_json_file(a.out, j);
    spdlog::info("eval {}: {} queries ({} excluded) {}", eval::to_string(config.name), result.n_queries,
                 result.n_excluded, j["table"].dump());
    return 0;
}

struct ScoreArgs {
    std::string pred, gold, out, embedder_url;
};

int cmd_score(const ScoreArgs& a) {
    // references per video id
    std::map<std::string, std::vector<std::string>> refs;
    jsonl::for_each_file(a.gold, [&](const json& j, std::size_t) {
        if (j.contains("record_id")) {
            const auto r = curation::record_from_json(j);
            std::string text = textgen::strip_episodic_for_training(r);
            if (text.empty()) text = r.recall_text;
            std::set<std::string> seen;
            for (const auto& link : r.answer_links) {
                if (auto vid = curation::youtube_video_id(link); vid && seen.insert(*vid).second) refs[*vid].push_back(text);
            }
        } else {
            refs[jsonl::require_string(j, "video_id")].push_back(jsonl::require_string(j, "reference"));
        }
    });

    std::unique_ptr<clients::HttpEmbedderClient> embedder;
    if (!a.embedder_url.empty()) embedder = std::make_unique<clients::HttpEmbedderClient>(a.embedder_url);

    json items = json::array();
    std::vector<std::string> cands;
    std::vector<std::vector<std::string>> cand_refs;
    double sum_b = 0, sum_r1 = 0, sum_r2 = 0, sum_rl = 0, sum_e = 0;
    std::size_t n = 0, missing = 0, empty = 0;
    jsonl::for_each_file(a.pred, [&](const json& j, std::size_t) {
        const auto vid = jsonl::require_string(j, "video_id");
        const auto cand = jsonl::require_string(j, "generated_recall");
        auto it = refs.find(vid);
        if (it == refs.end()) {
            ++missing;
            return;
        }
        if (textgen::tokenize(cand).empty()) {
            ++empty;
            return;
        }
        textgen::ScoreReport best;
        best.bleu = textgen::bleu(cand, it->second);
        for (const auto& ref : it->second) {
            const auto s = textgen::score_pair(cand, ref, embedder.get());
            best.rouge1 = std::max(best.rouge1, s.rouge1);
            best.rouge2 = std::max(best.rouge2, s.rouge2);
            best.rougeL = std::max(best.rougeL, s.rougeL);
            if (s.embed_f1) best.embed_f1 = std::max(best.embed_f1.value_or(0.0), *s.embed_f1);
        }
        json row = textgen::to_json(best);
        row["video_id"] = vid;
        items.push_back(std::move(row));
        cands.push_back(cand);
        cand_refs.push_back(it->second);
        sum_b += best.bleu;
        sum_r1 += best.rouge1;
        sum_r2 += best.rouge2;
        sum_rl += best.rougeL;
        sum_e += best.embed_f1.value_or(0.0);
        ++n;
    });
    json out{{"n", n}, {"missing_reference", missing}, {"empty_candidate", empty}, {"items", std::move(items)}};
    if (n) {
        const double d = static_cast<double>(n);
        out["mean"] = {{"bleu", sum_b / d}, {"rouge1", sum_r1 / d}, {"rouge2", sum_r2 / d}, {"rougeL", sum_rl / d},
                       {"embed_f1", embedder ? json(sum_e / d) : json(nullptr)}};
        out["corpus_bleu"] = textgen::corpus_bleu(cands, cand_refs);
    }
    jsonl::write_json_file(a.out, out);
    spdlog::info("score: {} pairs scored, {} without reference", n, missing);
    return 0;
}

struct PrrArgs {
    std::string instances, assets, judge_url, out;
    int retries = 1;
    long long min_interval_ms = 0;
};

int cmd_prr(const PrrArgs& a) {
    std::vector<textgen::PrrInstance> instances;
    jsonl::for_each_file(a.instances, [&](const json& j, std::size_t) { instances.push_back(textgen::prr_from_json(j)); });
    clients::HttpJudgeClient judge(a.judge_url);
    textgen::PrrOptions options;
    options.retries = a.retries;
    options.min_interval = std::chrono::milliseconds(a.min_interval_ms);
    const auto report = textgen::prr_run(instances, a.assets, judge, options);
    jsonl::write_json_file(a.out, textgen::to_json(report));
    spdlog::info("prr: accuracy {:.4f} over {} ({} unparseable)", report.accuracy, report.n, report.unparseable);
    return 0;
}

struct AnalyzeArgs {
    std::string stats, out, csv_dir;
    bool raw_views = false;
    std::size_t min_support = 5;
};

int cmd_analyze(const AnalyzeArgs& a) {
    std::size_t malformed = 0;
    const auto stats = analysis::read_stats(a.stats, &malformed);
    if (malformed) spdlog::warn("analyze: skipped {} malformed lines", malformed);
    const auto report = analysis::analyze(stats, a.raw_views, a.min_support);
    auto j = analysis::to_json(report);
    j["malformed"] = malformed;
    jsonl::write_json_file(a.out, j);
    if (!a.csv_dir.empty()) analysis::write_csvs(report, stats, a.csv_dir, a.raw_views);
    return 0;
}

struct ServeArgs {
    std::string index, assets_index, media_root, embedder_url, feedback_log = "feedback.jsonl", host = "127.0.0.1";
    std::vector<std::string> adapters;
    std::string default_adapter;
    bool no_instruction = false;
    int port = 8080;
};

int cmd_serve(const ServeArgs& a) {
    service::ServiceConfig config;
    config.index_path = a.index;
    config.assets_index = a.assets_index;
    config.media_root = a.media_root;
    config.embedder_url = opt(a.embedder_url);
    config.feedback_log = a.feedback_log;
    config.host = a.host;
    config.port = a.port;
    config.prepend_instruction = !a.no_instruction;
    for (const auto& spec : a.adapters) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) {
            config.adapters["default"] = spec;
            if (a.default_adapter.empty()) config.default_adapter = "default";
        } else {
            config.adapters[spec.substr(0, eq)] = spec.substr(eq + 1);
        }
    }
    if (!a.default_adapter.empty()) config.default_adapter = a.default_adapter;

    service::SearchEngine engine(config);
    service::Server server(engine);
    // handlers go in before the port opens, so anyone who can reach the
    // server can also stop it
    g_stop = false;
    auto prev_int = std::signal(SIGINT, on_signal);
    auto prev_term = std::signal(SIGTERM, on_signal);
    const int port = server.start();
    spdlog::info("serve: listening on {}:{} (index {})", a.host, port, engine.health()["index_version"].get<std::string>());
    std::cout << "listening on http://" << a.host << ":" << port << std::endl;

    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    std::signal(SIGINT, prev_int);
    std::signal(SIGTERM, prev_term);
    server.stop();
    return 0;
}

}  // namespace

void request_stop() noexcept { g_stop = true; }

int run(int argc, const char* const* argv) {
    CLI::App app{"totr: tip-of-the-tongue recall corpus, retrieval, and evaluation tools", "totr"};
    app.set_config("--config", "", "key=value config file");
    app.require_subcommand(1);
    std::string log_level = "info";
    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "seed applied to every seeded step");
    app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off")
        ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

    CurateArgs curate;
    auto* c = app.add_subcommand("curate", "filter posts, resolve answers, and write recall records");
    c->add_option("--posts", curate.posts)->required();
    c->add_option("--comments", curate.comments)->required();
    c->add_option("--out", curate.out, "output directory")->required();
    c->add_option("--judge-url", curate.judge_url);
    c->add_option("--tagger-url", curate.tagger_url, "judge service used to tag recall sentences");
    c->add_option("--prefer", curate.prefer)->check(CLI::IsMember({"op-reply"}));
    c->add_option("--workers", curate.workers);

    AssetsArgs assets;
    auto* as = app.add_subcommand("assets", "load, filter, dedup and optionally mask video assets");
    as->add_option("--root", assets.root)->required();
    as->add_option("--out", assets.out)->required();
    as->add_option("--dedup-cap", assets.cap)->check(CLI::PositiveNumber);
    as->add_flag("--mask", assets.mask);
    as->add_option("--ner-url", assets.ner_url);
    as->add_option("--report", assets.report, "write load/filter counts as JSON");
    as->add_option("--workers", assets.workers);

    EmbedArgs embed;
    auto* e = app.add_subcommand("embed", "embed records or assets into a .t2me store");
    e->add_option("--in", embed.in)->required();
    e->add_option("--out", embed.out)->required();
    e->add_option("--embedder-url", embed.embedder_url)->required();
    e->add_option("--instruction-file", embed.instruction_file);
    e->add_option("--batch-size", embed.batch_size)->check(CLI::PositiveNumber);

    MineArgs mine;
    auto* m = app.add_subcommand("mine", "mine hard negatives from a recall store");
    m->add_option("--corpus", mine.corpus)->required();
    m->add_option("--out", mine.out)->required();
    m->add_option("--pool", mine.pool)->check(CLI::PositiveNumber);
    m->add_option("--per-sample", mine.per_sample)->check(CLI::PositiveNumber);
    auto* mine_seed = m->add_option("--seed", mine.seed);
    m->add_option("--workers", mine.workers);
    m->add_option("--records", mine.records, "records.jsonl, for --pairs-out");
    m->add_option("--videos", mine.videos, "video store; pairs are kept only for indexed videos");
    m->add_option("--pairs-out", mine.pairs_out, "write training pairs (video -> recall)");

    TrainArgs train;
    auto* t = app.add_subcommand("train", "train the adapter with InfoNCE");
    t->add_option("--pairs", train.pairs)->required();
    t->add_option("--queries", train.queries, "store holding the pairs' query ids")->required();
    t->add_option("--docs", train.docs, "store holding positive and negative ids")->required();
    t->add_option("--out", train.out)->required();
    t->add_option("--tau", train.config.tau)->check(CLI::PositiveNumber);
    t->add_option("--lr", train.config.lr)->check(CLI::NonNegativeNumber);
    t->add_option("--momentum", train.config.momentum)->check(CLI::Range(0.0, 1.0));
    t->add_option("--batch", train.config.batch_size)->check(CLI::PositiveNumber);
    t->add_option("--epochs", train.config.epochs);
    auto* train_seed = t->add_option("--seed", train.config.seed);
    t->add_option("--trace", train.trace, "write the loss trace as JSON");

    EvalArgs ev;
    auto* v = app.add_subcommand("eval", "run a retrieval evaluation config");
    v->add_option("--config", ev.config, "eval.json")->required();
    v->add_option("--out", ev.out)->required();
    v->add_option("--embedder-url", ev.embedder_url);
    v->add_option("--workers", ev.workers);

    ScoreArgs score;
    auto* s = app.add_subcommand("score", "score generated recalls against records");
    s->add_option("--pred", score.pred)->required();
    s->add_option("--gold", score.gold)->required();
    s->add_option("--out", score.out)->required();
    s->add_option("--embedder-url", score.embedder_url);

    PrrArgs prr;
    auto* p = app.add_subcommand("prr", "run the prompt recall ranking task");
    p->add_option("--instances", prr.instances)->required();
    p->add_option("--assets", prr.assets)->required();
    p->add_option("--judge-url", prr.judge_url)->required();
    p->add_option("--out", prr.out)->required();
    p->add_option("--retries", prr.retries)->check(CLI::NonNegativeNumber);
    p->add_option("--min-interval-ms", prr.min_interval_ms)->check(CLI::NonNegativeNumber);

    AnalyzeArgs an;
    auto* a = app.add_subcommand("analyze", "popularity correlations and genre aggregates");
    a->add_option("--stats", an.stats)->required();
    a->add_option("--out", an.out)->required();
    a->add_flag("--raw-views", an.raw_views);
    a->add_option("--csv-dir", an.csv_dir);
    a->add_option("--min-support", an.min_support);

    ServeArgs sv;
    auto* srv = app.add_subcommand("serve", "HTTP search service");
    srv->add_option("--index", sv.index, "video .t2me store")->required();
    srv->add_option("--assets-index", sv.assets_index);
    srv->add_option("--media-root", sv.media_root, "asset root served under /media/");
    srv->add_option("--adapter", sv.adapters, "adapter.json or name=adapter.json; repeatable");
    srv->add_option("--default-adapter", sv.default_adapter);
    srv->add_option("--embedder-url", sv.embedder_url)->required();
    srv->add_flag("--no-instruction", sv.no_instruction, "do not prepend the retrieval instruction");
    srv->add_option("--feedback-log", sv.feedback_log);
    srv->add_option("--host", sv.host);
    srv->add_option("--port", sv.port);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        // CLI11 has its own code per failure kind; callers only see 0 or 2
        return app.exit(err) == 0 ? 0 : 2;
    }

    spdlog::set_level(spdlog::level::from_str(log_level));
    const bool global_seed = app.get_option("--seed")->count() > 0;
    if (global_seed && mine_seed->count() == 0) mine.seed = seed;
    if (global_seed && train_seed->count() == 0) train.config.seed = seed;

    try {
        if (*c) return cmd_curate(curate);
        if (*as) return cmd_assets(assets);
        if (*e) return cmd_embed(embed);
        if (*m) return cmd_mine(mine);
        if (*t) return cmd_train(train);
        if (*v) return cmd_eval(ev, global_seed ? std::optional<std::uint64_t>(seed) : std::nullopt);
        if (*s) return cmd_score(score);
        if (*p) return cmd_prr(prr);
        if (*a) return cmd_analyze(an);
        if (*srv) return cmd_serve(sv);
    } catch (const Error& err) {
        spdlog::error("{}: {}", to_string(err.code()), err.what());
        return 1;
    } catch (const std::exception& err) {
        spdlog::error("{}", err.what());
        return 1;
    }
    return 2;
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("totr");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace totr::cli
