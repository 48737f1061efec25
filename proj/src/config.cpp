#include "copyqnn/config.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "copyqnn/errors.hpp"
#include "copyqnn/rng.hpp"

namespace copyqnn::harness {

void ExperimentConfig::apply_desk_scale() {
    desk_scale = true;
    data.victim_train = 600;
    data.victim_test = 200;
    data.source_size = 256;
    pretrain.barlow.epochs = 40;
    pretrain.barlow.batch_size = 128;
}

std::string ExperimentConfig::resolved_source_task() const {
    if (source_task) return *source_task;
    const char family = task.empty() ? 'm' : task[0];
    const std::string first = std::string(1, family) + "01";
    return task == first ? std::string(1, family) + "23" : first;
}

data::DataSource ExperimentConfig::data_source() const {
    data::DataSource src;
    src.idx_dir = data.idx_dir;
    src.synth_seed = data.synth_seed;
    // balanced two-class splits out of a ten-class round-robin pool
    const int per_class_need =
        (data.victim_train + data.query_pool + std::max(data.source_size, 0)) / 2 + 8;
    src.synth_train_pool = per_class_need * 10;
    src.synth_test_pool = (data.victim_test / 2 + 8) * 10;
    return src;
}

noise::NoiseSchedule ExperimentConfig::schedule(std::uint64_t run_seed) const {
    const std::uint64_t sched_seed = rng::derive_seed(run_seed, "noise");
    const int nq = victim.num_qubits;
    switch (noise.kind) {
    case ScheduleKind::Desk: return noise::desk_schedule(nq, noise.jitter_sigma, sched_seed);
    case ScheduleKind::Brisbane:
        return noise::brisbane_schedule(nq, noise.jitter_sigma, sched_seed);
    case ScheduleKind::Zero: return noise::NoiseSchedule::zero(nq);
    case ScheduleKind::File: {
        if (!noise.path) throw ArgumentError("noise.kind is 'file' but no path is set");
        noise::NoiseSchedule s = noise::load_schedule(*noise.path);
        s.rng_seed = sched_seed;
        s.jitter_sigma = noise.jitter_sigma;
        return s;
    }
    }
    throw ArgumentError("unknown schedule kind");
}

void ExperimentConfig::validate() const {
    data::parse_task_name(task);
    data::parse_task_name(resolved_source_task());
    if (seeds.empty()) throw ArgumentError("seeds list must not be empty");
    if (schemes.empty()) throw ArgumentError("schemes list must not be empty");
    for (const std::string &s : schemes)
        if (s != "base" && s != "qleak" && s != "copyqnn")
            throw ArgumentError("unknown scheme '" + s + "'");
    for (double rr : rr_grid)
        if (!(rr > 0.0 && rr <= 1.0)) throw ArgumentError("rr grid value outside (0, 1]");
    if (query.rounds < 2) throw ArgumentError("query.rounds must be >= 2");
    if (query.samples < 1) throw ArgumentError("query.samples must be >= 1");
    if (query.shots < 0) throw ArgumentError("query.shots must be >= 1, or 0 for analytic");
    if (jobs < 1) throw ArgumentError("jobs must be >= 1");
}

namespace {

ScheduleKind schedule_kind_from_string(const std::string &s) {
    if (s == "desk") return ScheduleKind::Desk;
    if (s == "brisbane") return ScheduleKind::Brisbane;
    if (s == "zero") return ScheduleKind::Zero;
    if (s == "file") return ScheduleKind::File;
    throw ArgumentError("unknown noise schedule kind '" + s + "'");
}

std::string to_string(ScheduleKind k) {
    switch (k) {
    case ScheduleKind::Desk: return "desk";
    case ScheduleKind::Brisbane: return "brisbane";
    case ScheduleKind::Zero: return "zero";
    case ScheduleKind::File: return "file";
    }
    return "desk";
}

template <typename T>
void maybe(const nlohmann::json &j, const char *key, T &out) {
    if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

} // namespace

ExperimentConfig config_from_json(const nlohmann::json &j) {
    ExperimentConfig cfg;
    maybe(j, "task", cfg.task);
    if (j.contains("source_task") && !j.at("source_task").is_null())
        cfg.source_task = j.at("source_task").get<std::string>();
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    maybe(j, "seeds", cfg.seeds);
    maybe(j, "schemes", cfg.schemes);
    maybe(j, "rr_grid", cfg.rr_grid);
    maybe(j, "rounds_grid", cfg.rounds_grid);
    maybe(j, "fluct_hours", cfg.fluct_hours);
    maybe(j, "jobs", cfg.jobs);
    bool desk = false;
    maybe(j, "desk_scale", desk);
    if (desk) cfg.apply_desk_scale();

    if (j.contains("data")) {
        const auto &d = j.at("data");
        if (d.contains("idx_dir") && !d.at("idx_dir").is_null())
            cfg.data.idx_dir = d.at("idx_dir").get<std::string>();
        maybe(d, "synth_seed", cfg.data.synth_seed);
        maybe(d, "victim_train", cfg.data.victim_train);
        maybe(d, "victim_test", cfg.data.victim_test);
        maybe(d, "source_size", cfg.data.source_size);
        maybe(d, "query_pool", cfg.data.query_pool);
    }
    if (j.contains("victim")) {
        const auto &v = j.at("victim");
        maybe(v, "qubits", cfg.victim.num_qubits);
        maybe(v, "layers", cfg.victim.num_layers);
        maybe(v, "input_side", cfg.victim.input_side);
        maybe(v, "anti_alias_sigma", cfg.victim.anti_alias_sigma);
        maybe(v, "epochs", cfg.victim.optim.epochs);
        maybe(v, "batch", cfg.victim.optim.batch_size);
        maybe(v, "lr", cfg.victim.optim.lr);
        maybe(v, "weight_decay", cfg.victim.optim.weight_decay);
    } else {
        cfg.victim.anti_alias_sigma =
            data::victim_anti_alias_sigma(data::parse_task_name(cfg.task).kind);
    }
    if (!j.contains("victim") || !j.at("victim").contains("anti_alias_sigma"))
        cfg.victim.anti_alias_sigma =
            data::victim_anti_alias_sigma(data::parse_task_name(cfg.task).kind);

    if (j.contains("noise")) {
        const auto &n = j.at("noise");
        if (n.contains("kind")) cfg.noise.kind = schedule_kind_from_string(n.at("kind"));
        if (n.contains("path") && !n.at("path").is_null())
            cfg.noise.path = n.at("path").get<std::string>();
        maybe(n, "jitter_sigma", cfg.noise.jitter_sigma);
    }
    if (j.contains("query")) {
        const auto &q = j.at("query");
        maybe(q, "samples", cfg.query.samples);
        maybe(q, "rounds", cfg.query.rounds);
        maybe(q, "shots", cfg.query.shots);
        maybe(q, "phase", cfg.query.phase);
    }
    cfg.data.query_pool = cfg.query.samples;
    if (j.contains("clean")) {
        const auto &c = j.at("clean");
        maybe(c, "use_mixup", cfg.clean.use_mixup);
        maybe(c, "mixup_alpha", cfg.clean.mixup_alpha);
    }
    if (j.contains("pretrain")) {
        const auto &p = j.at("pretrain");
        maybe(p, "qubits", cfg.pretrain.qubits);
        maybe(p, "layers", cfg.pretrain.layers);
        maybe(p, "epochs", cfg.pretrain.barlow.epochs);
        maybe(p, "batch", cfg.pretrain.barlow.batch_size);
        maybe(p, "lr", cfg.pretrain.barlow.lr);
        maybe(p, "weight_decay", cfg.pretrain.barlow.weight_decay);
        maybe(p, "lambda", cfg.pretrain.barlow.lambda);
        maybe(p, "std_eps", cfg.pretrain.barlow.std_eps);
        if (p.contains("augment")) {
            const auto &a = p.at("augment");
            if (a.contains("method"))
                cfg.pretrain.augment.method =
                    data::augment_method_from_string(a.at("method"));
            maybe(a, "gaussian_blur", cfg.pretrain.augment.gaussian_blur);
        }
    }
    if (j.contains("classifier")) {
        const auto &c = j.at("classifier");
        maybe(c, "qubits", cfg.classifier.qubits);
        maybe(c, "layers", cfg.classifier.layers);
        maybe(c, "epochs", cfg.classifier.train.epochs);
        maybe(c, "lr", cfg.classifier.train.lr);
        maybe(c, "weight_decay", cfg.classifier.train.weight_decay);
    }
    if (j.contains("baseline")) {
        const auto &b = j.at("baseline");
        maybe(b, "epochs", cfg.baseline.base.optim.epochs);
        maybe(b, "batch", cfg.baseline.base.optim.batch_size);
        maybe(b, "lr", cfg.baseline.base.optim.lr);
        maybe(b, "weight_decay", cfg.baseline.base.optim.weight_decay);
        maybe(b, "committee", cfg.baseline.committee);
    }
    cfg.validate();
    return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig &cfg) {
    nlohmann::json j;
    j["task"] = cfg.task;
    j["source_task"] = cfg.resolved_source_task();
    j["out_dir"] = cfg.out_dir.string();
    j["seeds"] = cfg.seeds;
    j["schemes"] = cfg.schemes;
    j["rr_grid"] = cfg.rr_grid;
    j["rounds_grid"] = cfg.rounds_grid;
    j["fluct_hours"] = cfg.fluct_hours;
    j["jobs"] = cfg.jobs;
    j["desk_scale"] = cfg.desk_scale;
    j["data"] = {{"synth_seed", cfg.data.synth_seed},
                 {"victim_train", cfg.data.victim_train},
                 {"victim_test", cfg.data.victim_test},
                 {"source_size", cfg.data.source_size},
                 {"query_pool", cfg.data.query_pool}};
    if (cfg.data.idx_dir) j["data"]["idx_dir"] = cfg.data.idx_dir->string();
    j["victim"] = {{"qubits", cfg.victim.num_qubits},
                   {"layers", cfg.victim.num_layers},
                   {"input_side", cfg.victim.input_side},
                   {"anti_alias_sigma", cfg.victim.anti_alias_sigma},
                   {"epochs", cfg.victim.optim.epochs},
                   {"batch", cfg.victim.optim.batch_size},
                   {"lr", cfg.victim.optim.lr},
                   {"weight_decay", cfg.victim.optim.weight_decay}};
    j["noise"] = {{"kind", to_string(cfg.noise.kind)},
                  {"jitter_sigma", cfg.noise.jitter_sigma}};
    if (cfg.noise.path) j["noise"]["path"] = cfg.noise.path->string();
    j["query"] = {{"samples", cfg.query.samples},
                  {"rounds", cfg.query.rounds},
                  {"shots", cfg.query.shots},
                  {"phase", cfg.query.phase}};
    j["clean"] = {{"use_mixup", cfg.clean.use_mixup},
                  {"mixup_alpha", cfg.clean.mixup_alpha}};
    j["pretrain"] = {{"qubits", cfg.pretrain.qubits},
                     {"layers", cfg.pretrain.layers},
                     {"epochs", cfg.pretrain.barlow.epochs},
                     {"batch", cfg.pretrain.barlow.batch_size},
                     {"lr", cfg.pretrain.barlow.lr},
                     {"weight_decay", cfg.pretrain.barlow.weight_decay},
                     {"lambda", cfg.pretrain.barlow.lambda},
                     {"std_eps", cfg.pretrain.barlow.std_eps},
                     {"augment",
                      {{"method", data::to_string(cfg.pretrain.augment.method)},
                       {"gaussian_blur", cfg.pretrain.augment.gaussian_blur}}}};
    j["classifier"] = {{"qubits", cfg.classifier.qubits},
                       {"layers", cfg.classifier.layers},
                       {"epochs", cfg.classifier.train.epochs},
                       {"lr", cfg.classifier.train.lr},
                       {"weight_decay", cfg.classifier.train.weight_decay}};
    j["baseline"] = {{"epochs", cfg.baseline.base.optim.epochs},
                     {"batch", cfg.baseline.base.optim.batch_size},
                     {"lr", cfg.baseline.base.optim.lr},
                     {"weight_decay", cfg.baseline.base.optim.weight_decay},
                     {"committee", cfg.baseline.committee}};
    return j;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config " + path.string());
    nlohmann::json j;
    in >> j;
    return config_from_json(j);
}

} // namespace copyqnn::harness
