#include "copyqnn/tasks.hpp"

#include <algorithm>

#include "copyqnn/errors.hpp"
#include "copyqnn/idx.hpp"
#include "copyqnn/rng.hpp"

namespace copyqnn::data {

TaskSpec parse_task_name(const std::string &name) {
    if (name.size() != 3 || (name[0] != 'm' && name[0] != 'f') ||
        !std::isdigit(static_cast<unsigned char>(name[1])) ||
        !std::isdigit(static_cast<unsigned char>(name[2])))
        throw ArgumentError("task name '" + name +
                            "' is not of the form m<digit><digit> or f<digit><digit>");
    TaskSpec spec;
    spec.kind = name[0] == 'm' ? SynthKind::Digits : SynthKind::Fashion;
    spec.class_a = name[1] - '0';
    spec.class_b = name[2] - '0';
    if (spec.class_a == spec.class_b)
        throw ArgumentError("task '" + name + "' names the same class twice");
    return spec;
}

namespace {

struct Pools {
    std::vector<ImageSample> train;
    std::vector<ImageSample> test;
};

Pools load_pools(const DataSource &source, SynthKind kind) {
    Pools pools;
    if (source.idx_dir) {
        const std::filesystem::path dir =
            *source.idx_dir / (kind == SynthKind::Digits ? "mnist" : "fashion");
        pools.train = load_idx(dir / "train-images-idx3-ubyte", dir / "train-labels-idx1-ubyte");
        pools.test = load_idx(dir / "t10k-images-idx3-ubyte", dir / "t10k-labels-idx1-ubyte");
    } else {
        pools.train = synth_corpus(kind, source.synth_train_pool, source.synth_seed);
        pools.test = synth_corpus(kind, source.synth_test_pool,
                                  rng::derive_seed(source.synth_seed, "synth-test"));
    }
    return pools;
}

/// Balanced pick of `count` samples of the two classes, remapped to {0,1},
/// consuming entries from `cursor_a`/`cursor_b` onward.
std::vector<ImageSample> take_balanced(const std::vector<ImageSample> &pool, int class_a,
                                       int class_b, int count, std::size_t &cursor_a,
                                       std::size_t &cursor_b, const std::string &what) {
    std::vector<std::size_t> idx_a, idx_b;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (!pool[i].label) continue;
        if (*pool[i].label == class_a) idx_a.push_back(i);
        if (*pool[i].label == class_b) idx_b.push_back(i);
    }
    const int half = count / 2;
    const int want_a = half + (count % 2);
    const int want_b = half;
    if (cursor_a + want_a > idx_a.size() || cursor_b + want_b > idx_b.size())
        throw ArgumentError("source pool too small for " + what + " split");

    std::vector<ImageSample> out;
    out.reserve(count);
    for (int i = 0; i < want_a; ++i) {
        ImageSample s = pool[idx_a[cursor_a++]];
        s.label = 0;
        out.push_back(std::move(s));
    }
    for (int i = 0; i < want_b; ++i) {
        ImageSample s = pool[idx_b[cursor_b++]];
        s.label = 1;
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace

BinaryTask build_task(const DataSource &source, const std::string &task_name,
                      int train_size, int test_size, int query_pool_size) {
    const TaskSpec spec = parse_task_name(task_name);
    const Pools pools = load_pools(source, spec.kind);

    BinaryTask task;
    task.name = task_name;
    task.class_a = spec.class_a;
    task.class_b = spec.class_b;

    std::size_t train_a = 0, train_b = 0;
    task.train = take_balanced(pools.train, spec.class_a, spec.class_b, train_size,
                               train_a, train_b, task_name + " train");
    task.query_pool = take_balanced(pools.train, spec.class_a, spec.class_b,
                                    query_pool_size, train_a, train_b,
                                    task_name + " query pool");
    std::size_t test_a = 0, test_b = 0;
    task.test = take_balanced(pools.test, spec.class_a, spec.class_b, test_size, test_a,
                              test_b, task_name + " test");

    // deterministic interleave so batches see both classes early
    auto interleave = [](std::vector<ImageSample> &v) {
        std::vector<ImageSample> mixed;
        mixed.reserve(v.size());
        const std::size_t half = (v.size() + 1) / 2;
        for (std::size_t i = 0; i < half; ++i) {
            mixed.push_back(std::move(v[i]));
            if (half + i < v.size()) mixed.push_back(std::move(v[half + i]));
        }
        v = std::move(mixed);
    };
    interleave(task.train);
    interleave(task.test);
    interleave(task.query_pool);
    return task;
}

std::vector<std::vector<double>> resized_inputs(const std::vector<ImageSample> &images,
                                                int side, double anti_alias_sigma) {
    std::vector<std::vector<double>> out;
    out.reserve(images.size());
    for (const ImageSample &img : images) {
        const ImageSample &src = img;
        if (anti_alias_sigma > 0.0) {
            out.push_back(
                flatten(bilinear_downsample(gaussian_blur(src, anti_alias_sigma), side, side)));
        } else {
            out.push_back(flatten(bilinear_downsample(src, side, side)));
        }
    }
    return out;
}

double victim_anti_alias_sigma(SynthKind kind) {
    return kind == SynthKind::Digits ? 2.0 : 2.6;
}

std::vector<int> labels_of(const std::vector<ImageSample> &images) {
    std::vector<int> labels;
    labels.reserve(images.size());
    for (const ImageSample &img : images) labels.push_back(img.label.value_or(-1));
    return labels;
}

} // namespace copyqnn::data
