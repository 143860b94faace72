#include "aad/experiment.hpp"

#include "aad/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>
#include <tuple>

namespace aad {

namespace {

struct Cell
{
    std::uint64_t seed = 0;
    int fold = 0;
    std::size_t size = 0;
    const StoredDataset* data = nullptr;
    std::vector<std::size_t> fold_members;   // held-out fold, sorted
};

std::size_t method_rank(Method m)
{
    return static_cast<std::size_t>(std::find(std::begin(kAllMethods), std::end(kAllMethods), m) -
                                    std::begin(kAllMethods));
}

std::vector<std::vector<std::size_t>> random_folds(std::size_t k, int n_folds, std::uint64_t seed)
{
    std::vector<std::size_t> order(k);
    for (std::size_t i = 0; i < k; ++i) order[i] = i;
    std::mt19937_64 rng(mix_seed(seed, 0xF01D));
    for (std::size_t i = k; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);

    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(n_folds));
    if (n_folds == 1) return folds;   // held-out data is whatever the training block leaves
    for (std::size_t p = 0; p < k; ++p) folds[p % static_cast<std::size_t>(n_folds)].push_back(order[p]);
    for (auto& f : folds) std::sort(f.begin(), f.end());
    return folds;
}

std::size_t dataset_size(const ExperimentPlan& plan)
{
    return plan.external ? plan.external->segments.size() : plan.synth.n_segments;
}

std::vector<ReportRow> run_cell(const ExperimentPlan& plan, const Cell& cell)
{
    const auto& segments = cell.data->segments;
    const auto& truth = cell.data->truth;
    const std::size_t k = segments.size();

    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < k; ++i) {
        if (!std::binary_search(cell.fold_members.begin(), cell.fold_members.end(), i)) pool.push_back(i);
    }
    const std::uint64_t cell_seed = mix_seed(mix_seed(cell.seed, static_cast<std::uint64_t>(cell.fold)), cell.size);
    std::mt19937_64 rng(mix_seed(cell_seed, 0x5B));
    const std::size_t start = rng() % (pool.size() - cell.size + 1);
    const std::vector<std::size_t> train_idx(pool.begin() + static_cast<std::ptrdiff_t>(start),
                                             pool.begin() + static_cast<std::ptrdiff_t>(start + cell.size));
    std::vector<std::size_t> test_idx = cell.fold_members;
    if (plan.n_folds == 1) {
        for (std::size_t i = 0; i < k; ++i) {
            if (!std::binary_search(train_idx.begin(), train_idx.end(), i)) test_idx.push_back(i);
        }
    }

    const SegmentSet train_set = segments.subset(train_idx);
    const Assignment train_truth = subset(truth, train_idx);
    const SegmentSet test_set = prepare_segments(segments.subset(test_idx), plan.train);
    const Assignment test_truth = subset(truth, test_idx);

    std::vector<Method> methods = plan.methods;
    const bool baseline_listed = std::find(methods.begin(), methods.end(), Method::single) != methods.end();
    if (!baseline_listed) methods.insert(methods.begin(), Method::single);

    std::vector<ReportRow> rows;
    double baseline_cpu = 0.0;
    for (Method m : methods) {
        TrainConfig cfg = plan.train;
        cfg.method = m;
        cfg.seed = cell_seed;
        const TrainResult result = train(train_set, cfg, &train_truth);

        ReportRow row;
        row.method = m;
        row.training_size = cell.size;
        row.fold = cell.fold;
        row.seed = cell.seed;
        if (m != Method::supervised) row.transductive_accuracy = accuracy(result.final_labels, train_truth);
        row.inductive_accuracy = accuracy(classify_all(result.model, test_set).labels, test_truth);
        row.wall_time_seconds = result.wall_time_seconds;
        row.cpu_time_seconds = result.cpu_time_seconds;
        row.iterations_run = result.iterations_run;
        row.converged = result.converged;
        row.train_indices = train_idx;
        if (m == Method::single) baseline_cpu = result.cpu_time_seconds;
        rows.push_back(std::move(row));
    }
    // Guard against a zero reading from a coarse clock; x / x stays exactly 1.
    baseline_cpu = std::max(baseline_cpu, 1e-9);
    for (auto& row : rows) row.normalized_cpu_time = std::max(row.cpu_time_seconds, 1e-9) / baseline_cpu;
    if (!baseline_listed) rows.erase(rows.begin());
    return rows;
}

std::string format_g6(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

template <class T>
std::vector<T> parse_numbers(const std::vector<std::string>& items, const char* key)
{
    std::vector<T> out;
    for (const auto& s : items) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            out.push_back(static_cast<T>(v));
        } catch (const std::logic_error&) {
            fail(ErrorCode::invalid_config, std::string("config key '") + key + "': bad entry '" + s + "'");
        }
    }
    return out;
}

} // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b)
{
    // splitmix64 finalizer over a combination of both inputs
    std::uint64_t z = a * 0x9E3779B97F4A7C15ULL + b + 0x632BE59BD9B4E019ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void ExperimentPlan::validate() const
{
    train.validate();
    if (methods.empty() || training_sizes.empty() || seeds.empty()) {
        fail(ErrorCode::invalid_config, "experiment: methods, training_sizes and seeds must be non-empty");
    }
    if (n_folds < 1) fail(ErrorCode::invalid_config, "experiment: folds must be >= 1");
    if (external) {
        if (external->truth.size() != external->segments.size()) {
            fail(ErrorCode::invalid_config, "experiment: external data needs a truth sidecar");
        }
    } else {
        synth.validate();
    }
    const std::size_t k = dataset_size(*this);
    if (static_cast<std::size_t>(n_folds) > k) {
        fail(ErrorCode::plan_infeasible, "experiment: more folds than segments");
    }
    // Smallest training pool over folds; one fold means the training block is
    // drawn from everything and must leave at least one segment for testing.
    const std::size_t largest_fold = n_folds == 1 ? 1 : (k + static_cast<std::size_t>(n_folds) - 1) / n_folds;
    const std::size_t capacity = k - largest_fold;
    for (auto size : training_sizes) {
        if (size < 1 || size > capacity) {
            fail(ErrorCode::plan_infeasible,
                 "experiment: training size " + std::to_string(size) + " outside [1, " + std::to_string(capacity) +
                     "] for " + std::to_string(k) + " segments in " + std::to_string(n_folds) + " folds");
        }
    }
}

ExperimentReport run_experiment(const ExperimentPlan& plan)
{
    plan.validate();

    std::vector<StoredDataset> datasets;
    datasets.reserve(plan.seeds.size());
    for (auto seed : plan.seeds) {
        if (plan.external) {
            datasets.push_back(*plan.external);
        } else {
            SynthConfig sc = plan.synth;
            sc.seed = mix_seed(plan.synth.seed, seed);
            SynthDataset ds = generate(sc);
            datasets.push_back(StoredDataset{std::move(ds.segments), std::move(ds.truth)});
        }
    }

    std::vector<Cell> cells;
    for (std::size_t s = 0; s < plan.seeds.size(); ++s) {
        const auto folds = random_folds(datasets[s].segments.size(), plan.n_folds, plan.seeds[s]);
        for (int f = 0; f < plan.n_folds; ++f) {
            for (auto size : plan.training_sizes) {
                cells.push_back(Cell{plan.seeds[s], f, size, &datasets[s], folds[static_cast<std::size_t>(f)]});
            }
        }
    }

    std::vector<std::vector<ReportRow>> results(cells.size());
    const unsigned workers =
        plan.parallel ? std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), cells.size())) : 1u;
    if (workers <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) results[i] = run_cell(plan, cells[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < cells.size(); i = next++) {
                    try {
                        results[i] = run_cell(plan, cells[i]);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    ExperimentReport report;
    for (auto& r : results) {
        for (auto& row : r) report.rows.push_back(std::move(row));
    }
    report.sort();
    return report;
}

void ExperimentReport::sort()
{
    std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
        return std::make_tuple(method_rank(a.method), a.training_size, a.fold, a.seed) <
               std::make_tuple(method_rank(b.method), b.training_size, b.fold, b.seed);
    });
}

std::string report_csv(const ExperimentReport& report)
{
    ExperimentReport sorted = report;
    sorted.sort();
    std::string out = std::string(kReportHeader) + "\n";
    for (const auto& r : sorted.rows) {
        out += std::string(method_name(r.method)) + ',' + std::to_string(r.training_size) + ',' +
               std::to_string(r.fold) + ',' + std::to_string(r.seed) + ',' +
               (r.transductive_accuracy ? format_g6(*r.transductive_accuracy) : std::string()) + ',' +
               format_g6(r.inductive_accuracy) + ',' + format_g6(r.wall_time_seconds) + ',' +
               format_g6(r.normalized_cpu_time) + ',' + std::to_string(r.iterations_run) + ',' +
               (r.converged ? "true" : "false") + '\n';
    }
    return out;
}

void emit_csv(const ExperimentReport& report, const std::filesystem::path& path)
{
    std::ofstream os(path, std::ios::trunc);
    if (!os) fail(ErrorCode::io_error, "cannot open " + path.string() + " for writing");
    os << report_csv(report);
    if (!os) fail(ErrorCode::io_error, "write failed: " + path.string());
}

ExperimentReport parse_report_csv(const std::string& text)
{
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != kReportHeader) {
        fail(ErrorCode::malformed_file, "report CSV: unexpected header");
    }
    ExperimentReport report;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        const auto bad = [&] {
            fail(ErrorCode::malformed_file, "report CSV line " + std::to_string(lineno) + ": malformed row");
        };
        if (f.size() != 10) bad();
        ReportRow r;
        const auto method = parse_method(f[0]);
        if (!method) bad();
        r.method = *method;
        try {
            r.training_size = std::stoul(f[1]);
            r.fold = std::stoi(f[2]);
            r.seed = std::stoull(f[3]);
            if (!f[4].empty()) r.transductive_accuracy = std::stod(f[4]);
            r.inductive_accuracy = std::stod(f[5]);
            r.wall_time_seconds = std::stod(f[6]);
            r.normalized_cpu_time = std::stod(f[7]);
            r.iterations_run = std::stoi(f[8]);
        } catch (const std::logic_error&) {
            bad();
        }
        if (f[9] != "true" && f[9] != "false") bad();
        r.converged = f[9] == "true";
        report.rows.push_back(std::move(r));
    }
    return report;
}

ExperimentReport read_report_csv(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is) fail(ErrorCode::io_error, "cannot open " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_report_csv(ss.str());
}

MeanStd mean_std(const std::vector<double>& values)
{
    MeanStd out;
    out.n = values.size();
    if (values.empty()) return out;
    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(values.size()));
    return out;
}

std::vector<SummaryRow> summarize(const ExperimentReport& report)
{
    struct Acc
    {
        std::vector<double> trans, ind, norm;
    };
    std::map<std::pair<std::size_t, std::size_t>, Acc> groups;
    for (const auto& r : report.rows) {
        auto& g = groups[{method_rank(r.method), r.training_size}];
        if (r.transductive_accuracy) g.trans.push_back(*r.transductive_accuracy);
        g.ind.push_back(r.inductive_accuracy);
        g.norm.push_back(r.normalized_cpu_time);
    }
    std::vector<SummaryRow> out;
    for (const auto& [key, g] : groups) {
        SummaryRow s;
        s.method = kAllMethods[key.first];
        s.training_size = key.second;
        s.n = g.ind.size();
        if (!g.trans.empty()) s.transductive_accuracy = mean_std(g.trans);
        s.inductive_accuracy = mean_std(g.ind);
        s.normalized_cpu_time = mean_std(g.norm);
        out.push_back(s);
    }
    return out;
}

std::string summary_csv(const std::vector<SummaryRow>& rows)
{
    std::string out =
        "method,training_size,n,transductive_accuracy_mean,transductive_accuracy_std,inductive_accuracy_mean,"
        "inductive_accuracy_std,normalized_cpu_time_mean,normalized_cpu_time_std\n";
    for (const auto& s : rows) {
        out += std::string(method_name(s.method)) + ',' + std::to_string(s.training_size) + ',' +
               std::to_string(s.n) + ',' +
               (s.transductive_accuracy ? format_g6(s.transductive_accuracy->mean) : std::string()) + ',' +
               (s.transductive_accuracy ? format_g6(s.transductive_accuracy->std) : std::string()) + ',' +
               format_g6(s.inductive_accuracy.mean) + ',' + format_g6(s.inductive_accuracy.std) + ',' +
               format_g6(s.normalized_cpu_time.mean) + ',' + format_g6(s.normalized_cpu_time.std) + '\n';
    }
    return out;
}

std::vector<std::string> train_config_keys()
{
    return {"method", "q", "ridge", "max_iters", "seed", "eeg_lag_min", "eeg_lag_max", "audio_lag_min", "audio_lag_max"};
}

std::vector<std::string> synth_config_keys()
{
    return {"n_segments",   "segment_len",   "d_eeg",       "d_audio", "snr_attended",
            "snr_unattended", "forward_lags", "sample_rate", "synth_seed"};
}

std::vector<std::string> experiment_config_keys()
{
    auto keys = train_config_keys();
    const auto synth = synth_config_keys();
    keys.insert(keys.end(), synth.begin(), synth.end());
    for (const char* k : {"methods", "training_sizes", "folds", "seeds", "parallel", "data_dir", "output"}) {
        keys.emplace_back(k);
    }
    return keys;
}

TrainConfig train_config_from(const Config& cfg)
{
    TrainConfig tc;
    if (const auto m = cfg.get("method")) {
        const auto parsed = parse_method(*m);
        if (!parsed) fail(ErrorCode::invalid_config, "unknown method '" + *m + "'");
        tc.method = *parsed;
    }
    tc.q = static_cast<int>(cfg.get_int("q", tc.q));
    tc.ridge = cfg.get_double("ridge", tc.ridge);
    tc.max_iters = static_cast<int>(cfg.get_int("max_iters", tc.max_iters));
    tc.seed = static_cast<std::uint64_t>(cfg.get_int("seed", static_cast<long long>(tc.seed)));
    tc.eeg_lags.min_lag = static_cast<int>(cfg.get_int("eeg_lag_min", tc.eeg_lags.min_lag));
    tc.eeg_lags.max_lag = static_cast<int>(cfg.get_int("eeg_lag_max", tc.eeg_lags.max_lag));
    tc.audio_lags.min_lag = static_cast<int>(cfg.get_int("audio_lag_min", tc.audio_lags.min_lag));
    tc.audio_lags.max_lag = static_cast<int>(cfg.get_int("audio_lag_max", tc.audio_lags.max_lag));
    tc.validate();
    return tc;
}

SynthConfig synth_config_from(const Config& cfg)
{
    SynthConfig sc;
    const auto non_negative = [&](const char* key, long long fallback) {
        const long long v = cfg.get_int(key, fallback);
        if (v < 0) fail(ErrorCode::invalid_config, std::string("config key '") + key + "' must be >= 0");
        return v;
    };
    sc.n_segments = static_cast<std::size_t>(non_negative("n_segments", static_cast<long long>(sc.n_segments)));
    sc.segment_len_samples =
        static_cast<std::size_t>(non_negative("segment_len", static_cast<long long>(sc.segment_len_samples)));
    sc.d_eeg = static_cast<int>(cfg.get_int("d_eeg", sc.d_eeg));
    sc.d_audio = static_cast<int>(cfg.get_int("d_audio", sc.d_audio));
    sc.snr_attended = cfg.get_double("snr_attended", sc.snr_attended);
    sc.snr_unattended = cfg.get_double("snr_unattended", sc.snr_unattended);
    sc.forward_lags = static_cast<int>(cfg.get_int("forward_lags", sc.forward_lags));
    sc.sample_rate_hz = cfg.get_double("sample_rate", sc.sample_rate_hz);
    sc.seed = static_cast<std::uint64_t>(non_negative("synth_seed", static_cast<long long>(sc.seed)));
    sc.validate();
    return sc;
}

ExperimentPlan plan_from(const Config& cfg)
{
    ExperimentPlan plan;
    plan.train = train_config_from(cfg);
    if (const auto dir = cfg.get("data_dir"); dir && !dir->empty()) {
        plan.external = load_dataset(*dir);
    } else {
        plan.synth = synth_config_from(cfg);
    }
    if (cfg.has("methods")) {
        plan.methods.clear();
        for (const auto& name : cfg.get_list("methods", {})) {
            const auto m = parse_method(name);
            if (!m) fail(ErrorCode::invalid_config, "unknown method '" + name + "'");
            plan.methods.push_back(*m);
        }
    }
    if (cfg.has("training_sizes")) {
        plan.training_sizes = parse_numbers<std::size_t>(cfg.get_list("training_sizes", {}), "training_sizes");
    }
    plan.n_folds = static_cast<int>(cfg.get_int("folds", plan.n_folds));
    if (cfg.has("seeds")) plan.seeds = parse_numbers<std::uint64_t>(cfg.get_list("seeds", {}), "seeds");
    plan.parallel = cfg.get_bool("parallel", plan.parallel);
    plan.validate();
    return plan;
}

} // namespace aad
