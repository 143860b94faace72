// Command-line front end. Links only the C API in libaad.

#include "aad/aad.h"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct ConfigDeleter
{
    void operator()(aad_config* c) const { aad_config_destroy(c); }
};
struct DatasetDeleter
{
    void operator()(aad_dataset* d) const { aad_dataset_destroy(d); }
};
struct ReportDeleter
{
    void operator()(aad_report* r) const { aad_report_destroy(r); }
};

using ConfigPtr = std::unique_ptr<aad_config, ConfigDeleter>;
using DatasetPtr = std::unique_ptr<aad_dataset, DatasetDeleter>;
using ReportPtr = std::unique_ptr<aad_report, ReportDeleter>;

class Failure
{
public:
    explicit Failure(aad_status s) : status(s) {}
    aad_status status;
};

void check(aad_status s)
{
    if (s != AAD_OK) throw Failure(s);
}

int exit_code(aad_status s)
{
    switch (s) {
    case AAD_ERR_INVALID_ARGUMENT:
    case AAD_ERR_INVALID_CONFIG:
    case AAD_ERR_PLAN_INFEASIBLE: return kExitUsage;
    default: return kExitData;
    }
}

// Layers the config file, then `--key value` overrides.
ConfigPtr make_config(const std::string& file, const std::vector<std::string>& extras)
{
    aad_config* raw = nullptr;
    check(aad_config_create(&raw));
    ConfigPtr cfg(raw);
    if (!file.empty()) check(aad_config_load_file(cfg.get(), file.c_str()));
    for (std::size_t i = 0; i < extras.size(); ++i) {
        const std::string& flag = extras[i];
        if (flag.rfind("--", 0) != 0 || flag.size() < 3) {
            throw CLI::ValidationError("override", "unexpected argument '" + flag + "'");
        }
        std::string key = flag.substr(2);
        std::string value;
        if (const auto eq = key.find('='); eq != std::string::npos) {
            value = key.substr(eq + 1);
            key.erase(eq);
        } else {
            if (i + 1 >= extras.size()) throw CLI::ValidationError("override", "missing value for " + flag);
            value = extras[++i];
        }
        for (auto& c : key) {
            if (c == '-') c = '_';
        }
        check(aad_config_set(cfg.get(), key.c_str(), value.c_str()));
    }
    return cfg;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Unsupervised CCA-based auditory attention decoding"};
    app.require_subcommand(1);

    std::string config_file;
    std::string out_path;
    std::string data_dir;
    bool no_parallel = false;
    std::string summary_in, summary_out;

    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset directory");
    synth->add_option("--config", config_file, "key = value config file");
    synth->add_option("--out", out_path, "Output directory")->required();
    synth->allow_extras();

    auto* train = app.add_subcommand("train", "Train one method on one dataset and print its accuracy");
    train->add_option("--config", config_file, "key = value config file");
    train->add_option("--data", data_dir, "Dataset directory (synthesized from the config when omitted)");
    train->allow_extras();

    auto* experiment = app.add_subcommand("experiment", "Run a fold x size x seed experiment and write CSV");
    experiment->add_option("--config", config_file, "key = value config file");
    experiment->add_option("--out", out_path, "CSV output path (default: config key 'output' or stdout)");
    experiment->add_flag("--no-parallel", no_parallel, "Run cells sequentially for clean timing");
    experiment->allow_extras();

    auto* summarize = app.add_subcommand("summarize", "Per-method means/stds of an experiment CSV");
    summarize->add_option("input", summary_in, "Experiment CSV")->required();
    summarize->add_option("output", summary_out, "Summary CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*synth) {
            auto cfg = make_config(config_file, synth->remaining());
            aad_dataset* raw = nullptr;
            check(aad_dataset_synthesize(cfg.get(), &raw));
            DatasetPtr data(raw);
            check(aad_dataset_save(data.get(), out_path.c_str()));
            aad_dataset_info info{};
            check(aad_dataset_info_get(data.get(), &info));
            std::printf("wrote %zu segments of %zu samples to %s\n", info.n_segments, info.segment_len,
                        out_path.c_str());
        } else if (*train) {
            auto cfg = make_config(config_file, train->remaining());
            aad_dataset* raw = nullptr;
            check(data_dir.empty() ? aad_dataset_synthesize(cfg.get(), &raw)
                                   : aad_dataset_load(data_dir.c_str(), &raw));
            DatasetPtr data(raw);
            aad_dataset_info info{};
            check(aad_dataset_info_get(data.get(), &info));
            std::vector<int> labels(info.n_segments);
            aad_train_summary summary{};
            check(aad_train(data.get(), cfg.get(), &summary, labels.data(), labels.size()));
            if (std::isnan(summary.transductive_accuracy)) {
                std::printf("accuracy: n/a (no ground truth)\n");
            } else {
                std::printf("accuracy: %.6g\n", summary.transductive_accuracy);
            }
            std::printf("iterations: %d\nconverged: %s\nwall_time_seconds: %.6g\nlabels:", summary.iterations_run,
                        summary.converged ? "true" : "false", summary.wall_time_seconds);
            for (int l : labels) std::printf(" %d", l);
            std::printf("\n");
        } else if (*experiment) {
            auto extras = experiment->remaining();
            if (no_parallel) {
                extras.emplace_back("--parallel");
                extras.emplace_back("false");
            }
            std::string target = out_path;
            auto cfg = make_config(config_file, extras);
            aad_report* raw = nullptr;
            check(aad_experiment_run(cfg.get(), &raw));
            ReportPtr report(raw);
            if (target.empty()) {
                // fall back to the config's `output` key, then stdout
                char buf[4096];
                if (aad_config_get(cfg.get(), "output", buf, sizeof buf) == AAD_OK) target = buf;
            }
            check(aad_report_write_csv(report.get(), target.empty() ? "/dev/stdout" : target.c_str()));
            if (!target.empty()) std::fprintf(stderr, "wrote %zu rows to %s\n", aad_report_rows(report.get()), target.c_str());
        } else if (*summarize) {
            check(aad_summarize_csv(summary_in.c_str(), summary_out.c_str()));
        }
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const Failure& f) {
        std::fprintf(stderr, "error: %s: %s\n", aad_status_string(f.status), aad_last_error());
        return exit_code(f.status);
    }
    return 0;
}
