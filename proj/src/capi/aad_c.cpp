#include "aad/aad.h"

#include "aad/config.hpp"
#include "aad/error.hpp"
#include "aad/experiment.hpp"
#include "aad/signal.hpp"
#include "aad/synth.hpp"
#include "aad/trainers.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <new>
#include <string>

struct aad_config
{
    aad::Config values;
};

struct aad_dataset
{
    aad::StoredDataset data;
};

struct aad_report
{
    aad::ExperimentReport report;
};

namespace {

thread_local std::string g_last_error;

aad_status to_status(aad::ErrorCode code)
{
    using aad::ErrorCode;
    switch (code) {
    case ErrorCode::invalid_argument: return AAD_ERR_INVALID_ARGUMENT;
    case ErrorCode::dimension_mismatch: return AAD_ERR_DIMENSION_MISMATCH;
    case ErrorCode::not_positive_definite: return AAD_ERR_NOT_POSITIVE_DEFINITE;
    case ErrorCode::segment_too_short: return AAD_ERR_SEGMENT_TOO_SHORT;
    case ErrorCode::malformed_file: return AAD_ERR_MALFORMED_FILE;
    case ErrorCode::io_error: return AAD_ERR_IO;
    case ErrorCode::invalid_probability: return AAD_ERR_INVALID_PROBABILITY;
    case ErrorCode::invalid_config: return AAD_ERR_INVALID_CONFIG;
    case ErrorCode::plan_infeasible: return AAD_ERR_PLAN_INFEASIBLE;
    }
    return AAD_ERR_INTERNAL;
}

template <class F>
aad_status guarded(F&& body)
{
    try {
        g_last_error.clear();
        body();
        return AAD_OK;
    } catch (const aad::Error& e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return AAD_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return AAD_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown exception";
        return AAD_ERR_INTERNAL;
    }
}

void check_keys(const aad::Config& cfg)
{
    cfg.check_known(aad::experiment_config_keys());
}

aad_status null_argument(const char* what)
{
    g_last_error = std::string("null argument: ") + what;
    return AAD_ERR_INVALID_ARGUMENT;
}

} // namespace

extern "C" {

const char* aad_status_string(aad_status status)
{
    switch (status) {
    case AAD_OK: return "ok";
    case AAD_ERR_INVALID_ARGUMENT: return "invalid argument";
    case AAD_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case AAD_ERR_NOT_POSITIVE_DEFINITE: return "matrix not positive definite";
    case AAD_ERR_SEGMENT_TOO_SHORT: return "segment too short";
    case AAD_ERR_MALFORMED_FILE: return "malformed file";
    case AAD_ERR_IO: return "i/o error";
    case AAD_ERR_INVALID_PROBABILITY: return "invalid probability";
    case AAD_ERR_INVALID_CONFIG: return "invalid configuration";
    case AAD_ERR_PLAN_INFEASIBLE: return "experiment plan infeasible";
    case AAD_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* aad_last_error(void)
{
    return g_last_error.c_str();
}

aad_status aad_config_create(aad_config** out)
{
    if (!out) return null_argument("out");
    return guarded([&] { *out = new aad_config{}; });
}

void aad_config_destroy(aad_config* cfg)
{
    delete cfg;
}

aad_status aad_config_load_file(aad_config* cfg, const char* path)
{
    if (!cfg || !path) return null_argument("cfg/path");
    return guarded([&] {
        const aad::Config loaded = aad::Config::load(path);
        for (const auto& [k, v] : loaded.values()) cfg->values.set(k, v);
    });
}

aad_status aad_config_set(aad_config* cfg, const char* key, const char* value)
{
    if (!cfg || !key || !value) return null_argument("cfg/key/value");
    return guarded([&] {
        if (*key == '\0') aad::fail(aad::ErrorCode::invalid_config, "empty config key");
        cfg->values.set(key, value);
    });
}

aad_status aad_config_get(const aad_config* cfg, const char* key, char* buf, size_t buf_len)
{
    if (!cfg || !key || !buf) return null_argument("cfg/key/buf");
    return guarded([&] {
        const auto value = cfg->values.get(key);
        if (!value) aad::fail(aad::ErrorCode::invalid_argument, std::string("config key '") + key + "' is not set");
        if (value->size() + 1 > buf_len) aad::fail(aad::ErrorCode::invalid_argument, "buffer too small");
        value->copy(buf, value->size());
        buf[value->size()] = '\0';
    });
}

aad_status aad_dataset_synthesize(const aad_config* cfg, aad_dataset** out)
{
    if (!cfg || !out) return null_argument("cfg/out");
    return guarded([&] {
        check_keys(cfg->values);
        aad::SynthDataset ds = aad::generate(aad::synth_config_from(cfg->values));
        *out = new aad_dataset{aad::StoredDataset{std::move(ds.segments), std::move(ds.truth)}};
    });
}

aad_status aad_dataset_load(const char* dir, aad_dataset** out)
{
    if (!dir || !out) return null_argument("dir/out");
    return guarded([&] { *out = new aad_dataset{aad::load_dataset(dir)}; });
}

aad_status aad_dataset_save(const aad_dataset* data, const char* dir)
{
    if (!data || !dir) return null_argument("data/dir");
    return guarded([&] { aad::save_dataset(data->data.segments, data->data.truth, dir); });
}

aad_status aad_dataset_info_get(const aad_dataset* data, aad_dataset_info* out)
{
    if (!data || !out) return null_argument("data/out");
    return guarded([&] {
        const auto& s = data->data.segments;
        out->n_segments = s.size();
        out->segment_len = s.size() ? static_cast<size_t>(s.eeg.front().length()) : 0;
        out->eeg_channels = s.size() ? static_cast<size_t>(s.eeg_dim()) : 0;
        out->audio_features = s.size() ? static_cast<size_t>(s.audio_dim()) : 0;
        out->has_truth = data->data.truth.empty() ? 0 : 1;
    });
}

void aad_dataset_destroy(aad_dataset* data)
{
    delete data;
}

aad_status aad_train(const aad_dataset* data, const aad_config* cfg, aad_train_summary* out, int* labels,
                     size_t labels_len)
{
    if (!data || !cfg || !out) return null_argument("data/cfg/out");
    return guarded([&] {
        check_keys(cfg->values);
        const aad::TrainConfig tc = aad::train_config_from(cfg->values);
        const auto& truth = data->data.truth;
        const aad::TrainResult r =
            aad::train(data->data.segments, tc, truth.empty() ? nullptr : &truth);
        out->transductive_accuracy =
            truth.empty() ? std::numeric_limits<double>::quiet_NaN() : aad::accuracy(r.final_labels, truth);
        out->iterations_run = r.iterations_run;
        out->converged = r.converged ? 1 : 0;
        out->solver_calls = r.solver_calls;
        out->wall_time_seconds = r.wall_time_seconds;
        out->cpu_time_seconds = r.cpu_time_seconds;
        if (labels) {
            if (labels_len < r.final_labels.size()) {
                aad::fail(aad::ErrorCode::invalid_argument, "label buffer too small");
            }
            for (std::size_t k = 0; k < r.final_labels.size(); ++k) labels[k] = r.final_labels[k];
        }
    });
}

aad_status aad_experiment_run(const aad_config* cfg, aad_report** out)
{
    if (!cfg || !out) return null_argument("cfg/out");
    return guarded([&] {
        check_keys(cfg->values);
        *out = new aad_report{aad::run_experiment(aad::plan_from(cfg->values))};
    });
}

size_t aad_report_rows(const aad_report* report)
{
    return report ? report->report.rows.size() : 0;
}

aad_status aad_report_write_csv(const aad_report* report, const char* path)
{
    if (!report || !path) return null_argument("report/path");
    return guarded([&] { aad::emit_csv(report->report, path); });
}

void aad_report_destroy(aad_report* report)
{
    delete report;
}

aad_status aad_summarize_csv(const char* in_path, const char* out_path)
{
    if (!in_path || !out_path) return null_argument("in_path/out_path");
    return guarded([&] {
        const auto rows = aad::summarize(aad::read_report_csv(in_path));
        std::ofstream os(out_path, std::ios::trunc);
        if (!os) aad::fail(aad::ErrorCode::io_error, std::string("cannot open ") + out_path + " for writing");
        os << aad::summary_csv(rows);
        if (!os) aad::fail(aad::ErrorCode::io_error, std::string("write failed: ") + out_path);
    });
}

} // extern "C"
