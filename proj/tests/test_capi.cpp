#include "aad/aad.h"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace {

aad_config* small_config()
{
    aad_config* cfg = nullptr;
    REQUIRE(aad_config_create(&cfg) == AAD_OK);
    aad_config_set(cfg, "n_segments", "8");
    aad_config_set(cfg, "segment_len", "300");
    aad_config_set(cfg, "d_eeg", "4");
    aad_config_set(cfg, "snr_attended", "0.01");
    aad_config_set(cfg, "snr_unattended", "0.0005");
    aad_config_set(cfg, "synth_seed", "3");
    return cfg;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream is(p);
    return {std::istreambuf_iterator<char>(is), {}};
}

} // namespace

TEST_CASE("status strings and null handles")
{
    CHECK(std::string(aad_status_string(AAD_OK)) == "ok");
    CHECK(std::string(aad_status_string(AAD_ERR_PLAN_INFEASIBLE)).size() > 0);
    CHECK(aad_config_create(nullptr) == AAD_ERR_INVALID_ARGUMENT);
    CHECK(std::string(aad_last_error()).find("null") != std::string::npos);
    CHECK(aad_report_rows(nullptr) == 0);
    aad_config_destroy(nullptr);
    aad_dataset_destroy(nullptr);
    aad_report_destroy(nullptr);
}

TEST_CASE("config get and set")
{
    aad_config* cfg = small_config();
    char buf[32];
    CHECK(aad_config_get(cfg, "d_eeg", buf, sizeof buf) == AAD_OK);
    CHECK(std::string(buf) == "4");
    CHECK(aad_config_get(cfg, "missing", buf, sizeof buf) == AAD_ERR_INVALID_ARGUMENT);
    char tiny[1];
    CHECK(aad_config_get(cfg, "d_eeg", tiny, sizeof tiny) == AAD_ERR_INVALID_ARGUMENT);
    CHECK(aad_config_set(cfg, "", "1") == AAD_ERR_INVALID_CONFIG);
    CHECK(aad_config_load_file(cfg, "/nonexistent/aad.cfg") == AAD_ERR_IO);
    aad_config_destroy(cfg);
}

TEST_CASE("synthesize, save, load and train")
{
    aad_config* cfg = small_config();
    aad_dataset* data = nullptr;
    REQUIRE(aad_dataset_synthesize(cfg, &data) == AAD_OK);
    aad_dataset_info info{};
    REQUIRE(aad_dataset_info_get(data, &info) == AAD_OK);
    CHECK(info.n_segments == 8);
    CHECK(info.segment_len == 300);
    CHECK(info.eeg_channels == 4);
    CHECK(info.audio_features == 1);
    CHECK(info.has_truth == 1);

    const auto dir = std::filesystem::temp_directory_path() / "aad_capi_dataset";
    std::filesystem::remove_all(dir);
    REQUIRE(aad_dataset_save(data, dir.string().c_str()) == AAD_OK);
    aad_dataset* loaded = nullptr;
    REQUIRE(aad_dataset_load(dir.string().c_str(), &loaded) == AAD_OK);

    for (const char* method : {"single", "two", "soft", "sum_init", "cv_single", "supervised"}) {
        aad_config_set(cfg, "method", method);
        std::vector<int> labels(8, 0);
        aad_train_summary a{}, b{};
        REQUIRE(aad_train(data, cfg, &a, labels.data(), labels.size()) == AAD_OK);
        for (int l : labels) CHECK((l == 1 || l == 2));
        CHECK(a.transductive_accuracy >= 0.0);
        CHECK(a.iterations_run >= 1);
        CHECK(a.solver_calls >= 1);
        REQUIRE(aad_train(loaded, cfg, &b, nullptr, 0) == AAD_OK);
        CHECK(a.transductive_accuracy == b.transductive_accuracy);
    }

    std::vector<int> small(3);
    aad_train_summary s{};
    aad_config_set(cfg, "method", "single");
    CHECK(aad_train(data, cfg, &s, small.data(), small.size()) == AAD_ERR_INVALID_ARGUMENT);

    std::filesystem::remove(dir / "truth.csv");
    aad_dataset* unlabeled = nullptr;
    REQUIRE(aad_dataset_load(dir.string().c_str(), &unlabeled) == AAD_OK);
    REQUIRE(aad_train(unlabeled, cfg, &s, nullptr, 0) == AAD_OK);
    CHECK(std::isnan(s.transductive_accuracy));
    aad_config_set(cfg, "method", "supervised");
    CHECK(aad_train(unlabeled, cfg, &s, nullptr, 0) == AAD_ERR_INVALID_ARGUMENT);

    aad_dataset_destroy(unlabeled);
    aad_dataset_destroy(loaded);
    aad_dataset_destroy(data);
    aad_config_destroy(cfg);
}

TEST_CASE("error statuses")
{
    aad_config* cfg = small_config();
    aad_dataset* data = nullptr;
    aad_config_set(cfg, "bogus_key", "1");
    CHECK(aad_dataset_synthesize(cfg, &data) == AAD_ERR_INVALID_CONFIG);
    CHECK(std::string(aad_last_error()).find("bogus_key") != std::string::npos);
    aad_config_destroy(cfg);

    cfg = small_config();
    aad_config_set(cfg, "snr_unattended", "1");
    CHECK(aad_dataset_synthesize(cfg, &data) == AAD_ERR_INVALID_CONFIG);
    aad_config_destroy(cfg);

    CHECK(aad_dataset_load("/nonexistent/aad_dir", &data) == AAD_ERR_IO);

    const auto dir = std::filesystem::temp_directory_path() / "aad_capi_malformed";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    for (const char* f : {"eeg.aadm", "spk1.aadm", "spk2.aadm"}) std::ofstream(dir / f) << "junk";
    std::ofstream(dir / "segment_len.txt") << "10\n";
    CHECK(aad_dataset_load(dir.string().c_str(), &data) == AAD_ERR_MALFORMED_FILE);

    cfg = small_config();
    aad_config_set(cfg, "lag_typo", "1");
    aad_report* report = nullptr;
    CHECK(aad_experiment_run(cfg, &report) == AAD_ERR_INVALID_CONFIG);
    aad_config_destroy(cfg);

    cfg = small_config();
    aad_config_set(cfg, "training_sizes", "50");
    CHECK(aad_experiment_run(cfg, &report) == AAD_ERR_PLAN_INFEASIBLE);
    aad_config_destroy(cfg);
}

TEST_CASE("experiment report and summary")
{
    aad_config* cfg = small_config();
    aad_config_set(cfg, "methods", "single,sum_init,supervised");
    aad_config_set(cfg, "training_sizes", "3,5");
    aad_config_set(cfg, "folds", "1");
    aad_config_set(cfg, "seeds", "1,2");
    aad_report* report = nullptr;
    REQUIRE(aad_experiment_run(cfg, &report) == AAD_OK);
    CHECK(aad_report_rows(report) == 3 * 2 * 2);

    const auto dir = std::filesystem::temp_directory_path() / "aad_capi_report";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    REQUIRE(aad_report_write_csv(report, (dir / "r.csv").string().c_str()) == AAD_OK);
    REQUIRE(aad_summarize_csv((dir / "r.csv").string().c_str(), (dir / "s.csv").string().c_str()) == AAD_OK);
    const auto summary = slurp(dir / "s.csv");
    CHECK(summary.find("sum_init,5,2,") != std::string::npos);
    CHECK(aad_report_write_csv(report, "/nonexistent/dir/r.csv") == AAD_ERR_IO);
    CHECK(aad_summarize_csv("/nonexistent/r.csv", (dir / "x.csv").string().c_str()) == AAD_ERR_IO);
    aad_report_destroy(report);
    aad_config_destroy(cfg);
}
