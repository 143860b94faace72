#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <vector>

namespace aad {

/// T x D samples (rows are time) plus the sampling rate.
struct TimeSeries
{
    Eigen::MatrixXd samples;
    double sample_rate_hz = 20.0;

    Eigen::Index length() const noexcept { return samples.rows(); }
    Eigen::Index channels() const noexcept { return samples.cols(); }
};

/// Inclusive range of sample lags. Lag l places the input delayed by l
/// samples in its column block: out(t) = in(t - l). Negative lags advance
/// the input.
struct LagSpec
{
    int min_lag = 0;
    int max_lag = 0;

    int count() const noexcept { return max_lag - min_lag + 1; }
};

/// Converts a window of time offsets relative to the stimulus sample
/// (positive = later in time) to delays. EEG at 0..150 ms after the
/// stimulus becomes lags -3..0 at 20 Hz; envelope history at -250..0 ms
/// becomes lags 0..5.
LagSpec lag_spec_from_ms(double min_ms, double max_ms, double sample_rate_hz);

/// 1 or 2 per segment, the index of the attended speaker.
using Assignment = std::vector<int>;

/// K aligned (EEG, speaker 1, speaker 2) triples.
struct SegmentSet
{
    std::vector<TimeSeries> eeg;
    std::vector<TimeSeries> spk1;
    std::vector<TimeSeries> spk2;

    std::size_t size() const noexcept { return eeg.size(); }
    Eigen::Index eeg_dim() const { return eeg.front().channels(); }
    Eigen::Index audio_dim() const { return spk1.front().channels(); }

    /// Throws Error(dimension_mismatch) when the triple lists or the
    /// per-segment shapes disagree.
    void validate() const;

    SegmentSet subset(const std::vector<std::size_t>& indices) const;
};

Assignment subset(const Assignment& labels, const std::vector<std::size_t>& indices);

TimeSeries lag_embed(const TimeSeries& ts, const LagSpec& spec);

/// Subtracts each column's mean.
TimeSeries center(const TimeSeries& ts);

/// floor(T / len) consecutive non-overlapping segments; the tail is dropped.
SegmentSet cut_segments(const TimeSeries& eeg, const TimeSeries& spk1, const TimeSeries& spk2,
                        std::size_t segment_len_samples);

/// Lag-embeds every segment: EEG with `eeg_lags`, both speakers with
/// `audio_lags`.
SegmentSet embed_segments(const SegmentSet& raw, const LagSpec& eeg_lags, const LagSpec& audio_lags);

// Matrix file: "AADM", u32 version=1, u32 rows, u32 cols, f64 sample rate,
// rows*cols f64 row-major. All little-endian.
void write_matrix(const TimeSeries& ts, const std::filesystem::path& path);
TimeSeries read_matrix(const std::filesystem::path& path);

// Truth sidecar: one "k,label" line per segment, k starting at 0.
void write_truth(const Assignment& labels, const std::filesystem::path& path);
Assignment read_truth(const std::filesystem::path& path);

/// Dataset directory layout: eeg.aadm, spk1.aadm, spk2.aadm (continuous
/// recordings), segment_len.txt and optionally truth.csv.
struct StoredDataset
{
    SegmentSet segments;
    Assignment truth;   // empty when no sidecar is present
};

void save_dataset(const SegmentSet& segments, const Assignment& truth,
                  const std::filesystem::path& dir);
StoredDataset load_dataset(const std::filesystem::path& dir);

double accuracy(const Assignment& predicted, const Assignment& truth);

} // namespace aad
