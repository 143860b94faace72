#include "aad/signal.hpp"

#include "aad/error.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

static_assert(std::endian::native == std::endian::little,
              "matrix file I/O assumes a little-endian host");

namespace aad {

namespace {

constexpr std::array<char, 4> kMagic{'A', 'A', 'D', 'M'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 4 + 3 * sizeof(std::uint32_t) + sizeof(double);

template <class T>
void put(std::string& buf, T value)
{
    char raw[sizeof(T)];
    std::memcpy(raw, &value, sizeof(T));
    buf.append(raw, sizeof(T));
}

template <class T>
T take(const std::string& buf, std::size_t& offset)
{
    T value;
    std::memcpy(&value, buf.data() + offset, sizeof(T));
    offset += sizeof(T);
    return value;
}

} // namespace

LagSpec lag_spec_from_ms(double min_ms, double max_ms, double sample_rate_hz)
{
    if (min_ms > max_ms) fail(ErrorCode::invalid_argument, "lag window: min > max");
    const auto to_samples = [&](double ms) {
        return static_cast<int>(std::lround(ms * sample_rate_hz / 1000.0));
    };
    return LagSpec{-to_samples(max_ms), -to_samples(min_ms)};
}

void SegmentSet::validate() const
{
    if (eeg.empty()) fail(ErrorCode::dimension_mismatch, "SegmentSet: no segments");
    if (spk1.size() != eeg.size() || spk2.size() != eeg.size()) {
        fail(ErrorCode::dimension_mismatch, "SegmentSet: triple lists differ in length");
    }
    const auto dx = eeg.front().channels();
    const auto ds = spk1.front().channels();
    for (std::size_t k = 0; k < eeg.size(); ++k) {
        const auto t = eeg[k].length();
        if (spk1[k].length() != t || spk2[k].length() != t) {
            fail(ErrorCode::dimension_mismatch,
                 "SegmentSet: segment " + std::to_string(k) + " has unequal lengths");
        }
        if (eeg[k].channels() != dx || spk1[k].channels() != ds || spk2[k].channels() != ds) {
            fail(ErrorCode::dimension_mismatch,
                 "SegmentSet: segment " + std::to_string(k) + " has inconsistent channel count");
        }
    }
}

SegmentSet SegmentSet::subset(const std::vector<std::size_t>& indices) const
{
    SegmentSet out;
    out.eeg.reserve(indices.size());
    out.spk1.reserve(indices.size());
    out.spk2.reserve(indices.size());
    for (auto k : indices) {
        out.eeg.push_back(eeg.at(k));
        out.spk1.push_back(spk1.at(k));
        out.spk2.push_back(spk2.at(k));
    }
    return out;
}

Assignment subset(const Assignment& labels, const std::vector<std::size_t>& indices)
{
    Assignment out;
    out.reserve(indices.size());
    for (auto k : indices) out.push_back(labels.at(k));
    return out;
}

TimeSeries lag_embed(const TimeSeries& ts, const LagSpec& spec)
{
    if (spec.min_lag > spec.max_lag) {
        fail(ErrorCode::invalid_argument, "lag_embed: min_lag > max_lag");
    }
    const Eigen::Index t = ts.length();
    const Eigen::Index d = ts.channels();
    if (t <= static_cast<Eigen::Index>(spec.max_lag) - spec.min_lag) {
        fail(ErrorCode::segment_too_short,
             "lag_embed: " + std::to_string(t) + " samples cannot hold lag span " +
                 std::to_string(spec.max_lag - spec.min_lag));
    }

    TimeSeries out;
    out.sample_rate_hz = ts.sample_rate_hz;
    out.samples = Eigen::MatrixXd::Zero(t, d * spec.count());
    for (int i = 0; i < spec.count(); ++i) {
        const int lag = spec.min_lag + i;
        const Eigen::Index shift = std::abs(lag);
        const Eigen::Index rows = t - shift;
        auto block = out.samples.middleCols(i * d, d);
        if (lag >= 0) {
            block.bottomRows(rows) = ts.samples.topRows(rows);
        } else {
            block.topRows(rows) = ts.samples.bottomRows(rows);
        }
    }
    return out;
}

TimeSeries center(const TimeSeries& ts)
{
    TimeSeries out = ts;
    if (ts.length() == 0) return out;
    out.samples.rowwise() -= ts.samples.colwise().mean();
    return out;
}

SegmentSet cut_segments(const TimeSeries& eeg, const TimeSeries& spk1, const TimeSeries& spk2,
                        std::size_t segment_len_samples)
{
    if (spk1.length() != eeg.length() || spk2.length() != eeg.length()) {
        fail(ErrorCode::dimension_mismatch, "cut_segments: inputs differ in length");
    }
    if (spk1.channels() != spk2.channels()) {
        fail(ErrorCode::dimension_mismatch, "cut_segments: speakers differ in feature dimension");
    }
    const auto len = static_cast<Eigen::Index>(segment_len_samples);
    if (len < 1 || eeg.length() < len) {
        fail(ErrorCode::segment_too_short, "cut_segments: recording shorter than one segment");
    }

    SegmentSet out;
    const Eigen::Index k_total = eeg.length() / len;
    const auto slice = [&](const TimeSeries& ts, Eigen::Index k) {
        return TimeSeries{ts.samples.middleRows(k * len, len), ts.sample_rate_hz};
    };
    for (Eigen::Index k = 0; k < k_total; ++k) {
        out.eeg.push_back(slice(eeg, k));
        out.spk1.push_back(slice(spk1, k));
        out.spk2.push_back(slice(spk2, k));
    }
    return out;
}

SegmentSet embed_segments(const SegmentSet& raw, const LagSpec& eeg_lags, const LagSpec& audio_lags)
{
    SegmentSet out;
    out.eeg.reserve(raw.size());
    out.spk1.reserve(raw.size());
    out.spk2.reserve(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k) {
        out.eeg.push_back(lag_embed(raw.eeg[k], eeg_lags));
        out.spk1.push_back(lag_embed(raw.spk1[k], audio_lags));
        out.spk2.push_back(lag_embed(raw.spk2[k], audio_lags));
    }
    return out;
}

void write_matrix(const TimeSeries& ts, const std::filesystem::path& path)
{
    std::string buf;
    buf.reserve(kHeaderBytes + ts.samples.size() * sizeof(double));
    buf.append(kMagic.data(), kMagic.size());
    put<std::uint32_t>(buf, kVersion);
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(ts.length()));
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(ts.channels()));
    put<double>(buf, ts.sample_rate_hz);
    for (Eigen::Index r = 0; r < ts.length(); ++r) {
        for (Eigen::Index c = 0; c < ts.channels(); ++c) put<double>(buf, ts.samples(r, c));
    }

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) fail(ErrorCode::io_error, "cannot open " + path.string() + " for writing");
    os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!os) fail(ErrorCode::io_error, "write failed: " + path.string());
}

TimeSeries read_matrix(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) fail(ErrorCode::io_error, "cannot open " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    const std::string buf = ss.str();

    if (buf.size() < kHeaderBytes || std::memcmp(buf.data(), kMagic.data(), kMagic.size()) != 0) {
        fail(ErrorCode::malformed_file, path.string() + ": missing AADM header");
    }
    std::size_t offset = kMagic.size();
    const auto version = take<std::uint32_t>(buf, offset);
    if (version != kVersion) {
        fail(ErrorCode::malformed_file,
             path.string() + ": unsupported version " + std::to_string(version));
    }
    const auto rows = take<std::uint32_t>(buf, offset);
    const auto cols = take<std::uint32_t>(buf, offset);
    TimeSeries ts;
    ts.sample_rate_hz = take<double>(buf, offset);

    const std::uint64_t payload = std::uint64_t{rows} * cols * sizeof(double);
    if (buf.size() - kHeaderBytes != payload) {
        fail(ErrorCode::malformed_file, path.string() + ": payload size does not match header");
    }
    ts.samples.resize(rows, cols);
    for (std::uint32_t r = 0; r < rows; ++r) {
        for (std::uint32_t c = 0; c < cols; ++c) ts.samples(r, c) = take<double>(buf, offset);
    }
    return ts;
}

void write_truth(const Assignment& labels, const std::filesystem::path& path)
{
    std::ofstream os(path, std::ios::trunc);
    if (!os) fail(ErrorCode::io_error, "cannot open " + path.string() + " for writing");
    for (std::size_t k = 0; k < labels.size(); ++k) os << k << ',' << labels[k] << '\n';
    if (!os) fail(ErrorCode::io_error, "write failed: " + path.string());
}

Assignment read_truth(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is) fail(ErrorCode::io_error, "cannot open " + path.string());
    Assignment labels;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::size_t k = 0;
        int label = 0;
        char comma = 0;
        std::istringstream ls(line);
        if (!(ls >> k >> comma >> label) || comma != ',' || (label != 1 && label != 2) ||
            k != labels.size()) {
            fail(ErrorCode::malformed_file,
                 path.string() + ":" + std::to_string(lineno) + ": expected \"k,label\"");
        }
        labels.push_back(label);
    }
    return labels;
}

void save_dataset(const SegmentSet& segments, const Assignment& truth,
                  const std::filesystem::path& dir)
{
    segments.validate();
    std::filesystem::create_directories(dir);
    const auto join = [&](const std::vector<TimeSeries>& parts) {
        Eigen::Index rows = 0;
        for (const auto& p : parts) rows += p.length();
        TimeSeries all{Eigen::MatrixXd(rows, parts.front().channels()),
                       parts.front().sample_rate_hz};
        Eigen::Index at = 0;
        for (const auto& p : parts) {
            all.samples.middleRows(at, p.length()) = p.samples;
            at += p.length();
        }
        return all;
    };
    for (std::size_t k = 1; k < segments.size(); ++k) {
        if (segments.eeg[k].length() != segments.eeg[0].length()) {
            fail(ErrorCode::dimension_mismatch, "save_dataset: segments must share one length");
        }
    }
    write_matrix(join(segments.eeg), dir / "eeg.aadm");
    write_matrix(join(segments.spk1), dir / "spk1.aadm");
    write_matrix(join(segments.spk2), dir / "spk2.aadm");
    {
        std::ofstream os(dir / "segment_len.txt", std::ios::trunc);
        os << segments.eeg[0].length() << '\n';
        if (!os) fail(ErrorCode::io_error, "write failed: segment_len.txt");
    }
    if (!truth.empty()) write_truth(truth, dir / "truth.csv");
}

StoredDataset load_dataset(const std::filesystem::path& dir)
{
    std::size_t len = 0;
    {
        std::ifstream is(dir / "segment_len.txt");
        if (!is) fail(ErrorCode::io_error, "missing " + (dir / "segment_len.txt").string());
        if (!(is >> len) || len == 0) {
            fail(ErrorCode::malformed_file, "segment_len.txt: expected a positive integer");
        }
    }
    StoredDataset out;
    out.segments = cut_segments(read_matrix(dir / "eeg.aadm"), read_matrix(dir / "spk1.aadm"),
                                read_matrix(dir / "spk2.aadm"), len);
    out.segments.validate();
    if (std::filesystem::exists(dir / "truth.csv")) {
        out.truth = read_truth(dir / "truth.csv");
        if (out.truth.size() != out.segments.size()) {
            fail(ErrorCode::dimension_mismatch, "truth.csv: label count differs from segment count");
        }
    }
    return out;
}

double accuracy(const Assignment& predicted, const Assignment& truth)
{
    if (predicted.size() != truth.size() || truth.empty()) {
        fail(ErrorCode::dimension_mismatch, "accuracy: label vectors differ in length");
    }
    std::size_t hits = 0;
    for (std::size_t k = 0; k < truth.size(); ++k) hits += predicted[k] == truth[k];
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

} // namespace aad
