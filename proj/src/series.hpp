#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace teflow {

/// A named scalar channel sampled at uniform intervals.
struct TimeSeries {
    std::string name;
    std::vector<double> values;
    double dt = 1.0;
};

/// Ordered collection of equal-length channels with unique names.
class Dataset {
public:
    Dataset() = default;

    /// Appends a channel. Throws if the name is taken or the length
    /// disagrees with existing channels.
    void add_channel(TimeSeries series);

    std::size_t channel_count() const { return channels_.size(); }
    std::size_t length() const;
    bool empty() const { return channels_.empty(); }

    const TimeSeries& channel(std::size_t idx) const;
    const TimeSeries& channel(const std::string& name) const;
    bool has_channel(const std::string& name) const;
    const std::vector<TimeSeries>& channels() const { return channels_; }

private:
    std::vector<TimeSeries> channels_;
};

/// Delay-embedded states paired with their scalar successors.
///
/// Row i of `states` is (v[i], v[i+tau], ..., v[i+(dim-1)tau]) and
/// successors[i] = v[i + (dim-1)tau + 1]. source_indices[i] is the index of
/// the first coordinate in the originating series, so coordinate j of state i
/// equals raw[source_indices[i] + j*tau].
struct StateSeries {
    std::vector<double> states;   // row-major, size() * dim entries
    std::vector<double> successors;
    std::vector<std::size_t> source_indices;
    std::size_t dim = 0;
    std::size_t tau = 0;

    std::size_t size() const { return successors.size(); }

    std::span<const double> state(std::size_t i) const {
        return {states.data() + i * dim, dim};
    }
};

/// Parses a CSV file: header row of channel names, numeric data rows.
/// Accepts LF and CRLF, '.' decimal point, UTF-8 (BOM tolerated).
/// Throws std::runtime_error naming the offending row/column on bad input.
Dataset load_csv(const std::filesystem::path& path, char delimiter = ',');

/// Writes header + rows with 17 significant digits, so load(save(d)) == d
/// bit-for-bit. Throws on empty dataset or unwritable path.
void save_csv(const Dataset& dataset, const std::filesystem::path& path,
              char delimiter = ',');

/// Takens delay embedding with successor alignment.
/// Requires series.values.size() >= (d-1)*tau + 2.
StateSeries delay_embed(const TimeSeries& series, std::size_t d,
                        std::size_t tau);

/// Row-wise concatenation of two aligned embeddings (conditioning space of
/// p(a_{n+1} | a_n, b_n)). Successors come from `cond_a`. Both inputs must
/// share (d, tau) and source indices.
StateSeries joint_embed(const StateSeries& cond_a, const StateSeries& cond_b);

/// (v - mean) / std. Throws on a constant channel.
TimeSeries zscored(const TimeSeries& series);

}  // namespace teflow
