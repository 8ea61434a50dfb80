#include "series.hpp"

#include "errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string_view>

namespace teflow {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_line(std::string_view line, char delimiter) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(delimiter, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

}  // namespace

void Dataset::add_channel(TimeSeries series) {
    if (!channels_.empty() && series.values.size() != channels_.front().values.size()) {
        throw std::invalid_argument("dataset channels must share one length: '" +
                                    series.name + "' has " +
                                    std::to_string(series.values.size()) +
                                    " samples, expected " +
                                    std::to_string(channels_.front().values.size()));
    }
    if (has_channel(series.name)) {
        throw std::invalid_argument("duplicate channel name '" + series.name + "'");
    }
    channels_.push_back(std::move(series));
}

std::size_t Dataset::length() const {
    return channels_.empty() ? 0 : channels_.front().values.size();
}

const TimeSeries& Dataset::channel(std::size_t idx) const {
    if (idx >= channels_.size()) {
        throw std::out_of_range("channel index " + std::to_string(idx) +
                                " out of range (have " +
                                std::to_string(channels_.size()) + ")");
    }
    return channels_[idx];
}

const TimeSeries& Dataset::channel(const std::string& name) const {
    for (const auto& c : channels_) {
        if (c.name == name) return c;
    }
    throw std::invalid_argument("no channel named '" + name + "'");
}

bool Dataset::has_channel(const std::string& name) const {
    return std::any_of(channels_.begin(), channels_.end(),
                       [&](const TimeSeries& c) { return c.name == name; });
}

Dataset load_csv(const std::filesystem::path& path, char delimiter) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }

    std::string line;
    if (!std::getline(in, line)) {
        throw IoError("'" + path.string() + "' is empty");
    }
    std::string_view header = line;
    if (header.size() >= 3 && header.substr(0, 3) == "\xEF\xBB\xBF") {
        header.remove_prefix(3);  // UTF-8 BOM
    }

    std::vector<std::string> names;
    for (auto cell : split_line(header, delimiter)) {
        names.emplace_back(trim(cell));
    }
    if (names.empty() || (names.size() == 1 && names[0].empty())) {
        throw std::runtime_error("'" + path.string() + "': header row has no channel names");
    }

    std::vector<std::vector<double>> columns(names.size());
    std::size_t file_row = 1;  // header was row 1
    while (std::getline(in, line)) {
        ++file_row;
        std::string_view sv = trim(line);
        if (sv.empty()) continue;
        auto cells = split_line(std::string_view(line), delimiter);
        if (cells.size() != names.size()) {
            throw std::runtime_error("'" + path.string() + "': row " +
                                     std::to_string(file_row) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(names.size()));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            std::string_view cell = trim(cells[c]);
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
                throw std::runtime_error("'" + path.string() + "': non-numeric cell at row " +
                                         std::to_string(file_row) + ", column " +
                                         std::to_string(c + 1) + " (\"" +
                                         std::string(cell) + "\")");
            }
            if (!std::isfinite(v)) {
                throw std::runtime_error("'" + path.string() + "': non-finite value at row " +
                                         std::to_string(file_row) + ", column " +
                                         std::to_string(c + 1));
            }
            columns[c].push_back(v);
        }
    }

    if (columns[0].size() < 2) {
        throw InsufficientData("'" + path.string() + "': fewer than 2 data rows");
    }

    Dataset ds;
    for (std::size_t c = 0; c < names.size(); ++c) {
        ds.add_channel(TimeSeries{names[c], std::move(columns[c]), 1.0});
    }
    return ds;
}

void save_csv(const Dataset& dataset, const std::filesystem::path& path,
              char delimiter) {
    if (dataset.empty()) {
        throw std::invalid_argument("cannot save an empty dataset");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }

    for (std::size_t c = 0; c < dataset.channel_count(); ++c) {
        if (c) out << delimiter;
        out << dataset.channel(c).name;
    }
    out << '\n';

    char buf[64];
    const std::size_t n = dataset.length();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < dataset.channel_count(); ++c) {
            if (c) out << delimiter;
            std::snprintf(buf, sizeof buf, "%.17g", dataset.channel(c).values[i]);
            out << buf;
        }
        out << '\n';
    }
    if (!out) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

StateSeries delay_embed(const TimeSeries& series, std::size_t d, std::size_t tau) {
    if (d == 0 || tau == 0) {
        throw std::invalid_argument("embedding needs d >= 1 and tau >= 1");
    }
    const std::size_t len = series.values.size();
    const std::size_t span = (d - 1) * tau;
    if (len < span + 2) {
        throw InsufficientData("series '" + series.name + "' has " +
                                    std::to_string(len) + " samples, need at least " +
                                    std::to_string(span + 2) + " for d=" +
                                    std::to_string(d) + ", tau=" + std::to_string(tau));
    }

    const std::size_t n = len - span - 1;
    StateSeries out;
    out.dim = d;
    out.tau = tau;
    out.states.resize(n * d);
    out.successors.resize(n);
    out.source_indices.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            out.states[i * d + j] = series.values[i + j * tau];
        }
        out.successors[i] = series.values[i + span + 1];
        out.source_indices[i] = i;
    }
    return out;
}

StateSeries joint_embed(const StateSeries& cond_a, const StateSeries& cond_b) {
    if (cond_a.size() != cond_b.size()) {
        throw std::invalid_argument("joint embedding needs equal state counts (" +
                                    std::to_string(cond_a.size()) + " vs " +
                                    std::to_string(cond_b.size()) + ")");
    }
    if (cond_a.dim != cond_b.dim || cond_a.tau != cond_b.tau) {
        throw std::invalid_argument("joint embedding needs identical (d, tau)");
    }
    if (cond_a.source_indices != cond_b.source_indices) {
        throw std::invalid_argument("joint embedding needs time-aligned inputs "
                                    "(source indices differ)");
    }

    const std::size_t n = cond_a.size();
    const std::size_t da = cond_a.dim;
    const std::size_t db = cond_b.dim;
    StateSeries out;
    out.dim = da + db;
    out.tau = cond_a.tau;
    out.successors = cond_a.successors;
    out.source_indices = cond_a.source_indices;
    out.states.resize(n * out.dim);
    for (std::size_t i = 0; i < n; ++i) {
        double* row = out.states.data() + i * out.dim;
        std::copy_n(cond_a.states.data() + i * da, da, row);
        std::copy_n(cond_b.states.data() + i * db, db, row + da);
    }
    return out;
}

TimeSeries zscored(const TimeSeries& series) {
    const std::size_t n = series.values.size();
    if (n < 2) {
        throw std::invalid_argument("z-scoring needs at least 2 samples");
    }
    const double mean =
        std::accumulate(series.values.begin(), series.values.end(), 0.0) /
        static_cast<double>(n);
    double ss = 0.0;
    for (double v : series.values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    if (sd == 0.0) {
        throw std::invalid_argument("cannot z-score constant channel '" +
                                    series.name + "'");
    }
    TimeSeries out{series.name, {}, series.dt};
    out.values.reserve(n);
    for (double v : series.values) out.values.push_back((v - mean) / sd);
    return out;
}

}  // namespace teflow
