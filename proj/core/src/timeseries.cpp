#include "cmcs/timeseries.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "cmcs/csv.hpp"
#include "cmcs/errors.hpp"
#include "cmcs/numfmt.hpp"

namespace cmcs {
namespace {

bool parse_number(const std::string& text, double& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

std::vector<TimeSeries> from_table(const CsvTable& table, const std::vector<std::string>& schema) {
    if (table.header.empty() || table.header[0] != "date")
        raise(ErrorKind::Schema, "first column must be 'date', got '" +
                                     (table.header.empty() ? "" : table.header[0]) + "'");
    for (const auto& wanted : schema) {
        bool found = false;
        for (std::size_t c = 1; c < table.header.size(); ++c)
            if (table.header[c] == wanted) found = true;
        if (!found) raise(ErrorKind::Schema, "missing column: " + wanted);
    }

    const std::size_t n_cols = table.header.size();
    std::vector<TimeSeries> series(n_cols - 1);
    for (std::size_t c = 1; c < n_cols; ++c) series[c - 1].name = table.header[c];

    std::vector<CalendarDay> dates;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::size_t line = table.line_numbers[r];
        if (row.size() != n_cols)
            raise(ErrorKind::Parse, "line " + std::to_string(line) + ": expected " +
                                        std::to_string(n_cols) + " cells, got " +
                                        std::to_string(row.size()));
        CalendarDay day = parse_iso_date(row[0]);
        if (!dates.empty()) {
            if (day <= dates.back())
                raise(ErrorKind::Ordering, "line " + std::to_string(line) +
                                               ": dates not strictly increasing at " + row[0]);
            if (day != dates.back() + std::chrono::days{1})
                raise(ErrorKind::Ordering, "line " + std::to_string(line) +
                                               ": gap in daily dates before " + row[0]);
        }
        dates.push_back(day);
        for (std::size_t c = 1; c < n_cols; ++c) {
            double v;
            if (!parse_number(row[c], v))
                raise(ErrorKind::Parse, "line " + std::to_string(line) + ": unparseable value '" +
                                            row[c] + "' in column " + table.header[c]);
            if (is_rate_series(table.header[c]) && (v < 0.0 || v > 100.0))
                raise(ErrorKind::Range, "line " + std::to_string(line) + ": rate column " +
                                            table.header[c] + " outside [0,100]: " +
                                            format_double(v));
            series[c - 1].values.push_back(v);
        }
    }
    for (auto& s : series) s.dates = dates;
    return series;
}

}  // namespace

CalendarDay parse_iso_date(const std::string& text) {
    int y = 0, m = 0, d = 0;
    char dash1 = 0, dash2 = 0;
    if (std::sscanf(text.c_str(), "%d%c%d%c%d", &y, &dash1, &m, &dash2, &d) != 5 ||
        dash1 != '-' || dash2 != '-')
        raise(ErrorKind::Parse, "unparseable date: '" + text + "' (want YYYY-MM-DD)");
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                                    std::chrono::day{unsigned(d)}};
    if (!ymd.ok()) raise(ErrorKind::Parse, "invalid calendar date: '" + text + "'");
    return CalendarDay{ymd};
}

std::string format_iso_date(CalendarDay day) {
    std::chrono::year_month_day ymd{day};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                  unsigned(ymd.day()));
    return buf;
}

bool is_rate_series(const std::string& name) {
    return name.size() >= 4 && name.compare(name.size() - 4, 4, "rate") == 0;
}

std::vector<TimeSeries> load_csv(const std::string& path, const std::vector<std::string>& schema) {
    return from_table(read_csv_file(path), schema);
}

std::vector<TimeSeries> load_csv_text(const std::string& text,
                                      const std::vector<std::string>& schema) {
    return from_table(read_csv_text(text), schema);
}

SupervisedDataset lag_embed(const TimeSeries& series, std::size_t lag) {
    if (lag == 0) raise(ErrorKind::Config, "lag must be positive");
    if (series.size() <= lag)
        raise(ErrorKind::InsufficientData,
              "series " + series.name + " has " + std::to_string(series.size()) +
                  " points, need more than lag=" + std::to_string(lag));
    SupervisedDataset ds;
    ds.lag = lag;
    for (std::size_t k = lag; k >= 1; --k)
        ds.feature_names.push_back(series.name + "_tminus" + std::to_string(k));
    for (std::size_t t = lag; t < series.size(); ++t) {
        std::vector<double> row(series.values.begin() + (t - lag), series.values.begin() + t);
        ds.rows.push_back(std::move(row));
        ds.targets.push_back(series.values[t]);
    }
    return ds;
}

FilterResult correlation_filter(const SupervisedDataset& dataset, double threshold) {
    if (dataset.size() == 0) raise(ErrorKind::InsufficientData, "correlation_filter: empty dataset");
    if (!(threshold >= 0.0 && threshold <= 1.0))
        raise(ErrorKind::Config, "correlation threshold must lie in [0,1]");

    const std::size_t n = dataset.size();
    const std::size_t f = dataset.feature_count();

    // Streaming co-moment accumulation (Welford style).
    double mean_y = 0.0, m2_y = 0.0;
    std::vector<double> mean_x(f, 0.0), m2_x(f, 0.0), cov(f, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double dy = dataset.targets[i] - mean_y;
        mean_y += dy / double(i + 1);
        const double dy2 = dataset.targets[i] - mean_y;
        m2_y += dy * dy2;
        for (std::size_t j = 0; j < f; ++j) {
            const double dx = dataset.rows[i][j] - mean_x[j];
            mean_x[j] += dx / double(i + 1);
            m2_x[j] += dx * (dataset.rows[i][j] - mean_x[j]);
            cov[j] += dx * dy2;
        }
    }

    FilterResult result;
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < f; ++j) {
        if (m2_x[j] <= 0.0) {
            result.dropped.push_back({dataset.feature_names[j], "zero variance"});
            continue;
        }
        if (m2_y <= 0.0) {
            result.dropped.push_back({dataset.feature_names[j], "constant target"});
            continue;
        }
        const double r = cov[j] / std::sqrt(m2_x[j] * m2_y);
        if (std::abs(r) >= threshold) {
            keep.push_back(j);
        } else {
            result.dropped.push_back(
                {dataset.feature_names[j], "|r|=" + format_double(std::abs(r)) + " below threshold"});
        }
    }
    if (keep.empty())
        raise(ErrorKind::EmptySelection, "correlation_filter dropped every feature");

    result.dataset.lag = dataset.lag;
    result.dataset.targets = dataset.targets;
    for (std::size_t j : keep) result.dataset.feature_names.push_back(dataset.feature_names[j]);
    result.dataset.rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row;
        row.reserve(keep.size());
        for (std::size_t j : keep) row.push_back(dataset.rows[i][j]);
        result.dataset.rows.push_back(std::move(row));
    }
    return result;
}

std::pair<SupervisedDataset, SupervisedDataset> split_chronological(const SupervisedDataset& data,
                                                                    double head_fraction) {
    if (!(head_fraction > 0.0 && head_fraction < 1.0))
        raise(ErrorKind::Config, "split fraction must lie in (0,1)");
    const std::size_t n = data.size();
    std::size_t head = static_cast<std::size_t>(std::lround(head_fraction * double(n)));
    if (head == 0) head = 1;
    if (head >= n) head = n - 1;

    SupervisedDataset a, b;
    a.feature_names = b.feature_names = data.feature_names;
    a.lag = b.lag = data.lag;
    a.rows.assign(data.rows.begin(), data.rows.begin() + head);
    a.targets.assign(data.targets.begin(), data.targets.begin() + head);
    b.rows.assign(data.rows.begin() + head, data.rows.end());
    b.targets.assign(data.targets.begin() + head, data.targets.end());
    return {std::move(a), std::move(b)};
}

const TimeSeries* find_series(const std::vector<TimeSeries>& all, const std::string& name) {
    for (const auto& s : all)
        if (s.name == name) return &s;
    return nullptr;
}

}  // namespace cmcs
