#include "tsshap/series.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tsshap/error.hpp"

namespace tsshap {

Horizon::Horizon(int h) : steps(h) {
    require(h >= 1, ErrorCode::ConfigInvalid, "horizon must be >= 1");
}

UnixTime TimeSeries::timestamp(Eigen::Index t) const {
    const Eigen::Index n = size();
    if (t < n) return timestamps_[static_cast<std::size_t>(t)];
    // Step one period at a time so monthly day-clamping matches extended_with.
    UnixTime ts = timestamps_.back();
    for (Eigen::Index i = n; i <= t; ++i) ts = add_period(ts, periodicity_, 1);
    return ts;
}

bool TimeSeries::has_regressor(const std::string& name) const {
    return std::find(regressor_names_.begin(), regressor_names_.end(), name) !=
           regressor_names_.end();
}

const Eigen::ArrayXd& TimeSeries::regressor(const std::string& name) const {
    for (std::size_t i = 0; i < regressor_names_.size(); ++i)
        if (regressor_names_[i] == name) return regressors_[i];
    fail(ErrorCode::UnknownRegressor, "no regressor column '" + name + "'");
}

TimeSeries TimeSeries::prefix(Eigen::Index n, Eigen::Index future_len) const {
    require(n >= 1 && n <= size(), ErrorCode::LengthMismatch, "prefix length out of range");
    TimeSeries out;
    out.name_ = name_;
    out.periodicity_ = periodicity_;
    out.timestamps_.assign(timestamps_.begin(), timestamps_.begin() + n);
    out.values_ = values_.head(n);
    out.regressor_names_ = regressor_names_;
    Eigen::Index ext = future_len;
    for (const auto& col : regressors_) {
        const Eigen::Index keep = std::min<Eigen::Index>(col.size(), n + future_len);
        out.regressors_.push_back(col.head(keep));
        ext = std::min(ext, keep - n);
    }
    out.horizon_extension_ = regressors_.empty() ? 0 : std::max<Eigen::Index>(ext, 0);
    return out;
}

TimeSeries TimeSeries::extended_with(double predicted) const {
    require(std::isfinite(predicted), ErrorCode::NonFiniteValue,
            "cannot extend a series with a non-finite value");
    TimeSeries out;
    out.name_ = name_;
    out.periodicity_ = periodicity_;
    out.timestamps_ = timestamps_;
    out.timestamps_.push_back(add_period(timestamps_.back(), periodicity_, 1));
    out.values_.resize(values_.size() + 1);
    out.values_.head(values_.size()) = values_;
    out.values_[values_.size()] = predicted;
    const Eigen::Index new_T = out.values_.size();
    for (std::size_t i = 0; i < regressors_.size(); ++i) {
        if (regressors_[i].size() >= new_T) {
            out.regressor_names_.push_back(regressor_names_[i]);
            out.regressors_.push_back(regressors_[i]);
        }
    }
    out.horizon_extension_ = std::max<Eigen::Index>(horizon_extension_ - 1, 0);
    return out;
}

TimeSeries TimeSeries::with_values(Eigen::ArrayXd values) const {
    require(values.size() == size(), ErrorCode::LengthMismatch,
            "replacement values must match series length");
    require(values.isFinite().all(), ErrorCode::NonFiniteValue, "values must be finite");
    TimeSeries out = *this;
    out.values_ = std::move(values);
    return out;
}

TimeSeries TimeSeries::make(std::vector<UnixTime> timestamps, Eigen::ArrayXd values,
                            Periodicity periodicity, std::vector<std::string> regressor_names,
                            std::vector<Eigen::ArrayXd> regressor_values, std::string name) {
    const auto T = static_cast<Eigen::Index>(timestamps.size());
    require(T >= 1, ErrorCode::EmptyData, "series must have at least one observation");
    require(values.size() == T, ErrorCode::LengthMismatch,
            "values length " + std::to_string(values.size()) + " != timestamps length " +
                std::to_string(T));
    require(values.isFinite().all(), ErrorCode::NonFiniteValue,
            "series values must be finite after ingestion");
    for (std::size_t i = 1; i < timestamps.size(); ++i) {
        require(timestamps[i] > timestamps[i - 1], ErrorCode::NonMonotonicTimestamps,
                "timestamps must be strictly increasing (row " + std::to_string(i) + ")");
    }
    for (std::size_t i = 1; i < timestamps.size(); ++i) {
        require(is_one_period_apart(timestamps[i - 1], timestamps[i], periodicity),
                ErrorCode::PeriodicityViolation,
                "gap at row " + std::to_string(i) + " does not match declared " +
                    periodicity_name(periodicity) + " periodicity");
    }
    require(regressor_names.size() == regressor_values.size(), ErrorCode::LengthMismatch,
            "regressor names/columns mismatch");

    Eigen::Index ext = -1;
    for (std::size_t i = 0; i < regressor_values.size(); ++i) {
        const Eigen::Index len = regressor_values[i].size();
        require(len >= T, ErrorCode::LengthMismatch,
                "regressor '" + regressor_names[i] + "' has length " + std::to_string(len) +
                    " < series length " + std::to_string(T));
        require(regressor_values[i].isFinite().all(), ErrorCode::NonFiniteValue,
                "regressor '" + regressor_names[i] + "' contains non-finite values");
        if (ext < 0) ext = len - T;
        require(len - T == ext, ErrorCode::LengthMismatch,
                "regressor columns must all have length T or all T+H");
    }

    TimeSeries out;
    out.name_ = std::move(name);
    out.timestamps_ = std::move(timestamps);
    out.values_ = std::move(values);
    out.periodicity_ = periodicity;
    out.regressor_names_ = std::move(regressor_names);
    out.regressors_ = std::move(regressor_values);
    out.horizon_extension_ = std::max<Eigen::Index>(ext, 0);
    return out;
}

TimeSeries make_series(const std::vector<UnixTime>& timestamps, const Eigen::ArrayXd& values,
                       Periodicity periodicity, const std::vector<std::string>& regressor_names,
                       const std::vector<Eigen::ArrayXd>& regressor_values,
                       const std::string& name) {
    return TimeSeries::make(timestamps, values, periodicity, regressor_names, regressor_values,
                            name);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

bool is_missing_cell(const std::string& cell) {
    return cell.empty() || cell == "NaN" || cell == "nan" || cell == "NA";
}

double parse_double_cell(const std::string& cell, std::size_t row) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(cell, &pos);
        require(pos == cell.size(), ErrorCode::InputUnreadable,
                "row " + std::to_string(row) + ": bad number '" + cell + "'");
        return v;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        fail(ErrorCode::InputUnreadable, "row " + std::to_string(row) + ": bad number '" + cell + "'");
    }
}

}  // namespace

Periodicity infer_periodicity(const std::vector<UnixTime>& timestamps) {
    require(timestamps.size() >= 2, ErrorCode::InsufficientHistory,
            "need at least two timestamps to infer periodicity");
    const UnixTime gap = timestamps[1] - timestamps[0];
    if (gap == 3600) return Periodicity::hourly;
    if (gap == 86400) return Periodicity::daily;
    if (gap == 7 * 86400) return Periodicity::weekly;
    if (gap >= 28 * 86400 && gap <= 31 * 86400) return Periodicity::monthly;
    fail(ErrorCode::PeriodicityViolation,
         "cannot infer periodicity from a gap of " + std::to_string(gap) + " seconds");
}

TimeSeries read_csv(const std::string& path, Periodicity periodicity, MissingPolicy missing) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::InputUnreadable, "cannot open '" + path + "'");

    std::string line;
    require(static_cast<bool>(std::getline(in, line)), ErrorCode::InputUnreadable,
            "'" + path + "' is empty");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);  // BOM
    const auto header = split_csv_line(line);
    require(header.size() >= 2, ErrorCode::InputUnreadable,
            "header must have at least timestamp and value columns");
    require(header[0] == "timestamp", ErrorCode::InputUnreadable,
            "first column must be named 'timestamp', got '" + header[0] + "'");
    const std::string series_name = header[1];
    const std::size_t n_reg = header.size() - 2;

    std::vector<UnixTime> timestamps;
    std::vector<double> values;
    std::vector<std::vector<double>> regs(n_reg);
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        require(cells.size() == header.size(), ErrorCode::InputUnreadable,
                "row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                    " cells, expected " + std::to_string(header.size()));
        timestamps.push_back(parse_iso8601(cells[0]));
        if (is_missing_cell(cells[1])) {
            values.push_back(std::numeric_limits<double>::quiet_NaN());
        } else {
            values.push_back(parse_double_cell(cells[1], row));
        }
        for (std::size_t k = 0; k < n_reg; ++k) {
            const auto& cell = cells[2 + k];
            require(!is_missing_cell(cell), ErrorCode::InputUnreadable,
                    "row " + std::to_string(row) + ": missing regressor '" + header[2 + k] + "'");
            regs[k].push_back(parse_double_cell(cell, row));
        }
    }
    require(!timestamps.empty(), ErrorCode::EmptyData, "'" + path + "' has no data rows");

    // Trailing value-less rows become the regressors' future extension.
    std::size_t T = values.size();
    while (T > 0 && std::isnan(values[T - 1]) && n_reg > 0) --T;
    require(T >= 1, ErrorCode::EmptyData, "'" + path + "' has no observed values");

    for (std::size_t i = 0; i < T; ++i) {
        if (std::isnan(values[i])) {
            if (missing == MissingPolicy::forward_fill && i > 0) {
                values[i] = values[i - 1];
            } else {
                fail(ErrorCode::NonFiniteValue,
                     "missing value at row " + std::to_string(i + 2) +
                         " (use forward-fill imputation or clean the input)");
            }
        }
    }

    std::vector<UnixTime> obs_ts(timestamps.begin(), timestamps.begin() + T);
    Eigen::ArrayXd vals = Eigen::Map<Eigen::ArrayXd>(values.data(), static_cast<Eigen::Index>(T));
    // Future rows must keep the series' spacing too.
    for (std::size_t i = T; i < timestamps.size(); ++i) {
        require(is_one_period_apart(timestamps[i - 1], timestamps[i], periodicity),
                ErrorCode::PeriodicityViolation, "future-regressor row breaks periodicity");
    }

    std::vector<std::string> reg_names(header.begin() + 2, header.end());
    std::vector<Eigen::ArrayXd> reg_cols;
    reg_cols.reserve(n_reg);
    for (auto& col : regs)
        reg_cols.push_back(
            Eigen::Map<Eigen::ArrayXd>(col.data(), static_cast<Eigen::Index>(col.size())));

    return TimeSeries::make(std::move(obs_ts), std::move(vals), periodicity,
                            std::move(reg_names), std::move(reg_cols), series_name);
}

TimeSeries read_csv_auto(const std::string& path, MissingPolicy missing) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::InputUnreadable, "cannot open '" + path + "'");
    std::string line;
    std::getline(in, line);
    std::vector<UnixTime> ts;
    while (std::getline(in, line) && ts.size() < 2) {
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (!cells.empty()) ts.push_back(parse_iso8601(cells[0]));
    }
    return read_csv(path, infer_periodicity(ts), missing);
}

void write_csv(const TimeSeries& series, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), ErrorCode::InputUnreadable, "cannot write '" + path + "'");
    out << "timestamp," << series.name();
    for (const auto& r : series.regressor_names()) out << "," << r;
    out << "\n";
    const Eigen::Index total = series.size() + series.horizon_extension();
    for (Eigen::Index t = 0; t < total; ++t) {
        out << format_iso8601(series.timestamp(t)) << ",";
        if (t < series.size()) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.17g", series.value(t));
            out << buf;
        }
        for (const auto& name : series.regressor_names()) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.17g", series.regressor(name)[t]);
            out << "," << buf;
        }
        out << "\n";
    }
}

}  // namespace tsshap
