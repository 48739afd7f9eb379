#include "dmapper/core_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "dmapper/error.hpp"
#include "text_util.hpp"

namespace dmapper {

PointCloud::PointCloud(std::size_t n, std::size_t dim, std::vector<double> coords)
    : n_(n), dim_(dim), coords_(std::move(coords)) {
    if (n_ == 0 || dim_ == 0) throw DataError("point cloud must have at least one point and one dimension");
    if (coords_.size() != n_ * dim_) throw DataError("point cloud coordinate count does not match n*d");
    for (double x : coords_) {
        if (!std::isfinite(x)) throw DataError("point cloud contains a non-finite coordinate");
    }
}

PointCloud PointCloud::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw DataError("point cloud must have at least one point");
    const std::size_t dim = rows.front().size();
    std::vector<double> coords;
    coords.reserve(rows.size() * dim);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != dim) {
            throw DataError("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                            " fields, expected " + std::to_string(dim));
        }
        coords.insert(coords.end(), rows[i].begin(), rows[i].end());
    }
    return PointCloud(rows.size(), dim, std::move(coords));
}

double PointCloud::sq_distance(std::size_t i, std::size_t j) const {
    const double* a = coords_.data() + i * dim_;
    const double* b = coords_.data() + j * dim_;
    double s = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
        const double t = a[k] - b[k];
        s += t * t;
    }
    return s;
}

double PointCloud::distance(std::size_t i, std::size_t j) const { return std::sqrt(sq_distance(i, j)); }

PointCloud PointCloud::select(std::span<const std::size_t> indices) const {
    std::vector<double> out;
    out.reserve(indices.size() * dim_);
    for (std::size_t i : indices) {
        auto r = row(i);
        out.insert(out.end(), r.begin(), r.end());
    }
    return PointCloud(indices.size(), dim_, std::move(out));
}

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> entries) : n_(n), entries_(std::move(entries)) {
    if (n_ == 0) throw DataError("distance matrix must be non-empty");
    if (entries_.size() != n_ * n_) throw DataError("distance matrix entry count does not match n*n");
    for (std::size_t i = 0; i < n_; ++i) {
        if (entries_[i * n_ + i] != 0.0) throw DataError("distance matrix diagonal must be zero");
        for (std::size_t j = 0; j < n_; ++j) {
            const double v = entries_[i * n_ + j];
            if (!std::isfinite(v) || v < 0.0) {
                throw DataError("distance matrix entry (" + std::to_string(i) + "," + std::to_string(j) +
                                ") is negative or non-finite");
            }
            if (v != entries_[j * n_ + i]) throw DataError("distance matrix is not symmetric");
        }
    }
}

DistanceMatrix DistanceMatrix::select(std::span<const std::size_t> indices) const {
    const std::size_t m = indices.size();
    std::vector<double> out(m * m);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) out[a * m + b] = (*this)(indices[a], indices[b]);
    }
    return DistanceMatrix(m, std::move(out));
}

FilterValues::FilterValues(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_) {
        if (!std::isfinite(v)) throw DataError("filter values must be finite");
    }
}

FilterValues FilterValues::select(std::span<const std::size_t> indices) const {
    std::vector<double> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) out.push_back(values_[i]);
    return FilterValues(std::move(out));
}

std::size_t Dataset::size() const {
    return is_points() ? points().size() : matrix().size();
}

double Dataset::distance(std::size_t i, std::size_t j) const {
    return is_points() ? points().distance(i, j) : matrix()(i, j);
}

Dataset Dataset::select(std::span<const std::size_t> indices) const {
    if (is_points()) return Dataset(points().select(indices));
    return Dataset(matrix().select(indices));
}

FilterValues project_axis(const PointCloud& pc, std::size_t axis) {
    if (axis >= pc.dim()) {
        throw ConfigError("axis " + std::to_string(axis) + " out of range for " + std::to_string(pc.dim()) +
                          "-dimensional data");
    }
    std::vector<double> v(pc.size());
    for (std::size_t i = 0; i < pc.size(); ++i) v[i] = pc.at(i, axis);
    return FilterValues(std::move(v));
}

FilterValues coordinate_sum(const PointCloud& pc) {
    std::vector<double> v(pc.size(), 0.0);
    for (std::size_t i = 0; i < pc.size(); ++i) {
        for (double x : pc.row(i)) v[i] += x;
    }
    return FilterValues(std::move(v));
}

FilterValues mean_distance_filter(const DistanceMatrix& dm) {
    const std::size_t n = dm.size();
    std::vector<double> v(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (double x : dm.row(i)) s += x;
        v[i] = s / static_cast<double>(n);
    }
    return FilterValues(std::move(v));
}

DistanceMatrix minmax_scale(const DistanceMatrix& dm) {
    const std::size_t n = dm.size();
    if (n < 2) throw DataError("min-max scaling needs at least two points");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            lo = std::min(lo, dm(i, j));
            hi = std::max(hi, dm(i, j));
        }
    }
    if (!(hi > lo)) throw DataError("min-max scaling: all off-diagonal distances are equal");
    const double range = hi - lo;
    std::vector<double> out(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double x = dm(i, j);
            // pin the extremes so min/max land on exactly 0 and 1
            double y = x == lo ? 0.0 : (x == hi ? 1.0 : (x - lo) / range);
            out[i * n + j] = y;
            out[j * n + i] = y;
        }
    }
    return DistanceMatrix(n, std::move(out));
}

namespace {

std::vector<std::vector<double>> parse_table(const std::string& text, bool skip_header) {
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    for (const auto& raw : detail::split_lines(text)) {
        ++line_no;
        if (skip_header && line_no == 1) continue;
        auto line = detail::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        std::vector<double> row;
        for (auto field : detail::split_fields(line)) {
            double v = 0.0;
            auto res = std::from_chars(field.data(), field.data() + field.size(), v);
            if (res.ec != std::errc() || res.ptr != field.data() + field.size() || !std::isfinite(v)) {
                throw DataError("parse error at line " + std::to_string(line_no) + ": '" + std::string(field) +
                                "' is not a finite number");
            }
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw DataError("parse error at line " + std::to_string(line_no) + ": expected " +
                            std::to_string(rows.front().size()) + " fields, found " + std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError("input contains no data rows");
    return rows;
}

}  // namespace

PointCloud parse_points_csv(const std::string& text, bool skip_header) {
    return PointCloud::from_rows(parse_table(text, skip_header));
}

PointCloud read_points_csv(const std::filesystem::path& path, bool skip_header) {
    return parse_points_csv(detail::read_file(path), skip_header);
}

DistanceMatrix parse_distance_csv(const std::string& text, bool skip_header) {
    auto rows = parse_table(text, skip_header);
    const std::size_t n = rows.size();
    if (rows.front().size() != n) {
        throw DataError("distance matrix has " + std::to_string(n) + " rows but " +
                        std::to_string(rows.front().size()) + " columns");
    }
    std::vector<double> entries;
    entries.reserve(n * n);
    for (auto& r : rows) entries.insert(entries.end(), r.begin(), r.end());
    return DistanceMatrix(n, std::move(entries));
}

DistanceMatrix read_distance_csv(const std::filesystem::path& path, bool skip_header) {
    return parse_distance_csv(detail::read_file(path), skip_header);
}

std::string format_real(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_points_csv(const std::filesystem::path& path, const PointCloud& pc) {
    std::string out;
    for (std::size_t i = 0; i < pc.size(); ++i) {
        for (std::size_t j = 0; j < pc.dim(); ++j) {
            if (j) out += ',';
            out += format_real(pc.at(i, j));
        }
        out += '\n';
    }
    detail::write_file(path, out);
}

void write_distance_csv(const std::filesystem::path& path, const DistanceMatrix& dm) {
    std::string out;
    for (std::size_t i = 0; i < dm.size(); ++i) {
        for (std::size_t j = 0; j < dm.size(); ++j) {
            if (j) out += ',';
            out += format_real(dm(i, j));
        }
        out += '\n';
    }
    detail::write_file(path, out);
}

}  // namespace dmapper
