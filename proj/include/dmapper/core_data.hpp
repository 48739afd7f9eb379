#pragma once
// Dense containers for Mapper input plus the filter functions used to project
// them onto the real line.

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace dmapper {

/// n x d matrix of finite coordinates, stored row-major.
class PointCloud {
public:
    PointCloud() = default;
    PointCloud(std::size_t n, std::size_t dim, std::vector<double> coords);
    static PointCloud from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t size() const { return n_; }
    std::size_t dim() const { return dim_; }
    std::span<const double> row(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
    double at(std::size_t i, std::size_t j) const { return coords_[i * dim_ + j]; }
    const std::vector<double>& coords() const { return coords_; }

    /// Squared Euclidean distance between rows i and j.
    double sq_distance(std::size_t i, std::size_t j) const;
    double distance(std::size_t i, std::size_t j) const;

    /// Rows picked by `indices` (duplicates allowed), in that order.
    PointCloud select(std::span<const std::size_t> indices) const;

    bool operator==(const PointCloud&) const = default;

private:
    std::size_t n_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> coords_;
};

/// Symmetric, zero-diagonal, non-negative n x n matrix.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    DistanceMatrix(std::size_t n, std::vector<double> entries);

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
    std::span<const double> row(std::size_t i) const { return {entries_.data() + i * n_, n_}; }
    const std::vector<double>& entries() const { return entries_; }

    DistanceMatrix select(std::span<const std::size_t> indices) const;

    bool operator==(const DistanceMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> entries_;
};

/// Projected coordinates, one per source point.
class FilterValues {
public:
    FilterValues() = default;
    explicit FilterValues(std::vector<double> values);

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> values() const { return values_; }
    auto begin() const { return values_.begin(); }
    auto end() const { return values_.end(); }

    FilterValues select(std::span<const std::size_t> indices) const;

    bool operator==(const FilterValues&) const = default;

private:
    std::vector<double> values_;
};

/// Either a point cloud (Euclidean metric) or a precomputed distance matrix.
class Dataset {
public:
    Dataset() = default;
    Dataset(PointCloud pc) : value_(std::move(pc)) {}
    Dataset(DistanceMatrix dm) : value_(std::move(dm)) {}

    bool is_points() const { return std::holds_alternative<PointCloud>(value_); }
    const PointCloud& points() const { return std::get<PointCloud>(value_); }
    const DistanceMatrix& matrix() const { return std::get<DistanceMatrix>(value_); }

    std::size_t size() const;
    double distance(std::size_t i, std::size_t j) const;
    Dataset select(std::span<const std::size_t> indices) const;

private:
    std::variant<PointCloud, DistanceMatrix> value_;
};

FilterValues project_axis(const PointCloud& pc, std::size_t axis);
FilterValues coordinate_sum(const PointCloud& pc);
/// Row means of the matrix, the zero diagonal included in the denominator.
FilterValues mean_distance_filter(const DistanceMatrix& dm);
/// Affine map of the off-diagonal entries onto [0, 1]; min and max are taken
/// over off-diagonal entries only so the diagonal stays at 0.
DistanceMatrix minmax_scale(const DistanceMatrix& dm);

// CSV I/O. Fields may be separated by commas or whitespace; `skip_header`
// drops the first line.
PointCloud read_points_csv(const std::filesystem::path& path, bool skip_header = false);
PointCloud parse_points_csv(const std::string& text, bool skip_header = false);
void write_points_csv(const std::filesystem::path& path, const PointCloud& pc);
DistanceMatrix read_distance_csv(const std::filesystem::path& path, bool skip_header = false);
DistanceMatrix parse_distance_csv(const std::string& text, bool skip_header = false);
void write_distance_csv(const std::filesystem::path& path, const DistanceMatrix& dm);

/// Shortest round-trip decimal for a double ("%.17g" fallback), used by the
/// CSV writers so files reload bit-exactly.
std::string format_real(double x);

}  // namespace dmapper
