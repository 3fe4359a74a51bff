#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace itlrr {

using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Dense rows x cols x bands array. Storage order: band varies fastest within a
// pixel, pixels are row-major, so entry (r, c, b) lives at (r * cols + c) * bands + b
// and every spectral tube is contiguous.
template <typename T>
class Tensor3 {
public:
    using value_type = T;

    Tensor3() = default;
    Tensor3(std::size_t rows, std::size_t cols, std::size_t bands)
        : rows_(rows), cols_(cols), bands_(bands), data_(rows * cols * bands, T{}) {}
    Tensor3(std::size_t rows, std::size_t cols, std::size_t bands, std::vector<T> data);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::size_t bands() const noexcept { return bands_; }
    [[nodiscard]] std::size_t pixels() const noexcept { return rows_ * cols_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }

    [[nodiscard]] std::size_t index(std::size_t r, std::size_t c, std::size_t b) const noexcept {
        return (r * cols_ + c) * bands_ + b;
    }
    T& operator()(std::size_t r, std::size_t c, std::size_t b) noexcept { return data_[index(r, c, b)]; }
    const T& operator()(std::size_t r, std::size_t c, std::size_t b) const noexcept {
        return data_[index(r, c, b)];
    }

    [[nodiscard]] std::span<T> tube(std::size_t r, std::size_t c) noexcept {
        return {data_.data() + index(r, c, 0), bands_};
    }
    [[nodiscard]] std::span<const T> tube(std::size_t r, std::size_t c) const noexcept {
        return {data_.data() + index(r, c, 0), bands_};
    }

    [[nodiscard]] std::span<T> data() noexcept { return data_; }
    [[nodiscard]] std::span<const T> data() const noexcept { return data_; }

    [[nodiscard]] bool same_shape(const Tensor3& other) const noexcept {
        return rows_ == other.rows_ && cols_ == other.cols_ && bands_ == other.bands_;
    }

    // Mode-3 unfolding: a (rows*cols) x bands view whose rows are the pixel tubes.
    [[nodiscard]] auto unfold3() noexcept {
        return Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            data_.data(), static_cast<Eigen::Index>(pixels()), static_cast<Eigen::Index>(bands_));
    }
    [[nodiscard]] auto unfold3() const noexcept {
        return Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            data_.data(), static_cast<Eigen::Index>(pixels()), static_cast<Eigen::Index>(bands_));
    }

    // Copies of frontal slice `band` as a rows x cols matrix, and the reverse.
    [[nodiscard]] Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> frontal_slice(std::size_t band) const;
    void set_frontal_slice(std::size_t band, const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>& m);

    bool operator==(const Tensor3& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t bands_ = 0;
    std::vector<T> data_;
};

using Cube = Tensor3<double>;
using SpectrumStack = Tensor3<std::complex<double>>;

Cube operator+(const Cube& a, const Cube& b);
Cube operator-(const Cube& a, const Cube& b);
Cube operator*(double s, const Cube& a);

[[nodiscard]] double frobenius_norm(const Cube& c);
[[nodiscard]] double max_abs(const Cube& c);
[[nodiscard]] double inner_product(const Cube& a, const Cube& b);
[[nodiscard]] bool all_finite(const Cube& c);

}  // namespace itlrr
