#include "itlrr/cube.hpp"

#include "itlrr/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace itlrr {

namespace {

bool finite_value(double v) { return std::isfinite(v); }
bool finite_value(const std::complex<double>& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

void require_same_shape(const Cube& a, const Cube& b, const char* op) {
    if (!a.same_shape(b)) fail(ErrorKind::validation, std::string("cube shape mismatch in ") + op);
}

}  // namespace

template <typename T>
Tensor3<T>::Tensor3(std::size_t rows, std::size_t cols, std::size_t bands, std::vector<T> data)
    : rows_(rows), cols_(cols), bands_(bands), data_(std::move(data)) {
    if (rows_ * cols_ * bands_ != data_.size()) {
        fail(ErrorKind::validation, "tensor data length " + std::to_string(data_.size()) + " does not match " +
                                        std::to_string(rows_) + "x" + std::to_string(cols_) + "x" +
                                        std::to_string(bands_));
    }
    for (const auto& v : data_) {
        if (!finite_value(v)) fail(ErrorKind::validation, "tensor contains a non-finite entry");
    }
}

template <typename T>
Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> Tensor3<T>::frontal_slice(std::size_t band) const {
    Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> m(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) m(r, c) = data_[index(r, c, band)];
    return m;
}

template <typename T>
void Tensor3<T>::set_frontal_slice(std::size_t band, const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>& m) {
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) data_[index(r, c, band)] = m(r, c);
}

template class Tensor3<double>;
template class Tensor3<std::complex<double>>;

Cube operator+(const Cube& a, const Cube& b) {
    require_same_shape(a, b, "operator+");
    Cube out = a;
    auto o = out.data();
    auto bd = b.data();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] += bd[i];
    return out;
}

Cube operator-(const Cube& a, const Cube& b) {
    require_same_shape(a, b, "operator-");
    Cube out = a;
    auto o = out.data();
    auto bd = b.data();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] -= bd[i];
    return out;
}

Cube operator*(double s, const Cube& a) {
    Cube out = a;
    for (auto& v : out.data()) v *= s;
    return out;
}

double frobenius_norm(const Cube& c) {
    double sum = 0.0;
    for (double v : c.data()) sum += v * v;
    return std::sqrt(sum);
}

double max_abs(const Cube& c) {
    double m = 0.0;
    for (double v : c.data()) m = std::max(m, std::abs(v));
    return m;
}

double inner_product(const Cube& a, const Cube& b) {
    require_same_shape(a, b, "inner_product");
    double sum = 0.0;
    auto ad = a.data();
    auto bd = b.data();
    for (std::size_t i = 0; i < ad.size(); ++i) sum += ad[i] * bd[i];
    return sum;
}

bool all_finite(const Cube& c) {
    return std::all_of(c.data().begin(), c.data().end(), [](double v) { return std::isfinite(v); });
}

}  // namespace itlrr
