#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ncma {

// Dense row-major complex matrix. Rows are time samples, columns antennas.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::complex<double>& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const std::complex<double>& operator()(std::size_t r, std::size_t c) const {
        return data_[r * cols_ + c];
    }

    std::span<std::complex<double>> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const std::complex<double>> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }

    std::span<const std::complex<double>> data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::complex<double>> data_;
};

} // namespace ncma
