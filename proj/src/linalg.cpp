#include "opfact/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "opfact/errors.hpp"

namespace opfact {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

std::vector<double> Matrix::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

std::vector<double> matvec(const Matrix& a, std::span<const double> x, std::span<const double> b) {
    if (x.size() != a.cols())
        throw ShapeError("matvec: input length " + std::to_string(x.size()) + " != cols " +
                         std::to_string(a.cols()));
    if (!b.empty() && b.size() != a.rows())
        throw ShapeError("matvec: bias length " + std::to_string(b.size()) + " != rows " +
                         std::to_string(a.rows()));
    std::vector<double> y(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        double acc = b.empty() ? 0.0 : b[r];
        const auto row = a.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
    return y;
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace opfact
