#include "machslab/jet.hpp"

#include <algorithm>

namespace machslab {

Jet::Jet(const Field& f, int len) {
    require(len >= 1, "jet length must be positive");
    c_.push_back(f);
    for (int k = 1; k < len; ++k) c_.emplace_back(f.grid_ptr());
}

Jet::Jet(std::vector<Field> coeffs) : c_(std::move(coeffs)) { require(!c_.empty(), "empty jet"); }

Jet& Jet::operator+=(const Jet& o) {
    const int n = std::min(length(), o.length());
    c_.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) c_[static_cast<std::size_t>(k)] += o[k];
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    const int n = std::min(length(), o.length());
    c_.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) c_[static_cast<std::size_t>(k)] -= o[k];
    return *this;
}

Jet& Jet::operator*=(double s) {
    for (auto& f : c_) f *= s;
    return *this;
}

Jet& Jet::operator+=(double s) {
    c_.front() += s;
    return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator-(Jet a) { return a *= -1.0; }
Jet operator*(double s, Jet a) { return a *= s; }
Jet operator*(Jet a, double s) { return a *= s; }
Jet operator+(Jet a, double s) { return a += s; }
Jet operator+(double s, Jet a) { return a += s; }

Jet operator*(const Jet& a, const Jet& b) {
    const int n = std::min(a.length(), b.length());
    std::vector<Field> c;
    c.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        Field s = a[0] * b[k];
        for (int j = 1; j <= k; ++j) s.array() += a[j].array() * b[k - j].array();
        c.push_back(std::move(s));
    }
    return Jet(std::move(c));
}

Jet deriv(const Jet& f, int axis) {
    std::vector<Field> c;
    for (const auto& x : f.coeffs()) c.push_back(deriv(x, axis));
    return Jet(std::move(c));
}

Jet dealias(const Jet& f) {
    std::vector<Field> c;
    for (const auto& x : f.coeffs()) c.push_back(dealias(x));
    return Jet(std::move(c));
}

Field pow(const Field& a, double r) {
    require(a.min() > 0.0, "pow: base must be positive");
    return Field(a.grid_ptr(), a.array().pow(r));
}

Field exp(const Field& a) { return Field(a.grid_ptr(), a.array().exp()); }

Jet pow(const Jet& a, double r) {
    const int n = a.length();
    std::vector<Field> y;
    y.push_back(pow(a[0], r));
    const Eigen::ArrayXd inv_a0 = a[0].array().inverse();
    for (int k = 1; k < n; ++k) {
        Eigen::ArrayXd s = Eigen::ArrayXd::Zero(a[0].array().size());
        for (int j = 1; j <= k; ++j) s += ((r + 1.0) * j - k) * a[j].array() * y[static_cast<std::size_t>(k - j)].array();
        y.emplace_back(a.grid_ptr(), Eigen::ArrayXd(s * inv_a0 / k));
    }
    return Jet(std::move(y));
}

Jet exp(const Jet& a) {
    const int n = a.length();
    std::vector<Field> y;
    y.push_back(exp(a[0]));
    for (int k = 1; k < n; ++k) {
        Eigen::ArrayXd s = Eigen::ArrayXd::Zero(a[0].array().size());
        for (int j = 1; j <= k; ++j) s += static_cast<double>(j) * a[j].array() * y[static_cast<std::size_t>(k - j)].array();
        y.emplace_back(a.grid_ptr(), Eigen::ArrayXd(s / k));
    }
    return Jet(std::move(y));
}

}  // namespace machslab
