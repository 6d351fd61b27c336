// Truncated Taylor series in time with Field coefficients: c[k] = d_t^k f / k!.
#pragma once

#include <vector>

#include "machslab/grid.hpp"

namespace machslab {

class Jet {
public:
    Jet() = default;
    /// Constant jet of length len (higher coefficients zero).
    Jet(const Field& f, int len);
    explicit Jet(std::vector<Field> coeffs);

    int length() const { return static_cast<int>(c_.size()); }
    const Field& operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
    Field& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
    const GridPtr& grid_ptr() const { return c_.front().grid_ptr(); }
    const std::vector<Field>& coeffs() const { return c_; }

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(double s);
    Jet& operator+=(double s);

private:
    std::vector<Field> c_;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator-(Jet a);
Jet operator*(double s, Jet a);
Jet operator*(Jet a, double s);
Jet operator+(Jet a, double s);
Jet operator+(double s, Jet a);
/// Cauchy product truncated to the shorter length.
Jet operator*(const Jet& a, const Jet& b);

Jet deriv(const Jet& f, int axis);
Jet dealias(const Jet& f);
/// a^r through the J.C.P. Miller recurrence; a[0] must be positive.
Jet pow(const Jet& a, double r);
Jet exp(const Jet& a);

Field pow(const Field& a, double r);
Field exp(const Field& a);

}  // namespace machslab
