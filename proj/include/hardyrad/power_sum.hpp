#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hardyrad {

struct PowerTerm {
    double coefficient = 0.0;
    double exponent = 0.0;
};

/// Finite sum  sum_i c_i r^{s_i}  of radial power functions.
///
/// Closed under addition, multiplication, differentiation and multiplication
/// by r^k, which is all the manufactured-solution machinery needs. Terms are
/// kept sorted by exponent with equal exponents merged; coefficients that
/// cancel to roundoff level are dropped.
class PowerSum {
public:
    PowerSum() = default;
    explicit PowerSum(std::vector<PowerTerm> terms);

    static PowerSum constant(double c);
    static PowerSum monomial(double coefficient, double exponent);

    double operator()(double r) const;

    PowerSum derivative() const;
    /// Multiply by r^k.
    PowerSum times_power(double k) const;
    /// Integer power p >= 0 by repeated multiplication.
    PowerSum pow(int p) const;

    std::span<const PowerTerm> terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    /// Smallest exponent present; 0 for the zero function.
    double min_exponent() const noexcept;

    /// Serialise to the config grammar  term ( "+" term )*  with 17
    /// significant digits, so parse(to_string()) reproduces the sum exactly.
    std::string to_string() const;

    friend PowerSum operator+(const PowerSum& a, const PowerSum& b);
    friend PowerSum operator-(const PowerSum& a, const PowerSum& b);
    friend PowerSum operator*(const PowerSum& a, const PowerSum& b);
    friend PowerSum operator*(double s, const PowerSum& a);
    friend PowerSum operator-(const PowerSum& a) { return -1.0 * a; }

private:
    std::vector<PowerTerm> terms_;
};

/// Parse  term ( ("+"|"-") term )*  with  term := coeff "*r^" exponent | coeff
/// | coeff "*r" | "r^" exponent | "r".  Throws ParseError with a 1-based
/// column (line is reported as `line`).
PowerSum parse_power_sum(std::string_view text, std::size_t line = 1);

} // namespace hardyrad
