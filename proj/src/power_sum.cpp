#include "hardyrad/power_sum.hpp"

#include "hardyrad/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace hardyrad {

namespace {

constexpr double kExponentMergeTol = 1e-12;
constexpr double kCancellationTol = 1e-14;

std::vector<PowerTerm> normalise(std::vector<PowerTerm> terms)
{
    std::sort(terms.begin(), terms.end(),
              [](const PowerTerm& a, const PowerTerm& b) { return a.exponent < b.exponent; });

    std::vector<PowerTerm> merged;
    std::vector<double> magnitude;
    for (const auto& t : terms) {
        if (!std::isfinite(t.coefficient) || !std::isfinite(t.exponent)) {
            throw DomainError("power sum term must be finite");
        }
        if (!merged.empty() && std::abs(merged.back().exponent - t.exponent) <= kExponentMergeTol) {
            merged.back().coefficient += t.coefficient;
            magnitude.back() += std::abs(t.coefficient);
        } else {
            merged.push_back(t);
            magnitude.push_back(std::abs(t.coefficient));
        }
    }

    std::vector<PowerTerm> out;
    for (std::size_t i = 0; i < merged.size(); ++i) {
        if (std::abs(merged[i].coefficient) <= kCancellationTol * magnitude[i]) continue;
        if (merged[i].exponent == 0.0) merged[i].exponent = 0.0; // drop -0
        out.push_back(merged[i]);
    }
    return out;
}

std::string format_number(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class Lexer {
public:
    Lexer(std::string_view text, std::size_t line) : text_(text), line_(line) {}

    void skip_space()
    {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }
    bool done()
    {
        skip_space();
        return pos_ >= text_.size();
    }
    bool peek(char c)
    {
        skip_space();
        return pos_ < text_.size() && text_[pos_] == c;
    }
    bool accept(char c)
    {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }
    double number(const char* what)
    {
        skip_space();
        const std::size_t start = pos_;
        std::size_t end = pos_;
        if (end < text_.size() && (text_[end] == '+' || text_[end] == '-')) ++end;
        while (end < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.' ||
                text_[end] == 'e' || text_[end] == 'E' ||
                ((text_[end] == '+' || text_[end] == '-') && end > start &&
                 (text_[end - 1] == 'e' || text_[end - 1] == 'E')))) {
            ++end;
        }
        const std::string token(text_.substr(start, end - start));
        char* stop = nullptr;
        const double value = token.empty() ? 0.0 : std::strtod(token.c_str(), &stop);
        if (token.empty() || stop != token.c_str() + token.size() || !std::isfinite(value)) {
            fail(std::string("expected ") + what);
        }
        pos_ = end;
        return value;
    }
    [[noreturn]] void fail(const std::string& message) const
    {
        throw ParseError(message, line_, pos_ + 1);
    }

private:
    std::string_view text_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

PowerTerm parse_term(Lexer& lex, double sign)
{
    double coeff = 1.0;
    bool have_coeff = false;
    if (!lex.peek('r')) {
        coeff = lex.number("coefficient");
        have_coeff = true;
        if (!lex.accept('*')) return {sign * coeff, 0.0};
    }
    if (!lex.accept('r')) lex.fail(have_coeff ? "expected 'r' after '*'" : "expected coefficient");
    double exponent = 1.0;
    if (lex.accept('^')) exponent = lex.number("exponent");
    return {sign * coeff, exponent};
}

} // namespace

PowerSum::PowerSum(std::vector<PowerTerm> terms) : terms_(normalise(std::move(terms))) {}

PowerSum PowerSum::constant(double c) { return PowerSum({{c, 0.0}}); }

PowerSum PowerSum::monomial(double coefficient, double exponent)
{
    return PowerSum({{coefficient, exponent}});
}

double PowerSum::operator()(double r) const
{
    double sum = 0.0;
    for (const auto& t : terms_) {
        sum += t.exponent == 0.0 ? t.coefficient : t.coefficient * std::pow(r, t.exponent);
    }
    return sum;
}

PowerSum PowerSum::derivative() const
{
    std::vector<PowerTerm> out;
    for (const auto& t : terms_) {
        if (t.exponent != 0.0) out.push_back({t.coefficient * t.exponent, t.exponent - 1.0});
    }
    return PowerSum(std::move(out));
}

PowerSum PowerSum::times_power(double k) const
{
    std::vector<PowerTerm> out(terms_.begin(), terms_.end());
    for (auto& t : out) t.exponent += k;
    return PowerSum(std::move(out));
}

PowerSum PowerSum::pow(int p) const
{
    if (p < 0) throw UnsupportedFormError("negative integer power of a power sum");
    PowerSum result = constant(1.0);
    for (int i = 0; i < p; ++i) result = result * *this;
    return result;
}

double PowerSum::min_exponent() const noexcept
{
    return terms_.empty() ? 0.0 : terms_.front().exponent;
}

std::string PowerSum::to_string() const
{
    if (terms_.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (i > 0) out += " + ";
        out += format_number(terms_[i].coefficient);
        if (terms_[i].exponent != 0.0) out += "*r^" + format_number(terms_[i].exponent);
    }
    return out;
}

PowerSum operator+(const PowerSum& a, const PowerSum& b)
{
    std::vector<PowerTerm> t(a.terms_.begin(), a.terms_.end());
    t.insert(t.end(), b.terms_.begin(), b.terms_.end());
    return PowerSum(std::move(t));
}

PowerSum operator-(const PowerSum& a, const PowerSum& b) { return a + (-1.0) * b; }

PowerSum operator*(const PowerSum& a, const PowerSum& b)
{
    std::vector<PowerTerm> t;
    t.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& x : a.terms_) {
        for (const auto& y : b.terms_) {
            t.push_back({x.coefficient * y.coefficient, x.exponent + y.exponent});
        }
    }
    return PowerSum(std::move(t));
}

PowerSum operator*(double s, const PowerSum& a)
{
    std::vector<PowerTerm> t(a.terms_.begin(), a.terms_.end());
    for (auto& x : t) x.coefficient *= s;
    return PowerSum(std::move(t));
}

PowerSum parse_power_sum(std::string_view text, std::size_t line)
{
    Lexer lex(text, line);
    if (lex.done()) lex.fail("empty expression");
    std::vector<PowerTerm> terms;
    terms.push_back(parse_term(lex, 1.0));
    while (!lex.done()) {
        double sign = 1.0;
        if (lex.accept('+')) {
            sign = 1.0;
        } else if (lex.accept('-')) {
            sign = -1.0;
        } else {
            lex.fail("expected '+' or '-' between terms");
        }
        terms.push_back(parse_term(lex, sign));
    }
    return PowerSum(std::move(terms));
}

} // namespace hardyrad
