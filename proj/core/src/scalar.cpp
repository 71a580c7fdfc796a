#include "icelab/scalar.hpp"

#include <cctype>
#include <stdexcept>

namespace icelab {

Rational parse_rational(const std::string& text) {
    std::size_t k = 0;
    bool neg = false;
    if (k < text.size() && (text[k] == '-' || text[k] == '+')) neg = text[k++] == '-';
    std::string num;
    Rational den(1);
    bool dot = false, digits = false;
    for (; k < text.size(); ++k) {
        const char ch = text[k];
        if (ch == '.' && !dot) {
            dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(ch))) {
            num += ch;
            digits = true;
            if (dot) den *= 10;
        } else if (ch == '/' && !dot && digits) {
            const Rational d = parse_rational(text.substr(k + 1));
            if (d == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
            Rational n(num);
            return (neg ? -n : n) / d;
        } else {
            throw std::invalid_argument("not a decimal number: '" + text + "'");
        }
    }
    if (!digits) throw std::invalid_argument("not a decimal number: '" + text + "'");
    Rational v = Rational(boost::multiprecision::mpz_int(num)) / den;
    return neg ? Rational(-v) : v;
}

}  // namespace icelab
