#include "mwvcsim/rational.hpp"

#include <cctype>
#include <cmath>

namespace mwvcsim {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

[[noreturn]] void bad(const std::string& text) {
    throw std::invalid_argument("not a rational number: '" + text + "'");
}

}  // namespace

Rat parse_rational(const std::string& text) {
    std::string s = text;
    // trim
    size_t a = s.find_first_not_of(" \t\r\n");
    size_t b = s.find_last_not_of(" \t\r\n");
    if (a == std::string::npos) bad(text);
    s = s.substr(a, b - a + 1);

    bool neg = false;
    if (s[0] == '+' || s[0] == '-') {
        neg = (s[0] == '-');
        s = s.substr(1);
        if (s.empty()) bad(text);
    }

    size_t slash = s.find('/');
    size_t dot = s.find('.');
    Rat value;
    if (slash != std::string::npos) {
        if (dot != std::string::npos) bad(text);
        std::string num = s.substr(0, slash);
        std::string den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) bad(text);
        BigInt p(num), q(den);
        if (q == 0) bad(text);
        value = Rat(p, q);
    } else if (dot != std::string::npos) {
        std::string ip = s.substr(0, dot);
        std::string fp = s.substr(dot + 1);
        if (ip.empty()) ip = "0";
        if (fp.empty()) bad(text);
        if (!all_digits(ip) || !all_digits(fp)) bad(text);
        BigInt scale = 1;
        for (size_t i = 0; i < fp.size(); ++i) scale *= 10;
        value = Rat(BigInt(ip) * scale + BigInt(fp), scale);
    } else {
        if (!all_digits(s)) bad(text);
        value = Rat(BigInt(s));
    }
    return neg ? Rat(-value) : value;
}

std::string rat_str(const Rat& r) {
    BigInt num = numerator(r);
    BigInt den = denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

double rat_double(const Rat& r) { return r.convert_to<double>(); }

BigInt floor_div(const Rat& a, const Rat& b) {
    if (b <= 0) throw std::invalid_argument("floor_div: divisor must be positive");
    Rat q = a / b;
    BigInt n = numerator(q), d = denominator(q);
    BigInt f = n / d;  // truncates toward zero
    if (n % d != 0 && n < 0) --f;
    return f;
}

int bit_length(const BigInt& v) {
    if (v == 0) return 0;
    BigInt a = v < 0 ? BigInt(-v) : v;
    return static_cast<int>(msb(a)) + 1;
}

long long ceil_to_ll(const Rat& r) {
    BigInt f = floor_div(r, Rat(1));
    if (Rat(f) < r) ++f;
    return f.convert_to<long long>();
}

Rat rat_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("rat_from_double: non-finite");
    if (x == 0.0) return Rat(0);
    int exp = 0;
    double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
    // 53 mantissa bits make the scaled value integral
    long long scaled = static_cast<long long>(std::ldexp(m, 53));
    int e = exp - 53;
    Rat r(scaled);
    if (e > 0) {
        BigInt p = BigInt(1) << e;
        r *= Rat(p);
    } else if (e < 0) {
        BigInt p = BigInt(1) << (-e);
        r /= Rat(p);
    }
    return r;
}

}  // namespace mwvcsim
