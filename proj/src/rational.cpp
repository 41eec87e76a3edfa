// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "prgc/rational.hpp"

#include "prgc/error.hpp"

#include <cctype>

namespace prgc {

Rat rat_from_string(const std::string& text) {
    if (text.empty()) fail("domain", "empty rational literal");
    std::string s = text;
    // Decimal form: turn 0.25 into 25/100.
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string head = s.substr(0, dot);
        std::string tail = s.substr(dot + 1);
        if (tail.empty()) fail("domain", "bad rational literal '" + text + "'");
        for (char c : tail)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                fail("domain", "bad rational literal '" + text + "'");
        std::string den = "1" + std::string(tail.size(), '0');
        s = (head.empty() || head == "-" ? head + "0" : head) + tail + "/" + den;
    }
    mpq_class q;
    if (q.set_str(s, 10) != 0) fail("domain", "bad rational literal '" + text + "'");
    if (q.get_den() == 0) fail("domain", "zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
}

std::string rat_to_string(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string rat_to_decimal(const Rat& q) {
    constexpr int places = 6;
    mpz_class scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    mpz_class num = q.get_num() * scale;
    mpz_class den = q.get_den();
    bool neg = num < 0;
    if (neg) num = -num;
    // Round half away from zero.
    mpz_class quot = (num + den / 2) / den;
    mpz_class ip = quot / scale;
    mpz_class fp = quot % scale;
    std::string frac = fp.get_str();
    frac.insert(frac.begin(), places - frac.size(), '0');
    return (neg ? "-" : "") + ip.get_str() + "." + frac;
}

void require_probability(const Rat& q, const std::string& what) {
    if (q < 0 || q > 1) fail("domain", what + " must lie in [0,1], got " + rat_to_string(q));
}

} // namespace prgc
