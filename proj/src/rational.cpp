#include "psp/rational.hpp"

#include <cctype>

namespace psp {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

} // namespace

std::optional<Rat> parse_rational(std::string_view text) {
    // Trim surrounding whitespace.
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) return std::nullopt;

    bool negative = false;
    if (text.front() == '+' || text.front() == '-') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    if (text.empty()) return std::nullopt;

    auto finish = [&](Rat r) -> std::optional<Rat> {
        r.canonicalize();
        if (negative) r = -r;
        return r;
    };

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        std::string_view num = text.substr(0, slash);
        std::string_view den = text.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) return std::nullopt;
        Rat r{mpz_class(std::string(num)), mpz_class(std::string(den))};
        if (r.get_den() == 0) return std::nullopt;
        return finish(r);
    }

    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        if (whole.empty() && frac.empty()) return std::nullopt;
        if (!whole.empty() && !all_digits(whole)) return std::nullopt;
        if (!frac.empty() && !all_digits(frac)) return std::nullopt;
        mpz_class scale = 1;
        for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
        mpz_class w = whole.empty() ? mpz_class(0) : mpz_class(std::string(whole));
        mpz_class f = frac.empty() ? mpz_class(0) : mpz_class(std::string(frac));
        return finish(Rat(w * scale + f, scale));
    }

    if (!all_digits(text)) return std::nullopt;
    return finish(Rat(mpz_class(std::string(text))));
}

std::string format_rational(const Rat& value) {
    if (value.get_den() == 1) return value.get_num().get_str();
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

} // namespace psp
