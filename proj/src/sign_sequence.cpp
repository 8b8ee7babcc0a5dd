/**
 * @file sign_sequence.cpp
 * @brief Reduction and comparison of sign sequences; shape naming
 */

#include "termshape/sign_sequence.hpp"

#include <charconv>

#include <array>
#include <cmath>
#include <stdexcept>

namespace termshape {

Sign sign_of(double v, double eps) noexcept {
    if (v > eps) return Sign::plus;
    if (v < -eps) return Sign::minus;
    return Sign::zero;
}

char to_char(Sign s) noexcept {
    switch (s) {
        case Sign::plus: return '+';
        case Sign::minus: return '-';
        default: return '0';
    }
}

Sign flip(Sign s) noexcept { return static_cast<Sign>(-static_cast<signed char>(s)); }

SignSeq::SignSeq(std::initializer_list<Sign> signs) : signs_(signs) {
    if (signs_.empty()) throw std::invalid_argument("sign sequence must be non-empty");
}

SignSeq::SignSeq(std::vector<Sign> signs) : signs_(std::move(signs)) {
    if (signs_.empty()) throw std::invalid_argument("sign sequence must be non-empty");
}

SignSeq SignSeq::parse(std::string_view text) {
    std::vector<Sign> out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '+': out.push_back(Sign::plus); break;
            case '-': out.push_back(Sign::minus); break;
            case '0': out.push_back(Sign::zero); break;
            case ' ': break;
            default:
                throw std::invalid_argument("invalid sign character '" + std::string(1, c) + "'");
        }
    }
    return SignSeq(std::move(out));
}

bool SignSeq::is_pure() const noexcept {
    for (std::size_t i = 0; i < signs_.size(); ++i) {
        if (signs_[i] == Sign::zero) return false;
        if (i > 0 && signs_[i] == signs_[i - 1]) return false;
    }
    return true;
}

std::size_t SignSeq::sign_changes() const noexcept {
    std::size_t n = 0;
    Sign last = Sign::zero;
    for (Sign s : signs_) {
        if (s == Sign::zero) continue;
        if (last != Sign::zero && s != last) ++n;
        last = s;
    }
    return n;
}

std::string SignSeq::str() const {
    if (signs_.empty()) return "0";
    std::string out;
    out.reserve(signs_.size());
    for (Sign s : signs_) out.push_back(to_char(s));
    return out;
}

SignSeq reduce(const SignSeq& seq) {
    std::vector<Sign> out;
    for (Sign s : seq.signs()) {
        if (s == Sign::zero) continue;
        if (out.empty() || out.back() != s) out.push_back(s);
    }
    if (out.empty()) return SignSeq::empty_pure();
    return SignSeq(std::move(out));
}

bool equivalent(const SignSeq& a, const SignSeq& b) { return reduce(a) == reduce(b); }

bool subsequence(const SignSeq& a, const SignSeq& b) {
    const SignSeq ra = reduce(a);
    const SignSeq rb = reduce(b);
    // Greedy matching is exact for subsequence tests.
    std::size_t j = 0;
    for (Sign s : ra.signs()) {
        while (j < rb.size() && rb[j] != s) ++j;
        if (j == rb.size()) return false;
        ++j;
    }
    return true;
}

bool head_subsequence(const SignSeq& a, const SignSeq& b) {
    const SignSeq ra = reduce(a);
    const SignSeq rb = reduce(b);
    if (ra.is_empty_pure() || rb.is_empty_pure()) return ra.is_empty_pure() && rb.is_empty_pure();
    return ra.front() == rb.front() && subsequence(ra, rb);
}

bool tail_subsequence(const SignSeq& a, const SignSeq& b) {
    const SignSeq ra = reduce(a);
    const SignSeq rb = reduce(b);
    if (ra.is_empty_pure() || rb.is_empty_pure()) return ra.is_empty_pure() && rb.is_empty_pure();
    return ra.back() == rb.back() && subsequence(ra, rb);
}

SignSeq sseq_of_samples(std::span<const double> values, double eps) {
    if (values.empty()) throw std::invalid_argument("sseq_of_samples: no values");
    if (!(eps > 0.0)) throw std::invalid_argument("sseq_of_samples: eps must be positive");
    std::vector<Sign> raw;
    raw.reserve(values.size());
    for (double v : values) raw.push_back(sign_of(v, eps));
    return reduce(SignSeq(std::move(raw)));
}

namespace {

using Kind = ShapeName::Kind;

constexpr std::array<Kind, 9> kNamed = {Kind::normal, Kind::inverse, Kind::humped,
                                        Kind::dipped, Kind::HD,      Kind::DH,
                                        Kind::HDH,    Kind::DHD,     Kind::HDHD};

constexpr std::array<const char*, 11> kNames = {"flat",  "normal", "inverse", "humped",
                                                "dipped", "HD",    "DH",      "HDH",
                                                "DHD",    "HDHD",  "other"};

SignSeq alternating(Sign first, std::size_t length) {
    std::vector<Sign> out;
    Sign s = first;
    for (std::size_t i = 0; i < length; ++i) {
        out.push_back(s);
        s = flip(s);
    }
    return SignSeq(std::move(out));
}

}  // namespace

std::span<const ShapeName::Kind> named_shapes() { return kNamed; }

std::string ShapeName::str() const {
    if (kind == Kind::other) {
        return "other(" + std::to_string(changes) + "," + to_char(first) + ")";
    }
    return kNames[static_cast<std::size_t>(kind)];
}

ShapeName ShapeName::parse(std::string_view name) {
    for (std::size_t i = 0; i + 1 < kNames.size(); ++i) {
        if (name == kNames[i]) return ShapeName::of(static_cast<Kind>(i));
    }
    // other(k,s) as printed by str().
    if (name.starts_with("other(") && name.size() >= 10 && name.ends_with(")")) {
        const std::string_view body = name.substr(6, name.size() - 7);
        const std::size_t comma = body.find(',');
        if (comma != std::string_view::npos && comma + 2 == body.size() &&
            (body.back() == '+' || body.back() == '-')) {
            std::size_t k = 0;
            const auto res = std::from_chars(body.data(), body.data() + comma, k);
            if (res.ec == std::errc{} && res.ptr == body.data() + comma) {
                const ShapeName s{Kind::other, k, body.back() == '+' ? Sign::plus : Sign::minus};
                // Only names that shape_of would actually produce.
                if (shape_of(s.pattern()) == s) return s;
            }
        }
    }
    throw std::invalid_argument("unknown shape name '" + std::string(name) + "'");
}

SignSeq ShapeName::pattern() const {
    switch (kind) {
        case Kind::flat: return SignSeq::empty_pure();
        case Kind::normal: return SignSeq{Sign::plus};
        case Kind::inverse: return SignSeq{Sign::minus};
        case Kind::humped: return alternating(Sign::plus, 2);
        case Kind::dipped: return alternating(Sign::minus, 2);
        case Kind::HD: return alternating(Sign::plus, 3);
        case Kind::DH: return alternating(Sign::minus, 3);
        case Kind::HDH: return alternating(Sign::plus, 4);
        case Kind::DHD: return alternating(Sign::minus, 4);
        case Kind::HDHD: return alternating(Sign::plus, 5);
        case Kind::other: return alternating(first, changes + 1);
    }
    return SignSeq::empty_pure();
}

std::size_t ShapeName::extrema_count() const {
    const SignSeq p = pattern();
    return p.is_empty_pure() ? 0 : p.size() - 1;
}

ShapeName shape_of(const SignSeq& derivative_sseq) {
    const SignSeq r = reduce(derivative_sseq);
    if (r.is_empty_pure()) return ShapeName::of(Kind::flat);
    const bool up = r.front() == Sign::plus;
    switch (r.size()) {
        case 1: return ShapeName::of(up ? Kind::normal : Kind::inverse);
        case 2: return ShapeName::of(up ? Kind::humped : Kind::dipped);
        case 3: return ShapeName::of(up ? Kind::HD : Kind::DH);
        case 4: return ShapeName::of(up ? Kind::HDH : Kind::DHD);
        case 5:
            if (up) return ShapeName::of(Kind::HDHD);
            break;
        default: break;
    }
    return ShapeName{Kind::other, r.size() - 1, r.front()};
}

}  // namespace termshape
