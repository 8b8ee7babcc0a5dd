#include "oracles.hpp"

#include "doctest.h"

#include <random>

using namespace termshape;

namespace {

SignSeq S(const char* s) { return SignSeq::parse(s); }

SignSeq random_seq(std::mt19937_64& rng, std::size_t max_len) {
    std::uniform_int_distribution<std::size_t> len(1, max_len);
    std::uniform_int_distribution<int> sg(-1, 1);
    std::vector<Sign> v(len(rng));
    for (Sign& s : v) s = static_cast<Sign>(sg(rng));
    return SignSeq(v);
}

// Counts of (+ to -) and (- to +) transitions, zeros skipped.
std::pair<int, int> transitions(const SignSeq& s) {
    int down = 0;
    int up = 0;
    Sign last = Sign::zero;
    for (Sign x : s.signs()) {
        if (x == Sign::zero) continue;
        if (last == Sign::plus && x == Sign::minus) ++down;
        if (last == Sign::minus && x == Sign::plus) ++up;
        last = x;
    }
    return {down, up};
}

// Every sequence over {+,-,0} of length len.
std::vector<SignSeq> all_sequences(std::size_t len) {
    std::vector<SignSeq> out;
    std::size_t total = 1;
    for (std::size_t i = 0; i < len; ++i) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
        std::vector<Sign> v;
        std::size_t c = code;
        for (std::size_t i = 0; i < len; ++i, c /= 3) v.push_back(static_cast<Sign>(int(c % 3) - 1));
        out.emplace_back(v);
    }
    return out;
}

}  // namespace

TEST_CASE("reduce") {
    CHECK(reduce(S("++--+")) == S("+-+"));
    CHECK(reduce(S("0-00-")) == S("-"));
    CHECK(reduce(S("+")) == S("+"));
    CHECK(reduce(S("000")).is_empty_pure());
    CHECK(reduce(S("000")).str() == "0");
}

TEST_CASE("equivalent") {
    CHECK(equivalent(S("++--+"), S("+-+++")));
    CHECK_FALSE(equivalent(S("+"), S("-")));
    CHECK(equivalent(S("0+"), S("+0")));
}

TEST_CASE("subsequence and head/tail") {
    CHECK(subsequence(S("--+++"), S("-+--")));
    CHECK(subsequence(S("-"), S("++-+")));
    CHECK_FALSE(subsequence(S("+-"), S("-+")));
    CHECK(head_subsequence(S("--+++"), S("-+--")));
    CHECK(tail_subsequence(S("+"), S("--+")));
    CHECK_FALSE(tail_subsequence(S("+"), S("+-")));
    CHECK_FALSE(head_subsequence(S("+"), S("-+")));
}

TEST_CASE("sseq_of_samples") {
    const std::vector<double> a{1.0, -0.5, 2.0};
    CHECK(sseq_of_samples(a, 1e-9) == S("+-+"));
    const std::vector<double> b{1e-12, -1.0};
    CHECK(sseq_of_samples(b, 1e-9) == S("-"));
    std::vector<double> c;
    for (int i = 0; i <= 200; ++i) {
        const double x = 2.0 * i / 200.0;
        c.push_back(x * x - 1.0);
    }
    CHECK(sseq_of_samples(c, 1e-9) == S("-+"));
}

TEST_CASE("shape names") {
    CHECK(shape_of(S("+-")).str() == "humped");
    CHECK(shape_of(S("-+")).str() == "dipped");
    CHECK(shape_of(S("+-+-")).str() == "HDH");
    CHECK(shape_of(S("+")).str() == "normal");
    CHECK(shape_of(S("-")).str() == "inverse");
    CHECK(shape_of(S("+-+")).str() == "HD");
    CHECK(shape_of(S("-+-")).str() == "DH");
    CHECK(shape_of(S("-+-+")).str() == "DHD");
    CHECK(shape_of(S("+-+-+")).str() == "HDHD");
    CHECK(shape_of(SignSeq::empty_pure()).str() == "flat");
    const ShapeName other = shape_of(S("-+-+-+"));
    CHECK(other.kind == ShapeName::Kind::other);
    CHECK(other.str() == "other(5,-)");
    for (ShapeName::Kind k : named_shapes()) {
        const ShapeName s = ShapeName::of(k);
        CHECK(ShapeName::parse(s.str()) == s);
        CHECK(shape_of(s.pattern()) == s);
        CHECK(s.extrema_count() + 1 == s.pattern().size());
    }
    CHECK(ShapeName::parse(other.str()) == other);
    CHECK_THROWS_AS(ShapeName::parse("wiggly"), std::invalid_argument);
}

TEST_CASE("parse rejects malformed input") {
    CHECK_THROWS_AS(SignSeq::parse(""), std::invalid_argument);
    CHECK_THROWS_AS(SignSeq::parse("+x"), std::invalid_argument);
}

TEST_CASE("reduce properties on random sequences") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 2000; ++it) {
        const SignSeq s = random_seq(rng, 12);
        const SignSeq r = reduce(s);
        CHECK(reduce(r) == r);
        CHECK(transitions(s) == transitions(r));
        if (!r.is_empty_pure()) CHECK(r.is_pure());
        CHECK(r.sign_changes() == s.sign_changes());
    }
}

TEST_CASE("equivalence relation") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 1000; ++it) {
        const SignSeq a = random_seq(rng, 5);
        const SignSeq b = random_seq(rng, 5);
        const SignSeq c = random_seq(rng, 5);
        CHECK(equivalent(a, a));
        CHECK(equivalent(a, b) == equivalent(b, a));
        if (equivalent(a, b) && equivalent(b, c)) CHECK(equivalent(a, c));
    }
}

TEST_CASE("subsequence matches brute force on short sequences") {
    std::vector<SignSeq> pool;
    for (std::size_t len = 1; len <= 4; ++len) {
        for (const SignSeq& s : all_sequences(len)) pool.push_back(s);
    }
    std::mt19937_64 rng(3);
    for (int it = 0; it < 3000; ++it) pool.push_back(random_seq(rng, 8));
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int it = 0; it < 20000; ++it) {
        const SignSeq& a = pool[pick(rng)];
        const SignSeq& b = pool[pick(rng)];
        const bool sub = subsequence(a, b);
        CHECK(sub == oracle::brute_subsequence(a, b));
        if (head_subsequence(a, b) || tail_subsequence(a, b)) CHECK(sub);
    }
}

TEST_CASE("subsequence is reflexive and transitive") {
    std::mt19937_64 rng(5);
    for (int it = 0; it < 3000; ++it) {
        const SignSeq a = random_seq(rng, 4);
        const SignSeq b = random_seq(rng, 6);
        const SignSeq c = random_seq(rng, 8);
        CHECK(subsequence(a, a));
        CHECK(head_subsequence(a, a));
        CHECK(tail_subsequence(a, a));
        if (subsequence(a, b) && subsequence(b, c)) CHECK(subsequence(a, c));
        if (head_subsequence(a, b) && head_subsequence(b, c)) CHECK(head_subsequence(a, c));
    }
}
