/**
 * @file sign_sequence.hpp
 * @brief Sign sequences and the term-structure shape names derived from them
 */

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace termshape {

enum class Sign : signed char { minus = -1, zero = 0, plus = 1 };

/// Sign of a real number; |v| <= eps maps to zero.
Sign sign_of(double v, double eps = 0.0) noexcept;

char to_char(Sign s) noexcept;
Sign flip(Sign s) noexcept;

/// Finite sequence over {+, -, 0}.
///
/// User-built sequences are non-empty. The only empty sequence is the
/// "empty pure" marker returned by reduce() when every entry is zero; it
/// carries no sign information and stands for an identically-zero function.
class SignSeq {
public:
    SignSeq(std::initializer_list<Sign> signs);
    explicit SignSeq(std::vector<Sign> signs);

    /// Parses the compact form, e.g. "+-0+". The string "0" parses to a
    /// single zero, which reduces to the empty-pure marker.
    static SignSeq parse(std::string_view text);
    static SignSeq empty_pure() { return SignSeq(); }

    bool is_empty_pure() const noexcept { return signs_.empty(); }
    std::size_t size() const noexcept { return signs_.size(); }
    Sign operator[](std::size_t i) const { return signs_[i]; }
    Sign front() const { return signs_.front(); }
    Sign back() const { return signs_.back(); }
    std::span<const Sign> signs() const noexcept { return signs_; }

    /// True when there are no zeros and consecutive signs alternate.
    bool is_pure() const noexcept;

    /// Number of strong sign changes (zeros ignored).
    std::size_t sign_changes() const noexcept;

    /// Compact form over {+,-,0}. The empty-pure marker prints as "0".
    std::string str() const;

    bool operator==(const SignSeq&) const = default;

private:
    SignSeq() = default;
    std::vector<Sign> signs_;
};

/// Drops zeros, then collapses runs of equal signs.
SignSeq reduce(const SignSeq& seq);

bool equivalent(const SignSeq& a, const SignSeq& b);

/// reduce(a) is an order-preserving subsequence of reduce(b).
bool subsequence(const SignSeq& a, const SignSeq& b);

/// Subsequence that also keeps the first (head) or last (tail) sign.
/// An empty-pure `a` is a head/tail of `b` only when `b` is empty-pure too.
bool head_subsequence(const SignSeq& a, const SignSeq& b);
bool tail_subsequence(const SignSeq& a, const SignSeq& b);

/// Thresholds each value at eps and reduces the result.
SignSeq sseq_of_samples(std::span<const double> values, double eps);

/// Shape of a curve, named after the sign sequence of its derivative.
struct ShapeName {
    enum class Kind { flat, normal, inverse, humped, dipped, HD, DH, HDH, DHD, HDHD, other };

    Kind kind = Kind::flat;
    // Only meaningful for `other`.
    std::size_t changes = 0;
    Sign first = Sign::zero;

    static ShapeName of(Kind k) { return ShapeName{k, 0, Sign::zero}; }

    /// "humped", "HDH", ...; patterns beyond HDHD print as e.g. "other(5,+)".
    std::string str() const;
    static ShapeName parse(std::string_view name);

    /// Reduced derivative sign sequence of the shape (empty-pure for flat).
    SignSeq pattern() const;
    std::size_t extrema_count() const;

    bool operator==(const ShapeName&) const = default;
    auto operator<=>(const ShapeName&) const = default;
};

ShapeName shape_of(const SignSeq& derivative_sseq);

/// The nine named non-flat shapes, ordered by extrema count.
std::span<const ShapeName::Kind> named_shapes();

}  // namespace termshape
