#pragma once

// Words over the free group F_d.
//
// Text form: lowercase 'a'..'z' are the generators g_1..g_26, uppercase
// letters their inverses and '1' the identity letter. The empty string is
// the empty word.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace permtrace {

/// One letter of a word. Stored in signed form: 0 is the identity letter,
/// +i is the generator g_i and -i its inverse. The numbering 0..2d used in
/// the literature (g_{d+i} = g_i^{-1}) is available through index()/from_index().
class Letter {
public:
    constexpr Letter() = default;

    static constexpr Letter identity() { return Letter(0); }
    static constexpr Letter generator(int i) { return Letter(i); }
    static constexpr Letter inverse_generator(int i) { return Letter(-i); }
    static constexpr Letter from_signed(int s) { return Letter(s); }
    static Letter from_index(int index, int rank);

    int index(int rank) const;

    constexpr int signed_value() const { return value_; }
    constexpr int generator_number() const { return value_ < 0 ? -value_ : value_; }
    constexpr bool is_identity() const { return value_ == 0; }
    constexpr bool is_inverse() const { return value_ < 0; }
    constexpr Letter inverse() const { return Letter(-value_); }

    char to_char() const;
    static Letter from_char(char c);

    friend constexpr auto operator<=>(Letter, Letter) = default;

private:
    constexpr explicit Letter(int v) : value_(static_cast<std::int8_t>(v)) {}
    std::int8_t value_ = 0;
};

/// Arbitrary finite word, identity letters allowed.
class Word {
public:
    Word() = default;
    Word(int rank, std::vector<Letter> letters);

    int rank() const { return rank_; }
    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    std::span<const Letter> letters() const { return letters_; }
    Letter operator[](std::size_t i) const { return letters_[i]; }

    /// Same word with all identity letters removed.
    Word strip_identity() const;
    Word concat(const Word& other) const;
    /// Letterwise inverse in reverse order.
    Word inverse() const;

    friend bool operator==(const Word&, const Word&) = default;

private:
    int rank_ = 1;
    std::vector<Letter> letters_;
};

/// Freely reduced word: no identity letters, no adjacent inverse pair.
/// Only constructible through reduce() and the group operations below.
class ReducedWord {
public:
    ReducedWord() = default;
    explicit ReducedWord(int rank) : rank_(rank) {}

    int rank() const { return rank_; }
    std::size_t size() const { return letters_.size(); }
    bool is_identity() const { return letters_.empty(); }
    std::span<const Letter> letters() const { return letters_; }
    Letter operator[](std::size_t i) const { return letters_[i]; }

    Word as_word() const { return Word(rank_, letters_); }

    /// Letters compare, rank does not: the same group element embeds in every F_d.
    friend bool operator==(const ReducedWord& a, const ReducedWord& b) { return a.letters_ == b.letters_; }
    friend auto operator<=>(const ReducedWord& a, const ReducedWord& b) { return a.letters_ <=> b.letters_; }

private:
    friend ReducedWord reduce(int rank, std::span<const Letter> letters);
    int rank_ = 1;
    std::vector<Letter> letters_;
};

struct CyclicDecomposition {
    ReducedWord conjugator;
    ReducedWord core;
};

struct PowerDecomposition {
    ReducedWord base;
    int exponent = 1;
};

/// Parse the text form. rank == 0 infers the rank from the largest generator used.
Word parse_word(std::string_view text, int rank = 0);
std::string to_string(const Word& w);
std::string to_string(const ReducedWord& w);

ReducedWord reduce(int rank, std::span<const Letter> letters);
ReducedWord reduce(const Word& w);
ReducedWord parse_reduced(std::string_view text, int rank = 0);

ReducedWord multiply(const ReducedWord& a, const ReducedWord& b);
ReducedWord inverse(const ReducedWord& w);
ReducedWord power(const ReducedWord& w, int k);

/// w = conjugator * core * conjugator^{-1} with core cyclically reduced and
/// the product reduced as written.
CyclicDecomposition cyclic_reduce(const ReducedWord& w);

/// w = base^exponent with base a non-power. Throws for the identity.
PowerDecomposition power_decompose(const ReducedWord& w);

/// Exponent of the unique non-power root of a nonempty reduced word given as
/// a raw letter span. Used by enumeration loops that avoid allocations.
int power_exponent(std::span<const Letter> reduced);

/// Number of divisors of k (k >= 1).
int divisor_count(int k);

/// True iff the walk read right to left reaches v for the first time at its
/// end: the full product equals v and no proper suffix g_{i_l}...g_{i_k},
/// l > 1, equals v.
bool is_first_visit(const Word& w, const ReducedWord& v);

/// Smallest representative of the cyclic word under rotation, inversion,
/// relabelling of generators and inversion of individual generators. Input
/// must be cyclically reduced. Two words with the same key have the same
/// expected trace in any model of i.i.d. uniform permutations.
std::string canonical_cyclic_key(std::span<const Letter> core);

struct ReducedWordHash {
    std::size_t operator()(const ReducedWord& w) const noexcept;
};

}  // namespace permtrace
