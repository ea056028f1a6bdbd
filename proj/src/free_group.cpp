#include "permtrace/free_group.hpp"

#include "permtrace/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace permtrace {

Letter Letter::from_index(int index, int rank) {
    if (index < 0 || index > 2 * rank) {
        throw PreconditionError("letter index " + std::to_string(index) + " outside [0, " +
                                std::to_string(2 * rank) + "]");
    }
    if (index == 0) return identity();
    if (index <= rank) return generator(index);
    return inverse_generator(index - rank);
}

int Letter::index(int rank) const {
    if (value_ == 0) return 0;
    return value_ > 0 ? value_ : rank - value_;
}

char Letter::to_char() const {
    if (value_ == 0) return '1';
    if (value_ > 0) return static_cast<char>('a' + value_ - 1);
    return static_cast<char>('A' - value_ - 1);
}

Letter Letter::from_char(char c) {
    if (c == '1') return identity();
    if (c >= 'a' && c <= 'z') return generator(c - 'a' + 1);
    if (c >= 'A' && c <= 'Z') return inverse_generator(c - 'A' + 1);
    throw PreconditionError(std::string("invalid letter '") + c + "' (expected a-z, A-Z or 1)");
}

Word::Word(int rank, std::vector<Letter> letters) : rank_(rank), letters_(std::move(letters)) {
    if (rank_ < 1) throw PreconditionError("rank must be positive");
    for (Letter l : letters_) {
        if (l.generator_number() > rank_) {
            throw PreconditionError("letter '" + std::string(1, l.to_char()) + "' exceeds rank " +
                                    std::to_string(rank_));
        }
    }
}

Word Word::strip_identity() const {
    std::vector<Letter> out;
    out.reserve(letters_.size());
    std::copy_if(letters_.begin(), letters_.end(), std::back_inserter(out),
                 [](Letter l) { return !l.is_identity(); });
    return Word(rank_, std::move(out));
}

Word Word::concat(const Word& other) const {
    std::vector<Letter> out(letters_);
    out.insert(out.end(), other.letters_.begin(), other.letters_.end());
    return Word(std::max(rank_, other.rank_), std::move(out));
}

Word Word::inverse() const {
    std::vector<Letter> out;
    out.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.push_back(it->inverse());
    return Word(rank_, std::move(out));
}

Word parse_word(std::string_view text, int rank) {
    std::vector<Letter> letters;
    letters.reserve(text.size());
    int max_gen = 0;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        Letter l = Letter::from_char(c);
        max_gen = std::max(max_gen, l.generator_number());
        letters.push_back(l);
    }
    if (rank == 0) rank = std::max(1, max_gen);
    return Word(rank, std::move(letters));
}

namespace {

std::string letters_to_string(std::span<const Letter> letters) {
    std::string s;
    s.reserve(letters.size());
    for (Letter l : letters) s.push_back(l.to_char());
    return s;
}

}  // namespace

std::string to_string(const Word& w) { return letters_to_string(w.letters()); }

std::string to_string(const ReducedWord& w) {
    if (w.is_identity()) return "1";
    return letters_to_string(w.letters());
}

ReducedWord reduce(int rank, std::span<const Letter> letters) {
    ReducedWord out(rank);
    auto& stack = out.letters_;
    stack.reserve(letters.size());
    for (Letter l : letters) {
        if (l.is_identity()) continue;
        if (!stack.empty() && stack.back() == l.inverse()) {
            stack.pop_back();
        } else {
            stack.push_back(l);
        }
    }
    return out;
}

ReducedWord reduce(const Word& w) { return reduce(w.rank(), w.letters()); }

ReducedWord parse_reduced(std::string_view text, int rank) { return reduce(parse_word(text, rank)); }

ReducedWord multiply(const ReducedWord& a, const ReducedWord& b) {
    std::vector<Letter> all(a.letters().begin(), a.letters().end());
    all.insert(all.end(), b.letters().begin(), b.letters().end());
    return reduce(std::max(a.rank(), b.rank()), all);
}

ReducedWord inverse(const ReducedWord& w) { return reduce(w.as_word().inverse()); }

ReducedWord power(const ReducedWord& w, int k) {
    if (k < 0) return power(inverse(w), -k);
    ReducedWord out(w.rank());
    for (int i = 0; i < k; ++i) out = multiply(out, w);
    return out;
}

namespace {

// Number of letters peeled from each end to reach the cyclically reduced core.
std::size_t conjugator_length(std::span<const Letter> w) {
    std::size_t c = 0;
    std::size_t n = w.size();
    while (n >= 2 * c + 2 && w[c] == w[n - 1 - c].inverse()) ++c;
    return c;
}

std::size_t smallest_period(std::span<const Letter> core) {
    const std::size_t n = core.size();
    for (std::size_t p = 1; p < n; ++p) {
        if (n % p != 0) continue;
        bool ok = true;
        for (std::size_t i = p; i < n && ok; ++i) ok = core[i] == core[i - p];
        if (ok) return p;
    }
    return n;
}

}  // namespace

CyclicDecomposition cyclic_reduce(const ReducedWord& w) {
    auto letters = w.letters();
    std::size_t c = conjugator_length(letters);
    return {reduce(w.rank(), letters.subspan(0, c)), reduce(w.rank(), letters.subspan(c, letters.size() - 2 * c))};
}

int power_exponent(std::span<const Letter> reduced) {
    if (reduced.empty()) throw PreconditionError("identity has no power decomposition");
    std::size_t c = conjugator_length(reduced);
    auto core = reduced.subspan(c, reduced.size() - 2 * c);
    return static_cast<int>(core.size() / smallest_period(core));
}

PowerDecomposition power_decompose(const ReducedWord& w) {
    if (w.is_identity()) throw PreconditionError("identity has no power decomposition");
    auto [conj, core] = cyclic_reduce(w);
    std::size_t period = smallest_period(core.letters());
    ReducedWord root = reduce(w.rank(), core.letters().subspan(0, period));
    ReducedWord base = multiply(multiply(conj, root), inverse(conj));
    return {base, static_cast<int>(core.size() / period)};
}

int divisor_count(int k) {
    if (k < 1) throw PreconditionError("divisor_count requires k >= 1");
    int count = 0;
    for (int i = 1; i * i <= k; ++i) {
        if (k % i == 0) count += (i * i == k) ? 1 : 2;
    }
    return count;
}

bool is_first_visit(const Word& w, const ReducedWord& v) {
    // Suffix products are kept reversed so prepending a letter is a push/pop at the back.
    std::vector<Letter> suffix_rev;
    std::vector<Letter> target_rev(v.letters().rbegin(), v.letters().rend());
    auto letters = w.letters();
    const std::size_t k = letters.size();
    for (std::size_t pos = k; pos-- > 0;) {
        Letter l = letters[pos];
        if (!l.is_identity()) {
            if (!suffix_rev.empty() && suffix_rev.back() == l.inverse()) {
                suffix_rev.pop_back();
            } else {
                suffix_rev.push_back(l);
            }
        }
        bool hit = suffix_rev == target_rev;
        if (pos == 0) return hit;
        if (hit) return false;
    }
    // Empty word: the walk never leaves e and has no proper suffix.
    return v.is_identity();
}

std::string canonical_cyclic_key(std::span<const Letter> core) {
    const std::size_t q = core.size();
    if (q == 0) return {};
    std::string best;
    std::string cand(q, '\0');
    std::array<int, 64> relabel{};
    for (int dir = 0; dir < 2; ++dir) {
        for (std::size_t r = 0; r < q; ++r) {
            relabel.fill(0);
            int next = 1;
            for (std::size_t i = 0; i < q; ++i) {
                Letter l = dir == 0 ? core[(r + i) % q] : core[(r + q - i) % q].inverse();
                int g = l.generator_number();
                int sign = l.is_inverse() ? -1 : 1;
                if (relabel[g] == 0) relabel[g] = sign * next++;
                int mapped = sign * relabel[g];
                cand[i] = static_cast<char>(64 + mapped);
            }
            if (best.empty() || cand < best) best = cand;
        }
    }
    return best;
}

std::size_t ReducedWordHash::operator()(const ReducedWord& w) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Letter l : w.letters()) {
        h ^= static_cast<std::size_t>(static_cast<unsigned char>(l.signed_value()));
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace permtrace
