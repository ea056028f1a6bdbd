#pragma once

// Independent reference computations shared by the unit and acceptance
// tests. None of these call into the code paths they are used to check.

#include "permtrace/free_group.hpp"
#include "permtrace/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using permtrace::Letter;
using permtrace::Rational;
using permtrace::Word;

/// Letters g_1..g_d, their inverses and optionally the identity letter.
inline std::vector<Letter> alphabet(int d, bool with_identity) {
    std::vector<Letter> out;
    if (with_identity) out.push_back(Letter::identity());
    for (int i = 1; i <= d; ++i) {
        out.push_back(Letter::generator(i));
        out.push_back(Letter::inverse_generator(i));
    }
    return out;
}

/// Every word of exactly the given length over the alphabet.
inline std::vector<std::vector<Letter>> all_words(const std::vector<Letter>& alpha, int len) {
    std::vector<std::vector<Letter>> out{{}};
    for (int i = 0; i < len; ++i) {
        std::vector<std::vector<Letter>> next;
        for (const auto& w : out) {
            for (Letter l : alpha) {
                auto v = w;
                v.push_back(l);
                next.push_back(std::move(v));
            }
        }
        out = std::move(next);
    }
    return out;
}

/// Freely reduced words of exactly the given length (no identity letters).
inline std::vector<std::vector<Letter>> reduced_words(int d, int len) {
    std::vector<std::vector<Letter>> out{{}};
    const auto alpha = alphabet(d, false);
    for (int i = 0; i < len; ++i) {
        std::vector<std::vector<Letter>> next;
        for (const auto& w : out) {
            for (Letter l : alpha) {
                if (!w.empty() && w.back() == l.inverse()) continue;
                auto v = w;
                v.push_back(l);
                next.push_back(std::move(v));
            }
        }
        out = std::move(next);
    }
    return out;
}

/// Naive free reduction with repeated scans.
inline std::vector<Letter> naive_reduce(std::vector<Letter> w) {
    w.erase(std::remove_if(w.begin(), w.end(), [](Letter l) { return l.is_identity(); }), w.end());
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < w.size(); ++i) {
            if (w[i] == w[i + 1].inverse()) {
                w.erase(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(i) + 2);
                changed = true;
                break;
            }
        }
    }
    return w;
}

/// Average of (#fixed points of w(sigma) - 1) / N over all d-tuples of
/// permutations of [N], by direct enumeration.
inline Rational brute_force_trace(const std::vector<Letter>& w, int d, int N) {
    std::vector<int> base(static_cast<std::size_t>(N));
    std::iota(base.begin(), base.end(), 0);
    std::vector<std::vector<int>> perms;
    do {
        perms.push_back(base);
    } while (std::next_permutation(base.begin(), base.end()));
    const std::size_t P = perms.size();
    std::vector<std::vector<int>> inv(P, std::vector<int>(static_cast<std::size_t>(N)));
    for (std::size_t p = 0; p < P; ++p) {
        for (int k = 0; k < N; ++k) inv[p][static_cast<std::size_t>(perms[p][static_cast<std::size_t>(k)])] = k;
    }
    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    long total = 0, count = 0;
    while (true) {
        for (int v = 0; v < N; ++v) {
            int x = v;
            for (auto it = w.rbegin(); it != w.rend(); ++it) {
                if (it->is_identity()) continue;
                const auto g = static_cast<std::size_t>(it->generator_number() - 1);
                x = it->is_inverse() ? inv[idx[g]][static_cast<std::size_t>(x)] : perms[idx[g]][static_cast<std::size_t>(x)];
            }
            total += x == v;
        }
        ++count;
        std::size_t i = 0;
        while (i < idx.size() && ++idx[i] == P) idx[i++] = 0;
        if (i == idx.size()) break;
    }
    return (Rational(total) / count - 1) / N;
}

/// Closed walks of length p at the root of the 2d-regular tree, by a
/// distance-from-root recursion.
inline std::vector<long long> tree_closed_walks(int d, int pmax) {
    std::vector<long long> out;
    for (int p = 0; p <= pmax; ++p) {
        std::vector<long long> dist(static_cast<std::size_t>(p) + 2, 0);
        dist[0] = 1;
        for (int s = 0; s < p; ++s) {
            std::vector<long long> next(dist.size(), 0);
            for (std::size_t r = 0; r + 1 < dist.size(); ++r) {
                if (dist[r] == 0) continue;
                if (r == 0) {
                    next[1] += 2LL * d * dist[0];
                } else {
                    next[r - 1] += dist[r];
                    next[r + 1] += (2LL * d - 1) * dist[r];
                }
            }
            dist = std::move(next);
        }
        out.push_back(dist[0]);
    }
    return out;
}

inline int divisors(int k) {
    int c = 0;
    for (int i = 1; i <= k; ++i) c += k % i == 0;
    return c;
}

inline std::string text(const std::vector<Letter>& w) {
    std::string s;
    for (Letter l : w) s.push_back(l.to_char());
    return s;
}

}  // namespace oracle
