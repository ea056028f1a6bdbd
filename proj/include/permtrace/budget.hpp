#pragma once

#include <cstddef>

namespace permtrace {

/// Resource caps shared by the exact pipelines. Exceeding one raises
/// BudgetError naming the cap; nothing is ever silently truncated.
struct Budget {
    /// Term products performed while expanding h(P) into words.
    std::size_t max_expansion_products = 5'000'000;
    /// Longest cyclic word handed to quotient enumeration.
    int max_word_length = 12;
    /// Entries of a group vector in the limiting model.
    std::size_t max_group_vector = 20'000'000;
    /// Permutation tuples visited by the brute-force expectation oracle.
    std::size_t max_brute_force_tuples = 20'000'000;

    /// Defaults overridden by BUDGET_EXPANSION, BUDGET_WORD_LENGTH,
    /// BUDGET_GROUP_VECTOR and BUDGET_BRUTE_FORCE when set.
    static Budget from_env();
};

}  // namespace permtrace
