#include "permtrace/budget.hpp"

#include "permtrace/errors.hpp"

#include <cstdlib>
#include <string>

namespace permtrace {

namespace {

template <class T>
void override_from(const char* name, T& field) {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') return;
    try {
        std::size_t used = 0;
        long long parsed = std::stoll(v, &used);
        if (used != std::string(v).size() || parsed <= 0) throw std::invalid_argument(name);
        field = static_cast<T>(parsed);
    } catch (const std::exception&) {
        throw PreconditionError(std::string(name) + " must be a positive integer, got '" + v + "'");
    }
}

}  // namespace

Budget Budget::from_env() {
    Budget b;
    override_from("BUDGET_EXPANSION", b.max_expansion_products);
    override_from("BUDGET_WORD_LENGTH", b.max_word_length);
    override_from("BUDGET_GROUP_VECTOR", b.max_group_vector);
    override_from("BUDGET_BRUTE_FORCE", b.max_brute_force_tuples);
    return b;
}

}  // namespace permtrace
