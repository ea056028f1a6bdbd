#pragma once

// Checks 1_{w first reaches v} against its matrix-element expansion in the
// left-regular representation, with Q = 1 - d_e d_e^* between the factors of
// the return amplitude:
//   <d_v, l(w) d_e> - sum_s <d_e, l(g_1) Q ... Q l(g_s) d_e> <d_v, l(g_{s+1} .. g_k) d_e>.

#include "oracles.hpp"
#include "permtrace/limit_model.hpp"

#include <string>
#include <vector>

namespace oracle {

struct IdentityCheck {
    long checked = 0;
    long mismatches = 0;
    std::string first_mismatch;
};

inline IdentityCheck first_visit_identity(int d, int kmax, int vmax) {
    using namespace permtrace;
    auto step = [&](Letter l, const GroupVector& x) { return apply(NCPolynomial::monomial(Word(d, {l})), x); };
    auto project = [&](const GroupVector& x) {
        GroupVector y(d);
        for (const auto& [g, amp] : x.entries()) {
            if (!g.is_identity()) y.add(g, 0, amp[0]);
        }
        return y;
    };
    std::vector<ReducedWord> targets;
    for (int len = 0; len <= vmax; ++len) {
        for (const auto& t : reduced_words(d, len)) targets.push_back(reduce(Word(d, t)));
    }
    const auto alpha = alphabet(d, true);
    const ReducedWord e(d);
    IdentityCheck out;
    for (int k = 1; k <= kmax; ++k) {
        for (const auto& letters : all_words(alpha, k)) {
            const auto K = static_cast<std::size_t>(k);
            std::vector<GroupVector> suffix(K + 1, GroupVector(d));
            suffix[K] = GroupVector::delta(d, 1, e);
            for (std::size_t s = K; s-- > 0;) suffix[s] = step(letters[s], suffix[s + 1]);
            std::vector<GaussianRational> returns(K);
            for (std::size_t s = 1; s < K; ++s) {
                GroupVector x = GroupVector::delta(d, 1, e);
                for (std::size_t t = s; t >= 1; --t) {
                    x = step(letters[t - 1], x);
                    if (t > 1) x = project(x);
                }
                returns[s] = x.at(e);
            }
            Word w(d, letters);
            for (const auto& v : targets) {
                GaussianRational rhs = suffix[0].at(v);
                for (std::size_t s = 1; s < K; ++s) rhs -= returns[s] * suffix[s].at(v);
                const long lhs = is_first_visit(w, v) ? 1 : 0;
                ++out.checked;
                if (!(rhs == GaussianRational(lhs))) {
                    if (out.mismatches++ == 0) out.first_mismatch = text(letters) + " -> " + to_string(v);
                }
            }
        }
    }
    return out;
}

}  // namespace oracle
