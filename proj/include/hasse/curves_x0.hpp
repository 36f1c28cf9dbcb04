#pragma once

#include <cstdint>
#include <vector>

namespace hasse::x0 {

using i64 = std::int64_t;

/// Arithmetic invariants of X0(N) for squarefree N.
struct X0Invariants {
    i64 N;
    i64 genus;             // also the genus of every twist C(N, p)
    i64 nu2;               // elliptic points of order 2
    i64 nu3;               // elliptic points of order 3
    i64 nu_inf;            // cusps
    i64 wn_fixed;          // fixed points of w_N over Qbar
    i64 genus_plus;        // genus of X0+(N) = X0(N)/w_N
    i64 min_fixed_degree;  // least [Q(P):Q] over w_N-fixed P
};

// All operations throw NotSquarefree for non-squarefree N. The ones that need
// w_N reject N = 1 with InvalidArgument.

i64 x0_genus(i64 N);
i64 elliptic_points_order2(i64 N);
i64 elliptic_points_order3(i64 N);
i64 cusp_count(i64 N);

/// h(-4N) + [N = 3 mod 4] h(-N) + [N = 2] h(-4).
i64 wn_fixed_count(i64 N);

/// (2g + 2 - nu) / 4 with an integrality check.
i64 x0_plus_genus(i64 N);

/// h(Q(sqrt(-N))).
i64 min_fixed_degree(i64 N);

X0Invariants x0_invariants(i64 N);

/// Squarefree N in [2, bound] with genus(X0+(N)) <= 1, ascending.
std::vector<i64> low_genus_plus_levels(i64 bound);

/// Largest entry of low_genus_plus_levels(bound).
i64 largest_low_genus_plus(i64 bound);

}  // namespace hasse::x0
