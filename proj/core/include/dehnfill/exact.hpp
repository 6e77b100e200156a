#pragma once

#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace dehnfill {

using BigInt = boost::multiprecision::cpp_int;
using IntMatrix = std::vector<std::vector<long long>>;

// rank over Q via fraction-free (Bareiss) elimination on exact integers
int exact_rank(const IntMatrix& m);

// lexicographically smallest maximal independent row set, greedy with exact
// elimination; if max_rows >= 0, stops after that many rows
std::vector<int> independent_rows(const IntMatrix& m, int max_rows = -1);

// exact integer matrix product a (p x q) * b (q x r)
std::vector<std::vector<BigInt>> exact_product(const IntMatrix& a, const IntMatrix& b);

}  // namespace dehnfill
