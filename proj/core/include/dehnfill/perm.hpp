#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace dehnfill {

// Permutation of {0,1,2,3}, used for face gluings.
struct Perm4 {
  std::array<int, 4> m{0, 1, 2, 3};

  int operator[](int i) const { return m[static_cast<size_t>(i)]; }

  bool operator==(const Perm4&) const = default;

  static Perm4 from_string(const std::string& s) {
    if (s.size() != 4) throw std::invalid_argument("permutation string must have 4 digits: " + s);
    Perm4 p;
    std::array<bool, 4> seen{};
    for (int i = 0; i < 4; ++i) {
      char c = s[static_cast<size_t>(i)];
      if (c < '0' || c > '3') throw std::invalid_argument("permutation digit out of range: " + s);
      int v = c - '0';
      if (seen[static_cast<size_t>(v)]) throw std::invalid_argument("repeated digit in permutation: " + s);
      seen[static_cast<size_t>(v)] = true;
      p.m[static_cast<size_t>(i)] = v;
    }
    return p;
  }

  std::string str() const {
    std::string s(4, '0');
    for (int i = 0; i < 4; ++i) s[static_cast<size_t>(i)] = static_cast<char>('0' + m[static_cast<size_t>(i)]);
    return s;
  }

  Perm4 inverse() const {
    Perm4 q;
    for (int i = 0; i < 4; ++i) q.m[static_cast<size_t>(m[static_cast<size_t>(i)])] = i;
    return q;
  }

  // true for odd (orientation-reversing) permutations
  bool odd() const {
    int inv = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (m[static_cast<size_t>(i)] > m[static_cast<size_t>(j)]) ++inv;
    return (inv & 1) != 0;
  }
};

// parity of an arbitrary 4-tuple that is a permutation of {0,1,2,3}; 0 even, 1 odd
inline int tuple_parity(int a, int b, int c, int d) {
  int v[4] = {a, b, c, d};
  int inv = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (v[i] > v[j]) ++inv;
  return inv & 1;
}

}  // namespace dehnfill
