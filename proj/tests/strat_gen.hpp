#pragma once

#include <random>
#include <string>
#include <vector>

// Random strategy expressions in surface syntax, for the property suites.
namespace strew::testutil {

struct StratGen {
  std::mt19937 rng;
  std::vector<std::string> leaves;

  StratGen(uint32_t seed, std::vector<std::string> lv)
      : rng(seed), leaves(std::move(lv)) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  std::string gen(int depth) {
    if (depth == 0 || pick(4) == 0) return leaves[pick(leaves.size())];
    switch (pick(9)) {
      case 0: return "(" + gen(depth - 1) + " ; " + gen(depth - 1) + ")";
      case 1: return "(" + gen(depth - 1) + " | " + gen(depth - 1) + ")";
      case 2: return "(" + gen(depth - 1) + ") *";
      case 3:
        return "(" + gen(depth - 1) + " ? " + gen(depth - 1) + " : " +
               gen(depth - 1) + ")";
      case 4: return "(" + gen(depth - 1) + ") or-else (" + gen(depth - 1) + ")";
      case 5: return "not(" + gen(depth - 1) + ")";
      case 6: return "try(" + gen(depth - 1) + ")";
      case 7: return "(" + gen(depth - 1) + ") +";
      default: return "(" + gen(depth - 1) + ") !";
    }
  }
};

}  // namespace strew::testutil
