#include <cstdio>

int main() {
  std::fprintf(stderr, "strew: command interface not wired up yet\n");
  return 1;
}
