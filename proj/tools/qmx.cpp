#include <cstdio>

#include "qmx/version.hpp"

int main() {
  std::printf("qmx %s\n", qmx::kVersion);
  return 0;
}
