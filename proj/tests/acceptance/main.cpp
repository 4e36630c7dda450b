// One line per acceptance criterion. With no arguments every criterion and
// supporting check runs; `--only C01,C11` restricts the set.
#include <cstring>
#include <iostream>
#include <sstream>

#include "suite.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      std::stringstream ids(argv[++i]);
      for (std::string id; std::getline(ids, id, ',');) only.push_back(id);
    } else {
      std::cerr << "usage: " << argv[0] << " [--only ID[,ID...]]\n";
      return 2;
    }
  }
  const auto results = ptrotor::verify::run(ptrotor::verify::Level::Full, only, std::cout);
  std::size_t failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << results.size() - failed << "/" << results.size() << " checks passed\n";
  return failed == 0 ? 0 : 1;
}
