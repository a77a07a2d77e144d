#include <cstdlib>
#include <iostream>
#include <string>

#include "lipset/acceptance.hpp"

int main(int argc, char** argv) {
  lipset::acceptance::Options opts;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--seed" && i + 1 < argc) {
      opts.seed = std::stoull(argv[++i]);
    } else if (a == "--only" && i + 1 < argc) {
      opts.only.push_back(std::stoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--seed N] [--only ID]...\n";
      return 2;
    }
  }
  bool ok = true;
  for (const auto& r : lipset::acceptance::run(opts)) {
    std::cout << lipset::acceptance::format_line(r) << std::endl;
    ok = ok && r.pass;
  }
  return ok ? 0 : 1;
}
