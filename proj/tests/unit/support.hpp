#pragma once

#include "regop/core.hpp"

#include <filesystem>
#include <string>
#include <unistd.h>

namespace regop::testing {

inline Matrix mat(std::initializer_list<std::initializer_list<Complex>> rows) {
  Matrix a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (Complex v : r) a(i, j++) = v;
    ++i;
  }
  return a;
}

// Scratch directory removed on scope exit.
struct TempDir {
  std::filesystem::path path;
  TempDir() {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("regop-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace regop::testing
