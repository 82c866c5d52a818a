#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace ontomas::test_support {

inline std::filesystem::path fixturePath(const std::string& relative) {
  return std::filesystem::path(ONTOMAS_FIXTURE_DIR) / relative;
}

inline std::string readFixture(const std::string& relative) {
  std::ifstream in(fixturePath(relative), std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace ontomas::test_support
