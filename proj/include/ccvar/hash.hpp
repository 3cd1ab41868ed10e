#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>
#include <string>

namespace ccvar {

inline std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t hash_matrix(const Eigen::MatrixXcd& m, std::uint64_t h = 0xcbf29ce484222325ULL) {
  return fnv1a(m.data(), sizeof(std::complex<double>) * static_cast<std::size_t>(m.size()), h);
}

inline std::uint64_t hash_string_bytes(const std::string& s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  return fnv1a(s.data(), s.size(), h);
}

}  // namespace ccvar
