#include "confassist/ids.hpp"

#include <cstdio>
#include <random>

namespace confassist {

std::string random_token(std::size_t bytes) {
  static thread_local std::random_device device;
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes * 2);
  std::uniform_int_distribution<unsigned> dist(0, 255);
  for (std::size_t i = 0; i < bytes; ++i) {
    const unsigned b = dist(device);
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0xF]);
  }
  return out;
}

IdGenerator random_ids(std::string prefix, std::size_t bytes) {
  return [prefix = std::move(prefix), bytes] { return prefix + random_token(bytes); };
}

IdGenerator sequential_ids(std::string prefix) {
  auto counter = std::make_shared<std::atomic<unsigned long>>(0);
  return [prefix = std::move(prefix), counter] {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%06lu", ++*counter);
    return prefix + buf;
  };
}

}  // namespace confassist
