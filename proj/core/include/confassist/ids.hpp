#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <string>

namespace confassist {

using IdGenerator = std::function<std::string()>;

// Hex string of `bytes` random bytes from the OS entropy source.
std::string random_token(std::size_t bytes = 16);

IdGenerator random_ids(std::string prefix, std::size_t bytes = 16);

// "<prefix>000001", "<prefix>000002", ...; for reproducible transcripts.
IdGenerator sequential_ids(std::string prefix);

}  // namespace confassist
