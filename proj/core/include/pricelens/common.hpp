/*
 * Copyright 2026 The Pricelens Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PRICELENS_COMMON_HPP_
#define PRICELENS_COMMON_HPP_

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace pricelens {

// Row-major so that a sample is a contiguous span.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

enum class Task { regression, classification };

std::string_view to_string(Task task);
Task task_from_string(std::string_view name);

inline std::span<const double> row_span(const Matrix& m, Eigen::Index row) {
  return {m.data() + row * m.cols(), static_cast<std::size_t>(m.cols())};
}

// Error hierarchy. Everything thrown by the library derives from Error so the
// CLI can map categories to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed files, invalid configuration, violated
// preconditions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Failures that happen while doing valid work (network, numerical blow-ups).
class RuntimeFailure : public Error {
 public:
  using Error::Error;
};

class TransportError : public RuntimeFailure {
 public:
  TransportError(const std::string& what, int status = 0)
      : RuntimeFailure(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

// Stable 64-bit mixing (splitmix64 finalizer). Used to derive per-unit seeds
// from a master seed so results never depend on scheduling.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n).
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
}

// Fisher-Yates on our own uniforms so the order is identical across standard
// library implementations.
template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[uniform_index(rng, i)]);
  }
}

// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is
// processed exactly once; callers write results into per-index slots.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

// Worker count used when a caller passes threads <= 0.
int default_threads();

// Lowercase hex SHA-256 of the given bytes.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::string& path);

std::string read_file(const std::string& path);
// Writes through a temporary file and rename, so readers never see a torn file.
void write_file_atomic(const std::string& path, std::string_view contents);

void log_warning(std::string_view message);
void log_info(std::string_view message);
// One of trace, debug, info, warn, error, critical, off.
void set_log_level(std::string_view level);

}  // namespace pricelens

#endif  // PRICELENS_COMMON_HPP_
