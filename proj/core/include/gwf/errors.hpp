#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gwf {

// A documented precondition of an operation was violated by the caller.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The input is valid but outside the sizes an exact algorithm supports.
class UnsupportedSizeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A state-space exploration or dense allocation exceeded its configured cap.
class CapExceededError : public std::length_error {
 public:
  CapExceededError(const std::string& what, std::size_t frontier_size)
      : std::length_error(what), frontier_size_(frontier_size) {}

  std::size_t frontier_size() const noexcept { return frontier_size_; }

 private:
  std::size_t frontier_size_;
};

// More than one closed communicating class was found.
class ReducibleChainError : public std::runtime_error {
 public:
  ReducibleChainError(const std::string& what,
                      std::vector<std::vector<std::string>> classes)
      : std::runtime_error(what), classes_(std::move(classes)) {}

  const std::vector<std::vector<std::string>>& recurrent_classes() const noexcept {
    return classes_;
  }

 private:
  std::vector<std::vector<std::string>> classes_;
};

}  // namespace gwf
