#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace predassign {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

/// Lanczos did not reach the requested residual; carries the best residuals seen.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> residuals)
      : Error(what), residuals_(std::move(residuals)) {}

  const std::vector<double>& residuals() const noexcept { return residuals_; }

 private:
  std::vector<double> residuals_;
};

/// A community produced by the subgraph clustering has no members.
class EmptyEstimatedCommunity : public Error {
 public:
  explicit EmptyEstimatedCommunity(std::size_t community)
      : Error("estimated community " + std::to_string(community) +
              " is empty; increase m or the k-means restarts"),
        community_(community) {}

  std::size_t community() const noexcept { return community_; }

 private:
  std::size_t community_;
};

/// An estimated community has no edges inside the subgraph.
class DisconnectedEstimatedCommunity : public Error {
 public:
  explicit DisconnectedEstimatedCommunity(std::size_t community)
      : Error("estimated community " + std::to_string(community) +
              " has no edges inside the subgraph"),
        community_(community) {}

  std::size_t community() const noexcept { return community_; }

 private:
  std::size_t community_;
};

}  // namespace predassign
