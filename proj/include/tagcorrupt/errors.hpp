#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tagcorrupt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownTag : public Error {
 public:
  explicit UnknownTag(const std::string& text) : Error("unknown error tag: '" + text + "'") {}
};

class ReservedTag : public Error {
 public:
  explicit ReservedTag(const std::string& what) : Error(what) {}
};

class InvalidDistribution : public Error {
 public:
  using Error::Error;
};

class EmptyCorpus : public Error {
 public:
  EmptyCorpus() : Error("empty corpus: no edits observed") {}
  explicit EmptyCorpus(const std::string& what) : Error(what) {}
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

// Offline-optimal quotas cannot be met with the available (sentence, tag) arcs.
class InfeasibleQuota : public Error {
 public:
  InfeasibleQuota(const std::string& what, std::vector<std::string> starved)
      : Error(what), starved_tags(std::move(starved)) {}
  std::vector<std::string> starved_tags;
};

class EmptySupport : public Error {
 public:
  using Error::Error;
};

class ScorerProtocolError : public Error {
 public:
  using Error::Error;
};

class MalformedLine : public Error {
 public:
  MalformedLine(std::size_t line, const std::string& reason)
      : Error("malformed line " + std::to_string(line) + ": " + reason), line_number(line) {}
  std::size_t line_number;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tagcorrupt
